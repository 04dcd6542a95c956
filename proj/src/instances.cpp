#include "instances.hpp"

#include <json.hpp>

namespace vlcm {

const std::vector<Instance>& builtin_instances() {
    static const std::vector<Instance> table = [] {
        std::vector<Instance> v;
        auto add = [&](const char* name, unsigned bits, const char* hex) {
            Instance inst;
            inst.name = name;
            inst.bits = bits;
            inst.prime = parse_hex(hex);
            if (bit_width(inst.prime) != bits)
                throw Error(std::string("instance ") + name + " has the wrong bit-width");
            v.push_back(std::move(inst));
        };
        add("anomalous", 204, "0xb0000000000000000000000953000000000000000000001f9d7");
        add("anssifrp", 256,
            "0xf1fd178c0b3ad58f10126de8ce42435b3961adbcabc8ca6de8fcf353d86e9c03");
        add("bn(2,254)", 254,
            "0x2523648240000001ba344d80000000086121000000000013a700000000000013");
        add("brainpool256", 256,
            "0xa9fb57dba1eea9bc3e660a909d838d726e3bf623d52620282013481d1f6e5377");
        add("brainpool348", 384,
            "0x8cb91e82a3386d280f5d6f7e50e641df152f7109ed5456b412b1da197fb71123acd3a729901d1a718"
            "74700133107ec53");
        return v;
    }();
    return table;
}

const Instance& find_instance(const std::string& name) {
    for (const Instance& inst : builtin_instances())
        if (inst.name == name) return inst;
    std::string known;
    for (const Instance& inst : builtin_instances()) known += " " + inst.name;
    throw ConfigError("unknown instance '" + name + "'; bundled instances:" + known);
}

std::vector<Instance> load_instances_json(const std::string& json_text) {
    nlohmann::json doc = nlohmann::json::parse(json_text);
    std::vector<Instance> out;
    for (const auto& e : doc.at("instances")) {
        Instance inst;
        inst.name = e.at("name").get<std::string>();
        inst.bits = e.at("bits").get<unsigned>();
        inst.prime = parse_hex(e.at("prime_hex").get<std::string>());
        if (bit_width(inst.prime) != inst.bits)
            throw ConfigError("instance " + inst.name + " prime does not match its bit-width");
        out.push_back(std::move(inst));
    }
    return out;
}

}  // namespace vlcm
