#pragma once

#include "bigint.hpp"

#include <string>
#include <vector>

namespace vlcm {

// Bundled elliptic-curve instances; the primes have no special form and span
// 204..384 bits. The same data ships as data/instances.json.
struct Instance {
    std::string name;
    unsigned bits = 0;
    BigUint prime;
};

const std::vector<Instance>& builtin_instances();
const Instance& find_instance(const std::string& name);

// Parses the data-file format {"instances":[{name,bits,prime_hex},...]}.
std::vector<Instance> load_instances_json(const std::string& json_text);

}  // namespace vlcm
