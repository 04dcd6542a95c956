#include "vlcm/vlcm.h"

#include "runner.hpp"

#include <new>
#include <string>

struct vlcm_result {
    vlcm_status status = VLCM_OK;
    std::string message;
    std::string report_json;
};

namespace {

vlcm_status run(vlcm::Command cmd, const char* config_json, vlcm_result** out) {
    if (!out) return VLCM_ERR_CONFIG;
    auto* res = new (std::nothrow) vlcm_result;
    if (!res) return VLCM_ERR_OTHER;
    *out = res;
    try {
        if (!config_json) throw vlcm::ConfigError("configuration JSON is null");
        vlcm::Json doc;
        vlcm::RunConfig cfg;
        try {
            doc = vlcm::Json::parse(config_json);
            cfg = vlcm::parse_run_config(doc);
        } catch (const nlohmann::json::exception& e) {
            throw vlcm::ConfigError(e.what());
        }
        vlcm::RunResult rr = vlcm::run_command(cmd, cfg);
        res->status = rr.exit_code == 0   ? VLCM_OK
                      : rr.exit_code == 2 ? VLCM_ERR_VERIFY
                                          : VLCM_ERR_CONFIG;
        res->message = rr.message;
        res->report_json = rr.report.dump(2);
    } catch (const vlcm::ConfigError& e) {
        res->status = VLCM_ERR_CONFIG;
        res->message = std::string("configuration error: ") + e.what();
    } catch (const vlcm::VerifyError& e) {
        res->status = VLCM_ERR_VERIFY;
        res->message = std::string("verification failure: ") + e.what();
    } catch (const std::exception& e) {
        res->status = VLCM_ERR_OTHER;
        res->message = e.what();
    }
    return res->status;
}

}  // namespace

extern "C" {

vlcm_status vlcm_generate(const char* config_json, vlcm_result** out) {
    return run(vlcm::Command::Generate, config_json, out);
}

vlcm_status vlcm_sweep(const char* config_json, vlcm_result** out) {
    return run(vlcm::Command::Sweep, config_json, out);
}

vlcm_status vlcm_montgomery(const char* config_json, vlcm_result** out) {
    return run(vlcm::Command::Montgomery, config_json, out);
}

vlcm_status vlcm_verify(const char* config_json, vlcm_result** out) {
    return run(vlcm::Command::Verify, config_json, out);
}

vlcm_status vlcm_result_status(const vlcm_result* res) {
    return res ? res->status : VLCM_ERR_CONFIG;
}

const char* vlcm_result_message(const vlcm_result* res) {
    return res ? res->message.c_str() : "";
}

const char* vlcm_result_report_json(const vlcm_result* res) {
    return res ? res->report_json.c_str() : "";
}

void vlcm_result_free(vlcm_result* res) { delete res; }

const char* vlcm_version(void) { return "0.1.0"; }

}  // extern "C"
