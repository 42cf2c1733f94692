#pragma once

#include <cstdint>
#include <fstream>
#include <map>
#include <string>

#include <json.hpp>

namespace inls {

/// Structured record of a harness run. The serialized report is a pure
/// function of (flags, seed); wall-clock time is kept out of the JSON so
/// repeated runs are byte-identical, and printed separately instead.
struct ExperimentReport {
    std::string experiment;
    nlohmann::json params;
    nlohmann::json config;
    std::map<std::string, double> measurements;
    std::map<std::string, bool> verdicts;
    std::uint64_t seed = 0;
    std::int64_t runtime_ms = 0;

    bool all_pass() const {
        for (const auto& [k, v] : verdicts)
            if (!v) return false;
        return true;
    }

    nlohmann::json to_json() const {
        nlohmann::json j;
        j["experiment"] = experiment;
        j["params"] = params;
        j["config"] = config;
        j["measurements"] = measurements;
        j["verdicts"] = verdicts;
        j["seed"] = seed;
        return j;
    }

    void write(const std::string& path) const {
        std::ofstream out(path);
        out << to_json().dump(2) << "\n";
    }
};

}  // namespace inls
