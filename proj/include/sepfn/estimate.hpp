#pragma once

// EstimateSummary: a numeric estimate with its statistical error, the exact
// value it is conjectured to equal (when one is on record), and enough
// provenance metadata to reproduce the run.

#include <cmath>
#include <string>

#include <json.hpp>

namespace sepfn {

struct EstimateSummary {
    std::string label;
    double value = 0.0;
    double std_error = 0.0;
    long long n_samples = 0;
    long long n_feasible = 0;
    std::string conjecture;                  // human-readable exact form, "" if none
    double conjecture_value = std::nan("");  // numeric value of the conjecture
    bool flagged = false;                    // insufficient data or failed precondition
    std::string note;

    nlohmann::json to_json() const {
        nlohmann::json j;
        j["label"] = label;
        j["value"] = value;
        j["std_error"] = std_error;
        j["n_samples"] = n_samples;
        j["n_feasible"] = n_feasible;
        if (!conjecture.empty()) {
            j["conjecture"] = conjecture;
            j["conjecture_value"] = conjecture_value;
        }
        j["flagged"] = flagged;
        if (!note.empty()) j["note"] = note;
        return j;
    }
};

}  // namespace sepfn
