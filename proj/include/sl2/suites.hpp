// Verification suites run by the sl2check command line tool.
#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace sl2 {

struct SuiteConfig {
    std::string suite = "all";
    std::uint64_t seed = 1;
    double tol_scale = 1.0; // multiplies every tolerance
    int grid = 257;         // odd grid resolution for the 2-D suites
    std::size_t samples = 1000;
};

struct CheckResult {
    std::string suite;
    std::string name;
    std::string tag;      // the identity or estimate being checked
    double measured = 0.0;
    double tolerance = 0.0;
    std::string relation; // how measured compares to tolerance: "<", "<=" or ">"
    bool hard = true;     // soft checks are reported but never fail the run
    bool pass = false;
};

struct SuiteReport {
    SuiteConfig config;
    std::vector<CheckResult> checks;
    std::size_t hard_failures() const;
    std::size_t soft_failures() const;
};

// matrix, skeleton, flow, foliation, homotopy, flatcalc, smoothing, schedule.
const std::vector<std::string>& suite_names();

// Throws std::invalid_argument for an unknown suite or an invalid config.
SuiteReport run_suite(const SuiteConfig& config);

// Versioned ("schema": 1) and deterministic: identical configs give identical bytes.
std::string to_json(const SuiteReport& report);
std::string to_csv(const SuiteReport& report);

} // namespace sl2
