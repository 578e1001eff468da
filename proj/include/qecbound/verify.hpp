#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace qecbound {

struct CheckResult {
    int id = 0;
    std::string suite;
    std::string name;
    bool passed = false;
    std::string detail;
    double seconds = 0.0;
};

struct VerifyOptions {
    // Empty runs every suite.
    std::string only;
    // Test hook: shifts the reference dephasing formula so its check must fail.
    bool perturb_closed_form = false;
};

// Suites: entropy, baseline, region, sweep, chaos, channels.
const std::vector<std::string> &verify_suites();

// log2(1 + 2 sqrt((p/2)(1 - p/2))) - 1.
double dephasing_hmax_closed_form(double p);

// Runs the acceptance checks, printing one PASS/FAIL line per check to `out` as it goes.
std::vector<CheckResult> run_verify(const VerifyOptions &opts, std::ostream &out);

}  // namespace qecbound
