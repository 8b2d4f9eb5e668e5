#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace elreg::selftest {

struct CheckResult {
    std::string name;
    bool passed = false;
    std::string detail;
};

// Acceptance-grade invariant suites, parameterized so the CLI selftest can
// run them at desk scale and the acceptance harness at the specified one.
std::vector<CheckResult> algebraic_identity_suite(int n_modes, int seeds);
std::vector<CheckResult> gradient_check(int n_modes);
std::vector<CheckResult> coercivity_check(int n_modes, int samples);
std::vector<CheckResult> io_roundtrip_checks(const std::string& tmpdir);

// prints one line per check; returns true when everything passed
bool run_all(std::ostream& os, const std::string& tmpdir);

}  // namespace elreg::selftest
