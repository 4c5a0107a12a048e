/**
 * End-to-end verification against the bundled benchmark values.  Used by
 * the acceptance test suite and by the reproduce-paper subcommand.
 */

#ifndef RINGRES_VERIFICATION_HPP
#define RINGRES_VERIFICATION_HPP

#include <string>
#include <vector>

namespace ringres {

struct CheckResult {
    int criterion = 0;
    std::string label;
    bool pass = false;
    std::string detail;
};

struct VerificationOptions {
    int scan_steps = 500;   // bifurcation e-grid points on (0, 0.5]
    int scan_grid = 64;     // off-axis search grid
    int threads = 0;        // 0: from RINGRES_THREADS, else hardware
};

struct VerificationReport {
    std::vector<CheckResult> checks;
    bool criterion_pass(int criterion) const;
    bool all_pass() const;
};

VerificationReport run_verification(const VerificationOptions& options = {});

}  // namespace ringres

#endif  // RINGRES_VERIFICATION_HPP
