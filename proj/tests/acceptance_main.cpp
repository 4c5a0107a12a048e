// Acceptance suite: runs every verification criterion at its stated
// tolerance and prints one line per criterion.  Exits nonzero when any
// check fails.

#include <cstdio>
#include <cstdlib>
#include <cstring>

#include "ringres/verification.hpp"

int main(int argc, char** argv) {
    ringres::VerificationOptions opt;
    for (int i = 1; i < argc; ++i) {
        if (std::strcmp(argv[i], "--steps") == 0 && i + 1 < argc)
            opt.scan_steps = std::atoi(argv[++i]);
        if (std::strcmp(argv[i], "--grid") == 0 && i + 1 < argc)
            opt.scan_grid = std::atoi(argv[++i]);
    }
    const ringres::VerificationReport report = ringres::run_verification(opt);

    bool all_pass = true;
    for (int crit = 1; crit <= 10; ++crit) {
        int pass = 0, total = 0;
        for (const auto& c : report.checks) {
            if (c.criterion != crit) continue;
            ++total;
            if (c.pass) ++pass;
        }
        std::printf("criterion %2d: %s (%d/%d checks)\n", crit, pass == total ? "PASS" : "FAIL",
                    pass, total);
        for (const auto& c : report.checks)
            if (c.criterion == crit && !c.pass) {
                std::printf("   FAIL %s%s%s\n", c.label.c_str(), c.detail.empty() ? "" : ": ",
                            c.detail.c_str());
                all_pass = false;
            }
    }
    return all_pass ? 0 : 1;
}
