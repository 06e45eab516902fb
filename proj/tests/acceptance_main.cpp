// Acceptance suite: runs every validation criterion at its contractual
// tolerance against the default two-membrane geometry (R = 0.5, L = c = 1)
// and prints one pass/fail line per criterion.  Also enforces the per-
// criterion runtime budgets.

#include <iostream>
#include <map>

#include "mmcavity/validation.hpp"

int main() {
    using namespace mmcavity;

    const CavityGeometry geometry = CavityGeometry::make(2, 0.5);
    const SuiteReport report = run_validation_suite(geometry);
    print_summary(report, std::cout);

    // runtime budgets (seconds) for the timed criteria, whole suite < 60
    const std::map<int, double> budgets{{1, 1.0}, {2, 5.0},  {3, 5.0}, {4, 30.0},
                                        {6, 10.0}, {8, 10.0}};
    bool ok = report.all_pass();
    for (const auto& c : report.criteria) {
        const auto it = budgets.find(c.index);
        if (it != budgets.end() && c.seconds > it->second) {
            std::cout << "[FAIL] criterion " << c.index << " exceeded its runtime budget ("
                      << c.seconds << " s > " << it->second << " s)\n";
            ok = false;
        }
    }
    if (report.total_seconds > 60.0) {
        std::cout << "[FAIL] suite exceeded the 60 s budget\n";
        ok = false;
    }
    return ok ? 0 : 1;
}
