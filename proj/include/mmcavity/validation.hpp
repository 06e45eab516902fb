#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "mmcavity/couplings.hpp"
#include "mmcavity/geometry.hpp"

namespace mmcavity {

struct CriterionResult {
    int index = 0;
    std::string name;
    bool pass = false;
    bool skipped = false;
    std::string detail;         ///< human-readable summary or skip reason
    double seconds = 0.0;
    std::vector<ValidationCheck> checks;
};

struct SuiteReport {
    std::vector<CriterionResult> criteria;
    double total_seconds = 0.0;
    bool all_pass() const;
};

struct SuiteOptions {
    CrosscheckTolerances tolerances{};
    double root_identity_rel = 1e-9;
    double q_parity_tol = 1e-10;
    double equivalence_tol = 1e-10;
    double degenerate_window_tol = 2e-2;
    double symmetry_tol = 1e-10;
    double asymmetry_floor = 1e-4;
    double period_rel_tol = 5e-2;
    double bcom_activation_floor = 1e-4;
    int q_parity_grid = 21;
    int equivalence_trials = 100;
    unsigned equivalence_seed = 20260810;
    int sweep_points = 401;
};

/// Runs the full desk-scale validation suite against the given geometry.
/// With R = 1 only the analytic degenerate-limit checks run; everything else
/// is reported as skipped with a reason.
SuiteReport run_validation_suite(const CavityGeometry& geometry,
                                 const SuiteOptions& opts = {});

/// One "[PASS]/[FAIL] criterion k: ..." line per criterion.
void print_summary(const SuiteReport& report, std::ostream& os);

}  // namespace mmcavity
