#pragma once

#include <string>
#include <vector>

#include "mmcavity/characteristic.hpp"
#include "mmcavity/geometry.hpp"

namespace mmcavity {

/// Local expansion coefficients of one optical branch about an operating
/// point (q0, Q0):
///
///   omega(q, Q) = delta + b_rel (q - q0) + b_com (Q - Q0)
///               + m_rel (q - q0)^2 + m_com (Q - Q0)^2
///               + p_cross (q - q0)(Q - Q0) + ...
///
/// The quadratic entries are the literal coefficients of the squared terms,
/// i.e. one half of the plain second derivatives; p_cross is the full mixed
/// second derivative.
struct CouplingCoefficients {
    double q0 = 2.0;
    double Q0 = 0.0;
    ModeLabel label{1, 1};
    double delta = 0.0;    ///< frequency
    double b_rel = 0.0;    ///< frequency / length
    double b_com = 0.0;    ///< frequency / length
    double m_rel = 0.0;    ///< frequency / length^2
    double m_com = 0.0;    ///< frequency / length^2
    double p_cross = 0.0;  ///< frequency / length^2

    double theta_ni = 0.0;  ///< 2 delta L / c
    double xi_ni = 0.0;     ///< theta_ni / (2L)^2
    double round_trip_time = 0.0;  ///< tau = 4L / c
};

/// Closed-form multiplet frequencies at the operating point q0 = 2L, Q0 = 0,
/// for the N = 2 triplet (i = 1, 2, 3):
///
///   delta_{n,1} = n pi c / 2L
///   delta_{n,2} = (c/2L) [ n pi    + asin(sqrt(3 + sin^2 theta)/2) - theta ]
///   delta_{n,3} = (c/2L) [(n+1) pi - asin(sqrt(3 + sin^2 theta)/2) - theta ]
///
/// Throws DomainError for i outside 1..3 or N != 2.
double delta_closed_form(int n, int i, const CavityGeometry& geom);

/// Closed-form linear coefficient of branch (n, i) in the relative coordinate
/// at q0 = 2L, Q0 = 0, oriented along the membrane separation (see
/// CollectiveCoordinates).  b_closed_form(n, 1, ...) vanishes identically.
/// Throws SingularPointError when the denominator vanishes.
double b_closed_form(int n, int i, const CavityGeometry& geom);

/// Closed-form quadratic coefficient of branch (n, 1):
///   m_{n,1} = -(1/6) tau xi_{n,1}^2 tan(theta),  tau = 4L/c.
/// Throws DomainError beyond R = 1 - 1e-9 where tan(theta) diverges.
double m1_closed_form(int n, const CavityGeometry& geom);

struct ExtractOptions {
    double step = 1e-4;       ///< stencil step h, in units of L
    bool richardson = true;   ///< combine steps h and h/2
};

/// Extracts all expansion coefficients of branch (n, i) about (q0, Q0) by
/// centered finite differences of the node-count-tracked branch, with
/// Richardson extrapolation.  Throws StencilError when the h and h/2 results
/// are inconsistent (a feature inside the stencil the step cannot resolve).
CouplingCoefficients extract_couplings_numeric(const CavityGeometry& geom, int n, int i,
                                               double q0, double Q0,
                                               const ExtractOptions& opts = {});

/// Independent route for the same coefficients: full 2-D quadratic
/// least-squares fit of omega over a 5x5 stencil.  Used as a convention
/// self-test against the finite differences.
CouplingCoefficients refit_quadratic_lsq(const CavityGeometry& geom, int n, int i,
                                         double q0, double Q0, double step = 1e-4);

struct ValidationCheck {
    std::string name;
    double numeric = 0.0;
    double reference = 0.0;
    double abs_dev = 0.0;
    double rel_dev = 0.0;
    double tolerance = 0.0;
    bool relative = true;  ///< tolerance applies to rel_dev (else abs_dev)
    bool pass = false;
    std::string note;
};

struct ValidationReport {
    std::vector<ValidationCheck> checks;
    bool all_pass() const;
};

struct CrosscheckTolerances {
    double delta_rel = 1e-9;
    double b_rel = 1e-6;
    double b1_abs = 1e-8;
    double m1_rel = 1e-4;
    double bcom_abs = 1e-8;
    double pcross_abs = 1e-6;
};

/// Compares the numerically extracted coefficients of multiplet n against the
/// closed forms (delta_{n,1..3}, b_{n,1..3}, m_{n,1}) and the parity-forced
/// zeros (b_com, p_cross) at q0 = 2L, Q0 = 0.  N = 2 only.
ValidationReport crosscheck(const CavityGeometry& geom, int n,
                            const CrosscheckTolerances& tol = {});

enum class CollectiveMode { Relative, Com };

/// Single-photon coupling rates for one collective mode.  Effective masses
/// follow the two-body reduction at N = 2: m/2 for the relative mode, 2m for
/// the center of mass.
struct PhotonCouplingRates {
    double effective_mass;
    double x_zpf;       ///< sqrt(hbar / (2 m_eff omega_m))
    double linear;      ///< B x_zpf
    double quadratic;   ///< M x_zpf^2
};

PhotonCouplingRates single_photon_scales(const CouplingCoefficients& coeffs,
                                         const MechanicalParams& mech,
                                         CollectiveMode mode);

}  // namespace mmcavity
