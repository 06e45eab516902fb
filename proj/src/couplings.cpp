#include "mmcavity/couplings.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>

namespace mmcavity {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kReflectivityClamp = 1.0 - 1e-9;

void require_two_membranes(const CavityGeometry& geom) {
    geom.validate();
    if (geom.membrane_count != 2)
        throw DomainError("closed forms exist only for the two-membrane triplets");
}

void require_branch(int n, int i) {
    if (n < 1) throw DomainError("multiplet index n must be >= 1");
    if (i < 1 || i > 3) throw DomainError("branch index must be 1, 2 or 3");
}

}  // namespace

double delta_closed_form(int n, int i, const CavityGeometry& geom) {
    require_two_membranes(geom);
    require_branch(n, i);
    const double scale = geom.light_speed / (2.0 * geom.half_subcavity_length);
    if (i == 1) return scale * n * kPi;
    const double theta = membrane_angle(geom.reflectivity);
    const double st = std::sin(theta);
    const double split = std::asin(std::sqrt(3.0 + st * st) / 2.0);
    if (i == 2) return scale * (n * kPi + split - theta);
    return scale * ((n + 1) * kPi - split - theta);
}

double b_closed_form(int n, int i, const CavityGeometry& geom) {
    require_two_membranes(geom);
    require_branch(n, i);
    const double L = geom.half_subcavity_length;
    const double c = geom.light_speed;
    const double theta = membrane_angle(geom.reflectivity);
    const double theta_ni = 2.0 * delta_closed_form(n, i, geom) * L / c;
    const double xi = theta_ni / 4.0;  // dimensionless, rescaled below
    const double st = std::sin(theta);

    const double num = xi * std::sin(theta_ni) * std::sin(2.0 * theta);
    const double den = 3.0 * std::cos(theta_ni) * st * st +
                       3.0 * std::cos(2.0 * theta + 3.0 * theta_ni) +
                       std::sin(2.0 * theta) * std::sin(theta_ni);
    if (std::fabs(den) < 1e-9)
        throw SingularPointError("linear-coefficient denominator vanishes", den);

    // Oriented along the membrane separation (rest +2L); the opposite
    // orientation belongs to the left-minus-right relative coordinate.
    return -(num / den) * c / (L * L);
}

double m1_closed_form(int n, const CavityGeometry& geom) {
    require_two_membranes(geom);
    if (n < 1) throw DomainError("multiplet index n must be >= 1");
    if (geom.reflectivity > kReflectivityClamp)
        throw DomainError("quadratic coefficient diverges as R -> 1 "
                          "(tan(theta) unbounded beyond R = 1 - 1e-9)");
    const double L = geom.half_subcavity_length;
    const double c = geom.light_speed;
    const double theta = membrane_angle(geom.reflectivity);
    const double xi = n * kPi / 4.0;  // dimensionless
    const double tau = 4.0;           // round trip 4L/c, in units of L/c
    return -(tau * xi * xi * std::tan(theta) / 6.0) * c / (L * L * L);
}

namespace {

struct StencilEvaluator {
    CavityGeometry geom;  // clamped copy
    int mode_index;
    double q0, Q0;

    double omega(double dq, double dQ) const {
        const CollectiveCoordinates coords{q0 + dq, Q0 + dQ};
        const auto pos = coords.positions(geom);
        return geom.light_speed * solve_mode_k(mode_index, pos, geom);
    }
};

/// (4 a_half - a_full) / 3: cancels the O(h^2) truncation term.
double richardson(double a_full, double a_half) {
    return (4.0 * a_half - a_full) / 3.0;
}

void check_consistent(const char* what, double v_full, double v_half,
                      double noise_floor) {
    const double diff = std::fabs(v_full - v_half);
    if (diff > std::max(0.05 * std::fabs(v_half), noise_floor))
        throw StencilError(std::string("stencil steps h and h/2 disagree for ") + what +
                           "; a spectral feature inside the stencil is unresolved "
                           "(reduce the step)");
}

}  // namespace

CouplingCoefficients extract_couplings_numeric(const CavityGeometry& geom, int n, int i,
                                               double q0, double Q0,
                                               const ExtractOptions& opts) {
    require_two_membranes(geom);
    if (n < 0 || i < 1 || i > geom.membrane_count + 1)
        throw DomainError("branch label outside the multiplet structure");
    const int m = global_mode_index(ModeLabel{n, i}, geom.membrane_count);
    if (m < 1) throw DomainError("multiplet 0 has no branch i = 1");
    if (geom.reflectivity >= 1.0)
        throw DomainError("coefficients are undefined at R = 1 (degenerate spectrum)");
    if (!(opts.step > 0.0)) throw DomainError("stencil step must be positive");

    CavityGeometry g = geom;
    g.reflectivity = std::min(g.reflectivity, kReflectivityClamp);
    const double L = g.half_subcavity_length;
    const double h = opts.step * L;

    StencilEvaluator ev{g, m, q0, Q0};
    const double w0 = ev.omega(0.0, 0.0);
    const double k0 = w0 / g.light_speed;
    if (!(h < 0.05 * kPi / k0))
        throw DomainError("stencil step is not small against the modulation "
                          "period pi/k");

    struct StepValues {
        double dq, dQ, sq, sQ, x;
    };
    auto eval = [&](double s) {
        const double wqp = ev.omega(+s, 0.0), wqm = ev.omega(-s, 0.0);
        const double wQp = ev.omega(0.0, +s), wQm = ev.omega(0.0, -s);
        const double wpp = ev.omega(+s, +s), wpm = ev.omega(+s, -s);
        const double wmp = ev.omega(-s, +s), wmm = ev.omega(-s, -s);
        return StepValues{(wqp - wqm) / (2.0 * s),
                          (wQp - wQm) / (2.0 * s),
                          (wqp - 2.0 * w0 + wqm) / (s * s),
                          (wQp - 2.0 * w0 + wQm) / (s * s),
                          (wpp - wpm - wmp + wmm) / (4.0 * s * s)};
    };

    CouplingCoefficients out;
    out.q0 = q0;
    out.Q0 = Q0;
    out.label = ModeLabel{n, i};
    out.delta = w0;
    out.theta_ni = 2.0 * (w0 / g.light_speed) * L;  // 2 Delta L / c
    out.xi_ni = out.theta_ni / (4.0 * L * L);
    out.round_trip_time = 4.0 * L / g.light_speed;

    const StepValues vh = eval(h);
    if (!opts.richardson) {
        out.b_rel = vh.dq;
        out.b_com = vh.dQ;
        out.m_rel = vh.sq / 2.0;
        out.m_com = vh.sQ / 2.0;
        out.p_cross = vh.x;
        return out;
    }

    const StepValues vh2 = eval(h / 2.0);
    const double eps_w = 1e-14 * w0;
    const double floor_first = 1e3 * eps_w / h;
    const double floor_second = 1e3 * eps_w / (h * h);
    check_consistent("d/dq", vh.dq, vh2.dq, floor_first);
    check_consistent("d/dQ", vh.dQ, vh2.dQ, floor_first);
    check_consistent("d2/dq2", vh.sq, vh2.sq, floor_second);
    check_consistent("d2/dQ2", vh.sQ, vh2.sQ, floor_second);
    check_consistent("d2/dqdQ", vh.x, vh2.x, floor_second);

    out.b_rel = richardson(vh.dq, vh2.dq);
    out.b_com = richardson(vh.dQ, vh2.dQ);
    out.m_rel = richardson(vh.sq, vh2.sq) / 2.0;
    out.m_com = richardson(vh.sQ, vh2.sQ) / 2.0;
    out.p_cross = richardson(vh.x, vh2.x);
    return out;
}

namespace {

/// Gaussian elimination with partial pivoting for the small LSQ system.
std::array<double, 6> solve6(std::array<std::array<double, 7>, 6> aug) {
    for (int col = 0; col < 6; ++col) {
        int pivot = col;
        for (int r = col + 1; r < 6; ++r)
            if (std::fabs(aug[r][col]) > std::fabs(aug[pivot][col])) pivot = r;
        std::swap(aug[col], aug[pivot]);
        if (std::fabs(aug[col][col]) < 1e-300)
            throw NumericalError("singular least-squares system");
        for (int r = 0; r < 6; ++r) {
            if (r == col) continue;
            const double factor = aug[r][col] / aug[col][col];
            for (int c2 = col; c2 < 7; ++c2) aug[r][c2] -= factor * aug[col][c2];
        }
    }
    std::array<double, 6> x{};
    for (int r = 0; r < 6; ++r) x[r] = aug[r][6] / aug[r][r];
    return x;
}

}  // namespace

CouplingCoefficients refit_quadratic_lsq(const CavityGeometry& geom, int n, int i,
                                         double q0, double Q0, double step) {
    require_two_membranes(geom);
    if (geom.reflectivity >= 1.0)
        throw DomainError("coefficients are undefined at R = 1 (degenerate spectrum)");
    CavityGeometry g = geom;
    g.reflectivity = std::min(g.reflectivity, kReflectivityClamp);
    const int m = global_mode_index(ModeLabel{n, i}, geom.membrane_count);
    if (m < 1) throw DomainError("multiplet 0 has no branch i = 1");
    const double h = step * g.half_subcavity_length;

    StencilEvaluator ev{g, m, q0, Q0};
    const double w_center = ev.omega(0.0, 0.0);

    // Model: w - w_center ~ a0 + a1 x + a2 y + a3 x^2 + a4 y^2 + a5 xy over a
    // 5x5 stencil; shifting by w_center keeps the normal equations well scaled.
    std::array<std::array<double, 7>, 6> aug{};
    for (int a = -2; a <= 2; ++a) {
        for (int b = -2; b <= 2; ++b) {
            const double x = a * h, y = b * h;
            const double w = ev.omega(x, y) - w_center;
            const std::array<double, 6> basis{1.0, x, y, x * x, y * y, x * y};
            for (int r = 0; r < 6; ++r) {
                for (int c = 0; c < 6; ++c) aug[r][c] += basis[r] * basis[c];
                aug[r][6] += basis[r] * w;
            }
        }
    }
    const auto coef = solve6(aug);

    CouplingCoefficients out;
    out.q0 = q0;
    out.Q0 = Q0;
    out.label = ModeLabel{n, i};
    out.delta = w_center + coef[0];
    out.b_rel = coef[1];
    out.b_com = coef[2];
    out.m_rel = coef[3];
    out.m_com = coef[4];
    out.p_cross = coef[5];
    const double L = g.half_subcavity_length;
    out.theta_ni = 2.0 * (out.delta / g.light_speed) * L;
    out.xi_ni = out.theta_ni / (4.0 * L * L);
    out.round_trip_time = 4.0 * L / g.light_speed;
    return out;
}

bool ValidationReport::all_pass() const {
    return std::all_of(checks.begin(), checks.end(),
                       [](const ValidationCheck& c) { return c.pass; });
}

namespace {

ValidationCheck make_check(std::string name, double numeric, double reference,
                           double tolerance, bool relative, std::string note = {}) {
    ValidationCheck c;
    c.name = std::move(name);
    c.numeric = numeric;
    c.reference = reference;
    c.abs_dev = std::fabs(numeric - reference);
    c.rel_dev = (reference != 0.0) ? c.abs_dev / std::fabs(reference)
                                   : std::numeric_limits<double>::infinity();
    c.tolerance = tolerance;
    c.relative = relative;
    c.pass = relative ? (c.rel_dev <= tolerance) : (c.abs_dev <= tolerance);
    c.note = std::move(note);
    return c;
}

}  // namespace

ValidationReport crosscheck(const CavityGeometry& geom, int n,
                            const CrosscheckTolerances& tol) {
    require_two_membranes(geom);
    if (n < 1) throw DomainError("multiplet index n must be >= 1");
    if (geom.reflectivity >= 1.0)
        throw DomainError("crosscheck requires R < 1; the R = 1 spectrum is degenerate");

    const double q0 = 2.0 * geom.half_subcavity_length;
    const std::string transparent_note =
        geom.reflectivity == 0.0 ? "transparent membranes: multiplet grouping is conventional"
                                 : "";

    ValidationReport report;
    for (int i = 1; i <= 3; ++i) {
        const auto num = extract_couplings_numeric(geom, n, i, q0, 0.0);
        const std::string tag = "(" + std::to_string(n) + "," + std::to_string(i) + ")";

        report.checks.push_back(make_check("delta" + tag, num.delta,
                                           delta_closed_form(n, i, geom),
                                           tol.delta_rel, true, transparent_note));

        const double b_ref = b_closed_form(n, i, geom);
        if (i == 1 || std::fabs(b_ref) < 1e-12)
            report.checks.push_back(make_check("b_rel" + tag, num.b_rel, 0.0,
                                               tol.b1_abs, false,
                                               i == 1 ? "parity: branch i=1 has no linear response"
                                                      : transparent_note));
        else
            report.checks.push_back(make_check("b_rel" + tag, num.b_rel, b_ref,
                                               tol.b_rel, true));

        if (i == 1) {
            const double m_ref = m1_closed_form(n, geom);
            if (std::fabs(m_ref) < 1e-12)
                report.checks.push_back(make_check("m_rel" + tag, num.m_rel, 0.0,
                                                   1e-4, false, transparent_note));
            else
                report.checks.push_back(make_check("m_rel" + tag, num.m_rel, m_ref,
                                                   tol.m1_rel, true));
        }

        report.checks.push_back(make_check("b_com" + tag, num.b_com, 0.0,
                                           tol.bcom_abs, false,
                                           "parity: spectrum even in Q about Q0 = 0"));
        report.checks.push_back(make_check("p_cross" + tag, num.p_cross, 0.0,
                                           tol.pcross_abs, false,
                                           "parity: no mixed term at Q0 = 0"));
    }
    return report;
}

PhotonCouplingRates single_photon_scales(const CouplingCoefficients& coeffs,
                                         const MechanicalParams& mech,
                                         CollectiveMode mode) {
    mech.validate();
    PhotonCouplingRates rates{};
    rates.effective_mass =
        (mode == CollectiveMode::Relative) ? mech.mass / 2.0 : 2.0 * mech.mass;
    rates.x_zpf = std::sqrt(mech.hbar / (2.0 * rates.effective_mass * mech.mech_frequency));
    const double b = (mode == CollectiveMode::Relative) ? coeffs.b_rel : coeffs.b_com;
    const double m = (mode == CollectiveMode::Relative) ? coeffs.m_rel : coeffs.m_com;
    rates.linear = b * rates.x_zpf;
    rates.quadratic = m * rates.x_zpf * rates.x_zpf;
    return rates;
}

}  // namespace mmcavity
