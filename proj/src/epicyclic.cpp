#include "ringres/epicyclic.hpp"

#include "exact_int.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace ringres {

using detail::binomial;

ExpansionCenter ExpansionCenter::at_radius(const PotentialModel& model, double r, int rho_order) {
    if (rho_order < 2 || rho_order > 16)
        throw std::invalid_argument("ExpansionCenter: rho_order must be in 2..16");
    const Frequencies f = frequencies(model, r);
    ExpansionCenter c;
    c.r_star = r;
    c.n_star = f.n;
    c.kappa_star = f.kappa;
    c.p_star = f.n * r * r;
    c.rho_order = rho_order;
    return c;
}

double taylor_c(const ExpansionCenter& center, const PotentialModel& model, int i, int j) {
    if (i < 0 || i > 2 || j < 3 - i)
        throw std::invalid_argument("taylor_c: requires i in 0..2 and j >= 3 - i");
    const double r = center.r_star;
    const double sign = (j % 2 == 0) ? 1.0 : -1.0;
    if (i == 1) return sign * (j + 1) * center.n_star / std::pow(r, j);
    if (i == 2) return sign * (j + 1) / (2.0 * std::pow(r, j + 2));
    // i == 0: potential term plus the centrifugal-like p*^2 term, per power law.
    const double R = model.shape.ref_radius;
    double sum = 0.0;
    for (int l = 0; l <= model.ell_max; ++l) {
        const double bracket = 0.5 * (j + 1) * (2 * l + 1) - binomial(2 * l + j, j);
        sum += model.axi[l] * std::pow(R, 2 * l) * bracket / std::pow(r, 2 * l + 1 + j);
    }
    return sign * model.body.gm * sum;
}

double taylor_v(const ExpansionCenter& center, const PotentialModel& model, int j, int i) {
    if (j < 0 || i < 1) throw std::invalid_argument("taylor_v: requires j >= 0 and i >= 1");
    if (i > model.ell_max) return 0.0;
    const double r = center.r_star;
    const double R = model.shape.ref_radius;
    const double sign = (j % 2 == 0) ? -1.0 : 1.0;
    double sum = 0.0;
    for (int l = i; l <= model.ell_max; ++l)
        sum += model.ns[l][i - 1] * binomial(2 * l + j, j) * std::pow(R, 2 * l) /
               std::pow(r, 2 * l + 1 + j);
    return sign * model.body.gm * sum;
}

EpicyclicHamiltonian assemble(const ExpansionCenter& center, const PotentialModel& model) {
    Truncation trunc;
    trunc.max_i_pow = 2;
    trunc.max_j_half = center.rho_order;
    trunc.max_k_theta = 2 * model.ell_max;
    trunc.max_k_phi = center.rho_order;
    trunc.drop_threshold = 0.0;  // the graded tail must survive intact

    const double kap = center.kappa_star;
    const double r = center.r_star;

    EpicyclicHamiltonian H;
    H.center = center;
    H.model = model;
    H.kappa_abs = std::abs(kap);
    H.synodic = center.n_star - model.body.spin_rate;

    PoissonSeries s(trunc);
    s.add_term(H.kappa_abs, 0, 2, 0, 0, Trig::Cos);
    s.add_term(H.synodic, 1, 0, 0, 0, Trig::Cos);
    s.add_term(0.5 / (r * r), 2, 0, 0, 0, Trig::Cos);
    // -2 n*/r* I rho with rho = sqrt(2J/|k*|) sin(phi)
    s.add_term(-2.0 * center.n_star / r * std::sqrt(2.0 / H.kappa_abs), 1, 1, 0, 1, Trig::Sin);

    // axisymmetric tail: sum_{i,j} d_{i,j} I^i J^(j/2) sin^j(phi)
    for (int i = 0; i <= 2; ++i) {
        for (int j = std::max(3 - i, 1); j <= center.rho_order; ++j) {
            const double d = taylor_c(center, model, i, j) * std::pow(2.0 / H.kappa_abs, 0.5 * j);
            PoissonSeries head(trunc);
            head.add_term(d, i, j, 0, 0, Trig::Cos);
            s = add(s, mul(head, power_sin_phi(j, trunc)));
        }
    }
    // non-axisymmetric part: sum_{j,i} Vt_{j,i} J^(j/2) cos(2 i theta) sin^j(phi)
    for (int it = 1; it <= model.ell_max; ++it) {
        for (int j = 0; j <= center.rho_order; ++j) {
            const double vt = taylor_v(center, model, j, it) * std::pow(2.0 / H.kappa_abs, 0.5 * j);
            if (vt == 0.0) continue;
            PoissonSeries head(trunc);
            head.add_term(vt, 0, j, 2 * it, 0, Trig::Cos);
            s = add(s, mul(head, power_sin_phi(j, trunc)));
        }
    }
    H.series = std::move(s);
    return H;
}

double j_from_eccentricity(const ExpansionCenter& center, double e) {
    if (!(e >= 0.0 && e < 1.0))
        throw std::invalid_argument("j_from_eccentricity: requires 0 <= e < 1");
    return 0.5 * std::abs(center.kappa_star) * center.r_star * center.r_star * e * e;
}

double eccentricity_from_j(const ExpansionCenter& center, double J) {
    if (J < 0.0) throw std::invalid_argument("eccentricity_from_j: requires J >= 0");
    return std::sqrt(2.0 * J / (std::abs(center.kappa_star) * center.r_star * center.r_star));
}

double action_level_from_eccentricity(const ExpansionCenter& center, double e) {
    if (!(e >= 0.0 && e < 1.0))
        throw std::invalid_argument("action_level_from_eccentricity: requires 0 <= e < 1");
    const double kap = std::abs(center.kappa_star);
    const double rho = e * center.r_star;
    const double p_rho = center.r_star * e * center.n_star;
    return p_rho * p_rho / (2.0 * kap) + kap * rho * rho / 2.0;
}

double truncation_remainder(const ExpansionCenter& center, const PotentialModel& model,
                            double e_max) {
    if (!(e_max >= 0.0 && e_max < 1.0))
        throw std::invalid_argument("truncation_remainder: requires 0 <= e_max < 1");
    if (e_max == 0.0) return 0.0;
    ExpansionCenter lower = center;
    lower.rho_order = center.rho_order - 2;
    const EpicyclicHamiltonian full = assemble(center, model);
    const EpicyclicHamiltonian trimmed = assemble(lower, model);
    const double J = j_from_eccentricity(center, e_max);

    constexpr int kThetaSamples = 13;
    constexpr int kPhiSamples = 25;
    double diff_max = 0.0, h_max = 0.0;
    for (int a = 0; a < kThetaSamples; ++a) {
        const double theta = std::numbers::pi * a / (kThetaSamples - 1);
        for (int b = 0; b < kPhiSamples; ++b) {
            const double phi = 2.0 * std::numbers::pi * b / (kPhiSamples - 1);
            const double v16 = full.series.evaluate(0.0, J, theta, phi);
            const double v14 = trimmed.series.evaluate(0.0, J, theta, phi);
            diff_max = std::max(diff_max, std::abs(v16 - v14));
            h_max = std::max(h_max, std::abs(v16));
        }
    }
    return h_max > 0.0 ? diff_max / h_max : 0.0;
}

}  // namespace ringres
