#include "ringres/resonance.hpp"

#include <cmath>
#include <optional>

namespace ringres {

double keplerian_radius(const BodyParams& body, int p, int q) {
    if (p <= 0 || q <= 0) throw std::invalid_argument("keplerian_radius: p, q must be positive");
    const double T = (static_cast<double>(q) / p) / body.spin_rate;  // seconds per radian
    return std::cbrt(body.gm * T * T);
}

namespace {

// Residual of the resonance equation, empty where frequencies are not real.
std::optional<double> resonance_residual(const PotentialModel& model, int p, int q, double r) {
    const double n2 = n_squared(model, r);
    const double k2 = kappa_squared(model, r);
    if (!(n2 > 0.0) || !(k2 > 0.0)) return std::nullopt;
    return (p - q) * std::sqrt(k2) - p * (std::sqrt(n2) - model.body.spin_rate);
}

}  // namespace

ResonanceSpec resonant_radius(const PotentialModel& model, int p, int q) {
    ResonanceSpec spec;
    spec.p = p;
    spec.q = q;
    spec.label = std::to_string(p) + ":" + std::to_string(q);
    if (p == q) {
        spec.m = 1;
        spec.j = 0;
    } else {
        spec.m = -p;
        spec.j = q - p;
    }
    spec.r_kep = keplerian_radius(model.body, p, q);

    // Bracket inside [0.5, 2.0] x r_kep, skipping the non-real-frequency zone.
    constexpr int kProbes = 400;
    const double lo = 0.5 * spec.r_kep, hi = 2.0 * spec.r_kep;
    double a = 0.0, b = 0.0;
    std::optional<double> fa;
    bool bracketed = false;
    for (int k = 0; k <= kProbes; ++k) {
        const double r = lo + (hi - lo) * k / kProbes;
        const auto fr = resonance_residual(model, p, q, r);
        if (fa && fr && *fa * *fr <= 0.0) {
            b = r;
            bracketed = true;
            break;
        }
        if (fr) a = r;
        fa = fr;
    }
    if (!bracketed)
        throw NoBracketError("no bracket for resonance " + spec.label + " of body " +
                             model.body.name + " in [0.5, 2.0] x r_kep");

    // Bisection to machine precision; the residual invariant is checked below.
    double flo = *resonance_residual(model, p, q, a);
    for (int it = 0; it < 200 && b - a > 1e-13 * b; ++it) {
        const double mid = 0.5 * (a + b);
        const double fm = *resonance_residual(model, p, q, mid);
        if (flo * fm <= 0.0) {
            b = mid;
        } else {
            a = mid;
            flo = fm;
        }
    }
    spec.r_res = 0.5 * (a + b);

    const Frequencies f = frequencies(model, spec.r_res);
    spec.n_star = f.n;
    spec.kappa_star = f.kappa;
    const double residual = spec.j * f.kappa - spec.m * (f.n - model.body.spin_rate);
    const double tol = 1e-12 * std::abs(spec.m) * model.body.spin_rate;
    if (std::abs(residual) > std::max(tol, 1e-300))
        throw std::runtime_error("resonance residual above tolerance for " + spec.label);
    return spec;
}

double radius_discrepancy(const PotentialModel& model, int p, int q) {
    const ResonanceSpec spec = resonant_radius(model, p, q);
    return std::abs(spec.r_kep - spec.r_res) / spec.r_kep;
}

// --- reduced Hamiltonian evaluation ---------------------------------------

namespace {

double peval(const std::vector<double>& poly, double x) {
    double v = 0.0;
    for (auto it = poly.rbegin(); it != poly.rend(); ++it) v = v * x + *it;
    return v;
}

double peval_d1(const std::vector<double>& poly, double x) {
    double v = 0.0;
    for (int k = static_cast<int>(poly.size()) - 1; k >= 1; --k) v = v * x + k * poly[k];
    return v;
}

double peval_d2(const std::vector<double>& poly, double x) {
    double v = 0.0;
    for (int k = static_cast<int>(poly.size()) - 1; k >= 2; --k)
        v = v * x + static_cast<double>(k) * (k - 1) * poly[k];
    return v;
}

}  // namespace

double ReducedHamiltonian::energy(double x, double ang) const {
    double v = peval(normal, x);
    for (std::size_t k = 0; k < harmonic.size(); ++k)
        v += peval(harmonic[k], x) * std::cos((k + 1) * angle_multiplier * ang);
    return v;
}

double ReducedHamiltonian::d_action(double x, double ang) const {
    double v = peval_d1(normal, x);
    for (std::size_t k = 0; k < harmonic.size(); ++k)
        v += peval_d1(harmonic[k], x) * std::cos((k + 1) * angle_multiplier * ang);
    return v;
}

double ReducedHamiltonian::d_angle(double x, double ang) const {
    double v = 0.0;
    for (std::size_t k = 0; k < harmonic.size(); ++k) {
        const double kk = (k + 1) * angle_multiplier;
        v -= kk * peval(harmonic[k], x) * std::sin(kk * ang);
    }
    return v;
}

double ReducedHamiltonian::d2_action(double x, double ang) const {
    double v = peval_d2(normal, x);
    for (std::size_t k = 0; k < harmonic.size(); ++k)
        v += peval_d2(harmonic[k], x) * std::cos((k + 1) * angle_multiplier * ang);
    return v;
}

double ReducedHamiltonian::d2_angle(double x, double ang) const {
    double v = 0.0;
    for (std::size_t k = 0; k < harmonic.size(); ++k) {
        const double kk = (k + 1) * angle_multiplier;
        v -= kk * kk * peval(harmonic[k], x) * std::cos(kk * ang);
    }
    return v;
}

double ReducedHamiltonian::d2_mixed(double x, double ang) const {
    double v = 0.0;
    for (std::size_t k = 0; k < harmonic.size(); ++k) {
        const double kk = (k + 1) * angle_multiplier;
        v -= kk * peval_d1(harmonic[k], x) * std::sin(kk * ang);
    }
    return v;
}

// --- reductions ------------------------------------------------------------

namespace {

// Collects sum over h of coeff * J0^(h/2) for fixed (i_pow, k_theta).
double sum_at_level(const PoissonSeries& s, int i_pow, int k_theta, Trig kind, double J0) {
    double total = 0.0;
    for (const auto& [k, c] : s.terms()) {
        if (k.i_pow != i_pow || k.k_theta != k_theta || k.k_phi != 0 || k.kind != kind) continue;
        total += c * std::pow(J0, 0.5 * k.j_half);
    }
    return total;
}

std::vector<double> poly_mul(const std::vector<double>& a, const std::vector<double>& b) {
    std::vector<double> r(a.size() + b.size() - 1, 0.0);
    for (std::size_t i = 0; i < a.size(); ++i)
        for (std::size_t j = 0; j < b.size(); ++j) r[i + j] += a[i] * b[j];
    return r;
}

std::vector<double> poly_pow(const std::vector<double>& p, int n) {
    std::vector<double> r{1.0};
    for (int k = 0; k < n; ++k) r = poly_mul(r, p);
    return r;
}

}  // namespace

ReducedHamiltonian reduce_corotation(const EpicyclicHamiltonian& epi, double e) {
    if (!(e > 0.0 && e < 1.0)) throw std::invalid_argument("reduce_corotation: requires 0 < e < 1");
    const PoissonSeries kept = filter_resonant(epi.series, 1, 0);  // k_phi == 0
    const double J0 = action_level_from_eccentricity(epi.center, e);

    ReducedHamiltonian red;
    red.resonance.p = red.resonance.q = 1;
    red.resonance.m = 1;
    red.resonance.j = 0;
    red.resonance.label = "1:1";
    red.resonance.r_res = epi.center.r_star;
    red.resonance.n_star = epi.center.n_star;
    red.resonance.kappa_star = epi.center.kappa_star;
    red.angle_name = "theta";
    red.angle_multiplier = 2;
    red.j0 = J0;
    red.eccentricity = e;
    red.normal = {0.0, sum_at_level(kept, 1, 0, Trig::Cos, J0),
                  sum_at_level(kept, 2, 0, Trig::Cos, J0)};
    // Harmonic coefficients are doubled: the two-sided harmonic table lists
    // cos(2k theta) under both +2k and -2k at full weight, and the resonant
    // Hamiltonian collects both entries.
    const int kmax = epi.model.ell_max;
    for (int k = 1; k <= kmax; ++k)
        red.harmonic.push_back({2.0 * sum_at_level(kept, 0, 2 * k, Trig::Cos, J0)});
    return red;
}

ReducedHamiltonian reduce_lindblad(const EpicyclicHamiltonian& epi, const ResonanceSpec& spec,
                                   double e) {
    if (!(e > 0.0 && e < 1.0)) throw std::invalid_argument("reduce_lindblad: requires 0 < e < 1");
    const bool is12 = (spec.m == -1 && spec.j == 1);
    const bool is13 = (spec.m == -1 && spec.j == 2);
    if (!is12 && !is13)
        throw std::invalid_argument("reduce_lindblad: only 1:2 (m=-1,j=1) and 1:3 (m=-1,j=2) "
                                    "are supported");

    const PoissonSeries kept = filter_resonant(epi.series, spec.m, spec.j);
    const ExpansionCenter& c = epi.center;
    const double J0 = action_level_from_eccentricity(c, e);
    const double rho = e * c.r_star;
    const double r_out = c.r_star + rho;
    const double I0 = frequencies(epi.model, r_out).n * r_out * r_out - c.p_star;
    const double L0 = is12 ? (J0 - I0) : (2.0 * I0 - J0);

    // I = 2G + L0 ; J = 2G + 2L0 (1:2) or 4G + L0 (1:3)
    const std::vector<double> I_of_G{L0, 2.0};
    const std::vector<double> J_of_G = is12 ? std::vector<double>{2.0 * L0, 2.0}
                                            : std::vector<double>{L0, 4.0};

    ReducedHamiltonian red;
    red.resonance = spec;
    red.angle_name = "psi";
    red.angle_multiplier = 1;
    red.j0 = J0;
    red.i0 = I0;
    red.l0 = L0;
    red.eccentricity = e;
    red.normal.assign(11, 0.0);

    const int kphi_per_k = is12 ? 2 : 4;
    for (const auto& [key, coeff] : kept.terms()) {
        if (key.j_half % 2 != 0)
            throw std::logic_error("reduce_lindblad: resonant terms must carry integer J powers");
        const auto poly =
            poly_mul(poly_pow(I_of_G, key.i_pow), poly_pow(J_of_G, key.j_half / 2));
        if (key.k_theta == 0) {
            for (std::size_t d = 1; d < poly.size() && d < red.normal.size(); ++d)
                red.normal[d] += coeff * poly[d];
            continue;
        }
        const int k = key.k_theta / 2;
        if (key.k_phi != kphi_per_k * k || key.kind != Trig::Cos)
            throw std::logic_error("reduce_lindblad: unexpected resonant harmonic");
        if (static_cast<int>(red.harmonic.size()) < k) red.harmonic.resize(k);
        auto& target = red.harmonic[k - 1];
        if (target.size() < poly.size()) target.resize(poly.size(), 0.0);
        for (std::size_t d = 0; d < poly.size(); ++d) target[d] += coeff * poly[d];
    }
    return red;
}

}  // namespace ringres
