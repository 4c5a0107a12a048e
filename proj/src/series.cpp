#include "ringres/series.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>

namespace ringres {

Truncation Truncation::tighter(const Truncation& a, const Truncation& b) {
    Truncation t;
    t.max_i_pow = std::min(a.max_i_pow, b.max_i_pow);
    t.max_j_half = std::min(a.max_j_half, b.max_j_half);
    t.max_k_theta = std::min(a.max_k_theta, b.max_k_theta);
    t.max_k_phi = std::min(a.max_k_phi, b.max_k_phi);
    t.drop_threshold = std::max(a.drop_threshold, b.drop_threshold);
    return t;
}

PoissonSeries PoissonSeries::constant(double value, const Truncation& trunc) {
    PoissonSeries s(trunc);
    s.add_term(value, 0, 0, 0, 0, Trig::Cos);
    return s;
}

void PoissonSeries::add_term(double coeff, int i_pow, int j_half, int k_theta, int k_phi,
                             Trig kind) {
    if (coeff == 0.0) return;
    if (!std::isfinite(coeff)) throw std::invalid_argument("series: non-finite coefficient");
    if (i_pow < 0 || j_half < 0) throw std::invalid_argument("series: negative power");
    // canonical harmonic orientation
    if (k_theta < 0 || (k_theta == 0 && k_phi < 0)) {
        k_theta = -k_theta;
        k_phi = -k_phi;
        if (kind == Trig::Sin) coeff = -coeff;
    }
    if (kind == Trig::Sin && k_theta == 0 && k_phi == 0) return;  // identically zero
    // truncation
    if (i_pow > trunc_.max_i_pow || j_half > trunc_.max_j_half) return;
    if (k_theta > trunc_.max_k_theta || std::abs(k_phi) > trunc_.max_k_phi) return;

    TermKey key{static_cast<std::uint8_t>(i_pow), static_cast<std::uint8_t>(j_half),
                static_cast<std::int16_t>(k_theta), static_cast<std::int16_t>(k_phi), kind};
    auto [it, inserted] = terms_.emplace(key, coeff);
    if (!inserted) {
        it->second += coeff;
        if (it->second == 0.0) terms_.erase(it);
    }
}

double PoissonSeries::coefficient(const TermKey& key) const {
    auto it = terms_.find(key);
    return it == terms_.end() ? 0.0 : it->second;
}

PoissonSeries PoissonSeries::scaled(double factor) const {
    PoissonSeries out(trunc_);
    if (factor == 0.0) return out;
    for (const auto& [k, c] : terms_) out.terms_.emplace(k, c * factor);
    return out;
}

void PoissonSeries::prune() {
    if (trunc_.drop_threshold <= 0.0 || terms_.empty()) return;
    double biggest = 0.0;
    for (const auto& [k, c] : terms_) biggest = std::max(biggest, std::abs(c));
    const double cut = trunc_.drop_threshold * biggest;
    for (auto it = terms_.begin(); it != terms_.end();) {
        if (std::abs(it->second) < cut)
            it = terms_.erase(it);
        else
            ++it;
    }
}

double PoissonSeries::evaluate(double I, double J, double theta, double phi) const {
    if (J < 0.0) throw std::invalid_argument("series evaluate: J must be >= 0");
    const double sqrtJ = std::sqrt(J);
    double sum = 0.0;
    for (const auto& [k, c] : terms_) {
        double mono = c;
        for (int i = 0; i < k.i_pow; ++i) mono *= I;
        for (int h = 0; h < k.j_half; ++h) mono *= sqrtJ;
        const double arg = k.k_theta * theta + k.k_phi * phi;
        sum += mono * (k.kind == Trig::Cos ? std::cos(arg) : std::sin(arg));
    }
    return sum;
}

PoissonSeries PoissonSeries::derivative_i() const {
    PoissonSeries out(trunc_);
    for (const auto& [k, c] : terms_)
        if (k.i_pow > 0) out.add_term(c * k.i_pow, k.i_pow - 1, k.j_half, k.k_theta, k.k_phi, k.kind);
    return out;
}

PoissonSeries PoissonSeries::derivative_j() const {
    PoissonSeries out(trunc_);
    for (const auto& [k, c] : terms_) {
        if (k.j_half == 0) continue;
        if (k.j_half == 1)
            throw std::domain_error("derivative_j: J^(1/2) differentiates to a negative power");
        out.add_term(c * 0.5 * k.j_half, k.i_pow, k.j_half - 2, k.k_theta, k.k_phi, k.kind);
    }
    return out;
}

namespace {

PoissonSeries angle_derivative(const PoissonSeries& s, bool wrt_theta) {
    PoissonSeries out(s.truncation());
    for (const auto& [k, c] : s.terms()) {
        const int factor = wrt_theta ? k.k_theta : k.k_phi;
        if (factor == 0) continue;
        // d cos = -k sin ; d sin = k cos
        if (k.kind == Trig::Cos)
            out.add_term(-c * factor, k.i_pow, k.j_half, k.k_theta, k.k_phi, Trig::Sin);
        else
            out.add_term(c * factor, k.i_pow, k.j_half, k.k_theta, k.k_phi, Trig::Cos);
    }
    return out;
}

}  // namespace

PoissonSeries PoissonSeries::derivative_theta() const { return angle_derivative(*this, true); }
PoissonSeries PoissonSeries::derivative_phi() const { return angle_derivative(*this, false); }

void PoissonSeries::write_csv(std::ostream& out) const {
    out << "coeff,i_pow,j_half_pow,k_theta,k_phi,kind\n";
    char buf[64];
    for (const auto& [k, c] : terms_) {
        std::snprintf(buf, sizeof buf, "%.17g", c);
        out << buf << ',' << int(k.i_pow) << ',' << int(k.j_half) << ',' << k.k_theta << ','
            << k.k_phi << ',' << (k.kind == Trig::Cos ? "cos" : "sin") << '\n';
    }
}

PoissonSeries PoissonSeries::read_csv(std::istream& in, const Truncation& trunc) {
    PoissonSeries s(trunc);
    std::string line;
    bool header = true;
    while (std::getline(in, line)) {
        if (header) {
            header = false;
            continue;
        }
        if (line.empty()) continue;
        std::istringstream ls(line);
        std::string field;
        double coeff;
        int i_pow, j_half, k_theta, k_phi;
        char comma;
        ls >> coeff >> comma >> i_pow >> comma >> j_half >> comma >> k_theta >> comma >> k_phi >>
            comma >> field;
        if (!ls) throw std::runtime_error("series csv: malformed line: " + line);
        s.add_term(coeff, i_pow, j_half, k_theta, k_phi, field == "sin" ? Trig::Sin : Trig::Cos);
    }
    return s;
}

PoissonSeries add(const PoissonSeries& s1, const PoissonSeries& s2) {
    PoissonSeries out(Truncation::tighter(s1.truncation(), s2.truncation()));
    for (const auto& [k, c] : s1.terms())
        out.add_term(c, k.i_pow, k.j_half, k.k_theta, k.k_phi, k.kind);
    for (const auto& [k, c] : s2.terms())
        out.add_term(c, k.i_pow, k.j_half, k.k_theta, k.k_phi, k.kind);
    out.prune();
    return out;
}

PoissonSeries scale(const PoissonSeries& s, double factor) { return s.scaled(factor); }

PoissonSeries mul(const PoissonSeries& s1, const PoissonSeries& s2) {
    PoissonSeries out(Truncation::tighter(s1.truncation(), s2.truncation()));
    for (const auto& [ka, ca] : s1.terms()) {
        for (const auto& [kb, cb] : s2.terms()) {
            const int i = ka.i_pow + kb.i_pow;
            const int h = ka.j_half + kb.j_half;
            const double c = ca * cb;
            const int kts = ka.k_theta + kb.k_theta, kps = ka.k_phi + kb.k_phi;
            const int ktd = ka.k_theta - kb.k_theta, kpd = ka.k_phi - kb.k_phi;
            if (ka.kind == Trig::Cos && kb.kind == Trig::Cos) {
                // cosA cosB = 1/2 cos(A-B) + 1/2 cos(A+B)
                out.add_term(0.5 * c, i, h, ktd, kpd, Trig::Cos);
                out.add_term(0.5 * c, i, h, kts, kps, Trig::Cos);
            } else if (ka.kind == Trig::Sin && kb.kind == Trig::Sin) {
                // sinA sinB = 1/2 cos(A-B) - 1/2 cos(A+B)
                out.add_term(0.5 * c, i, h, ktd, kpd, Trig::Cos);
                out.add_term(-0.5 * c, i, h, kts, kps, Trig::Cos);
            } else if (ka.kind == Trig::Sin) {
                // sinA cosB = 1/2 sin(A+B) + 1/2 sin(A-B)
                out.add_term(0.5 * c, i, h, kts, kps, Trig::Sin);
                out.add_term(0.5 * c, i, h, ktd, kpd, Trig::Sin);
            } else {
                // cosA sinB = 1/2 sin(A+B) - 1/2 sin(A-B)
                out.add_term(0.5 * c, i, h, kts, kps, Trig::Sin);
                out.add_term(-0.5 * c, i, h, ktd, kpd, Trig::Sin);
            }
        }
    }
    out.prune();
    return out;
}

PoissonSeries power_sin_phi(int j, const Truncation& trunc) {
    if (j < 0 || j > 16) throw std::invalid_argument("power_sin_phi: j must be in 0..16");
    PoissonSeries s(trunc);
    if (j == 0) {
        s.add_term(1.0, 0, 0, 0, 0, Trig::Cos);
        return s;
    }
    // binomial expansion of ((e^{i phi} - e^{-i phi}) / 2i)^j
    auto binom = [](int n, int k) {
        double b = 1.0;
        for (int t = 0; t < k; ++t) b = b * (n - t) / (t + 1);
        return b;
    };
    const double scale = std::pow(2.0, -j);
    if (j % 2 == 0) {
        s.add_term(binom(j, j / 2) * scale, 0, 0, 0, 0, Trig::Cos);
        for (int m = 1; m <= j / 2; ++m) {
            const double sign = (m % 2 == 0) ? 1.0 : -1.0;
            s.add_term(sign * 2.0 * binom(j, j / 2 - m) * scale, 0, 0, 0, 2 * m, Trig::Cos);
        }
    } else {
        for (int m = 0; 2 * m + 1 <= j; ++m) {
            const double sign = (m % 2 == 0) ? 1.0 : -1.0;
            s.add_term(sign * 2.0 * binom(j, (j - 1) / 2 - m) * scale, 0, 0, 0, 2 * m + 1,
                       Trig::Sin);
        }
    }
    return s;
}

PoissonSeries substitute_rho(const PoissonSeries& target, double kappa_abs) {
    if (!(kappa_abs > 0.0))
        throw std::invalid_argument("substitute_rho: |kappa*| must be positive");
    PoissonSeries out(target.truncation());
    for (const auto& [k, c] : target.terms()) {
        const int j = k.j_half;  // placeholder: power of rho
        if (k.k_phi != 0)
            throw std::invalid_argument("substitute_rho: target must not reference phi");
        if (j > target.truncation().max_j_half)
            throw std::invalid_argument("substitute_rho: rho power exceeds J-degree bound");
        const double factor = std::pow(2.0 / kappa_abs, 0.5 * j);
        PoissonSeries head(target.truncation());
        head.add_term(c * factor, k.i_pow, j, k.k_theta, 0, k.kind);
        out = add(out, mul(head, power_sin_phi(j, target.truncation())));
    }
    return out;
}

PoissonSeries average_phi(const PoissonSeries& s) {
    PoissonSeries out(s.truncation());
    for (const auto& [k, c] : s.terms())
        if (k.k_phi == 0) out.add_term(c, k.i_pow, k.j_half, k.k_theta, k.k_phi, k.kind);
    return out;
}

PoissonSeries average_theta(const PoissonSeries& s) {
    PoissonSeries out(s.truncation());
    for (const auto& [k, c] : s.terms())
        if (k.k_theta == 0) out.add_term(c, k.i_pow, k.j_half, k.k_theta, k.k_phi, k.kind);
    return out;
}

PoissonSeries filter_resonant(const PoissonSeries& s, int m, int j) {
    if (m == 0 && j == 0) throw std::invalid_argument("filter_resonant: (m, j) must not be (0, 0)");
    PoissonSeries out(s.truncation());
    for (const auto& [k, c] : s.terms()) {
        const long long lock = static_cast<long long>(j) * k.k_theta +
                               static_cast<long long>(m) * k.k_phi;
        if (lock == 0) out.add_term(c, k.i_pow, k.j_half, k.k_theta, k.k_phi, k.kind);
    }
    return out;
}

}  // namespace ringres
