/**
 * Truncated Poisson series: sums of terms
 *
 *     coeff * I^i * J^(h/2) * {cos,sin}(k_theta * theta + k_phi * phi)
 *
 * with the half-integer J grading stored as the integer h ("twice-power").
 * This is the carrier for every Hamiltonian expansion in the project.
 *
 * Canonical form: k_theta >= 0, and k_phi >= 0 when k_theta == 0; a sine
 * with both harmonics zero is identically zero and is dropped.  Terms are
 * keyed and ordered lexicographically, so serialized output is stable.
 */

#ifndef RINGRES_SERIES_HPP
#define RINGRES_SERIES_HPP

#include <compare>
#include <cstdint>
#include <iosfwd>
#include <map>

namespace ringres {

enum class Trig : std::uint8_t { Cos = 0, Sin = 1 };

struct TermKey {
    std::uint8_t i_pow = 0;   // power of I
    std::uint8_t j_half = 0;  // twice the power of J
    std::int16_t k_theta = 0;
    std::int16_t k_phi = 0;
    Trig kind = Trig::Cos;

    auto operator<=>(const TermKey&) const = default;
};

struct Truncation {
    int max_i_pow = 2;
    int max_j_half = 16;
    int max_k_theta = 16;
    int max_k_phi = 32;
    // Terms below drop_threshold * max|coeff| are pruned; 0 disables.
    // The relative form keeps the engine scale-free across unit choices.
    double drop_threshold = 1e-18;

    static Truncation tighter(const Truncation& a, const Truncation& b);
};

class PoissonSeries {
public:
    PoissonSeries() = default;
    explicit PoissonSeries(const Truncation& trunc) : trunc_(trunc) {}

    static PoissonSeries constant(double value, const Truncation& trunc);

    const Truncation& truncation() const { return trunc_; }
    const std::map<TermKey, double>& terms() const { return terms_; }
    std::size_t size() const { return terms_.size(); }
    bool empty() const { return terms_.empty(); }

    // Canonicalizes the key, enforces truncation bounds, merges.
    void add_term(double coeff, int i_pow, int j_half, int k_theta, int k_phi, Trig kind);

    double coefficient(const TermKey& key) const;

    PoissonSeries scaled(double factor) const;
    void prune();  // applies drop_threshold

    double evaluate(double I, double J, double theta, double phi) const;

    // Partial derivatives as series (d/dJ of J^(h/2) keeps half powers even/odd).
    PoissonSeries derivative_i() const;
    PoissonSeries derivative_j() const;      // coefficients of J^(h/2 - 1)
    PoissonSeries derivative_theta() const;
    PoissonSeries derivative_phi() const;

    void write_csv(std::ostream& out) const;
    static PoissonSeries read_csv(std::istream& in, const Truncation& trunc);

private:
    Truncation trunc_{};
    std::map<TermKey, double> terms_;
};

PoissonSeries add(const PoissonSeries& s1, const PoissonSeries& s2);
PoissonSeries scale(const PoissonSeries& s, double factor);
PoissonSeries mul(const PoissonSeries& s1, const PoissonSeries& s2);

// Exact finite Fourier expansion of sin^j(phi), j >= 0 (default bound 16).
PoissonSeries power_sin_phi(int j, const Truncation& trunc);

// Interprets target's j_half field as a power of the radial displacement rho
// and substitutes rho^j -> (2J/|kappa*|)^(j/2) sin^j(phi), linearized.
PoissonSeries substitute_rho(const PoissonSeries& target, double kappa_abs);

PoissonSeries average_phi(const PoissonSeries& s);    // keeps k_phi == 0
PoissonSeries average_theta(const PoissonSeries& s);  // keeps k_theta == 0

// Keeps angle-free terms plus harmonics with (k_theta, k_phi) proportional
// to (-m, j), i.e. j*k_theta + m*k_phi == 0.  (m, j) == (0, 0) is invalid.
PoissonSeries filter_resonant(const PoissonSeries& s, int m, int j);

}  // namespace ringres

#endif  // RINGRES_SERIES_HPP
