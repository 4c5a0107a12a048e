#include <doctest.h>

#include <cmath>
#include <random>
#include <sstream>

#include "ringres/series.hpp"

using namespace ringres;

namespace {

Truncation wide() {
    Truncation t;
    t.max_i_pow = 4;
    t.max_j_half = 24;
    t.max_k_theta = 24;
    t.max_k_phi = 40;
    t.drop_threshold = 0.0;
    return t;
}

PoissonSeries term(double c, int i, int h, int kt, int kp, Trig kind) {
    PoissonSeries s(wide());
    s.add_term(c, i, h, kt, kp, kind);
    return s;
}

double max_coeff(const PoissonSeries& s) {
    double m = 0.0;
    for (const auto& [k, c] : s.terms()) m = std::max(m, std::abs(c));
    return m;
}

double max_diff(const PoissonSeries& a, const PoissonSeries& b) {
    double m = 0.0;
    for (const auto& [k, c] : a.terms()) m = std::max(m, std::abs(c - b.coefficient(k)));
    for (const auto& [k, c] : b.terms()) m = std::max(m, std::abs(c - a.coefficient(k)));
    return m;
}

PoissonSeries random_series(std::mt19937& rng, int n_terms, int max_k = 3) {
    std::uniform_real_distribution<double> coeff(-2.0, 2.0);
    std::uniform_int_distribution<int> kt(0, max_k), kp(-max_k, max_k), ip(0, 1), jh(0, 4);
    PoissonSeries s(wide());
    for (int i = 0; i < n_terms; ++i)
        s.add_term(coeff(rng), ip(rng), jh(rng), kt(rng), kp(rng),
                   rng() % 2 ? Trig::Sin : Trig::Cos);
    return s;
}

}  // namespace

TEST_CASE("add and scale") {
    const PoissonSeries s = term(1.5, 1, 2, 2, 0, Trig::Cos);
    const PoissonSeries zero(wide());
    CHECK(max_diff(add(s, zero), s) == 0.0);
    CHECK(add(s, s.scaled(-1.0)).empty());
    const PoissonSeries two = add(term(1, 0, 0, 1, 0, Trig::Cos), term(1, 0, 0, 1, 0, Trig::Cos));
    CHECK(two.size() == 1);
    CHECK(two.coefficient({0, 0, 1, 0, Trig::Cos}) == 2.0);
}

TEST_CASE("canonical form") {
    // cos(-2 theta + phi) == cos(2 theta - phi)
    const PoissonSeries c = term(1.0, 0, 0, -2, 1, Trig::Cos);
    CHECK(c.coefficient({0, 0, 2, -1, Trig::Cos}) == 1.0);
    // sin(-2 theta + phi) == -sin(2 theta - phi)
    const PoissonSeries s = term(1.0, 0, 0, -2, 1, Trig::Sin);
    CHECK(s.coefficient({0, 0, 2, -1, Trig::Sin}) == -1.0);
    // sin(0) dropped
    CHECK(term(1.0, 0, 0, 0, 0, Trig::Sin).empty());
    // pointwise agreement between canonical and raw representation
    for (double th : {0.2, 1.1})
        for (double ph : {0.5, 2.9})
            CHECK(s.evaluate(0, 0, th, ph) ==
                  doctest::Approx(std::sin(-2 * th + ph)).epsilon(1e-13));
}

TEST_CASE("products linearize trig") {
    const PoissonSeries ct = term(1, 0, 0, 1, 0, Trig::Cos);
    const PoissonSeries prod = mul(ct, ct);  // cos^2 th = 1/2 + 1/2 cos 2th
    CHECK(prod.coefficient({0, 0, 0, 0, Trig::Cos}) == doctest::Approx(0.5));
    CHECK(prod.coefficient({0, 0, 2, 0, Trig::Cos}) == doctest::Approx(0.5));

    const PoissonSeries sp = term(1, 0, 0, 0, 1, Trig::Sin);
    const PoissonSeries sp2 = mul(sp, sp);  // 1/2 - 1/2 cos 2phi
    CHECK(sp2.coefficient({0, 0, 0, 0, Trig::Cos}) == doctest::Approx(0.5));
    CHECK(sp2.coefficient({0, 0, 0, 2, Trig::Cos}) == doctest::Approx(-0.5));

    const PoissonSeries sp3 = mul(sp2, sp);  // (3/4) sin phi - (1/4) sin 3phi
    CHECK(sp3.coefficient({0, 0, 0, 1, Trig::Sin}) == doctest::Approx(0.75));
    CHECK(sp3.coefficient({0, 0, 0, 3, Trig::Sin}) == doctest::Approx(-0.25));

    // pointwise product property on a random grid
    std::mt19937 rng(11u);
    for (int rep = 0; rep < 8; ++rep) {
        const PoissonSeries a = random_series(rng, 5), b = random_series(rng, 5);
        const PoissonSeries ab = mul(a, b);
        std::uniform_real_distribution<double> ang(0.0, 6.28), act(0.0, 2.0);
        for (int k = 0; k < 6; ++k) {
            const double I = act(rng), J = act(rng), th = ang(rng), ph = ang(rng);
            const double lhs = ab.evaluate(I, J, th, ph);
            const double rhs = a.evaluate(I, J, th, ph) * b.evaluate(I, J, th, ph);
            CHECK(lhs == doctest::Approx(rhs).epsilon(1e-10));
        }
    }
}

TEST_CASE("power of sin phi") {
    CHECK(power_sin_phi(0, wide()).coefficient({0, 0, 0, 0, Trig::Cos}) == 1.0);
    const PoissonSeries s2 = power_sin_phi(2, wide());
    CHECK(s2.coefficient({0, 0, 0, 0, Trig::Cos}) == doctest::Approx(0.5));
    CHECK(s2.coefficient({0, 0, 0, 2, Trig::Cos}) == doctest::Approx(-0.5));
    const PoissonSeries s4 = power_sin_phi(4, wide());
    CHECK(s4.coefficient({0, 0, 0, 0, Trig::Cos}) == doctest::Approx(3.0 / 8));
    CHECK(s4.coefficient({0, 0, 0, 2, Trig::Cos}) == doctest::Approx(-0.5));
    CHECK(s4.coefficient({0, 0, 0, 4, Trig::Cos}) == doctest::Approx(1.0 / 8));
    for (int j = 1; j <= 9; ++j) {
        const PoissonSeries sj = power_sin_phi(j, wide());
        for (double ph = 0.1; ph < 6.2; ph += 0.83)
            CHECK(sj.evaluate(0, 0, 0, ph) ==
                  doctest::Approx(std::pow(std::sin(ph), j)).epsilon(1e-12));
    }
    CHECK_THROWS_AS(power_sin_phi(17, wide()), std::invalid_argument);
}

TEST_CASE("rho substitution") {
    const double kap = 3.7e-4;
    // rho -> sqrt(2J/k) sin phi
    PoissonSeries rho(wide());
    rho.add_term(1.0, 0, 1, 0, 0, Trig::Cos);  // j_half used as rho power
    const PoissonSeries r1 = substitute_rho(rho, kap);
    CHECK(r1.coefficient({0, 1, 0, 1, Trig::Sin}) ==
          doctest::Approx(std::sqrt(2.0 / kap)).epsilon(1e-14));

    // rho^2 -> (2J/k)(1/2 - 1/2 cos 2phi)
    PoissonSeries rho2(wide());
    rho2.add_term(1.0, 0, 2, 0, 0, Trig::Cos);
    const PoissonSeries r2 = substitute_rho(rho2, kap);
    CHECK(r2.coefficient({0, 2, 0, 0, Trig::Cos}) == doctest::Approx(1.0 / kap).epsilon(1e-14));
    CHECK(r2.coefficient({0, 2, 0, 2, Trig::Cos}) == doctest::Approx(-1.0 / kap).epsilon(1e-14));

    // rho^2 cos 2theta -> (J/k)(cos 2th - 1/2 cos(2th+2ph) - 1/2 cos(2th-2ph))
    PoissonSeries rc(wide());
    rc.add_term(1.0, 0, 2, 2, 0, Trig::Cos);
    const PoissonSeries r3 = substitute_rho(rc, kap);
    CHECK(r3.coefficient({0, 2, 2, 0, Trig::Cos}) == doctest::Approx(1.0 / kap));
    CHECK(r3.coefficient({0, 2, 2, 2, Trig::Cos}) == doctest::Approx(-0.5 / kap));
    CHECK(r3.coefficient({0, 2, 2, -2, Trig::Cos}) == doctest::Approx(-0.5 / kap));
    // pointwise oracle on a (theta, phi) grid
    for (double th = 0.0; th < 6.3; th += 0.7)
        for (double ph = 0.05; ph < 6.3; ph += 0.9) {
            const double J = 1.3;
            const double rho_val = std::sqrt(2.0 * J / kap) * std::sin(ph);
            CHECK(r3.evaluate(0.0, J, th, ph) ==
                  doctest::Approx(rho_val * rho_val * std::cos(2 * th)).epsilon(1e-12));
        }
}

TEST_CASE("averages and filters") {
    const PoissonSeries sp2 = power_sin_phi(2, wide());
    const PoissonSeries avg = average_phi(sp2);
    CHECK(avg.size() == 1);
    CHECK(avg.coefficient({0, 0, 0, 0, Trig::Cos}) == doctest::Approx(0.5));
    CHECK(average_phi(term(1, 0, 0, 2, 1, Trig::Cos)).empty());
    CHECK(average_theta(term(1, 0, 0, 2, 1, Trig::Cos)).empty());

    // resonant filters
    PoissonSeries mix(wide());
    mix.add_term(1.0, 0, 0, 2, 0, Trig::Cos);   // cos 2th       (corotation family)
    mix.add_term(2.0, 0, 0, 4, 0, Trig::Cos);   // cos 4th
    mix.add_term(3.0, 0, 0, 2, 2, Trig::Cos);   // cos(2th+2ph)  (1:2 family)
    mix.add_term(4.0, 0, 0, 2, -2, Trig::Cos);  // anti-resonant combination
    mix.add_term(5.0, 0, 0, 2, 4, Trig::Cos);   // cos(2th+4ph)  (1:3 family)
    mix.add_term(6.0, 1, 2, 0, 0, Trig::Cos);   // action-only

    const PoissonSeries cor = filter_resonant(mix, 1, 0);
    CHECK(cor.size() == 3);  // cos2th, cos4th, action term
    CHECK(cor.coefficient({0, 0, 2, 0, Trig::Cos}) == 1.0);
    CHECK(cor.coefficient({1, 2, 0, 0, Trig::Cos}) == 6.0);

    const PoissonSeries r12 = filter_resonant(mix, -1, 1);
    CHECK(r12.size() == 2);
    CHECK(r12.coefficient({0, 0, 2, 2, Trig::Cos}) == 3.0);

    const PoissonSeries r13 = filter_resonant(mix, -1, 2);
    CHECK(r13.size() == 2);
    CHECK(r13.coefficient({0, 0, 2, 4, Trig::Cos}) == 5.0);

    CHECK_THROWS_AS(filter_resonant(mix, 0, 0), std::invalid_argument);
}

TEST_CASE("phi average extracts first harmonic content") {
    // <s sin phi>_phi equals the k_phi = +-1 sine content of s, checked by
    // quadrature at fixed actions
    std::mt19937 rng(23u);
    const PoissonSeries s = random_series(rng, 10);
    const PoissonSeries sp = term(1, 0, 0, 0, 1, Trig::Sin);
    const PoissonSeries picked = average_phi(mul(s, sp));
    const double I = 0.8, J = 1.7, th = 0.9;
    constexpr int N = 512;
    double quad = 0.0;
    for (int k = 0; k < N; ++k) {
        const double ph = 2.0 * M_PI * k / N;
        quad += s.evaluate(I, J, th, ph) * std::sin(ph);
    }
    quad /= N;
    CHECK(picked.evaluate(I, J, th, 0.0) == doctest::Approx(quad).epsilon(1e-10));
}

TEST_CASE("ring axioms under matching truncation") {
    std::mt19937 rng(5u);
    for (int rep = 0; rep < 10; ++rep) {
        const PoissonSeries a = random_series(rng, 6), b = random_series(rng, 6),
                            c = random_series(rng, 6);
        const double scale = std::max(max_coeff(mul(mul(a, b), c)), 1e-300);
        CHECK(max_diff(mul(mul(a, b), c), mul(a, mul(b, c))) <= 1e-12 * scale);
        CHECK(max_diff(mul(a, add(b, c)), add(mul(a, b), mul(a, c))) <= 1e-12 * scale);
    }
}

TEST_CASE("truncation behavior") {
    // enlarging bounds never changes already-present keys
    std::mt19937 rng(31u);
    const PoissonSeries a = random_series(rng, 8), b = random_series(rng, 8);
    Truncation tight = wide();
    tight.max_k_theta = 4;
    tight.max_k_phi = 5;
    tight.max_j_half = 6;
    PoissonSeries at(tight), bt(tight);
    for (const auto& [k, c] : a.terms()) at.add_term(c, k.i_pow, k.j_half, k.k_theta, k.k_phi, k.kind);
    for (const auto& [k, c] : b.terms()) bt.add_term(c, k.i_pow, k.j_half, k.k_theta, k.k_phi, k.kind);
    const PoissonSeries small = mul(at, bt);
    const PoissonSeries big = mul(a, b);
    for (const auto& [k, c] : small.terms())
        CHECK(c == doctest::Approx(big.coefficient(k)).epsilon(1e-15));

    // drop threshold prunes relative to the largest coefficient
    Truncation pruning = wide();
    pruning.drop_threshold = 1e-6;
    PoissonSeries p(pruning);
    p.add_term(1.0, 0, 0, 1, 0, Trig::Cos);
    p.add_term(1e-9, 0, 0, 2, 0, Trig::Cos);
    p.prune();
    CHECK(p.size() == 1);
}

TEST_CASE("derivative series") {
    std::mt19937 rng(77u);
    const PoissonSeries s = random_series(rng, 10);
    const PoissonSeries di = s.derivative_i();
    const PoissonSeries dth = s.derivative_theta();
    const PoissonSeries dph = s.derivative_phi();
    const double I = 0.9, J = 1.4, h = 1e-6;
    for (double th : {0.4, 2.2})
        for (double ph : {0.9, 4.4}) {
            CHECK(di.evaluate(I, J, th, ph) ==
                  doctest::Approx((s.evaluate(I + h, J, th, ph) - s.evaluate(I - h, J, th, ph)) /
                                  (2 * h))
                      .epsilon(1e-7));
            CHECK(dth.evaluate(I, J, th, ph) ==
                  doctest::Approx((s.evaluate(I, J, th + h, ph) - s.evaluate(I, J, th - h, ph)) /
                                  (2 * h))
                      .epsilon(1e-7));
            CHECK(dph.evaluate(I, J, th, ph) ==
                  doctest::Approx((s.evaluate(I, J, th, ph + h) - s.evaluate(I, J, th, ph - h)) /
                                  (2 * h))
                      .epsilon(1e-7));
        }
    // even J powers differentiate within the ring; a bare sqrt(J) does not
    const PoissonSeries even = term(2.0, 0, 4, 2, 0, Trig::Cos);
    CHECK(even.derivative_j().coefficient({0, 2, 2, 0, Trig::Cos}) == doctest::Approx(4.0));
    CHECK_THROWS_AS(term(1.0, 0, 1, 0, 1, Trig::Sin).derivative_j(), std::domain_error);
}

TEST_CASE("evaluate and csv") {
    const PoissonSeries empty(wide());
    CHECK(empty.evaluate(1.0, 1.0, 0.5, 0.5) == 0.0);
    const PoissonSeries s = term(2.0, 0, 2, 2, 0, Trig::Cos);
    CHECK(s.evaluate(0.0, 1.0, 0.0, 0.0) == doctest::Approx(2.0));
    CHECK_THROWS_AS(s.evaluate(0.0, -1.0, 0.0, 0.0), std::invalid_argument);

    std::mt19937 rng(47u);
    const PoissonSeries r = random_series(rng, 12);
    std::stringstream buf;
    r.write_csv(buf);
    const PoissonSeries back = PoissonSeries::read_csv(buf, wide());
    CHECK(max_diff(r, back) == 0.0);

    std::stringstream buf2, buf3;
    r.write_csv(buf2);
    r.write_csv(buf3);
    CHECK(buf2.str() == buf3.str());  // deterministic ordering
}
