#include <doctest.h>

#include <cmath>

#include "ringres/resonance.hpp"

using namespace ringres;

namespace {

struct Reduced {
    PotentialModel model;
    ResonanceSpec spec;
    EpicyclicHamiltonian epi;

    Reduced(const char* body, int p, int q, int ell = 5, int rho = 16)
        : model(PotentialModel::build(preset_body(body), ell)),
          spec(resonant_radius(model, p, q)),
          epi(assemble(ExpansionCenter::at_radius(model, spec.r_res, rho), model)) {}
};

}  // namespace

TEST_CASE("keplerian radii") {
    const BodyParams as = preset_body("AS");
    // closed form: (GM (T_rot / 2 pi)^2)^(1/3) for corotation
    const double direct =
        std::cbrt(as.gm * std::pow(as.rotation_period / (2.0 * M_PI), 2));
    CHECK(keplerian_radius(as, 1, 1) == doctest::Approx(direct).epsilon(1e-15));
    CHECK(keplerian_radius(as, 1, 1) == doctest::Approx(1119.3).epsilon(1e-4));
    CHECK(keplerian_radius(as, 1, 2) ==
          doctest::Approx(keplerian_radius(as, 1, 1) * std::pow(2.0, 2.0 / 3)).epsilon(1e-15));
    CHECK(keplerian_radius(as, 1, 3) ==
          doctest::Approx(keplerian_radius(as, 1, 1) * std::pow(3.0, 2.0 / 3)).epsilon(1e-15));
    CHECK_THROWS_AS(keplerian_radius(as, 0, 1), std::invalid_argument);
}

TEST_CASE("resonant radii reproduce the benchmark table") {
    const double expected[2][3] = {{1124.5, 1776.57, 2327.16}, {1176.82, 1771.35, 2316.93}};
    const char* names[2] = {"AS", "HA"};
    for (int b = 0; b < 2; ++b) {
        const PotentialModel model = PotentialModel::build(preset_body(names[b]), 5);
        for (int q = 1; q <= 3; ++q) {
            const ResonanceSpec spec = resonant_radius(model, 1, q);
            CHECK(std::abs(spec.r_res - expected[b][q - 1]) <= 1.0);
            // residual invariant
            const Frequencies f = frequencies(model, spec.r_res);
            const double resid = spec.j * f.kappa - spec.m * (f.n - model.body.spin_rate);
            CHECK(std::abs(resid) <= 1e-12 * std::abs(spec.m) * model.body.spin_rate);
        }
    }
}

TEST_CASE("sphere collapses to kepler") {
    const BodyParams sphere = BodyParams::make("s", 600.0, 600.0, 600.0, 1e21, 8 * 3600.0);
    const PotentialModel ms = PotentialModel::build(sphere, 5);
    for (int q = 1; q <= 3; ++q) {
        const ResonanceSpec spec = resonant_radius(ms, 1, q);
        CHECK(std::abs(spec.r_res - spec.r_kep) <= 1e-10 * spec.r_kep);
    }
    CHECK(radius_discrepancy(ms, 1, 2) <= 1e-10);
}

TEST_CASE("radius discrepancy") {
    const PotentialModel mas = PotentialModel::build(preset_body("AS"), 5);
    const PotentialModel mha = PotentialModel::build(preset_body("HA"), 5);
    CHECK(radius_discrepancy(mas, 1, 1) == doctest::Approx(4.7e-3).epsilon(0.05));
    CHECK(radius_discrepancy(mha, 1, 1) > radius_discrepancy(mas, 1, 1));
    // no sign change of the residual within the bracket window
    CHECK_THROWS_AS(resonant_radius(mas, 50, 1), NoBracketError);
}

TEST_CASE("corotation reduction") {
    const Reduced as("AS", 1, 1);
    const ReducedHamiltonian red = reduce_corotation(as.epi, 1e-3);
    CHECK(red.angle_multiplier == 2);
    CHECK(red.normal.size() == 3);
    CHECK(red.harmonic.size() == 5);
    CHECK(red.j0 == doctest::Approx(2.7590e-4).epsilon(1e-4));

    // published coefficients (2 displayed digits, truncated toward zero)
    CHECK(red.normal[1] == doctest::Approx(6.6e-10).epsilon(0.03));
    CHECK(red.normal[2] == doctest::Approx(3.9e-7).epsilon(0.03));
    CHECK(red.harmonic[0][0] == doctest::Approx(-5.6e-4).epsilon(0.03));
    CHECK(red.harmonic[1][0] == doctest::Approx(-5.5e-6).epsilon(0.03));
    CHECK(red.harmonic[2][0] == doctest::Approx(-8.0e-8).epsilon(0.03));

    const Reduced ha("HA", 1, 1);
    const ReducedHamiltonian redh = reduce_corotation(ha.epi, 1e-3);
    CHECK(redh.harmonic[0][0] == doctest::Approx(-8.4e-3).epsilon(0.03));
    CHECK(redh.harmonic[4][0] == doctest::Approx(-1.0e-5).epsilon(0.08));

    // sphere: all harmonics vanish
    const BodyParams sphere = BodyParams::make("s", 600.0, 600.0, 600.0, 1e21, 8 * 3600.0);
    const PotentialModel ms = PotentialModel::build(sphere, 5);
    const ResonanceSpec cs = resonant_radius(ms, 1, 1);
    const EpicyclicHamiltonian es = assemble(ExpansionCenter::at_radius(ms, cs.r_res), ms);
    const ReducedHamiltonian reds = reduce_corotation(es, 1e-3);
    for (const auto& h : reds.harmonic)
        for (double c : h) CHECK(c == 0.0);

    CHECK_THROWS_AS(reduce_corotation(as.epi, 0.0), std::invalid_argument);
}

TEST_CASE("lindblad reduction levels") {
    const Reduced as12("AS", 1, 2);
    const ReducedHamiltonian r12 = reduce_lindblad(as12.epi, as12.spec, 1e-3);
    CHECK(r12.j0 == doctest::Approx(3.4527e-4).epsilon(1e-3));
    CHECK(r12.i0 == doctest::Approx(1.7064e-1).epsilon(1e-3));
    CHECK(r12.l0 == doctest::Approx(-1.7029e-1).epsilon(1e-3));
    CHECK(r12.harmonic.size() == 5);
    CHECK(r12.normal.size() == 11);

    const Reduced ha13("HA", 1, 3);
    const ReducedHamiltonian r13 = reduce_lindblad(ha13.epi, ha13.spec, 1e-3);
    CHECK(r13.j0 == doctest::Approx(3.9985e-4).epsilon(1e-3));
    CHECK(r13.l0 == doctest::Approx(3.7189e-1).epsilon(1e-3));
    CHECK(r13.harmonic.size() == 4);

    // published leading normal coefficients, 2 truncated digits
    CHECK(r12.normal[2] == doctest::Approx(7.2e-6).epsilon(0.03));
    CHECK(r13.normal[2] == doctest::Approx(1.1e-5).epsilon(0.08));

    // delta_1 of the 1:2 AS case, constant and high-order terms
    CHECK(r12.harmonic[0][0] == doctest::Approx(-2.1e-7).epsilon(0.05));
    CHECK(r12.harmonic[0][8] == doctest::Approx(8.0e-19).epsilon(0.05));

    // unsupported resonance encodings are rejected
    ResonanceSpec bogus = as12.spec;
    bogus.m = -2;
    bogus.j = 3;
    CHECK_THROWS_AS(reduce_lindblad(as12.epi, bogus, 1e-3), std::invalid_argument);
}

TEST_CASE("change of variables consistency") {
    // H_reduced(G, psi) differences equal the filtered 2-DOF series evaluated
    // at pre-image points (constants are dropped in the reduction)
    for (int q : {2, 3}) {
        const Reduced rr("HA", 1, q);
        const ReducedHamiltonian red = reduce_lindblad(rr.epi, rr.spec, 1e-3);
        const PoissonSeries kept = filter_resonant(rr.epi.series, rr.spec.m, rr.spec.j);

        auto preimage_eval = [&](double G, double psi) {
            const double I = 2.0 * G + red.l0;
            const double J = q == 2 ? 2.0 * G + 2.0 * red.l0 : 4.0 * G + red.l0;
            REQUIRE(J >= 0.0);
            // psi = 2 theta + (2 or 4) phi; pick phi = 0.3 arbitrary
            const double phi = 0.3;
            const double theta = 0.5 * (psi - (q == 2 ? 2.0 : 4.0) * phi);
            return kept.evaluate(I, J, theta, phi);
        };
        // choose G with J > 0 on the physical side
        const double g1 = q == 2 ? -red.l0 + 0.05 : 0.05 - red.l0 / 4.0;
        const double g2 = g1 + 0.08;
        const double lhs = red.energy(g1, 0.7) - red.energy(g2, 2.1);
        const double rhs = preimage_eval(g1, 0.7) - preimage_eval(g2, 2.1);
        CHECK(lhs == doctest::Approx(rhs).epsilon(1e-12));
    }
}

TEST_CASE("reduced hamiltonian derivatives") {
    const Reduced as12("AS", 1, 2);
    const ReducedHamiltonian red = reduce_lindblad(as12.epi, as12.spec, 1e-3);
    const double G = 0.11, psi = 1.3, h = 1e-6;
    CHECK(red.d_action(G, psi) ==
          doctest::Approx((red.energy(G + h, psi) - red.energy(G - h, psi)) / (2 * h))
              .epsilon(1e-7));
    CHECK(red.d_angle(G, psi) ==
          doctest::Approx((red.energy(G, psi + h) - red.energy(G, psi - h)) / (2 * h))
              .epsilon(1e-7));
    CHECK(red.d2_action(G, psi) ==
          doctest::Approx((red.d_action(G + h, psi) - red.d_action(G - h, psi)) / (2 * h))
              .epsilon(1e-6));
    CHECK(red.d2_angle(G, psi) ==
          doctest::Approx((red.d_angle(G, psi + h) - red.d_angle(G, psi - h)) / (2 * h))
              .epsilon(1e-6));
    CHECK(red.d2_mixed(G, psi) ==
          doctest::Approx((red.d_action(G, psi + h) - red.d_action(G, psi - h)) / (2 * h))
              .epsilon(1e-6));
}
