#include <doctest.h>

#include <cmath>

#include "ringres/dynamics.hpp"

using namespace ringres;

namespace {

// plain pendulum H = x^2/2 - cos(ang)
ReducedHamiltonian pendulum() {
    ReducedHamiltonian h;
    h.angle_name = "psi";
    h.angle_multiplier = 1;
    h.normal = {0.0, 0.0, 0.5};
    h.harmonic = {{-1.0}};
    return h;
}

ReducedHamiltonian corotation_reduced(const char* body, double e) {
    const PotentialModel model = PotentialModel::build(preset_body(body), 5);
    const ResonanceSpec spec = resonant_radius(model, 1, 1);
    const EpicyclicHamiltonian epi =
        assemble(ExpansionCenter::at_radius(model, spec.r_res), model);
    return reduce_corotation(epi, e);
}

struct LindbladSetup {
    PotentialModel model;
    ResonanceSpec spec;
    EpicyclicHamiltonian epi;
    LindbladSetup(const char* body, int q)
        : model(PotentialModel::build(preset_body(body), 5)),
          spec(resonant_radius(model, 1, q)),
          epi(assemble(ExpansionCenter::at_radius(model, spec.r_res), model)) {}
    ReducedHamiltonian at(double e) const { return reduce_lindblad(epi, spec, e); }
};

const EquilibriumPoint* nearest(const std::vector<EquilibriumPoint>& pts, double ang, double act) {
    const EquilibriumPoint* best = nullptr;
    double dist = 1e300;
    for (const auto& p : pts) {
        const double d = std::hypot(p.angle - ang, p.action - act);
        if (d < dist) {
            dist = d;
            best = &p;
        }
    }
    return best;
}

}  // namespace

TEST_CASE("polynomial real roots") {
    // (x-1)(x+2)(x-5) = x^3 - 4x^2 - 7x + 10
    const auto roots = poly_real_roots({10.0, -7.0, -4.0, 1.0}, -10.0, 10.0);
    REQUIRE(roots.size() == 3);
    CHECK(roots[0] == doctest::Approx(-2.0).epsilon(1e-12));
    CHECK(roots[1] == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(roots[2] == doctest::Approx(5.0).epsilon(1e-12));
    CHECK(poly_real_roots({1.0, 0.0, 1.0}, -10.0, 10.0).empty());  // x^2 + 1
    CHECK(poly_real_roots({-4.0, 0.0, 1.0}, 0.0, 10.0).size() == 1);
}

TEST_CASE("integrator on the pendulum") {
    const ReducedHamiltonian h = pendulum();

    // equilibrium stays put
    const Trajectory still = integrate(h, 0.0, 0.0, 50.0, 0.05);
    for (double a : still.action) CHECK(std::abs(a) < 1e-10);

    // small oscillations have period 2 pi to 0.1%
    const double amp = 1e-3;
    const Trajectory osc = integrate(h, amp, 0.0, 25.0, 0.002);
    double period = 0.0;
    int crossings = 0;
    double last_cross = 0.0;
    for (std::size_t k = 1; k < osc.angle.size(); ++k) {
        if (osc.angle[k - 1] < 0.0 && osc.angle[k] >= 0.0) {
            const double frac = -osc.angle[k - 1] / (osc.angle[k] - osc.angle[k - 1]);
            const double t = osc.time[k - 1] + frac * (osc.time[k] - osc.time[k - 1]);
            if (crossings > 0) period = t - last_cross;
            last_cross = t;
            ++crossings;
        }
    }
    REQUIRE(crossings >= 2);
    CHECK(period == doctest::Approx(2.0 * M_PI).epsilon(1e-3));

    // eighth-order convergence: halving dt improves the endpoint by ~2^8
    auto endpoint_error = [&](double dt) {
        const Trajectory ref = integrate(h, 1.0, 0.3, 10.0, 1e-4);
        const Trajectory t = integrate(h, 1.0, 0.3, 10.0, dt);
        return std::abs(t.angle.back() - ref.angle.back()) +
               std::abs(t.action.back() - ref.action.back());
    };
    const double e1 = endpoint_error(0.2), e2 = endpoint_error(0.1);
    CHECK(e1 / e2 > 100.0);
    CHECK(e1 / e2 < 600.0);

    // reversibility
    Trajectory fwd = integrate(h, 0.8, 0.2, 12.0, 0.01);
    const double end_ang = fwd.angle.back(), end_act = fwd.action.back();
    double state[2] = {end_ang, end_act};
    const DerivFn deriv = [&h](const double* st, double* d) {
        d[0] = h.d_action(st[1], st[0]);
        d[1] = -h.d_angle(st[1], st[0]);
    };
    for (int k = 0; k < 1200; ++k) rk8_step(deriv, state, 2, -0.01);
    CHECK(state[0] == doctest::Approx(0.8).epsilon(1e-9));
    CHECK(state[1] == doctest::Approx(0.2).epsilon(1e-9));

    // too-large step is rejected through the drift guard
    CHECK_THROWS_AS(integrate(h, 3.0, 0.0, 200.0, 1.7), std::runtime_error);
}

TEST_CASE("corotation trajectory energy drift") {
    const ReducedHamiltonian h = corotation_reduced("AS", 1e-3);
    // libration frequency near the centre: omega = sqrt(2 alpha2 * |H_tt|)
    const double omega =
        std::sqrt(2.0 * h.normal[2] * std::abs(h.d2_angle(0.0, 0.0)));
    const double period = 2.0 * M_PI / omega;
    const Trajectory t = integrate(h, 0.05, 3.0, 1e3 * period, period / 96.0);
    CHECK(t.energy_drift <= 1e-9);
}

TEST_CASE("equilibria and classification on the pendulum") {
    const ReducedHamiltonian h = pendulum();
    const auto pts = find_equilibria(h, -2.0, 2.0, 32);
    REQUIRE(pts.size() == 2);
    const EquilibriumPoint* centre = nearest(pts, 0.0, 0.0);
    const EquilibriumPoint* saddle = nearest(pts, M_PI, 0.0);
    CHECK(centre->kind == EquilibriumPoint::Kind::Centre);
    CHECK(saddle->kind == EquilibriumPoint::Kind::Saddle);
    CHECK(std::abs(centre->angle) < 1e-10);
    CHECK(saddle->angle == doctest::Approx(M_PI).epsilon(1e-10));

    // gradient invariant on every reported point
    for (const auto& p : pts) {
        CHECK(std::abs(h.d_action(p.action, p.angle)) < 1e-10);
        CHECK(std::abs(h.d_angle(p.action, p.angle)) < 1e-10);
    }

    // degenerate Hessian flagged
    ReducedHamiltonian flat = pendulum();
    flat.harmonic[0][0] = 0.0;
    double det = 0.0;
    CHECK(classify(flat, 0.3, 0.0, &det) == EquilibriumPoint::Kind::Degenerate);
    CHECK(det == 0.0);

    // separatrix of the pendulum: E_s = 1, H(x, 0) = x^2/2 - 1 = 1 -> x = 2
    const double width = separatrix_amplitude(flat = pendulum(), *centre);
    CHECK(width == doctest::Approx(4.0).epsilon(1e-10));
}

TEST_CASE("corotation equilibrium pattern") {
    const ReducedHamiltonian h = corotation_reduced("AS", 1e-3);
    const auto pts = find_equilibria(h);
    REQUIRE(pts.size() == 4);
    const double expected_angles[4] = {0.0, M_PI / 2, M_PI, 3 * M_PI / 2};
    const EquilibriumPoint::Kind expected_kind[4] = {
        EquilibriumPoint::Kind::Centre, EquilibriumPoint::Kind::Saddle,
        EquilibriumPoint::Kind::Centre, EquilibriumPoint::Kind::Saddle};
    for (int i = 0; i < 4; ++i) {
        CHECK(pts[i].angle == doctest::Approx(expected_angles[i]).epsilon(1e-9));
        CHECK(pts[i].kind == expected_kind[i]);
    }
}

TEST_CASE("lindblad equilibria against the published points") {
    const LindbladSetup as12("AS", 2);
    const auto pts12 = find_equilibria(as12.at(1e-3));
    const double expect12[4][2] = {
        {0.0, 0.0549}, {M_PI, 0.2268}, {1.9231, 0.1703}, {4.3600, 0.1703}};
    const bool is_centre12[4] = {true, true, false, false};
    for (int i = 0; i < 4; ++i) {
        const EquilibriumPoint* p = nearest(pts12, expect12[i][0], expect12[i][1]);
        REQUIRE(p != nullptr);
        CHECK(std::abs(p->angle - expect12[i][0]) < 1e-3);
        CHECK(std::abs(p->action - expect12[i][1]) < 1e-3);
        CHECK((p->kind == EquilibriumPoint::Kind::Centre) == is_centre12[i]);
    }

    const LindbladSetup as13("AS", 3);
    const auto pts13 = find_equilibria(as13.at(1e-3));
    const EquilibriumPoint* c = nearest(pts13, 0.0, -0.1201);
    const EquilibriumPoint* s = nearest(pts13, M_PI, -0.1200);
    CHECK(std::abs(c->action + 0.1201) < 1e-3);
    CHECK(std::abs(s->action + 0.1200) < 1e-3);
    CHECK(c->kind == EquilibriumPoint::Kind::Centre);
    CHECK(s->kind == EquilibriumPoint::Kind::Saddle);

    // level sets are even in the angle
    const ReducedHamiltonian h = as13.at(1e-3);
    for (double g : {-0.2, 0.0, 0.15})
        for (double a : {0.3, 1.2, 2.8})
            CHECK(h.energy(g, a) == doctest::Approx(h.energy(g, -a)).epsilon(1e-14));
}

TEST_CASE("pendulum amplitude formula") {
    const ReducedHamiltonian as = corotation_reduced("AS", 1e-3);
    CHECK(pendulum_amplitude(as) == doctest::Approx(53.5516).epsilon(5e-3));
    const ReducedHamiltonian ha = corotation_reduced("HA", 1e-3);
    CHECK(pendulum_amplitude(ha) == doctest::Approx(216.419).epsilon(5e-3));

    // doubling alpha3 scales the amplitude by sqrt(2)
    ReducedHamiltonian scaled = as;
    for (auto& c : scaled.harmonic[0]) c *= 2.0;
    CHECK(pendulum_amplitude(scaled) ==
          doctest::Approx(std::sqrt(2.0) * pendulum_amplitude(as)).epsilon(1e-12));

    // wrong signs are rejected
    ReducedHamiltonian wrong = as;
    wrong.harmonic[0][0] = std::abs(wrong.harmonic[0][0]);
    CHECK_THROWS_AS(pendulum_amplitude(wrong), std::domain_error);
    CHECK_THROWS_AS(pendulum_amplitude(pendulum()), std::domain_error);
}

TEST_CASE("separatrix amplitudes") {
    const ReducedHamiltonian as = corotation_reduced("AS", 1e-3);
    EquilibriumPoint centre;
    centre.angle = 0.0;
    centre.action = -as.normal[1] / (2.0 * as.normal[2]);
    CHECK(separatrix_amplitude(as, centre) == doctest::Approx(53.5554).epsilon(1e-2));
    // agrees with the pendulum closed form to a few percent
    CHECK(separatrix_amplitude(as, centre) ==
          doctest::Approx(pendulum_amplitude(as)).epsilon(0.03));

    const ReducedHamiltonian ha = corotation_reduced("HA", 1e-3);
    centre.action = -ha.normal[1] / (2.0 * ha.normal[2]);
    CHECK(separatrix_amplitude(ha, centre) == doctest::Approx(219.515).epsilon(1e-2));

    const LindbladSetup ha12("HA", 2);
    const ReducedHamiltonian h12 = ha12.at(1e-3);
    const auto pts = find_equilibria(h12);
    const EquilibriumPoint* c1 = nearest(pts, 0.0, -1.3113);
    const EquilibriumPoint* c2 = nearest(pts, M_PI, 1.8061);
    CHECK(separatrix_amplitude(h12, *c1) == doctest::Approx(2.9657).epsilon(0.02));
    CHECK(separatrix_amplitude(h12, *c2) == doctest::Approx(3.2692).epsilon(0.02));

    const LindbladSetup ha13("HA", 3);
    const ReducedHamiltonian h13 = ha13.at(1e-3);
    const auto pts13 = find_equilibria(h13);
    const EquilibriumPoint* c3 = nearest(pts13, 0.0, -0.1151);
    CHECK(separatrix_amplitude(h13, *c3) == doctest::Approx(8.7360e-3).epsilon(0.02));

    // no bounding saddle: pure rotation
    ReducedHamiltonian free;
    free.angle_multiplier = 1;
    free.normal = {0.0, 1e-5, 1e-6};
    CHECK_THROWS_AS(separatrix_amplitude(free, centre), std::runtime_error);
}

TEST_CASE("libration measure bundles both amplitudes") {
    const ReducedHamiltonian as = corotation_reduced("AS", 1e-3);
    EquilibriumPoint centre;
    centre.angle = 0.0;
    centre.action = -as.normal[1] / (2.0 * as.normal[2]);
    centre.kind = EquilibriumPoint::Kind::Centre;
    const LibrationMeasure m = libration_measure(as, centre);
    CHECK(m.pendulum_semi_amplitude > 0.0);
    CHECK(m.separatrix_amplitude > 0.0);
    // the two conventions agree within a few percent at small e
    CHECK(m.separatrix_amplitude ==
          doctest::Approx(m.pendulum_semi_amplitude).epsilon(0.03));
    CHECK(m.centre.action == centre.action);
}

TEST_CASE("bifurcation scan on narrow windows") {
    // corotation HA: saddle-node pair appears near e = 0.328
    {
        const PotentialModel model = PotentialModel::build(preset_body("HA"), 5);
        const ResonanceSpec spec = resonant_radius(model, 1, 1);
        const EpicyclicHamiltonian epi =
            assemble(ExpansionCenter::at_radius(model, spec.r_res), model);
        auto builder = [&](double e) { return reduce_corotation(epi, e); };
        const auto events = bifurcation_scan(builder, 0.30, 0.36, 61, 32);
        REQUIRE(events.size() == 1);
        CHECK(events[0].kind == BifurcationEvent::Kind::SaddleNode);
        CHECK(events[0].direction == BifurcationEvent::Direction::Creation);
        CHECK(std::abs(events[0].e_crit - 0.328) <= 0.005);
        CHECK(events[0].angle > 0.0);
        CHECK(events[0].angle < M_PI / 2);
    }
    // corotation AS: nothing in the same window
    {
        const PotentialModel model = PotentialModel::build(preset_body("AS"), 5);
        const ResonanceSpec spec = resonant_radius(model, 1, 1);
        const EpicyclicHamiltonian epi =
            assemble(ExpansionCenter::at_radius(model, spec.r_res), model);
        auto builder = [&](double e) { return reduce_corotation(epi, e); };
        CHECK(bifurcation_scan(builder, 0.30, 0.36, 31, 32).empty());
    }
    // 1:2 AS: pitchfork at psi = pi near e = 0.0029
    {
        const LindbladSetup as12("AS", 2);
        auto builder = [&](double e) { return as12.at(e); };
        const auto events = bifurcation_scan(builder, 5e-4, 0.01, 40, 48);
        bool found = false;
        for (const auto& ev : events) {
            if (std::abs(ev.angle - M_PI) < 1e-9 && std::abs(ev.e_crit - 0.0029) < 0.003 &&
                ev.kind == BifurcationEvent::Kind::Pitchfork)
                found = true;
        }
        CHECK(found);
    }
    // event bracketing invariant
    CHECK_THROWS_AS(bifurcation_scan([](double) { return pendulum(); }, 0.2, 0.1, 10, 8),
                    std::invalid_argument);
}
