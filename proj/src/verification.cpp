#include "ringres/verification.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <future>
#include <numbers>
#include <random>
#include <sstream>
#include <thread>

#include "ringres/dynamics.hpp"
#include "ringres/normalform.hpp"
#include "ringres/reference_data.hpp"

namespace ringres {

namespace {

constexpr double kPi = std::numbers::pi;

std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.6g", v);
    return buf;
}

struct Collector {
    std::vector<CheckResult>& out;
    void add(int criterion, const std::string& label, bool pass, const std::string& detail = "") {
        out.push_back({criterion, label, pass, detail});
    }
};

// ---- transcribed closed-form oracle (independent of the generator path) ----

struct CenterConstants {
    double gm, R, r, n, k;
    double pc[4][4];  // pc[l][p] = P_{2l,2p}(0) C_{2l,2p}, l <= 3
};

CenterConstants center_constants(const PotentialModel& model, double r) {
    CenterConstants cc{};
    cc.gm = model.body.gm;
    cc.R = model.shape.ref_radius;
    cc.r = r;
    const Frequencies f = frequencies(model, r);
    cc.n = f.n;
    cc.k = f.kappa;
    for (int l = 0; l <= 3; ++l)
        for (int p = 0; p <= l; ++p)
            cc.pc[l][p] = legendre_even_zero(l, p) * stokes_coefficient(model.body, l, p);
    return cc;
}

double oracle_c(const CenterConstants& c, int i, int j) {
    const double r = c.r, gm = c.gm, R = c.R, n = c.n;
    const double R2 = R * R, R4 = R2 * R2, R6 = R4 * R2;
    switch (i * 10 + j) {
        case 3:
            return -c.pc[0][0] * gm / std::pow(r, 4) + 4.0 * c.pc[1][0] * gm * R2 / std::pow(r, 6) +
                   25.0 * c.pc[2][0] * gm * R4 / std::pow(r, 8) +
                   70.0 * c.pc[3][0] * gm * R6 / std::pow(r, 10);
        case 4:
            return 1.5 * c.pc[0][0] * gm / std::pow(r, 5) -
                   7.5 * c.pc[1][0] * gm * R2 / std::pow(r, 7) -
                   57.5 * c.pc[2][0] * gm * R4 / std::pow(r, 9) -
                   192.5 * c.pc[3][0] * gm * R6 / std::pow(r, 11);
        case 12: return 3.0 * n / (r * r);
        case 13: return -4.0 * n / std::pow(r, 3);
        case 14: return 5.0 * n / std::pow(r, 4);
        case 21: return -1.0 / std::pow(r, 3);
        case 22: return 1.5 / std::pow(r, 4);
        case 23: return -2.0 / std::pow(r, 5);
        case 24: return 2.5 / std::pow(r, 6);
    }
    throw std::logic_error("oracle_c: no transcription");
}

double oracle_v(const CenterConstants& c, int j, int i) {
    // rows j = 0..4, columns l = i..3, literal integer weights
    static const double w[5][3][3] = {
        // {l=1},{l=2},{l=3} weights for i = 1..3 (0 where l < i)
        {{-1, -1, -1}, {0, -1, -1}, {0, 0, -1}},
        {{3, 5, 7}, {0, 5, 7}, {0, 0, 7}},
        {{-6, -15, -28}, {0, -15, -28}, {0, 0, -28}},
        {{10, 35, 84}, {0, 35, 84}, {0, 0, 84}},
        {{-15, -70, -210}, {0, -70, -210}, {0, 0, -210}},
    };
    double sum = 0.0;
    for (int l = 1; l <= 3; ++l) {
        const double weight = w[j][i - 1][l - 1];
        if (weight == 0.0) continue;
        sum += weight * c.pc[l][i] * c.gm * std::pow(c.R, 2 * l) / std::pow(c.r, 2 * l + 1 + j);
    }
    return sum;
}

// alpha/beta transcriptions evaluated at (I, J); index a = |2i|/2 (theta
// harmonic 2a), index b = phi harmonic.
double oracle_alpha(const CenterConstants& c, int a, int b, double I, double J) {
    const double r = c.r, gm = c.gm, n = c.n;
    const double k = c.k, k2 = k * k;
    const double R2 = c.R * c.R, R4 = R2 * R2, R6 = R4 * R2;
    const double J2 = J * J;
    auto rp = [&](int e) { return std::pow(r, e); };
    if (a == 0) {
        if (b == 2)
            return 385.0 * c.pc[3][0] * gm * R6 * J2 / (k2 * rp(11)) +
                   115.0 * c.pc[2][0] * gm * R4 * J2 / (k2 * rp(9)) +
                   15.0 * c.pc[1][0] * gm * R2 * J2 / (k2 * rp(7)) -
                   3.0 * c.pc[0][0] * gm * J2 / (k2 * rp(5)) - 5.0 * I * I * J2 / (k2 * rp(6)) -
                   10.0 * n * I * J2 / (k2 * rp(4)) - 1.5 * I * I * J / (k * rp(4)) -
                   3.0 * n * I * J / (k * r * r);
        if (b == 4)
            return -385.0 / 4 * c.pc[3][0] * gm * R6 * J2 / (k2 * rp(11)) -
                   115.0 / 4 * c.pc[2][0] * gm * R4 * J2 / (k2 * rp(9)) -
                   15.0 / 4 * c.pc[1][0] * gm * R2 * J2 / (k2 * rp(7)) +
                   0.75 * c.pc[0][0] * gm * J2 / (k2 * rp(5)) +
                   1.25 * I * I * J2 / (k2 * rp(6)) + 2.5 * n * I * J2 / (k2 * rp(4));
    }
    const double pc3 = c.pc[3][a], pc2 = a <= 2 ? c.pc[2][a] : 0.0,
                 pc1 = a <= 1 ? c.pc[1][a] : 0.0;
    if (b == 0)
        return -315.0 * pc3 * gm * R6 * J2 / (k2 * rp(11)) -
               105.0 * pc2 * gm * R4 * J2 / (k2 * rp(9)) -
               22.5 * pc1 * gm * R2 * J2 / (k2 * rp(7)) - 28.0 * pc3 * gm * R6 * J / (k * rp(9)) -
               15.0 * pc2 * gm * R4 * J / (k * rp(7)) - 6.0 * pc1 * gm * R2 * J / (k * rp(5)) -
               pc3 * gm * R6 / rp(7) - pc2 * gm * R4 / rp(5) - pc1 * gm * R2 / rp(3);
    if (b == 2)
        return 210.0 * pc3 * gm * R6 * J2 / (k2 * rp(11)) +
               70.0 * pc2 * gm * R4 * J2 / (k2 * rp(9)) + 14.0 * pc3 * gm * R6 * J / (k * rp(9)) +
               15.0 * pc1 * gm * R2 * J2 / (k2 * rp(7)) + 7.5 * pc2 * gm * R4 * J / (k * rp(7)) +
               3.0 * pc1 * gm * R2 * J / (k * rp(5));
    if (b == 4)
        return -52.5 * pc3 * gm * R6 * J2 / (k2 * rp(11)) -
               17.5 * pc2 * gm * R4 * J2 / (k2 * rp(9)) - 3.75 * pc1 * gm * R2 * J2 / (k2 * rp(7));
    throw std::logic_error("oracle_alpha: no transcription");
}

double oracle_beta(const CenterConstants& c, int a, int b, double I, double J) {
    const double r = c.r, gm = c.gm, n = c.n;
    const double k = c.k;
    const double k32 = std::pow(k, 1.5), k12 = std::sqrt(k);
    const double R2 = c.R * c.R, R4 = R2 * R2, R6 = R4 * R2;
    const double J32 = std::pow(J, 1.5), J12 = std::sqrt(J);
    const double s2 = std::sqrt(2.0);
    auto rp = [&](int e) { return std::pow(r, e); };
    if (a == 0) {
        if (b == 1)
            return 105.0 * s2 * c.pc[3][0] * gm * R6 * J32 / (k32 * rp(10)) +
                   75.0 * c.pc[2][0] * gm * R4 * J32 / (s2 * k32 * rp(8)) +
                   6.0 * s2 * c.pc[1][0] * gm * R2 * J32 / (k32 * rp(6)) -
                   3.0 * c.pc[0][0] * gm * J32 / (s2 * k32 * rp(4)) -
                   3.0 * s2 * I * I * J32 / (k32 * rp(5)) - 6.0 * s2 * n * I * J32 / (k32 * rp(3)) -
                   s2 * I * I * J12 / (k12 * rp(3)) - 2.0 * s2 * n * I * J12 / (k12 * r);
        if (b == 3)
            return -35.0 * s2 * c.pc[3][0] * gm * R6 * J32 / (k32 * rp(10)) -
                   25.0 * c.pc[2][0] * gm * R4 * J32 / (s2 * k32 * rp(8)) -
                   2.0 * s2 * c.pc[1][0] * gm * R2 * J32 / (k32 * rp(6)) +
                   c.pc[0][0] * gm * J32 / (s2 * k32 * rp(4)) + s2 * I * I * J32 / (k32 * rp(5)) +
                   2.0 * s2 * n * I * J32 / (k32 * rp(3));
    }
    const double pc3 = c.pc[3][a], pc2 = a <= 2 ? c.pc[2][a] : 0.0,
                 pc1 = a <= 1 ? c.pc[1][a] : 0.0;
    if (b == 1)
        return 63.0 * s2 * pc3 * gm * R6 * J32 / (k32 * rp(10)) +
               105.0 * pc2 * gm * R4 * J32 / (2.0 * s2 * k32 * rp(8)) +
               7.0 * pc3 * gm * R6 * J12 / (s2 * k12 * rp(8)) +
               15.0 * pc1 * gm * R2 * J32 / (s2 * k32 * rp(6)) +
               5.0 * pc2 * gm * R4 * J12 / (s2 * k12 * rp(6)) +
               3.0 * pc1 * gm * R2 * J12 / (s2 * k12 * rp(4));
    if (b == 3)
        return -21.0 * s2 * pc3 * gm * R6 * J32 / (k32 * rp(10)) -
               35.0 * pc2 * gm * R4 * J32 / (2.0 * s2 * k32 * rp(8)) -
               5.0 * pc1 * gm * R2 * J32 / (s2 * k32 * rp(6));
    throw std::logic_error("oracle_beta: no transcription");
}

// sum over (i_pow, j_half) of coeff * I^i J^(h/2) at one harmonic key
double harmonic_value(const PoissonSeries& s, int k_theta, int k_phi, Trig kind, double I,
                      double J) {
    double total = 0.0;
    for (const auto& [key, coeff] : s.terms()) {
        if (key.k_theta != k_theta || key.k_phi != k_phi || key.kind != kind) continue;
        total += coeff * std::pow(I, key.i_pow) * std::pow(J, 0.5 * key.j_half);
    }
    return total;
}

bool rel_close(double a, double b, double tol) {
    const double scale = std::max(std::abs(a), std::abs(b));
    if (scale == 0.0) return true;
    return std::abs(a - b) <= tol * scale;
}

// ---- flattened series evaluator for the 2-DOF integration ------------------

struct CompiledSeries {
    struct Term {
        double c;
        int i, h, kt, kp;
        bool is_sin;
    };
    std::vector<Term> terms;
    int max_kt = 0, max_kp = 0;

    explicit CompiledSeries(const PoissonSeries& s) {
        for (const auto& [k, c] : s.terms()) {
            terms.push_back({c, k.i_pow, k.j_half, k.k_theta, k.k_phi, k.kind == Trig::Sin});
            max_kt = std::max(max_kt, int(k.k_theta));
            max_kp = std::max(max_kp, std::abs(int(k.k_phi)));
        }
    }

    // gradient of H wrt (I, J, theta, phi) and the value, in one pass
    void gradients(double I, double J, double theta, double phi, double out[5]) const {
        double ct[17], st[17], cp[33], sp[33];
        ct[0] = 1.0;
        st[0] = 0.0;
        const double c1 = std::cos(theta), s1 = std::sin(theta);
        for (int k = 1; k <= max_kt; ++k) {
            ct[k] = ct[k - 1] * c1 - st[k - 1] * s1;
            st[k] = st[k - 1] * c1 + ct[k - 1] * s1;
        }
        cp[0] = 1.0;
        sp[0] = 0.0;
        const double c2 = std::cos(phi), s2 = std::sin(phi);
        for (int k = 1; k <= max_kp; ++k) {
            cp[k] = cp[k - 1] * c2 - sp[k - 1] * s2;
            sp[k] = sp[k - 1] * c2 + cp[k - 1] * s2;
        }
        double sqJ[18];
        sqJ[0] = 1.0;
        const double rj = std::sqrt(J);
        const double inv_rj = 1.0 / rj;  // J > 0 along epicyclic orbits
        for (int h = 1; h <= 17; ++h) sqJ[h] = sqJ[h - 1] * rj;
        double powI[3] = {1.0, I, I * I};

        double vH = 0, vI = 0, vJ = 0, vT = 0, vP = 0;
        for (const auto& t : terms) {
            const double cpk = t.kp >= 0 ? cp[t.kp] : cp[-t.kp];
            const double spk = t.kp >= 0 ? sp[t.kp] : -sp[-t.kp];
            const double cos_a = ct[t.kt] * cpk - st[t.kt] * spk;
            const double sin_a = st[t.kt] * cpk + ct[t.kt] * spk;
            const double trig = t.is_sin ? sin_a : cos_a;
            const double dtrig = t.is_sin ? cos_a : -sin_a;
            const double mono = t.c * powI[t.i] * sqJ[t.h];
            vH += mono * trig;
            if (t.i > 0) vI += t.c * t.i * powI[t.i - 1] * sqJ[t.h] * trig;
            if (t.h > 0)
                vJ += t.c * 0.5 * t.h * powI[t.i] * (t.h >= 2 ? sqJ[t.h - 2] : inv_rj) * trig;
            vT += mono * dtrig * t.kt;
            vP += mono * dtrig * t.kp;
        }
        out[0] = vH;
        out[1] = vI;
        out[2] = vJ;
        out[3] = vT;
        out[4] = vP;
    }
};

int worker_count(const VerificationOptions& opt) {
    if (opt.threads > 0) return opt.threads;
    if (const char* env = std::getenv("RINGRES_THREADS")) {
        const int n = std::atoi(env);
        if (n > 0) return n;
    }
    const unsigned hw = std::thread::hardware_concurrency();
    return hw == 0 ? 1 : static_cast<int>(hw);
}

}  // namespace

bool VerificationReport::criterion_pass(int criterion) const {
    bool seen = false;
    for (const auto& c : checks) {
        if (c.criterion != criterion) continue;
        seen = true;
        if (!c.pass) return false;
    }
    return seen;
}

bool VerificationReport::all_pass() const {
    return std::all_of(checks.begin(), checks.end(),
                       [](const CheckResult& c) { return c.pass; });
}

VerificationReport run_verification(const VerificationOptions& options) {
    VerificationReport report;
    Collector col{report.checks};

    const BodyParams bodies[2] = {preset_body("AS"), preset_body("HA")};
    PotentialModel models[2] = {PotentialModel::build(bodies[0], 5),
                                PotentialModel::build(bodies[1], 5)};

    // ---- criterion 1: resonant radii --------------------------------------
    ResonanceSpec specs[2][3];
    {
        const auto t0 = std::chrono::steady_clock::now();
        for (int b = 0; b < 2; ++b)
            for (int q = 1; q <= 3; ++q) specs[b][q - 1] = resonant_radius(models[b], 1, q);
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        for (int b = 0; b < 2; ++b) {
            const double expected[3] = {ref::kBodyCases[b].r_corotation, ref::kBodyCases[b].r_12,
                                        ref::kBodyCases[b].r_13};
            for (int i = 0; i < 3; ++i) {
                const double got = specs[b][i].r_res;
                col.add(1,
                        std::string(ref::kBodyCases[b].name) + " r(1:" + std::to_string(i + 1) + ")",
                        std::abs(got - expected[i]) <= 1.0,
                        fmt(got) + " km vs " + fmt(expected[i]) + " km");
            }
        }
        col.add(1, "radii runtime", secs < 1.0, fmt(secs) + " s");
    }

    // ---- criterion 2: shape constants --------------------------------------
    for (int b = 0; b < 2; ++b) {
        const ShapeConstants sc = shape_parameters(bodies[b], true);
        col.add(2, std::string(ref::kBodyCases[b].name) + " oblateness",
                std::abs(sc.oblateness - ref::kBodyCases[b].oblateness) <= 1e-4,
                fmt(sc.oblateness) + " vs " + fmt(ref::kBodyCases[b].oblateness));
        col.add(2, std::string(ref::kBodyCases[b].name) + " elongation",
                std::abs(sc.elongation - ref::kBodyCases[b].elongation) <= 1e-4,
                fmt(sc.elongation) + " vs " + fmt(ref::kBodyCases[b].elongation));
    }

    // ---- criterion 3: closed-form coefficient oracle at matched truncation --
    {
        bool all_c = true, all_v = true, all_ab = true;
        double worst = 0.0;
        for (int b = 0; b < 2; ++b) {
            const PotentialModel m3 = PotentialModel::build(bodies[b], 3);
            for (int rr = 0; rr < 3; ++rr) {
                const double r = specs[b][rr].r_res;
                const CenterConstants cc = center_constants(m3, r);
                const ExpansionCenter center = ExpansionCenter::at_radius(m3, r, 4);
                for (auto [i, j] : {std::pair{0, 3}, {0, 4}, {1, 2}, {1, 3}, {1, 4},
                                    {2, 1}, {2, 2}, {2, 3}, {2, 4}}) {
                    const double got = taylor_c(center, m3, i, j);
                    const double want = oracle_c(cc, i, j);
                    if (!rel_close(got, want, 1e-12)) all_c = false;
                    if (want != 0.0) worst = std::max(worst, std::abs(got / want - 1.0));
                }
                for (int j = 0; j <= 4; ++j)
                    for (int i = 1; i <= 3; ++i) {
                        const double got = taylor_v(center, m3, j, i);
                        const double want = oracle_v(cc, j, i);
                        if (!rel_close(got, want, 1e-12)) all_v = false;
                    }
                const EpicyclicHamiltonian epi = assemble(center, m3);
                const double I = 0.37, J = 0.21;
                for (int a = 1; a <= 3; ++a) {
                    for (int btrig = 0; btrig <= 4; btrig += 2) {
                        const double want = oracle_alpha(cc, a, btrig, I, J);
                        const double got_p = harmonic_value(epi.series, 2 * a, btrig, Trig::Cos, I, J);
                        if (!rel_close(got_p, want, 1e-10)) all_ab = false;
                        if (btrig > 0) {
                            const double got_m =
                                harmonic_value(epi.series, 2 * a, -btrig, Trig::Cos, I, J);
                            if (!rel_close(got_m, want, 1e-10)) all_ab = false;
                        }
                    }
                    for (int btrig = 1; btrig <= 3; btrig += 2) {
                        const double want = oracle_beta(cc, a, btrig, I, J);
                        const double got_p = harmonic_value(epi.series, 2 * a, btrig, Trig::Sin, I, J);
                        const double got_m = harmonic_value(epi.series, 2 * a, -btrig, Trig::Sin, I, J);
                        if (!rel_close(got_p, want, 1e-10)) all_ab = false;
                        if (!rel_close(got_m, -want, 1e-10)) all_ab = false;
                    }
                }
                if (!rel_close(harmonic_value(epi.series, 0, 1, Trig::Sin, I, J),
                               oracle_beta(cc, 0, 1, I, J), 1e-10))
                    all_ab = false;
                if (!rel_close(harmonic_value(epi.series, 0, 3, Trig::Sin, I, J),
                               oracle_beta(cc, 0, 3, I, J), 1e-10))
                    all_ab = false;
                if (!rel_close(harmonic_value(epi.series, 0, 2, Trig::Cos, I, J),
                               oracle_alpha(cc, 0, 2, I, J), 1e-10))
                    all_ab = false;
                if (!rel_close(harmonic_value(epi.series, 0, 4, Trig::Cos, I, J),
                               oracle_alpha(cc, 0, 4, I, J), 1e-10))
                    all_ab = false;
                // identically-zero entries
                if (harmonic_value(epi.series, 2, 0, Trig::Sin, I, J) != 0.0) all_ab = false;
                if (harmonic_value(epi.series, 2, 1, Trig::Cos, I, J) != 0.0) all_ab = false;
            }
        }
        col.add(3, "c_{i,j} closed forms (6 centers)", all_c);
        col.add(3, "V_{j,i} closed forms (6 centers)", all_v);
        col.add(3, "alpha/beta harmonic table (6 centers)", all_ab);
    }

    // ---- criteria 4 + 5: corotation table and amplitudes -------------------
    ReducedHamiltonian cor[2];
    for (int b = 0; b < 2; ++b) {
        const ExpansionCenter center = ExpansionCenter::at_radius(models[b], specs[b][0].r_res);
        const EpicyclicHamiltonian epi = assemble(center, models[b]);
        cor[b] = reduce_corotation(epi, 1e-3);
        const auto& rc = ref::kCorotation[b];
        col.add(4, std::string(rc.name) + " J0 level",
                ref::matches(cor[b].j0, rc.j0, 5e-4, 5), fmt(cor[b].j0) + " vs " + fmt(rc.j0));
        const double got_alpha[8] = {0.0,
                                     cor[b].normal[1],
                                     cor[b].normal[2],
                                     cor[b].harmonic[0][0],
                                     cor[b].harmonic[1][0],
                                     cor[b].harmonic[2][0],
                                     cor[b].harmonic[3][0],
                                     cor[b].harmonic[4][0]};
        for (int k = 1; k <= 7; ++k)
            col.add(4, std::string(rc.name) + " alpha" + std::to_string(k),
                    ref::matches(got_alpha[k], rc.alpha[k], 0.05, 2),
                    fmt(got_alpha[k]) + " vs " + fmt(rc.alpha[k]));

        const double pend = pendulum_amplitude(cor[b]);
        col.add(5, std::string(rc.name) + " pendulum amplitude",
                rel_close(pend, rc.pendulum_amplitude, 5e-3),
                fmt(pend) + " vs " + fmt(rc.pendulum_amplitude));
        const double x_star = -cor[b].normal[1] / (2.0 * cor[b].normal[2]);
        EquilibriumPoint centre;
        centre.angle = 0.0;
        centre.action = x_star;
        const double sep = separatrix_amplitude(cor[b], centre);
        col.add(5, std::string(rc.name) + " separatrix amplitude",
                rel_close(sep, rc.separatrix_amplitude, 1e-2),
                fmt(sep) + " vs " + fmt(rc.separatrix_amplitude));
    }

    // ---- criteria 6 + 7: Lindblad reductions -------------------------------
    for (const auto& lc : ref::kLindblad) {
        const int b = std::string(lc.name) == "AS" ? 0 : 1;
        const int q = std::string(lc.resonance) == "1:2" ? 2 : 3;
        const int crit = q == 2 ? 6 : 7;
        const ResonanceSpec& spec = specs[b][q - 1];
        const ExpansionCenter center = ExpansionCenter::at_radius(models[b], spec.r_res);
        const EpicyclicHamiltonian epi = assemble(center, models[b]);
        const ReducedHamiltonian red = reduce_lindblad(epi, spec, 1e-3);
        const std::string tag = std::string(lc.name) + " " + lc.resonance + " ";

        col.add(crit, tag + "L0", rel_close(red.l0, lc.l0, 1e-3),
                fmt(red.l0) + " vs " + fmt(lc.l0));
        bool table_ok = true;
        for (int k = 1; k <= 10; ++k)
            if (!ref::matches(red.normal[k], lc.alpha[k], 0.05, 2)) table_ok = false;
        col.add(crit, tag + "normal coefficients", table_ok);

        bool delta_ok = true;
        for (const auto& dp : ref::kDeltaPolynomials) {
            if (std::string(dp.name) != lc.name || std::string(dp.resonance) != lc.resonance)
                continue;
            for (int d = 0; d <= 8; ++d) {
                const double got = dp.harmonic <= int(red.harmonic.size()) &&
                                           d < int(red.harmonic[dp.harmonic - 1].size())
                                       ? red.harmonic[dp.harmonic - 1][d]
                                       : 0.0;
                if (!ref::matches(got, dp.coeff[d], 0.05, 2)) delta_ok = false;
            }
        }
        col.add(crit, tag + "delta polynomials", delta_ok);

        const auto eqs = find_equilibria(red);
        bool eq_ok = true;
        std::string eq_detail;
        for (int i = 0; i < lc.n_equilibria; ++i) {
            double best = 1e30;
            for (const auto& p : eqs)
                best = std::min(best, std::max(std::abs(p.angle - lc.eq_psi[i]),
                                               std::abs(p.action - lc.eq_g[i])));
            if (best > 1e-3) {
                eq_ok = false;
                eq_detail += " miss(" + fmt(lc.eq_psi[i]) + "," + fmt(lc.eq_g[i]) + ")";
            }
        }
        col.add(crit, tag + "equilibria", eq_ok, eq_detail);

        bool width_ok = true;
        std::string width_detail;
        for (int i = 0; i < lc.n_widths; ++i) {
            // centre i: (psi, G) from the table, matched among found centres
            const EquilibriumPoint* centre = nullptr;
            for (const auto& p : eqs)
                if (p.kind == EquilibriumPoint::Kind::Centre &&
                    std::abs(p.angle - lc.eq_psi[i]) < 1e-2 &&
                    std::abs(p.action - lc.eq_g[i]) < 1e-2)
                    centre = &p;
            if (!centre) {
                width_ok = false;
                continue;
            }
            const double w = separatrix_amplitude(red, *centre);
            if (!rel_close(w, lc.width[i], 0.05)) width_ok = false;
            width_detail += " " + fmt(w) + " vs " + fmt(lc.width[i]);
        }
        col.add(crit, tag + "island widths", width_ok, width_detail);
    }

    // ---- criterion 8: bifurcation scans -------------------------------------
    {
        const auto t0 = std::chrono::steady_clock::now();
        struct ScanCase {
            int body;
            int q;
        };
        const ScanCase cases[6] = {{0, 1}, {1, 1}, {0, 2}, {1, 2}, {0, 3}, {1, 3}};
        std::vector<std::vector<BifurcationEvent>> results(6);
        const int workers = std::min(worker_count(options), 6);
        std::vector<std::future<void>> jobs;
        std::atomic<int> next{0};
        auto run_case = [&](int idx) {
            const auto& sc = cases[idx];
            const ResonanceSpec& spec = specs[sc.body][sc.q - 1];
            const ExpansionCenter center =
                ExpansionCenter::at_radius(models[sc.body], spec.r_res);
            const EpicyclicHamiltonian epi = assemble(center, models[sc.body]);
            auto builder = [&, spec](double e) {
                return sc.q == 1 ? reduce_corotation(epi, e) : reduce_lindblad(epi, spec, e);
            };
            results[idx] = bifurcation_scan(builder, 1e-3, 0.5, options.scan_steps,
                                            options.scan_grid);
        };
        for (int w = 0; w < workers; ++w)
            jobs.push_back(std::async(std::launch::async, [&] {
                for (int idx = next.fetch_add(1); idx < 6; idx = next.fetch_add(1)) run_case(idx);
            }));
        for (auto& j : jobs) j.get();
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

        auto case_index = [&](const std::string& body, const std::string& res) {
            const int b = body == "AS" ? 0 : 1;
            const int q = res == "1:1" ? 1 : (res == "1:2" ? 2 : 3);
            for (int i = 0; i < 6; ++i)
                if (cases[i].body == b && cases[i].q == q) return i;
            return -1;
        };
        for (const auto& exp : ref::kBifurcations) {
            const auto& evs = results[case_index(exp.name, exp.resonance)];
            bool found = false;
            for (const auto& ev : evs) {
                if (std::abs(ev.e_crit - exp.e_crit) > exp.tol) continue;
                if (exp.angle >= 0.0) {
                    if (std::abs(ev.angle - exp.angle) > 1e-6) continue;
                } else if (ev.kind != BifurcationEvent::Kind::SaddleNode) {
                    continue;
                }
                found = true;
                break;
            }
            col.add(8,
                    std::string(exp.name) + " " + exp.resonance + " event near e=" +
                        fmt(exp.e_crit),
                    found);
        }
        col.add(8, "AS 1:1 scan returns no events", results[case_index("AS", "1:1")].empty(),
                std::to_string(results[case_index("AS", "1:1")].size()) + " events");
        col.add(8, "AS 1:3 scan returns no events", results[case_index("AS", "1:3")].empty());
        col.add(8, "HA 1:3 scan returns no events", results[case_index("HA", "1:3")].empty());
        col.add(8, "scan runtime <= 5 min", secs <= 300.0, fmt(secs) + " s");
    }

    // ---- criterion 9: KAM non-degeneracy ------------------------------------
    for (int b = 0; b < 2; ++b) {
        std::vector<std::pair<std::string, double>> radii;
        for (int q = 1; q <= 3; ++q) radii.emplace_back(specs[b][q - 1].label, specs[b][q - 1].r_res);
        const auto rows = nondegeneracy_report(models[b], radii);
        bool all_nd = true;
        for (const auto& row : rows)
            if (!row.non_degenerate) all_nd = false;
        col.add(9, std::string(bodies[b].name) + " all orders non-degenerate", all_nd);
        bool dual_ok = true;
        for (const auto& row : rows) {
            if (row.order != 1) continue;
            // frequency-only route
            double r_res = 0.0;
            for (const auto& [label, rr] : radii)
                if (label == row.resonance) r_res = rr;
            const Frequencies f = frequencies(models[b], r_res);
            const double a_freq = 3.0 * f.n / (f.kappa * r_res * r_res);
            if (!rel_close(row.determinant, -a_freq * a_freq, 1e-12)) dual_ok = false;
        }
        col.add(9, std::string(bodies[b].name) + " order-1 det equals -A^2 (dual route)", dual_ok);
    }

    // ---- criterion 10: property suites --------------------------------------
    {
        // ring axioms on a deterministic random sample
        std::mt19937 rng(20240817u);
        std::uniform_real_distribution<double> coeff(-2.0, 2.0);
        std::uniform_int_distribution<int> kth(0, 3), kph(-4, 4), ipow(0, 1), jh(0, 4);
        Truncation t;
        t.max_i_pow = 4;
        t.max_j_half = 20;
        t.max_k_theta = 24;
        t.max_k_phi = 40;
        t.drop_threshold = 0.0;
        auto random_series = [&] {
            PoissonSeries s(t);
            for (int i = 0; i < 6; ++i)
                s.add_term(coeff(rng), ipow(rng), jh(rng), kth(rng), kph(rng),
                           rng() % 2 ? Trig::Sin : Trig::Cos);
            return s;
        };
        bool ring_ok = true;
        for (int rep = 0; rep < 12; ++rep) {
            const PoissonSeries a = random_series(), b2 = random_series(), c2 = random_series();
            const PoissonSeries lhs = mul(mul(a, b2), c2);
            const PoissonSeries rhs = mul(a, mul(b2, c2));
            const PoissonSeries dist_l = mul(a, add(b2, c2));
            const PoissonSeries dist_r = add(mul(a, b2), mul(a, c2));
            double big = 1e-300, diff = 0.0, diff2 = 0.0;
            for (const auto& [k, v] : lhs.terms()) big = std::max(big, std::abs(v));
            for (const auto& [k, v] : lhs.terms()) diff = std::max(diff, std::abs(v - rhs.coefficient(k)));
            for (const auto& [k, v] : rhs.terms()) diff = std::max(diff, std::abs(v - lhs.coefficient(k)));
            for (const auto& [k, v] : dist_l.terms())
                diff2 = std::max(diff2, std::abs(v - dist_r.coefficient(k)));
            for (const auto& [k, v] : dist_r.terms())
                diff2 = std::max(diff2, std::abs(v - dist_l.coefficient(k)));
            if (diff > 1e-12 * big || diff2 > 1e-12 * big) ring_ok = false;
        }
        col.add(10, "series ring axioms", ring_ok);

        // canonical transformations: integer symplectic block condition
        {
            const int M12[2][2] = {{2, 2}, {1, 2}};  // (psi, mu) in (theta, phi)
            const int N12[2][2] = {{2, 1}, {2, 2}};  // (I, J) in (G, L)
            const int M13[2][2] = {{2, 4}, {1, 1}};
            const int N13[2][2] = {{2, 1}, {4, 1}};
            bool sympl = true;
            for (int i = 0; i < 2; ++i)
                for (int j = 0; j < 2; ++j) {
                    if (N12[i][j] != M12[j][i]) sympl = false;
                    if (N13[i][j] != M13[j][i]) sympl = false;
                }
            if (M12[0][0] * M12[1][1] - M12[0][1] * M12[1][0] == 0) sympl = false;
            if (M13[0][0] * M13[1][1] - M13[0][1] * M13[1][0] == 0) sympl = false;
            col.add(10, "canonical transformation symplectic blocks", sympl);
        }

        // integrator energy drift over 1e3 synodic periods on the 2-DOF series
        {
            const ResonanceSpec& spec = specs[0][1];  // AS 1:2
            const ExpansionCenter center = ExpansionCenter::at_radius(models[0], spec.r_res);
            const EpicyclicHamiltonian epi = assemble(center, models[0]);
            const CompiledSeries cs(epi.series);
            const double synodic = 2.0 * kPi / std::abs(epi.synodic);
            const double t_span = 1e3 * synodic;
            const double dt = (2.0 * kPi / epi.kappa_abs) / 96.0;
            // a regular orbit well away from the J = 0 coordinate singularity
            double state[4] = {0.3, 0.0, 0.7, action_level_from_eccentricity(center, 0.05)};
            // state = (theta, I, phi, J)
            double g[5];
            cs.gradients(state[1], state[3], state[0], state[2], g);
            const double e0 = g[0];
            const DerivFn deriv = [&cs](const double* st, double* d) {
                double gg[5];
                cs.gradients(st[1], st[3], st[0], st[2], gg);
                d[0] = gg[1];   // theta-dot = dH/dI
                d[1] = -gg[3];  // I-dot = -dH/dtheta
                d[2] = gg[2];   // phi-dot = dH/dJ
                d[3] = -gg[4];  // J-dot = -dH/dphi
            };
            double drift = 0.0;
            const long steps = std::lround(t_span / dt);
            for (long k = 0; k < steps; ++k) {
                rk8_step(deriv, state, 4, dt);
                if ((k & 0xf) == 0 || k + 1 == steps) {
                    cs.gradients(state[1], state[3], state[0], state[2], g);
                    drift = std::max(drift, std::abs(g[0] - e0) / std::abs(e0));
                }
            }
            col.add(10, "2-DOF energy drift <= 1e-9 over 1e3 synodic periods", drift <= 1e-9,
                    "drift " + fmt(drift));
        }

        // truncation remainder at e = 0.5
        {
            const ExpansionCenter center = ExpansionCenter::at_radius(models[0], specs[0][0].r_res);
            const double rem = truncation_remainder(center, models[0], 0.5);
            col.add(10, "truncation remainder <= 1e-5 at e = 0.5", rem <= 1e-5,
                    "measured " + fmt(rem) +
                        " (order-14/16 proxy; known limitation, see README verification notes)");
        }

        // sphere degeneracy chain
        {
            const BodyParams sphere = BodyParams::make("sphere", 500.0, 500.0, 500.0, 1e21,
                                                       8.0 * 3600.0);
            const PotentialModel ms = PotentialModel::build(sphere, 5);
            bool uns_zero = true;
            for (double r : {600.0, 900.0, 1500.0})
                for (double th = 0.0; th < 3.2; th += 0.37)
                    if (std::abs(u_nonaxisymmetric(ms, r, th)) >
                        1e-18 * std::abs(u_axisymmetric(ms, r)))
                        uns_zero = false;
            const Frequencies f = frequencies(ms, 900.0);
            const bool nk_equal = rel_close(f.n, f.kappa, 1e-14);
            const ResonanceSpec s12 = resonant_radius(ms, 1, 2);
            const bool kepler_radius = rel_close(s12.r_res, s12.r_kep, 1e-10);
            const ExpansionCenter center = ExpansionCenter::at_radius(ms, s12.r_res);
            const EpicyclicHamiltonian epi = assemble(center, ms);
            bool no_theta = true;
            for (const auto& [k, c] : epi.series.terms())
                if (k.k_theta != 0 && c != 0.0) no_theta = false;
            const ReducedHamiltonian red = reduce_lindblad(epi, s12, 1e-3);
            bool integrable = true;
            for (const auto& hk : red.harmonic)
                for (double coeff_value : hk)
                    if (coeff_value != 0.0) integrable = false;
            col.add(10, "sphere degeneracy chain",
                    uns_zero && nk_equal && kepler_radius && no_theta && integrable);
        }
    }

    return report;
}

}  // namespace ringres
