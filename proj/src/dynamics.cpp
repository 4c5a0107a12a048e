#include "ringres/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace ringres {

namespace {

constexpr double kPi = std::numbers::pi;

double poly_eval(const std::vector<double>& p, double x) {
    double v = 0.0;
    for (auto it = p.rbegin(); it != p.rend(); ++it) v = v * x + *it;
    return v;
}

std::vector<double> poly_derivative(const std::vector<double>& p) {
    std::vector<double> d;
    for (std::size_t k = 1; k < p.size(); ++k) d.push_back(k * p[k]);
    return d;
}

void poly_roots_impl(const std::vector<double>& p, double lo, double hi,
                     std::vector<double>& out) {
    // strip trailing (highest-order) zeros
    std::vector<double> q = p;
    while (!q.empty() && q.back() == 0.0) q.pop_back();
    if (q.size() <= 1) return;
    if (q.size() == 2) {
        const double r = -q[0] / q[1];
        if (r >= lo && r <= hi) out.push_back(r);
        return;
    }
    std::vector<double> criticals;
    poly_roots_impl(poly_derivative(q), lo, hi, criticals);
    std::sort(criticals.begin(), criticals.end());
    std::vector<double> nodes{lo};
    for (double c : criticals)
        if (c > nodes.back()) nodes.push_back(c);
    if (hi > nodes.back()) nodes.push_back(hi);
    for (std::size_t k = 0; k + 1 < nodes.size(); ++k) {
        double a = nodes[k], b = nodes[k + 1];
        double fa = poly_eval(q, a), fb = poly_eval(q, b);
        if (fa == 0.0) {
            if (out.empty() || std::abs(out.back() - a) > 0.0) out.push_back(a);
            continue;
        }
        if (fa * fb > 0.0) continue;
        for (int it = 0; it < 120 && b - a > 1e-15 * (1.0 + std::abs(a) + std::abs(b)); ++it) {
            const double m = 0.5 * (a + b);
            const double fm = poly_eval(q, m);
            if (fa * fm <= 0.0) {
                b = m;
                fb = fm;
            } else {
                a = m;
                fa = fm;
            }
        }
        out.push_back(0.5 * (a + b));
    }
    // monotone-interval endpoints can produce duplicates
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end(),
                          [](double a, double b) {
                              return std::abs(a - b) <= 1e-12 * (1.0 + std::abs(a));
                          }),
              out.end());
}

}  // namespace

std::vector<double> poly_real_roots(const std::vector<double>& poly, double lo, double hi) {
    std::vector<double> out;
    if (!(lo < hi)) return out;
    poly_roots_impl(poly, lo, hi, out);
    return out;
}

// --- fixed-step Cooper-Verner RK8 -------------------------------------------

void rk8_step(const DerivFn& f, double* state, int dim, double dt) {
    constexpr int kStages = 11;
    constexpr int kMaxDim = 8;
    if (dim > kMaxDim) throw std::invalid_argument("rk8_step: dim too large");

    static const double s = std::sqrt(21.0);
    static const double A[kStages][kStages] = {
        {},
        {1.0 / 2},
        {1.0 / 4, 1.0 / 4},
        {1.0 / 7, (-7 - 3 * s) / 98, (21 + 5 * s) / 49},
        {(11 + s) / 84, 0, (18 + 4 * s) / 63, (21 - s) / 252},
        {(5 + s) / 48, 0, (9 + s) / 36, (-231 + 14 * s) / 360, (63 - 7 * s) / 80},
        {(10 - s) / 42, 0, (-432 + 92 * s) / 315, (633 - 145 * s) / 90, (-504 + 115 * s) / 70,
         (63 - 13 * s) / 35},
        {1.0 / 14, 0, 0, 0, (14 - 3 * s) / 126, (13 - 3 * s) / 63, 1.0 / 9},
        {1.0 / 32, 0, 0, 0, (91 - 21 * s) / 576, 11.0 / 72, (-385 - 75 * s) / 1152,
         (63 + 13 * s) / 128},
        {1.0 / 14, 0, 0, 0, 1.0 / 9, (-733 - 147 * s) / 2205, (515 + 111 * s) / 504,
         (-51 - 11 * s) / 56, (132 + 28 * s) / 245},
        {0, 0, 0, 0, (-42 + 7 * s) / 18, (-18 + 28 * s) / 45, (-273 - 53 * s) / 72,
         (301 + 53 * s) / 72, (28 - 28 * s) / 45, (49 - 7 * s) / 18},
    };
    static const double B[kStages] = {1.0 / 20, 0, 0, 0, 0, 0, 0, 49.0 / 180, 16.0 / 45,
                                      49.0 / 180, 1.0 / 20};

    double k[kStages][kMaxDim];
    double tmp[kMaxDim];
    for (int stage = 0; stage < kStages; ++stage) {
        for (int d = 0; d < dim; ++d) {
            double acc = state[d];
            for (int j = 0; j < stage; ++j) acc += dt * A[stage][j] * k[j][d];
            tmp[d] = acc;
        }
        f(tmp, k[stage]);
    }
    for (int d = 0; d < dim; ++d) {
        double acc = state[d];
        for (int stage = 0; stage < kStages; ++stage) acc += dt * B[stage] * k[stage][d];
        state[d] = acc;
    }
}

Trajectory integrate(const ReducedHamiltonian& h, double angle0, double action0, double t_span,
                     double dt) {
    if (!(dt > 0.0)) throw std::invalid_argument("integrate: dt must be positive");
    const long n_steps = std::lround(t_span / dt);
    Trajectory traj;
    traj.time.reserve(n_steps + 1);
    traj.angle.reserve(n_steps + 1);
    traj.action.reserve(n_steps + 1);

    double state[2] = {angle0, action0};
    const double e0 = h.energy(action0, angle0);
    double scale = std::abs(e0);
    const DerivFn deriv = [&h](const double* st, double* d) {
        d[0] = h.d_action(st[1], st[0]);   // angle-dot = dH/daction
        d[1] = -h.d_angle(st[1], st[0]);   // action-dot = -dH/dangle
    };
    traj.time.push_back(0.0);
    traj.angle.push_back(state[0]);
    traj.action.push_back(state[1]);
    double drift = 0.0;
    for (long k = 1; k <= n_steps; ++k) {
        rk8_step(deriv, state, 2, dt);
        const double e = h.energy(state[1], state[0]);
        scale = std::max(scale, std::abs(e));
        drift = std::max(drift, std::abs(e - e0));
        traj.time.push_back(k * dt);
        traj.angle.push_back(state[0]);
        traj.action.push_back(state[1]);
    }
    traj.energy_drift = scale > 0.0 ? drift / scale : 0.0;
    if (traj.energy_drift > 1e-8)
        throw std::runtime_error("integrate: energy drift " + std::to_string(traj.energy_drift) +
                                 " exceeds 1e-8; reduce dt");
    return traj;
}

// --- equilibria --------------------------------------------------------------

EquilibriumPoint::Kind classify(const ReducedHamiltonian& h, double angle, double action,
                                double* hessian_det) {
    const double hxx = h.d2_action(action, angle);
    const double haa = h.d2_angle(action, angle);
    const double hxa = h.d2_mixed(action, angle);
    const double det = hxx * haa - hxa * hxa;
    if (hessian_det) *hessian_det = det;
    const double scale = hxx * hxx + haa * haa + hxa * hxa;
    if (std::abs(det) < 1e-14 * std::max(scale, 1e-300)) return EquilibriumPoint::Kind::Degenerate;
    return det > 0.0 ? EquilibriumPoint::Kind::Centre : EquilibriumPoint::Kind::Saddle;
}

namespace {

// Gradient polynomial along a symmetry line (cos(k mult ang) = +-1).
std::vector<double> axis_gradient_poly(const ReducedHamiltonian& h, bool at_zero) {
    std::vector<double> p = poly_derivative(h.normal);
    for (std::size_t k = 0; k < h.harmonic.size(); ++k) {
        const double c = at_zero ? 1.0 : ((k + 1) % 2 == 0 ? 1.0 : -1.0);
        const auto dh = poly_derivative(h.harmonic[k]);
        if (p.size() < dh.size()) p.resize(dh.size(), 0.0);
        for (std::size_t d = 0; d < dh.size(); ++d) p[d] += c * dh[d];
    }
    return p;
}

struct Window {
    double lo = -1.0, hi = 1.0;
};

bool is_corotation(const ReducedHamiltonian& h) { return h.angle_multiplier == 2; }

double circular_action(const ReducedHamiltonian& h) {
    // G at the unperturbed circular orbit of the reduction's integral level
    if (h.resonance.j == 1) return h.i0 - 0.5 * h.j0;
    if (h.resonance.j == 2) return 0.5 * (h.j0 - h.i0);
    return 0.0;
}

Window auto_window(const ReducedHamiltonian& h) {
    Window w;
    if (is_corotation(h)) {
        const double a2 = h.normal.size() > 2 ? h.normal[2] : 0.0;
        const double x_star = a2 != 0.0 ? -h.normal[1] / (2.0 * a2) : 0.0;
        double sum_harm = 0.0;
        for (const auto& hk : h.harmonic) sum_harm += std::abs(poly_eval(hk, x_star));
        const double width =
            a2 != 0.0 && sum_harm > 0.0 ? 3.0 * std::sqrt(2.0 * sum_harm / std::abs(a2)) : 1.0;
        w.lo = x_star - width;
        w.hi = x_star + width;
        return w;
    }
    const double gc = circular_action(h);
    const double probe = std::max(15.0, 1.25 * std::abs(gc) + 5.0);
    double lo = gc, hi = gc;
    for (bool at_zero : {true, false}) {
        for (double r : poly_real_roots(axis_gradient_poly(h, at_zero), gc - probe, gc + probe)) {
            lo = std::min(lo, r);
            hi = std::max(hi, r);
        }
    }
    const double pad = std::max(2.0, 0.75 * (hi - lo));
    w.lo = lo - pad;
    w.hi = hi + pad;
    return w;
}

// One damped Newton run on the gradient; returns true on convergence.
bool newton_equilibrium(const ReducedHamiltonian& h, double& angle, double& action,
                        const Window& w) {
    double ga = h.d_angle(action, angle);
    double gx = h.d_action(action, angle);
    double norm2 = ga * ga + gx * gx;
    for (int it = 0; it < 80; ++it) {
        const double hxx = h.d2_action(action, angle);
        const double haa = h.d2_angle(action, angle);
        const double hxa = h.d2_mixed(action, angle);
        const double det = hxx * haa - hxa * hxa;
        if (det == 0.0) return false;
        // Newton on the gradient; the Jacobian is the (symmetric) Hessian
        double dx = (gx * haa - ga * hxa) / det;
        double da = (hxx * ga - hxa * gx) / det;
        double damp = 1.0;
        for (int half = 0; half < 25; ++half) {
            const double xn = action - damp * dx;
            const double an = angle - damp * da;
            const double g1 = h.d_angle(xn, an);
            const double g2 = h.d_action(xn, an);
            const double n2 = g1 * g1 + g2 * g2;
            if (n2 <= norm2 || norm2 == 0.0) {
                action = xn;
                angle = an;
                ga = g1;
                gx = g2;
                norm2 = n2;
                break;
            }
            damp *= 0.5;
            if (half == 24) return false;
        }
        if (std::abs(damp * dx) + std::abs(damp * da) <
            1e-14 * (1.0 + std::abs(action) + std::abs(angle)))
            break;
    }
    if (!(action >= w.lo - 1e-9 && action <= w.hi + 1e-9)) return false;
    // relative gradient check against the local curvature scale
    const double hxx = h.d2_action(action, angle);
    const double haa = h.d2_angle(action, angle);
    const double hxa = h.d2_mixed(action, angle);
    const double curv = std::sqrt(hxx * hxx + haa * haa + hxa * hxa);
    const double span = std::max(std::abs(action), 0.5 * (w.hi - w.lo));
    return std::sqrt(norm2) <= 1e-10 * std::max(curv * span, 1e-300);
}

EquilibriumPoint make_point(const ReducedHamiltonian& h, double angle, double action) {
    EquilibriumPoint p;
    p.angle = angle;
    p.action = action;
    p.kind = classify(h, angle, action, &p.hessian_det);
    return p;
}

double wrap_angle(double a) {
    a = std::fmod(a, 2.0 * kPi);
    if (a < 0.0) a += 2.0 * kPi;
    if (std::abs(a - 2.0 * kPi) < 1e-12) a = 0.0;
    return a;
}

}  // namespace

std::vector<EquilibriumPoint> find_equilibria(const ReducedHamiltonian& h, double action_lo,
                                              double action_hi, int grid) {
    const Window w{action_lo, action_hi};
    const double period = 2.0 * kPi / h.angle_multiplier;  // fundamental angle domain
    std::vector<std::pair<double, double>> found;          // (angle in [0, period/... ], action)

    auto record = [&](double ang, double act) {
        // fold into [0, period/2] (H is even in the angle)
        double a = std::fmod(ang, period);
        if (a < 0.0) a += period;
        if (a > 0.5 * period) a = period - a;
        for (const auto& [fa, fx] : found) {
            const double scale_x = std::max(1.0, std::abs(fx));
            if (std::abs(fa - a) < 1e-8 && std::abs(fx - act) < 1e-8 * scale_x) return;
        }
        found.emplace_back(a, act);
    };

    // symmetry lines first: exact polynomial roots
    for (bool at_zero : {true, false}) {
        const double ang = at_zero ? 0.0 : 0.5 * period;
        for (double r : poly_real_roots(axis_gradient_poly(h, at_zero), w.lo, w.hi))
            record(ang, r);
    }
    // grid of damped-Newton starts
    for (int ia = 0; ia < grid; ++ia) {
        const double ang0 = 0.5 * period * (ia + 0.5) / grid;
        for (int ix = 0; ix < grid; ++ix) {
            double ang = ang0;
            double act = w.lo + (w.hi - w.lo) * (ix + 0.5) / grid;
            if (newton_equilibrium(h, ang, act, w)) record(ang, act);
        }
    }

    // expand the fundamental half-domain to [0, 2 pi)
    std::vector<EquilibriumPoint> out;
    for (const auto& [a, x] : found) {
        const bool on_axis = a < 1e-9 || std::abs(a - 0.5 * period) < 1e-9;
        for (int copy = 0; copy < h.angle_multiplier; ++copy) {
            const double base = a + copy * period;
            out.push_back(make_point(h, wrap_angle(base), x));
            if (!on_axis) out.push_back(make_point(h, wrap_angle(-a + (copy + 1) * period), x));
        }
    }
    std::sort(out.begin(), out.end(), [](const EquilibriumPoint& p1, const EquilibriumPoint& p2) {
        return p1.angle < p2.angle || (p1.angle == p2.angle && p1.action < p2.action);
    });
    return out;
}

std::vector<EquilibriumPoint> find_equilibria(const ReducedHamiltonian& h, int grid) {
    const Window w = auto_window(h);
    return find_equilibria(h, w.lo, w.hi, grid);
}

// --- amplitudes --------------------------------------------------------------

double pendulum_amplitude(const ReducedHamiltonian& h) {
    if (!is_corotation(h) || h.normal.size() < 3 || h.harmonic.empty())
        throw std::domain_error("pendulum_amplitude: corotation Hamiltonian required");
    const double a2 = h.normal[2];
    const double a3 = poly_eval(h.harmonic[0], 0.0);
    if (!(a2 > 0.0) || !(a3 < 0.0))
        throw std::domain_error("pendulum_amplitude: inapplicable sign conditions");
    return std::sqrt(-2.0 * a3 / a2);
}

double separatrix_amplitude(const ReducedHamiltonian& h, const EquilibriumPoint& centre) {
    const Window w0 = auto_window(h);
    const double mid = 0.5 * (w0.lo + w0.hi), half = 0.5 * (w0.hi - w0.lo);
    const Window w{mid - 3.0 * half, mid + 3.0 * half};

    const auto points = find_equilibria(h, w0.lo, w0.hi);
    // level polynomial along the centre's angle line
    std::vector<double> level = h.normal;
    for (std::size_t k = 0; k < h.harmonic.size(); ++k) {
        const double c = std::cos((k + 1) * h.angle_multiplier * centre.angle);
        if (level.size() < h.harmonic[k].size()) level.resize(h.harmonic[k].size(), 0.0);
        for (std::size_t d = 0; d < h.harmonic[k].size(); ++d) level[d] += c * h.harmonic[k][d];
    }

    double best = -1.0;
    for (const auto& p : points) {
        if (p.kind != EquilibriumPoint::Kind::Saddle) continue;
        const double es = h.energy(p.action, p.angle);
        std::vector<double> shifted = level;
        shifted[0] -= es;
        double lo_root = 0.0, hi_root = 0.0;
        bool has_lo = false, has_hi = false;
        for (double r : poly_real_roots(shifted, w.lo, w.hi)) {
            if (r < centre.action && (!has_lo || r > lo_root)) {
                lo_root = r;
                has_lo = true;
            }
            if (r > centre.action && (!has_hi || r < hi_root)) {
                hi_root = r;
                has_hi = true;
            }
        }
        if (!has_lo || !has_hi) continue;
        const double width = hi_root - lo_root;
        if (best < 0.0 || width < best) best = width;
    }
    if (best < 0.0)
        throw std::runtime_error("separatrix_amplitude: no bounding saddle level found");
    return is_corotation(h) ? 0.5 * best : best;
}

LibrationMeasure libration_measure(const ReducedHamiltonian& h, const EquilibriumPoint& centre) {
    LibrationMeasure m;
    m.centre = centre;
    m.separatrix_amplitude = separatrix_amplitude(h, centre);
    m.pendulum_semi_amplitude = 0.0;
    if (is_corotation(h)) m.pendulum_semi_amplitude = pendulum_amplitude(h);
    return m;
}

// --- bifurcation scan ---------------------------------------------------------

namespace {

struct OffAxisPoint {
    double angle = 0.0;  // in (0, period/2)
    double action = 0.0;
};

// Off-axis equilibria inside the fundamental half-domain.
std::vector<OffAxisPoint> off_axis_points(const ReducedHamiltonian& h, const Window& w,
                                          int grid) {
    const double period = 2.0 * kPi / h.angle_multiplier;
    std::vector<OffAxisPoint> pts;
    auto push_unique = [&](double ang, double act) {
        for (const auto& p : pts) {
            const double sx = std::max(1.0, std::abs(p.action));
            if (std::abs(p.angle - ang) < 1e-7 && std::abs(p.action - act) < 1e-7 * sx) return;
        }
        pts.push_back({ang, act});
    };
    if (is_corotation(h) && h.normal.size() > 2 && h.normal[2] != 0.0) {
        // harmonic coefficients are action-free: the angle equation factors
        // through Chebyshev polynomials of cos(2 theta)
        const double x_star = -h.normal[1] / (2.0 * h.normal[2]);
        // sum_k k c_k U_{k-1}(s) with c_k the constant harmonic coefficients
        std::vector<double> q;  // polynomial in s
        std::vector<std::vector<double>> cheb_u{{1}, {0, 2}, {-1, 0, 4}, {0, -4, 0, 8},
                                                {1, 0, -12, 0, 16}};
        for (std::size_t k = 0; k < h.harmonic.size() && k < cheb_u.size(); ++k) {
            const double ck = (k + 1) * poly_eval(h.harmonic[k], x_star);
            if (q.size() < cheb_u[k].size()) q.resize(cheb_u[k].size(), 0.0);
            for (std::size_t d = 0; d < cheb_u[k].size(); ++d) q[d] += ck * cheb_u[k][d];
        }
        for (double s : poly_real_roots(q, -1.0 + 1e-12, 1.0 - 1e-12)) {
            const double theta = 0.5 * std::acos(s);
            if (theta > 1e-9 && theta < 0.5 * period - 1e-9) push_unique(theta, x_star);
        }
        return pts;
    }
    for (int ia = 1; ia < grid; ++ia) {
        const double ang0 = 0.5 * period * ia / grid;
        for (int ix = 0; ix < grid; ++ix) {
            double ang = ang0;
            double act = w.lo + (w.hi - w.lo) * (ix + 0.5) / grid;
            if (!newton_equilibrium(h, ang, act, w)) continue;
            double a = std::fmod(ang, period);
            if (a < 0.0) a += period;
            if (a > 0.5 * period) a = period - a;
            if (a < 1e-7 || a > 0.5 * period - 1e-7) continue;  // axis point
            push_unique(a, act);
        }
    }
    return pts;
}

struct AxisState {
    std::vector<double> roots;
    std::vector<bool> stable;
};

AxisState axis_state(const ReducedHamiltonian& h, bool at_zero, const Window& w) {
    AxisState st;
    const double ang = at_zero ? 0.0 : kPi / h.angle_multiplier;
    st.roots = poly_real_roots(axis_gradient_poly(h, at_zero), w.lo, w.hi);
    for (double r : st.roots) {
        double det = 0.0;
        classify(h, ang, r, &det);
        st.stable.push_back(det > 0.0);
    }
    return st;
}

}  // namespace

std::vector<BifurcationEvent> bifurcation_scan(
    const std::function<ReducedHamiltonian(double)>& builder, double e_lo, double e_hi,
    int n_steps, int grid) {
    if (!(e_lo > 0.0 && e_hi > e_lo && e_hi < 1.0))
        throw std::invalid_argument("bifurcation_scan: e-range must satisfy 0 < lo < hi < 1");
    if (n_steps < 2) throw std::invalid_argument("bifurcation_scan: n_steps >= 2 required");

    std::vector<BifurcationEvent> events;

    auto grid_e = [&](int k) { return e_lo + (e_hi - e_lo) * k / (n_steps - 1); };

    ReducedHamiltonian h_prev = builder(e_lo);
    Window w_prev = auto_window(h_prev);
    const double half_period = kPi / h_prev.angle_multiplier;
    AxisState ax_prev[2] = {axis_state(h_prev, true, w_prev), axis_state(h_prev, false, w_prev)};
    auto off_prev = off_axis_points(h_prev, w_prev, grid);

    // bisection refinement of a boolean predicate flip between e_a and e_b
    auto refine = [&](double e_a, double e_b, const std::function<bool(double)>& pred_at) {
        bool state_a = pred_at(e_a);
        for (int it = 0; it < 40 && e_b - e_a > 1e-7; ++it) {
            const double mid = 0.5 * (e_a + e_b);
            if (pred_at(mid) == state_a)
                e_a = mid;
            else
                e_b = mid;
        }
        return 0.5 * (e_a + e_b);
    };

    for (int k = 1; k < n_steps; ++k) {
        const double e = grid_e(k);
        const double e_before = grid_e(k - 1);
        ReducedHamiltonian h = builder(e);
        Window w = auto_window(h);
        AxisState ax[2] = {axis_state(h, true, w), axis_state(h, false, w)};
        auto off = off_axis_points(h, w, grid);

        // (a) stability flips on matched axis branches
        for (int line = 0; line < 2; ++line) {
            const double ang = line == 0 ? 0.0 : half_period;
            for (std::size_t i = 0; i < ax_prev[line].roots.size(); ++i) {
                const double x_old = ax_prev[line].roots[i];
                // nearest current root
                double best = 0.0;
                double dist = -1.0;
                std::size_t jbest = 0;
                for (std::size_t j = 0; j < ax[line].roots.size(); ++j) {
                    const double d = std::abs(ax[line].roots[j] - x_old);
                    if (dist < 0.0 || d < dist) {
                        dist = d;
                        best = ax[line].roots[j];
                        jbest = j;
                    }
                }
                if (dist < 0.0 || dist > 0.35 * (w.hi - w.lo)) continue;  // branch lost
                if (ax[line].stable[jbest] == ax_prev[line].stable[i]) continue;

                // refine the flip; follow the branch by nearest-root matching
                auto pred = [&](double ee) {
                    ReducedHamiltonian hh = builder(ee);
                    Window ww = auto_window(hh);
                    AxisState st = axis_state(hh, line == 0, ww);
                    double dmin = -1.0;
                    bool stable = false;
                    for (std::size_t j = 0; j < st.roots.size(); ++j) {
                        const double d = std::abs(st.roots[j] - x_old);
                        if (dmin < 0.0 || d < dmin) {
                            dmin = d;
                            stable = st.stable[j];
                        }
                    }
                    return stable;
                };
                const double e_crit = refine(e_before, e, pred);

                BifurcationEvent ev;
                ev.e_crit = e_crit;
                ev.angle = ang;
                // pitchfork iff an off-axis pair exists adjacent to the branch
                // on exactly one side of the flip
                auto pair_near = [&](double ee) {
                    ReducedHamiltonian hh = builder(ee);
                    Window ww = auto_window(hh);
                    for (const auto& p : off_axis_points(hh, ww, grid)) {
                        const double dang = std::min(std::abs(p.angle - ang),
                                                     std::abs(half_period - ang + p.angle));
                        if (dang < 0.45 * half_period &&
                            std::abs(p.action - best) < 0.5 * (ww.hi - ww.lo))
                            return true;
                    }
                    return false;
                };
                ev.kind = BifurcationEvent::Kind::Pitchfork;
                ev.direction = BifurcationEvent::Direction::StabilityExchange;
                for (double de : {2.5e-4, 0.5 * (e - e_before), 2.0 * (e - e_before)}) {
                    const bool before = pair_near(std::max(e_lo, e_crit - de));
                    const bool after = pair_near(std::min(e_hi, e_crit + de));
                    if (before != after) {
                        ev.direction = after ? BifurcationEvent::Direction::Creation
                                             : BifurcationEvent::Direction::Annihilation;
                        break;
                    }
                }
                events.push_back(ev);
            }
        }

        // (b) off-axis pair creation/annihilation away from the axes
        if (off.size() != off_prev.size()) {
            // identify genuinely new/vanished clusters
            auto unmatched = [&](const std::vector<OffAxisPoint>& from,
                                 const std::vector<OffAxisPoint>& in) {
                std::vector<OffAxisPoint> out;
                for (const auto& p : from) {
                    bool hit = false;
                    for (const auto& q : in) {
                        if (std::abs(p.angle - q.angle) < 0.2 * half_period &&
                            std::abs(p.action - q.action) < 0.25 * (w.hi - w.lo)) {
                            hit = true;
                            break;
                        }
                    }
                    if (!hit) out.push_back(p);
                }
                return out;
            };
            const bool creation = off.size() > off_prev.size();
            const auto fresh = creation ? unmatched(off, off_prev) : unmatched(off_prev, off);
            // points born at a symmetry axis belong to a pitchfork handled above
            std::vector<OffAxisPoint> interior;
            for (const auto& p : fresh) {
                if (p.angle > 0.06 * half_period && p.angle < 0.94 * half_period)
                    interior.push_back(p);
            }
            if (!interior.empty()) {
                auto count_at = [&](double ee) {
                    ReducedHamiltonian hh = builder(ee);
                    Window ww = auto_window(hh);
                    return off_axis_points(hh, ww, grid).size();
                };
                auto pred = [&](double ee) { return count_at(ee) == off_prev.size(); };
                const double e_crit = refine(e_before, e, pred);
                BifurcationEvent ev;
                ev.e_crit = e_crit;
                ev.angle = interior.front().angle;
                ev.kind = BifurcationEvent::Kind::SaddleNode;
                ev.direction = creation ? BifurcationEvent::Direction::Creation
                                        : BifurcationEvent::Direction::Annihilation;
                events.push_back(ev);
            }
        }

        h_prev = std::move(h);
        w_prev = w;
        ax_prev[0] = std::move(ax[0]);
        ax_prev[1] = std::move(ax[1]);
        off_prev = std::move(off);
    }

    // an off-axis pair that is born or dies at a pitchfork is part of that
    // event, not a separate saddle-node
    const double near_e = std::max(1e-3, 2.0 * (e_hi - e_lo) / (n_steps - 1));
    std::vector<BifurcationEvent> filtered;
    for (const auto& ev : events) {
        bool shadowed = false;
        if (ev.kind == BifurcationEvent::Kind::SaddleNode) {
            for (const auto& other : events)
                if (other.kind == BifurcationEvent::Kind::Pitchfork &&
                    std::abs(other.e_crit - ev.e_crit) <= near_e)
                    shadowed = true;
        }
        if (!shadowed) filtered.push_back(ev);
    }
    std::sort(filtered.begin(), filtered.end(),
              [](const BifurcationEvent& a, const BifurcationEvent& b) {
                  return a.e_crit < b.e_crit;
              });
    return filtered;
}

}  // namespace ringres
