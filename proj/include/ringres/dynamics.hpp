/**
 * Dynamics on reduced 1-DOF Hamiltonians: fixed-step high-order integration,
 * equilibrium search and classification, libration amplitudes, and
 * bifurcation scans over eccentricity.
 */

#ifndef RINGRES_DYNAMICS_HPP
#define RINGRES_DYNAMICS_HPP

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "ringres/resonance.hpp"

namespace ringres {

struct EquilibriumPoint {
    double angle = 0.0;
    double action = 0.0;
    enum class Kind { Centre, Saddle, Degenerate } kind = Kind::Centre;
    double hessian_det = 0.0;
};

struct LibrationMeasure {
    double pendulum_semi_amplitude = 0.0;  // corotation closed form
    double separatrix_amplitude = 0.0;     // numeric level-set measure
    EquilibriumPoint centre;
};

struct BifurcationEvent {
    double e_crit = 0.0;
    double angle = 0.0;  // representative branch angle in [0, pi]
    enum class Kind { Pitchfork, SaddleNode } kind = Kind::Pitchfork;
    enum class Direction { Creation, Annihilation, StabilityExchange } direction =
        Direction::StabilityExchange;
};

struct Trajectory {
    std::vector<double> time;
    std::vector<double> angle;
    std::vector<double> action;
    double energy_drift = 0.0;  // max relative deviation from the initial energy
};

/** State for the generic fixed-step integrator. */
using DerivFn = std::function<void(const double* state, double* deriv)>;

// Cooper-Verner 8th-order explicit Runge-Kutta, one fixed step, dim <= 8.
void rk8_step(const DerivFn& f, double* state, int dim, double dt);

// Hamiltonian flow of a reduced Hamiltonian (angle-dot = dH/daction,
// action-dot = -dH/dangle); throws if the energy drift exceeds 1e-8.
Trajectory integrate(const ReducedHamiltonian& h, double angle0, double action0, double t_span,
                     double dt);

// Multi-start damped Newton on the gradient over an angle x action grid,
// symmetry lines always seeded; deduplicated at 1e-8.
std::vector<EquilibriumPoint> find_equilibria(const ReducedHamiltonian& h,
                                              double action_lo, double action_hi,
                                              int grid = 64);

// Window auto-sized from the Hamiltonian structure (corotation: +-3 pendulum
// amplitudes around the fixed-action line; Lindblad: hull of the on-axis
// equilibria, padded).
std::vector<EquilibriumPoint> find_equilibria(const ReducedHamiltonian& h, int grid = 64);

EquilibriumPoint::Kind classify(const ReducedHamiltonian& h, double angle, double action,
                                double* hessian_det = nullptr);

// sqrt(-2 alpha3 / alpha2); throws std::domain_error when the sign
// conditions (alpha2 > 0, alpha3 < 0) fail.
double pendulum_amplitude(const ReducedHamiltonian& h_corotation);

// Level-set extent through the bounding saddle along the centre's angle
// line: semi-amplitude for corotation, full width for the Lindblad cases.
double separatrix_amplitude(const ReducedHamiltonian& h, const EquilibriumPoint& centre);

LibrationMeasure libration_measure(const ReducedHamiltonian& h, const EquilibriumPoint& centre);

// Continues equilibrium branches over [e_lo, e_hi] with n_steps grid points,
// records stability flips and off-axis pair creation/annihilation, refines
// each event to de <= 1e-4, and classifies it structurally.
std::vector<BifurcationEvent> bifurcation_scan(
    const std::function<ReducedHamiltonian(double)>& builder, double e_lo, double e_hi,
    int n_steps, int grid = 64);

// Real roots of sum_k poly[k] x^k inside [lo, hi] (recursive derivative
// bracketing; exposed for reuse in the CLI and tests).
std::vector<double> poly_real_roots(const std::vector<double>& poly, double lo, double hi);

}  // namespace ringres

#endif  // RINGRES_DYNAMICS_HPP
