/**
 * Resonance location (corotation and Lindblad radii) and reduction of the
 * epicyclic Hamiltonian to the 1-DOF resonant Hamiltonians.
 */

#ifndef RINGRES_RESONANCE_HPP
#define RINGRES_RESONANCE_HPP

#include <stdexcept>
#include <string>
#include <vector>

#include "ringres/epicyclic.hpp"

namespace ringres {

class NoBracketError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/**
 * A p:q resonance: the particle completes p revolutions per q body
 * rotations in the frame precessing with the orbit.  Corotation is 1:1.
 * Internally encoded as (m, j) with j kappa = m (n - Omega_P); corotation
 * carries j = 0.
 */
struct ResonanceSpec {
    int p = 1, q = 1;
    int m = 1, j = 0;
    std::string label;        // "p:q"
    double r_res = 0.0;       // km, solves the full resonance equation
    double r_kep = 0.0;       // km, Kepler's third law with the spin rate
    double n_star = 0.0;      // rad/s at r_res
    double kappa_star = 0.0;  // rad/s at r_res
};

// (GM T^2)^(1/3) with T = (q/p) / Omega_P.
double keplerian_radius(const BodyParams& body, int p, int q);

// Solves (p-q) kappa(r) = p (n(r) - Omega_P) by bracketed refinement inside
// [0.5, 2.0] x r_kep; throws NoBracketError / NonRealFrequencyError.
ResonanceSpec resonant_radius(const PotentialModel& model, int p, int q);

// |r_kep - r_res| / r_kep.
double radius_discrepancy(const PotentialModel& model, int p, int q);

/**
 * 1-DOF reduced Hamiltonian
 *
 *    H(x, ang) = sum_k normal[k] x^k
 *              + sum_{k>=1} harmonic[k-1](x) * cos(k * angle_multiplier * ang)
 *
 * where x is I (corotation, angle theta, multiplier 2) or G (Lindblad,
 * angle psi, multiplier 1).
 */
struct ReducedHamiltonian {
    ResonanceSpec resonance;
    std::string angle_name;  // "theta" or "psi"
    int angle_multiplier = 1;
    std::vector<double> normal;                 // normal[k] * x^k, normal[0] == 0
    std::vector<std::vector<double>> harmonic;  // harmonic[k-1][d] * x^d
    double j0 = 0.0;  // radial action level
    double i0 = 0.0;  // synodic action at the displaced circular orbit (Lindblad)
    double l0 = 0.0;  // conserved combination fixed by (j0, i0) (Lindblad)
    double eccentricity = 0.0;

    double energy(double x, double ang) const;
    double d_action(double x, double ang) const;
    double d_angle(double x, double ang) const;
    double d2_action(double x, double ang) const;
    double d2_angle(double x, double ang) const;
    double d2_mixed(double x, double ang) const;
};

// Keeps the theta-harmonics, freezes J at the level set by e (Eq-level
// initial conditions rho = e r, p_rho = e r n*).
ReducedHamiltonian reduce_corotation(const EpicyclicHamiltonian& epi, double e);

// 1:2 (m=-1, j=1) and 1:3 (m=-1, j=2) reductions via the canonical changes
// psi = 2phi + 2theta, G = I - J/2, L = J - I      (1:2)
// psi = 4phi + 2theta, G = (J - I)/2, L = 2I - J   (1:3)
// with L frozen at L0.
ReducedHamiltonian reduce_lindblad(const EpicyclicHamiltonian& epi, const ResonanceSpec& spec,
                                   double e);

}  // namespace ringres

#endif  // RINGRES_RESONANCE_HPP
