/**
 * Epicyclic Hamiltonian: Taylor expansion of the particle Hamiltonian about
 * a reference radius, cast into action-angle variables (J, phi) for the
 * radial oscillation and (I, theta) for the synodic drift, carried as a
 * PoissonSeries.
 *
 * The expansion coefficients are generated analytically for arbitrary
 * radial order (each contribution is a power law in r), so the truncation
 * order is a runtime choice.
 */

#ifndef RINGRES_EPICYCLIC_HPP
#define RINGRES_EPICYCLIC_HPP

#include "ringres/potential.hpp"
#include "ringres/series.hpp"

namespace ringres {

struct ExpansionCenter {
    double r_star = 0.0;      // km
    double n_star = 0.0;      // rad/s
    double kappa_star = 0.0;  // rad/s (positive at every supported radius)
    double p_star = 0.0;      // km^2/s, n* r*^2
    int rho_order = 16;       // truncation order of the radial expansion

    static ExpansionCenter at_radius(const PotentialModel& model, double r, int rho_order = 16);
};

struct EpicyclicHamiltonian {
    ExpansionCenter center;
    PotentialModel model;
    PoissonSeries series;   // |k*| J + (n*-Om) I + ... fully linearized
    double kappa_abs = 0.0; // linear part, coefficient of J
    double synodic = 0.0;   // linear part, coefficient of I: n* - Omega_P
};

// c_{i,j}: coefficient of I^i rho^j in the expansion of the axisymmetric
// part plus (I+p*)^2/(2(r*+rho)^2).  Valid for i = 0..2, j >= 3-i.
double taylor_c(const ExpansionCenter& center, const PotentialModel& model, int i, int j);

// V_{j,i}: coefficient of rho^j cos(2 i theta) in U_ns(r*+rho, theta).
double taylor_v(const ExpansionCenter& center, const PotentialModel& model, int j, int i);

// Full series assembly.
EpicyclicHamiltonian assemble(const ExpansionCenter& center, const PotentialModel& model);

// J = 1/2 |k*| r*^2 e^2 and its inverse (eccentricity reporting convention).
double j_from_eccentricity(const ExpansionCenter& center, double e);
double eccentricity_from_j(const ExpansionCenter& center, double J);

// Action level from the radial initial condition rho = e r*, p_rho = e r* n*
// (the convention that fixes integral levels in the resonant reductions).
double action_level_from_eccentricity(const ExpansionCenter& center, double e);

// max |H_(rho_order) - H_(rho_order-2)| / max |H_(rho_order)| over a
// (theta, phi) grid at J = J(e_max), I = 0.
double truncation_remainder(const ExpansionCenter& center, const PotentialModel& model,
                            double e_max);

}  // namespace ringres

#endif  // RINGRES_EPICYCLIC_HPP
