/**
 * Averaged integrable part of the epicyclic Hamiltonian and the
 * non-degeneracy determinants that gate KAM confinement.
 */

#ifndef RINGRES_NORMALFORM_HPP
#define RINGRES_NORMALFORM_HPP

#include <string>
#include <vector>

#include "ringres/epicyclic.hpp"

namespace ringres {

struct NormalForm {
    double omega1 = 0.0;   // |kappa*|, rad/s
    double omega2 = 0.0;   // n* - Omega_P, rad/s
    double quad_i = 0.0;   // coefficient of I^2 (1/(2 r*^2))
    double coupling = 0.0; // A = 3 n* / (|kappa*| r*^2), coefficient of I J
    double d03 = 0.0;      // cubic radial coefficient (reported, averages out)
    double d04 = 0.0;      // quartic radial coefficient
    double quad_j = 0.0;   // coefficient of J^2 at order 2: (3/8) d04
    double r_star = 0.0;
    int order = 1;         // 1 or 2: J-order retained
};

// phi-average of the axisymmetric part, coefficients read off the series.
NormalForm average_h0(const EpicyclicHamiltonian& epi, int order);

// order 1: -A^2 ; order 2: (3 d04)/(4 r*^2) - A^2.
double kam_determinant(const NormalForm& nf);

struct NondegeneracyRow {
    std::string body;
    std::string resonance;
    int order = 1;
    double omega1 = 0.0;
    double omega2 = 0.0;
    double coupling = 0.0;
    double d04 = 0.0;
    double determinant = 0.0;
    bool non_degenerate = false;
};

// Rows for each (resonance label, reduced center) at orders 1 and 2.
// floor: |det| above it is declared non-degenerate.
std::vector<NondegeneracyRow> nondegeneracy_report(
    const PotentialModel& model,
    const std::vector<std::pair<std::string, double>>& resonant_radii,
    double floor = 1e-30);

}  // namespace ringres

#endif  // RINGRES_NORMALFORM_HPP
