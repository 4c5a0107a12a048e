/**
 * Equatorial gravitational potential of the rotating ellipsoid, split into
 * its axisymmetric and non-axisymmetric parts, and the orbital frequencies
 * derived from the axisymmetric part.
 */

#ifndef RINGRES_POTENTIAL_HPP
#define RINGRES_POTENTIAL_HPP

#include <stdexcept>
#include <vector>

#include "ringres/body.hpp"

namespace ringres {

/** Thrown when a squared frequency is non-positive at the requested radius. */
class NonRealFrequencyError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/**
 * Truncated potential model.  Stores the products C_{2l,2p} P_{2l,2p}(0)
 * so that evaluation is a plain power series in (R/r)^2.
 */
struct PotentialModel {
    BodyParams body;
    ShapeConstants shape;        // exact-R shape constants
    int ell_max = 5;             // truncation of the l-sum, 1..8

    // axi[l] = C_{2l,0} P_{2l,0}(0), l = 0..ell_max
    std::vector<double> axi;
    // ns[l][p-1] = C_{2l,2p} P_{2l,2p}(0), 1 <= p <= l
    std::vector<std::vector<double>> ns;

    static PotentialModel build(const BodyParams& body, int ell_max = 5);
};

struct Frequencies {
    double n = 0.0;      // mean motion, rad/s
    double kappa = 0.0;  // epicyclic frequency, rad/s
};

// U_s(r), km^2/s^2; r > 0.
double u_axisymmetric(const PotentialModel& model, double r);

// U_ns(r, theta), km^2/s^2; pi-periodic in theta.
double u_nonaxisymmetric(const PotentialModel& model, double r, double theta);

// d^order U_s / dr^order, analytic term-by-term (order 0..4).
double u_axisymmetric_derivative(const PotentialModel& model, double r, int order);

// n^2 = (1/r) U_s', kappa^2 = (3/r) U_s' + U_s''; may be negative close in.
double n_squared(const PotentialModel& model, double r);
double kappa_squared(const PotentialModel& model, double r);

// Both frequencies; throws NonRealFrequencyError if either square is <= 0.
Frequencies frequencies(const PotentialModel& model, double r);

}  // namespace ringres

#endif  // RINGRES_POTENTIAL_HPP
