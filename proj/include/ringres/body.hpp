/**
 * Physical parameters of the central rotating ellipsoid and the
 * shape-derived constants of its gravity field.
 */

#ifndef RINGRES_BODY_HPP
#define RINGRES_BODY_HPP

#include <string>

namespace ringres {

// CODATA 2018 gravitational constant, km^3 kg^-1 s^-2.
constexpr double kGravitationalConstant = 6.6743e-20;

/**
 * Homogeneous triaxial ellipsoid rotating about its shortest axis.
 * Units: km, kg, s throughout.
 */
struct BodyParams {
    std::string name;
    double a = 0.0;                // semi-axis, km (a >= b >= c > 0)
    double b = 0.0;                // km
    double c = 0.0;                // km
    double mass = 0.0;             // kg
    double rotation_period = 0.0;  // s
    double gm = 0.0;               // km^3/s^2
    double spin_rate = 0.0;        // rad/s, 2*pi / rotation_period

    static BodyParams make(std::string name, double a_km, double b_km, double c_km,
                           double mass_kg, double period_s);
};

/** Dimensionless shape measures and the reference length they refer to. */
struct ShapeConstants {
    double ref_radius = 0.0;  // km
    double oblateness = 0.0;  // (a^2 + b^2 - 2c^2) / (4 R^2)
    double elongation = 0.0;  // (a^2 - b^2) / (2 R^2)
};

// R with 3/R^2 = 1/a^2 + 1/b^2 + 1/c^2.
double reference_radius(const BodyParams& body);

// Shape constants; truncate_radius_km evaluates them with R cut to whole km
// (the convention behind the published parameter tables).
ShapeConstants shape_parameters(const BodyParams& body, bool truncate_radius_km = false);

// P_{2l,2p}(0) = (-1)^(l-p) (2l+2p)! / (2^(2l) (l+p)! (l-p)!), evaluated in
// exact integer arithmetic. Requires 0 <= p <= l <= 8.
double legendre_even_zero(int ell, int p);

// C_{2l,2p} of the homogeneous-ellipsoid gravity field, 0 <= p <= l <= 8.
double stokes_coefficient(const BodyParams& body, int ell, int p);

// Bundled presets "AS" (almost spherical) and "HA" (highly aspherical).
BodyParams preset_body(const std::string& name);

// Flat key-value file: keys a_km, b_km, c_km, mass_kg, rotation_period_h.
BodyParams load_body_file(const std::string& path);

}  // namespace ringres

#endif  // RINGRES_BODY_HPP
