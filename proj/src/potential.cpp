#include "ringres/potential.hpp"

#include <cmath>

namespace ringres {

PotentialModel PotentialModel::build(const BodyParams& body, int ell_max) {
    if (ell_max < 1 || ell_max > 8)
        throw std::invalid_argument("PotentialModel: ell_max must be in 1..8");
    PotentialModel m;
    m.body = body;
    m.shape = shape_parameters(body);
    m.ell_max = ell_max;
    m.axi.resize(ell_max + 1);
    m.ns.resize(ell_max + 1);
    for (int l = 0; l <= ell_max; ++l) {
        m.axi[l] = stokes_coefficient(body, l, 0) * legendre_even_zero(l, 0);
        m.ns[l].resize(l);
        for (int p = 1; p <= l; ++p)
            m.ns[l][p - 1] = stokes_coefficient(body, l, p) * legendre_even_zero(l, p);
    }
    return m;
}

namespace {

void require_positive_radius(double r) {
    if (!(r > 0.0)) throw std::invalid_argument("potential: radius must be > 0");
}

}  // namespace

double u_axisymmetric(const PotentialModel& model, double r) {
    require_positive_radius(r);
    const double x = (model.shape.ref_radius / r) * (model.shape.ref_radius / r);
    // Horner in x = (R/r)^2
    double s = 0.0;
    for (int l = model.ell_max; l >= 0; --l) s = s * x + model.axi[l];
    return -model.body.gm / r * s;
}

double u_nonaxisymmetric(const PotentialModel& model, double r, double theta) {
    require_positive_radius(r);
    const double x = (model.shape.ref_radius / r) * (model.shape.ref_radius / r);
    double s = 0.0;
    double xl = x;  // x^l
    for (int l = 1; l <= model.ell_max; ++l) {
        double inner = 0.0;
        for (int p = 1; p <= l; ++p)
            inner += model.ns[l][p - 1] * std::cos(2.0 * p * theta);
        s += xl * inner;
        xl *= x;
    }
    return -model.body.gm / r * s;
}

double u_axisymmetric_derivative(const PotentialModel& model, double r, int order) {
    require_positive_radius(r);
    if (order < 0 || order > 4)
        throw std::invalid_argument("u_axisymmetric_derivative: order must be 0..4");
    // U_s = -GM sum_l axi[l] R^(2l) r^(-(2l+1)); each term is a power law.
    const double R = model.shape.ref_radius;
    double s = 0.0;
    for (int l = 0; l <= model.ell_max; ++l) {
        double factor = -1.0;
        const int e = 2 * l + 1;
        for (int k = 0; k < order; ++k) factor *= -(e + k);
        s += factor * model.axi[l] * std::pow(R / r, 2 * l) / std::pow(r, order);
    }
    return model.body.gm / r * s;
}

double n_squared(const PotentialModel& model, double r) {
    require_positive_radius(r);
    const double x = (model.shape.ref_radius / r) * (model.shape.ref_radius / r);
    double s = 0.0;
    for (int l = model.ell_max; l >= 0; --l) s = s * x + (2 * l + 1) * model.axi[l];
    return model.body.gm / (r * r * r) * s;
}

double kappa_squared(const PotentialModel& model, double r) {
    require_positive_radius(r);
    const double x = (model.shape.ref_radius / r) * (model.shape.ref_radius / r);
    double s = 0.0;
    for (int l = model.ell_max; l >= 0; --l) s = s * x + (2 * l + 1) * (1 - 2 * l) * model.axi[l];
    return model.body.gm / (r * r * r) * s;
}

Frequencies frequencies(const PotentialModel& model, double r) {
    const double n2 = n_squared(model, r);
    const double k2 = kappa_squared(model, r);
    if (!(n2 > 0.0) || !(k2 > 0.0))
        throw NonRealFrequencyError("non-real frequency at r = " + std::to_string(r) + " km");
    return Frequencies{std::sqrt(n2), std::sqrt(k2)};
}

}  // namespace ringres
