#include "ringres/body.hpp"

#include "exact_int.hpp"

#include <cmath>
#include <fstream>
#include <map>
#include <numbers>
#include <sstream>
#include <stdexcept>

namespace ringres {

BodyParams BodyParams::make(std::string name, double a_km, double b_km, double c_km,
                            double mass_kg, double period_s) {
    if (!(a_km >= b_km && b_km >= c_km && c_km > 0.0))
        throw std::invalid_argument("body: semi-axes must satisfy a >= b >= c > 0");
    if (!(mass_kg > 0.0) || !(period_s > 0.0))
        throw std::invalid_argument("body: mass and rotation period must be positive");
    BodyParams p;
    p.name = std::move(name);
    p.a = a_km;
    p.b = b_km;
    p.c = c_km;
    p.mass = mass_kg;
    p.rotation_period = period_s;
    p.gm = kGravitationalConstant * mass_kg;
    p.spin_rate = 2.0 * std::numbers::pi / period_s;
    return p;
}

double reference_radius(const BodyParams& body) {
    const double s = 1.0 / (body.a * body.a) + 1.0 / (body.b * body.b) + 1.0 / (body.c * body.c);
    return std::sqrt(3.0 / s);
}

ShapeConstants shape_parameters(const BodyParams& body, bool truncate_radius_km) {
    ShapeConstants sc;
    sc.ref_radius = reference_radius(body);
    if (truncate_radius_km) sc.ref_radius = std::floor(sc.ref_radius);
    const double r2 = sc.ref_radius * sc.ref_radius;
    const double a2 = body.a * body.a, b2 = body.b * body.b, c2 = body.c * body.c;
    sc.oblateness = (a2 + b2 - 2.0 * c2) / (4.0 * r2);
    sc.elongation = (a2 - b2) / (2.0 * r2);
    return sc;
}

using detail::factorial128;
using detail::int128_to_double;

double legendre_even_zero(int ell, int p) {
    if (ell < 0 || p < 0 || p > ell)
        throw std::invalid_argument("legendre_even_zero: requires 0 <= p <= ell");
    if (ell > 8)
        throw std::invalid_argument("legendre_even_zero: ell > 8 not supported");
    // (2l+2p)! / ((l+p)! (l-p)!) is an exact integer times (l+p)!; do the
    // cancellations in 128-bit so no intermediate rounding occurs.
    __int128 num = factorial128(2 * ell + 2 * p);
    __int128 den = factorial128(ell + p) * factorial128(ell - p);
    __int128 q = num / den;          // exact: binomial * falling factorial
    __int128 rem = num % den;
    double value = int128_to_double(q) + (rem == 0 ? 0.0 : int128_to_double(rem) / int128_to_double(den));
    value /= std::pow(4.0, ell);     // 2^(2l) is a power of two, exact scaling
    if ((ell - p) % 2 != 0) value = -value;
    return value;
}

double stokes_coefficient(const BodyParams& body, int ell, int p) {
    if (ell < 0 || p < 0 || p > ell)
        throw std::invalid_argument("stokes_coefficient: requires 0 <= p <= ell");
    if (ell > 8)
        throw std::invalid_argument("stokes_coefficient: ell > 8 not supported");
    const double R = reference_radius(body);
    const double a2 = body.a * body.a, b2 = body.b * body.b, c2 = body.c * body.c;
    const double ab = a2 - b2;                 // >= 0 under the ordering
    const double cm = c2 - 0.5 * (a2 + b2);    // <= 0 under the ordering

    const __int128 den_pref = factorial128(2 * ell + 1) * (2 * ell + 3);
    const double prefactor = 3.0 / std::pow(R, 2 * ell) *
        int128_to_double(factorial128(ell) * factorial128(2 * ell - 2 * p)) /
        (int128_to_double(den_pref) * std::pow(4.0, p)) * (p == 0 ? 1.0 : 2.0);

    double sum = 0.0;
    for (int k = 0; 2 * k <= ell - p; ++k) {
        const double term = std::pow(ab, p + 2 * k) * std::pow(cm, ell - p - 2 * k) /
            (std::pow(16.0, k) *
             int128_to_double(factorial128(ell - p - 2 * k) * factorial128(p + k) * factorial128(k)));
        sum += term;
    }
    return prefactor * sum;
}

BodyParams preset_body(const std::string& name) {
    if (name == "AS")
        return BodyParams::make("AS", 1000.0, 980.0, 960.0, 1e21, 8.0 * 3600.0);
    if (name == "HA")
        return BodyParams::make("HA", 1000.0, 650.0, 400.0, 1e21, 8.0 * 3600.0);
    throw std::invalid_argument("unknown body preset: " + name);
}

BodyParams load_body_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open body file: " + path);
    std::map<std::string, double> kv;
    std::string line;
    while (std::getline(in, line)) {
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        for (char& ch : line)
            if (ch == '=' || ch == ':') ch = ' ';
        std::istringstream ls(line);
        std::string key;
        double value;
        if (ls >> key >> value) kv[key] = value;
    }
    for (const char* key : {"a_km", "b_km", "c_km", "mass_kg", "rotation_period_h"})
        if (!kv.count(key)) throw std::runtime_error(std::string("body file: missing key ") + key);
    return BodyParams::make(path, kv["a_km"], kv["b_km"], kv["c_km"], kv["mass_kg"],
                            kv["rotation_period_h"] * 3600.0);
}

}  // namespace ringres
