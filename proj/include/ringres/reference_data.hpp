/**
 * Published benchmark values the tool is expected to reproduce, plus the
 * comparison rule used throughout the verification report.
 *
 * Benchmark tables print two significant figures obtained by truncation
 * toward zero, so a computed value is accepted when it is either within
 * the stated relative tolerance of the table entry or truncates to the
 * entry exactly at its displayed precision.
 */

#ifndef RINGRES_REFERENCE_DATA_HPP
#define RINGRES_REFERENCE_DATA_HPP

#include <string>
#include <vector>

namespace ringres::ref {

// Truncate toward zero to n significant decimal digits.
double truncate_sig(double value, int digits);

// within tolerance, or truncates to the expected entry (digits > 0).
bool matches(double value, double expected, double rel_tol, int digits = 0);

struct BodyCase {
    const char* name;
    double r_corotation;  // km
    double r_12;          // km
    double r_13;          // km
    double oblateness;    // evaluated with the truncated reference radius
    double elongation;
};

// Table-1 values; the AS oblateness/elongation pair follows the equations
// (the published table interchanges the two labels for AS).
extern const BodyCase kBodyCases[2];

struct CorotationCase {
    const char* name;
    double alpha[8];           // alpha[1..7]
    double j0;                 // action level at e = 1e-3
    double pendulum_amplitude; // km^2/s
    double separatrix_amplitude;
};
extern const CorotationCase kCorotation[2];

struct LindbladCase {
    const char* name;      // body
    const char* resonance; // "1:2" or "1:3"
    double j0, i0, l0;
    double alpha[11];      // alpha[1..10]
    // equilibria at e = 1e-3: (psi, G), centres first
    double eq_psi[4];
    double eq_g[4];
    int n_equilibria;
    double width[2];       // island full widths (one entry for 1:3)
    int n_widths;
};
extern const LindbladCase kLindblad[4];

struct DeltaPolynomial {
    const char* name;       // body
    const char* resonance;
    int harmonic;           // k of cos(k psi)
    double coeff[9];        // G^0 .. G^8
};
extern const std::vector<DeltaPolynomial> kDeltaPolynomials;

struct BifurcationExpectation {
    const char* name;
    const char* resonance;
    double angle;   // branch angle (0 or pi); negative = interior (saddle-node)
    double e_crit;
    double tol;
};
extern const std::vector<BifurcationExpectation> kBifurcations;

}  // namespace ringres::ref

#endif  // RINGRES_REFERENCE_DATA_HPP
