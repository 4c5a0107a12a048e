// Exact 128-bit integer helpers for factorial/binomial evaluation.
// Internal to the library sources.

#ifndef RINGRES_SRC_EXACT_INT_HPP
#define RINGRES_SRC_EXACT_INT_HPP

namespace ringres::detail {

// n <= 33 fits in __int128.
inline __int128 factorial128(int n) {
    __int128 f = 1;
    for (int k = 2; k <= n; ++k) f *= k;
    return f;
}

inline double int128_to_double(__int128 v) {
    const bool neg = v < 0;
    if (neg) v = -v;
    double d = 0.0;
    double scale = 1.0;
    while (v > 0) {
        d += scale * static_cast<double>(static_cast<unsigned long long>(v & 0xffffffffULL));
        v >>= 32;
        scale *= 4294967296.0;
    }
    return neg ? -d : d;
}

// Exact for n <= 33 (largest needed: C(2*8 + 16, 16)).
inline double binomial(int n, int k) {
    if (k < 0 || k > n) return 0.0;
    __int128 b = 1;
    for (int t = 0; t < k; ++t) {
        b *= (n - t);
        b /= (t + 1);  // exact: product of t+1 consecutive integers
    }
    return int128_to_double(b);
}

}  // namespace ringres::detail

#endif
