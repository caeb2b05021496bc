#ifndef SUBEQLAB_JET_HPP
#define SUBEQLAB_JET_HPP

#include <array>
#include <complex>
#include <cstddef>

namespace subeqlab {

using cd = std::complex<double>;

/// Truncated derivative jet (value and first four derivatives with respect
/// to z).  Arithmetic follows the Leibniz rule, so composing analytic
/// building blocks yields exact derivative formulas, no finite differences.
struct Jet {
    std::array<cd, 5> v{};

    static Jet constant(cd c) {
        Jet j;
        j.v[0] = c;
        return j;
    }

    cd value() const { return v[0]; }
    cd d1() const { return v[1]; }
    cd d2() const { return v[2]; }
    cd d3() const { return v[3]; }
};

inline Jet operator+(const Jet& x, const Jet& y) {
    Jet r;
    for (std::size_t i = 0; i < 5; ++i) r.v[i] = x.v[i] + y.v[i];
    return r;
}

inline Jet operator-(const Jet& x, const Jet& y) {
    Jet r;
    for (std::size_t i = 0; i < 5; ++i) r.v[i] = x.v[i] - y.v[i];
    return r;
}

inline Jet operator-(const Jet& x) {
    Jet r;
    for (std::size_t i = 0; i < 5; ++i) r.v[i] = -x.v[i];
    return r;
}

inline Jet operator*(cd c, const Jet& x) {
    Jet r;
    for (std::size_t i = 0; i < 5; ++i) r.v[i] = c * x.v[i];
    return r;
}

inline Jet operator+(const Jet& x, cd c) {
    Jet r = x;
    r.v[0] += c;
    return r;
}

inline Jet operator-(const Jet& x, cd c) {
    Jet r = x;
    r.v[0] -= c;
    return r;
}

namespace detail {
inline constexpr double kBinom[5][5] = {{1, 0, 0, 0, 0},
                                        {1, 1, 0, 0, 0},
                                        {1, 2, 1, 0, 0},
                                        {1, 3, 3, 1, 0},
                                        {1, 4, 6, 4, 1}};
}

inline Jet operator*(const Jet& x, const Jet& y) {
    Jet r;
    for (std::size_t n = 0; n < 5; ++n) {
        cd s = 0;
        for (std::size_t i = 0; i <= n; ++i) s += detail::kBinom[n][i] * x.v[i] * y.v[n - i];
        r.v[n] = s;
    }
    return r;
}

inline Jet operator/(const Jet& x, const Jet& y) {
    Jet r;
    for (std::size_t n = 0; n < 5; ++n) {
        cd s = x.v[n];
        for (std::size_t i = 0; i < n; ++i) s -= detail::kBinom[n][i] * r.v[i] * y.v[n - i];
        r.v[n] = s / y.v[0];
    }
    return r;
}

/// Jet of the derivative of x; the top component is lost (set to zero), so
/// the result is trustworthy through order 3 only.
inline Jet jet_shift(const Jet& x) {
    Jet r;
    for (std::size_t i = 0; i + 1 < 5; ++i) r.v[i] = x.v[i + 1];
    r.v[4] = 0;
    return r;
}

inline Jet jet_pow(const Jet& x, unsigned n) {
    Jet r = Jet::constant(1.0);
    for (unsigned i = 0; i < n; ++i) r = r * x;
    return r;
}

/// exp(k (z - z0)) as a jet in z.
inline Jet jet_exp(cd k, cd z_minus_z0) {
    Jet r;
    cd e = std::exp(k * z_minus_z0);
    cd f = e;
    for (std::size_t i = 0; i < 5; ++i) {
        r.v[i] = f;
        f *= k;
    }
    return r;
}

}  // namespace subeqlab

#endif
