#ifndef SUBEQLAB_CYCLO_HPP
#define SUBEQLAB_CYCLO_HPP

#include <boost/multiprecision/cpp_int.hpp>
#include <complex>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace subeqlab {

using Int = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

struct division_by_zero : std::domain_error {
    division_by_zero() : std::domain_error("division by zero in Q(w)") {}
};

struct parse_error : std::runtime_error {
    explicit parse_error(const std::string& msg) : std::runtime_error(msg) {}
};

/// Element p + q*w of the cyclotomic field Q(w), w a primitive cube root of
/// unity (w^2 = -1 - w).  Values are immutable in spirit: all operations
/// return fresh, normalized results.
struct Cyclo {
    Rational p;
    Rational q;

    Cyclo() : p(0), q(0) {}
    Cyclo(int v) : p(v), q(0) {}
    Cyclo(long v) : p(v), q(0) {}
    Cyclo(const Rational& v) : p(v), q(0) {}
    Cyclo(Rational pp, Rational qq) : p(std::move(pp)), q(std::move(qq)) {}

    bool is_zero() const { return p == 0 && q == 0; }
    bool is_rational() const { return q == 0; }

    bool operator==(const Cyclo& o) const { return p == o.p && q == o.q; }
    bool operator!=(const Cyclo& o) const { return !(*this == o); }
};

static const Cyclo kOmega{Rational(0), Rational(1)};

inline Cyclo operator+(const Cyclo& x, const Cyclo& y) { return {x.p + y.p, x.q + y.q}; }
inline Cyclo operator-(const Cyclo& x, const Cyclo& y) { return {x.p - y.p, x.q - y.q}; }
inline Cyclo operator-(const Cyclo& x) { return {-x.p, -x.q}; }

// (p1 + q1 w)(p2 + q2 w), reducing w^2 = -1 - w.
inline Cyclo operator*(const Cyclo& x, const Cyclo& y) {
    Rational ww = x.q * y.q;
    return {x.p * y.p - ww, x.p * y.q + x.q * y.p - ww};
}

/// Field norm N(p + qw) = p^2 - pq + q^2; zero iff the element is zero.
inline Rational norm(const Cyclo& x) { return x.p * x.p - x.p * x.q + x.q * x.q; }

inline Cyclo inverse(const Cyclo& x) {
    if (x.is_zero()) throw division_by_zero{};
    Rational n = norm(x);
    // conjugate (w -> w^2): (p - q) - q w
    return {(x.p - x.q) / n, -x.q / n};
}

inline Cyclo operator/(const Cyclo& x, const Cyclo& y) { return x * inverse(y); }

inline Cyclo& operator+=(Cyclo& x, const Cyclo& y) { x = x + y; return x; }
inline Cyclo& operator-=(Cyclo& x, const Cyclo& y) { x = x - y; return x; }
inline Cyclo& operator*=(Cyclo& x, const Cyclo& y) { x = x * y; return x; }

inline Cyclo pow(const Cyclo& x, unsigned n) {
    Cyclo r{1};
    Cyclo b = x;
    while (n) {
        if (n & 1u) r = r * b;
        b = b * b;
        n >>= 1u;
    }
    return r;
}

inline std::complex<double> embed_complex(const Cyclo& x) {
    static const std::complex<double> w(-0.5, 0.8660254037844386467637232);
    return std::complex<double>(static_cast<double>(x.p)) +
           std::complex<double>(static_cast<double>(x.q)) * w;
}

/// The three cube roots {a, wa, w^2 a} sharing the cube a^3.
inline std::vector<Cyclo> cube_roots_of(const Cyclo& a) {
    Cyclo w2 = kOmega * kOmega;
    return {a, kOmega * a, w2 * a};
}

/// Rough size measure used for pivot selection in exact elimination.
std::size_t height(const Cyclo& x);

std::string to_string(const Rational& r);
std::string to_string(const Cyclo& x);

/// Parses "p/q", "p", "p/q + r/s w", "w", "-w", "2w", ...  (w denotes omega).
Cyclo parse_cyclo(const std::string& text);
Rational parse_rational(const std::string& text);

}  // namespace subeqlab

#endif
