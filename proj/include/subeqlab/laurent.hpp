#ifndef SUBEQLAB_LAURENT_HPP
#define SUBEQLAB_LAURENT_HPP

#include <limits>
#include <optional>
#include <vector>

#include "subeqlab/cyclo.hpp"

namespace subeqlab {

struct depth_exhausted : std::runtime_error {
    depth_exhausted() : std::runtime_error("requested coefficient beyond guaranteed depth") {}
};

struct invalid_residue : std::invalid_argument {
    invalid_residue() : std::invalid_argument("residue^3 != c0") {}
};

/// Exponent bound standing in for "known to all orders" (exact constants).
inline constexpr int kExactHi = std::numeric_limits<int>::max() / 4;

/// Truncated Laurent series sum_{e=lo..hi} a[e-lo] (z-z0)^e with exact
/// coefficients.  Coefficients below lo are exactly zero; nothing is known
/// beyond hi.  Normalized so the first stored coefficient is nonzero (a is
/// empty, lo == hi+1, when the series is zero through hi).
struct LaurentSeries {
    int lo = 0;
    int hi = -1;
    std::vector<Cyclo> a;

    bool is_zero() const { return a.empty(); }
    int depth() const { return hi - lo + 1; }

    /// Coefficient of (z-z0)^e; throws depth_exhausted past hi.
    const Cyclo& coeff(int e) const;

    static LaurentSeries zero(int hi = kExactHi);
    static LaurentSeries constant(const Cyclo& c, int hi = kExactHi);
    /// c * (z-z0)^e, exact to all orders.
    static LaurentSeries monomial(const Cyclo& c, int e, int hi = kExactHi);
    static LaurentSeries from_coeffs(int lo, std::vector<Cyclo> coeffs);

    void trim();
};

LaurentSeries series_add(const LaurentSeries& x, const LaurentSeries& y);
LaurentSeries series_sub(const LaurentSeries& x, const LaurentSeries& y);
LaurentSeries series_neg(const LaurentSeries& x);
LaurentSeries series_scale(const Cyclo& c, const LaurentSeries& x);
/// Product, optionally truncated to exponents <= max_exp.
LaurentSeries series_mul(const LaurentSeries& x, const LaurentSeries& y, int max_exp = kExactHi);
LaurentSeries series_diff(const LaurentSeries& x);
LaurentSeries series_pow(const LaurentSeries& x, unsigned n, int max_exp = kExactHi);
LaurentSeries series_truncate(const LaurentSeries& x, int max_exp);
bool series_equal(const LaurentSeries& x, const LaurentSeries& y);

/// Coefficient tuple of c0 u''' + 6u^4 + c1 u'' + c2 u u' + c4 u' + c5 u^2 +
/// c6 u + c7 = 0, with c0 = a^3 derived from the chosen cube root a.
struct OdeInstance {
    Cyclo a;
    Cyclo c1, c2, c4, c5, c6, c7;

    Cyclo c0() const { return pow(a, 3); }
    /// The three admissible leading residues a, wa, w^2 a.
    std::vector<Cyclo> residues() const { return cube_roots_of(a); }
};

/// Dense univariate polynomial over Q(w), c[i] the coefficient of r^i.
struct Poly {
    std::vector<Cyclo> c;

    int degree() const { return static_cast<int>(c.size()) - 1; }
    Cyclo eval(const Cyclo& r) const;
};

struct FuchsReport {
    std::vector<long> integer_roots;
    bool has_nonneg_integer = false;
};

/// Monic indicial polynomial of the ODE linearized around u ~ residue/(z-z0).
/// Throws invalid_residue unless residue^3 == c0.
Poly indicial_polynomial(const OdeInstance& ode, const Cyclo& residue);

/// Integer roots of p (rational-root search within the Cauchy bound).
FuchsReport check_fuchs_indices(const Poly& p);

/// Laurent expansion of the solution branch with leading coefficient
/// `residue`, carrying `depth` coefficients (exponents -1 .. depth-2).
LaurentSeries expand_laurent(const OdeInstance& ode, const Cyclo& residue, int depth);

/// Exact series of c0 u''' + 6u^4 + c1 u'' + c2 u u' + c4 u' + c5 u^2 + c6 u + c7,
/// optionally truncated to exponents <= max_exp.
LaurentSeries ode_residual(const LaurentSeries& u, const OdeInstance& ode, int max_exp = kExactHi);

struct Monomial {
    int alpha = 0;  // power of u
    int beta = 0;   // power of u'
    int gamma = 0;  // power of u''
    int degree() const { return alpha + 2 * beta + 3 * gamma; }
    bool operator==(const Monomial&) const = default;
};

/// Monomials u^alpha (u')^beta (u'')^gamma grouped by singularity degree
/// alpha + 2 beta + 3 gamma = d, for d = 0 .. max_degree.
std::vector<std::vector<Monomial>> dominant_monomials(int max_degree);

}  // namespace subeqlab

#endif
