#include "subeqlab/laurent.hpp"

#include <algorithm>
#include <cassert>

namespace subeqlab {

namespace {
const Cyclo kZero{};
}

const Cyclo& LaurentSeries::coeff(int e) const {
    if (e > hi) throw depth_exhausted{};
    if (e < lo) return kZero;
    std::size_t idx = static_cast<std::size_t>(e - lo);
    // coefficients between the stored block and hi are exactly zero
    if (idx >= a.size()) return kZero;
    return a[idx];
}

void LaurentSeries::trim() {
    std::size_t drop = 0;
    while (drop < a.size() && a[drop].is_zero()) ++drop;
    if (drop) {
        a.erase(a.begin(), a.begin() + static_cast<std::ptrdiff_t>(drop));
        lo += static_cast<int>(drop);
    }
    if (a.empty()) lo = hi + 1;
}

LaurentSeries LaurentSeries::zero(int hi) {
    LaurentSeries s;
    s.lo = hi + 1;
    s.hi = hi;
    return s;
}

LaurentSeries LaurentSeries::constant(const Cyclo& c, int hi) {
    return monomial(c, 0, hi);
}

LaurentSeries LaurentSeries::monomial(const Cyclo& c, int e, int hi) {
    if (c.is_zero()) return zero(hi);
    LaurentSeries s;
    s.lo = e;
    s.hi = hi;
    s.a = {c};
    return s;
}

LaurentSeries LaurentSeries::from_coeffs(int lo, std::vector<Cyclo> coeffs) {
    LaurentSeries s;
    s.lo = lo;
    s.hi = lo + static_cast<int>(coeffs.size()) - 1;
    s.a = std::move(coeffs);
    s.trim();
    return s;
}

namespace {

// last exponent with a stored (possibly nonzero) coefficient; -inf for the
// zero series (whose lo sentinel is hi+1 and must not enter max())
long stored_top(const LaurentSeries& x) {
    if (x.a.empty()) return std::numeric_limits<long>::min() / 4;
    return static_cast<long>(x.lo) + static_cast<long>(x.a.size()) - 1;
}

}  // namespace

LaurentSeries series_add(const LaurentSeries& x, const LaurentSeries& y) {
    LaurentSeries r;
    r.hi = std::min(x.hi, y.hi);
    r.lo = std::min(x.lo, y.lo);
    long top = std::min<long>(r.hi, std::max(stored_top(x), stored_top(y)));
    if (r.lo > top) {
        r.lo = r.hi + 1;
        return r;
    }
    r.a.assign(static_cast<std::size_t>(top - r.lo + 1), Cyclo{});
    for (long e = r.lo; e <= top; ++e) {
        Cyclo v;
        if (e >= x.lo && e <= stored_top(x)) v += x.a[static_cast<std::size_t>(e - x.lo)];
        if (e >= y.lo && e <= stored_top(y)) v += y.a[static_cast<std::size_t>(e - y.lo)];
        r.a[static_cast<std::size_t>(e - r.lo)] = v;
    }
    r.trim();
    return r;
}

LaurentSeries series_neg(const LaurentSeries& x) {
    LaurentSeries r = x;
    for (auto& c : r.a) c = -c;
    return r;
}

LaurentSeries series_sub(const LaurentSeries& x, const LaurentSeries& y) {
    return series_add(x, series_neg(y));
}

LaurentSeries series_scale(const Cyclo& c, const LaurentSeries& x) {
    if (c.is_zero()) return LaurentSeries::zero(x.hi);
    LaurentSeries r = x;
    for (auto& v : r.a) v = c * v;
    r.trim();
    return r;
}

LaurentSeries series_mul(const LaurentSeries& x, const LaurentSeries& y, int max_exp) {
    LaurentSeries r;
    // x is known on (-inf, x.hi] (zero below x.lo); the product coefficient at
    // e needs both factors only up to their hi, hence:
    long hi_l = std::min<long>(static_cast<long>(x.lo) + y.hi, static_cast<long>(y.lo) + x.hi);
    r.hi = static_cast<int>(std::min<long>(std::min<long>(hi_l, max_exp), kExactHi));
    long lo_l = static_cast<long>(x.lo) + y.lo;
    if (x.is_zero() || y.is_zero() || lo_l > r.hi) {
        r.lo = r.hi + 1;
        return r;
    }
    r.lo = static_cast<int>(lo_l);
    long top = std::min<long>(r.hi, stored_top(x) + stored_top(y));
    if (top < r.lo) {
        r.lo = r.hi + 1;
        return r;
    }
    r.a.assign(static_cast<std::size_t>(top - r.lo + 1), Cyclo{});
    int nx = static_cast<int>(x.a.size());
    int ny = static_cast<int>(y.a.size());
    for (int i = 0; i < nx; ++i) {
        if (x.a[static_cast<std::size_t>(i)].is_zero()) continue;
        for (int j = 0; j < ny; ++j) {
            long e = static_cast<long>(x.lo) + i + y.lo + j;
            if (e > top) break;
            r.a[static_cast<std::size_t>(e - r.lo)] +=
                x.a[static_cast<std::size_t>(i)] * y.a[static_cast<std::size_t>(j)];
        }
    }
    r.trim();
    return r;
}

LaurentSeries series_diff(const LaurentSeries& x) {
    LaurentSeries r;
    r.hi = x.hi == kExactHi ? kExactHi : x.hi - 1;
    if (x.is_zero()) {
        r.lo = r.hi + 1;
        return r;
    }
    r.lo = x.lo - 1;
    r.a.resize(x.a.size());
    for (std::size_t i = 0; i < x.a.size(); ++i) {
        int e = x.lo + static_cast<int>(i);
        r.a[i] = Cyclo(Rational(e)) * x.a[i];
    }
    r.trim();
    return r;
}

LaurentSeries series_pow(const LaurentSeries& x, unsigned n, int max_exp) {
    LaurentSeries r = LaurentSeries::constant(Cyclo{1});
    for (unsigned i = 0; i < n; ++i) r = series_mul(r, x, max_exp);
    return r;
}

LaurentSeries series_truncate(const LaurentSeries& x, int max_exp) {
    LaurentSeries r = x;
    if (max_exp < r.hi) {
        r.hi = max_exp;
        if (r.lo > r.hi) {
            r.lo = r.hi + 1;
            r.a.clear();
        } else {
            std::size_t keep = static_cast<std::size_t>(r.hi - r.lo + 1);
            if (r.a.size() > keep) r.a.resize(keep);
            r.trim();
        }
    }
    return r;
}

bool series_equal(const LaurentSeries& x, const LaurentSeries& y) {
    int hi = std::min(x.hi, y.hi);
    for (int e = std::min(x.lo, y.lo); e <= hi; ++e)
        if (x.coeff(e) != y.coeff(e)) return false;
    return true;
}

Cyclo Poly::eval(const Cyclo& r) const {
    Cyclo v;
    for (auto it = c.rbegin(); it != c.rend(); ++it) v = v * r + *it;
    return v;
}

Poly indicial_polynomial(const OdeInstance& ode, const Cyclo& residue) {
    Cyclo c0 = ode.c0();
    if (pow(residue, 3) != c0) throw invalid_residue{};
    // Linearization of the dominant terms c0 u''' + 6 u^4 around
    // u ~ residue/(z-z0): a perturbation (z-z0)^(r-1) picks up
    // c0 (r-1)(r-2)(r-3) from u''' and 24 residue^3 from 24 u^3.
    // Expanded and made monic (residue^3 = c0): r^3 - 6 r^2 + 11 r + 18.
    Cyclo inv_c0 = inverse(c0);
    Poly p;
    p.c = {Cyclo{-6} + Cyclo{24} * pow(residue, 3) * inv_c0,  // -(1*2*3) + 24 a^3/c0
           Cyclo{11}, Cyclo{-6}, Cyclo{1}};
    return p;
}

namespace {

// Smallest integer bound B with |root| <= B for integer roots of p (Cauchy).
long integer_root_bound(const Poly& p) {
    int d = p.degree();
    while (d >= 0 && p.c[static_cast<std::size_t>(d)].is_zero()) --d;
    if (d <= 0) return 0;
    const Cyclo& lead = p.c[static_cast<std::size_t>(d)];
    Rational nl = norm(lead);
    Rational best = 0;
    for (int i = 0; i < d; ++i) {
        // |c_i/c_d|^2 <= N(c_i)/N(c_d) up to a bounded factor; the norm ratio
        // is a safe overestimate after doubling (|x|^2 <= 2 N(x) in Q(w)).
        Rational ratio = 4 * norm(p.c[static_cast<std::size_t>(i)]) / nl;
        if (ratio > best) best = ratio;
    }
    // bound = 1 + max |c_i/c_d|  <=  2 + sqrt(best)
    long b = 2;
    Rational s = best;
    long r = 1;
    while (Rational(r) * r < s && r < (1L << 30)) r *= 2;
    return b + r;
}

}  // namespace

FuchsReport check_fuchs_indices(const Poly& p) {
    FuchsReport rep;
    long bound = integer_root_bound(p);
    for (long t = -bound; t <= bound; ++t) {
        if (p.eval(Cyclo{Rational(t)}).is_zero()) {
            rep.integer_roots.push_back(t);
            if (t >= 0) rep.has_nonneg_integer = true;
        }
    }
    return rep;
}

LaurentSeries ode_residual(const LaurentSeries& u, const OdeInstance& ode, int max_exp) {
    LaurentSeries up = series_diff(u);
    LaurentSeries upp = series_diff(up);
    LaurentSeries uppp = series_diff(upp);
    // u4 = u2 * u2 loses |2 u.lo| orders relative to u2's truncation, so the
    // intermediate square must carry extra orders when u has a pole part.
    int budget2 = max_exp;
    if (max_exp != kExactHi && u.lo < 0)
        budget2 = max_exp - 2 * u.lo;  // max_exp + 2|u.lo|
    LaurentSeries u2 = series_mul(u, u, budget2);
    LaurentSeries u4 = series_mul(u2, u2, max_exp);
    LaurentSeries r = series_scale(ode.c0(), uppp);
    r = series_add(r, series_scale(Cyclo{6}, u4));
    r = series_add(r, series_scale(ode.c1, upp));
    r = series_add(r, series_scale(ode.c2, series_mul(u, up, max_exp)));
    r = series_add(r, series_scale(ode.c4, up));
    r = series_add(r, series_scale(ode.c5, u2));
    r = series_add(r, series_scale(ode.c6, u));
    r = series_add(r, LaurentSeries::constant(ode.c7));
    return series_truncate(r, max_exp);
}

LaurentSeries expand_laurent(const OdeInstance& ode, const Cyclo& residue, int depth) {
    if (depth < 2) throw std::invalid_argument("expand_laurent: depth must be >= 2");
    Cyclo c0 = ode.c0();
    if (pow(residue, 3) != c0) throw invalid_residue{};
    Poly ind = indicial_polynomial(ode, residue);

    // u = residue/(z-z0) + sum_{i>=0} u_i (z-z0)^i.  The coefficient of
    // (z-z0)^(i-3) in the residual is linear in u_i with pivot
    // c0 * ind(i+1); everything else is already known, so read it off the
    // residual of the partial sum with u_i = 0.
    std::vector<Cyclo> coeffs{residue};
    coeffs.reserve(static_cast<std::size_t>(depth));
    for (int i = 0; i <= depth - 2; ++i) {
        LaurentSeries partial = LaurentSeries::from_coeffs(-1, coeffs);
        partial.hi = kExactHi;  // the tail is exactly zero in this partial sum
        Cyclo beta = ode_residual(partial, ode, i - 3).coeff(i - 3);
        Cyclo pivot = c0 * ind.eval(Cyclo{Rational(i + 1)});
        if (pivot.is_zero()) throw std::runtime_error("expand_laurent: zero pivot (resonant index)");
        coeffs.push_back(-beta / pivot);
    }
    LaurentSeries u = LaurentSeries::from_coeffs(-1, std::move(coeffs));
    u.hi = depth - 2;
    return u;
}

std::vector<std::vector<Monomial>> dominant_monomials(int max_degree) {
    if (max_degree < 0) throw std::invalid_argument("dominant_monomials: max_degree must be >= 0");
    std::vector<std::vector<Monomial>> groups(static_cast<std::size_t>(max_degree) + 1);
    for (int g = 0; 3 * g <= max_degree; ++g)
        for (int b = 0; 2 * b + 3 * g <= max_degree; ++b)
            for (int al = 0; al + 2 * b + 3 * g <= max_degree; ++al)
                groups[static_cast<std::size_t>(al + 2 * b + 3 * g)].push_back({al, b, g});
    return groups;
}

}  // namespace subeqlab
