#include "subeqlab/residues.hpp"

namespace subeqlab {

namespace {

// res (u^(k))^n for one branch, truncating intermediate powers to what the
// z^{-1} coefficient of the full product can see.
Cyclo branch_residue(const LaurentSeries& u, int k, int n) {
    LaurentSeries d = u;
    for (int i = 0; i < k; ++i) d = series_diff(d);
    LaurentSeries p = LaurentSeries::constant(Cyclo{1});
    for (int i = 1; i <= n; ++i) {
        int max_exp = -1 + (n - i) * (k + 1);
        p = series_mul(p, d, max_exp);
    }
    return p.coeff(-1);
}

}  // namespace

Cyclo residue_power_sum(const OdeInstance& ode, int k, int n) {
    if (k < 0 || n < 1) throw std::invalid_argument("residue_power_sum: need k >= 0, n >= 1");
    int depth = n * (k + 1) + 6;
    Cyclo sum;
    for (const Cyclo& rho : ode.residues())
        sum += branch_residue(expand_laurent(ode, rho, depth), k, n);
    return sum;
}

std::vector<ResidueCondition> enumerate_conditions(const OdeInstance& ode, int kmax, int nmax) {
    if (kmax < 1 || nmax < 1) throw std::invalid_argument("enumerate_conditions: need kmax, nmax >= 1");
    int depth = nmax * (kmax + 1) + 6;
    std::vector<LaurentSeries> branches;
    for (const Cyclo& rho : ode.residues()) branches.push_back(expand_laurent(ode, rho, depth));

    std::vector<ResidueCondition> violated;
    for (int k = 0; k <= kmax; ++k)
        for (int n = 1; n <= nmax; ++n) {
            Cyclo sum;
            for (const auto& u : branches) sum += branch_residue(u, k, n);
            if (!sum.is_zero()) violated.push_back({k, n, sum});
        }
    return violated;
}

EllipticFamily match_elliptic_families(const OdeInstance& ode) {
    bool c1z = ode.c1.is_zero(), c2z = ode.c2.is_zero(), c4z = ode.c4.is_zero();
    if (c2z && c1z && c4z) {
        if (!ode.c6.is_zero() && Cyclo{128} * ode.c7 == ode.c5 * ode.c5) return EllipticFamily::A;
        if (ode.c6.is_zero()) return EllipticFamily::B;
        return EllipticFamily::none;
    }
    if (c2z && !c1z && ode.c5.is_zero() && ode.c7.is_zero() &&
        Cyclo{12} * ode.c0() * ode.c4 == ode.c1 * ode.c1)
        return EllipticFamily::C;
    return EllipticFamily::none;
}

}  // namespace subeqlab
