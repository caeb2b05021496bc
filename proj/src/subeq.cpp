#include "subeqlab/subeq.hpp"

#include <algorithm>

#include "subeqlab/linsolve.hpp"

namespace subeqlab {

Subequation Subequation::empty(int m) {
    Subequation s;
    s.m = m;
    s.coeff.resize(static_cast<std::size_t>(m) + 1);
    for (int k = 0; k <= m; ++k)
        s.coeff[static_cast<std::size_t>(k)].assign(static_cast<std::size_t>(2 * m - 2 * k) + 1, Cyclo{});
    return s;
}

SubeqTemplate candidate_template(int m, const OdeInstance& ode) {
    if (m < 1 || m > 3) throw std::invalid_argument("candidate_template: degree must be 1, 2 or 3");
    SubeqTemplate t;
    t.skeleton = Subequation::empty(m);
    const Cyclo& a = ode.a;
    switch (m) {
        case 3:
            // -(w1 a u' + u^2)(w2 a u' + u^2)(w3 a u' + u^2) with the three
            // distinct cube roots collapses to -a^3 u'^3 - u^6; the mixed
            // degree-6 terms u'^2 u^2 and u' u^4 stay zero.
            t.skeleton.at(0, 3) = -pow(a, 3);
            t.skeleton.at(6, 0) = Cyclo{-1};
            t.unknowns = {{1, 2, "b1"}, {3, 1, "b2"}, {5, 0, "b3"}, {0, 2, "b4"},
                          {2, 1, "b5"}, {4, 0, "b6"}, {1, 1, "b7"}, {3, 0, "b8"},
                          {0, 1, "b9"}, {2, 0, "bb"}, {1, 0, "ba"}, {0, 0, "b0"}};
            break;
        case 2:
            t.skeleton.at(0, 2) = a * a;
            t.skeleton.at(2, 1) = -a;
            t.skeleton.at(4, 0) = Cyclo{1};
            t.unknowns = {{1, 1, "b4"}, {3, 0, "b3"}, {0, 1, "b5"},
                          {2, 0, "b2"}, {1, 0, "b1"}, {0, 0, "b0"}};
            break;
        case 1:
            t.skeleton.at(0, 1) = a;
            t.skeleton.at(2, 0) = Cyclo{1};
            t.unknowns = {{1, 0, "b1"}, {0, 0, "b0"}};
            break;
    }
    return t;
}

LaurentSeries subeq_residual(const Subequation& s, const LaurentSeries& u) {
    LaurentSeries up = series_diff(u);
    // powers computed incrementally
    std::vector<LaurentSeries> upow{LaurentSeries::constant(Cyclo{1})};
    for (int j = 1; j <= 2 * s.m; ++j) upow.push_back(series_mul(upow.back(), u));
    std::vector<LaurentSeries> uppow{LaurentSeries::constant(Cyclo{1})};
    for (int k = 1; k <= s.m; ++k) uppow.push_back(series_mul(uppow.back(), up));

    LaurentSeries r = LaurentSeries::zero();
    for (int k = 0; k <= s.m; ++k)
        for (int j = 0; j <= 2 * s.m - 2 * k; ++j) {
            const Cyclo& c = s.at(j, k);
            if (c.is_zero()) continue;
            r = series_add(r, series_scale(c, series_mul(upow[static_cast<std::size_t>(j)],
                                                         uppow[static_cast<std::size_t>(k)])));
        }
    return r;
}

FitReport fit_subequation(const OdeInstance& ode, int m, const std::vector<int>& branches,
                          int extra_orders, int depth) {
    if (static_cast<int>(branches.size()) != m)
        throw std::invalid_argument("fit_subequation: need exactly m branches");
    if (depth < 2 * m + extra_orders + 4)
        throw std::invalid_argument("fit_subequation: depth too small for requested orders");

    SubeqTemplate tpl = candidate_template(m, ode);
    const std::size_t n = tpl.unknowns.size();
    const int jmax = 2 * m + extra_orders;
    std::vector<Cyclo> residues = ode.residues();

    FitReport rep;
    rep.branches = branches;

    // Per branch: the series of each unknown monomial and of the fixed part.
    struct BranchData {
        std::vector<LaurentSeries> monomials;
        LaurentSeries fixed;
    };
    std::vector<BranchData> data;
    for (int bi : branches) {
        LaurentSeries u = expand_laurent(ode, residues[static_cast<std::size_t>(bi)], depth);
        LaurentSeries up = series_diff(u);
        std::vector<LaurentSeries> upow{LaurentSeries::constant(Cyclo{1})};
        for (int j = 1; j <= 2 * m; ++j) upow.push_back(series_mul(upow.back(), u));
        std::vector<LaurentSeries> uppow{LaurentSeries::constant(Cyclo{1})};
        for (int k = 1; k <= m; ++k) uppow.push_back(series_mul(uppow.back(), up));

        BranchData bd;
        for (const auto& slot : tpl.unknowns)
            bd.monomials.push_back(series_mul(upow[static_cast<std::size_t>(slot.j)],
                                              uppow[static_cast<std::size_t>(slot.k)]));
        bd.fixed = LaurentSeries::zero();
        for (int k = 0; k <= m; ++k)
            for (int j = 0; j <= 2 * m - 2 * k; ++j) {
                const Cyclo& c = tpl.skeleton.at(j, k);
                if (c.is_zero()) continue;
                bd.fixed = series_add(bd.fixed, series_scale(c, series_mul(upow[static_cast<std::size_t>(j)],
                                                                           uppow[static_cast<std::size_t>(k)])));
            }
        data.push_back(std::move(bd));
    }

    EchelonSolver solver(n);
    for (int j = 0; j <= jmax; ++j) {
        int e = j - 2 * m;
        for (const auto& bd : data) {
            std::vector<Cyclo> row(n + 1);
            for (std::size_t s = 0; s < n; ++s) row[s] = bd.monomials[s].coeff(e);
            row[n] = -bd.fixed.coeff(e);
            if (!solver.add_row(std::move(row))) {
                rep.status = FitStatus::infeasible;
                rep.violated_order = j;
                rep.orders_checked = j + 1;
                return rep;
            }
        }
    }
    rep.orders_checked = jmax + 1;
    if (solver.status() == SolveStatus::underdetermined) {
        rep.status = FitStatus::underdetermined;
        return rep;
    }
    std::vector<Cyclo> x = solver.solution();
    Subequation s = tpl.skeleton;
    for (std::size_t i = 0; i < n; ++i) s.at(tpl.unknowns[i].j, tpl.unknowns[i].k) = x[i];
    rep.status = FitStatus::fitted;
    rep.subequation = std::move(s);
    return rep;
}

FitReport fit_subequation_auto(const OdeInstance& ode, int m, int extra_orders, int depth) {
    std::vector<std::vector<int>> subsets;
    if (m == 1)
        subsets = {{0}, {1}, {2}};
    else if (m == 2)
        subsets = {{0, 1}, {0, 2}, {1, 2}};
    else
        subsets = {{0, 1, 2}};
    FitReport last;
    for (const auto& sub : subsets) {
        FitReport r = fit_subequation(ode, m, sub, extra_orders, depth);
        if (r.status == FitStatus::fitted) return r;
        last = std::move(r);
    }
    return last;
}

Poly leading_balance(const Subequation& s) {
    Poly p;
    p.c.assign(static_cast<std::size_t>(2 * s.m) + 1, Cyclo{});
    bool any = false;
    for (int k = 0; k <= s.m; ++k) {
        int j = 2 * s.m - 2 * k;
        const Cyclo& c = s.at(j, k);
        if (c.is_zero()) continue;
        any = true;
        // u ~ rho/x, u' ~ -rho/x^2:  a_{j,k} u^j u'^k -> a_{j,k} (-1)^k rho^{j+k} x^{-2m}
        Cyclo v = (k % 2 == 0) ? c : -c;
        p.c[static_cast<std::size_t>(j + k)] += v;
    }
    if (!any) throw non_simple_leading{};
    return p;
}

int distinct_series_count(const Subequation& s, const OdeInstance& ode, int depth) {
    Poly lb = leading_balance(s);
    int count = 0;
    for (const Cyclo& rho : ode.residues()) {
        if (!lb.eval(rho).is_zero()) continue;
        LaurentSeries u = expand_laurent(ode, rho, depth);
        if (subeq_residual(s, u).is_zero()) ++count;
    }
    return count;
}

namespace {

// F as a dense polynomial in u' with coefficients polynomials in u.
using UPoly = std::vector<Cyclo>;            // index: power of u
using BiPoly = std::vector<UPoly>;           // index: power of u'

BiPoly to_bipoly(const Subequation& s) {
    BiPoly f(static_cast<std::size_t>(s.m) + 1);
    for (int k = 0; k <= s.m; ++k) {
        f[static_cast<std::size_t>(k)].assign(static_cast<std::size_t>(2 * s.m - 2 * k) + 1, Cyclo{});
        for (int j = 0; j <= 2 * s.m - 2 * k; ++j)
            f[static_cast<std::size_t>(k)][static_cast<std::size_t>(j)] = s.at(j, k);
    }
    return f;
}

bool upoly_zero(const UPoly& p) {
    return std::all_of(p.begin(), p.end(), [](const Cyclo& c) { return c.is_zero(); });
}

UPoly upoly_mul(const UPoly& x, const UPoly& y) {
    UPoly r(x.size() + y.size() - 1);
    for (std::size_t i = 0; i < x.size(); ++i)
        for (std::size_t j = 0; j < y.size(); ++j) r[i + j] += x[i] * y[j];
    return r;
}

void upoly_sub_into(UPoly& x, const UPoly& y) {
    if (x.size() < y.size()) x.resize(y.size());
    for (std::size_t i = 0; i < y.size(); ++i) x[i] -= y[i];
}

}  // namespace

bool reducible_by_degree_one(const Subequation& s, const OdeInstance& ode) {
    if (s.m < 2) return false;
    for (int bi = 0; bi < 3; ++bi) {
        FitReport r1 = fit_subequation(ode, 1, {bi});
        if (r1.status != FitStatus::fitted) continue;
        const Subequation& g = *r1.subequation;
        // Divide F by (a u' + u^2 + b1 u + b0) as polynomials in u'; the
        // divisor's leading u'-coefficient is the constant a.
        UPoly g0 = {g.at(0, 0), g.at(1, 0), g.at(2, 0)};
        Cyclo ga = g.at(0, 1);
        BiPoly f = to_bipoly(s);
        for (int k = s.m; k >= 1; --k) {
            UPoly q = f[static_cast<std::size_t>(k)];
            for (auto& c : q) c = c / ga;
            // f -= q * u'^(k-1) * (a u' + g0)
            UPoly qa = q;
            for (auto& c : qa) c = c * ga;
            upoly_sub_into(f[static_cast<std::size_t>(k)], qa);
            upoly_sub_into(f[static_cast<std::size_t>(k - 1)], upoly_mul(q, g0));
        }
        bool rem_zero = true;
        for (const auto& fk : f) rem_zero = rem_zero && upoly_zero(fk);
        if (rem_zero) return true;
    }
    return false;
}

}  // namespace subeqlab
