#ifndef SUBEQLAB_SUBEQ_HPP
#define SUBEQLAB_SUBEQ_HPP

#include <optional>
#include <string>
#include <vector>

#include "subeqlab/laurent.hpp"

namespace subeqlab {

/// First order polynomial relation F(u,u') = sum a_{j,k} u^j u'^k = 0 with
/// 0 <= k <= m, 0 <= j <= 2m-2k (total singularity degree of each term <= 2m).
struct Subequation {
    int m = 0;
    // coeff[k][j] = a_{j,k}
    std::vector<std::vector<Cyclo>> coeff;

    static Subequation empty(int m);
    const Cyclo& at(int j, int k) const { return coeff[static_cast<std::size_t>(k)][static_cast<std::size_t>(j)]; }
    Cyclo& at(int j, int k) { return coeff[static_cast<std::size_t>(k)][static_cast<std::size_t>(j)]; }
    bool operator==(const Subequation&) const = default;
};

/// One unknown slot of the fitting template.
struct TemplateSlot {
    int j = 0;
    int k = 0;
    std::string name;
};

struct SubeqTemplate {
    Subequation skeleton;               // fixed leading coefficients filled in
    std::vector<TemplateSlot> unknowns; // stable fitting order
};

/// The normalized candidate template of degree m for the given instance:
///   m=3: -a^3 u'^3 - u^6 + unknowns (12 slots b1..b9, bb, ba, b0; the two
///        constant-term slots are merged into one unknown)
///   m=2:  a^2 u'^2 - a u^2 u' + u^4 + unknowns (b4, b3, b5, b2, b1, b0)
///   m=1:  a u' + u^2 + unknowns (b1, b0)
SubeqTemplate candidate_template(int m, const OdeInstance& ode);

enum class FitStatus { fitted, infeasible, underdetermined };

struct FitReport {
    FitStatus status = FitStatus::infeasible;
    std::optional<Subequation> subequation;
    std::vector<int> branches;  // residue branch indices (0 -> a, 1 -> wa, 2 -> w^2 a)
    int orders_checked = 0;
    std::optional<int> violated_order;
};

/// Fits the degree-m template on the selected residue branches by stacking
/// the exact linear equations F_j = 0 for j = 0 .. 2m + extra_orders.
/// Requires branches.size() == m.
FitReport fit_subequation(const OdeInstance& ode, int m, const std::vector<int>& branches,
                          int extra_orders = 4, int depth = 24);

/// Tries branch subsets of size m in deterministic order and returns the
/// first fitted result (or the last report when none fits).
FitReport fit_subequation_auto(const OdeInstance& ode, int m, int extra_orders = 4, int depth = 24);

/// Exact truncated series of F(u,u').
LaurentSeries subeq_residual(const Subequation& s, const LaurentSeries& u);

struct non_simple_leading : std::runtime_error {
    non_simple_leading() : std::runtime_error("subequation leading balance is not a simple pole") {}
};

/// Leading-balance polynomial in the residue rho: coefficient of
/// (z-z0)^(-2m) when u ~ rho/(z-z0).
Poly leading_balance(const Subequation& s);

/// Number of the instance's residue branches admitted by the leading balance
/// of s and extendable to full Laurent series annihilating F.
int distinct_series_count(const Subequation& s, const OdeInstance& ode, int depth = 24);

/// Reducibility proxy: true when F has an exact polynomial factor of the
/// degree-1 template form a u' + u^2 + b1 u + b0 fitted on one of the branches.
bool reducible_by_degree_one(const Subequation& s, const OdeInstance& ode);

}  // namespace subeqlab

#endif
