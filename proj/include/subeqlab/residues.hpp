#ifndef SUBEQLAB_RESIDUES_HPP
#define SUBEQLAB_RESIDUES_HPP

#include <vector>

#include "subeqlab/laurent.hpp"

namespace subeqlab {

struct ResidueCondition {
    int k = 0;        // derivative order
    int n = 0;        // power
    Cyclo value;      // sum over the three branches of res (u^(k))^n
};

/// Sum over the three Laurent branches of the coefficient of (z-z0)^{-1}
/// in (u^(k))^n, computed by exact series arithmetic.
Cyclo residue_power_sum(const OdeInstance& ode, int k, int n);

/// All (k,n) with k <= kmax, n <= nmax whose residue sum is nonzero for this
/// instance; empty means every necessary condition in range holds.
std::vector<ResidueCondition> enumerate_conditions(const OdeInstance& ode, int kmax, int nmax);

enum class EllipticFamily { A, B, C, none };

/// Exact match against the three residue-condition coefficient sets:
///   A: c2 = c1 = c4 = 0, c6 != 0, c7 = c5^2/128
///   B: c2 = c1 = c4 = 0, c6 = 0
///   C: c2 = 0, c1 != 0, c4 = c1^2/(12 a^3), c5 = 0, c7 = 0
EllipticFamily match_elliptic_families(const OdeInstance& ode);

}  // namespace subeqlab

#endif
