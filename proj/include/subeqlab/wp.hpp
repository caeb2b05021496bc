#ifndef SUBEQLAB_WP_HPP
#define SUBEQLAB_WP_HPP

#include <stdexcept>
#include <vector>

#include "subeqlab/jet.hpp"

namespace subeqlab {

struct out_of_radius : std::domain_error {
    out_of_radius() : std::domain_error("wp_eval: |z| outside the series safety radius") {}
};

/// Weierstrass pe function from its Laurent expansion about the origin,
///   pe(z) = z^{-2} + sum_{k>=2} c_k z^{2k-2},
/// with c_2 = g2/20, c_3 = g3/28 and the classical quadratic recurrence.
/// Evaluation is restricted to the disk where the truncated tail is below
/// 1e-14; no lattice reduction is attempted.
class WeierstrassP {
  public:
    WeierstrassP(cd g2, cd g3, int terms = 60);

    cd g2() const { return g2_; }
    cd g3() const { return g3_; }
    double safety_radius() const { return r_conv_; }

    /// d-th derivative of pe at z (d <= 6).  Throws out_of_radius.
    cd deriv(cd z, int d) const;

    /// Jet (pe, pe', ..., pe'''') at z.
    Jet jet(cd z) const;

  private:
    cd g2_, g3_;
    std::vector<cd> c_;  // c_[k] multiplies z^{2k-2}, valid from k = 2
    double r_conv_ = 0;
};

struct WpPair {
    cd wp;
    cd wp_prime;
};

/// pe and pe' from the series expansion; throws out_of_radius outside the
/// safety disk.
WpPair wp_eval(cd g2, cd g3, cd z);

}  // namespace subeqlab

#endif
