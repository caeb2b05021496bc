#include "subeqlab/wp.hpp"

#include <algorithm>
#include <cmath>

namespace subeqlab {

WeierstrassP::WeierstrassP(cd g2, cd g3, int terms) : g2_(g2), g3_(g3) {
    int K = std::max(terms, 8);
    c_.assign(static_cast<std::size_t>(K) + 1, cd(0));
    c_[2] = g2 / 20.0;
    c_[3] = g3 / 28.0;
    for (int k = 4; k <= K; ++k) {
        cd s = 0;
        for (int m = 2; m <= k - 2; ++m) s += c_[static_cast<std::size_t>(m)] * c_[static_cast<std::size_t>(k - m)];
        c_[static_cast<std::size_t>(k)] = 3.0 / ((2.0 * k + 1.0) * (k - 3.0)) * s;
    }
    // |c_k|^(1/2k) -> 1/R with R the lattice convergence radius; take the
    // most pessimistic estimate over the last coefficients and shrink so the
    // truncated tail at r_conv is ~1e-14.
    double inv_r = 0.0;
    for (int k = K - 10; k <= K; ++k) {
        double m = std::abs(c_[static_cast<std::size_t>(k)]);
        if (m > 1e-280) inv_r = std::max(inv_r, std::pow(m, 1.0 / (2.0 * k)));
    }
    if (inv_r == 0.0) {
        r_conv_ = 1e9;  // degenerate pe = z^{-2}
    } else {
        double R = 1.0 / inv_r;
        r_conv_ = R * std::pow(1e-14, 1.0 / (2.0 * K));
    }
}

cd WeierstrassP::deriv(cd z, int d) const {
    double az = std::abs(z);
    if (az == 0.0 || az > r_conv_) throw out_of_radius{};
    // principal part: d/dz^d z^{-2} = (-1)^d (d+1)! z^{-2-d}
    double fall = 1.0;
    for (int i = 0; i < d; ++i) fall *= -(2.0 + i);
    cd r = fall * std::pow(z, cd(-2.0 - d));
    cd z2 = z * z;
    cd zp = std::pow(z, cd(2.0 - d));  // z^(e-d) at k = 2 (e = 2k-2)
    for (std::size_t k = 2; k < c_.size(); ++k, zp *= z2) {
        double e = 2.0 * static_cast<double>(k) - 2.0;
        double f = 1.0;
        for (int i = 0; i < d; ++i) f *= (e - i);
        if (f == 0.0) continue;
        r += c_[k] * f * zp;
    }
    return r;
}

Jet WeierstrassP::jet(cd z) const {
    Jet j;
    for (int d = 0; d < 5; ++d) j.v[static_cast<std::size_t>(d)] = deriv(z, d);
    return j;
}

WpPair wp_eval(cd g2, cd g3, cd z) {
    WeierstrassP wp(g2, g3);
    return {wp.deriv(z, 0), wp.deriv(z, 1)};
}

}  // namespace subeqlab
