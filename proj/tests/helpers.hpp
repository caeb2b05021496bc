#ifndef SUBEQLAB_TESTS_HELPERS_HPP
#define SUBEQLAB_TESTS_HELPERS_HPP

#include <random>

#include "subeqlab/laurent.hpp"

namespace testutil {

using namespace subeqlab;

inline Rational rand_rational(std::mt19937_64& gen, int max_num = 9, int max_den = 4,
                              bool nonzero = false) {
    std::uniform_int_distribution<int> num(-max_num, max_num);
    std::uniform_int_distribution<int> den(1, max_den);
    Rational r;
    do {
        r = Rational(num(gen), den(gen));
    } while (nonzero && r == 0);
    return r;
}

inline Cyclo rand_cyclo(std::mt19937_64& gen, bool nonzero = false) {
    Cyclo x;
    do {
        x = Cyclo{rand_rational(gen), rand_rational(gen)};
    } while (nonzero && x.is_zero());
    return x;
}

// --- family instance generators (coefficient formulas from the families) ----

inline OdeInstance make_s3a(const Cyclo& a, const Cyclo& c1, const Cyclo& c6) {
    OdeInstance o;
    o.a = a;
    o.c1 = c1;
    o.c4 = c1 * c1 / (Cyclo{12} * pow(a, 3));
    o.c6 = c6;
    return o;
}

inline OdeInstance make_s3b(const Cyclo& a, const Cyclo& c5, const Cyclo& c6) {
    OdeInstance o;
    o.a = a;
    o.c5 = c5;
    o.c6 = c6;
    o.c7 = c5 * c5 / Cyclo{128};
    return o;
}

inline OdeInstance make_s2a(const Cyclo& a, const Cyclo& c1, const Cyclo& c4) {
    OdeInstance o;
    o.a = a;
    o.c1 = c1;
    o.c4 = c4;
    Cyclo a3 = pow(a, 3);
    Cyclo t = Cyclo{12} * a3 * c4;
    o.c5 = (c1 * c1 - t) / (Cyclo{4} * pow(a, 4));
    o.c6 = -c1 * (c1 * c1 + Cyclo{3} * t) / (Cyclo{144} * pow(a, 6));
    o.c7 = (t - c1 * c1) * (Cyclo{3} * t - Cyclo{11} * c1 * c1) / (Cyclo{1536} * pow(a, 8));
    return o;
}

inline OdeInstance make_s2b(const Cyclo& a, const Cyclo& c1, const Cyclo& c2) {
    OdeInstance o;
    o.a = a;
    o.c1 = c1;
    o.c2 = c2;
    Cyclo c11 = c1 * c1, c12 = a * c1 * c2, c22 = a * a * c2 * c2;
    o.c4 = (Cyclo{44} * c11 + Cyclo{8} * c12 - c22) / (Cyclo{144} * pow(a, 3));
    o.c5 = (Cyclo{-32} * c11 - Cyclo{24} * c12 - Cyclo{7} * c22) / (Cyclo{48} * pow(a, 4));
    o.c6 = -(c1 + a * c2) * (Cyclo{12} * c11 + Cyclo{6} * c12 + c22) / (Cyclo{144} * pow(a, 6));
    o.c7 = -c2 * (Cyclo{4} * c1 + Cyclo{3} * a * c2) * (Cyclo{48} * c11 + Cyclo{20} * c12 + c22) /
           (Cyclo{55296} * pow(a, 7));
    return o;
}

inline OdeInstance make_s1(const Cyclo& a, const Cyclo& c1, const Cyclo& c2, const Cyclo& c4,
                           const Cyclo& c5) {
    OdeInstance o;
    o.a = a;
    o.c1 = c1;
    o.c2 = c2;
    o.c4 = c4;
    o.c5 = c5;
    Cyclo a2 = a * a, a3 = pow(a, 3), a4 = pow(a, 4), a5 = pow(a, 5);
    o.c6 = (Cyclo{-56} * pow(c1, 3) + Cyclo{60} * a * c1 * c1 * c2 -
            Cyclo{18} * a2 * c1 * c2 * c2 + a3 * pow(c2, 3) + Cyclo{288} * a3 * c1 * c4 -
            Cyclo{144} * a4 * c2 * c4 - Cyclo{96} * a4 * c1 * c5 + Cyclo{48} * a5 * c2 * c5) /
           (Cyclo{1152} * pow(a, 6));
    o.c7 = (Cyclo{-176} * pow(c1, 4) + Cyclo{128} * a * pow(c1, 3) * c2 +
            Cyclo{24} * a2 * c1 * c1 * c2 * c2 - Cyclo{32} * a3 * c1 * pow(c2, 3) +
            Cyclo{5} * a4 * pow(c2, 4) + Cyclo{2688} * a3 * c1 * c1 * c4 -
            Cyclo{1536} * a4 * c1 * c2 * c4 + Cyclo{96} * a5 * c2 * c2 * c4 -
            Cyclo{6912} * pow(a, 6) * c4 * c4 + Cyclo{128} * a4 * c1 * c1 * c5 -
            Cyclo{512} * a5 * c1 * c2 * c5 + Cyclo{224} * pow(a, 6) * c2 * c2 * c5 +
            Cyclo{4608} * pow(a, 7) * c4 * c5 + Cyclo{2304} * pow(a, 8) * c5 * c5) /
           (Cyclo{73728} * pow(a, 8));
    return o;
}

inline OdeInstance rand_instance(std::mt19937_64& gen, const Cyclo& a) {
    OdeInstance o;
    o.a = a;
    o.c1 = Cyclo{rand_rational(gen)};
    o.c2 = Cyclo{rand_rational(gen)};
    o.c4 = Cyclo{rand_rational(gen)};
    o.c5 = Cyclo{rand_rational(gen)};
    o.c6 = Cyclo{rand_rational(gen)};
    o.c7 = Cyclo{rand_rational(gen)};
    return o;
}

}  // namespace testutil

#endif
