#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "subeqlab/residues.hpp"
#include "helpers.hpp"

using namespace subeqlab;
using testutil::rand_cyclo;
using testutil::rand_instance;

namespace {

bool has_condition(const std::vector<ResidueCondition>& cs, int k, int n) {
    for (const auto& c : cs)
        if (c.k == k && c.n == n) return true;
    return false;
}

}  // namespace

TEST_CASE("sum of residues of u^2 equals c2/4") {
    // oracle: res(u^2) per branch is 2 r u0(r); summing over the three cube
    // roots kills the c1 part (sum r^2 = 0) and leaves c2/4 (sum r^3 = 3 c0)
    std::mt19937_64 gen(41);
    for (int t = 0; t < 15; ++t) {
        OdeInstance ode = rand_instance(gen, rand_cyclo(gen, true));
        CHECK(residue_power_sum(ode, 0, 2) == ode.c2 / Cyclo{4});
    }
}

TEST_CASE("residues of derivatives vanish identically for n = 1") {
    // (u^(k))' has zero residue branch by branch, any k >= 0 after the first
    std::mt19937_64 gen(42);
    for (int t = 0; t < 5; ++t) {
        OdeInstance ode = rand_instance(gen, rand_cyclo(gen, true));
        for (int k = 1; k <= 4; ++k) CHECK(residue_power_sum(ode, k, 1).is_zero());
    }
}

TEST_CASE("k=0,n=1 residue sum is 3a") {
    std::mt19937_64 gen(43);
    OdeInstance ode = rand_instance(gen, rand_cyclo(gen, true));
    // sum of the three branch residues a + wa + w^2 a = 0
    CHECK(residue_power_sum(ode, 0, 1) == (Cyclo{1} + kOmega + kOmega * kOmega) * ode.a);
    CHECK(residue_power_sum(ode, 0, 1).is_zero());
}

TEST_CASE("k=0,n=3 condition is c4 = c1^2/(12 c0), prefactor 3/8") {
    // oracle: res(u^3) per branch is 3 r u0^2 + 3 r^2 u1; expanding u0, u1
    // for c2 = 0 and summing over the cube roots gives
    // (3/8)(c4 - c1^2/(12 c0)) -- this also pins the printed exponent
    // ambiguity to c1^2 (the cubed reading does not vanish)
    std::mt19937_64 gen(44);
    for (int t = 0; t < 10; ++t) {
        OdeInstance ode = rand_instance(gen, rand_cyclo(gen, true));
        ode.c2 = Cyclo{};
        Cyclo expect =
            Cyclo{Rational(3, 8)} * (ode.c4 - ode.c1 * ode.c1 / (Cyclo{12} * ode.c0()));
        CHECK(residue_power_sum(ode, 0, 3) == expect);
    }
}

TEST_CASE("k=1,n=4 condition for c1 != 0 vanishes iff c7 (c1^3 + 36 c0^2 c6) = 0") {
    OdeInstance p;
    p.a = Cyclo{2};  // a != 1 distinguishes c0^2 from a^2 in the printed formula
    p.c1 = Cyclo{1};
    p.c4 = p.c1 * p.c1 / (Cyclo{12} * p.c0());
    p.c7 = Cyclo{1};
    p.c6 = Cyclo{Rational(-1, 2304)};  // c1^3 + 36 c0^2 c6 = 1 + 2304 c6 = 0
    CHECK(residue_power_sum(p, 1, 4).is_zero());
    p.c6 = Cyclo{Rational(-1, 144)};  // the a0 = a reading does not vanish
    CHECK_FALSE(residue_power_sum(p, 1, 4).is_zero());
    p.c6 = Cyclo{Rational(-1, 2304)};
    p.c7 = Cyclo{};  // c7 = 0 also kills the condition
    p.c6 = Cyclo{Rational(1, 7)};
    CHECK(residue_power_sum(p, 1, 4).is_zero());
}

TEST_CASE("family instances satisfy every condition k<=4, n<=10") {
    // family A includes the c5 = -16 => c7 = 2 instance
    OdeInstance A;
    A.a = Cyclo{1};
    A.c5 = Cyclo{-16};
    A.c6 = Cyclo{3};
    A.c7 = Cyclo{2};  // c5^2/128 = 256/128
    CHECK(enumerate_conditions(A, 4, 10).empty());
    CHECK(match_elliptic_families(A) == EllipticFamily::A);

    OdeInstance B;
    B.a = Cyclo{2};
    B.c5 = Cyclo{Rational(3, 2)};
    B.c7 = B.c5 * B.c5 / Cyclo{128};
    CHECK(enumerate_conditions(B, 4, 10).empty());
    CHECK(match_elliptic_families(B) == EllipticFamily::B);

    OdeInstance C;
    C.a = Cyclo{2};
    C.c1 = Cyclo{3};
    C.c4 = C.c1 * C.c1 / (Cyclo{12} * C.c0());
    C.c6 = Cyclo{Rational(-27, 2304)};  // c1^3 + 36 c0^2 c6 = 0 keeps (1,4) silent
    CHECK(enumerate_conditions(C, 4, 10).empty());
    CHECK(match_elliptic_families(C) == EllipticFamily::C);
}

TEST_CASE("flipping a defining equality violates a condition") {
    OdeInstance A;
    A.a = Cyclo{1};
    A.c5 = Cyclo{-16};
    A.c6 = Cyclo{3};
    A.c7 = Cyclo{2};

    SUBCASE("c2 != 0: first violated condition is (k=0, n=2)") {
        A.c2 = Cyclo{5};
        auto v = enumerate_conditions(A, 4, 10);
        REQUIRE_FALSE(v.empty());
        CHECK(v.front().k == 0);
        CHECK(v.front().n == 2);
        CHECK(v.front().value == A.c2 / Cyclo{4});
    }
    SUBCASE("c1 != 0 breaks family A") {
        A.c1 = Cyclo{1};
        CHECK_FALSE(enumerate_conditions(A, 4, 10).empty());
    }
    SUBCASE("c4 != 0 breaks family A") {
        A.c4 = Cyclo{1};
        CHECK_FALSE(enumerate_conditions(A, 4, 10).empty());
        CHECK(has_condition(enumerate_conditions(A, 4, 10), 0, 3));
    }
    SUBCASE("c7 != c5^2/128 breaks family A") {
        A.c7 = Cyclo{3};
        CHECK_FALSE(enumerate_conditions(A, 4, 10).empty());
    }
}

TEST_CASE("match_elliptic_families: none for a generic instance") {
    std::mt19937_64 gen(45);
    OdeInstance ode = rand_instance(gen, Cyclo{1});
    ode.c2 = Cyclo{1};  // c2 != 0 excludes all three families
    CHECK(match_elliptic_families(ode) == EllipticFamily::none);
}
