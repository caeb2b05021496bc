#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <complex>
#include <random>

#include "subeqlab/cyclo.hpp"
#include "helpers.hpp"

using namespace subeqlab;
using testutil::rand_cyclo;

TEST_CASE("field axioms on random elements") {
    std::mt19937_64 gen(11);
    for (int i = 0; i < 200; ++i) {
        Cyclo x = rand_cyclo(gen), y = rand_cyclo(gen), z = rand_cyclo(gen);
        CHECK(x + y == y + x);
        CHECK(x * y == y * x);
        CHECK((x + y) + z == x + (y + z));
        CHECK((x * y) * z == x * (y * z));
        CHECK(x * (y + z) == x * y + x * z);
        CHECK(x + Cyclo{} == x);
        CHECK(x * Cyclo{1} == x);
        CHECK(x - x == Cyclo{});
        if (!x.is_zero()) {
            CHECK(x * inverse(x) == Cyclo{1});
            CHECK(x / x == Cyclo{1});
        }
    }
}

TEST_CASE("omega satisfies w^2 + w + 1 = 0 and w^3 = 1") {
    CHECK(kOmega * kOmega + kOmega + Cyclo{1} == Cyclo{});
    CHECK(pow(kOmega, 3) == Cyclo{1});
}

TEST_CASE("norm is multiplicative and zero only at zero") {
    std::mt19937_64 gen(12);
    for (int i = 0; i < 200; ++i) {
        Cyclo x = rand_cyclo(gen), y = rand_cyclo(gen);
        CHECK(norm(x * y) == norm(x) * norm(y));
        CHECK((norm(x) == 0) == x.is_zero());
        CHECK(norm(x) >= 0);
    }
}

TEST_CASE("complex embedding is a field homomorphism") {
    // oracle: double arithmetic on the embedded images
    std::mt19937_64 gen(13);
    for (int i = 0; i < 200; ++i) {
        Cyclo x = rand_cyclo(gen), y = rand_cyclo(gen, true);
        std::complex<double> ex = embed_complex(x), ey = embed_complex(y);
        CHECK(std::abs(embed_complex(x + y) - (ex + ey)) < 1e-12 * (1 + std::abs(ex + ey)));
        CHECK(std::abs(embed_complex(x * y) - ex * ey) < 1e-12 * (1 + std::abs(ex * ey)));
        CHECK(std::abs(embed_complex(x / y) - ex / ey) < 1e-10 * (1 + std::abs(ex / ey)));
    }
    CHECK(std::abs(embed_complex(kOmega) - std::polar(1.0, 2 * 3.14159265358979323846 / 3)) <
          1e-12);
}

TEST_CASE("cube roots share the cube") {
    std::mt19937_64 gen(14);
    for (int i = 0; i < 50; ++i) {
        Cyclo a = rand_cyclo(gen, true);
        auto roots = cube_roots_of(a);
        REQUIRE(roots.size() == 3);
        for (const Cyclo& r : roots) CHECK(pow(r, 3) == pow(a, 3));
        CHECK(roots[0] != roots[1]);
        CHECK(roots[1] != roots[2]);
        CHECK(roots[0] != roots[2]);
    }
}

TEST_CASE("division by zero throws") {
    CHECK_THROWS_AS(inverse(Cyclo{}), division_by_zero);
    CHECK_THROWS_AS(Cyclo{1} / Cyclo{}, division_by_zero);
}

TEST_CASE("to_string / parse_cyclo round trip") {
    std::mt19937_64 gen(15);
    for (int i = 0; i < 200; ++i) {
        Cyclo x = rand_cyclo(gen);
        CHECK(parse_cyclo(to_string(x)) == x);
    }
}

TEST_CASE("parse grammar") {
    CHECK(parse_cyclo("3/4") == Cyclo{Rational(3, 4)});
    CHECK(parse_cyclo("-2") == Cyclo{-2});
    CHECK(parse_cyclo("w") == kOmega);
    CHECK(parse_cyclo("-w") == -kOmega);
    CHECK(parse_cyclo("2w") == Cyclo{2} * kOmega);
    CHECK(parse_cyclo("1/4 + 1/2 w") == Cyclo{Rational(1, 4), Rational(1, 2)});
    CHECK(parse_cyclo("1 - w") == Cyclo{Rational(1), Rational(-1)});
    CHECK_THROWS_AS(parse_cyclo(""), parse_error);
    CHECK_THROWS_AS(parse_cyclo("1/0"), parse_error);
    CHECK_THROWS_AS(parse_cyclo("x"), parse_error);
    CHECK_THROWS_AS(parse_cyclo("1 +"), parse_error);
}
