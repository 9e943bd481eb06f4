#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "qprep/resources.hpp"

using namespace qprep;

TEST_CASE("inequality method costs two multiplications, always") {
    const CostModel a = cost_inequality_method();
    const CostModel b = cost_inequality_method();
    CHECK(a.multiplications == 2);
    CHECK(b.multiplications == 2); // idempotent, parameter-free
    CHECK(a.extra_qubit_factor == 0.0);
    CHECK(a.aa_rounds == 0);
}

TEST_CASE("Newton-Raphson baseline follows 4 ceil(log2 log2 1/eps)") {
    CHECK(cost_newton_raphson(std::ldexp(1.0, -16)).multiplications == 16);
    CHECK(cost_newton_raphson(std::ldexp(1.0, -16)).extra_qubit_factor ==
          doctest::Approx(4.0));
    CHECK(cost_newton_raphson(std::ldexp(1.0, -2)).multiplications == 4);
    CHECK(cost_newton_raphson(std::ldexp(1.0, -256)).multiplications == 32);
    CHECK_THROWS_AS(cost_newton_raphson(0.5), std::invalid_argument);
    CHECK_THROWS_AS(cost_newton_raphson(0.0), std::invalid_argument);
}

TEST_CASE("Newton-Raphson cost is non-decreasing as eps shrinks") {
    int prev = 0;
    for (int k = 2; k <= 64; ++k) {
        const int cost = cost_newton_raphson(std::ldexp(1.0, -k)).multiplications;
        CHECK(cost >= prev);
        prev = cost;
    }
}

TEST_CASE("crossover: the inequality method wins for eps <= 2^-4") {
    for (int k = 4; k <= 64; ++k) {
        const int newton =
            cost_newton_raphson(std::ldexp(1.0, -k)).multiplications;
        CHECK(newton >= 8);
        CHECK(cost_inequality_method().multiplications < newton);
    }
}

TEST_CASE("concrete amplification round counts") {
    CHECK(aa_rounds_concrete(OracleData({2, 2, 2}, 2), 2, 4) == 0);
    CHECK(aa_rounds_concrete(OracleData({1, 2, 4}, 3), 1, 4) == 1);
    CHECK(aa_rounds_concrete(OracleData(std::vector<std::uint64_t>(8, 8), 4),
                             1, 6) == 6);
}
