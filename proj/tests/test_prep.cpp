#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "qprep/prep.hpp"

using namespace qprep;

TEST_CASE("classical_target_inverse normalizes C / alpha") {
    const auto equal = classical_target_inverse(OracleData({1, 1}, 1), 1);
    CHECK(equal[0] == doctest::Approx(std::sqrt(0.5)).epsilon(1e-14));
    CHECK(equal[1] == doctest::Approx(std::sqrt(0.5)).epsilon(1e-14));

    const auto powers = classical_target_inverse(OracleData({1, 2, 4}, 3), 1);
    const double norm = std::sqrt(1.3125);
    CHECK(powers[0] == doctest::Approx(1.0 / norm).epsilon(1e-14));
    CHECK(powers[1] == doctest::Approx(0.5 / norm).epsilon(1e-14));
    CHECK(powers[2] == doctest::Approx(0.25 / norm).epsilon(1e-14));

    const auto odd = classical_target_inverse(OracleData({3, 5}, 3), 1);
    const double n35 = std::hypot(1.0 / 3.0, 1.0 / 5.0);
    CHECK(odd[0] == doctest::Approx((1.0 / 3.0) / n35).epsilon(1e-14));
    CHECK(odd[1] == doctest::Approx((1.0 / 5.0) / n35).epsilon(1e-14));
}

TEST_CASE("counting_oracle_inverse counts grid points below the threshold") {
    CHECK(counting_oracle_inverse(1, 1, 3) == 8);
    CHECK(counting_oracle_inverse(3, 1, 4) == 6);
    CHECK(counting_oracle_inverse(4, 2, 4) == 8);
    CHECK_THROWS_AS(counting_oracle_inverse(0, 1, 3), std::invalid_argument);
}

TEST_CASE("counting_oracle_general counts accepted grid points") {
    CHECK(counting_oracle_general(3, make_inv_sqrt_1p_tables(4, 4)) == 8);
    CHECK(counting_oracle_general(0, make_inv_sqrt_1p_tables(4, 4)) == 16);
    CHECK(counting_oracle_general(8, make_inv_sqrt_1p_tables(4, 6)) == 22);
}

TEST_CASE("prepare_inverse: all-ones data needs no amplification") {
    const PrepResult r =
        prepare_inverse({OracleData({1, 1, 1, 1}, 1), 1, 3, std::nullopt,
                         Backend::kDense});
    for (double a : r.report.post_selected_amplitudes) {
        CHECK(a == doctest::Approx(0.5).epsilon(1e-12));
    }
    CHECK(r.report.success_probability_raw == doctest::Approx(1.0));
    CHECK(r.report.aa_rounds_used == 0);
    CHECK(r.report.multiplication_count == 2);
}

TEST_CASE("prepare_inverse: powers of two are exact") {
    const PrepResult r = prepare_inverse(
        {OracleData({1, 2, 4}, 3), 1, 4, std::nullopt, Backend::kDense});
    const double norm = std::sqrt(16.0 * 16 + 8 * 8 + 4 * 4);
    CHECK(r.report.post_selected_amplitudes[0] ==
          doctest::Approx(16.0 / norm).epsilon(1e-12));
    CHECK(r.report.post_selected_amplitudes[1] ==
          doctest::Approx(8.0 / norm).epsilon(1e-12));
    CHECK(r.report.post_selected_amplitudes[2] ==
          doctest::Approx(4.0 / norm).epsilon(1e-12));
    CHECK(r.report.success_probability_raw ==
          doctest::Approx(0.4375).epsilon(1e-12));
    CHECK(r.report.fidelity_vs_target == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("prepare_inverse: truncation errors stay below 2^-m") {
    const PrepResult r = prepare_inverse(
        {OracleData({3, 5}, 3), 1, 4, std::nullopt, Backend::kDense});
    const double norm = std::sqrt(36.0 + 16.0);
    CHECK(r.report.post_selected_amplitudes[0] ==
          doctest::Approx(6.0 / norm).epsilon(1e-12));
    CHECK(r.report.post_selected_amplitudes[1] ==
          doctest::Approx(4.0 / norm).epsilon(1e-12));
    // Pre-normalization values (0.375, 0.25) against the ideal (1/3, 1/5).
    CHECK(r.report.max_componentwise_error ==
          doctest::Approx(0.05).epsilon(1e-10));
    CHECK(r.report.max_componentwise_error < std::ldexp(1.0, -4));
}

TEST_CASE("prepare_inverse: amplification leaves the amplitudes undistorted") {
    const InversePrepConfig base{OracleData({3, 5, 7}, 3), 1, 4, std::nullopt,
                                 Backend::kDense};
    InversePrepConfig no_aa = base;
    no_aa.aa_rounds = 0;
    const PrepResult amped = prepare_inverse(base);
    const PrepResult plain = prepare_inverse(no_aa);
    CHECK(amped.report.aa_rounds_used > 0);
    double dot = 0.0;
    for (std::size_t i = 0; i < 3; ++i) {
        dot += amped.report.post_selected_amplitudes[i] *
               plain.report.post_selected_amplitudes[i];
    }
    CHECK(dot * dot >= 1.0 - 1e-10);
    CHECK(amped.report.success_probability_final >=
          plain.report.success_probability_final);
}

TEST_CASE("prepare_division") {
    SUBCASE("beta = alpha gives uniform amplitudes") {
        const PrepResult r =
            prepare_division(OracleData({3, 5}, 3), {3, 5}, 4);
        CHECK(r.report.post_selected_amplitudes[0] ==
              doctest::Approx(std::sqrt(0.5)).epsilon(1e-12));
        CHECK(r.report.post_selected_amplitudes[1] ==
              doctest::Approx(std::sqrt(0.5)).epsilon(1e-12));
    }
    SUBCASE("exact ratios") {
        const PrepResult r =
            prepare_division(OracleData({2, 4}, 3), {1, 3}, 4);
        const double norm = std::hypot(0.5, 0.75);
        CHECK(r.report.post_selected_amplitudes[0] ==
              doctest::Approx(0.5 / norm).epsilon(1e-12));
        CHECK(r.report.post_selected_amplitudes[1] ==
              doctest::Approx(0.75 / norm).epsilon(1e-12));
    }
    SUBCASE("truncation bound at m = 5") {
        const PrepResult r =
            prepare_division(OracleData({3, 5}, 3), {2, 2}, 5);
        // Counts 22 and 13 against the ideals 2/3 and 2/5.
        const double scale =
            std::sqrt(r.report.success_probability_raw * 2.0);
        CHECK(r.report.post_selected_amplitudes[0] * scale ==
              doctest::Approx(22.0 / 32.0).epsilon(1e-12));
        CHECK(r.report.post_selected_amplitudes[1] * scale ==
              doctest::Approx(13.0 / 32.0).epsilon(1e-12));
        CHECK(r.report.max_componentwise_error < std::ldexp(1.0, -5));
    }
    SUBCASE("beta > alpha is rejected") {
        CHECK_THROWS_AS(prepare_division(OracleData({3, 5}, 3), {4, 2}, 4),
                        std::invalid_argument);
    }
}

TEST_CASE("prepare_general") {
    SUBCASE("inverse square root of 1 + alpha") {
        const PrepResult r = prepare_general(
            OracleData({0, 3}, 2, /*allow_zero=*/true),
            make_inv_sqrt_1p_tables(2, 4));
        const double norm = std::sqrt(1.0 + 0.25);
        CHECK(r.report.post_selected_amplitudes[0] ==
              doctest::Approx(1.0 / norm).epsilon(1e-12));
        CHECK(r.report.post_selected_amplitudes[1] ==
              doctest::Approx(0.5 / norm).epsilon(1e-12));
        CHECK(r.report.multiplication_count == 2);
    }
    SUBCASE("linear tables reduce to linear coefficients") {
        const PrepResult r = prepare_general(OracleData({1, 2, 3}, 2),
                                             make_linear_tables(2, 4));
        const double norm = std::sqrt(1.0 + 4.0 + 9.0);
        CHECK(r.report.post_selected_amplitudes[0] ==
              doctest::Approx(1.0 / norm).epsilon(1e-11));
        CHECK(r.report.post_selected_amplitudes[1] ==
              doctest::Approx(2.0 / norm).epsilon(1e-11));
        CHECK(r.report.post_selected_amplitudes[2] ==
              doctest::Approx(3.0 / norm).epsilon(1e-11));
        CHECK(r.report.multiplication_count == 0);
    }
    SUBCASE("d = 1") {
        const PrepResult r = prepare_general(OracleData({3}, 2),
                                             make_inv_sqrt_1p_tables(2, 4));
        CHECK(r.report.post_selected_amplitudes[0] ==
              doctest::Approx(1.0).epsilon(1e-12));
    }
    SUBCASE("f(alpha) = 0 is rejected") {
        CHECK_THROWS_AS(prepare_general(OracleData({0, 1}, 2, true),
                                        make_linear_tables(2, 3)),
                        std::invalid_argument);
    }
}

TEST_CASE("general framework reproduces the inverse algorithm exactly") {
    const OracleData data({3, 5}, 3);
    const PrepResult inverse =
        prepare_inverse({data, 1, 4, std::nullopt, Backend::kDense});
    const PrepResult general =
        prepare_general(data, make_inverse_reduction_tables(3, 4));
    REQUIRE(general.report.post_selected_amplitudes.size() == 2);
    for (std::size_t i = 0; i < 2; ++i) {
        CHECK(std::abs(general.report.post_selected_amplitudes[i] -
                       inverse.report.post_selected_amplitudes[i]) < 1e-12);
    }
    CHECK(general.report.success_probability_raw ==
          doctest::Approx(inverse.report.success_probability_raw)
              .epsilon(1e-12));
}

TEST_CASE("prepare_uniform") {
    SUBCASE("power of two: Hadamards only") {
        const PrepResult r = prepare_uniform(4);
        CHECK(r.report.success_probability_final == doctest::Approx(1.0));
        CHECK(r.report.aa_rounds_used == 0);
        for (double a : r.report.post_selected_amplitudes) {
            CHECK(a == doctest::Approx(0.5).epsilon(1e-13));
        }
    }
    SUBCASE("d = 3: one exact amplification round") {
        const PrepResult r = prepare_uniform(3);
        CHECK(r.report.success_probability_raw ==
              doctest::Approx(0.25).epsilon(1e-12));
        CHECK(r.report.success_probability_final ==
              doctest::Approx(1.0).epsilon(1e-10));
        CHECK(r.report.aa_rounds_used == 1);
        for (double a : r.report.post_selected_amplitudes) {
            CHECK(a == doctest::Approx(1.0 / std::sqrt(3.0)).epsilon(1e-10));
        }
        // Index labels >= d carry no amplitude.
        CHECK(std::abs(r.state.amp(3)) < 1e-10);
    }
    SUBCASE("the 1/4 -> 1 pattern holds for d in [5,7] and [9,15]") {
        for (std::uint64_t d : {5, 6, 7, 9, 10, 11, 12, 13, 14, 15}) {
            const PrepResult r = prepare_uniform(d);
            CHECK(r.report.success_probability_raw ==
                  doctest::Approx(0.25).epsilon(1e-12));
            CHECK(r.report.success_probability_final ==
                  doctest::Approx(1.0).epsilon(1e-10));
            for (double a : r.report.post_selected_amplitudes) {
                CHECK(std::abs(a - 1.0 / std::sqrt(double(d))) < 1e-10);
            }
        }
    }
}

TEST_CASE("uniform_theta_perturbation respects the quadratic bound") {
    const auto [p0, b0] = uniform_theta_perturbation(3, 0.0);
    CHECK(p0 == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(b0 == doctest::Approx(1.0));

    const auto [p1, b1] = uniform_theta_perturbation(3, 0.05);
    CHECK(b1 == doctest::Approx(0.96));
    CHECK(p1 >= 0.96);

    const auto [p2, b2] = uniform_theta_perturbation(11, 0.01);
    CHECK(b2 == doctest::Approx(0.9984));
    CHECK(p2 >= 0.9984);

    CHECK_THROWS_AS(uniform_theta_perturbation(8, 0.01), std::invalid_argument);
    CHECK_THROWS_AS(uniform_theta_perturbation(3, 0.5), std::invalid_argument);
}

TEST_CASE("backend equivalence") {
    CHECK(simulate_equivalence_check(
        {OracleData({2, 3}, 2), 1, 3, std::nullopt, Backend::kDense}));
    CHECK(simulate_equivalence_check(
        {OracleData({3, 5}, 3), 1, 4, std::nullopt, Backend::kDense}));
    CHECK(simulate_equivalence_check(
        {OracleData({3, 5, 6}, 3), 2, 4, std::nullopt, Backend::kDense}));

    // Negative control: a corrupted report must not compare equal.
    PrepReport a =
        prepare_inverse({OracleData({3, 5}, 3), 1, 4, std::nullopt,
                         Backend::kDense})
            .report;
    PrepReport b = a;
    b.post_selected_amplitudes[0] += 1e-6;
    CHECK_FALSE(reports_match(a, b));
}

TEST_CASE("block backend matches dense for division and general modes") {
    const OracleData data({2, 4, 5}, 3);
    const PrepResult dd = prepare_division(data, {1, 3, 2}, 4, std::nullopt,
                                           Backend::kDense);
    const PrepResult db = prepare_division(data, {1, 3, 2}, 4, std::nullopt,
                                           Backend::kBlock);
    CHECK(reports_match(dd.report, db.report));

    const OracleData gdata({0, 1, 3}, 2, /*allow_zero=*/true);
    const FunctionTablePair tables = make_inv_sqrt_1p_tables(2, 4);
    const PrepResult gd =
        prepare_general(gdata, tables, std::nullopt, Backend::kDense);
    const PrepResult gb =
        prepare_general(gdata, tables, std::nullopt, Backend::kBlock);
    CHECK(reports_match(gd.report, gb.report));
}

TEST_CASE("report invariants: normalized, nonnegative amplitudes") {
    const PrepResult r = prepare_inverse(
        {OracleData({3, 5, 7, 6}, 3), 2, 5, std::nullopt, Backend::kDense});
    double n2 = 0.0;
    for (double a : r.report.post_selected_amplitudes) {
        CHECK(a >= 0.0);
        n2 += a * a;
    }
    CHECK(n2 == doctest::Approx(1.0).epsilon(1e-10));
    CHECK(r.report.fidelity_vs_target >= 0.0);
    CHECK(r.report.fidelity_vs_target <= 1.0);
}
