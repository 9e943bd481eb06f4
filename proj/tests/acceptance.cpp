// Acceptance gate: runs every acceptance criterion at its stated tolerance
// and prints one PASS/FAIL line per criterion. Exit status is the number of
// failed criteria.
#include <cmath>
#include <cstdint>
#include <iostream>
#include <numbers>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "qprep/amplification.hpp"
#include "qprep/permutation.hpp"
#include "qprep/prep.hpp"
#include "qprep/resources.hpp"

using namespace qprep;

namespace {

int g_failures = 0;

void report_line(int number, const std::string& name, bool ok,
                 const std::string& detail) {
    std::cout << (ok ? "PASS" : "FAIL") << "  criterion " << number << ": "
              << name;
    if (!detail.empty()) {
        std::cout << " — " << detail;
    }
    std::cout << '\n';
    if (!ok) {
        ++g_failures;
    }
}

struct InverseCase {
    std::vector<std::uint64_t> alphas;
    int n;
    int m;
    std::uint64_t c;
};

struct InverseRun {
    InverseCase cfg;
    PrepReport dense;
    PrepReport dense_no_aa;
    PrepReport block;
    std::vector<std::uint64_t> counts;
};

std::vector<InverseCase> make_suite(std::mt19937& rng, std::size_t count) {
    std::vector<InverseCase> suite;
    std::uniform_int_distribution<int> d_dist(2, 8);
    std::uniform_int_distribution<int> n_dist(2, 4);
    std::uniform_int_distribution<int> m_dist(2, 6);
    while (suite.size() < count) {
        InverseCase c;
        const int d = d_dist(rng);
        c.n = n_dist(rng);
        c.m = m_dist(rng);
        std::uniform_int_distribution<std::uint64_t> a_dist(
            1, (std::uint64_t{1} << c.n) - 1);
        std::uint64_t min_alpha = ~std::uint64_t{0};
        for (int i = 0; i < d; ++i) {
            c.alphas.push_back(a_dist(rng));
            min_alpha = std::min(min_alpha, c.alphas.back());
        }
        std::uniform_int_distribution<std::uint64_t> c_dist(1, min_alpha);
        c.c = c_dist(rng);
        suite.push_back(std::move(c));
    }
    return suite;
}

double amplitude_dot(const std::vector<double>& a, const std::vector<double>& b) {
    double dot = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        dot += a[i] * b[i];
    }
    return dot;
}

std::string at_config(const InverseCase& c) {
    std::ostringstream out;
    out << "at d=" << c.alphas.size() << " n=" << c.n << " m=" << c.m
        << " C=" << c.c;
    return out.str();
}

} // namespace

int main() {
    std::mt19937 rng(20240817);
    const std::vector<InverseCase> suite = make_suite(rng, 200);

    std::vector<InverseRun> runs;
    runs.reserve(suite.size());
    for (const InverseCase& c : suite) {
        InverseRun run{c, {}, {}, {}, {}};
        const OracleData data(c.alphas, c.n);
        run.dense = prepare_inverse({data, c.c, c.m, std::nullopt,
                                     Backend::kDense})
                        .report;
        run.dense_no_aa =
            prepare_inverse({data, c.c, c.m, 0, Backend::kDense}).report;
        run.block = prepare_inverse({data, c.c, c.m, std::nullopt,
                                     Backend::kBlock})
                        .report;
        for (std::uint64_t a : c.alphas) {
            run.counts.push_back(counting_oracle_inverse(a, c.c, c.m));
        }
        runs.push_back(std::move(run));
    }

    // 1. Counting-oracle equivalence over the randomized suite.
    {
        bool ok = true;
        std::string detail = "200 randomized configs";
        for (const InverseRun& run : runs) {
            double norm2 = 0.0;
            for (std::uint64_t t : run.counts) {
                norm2 += double(t) * double(t);
            }
            const double norm = std::sqrt(norm2);
            for (std::size_t i = 0; i < run.counts.size() && ok; ++i) {
                if (std::abs(run.dense.post_selected_amplitudes[i] -
                             double(run.counts[i]) / norm) > 1e-10) {
                    ok = false;
                    detail = at_config(run.cfg);
                }
            }
            if (!ok) {
                break;
            }
        }
        report_line(1, "counting-oracle equivalence (inverse)", ok, detail);
    }

    // 2. 2^-m truncation law, plus the m-sweep on (3, 5).
    {
        bool ok = true;
        std::string detail = "suite + m-sweep on (3,5)";
        for (const InverseRun& run : runs) {
            const double bound = std::ldexp(1.0, -run.cfg.m);
            for (std::size_t i = 0; i < run.counts.size(); ++i) {
                const double got =
                    std::ldexp(double(run.counts[i]), -run.cfg.m);
                const double ideal =
                    double(run.cfg.c) / double(run.cfg.alphas[i]);
                if (!(std::abs(got - ideal) < bound)) {
                    ok = false;
                    detail = at_config(run.cfg);
                }
            }
        }
        double prev = 1.0;
        for (int m = 2; m <= 8 && ok; ++m) {
            const PrepReport r =
                prepare_inverse({OracleData({3, 5}, 3), 1, m, std::nullopt,
                                 Backend::kDense})
                    .report;
            if (r.max_componentwise_error > prev + 1e-15 ||
                !(r.max_componentwise_error < std::ldexp(1.0, -m))) {
                ok = false;
                detail = "m-sweep violated at m=" + std::to_string(m);
            }
            prev = r.max_componentwise_error;
        }
        report_line(2, "2^-m truncation law", ok, detail);
    }

    // 3. Success-probability identity and amplification distortion-freedom.
    {
        bool ok = true;
        std::string detail = "p identities + AA invariance";
        for (const InverseRun& run : runs) {
            const double d = double(run.counts.size());
            double p_expect = 0.0;
            for (std::uint64_t t : run.counts) {
                const double frac = std::ldexp(double(t), -run.cfg.m);
                p_expect += frac * frac;
            }
            p_expect /= d;
            const double p0 = run.dense.success_probability_raw;
            const int k = run.dense.aa_rounds_used;
            const double law =
                std::pow(std::sin((2.0 * k + 1.0) * std::asin(std::sqrt(p0))),
                         2);
            const double dot =
                amplitude_dot(run.dense.post_selected_amplitudes,
                              run.dense_no_aa.post_selected_amplitudes);
            if (std::abs(p0 - p_expect) > 1e-10 ||
                std::abs(run.dense.success_probability_final - law) > 1e-10 ||
                !(dot * dot >= 1.0 - 1e-10)) {
                ok = false;
                detail = at_config(run.cfg);
                break;
            }
        }
        report_line(3, "success-probability identity", ok, detail);
    }

    // 4. Uniform preparation: 1/4 -> 1 with uniform amplitudes, d <= 64.
    {
        bool ok = true;
        std::string detail = "all non-power-of-two d <= 64";
        for (std::uint64_t d = 3; d <= 64 && ok; ++d) {
            if ((d & (d - 1)) == 0) {
                continue;
            }
            const PrepReport r = prepare_uniform(d).report;
            if (std::abs(r.success_probability_raw - 0.25) > 1e-12 ||
                std::abs(r.success_probability_final - 1.0) > 1e-10) {
                ok = false;
            }
            for (double a : r.post_selected_amplitudes) {
                if (std::abs(a - 1.0 / std::sqrt(double(d))) > 1e-10) {
                    ok = false;
                }
            }
            if (!ok) {
                detail = "at d=" + std::to_string(d);
            }
        }
        report_line(4, "uniform preparation (1/4 -> 1)", ok, detail);
    }

    // 5. Theta-robustness: exact probability >= 1 - 16 eps0^2.
    {
        bool ok = true;
        std::string detail = "d <= 32, eps0 in {1e-3, 1e-2, 5e-2, 1e-1}";
        for (std::uint64_t d = 3; d <= 32 && ok; ++d) {
            if ((d & (d - 1)) == 0) {
                continue;
            }
            for (double eps0 : {1e-3, 1e-2, 5e-2, 1e-1}) {
                try {
                    const auto [p, bound] = uniform_theta_perturbation(d, eps0);
                    if (!(p >= bound)) {
                        ok = false;
                    }
                } catch (const std::exception&) {
                    ok = false;
                }
                if (!ok) {
                    detail = "at d=" + std::to_string(d) +
                             " eps0=" + std::to_string(eps0);
                    break;
                }
            }
        }
        report_line(5, "theta-robustness bound", ok, detail);
    }

    // 6. Worked nonlinear example f = 1/sqrt(1 + alpha).
    {
        bool ok = true;
        std::string detail =
            "alpha in {0..15}, m in {4,6,8} (block) + dense cross-check";
        std::vector<std::uint64_t> alphas(16);
        for (std::uint64_t a = 0; a < 16; ++a) {
            alphas[a] = a;
        }
        const OracleData data(alphas, 4, /*allow_zero=*/true);
        for (int m : {4, 6, 8}) {
            const FunctionTablePair tables = make_inv_sqrt_1p_tables(4, m);
            const PrepReport r =
                prepare_general(data, tables, std::nullopt, Backend::kBlock)
                    .report;
            double norm2 = 0.0;
            std::vector<std::uint64_t> counts(16);
            for (std::uint64_t a = 0; a < 16; ++a) {
                counts[a] = counting_oracle_general(a, tables);
                norm2 += double(counts[a]) * double(counts[a]);
            }
            const double norm = std::sqrt(norm2);
            for (std::uint64_t a = 0; a < 16; ++a) {
                const double frac = std::ldexp(double(counts[a]), -m);
                if (std::abs(r.post_selected_amplitudes[a] -
                             double(counts[a]) / norm) > 1e-10 ||
                    !(std::abs(frac - 1.0 / std::sqrt(1.0 + double(a))) <
                      std::ldexp(1.0, -m))) {
                    ok = false;
                    detail = "at m=" + std::to_string(m) +
                             " alpha=" + std::to_string(a);
                }
            }
            if (m == 4 && counts[3] != 8) { // 8/16 = 0.5 = f(3) exactly
                ok = false;
                detail = "alpha=3, m=4 count is not exactly 8";
            }
        }
        // Dense/block agreement on a configuration small enough for both.
        const OracleData small({0, 1, 2, 3}, 2, /*allow_zero=*/true);
        const FunctionTablePair tables_small = make_inv_sqrt_1p_tables(2, 4);
        const PrepReport gd =
            prepare_general(small, tables_small, std::nullopt, Backend::kDense)
                .report;
        const PrepReport gb =
            prepare_general(small, tables_small, std::nullopt, Backend::kBlock)
                .report;
        if (!reports_match(gd, gb)) {
            ok = false;
            detail = "dense/block disagree on the n=2, m=4 cross-check";
        }
        report_line(6, "nonlinear worked example 1/sqrt(1+alpha)", ok, detail);
    }

    // 7. Division variant on randomized (alpha, beta) pairs.
    {
        bool ok = true;
        std::string detail = "50 randomized configs";
        std::uniform_int_distribution<int> d_dist(2, 8);
        std::uniform_int_distribution<int> n_dist(2, 4);
        std::uniform_int_distribution<int> m_dist(2, 6);
        for (int trial = 0; trial < 50 && ok; ++trial) {
            const int d = d_dist(rng);
            const int n = n_dist(rng);
            const int m = m_dist(rng);
            std::uniform_int_distribution<std::uint64_t> a_dist(
                1, (std::uint64_t{1} << n) - 1);
            std::vector<std::uint64_t> alphas, betas;
            for (int i = 0; i < d; ++i) {
                alphas.push_back(a_dist(rng));
                std::uniform_int_distribution<std::uint64_t> b_dist(
                    1, alphas.back());
                betas.push_back(b_dist(rng));
            }
            const PrepReport r =
                prepare_division(OracleData(alphas, n), betas, m).report;
            double norm2 = 0.0;
            std::vector<std::uint64_t> counts(d);
            for (int i = 0; i < d; ++i) {
                counts[i] = counting_oracle_inverse(alphas[i], betas[i], m);
                norm2 += double(counts[i]) * double(counts[i]);
            }
            const double norm = std::sqrt(norm2);
            for (int i = 0; i < d; ++i) {
                const double frac = std::ldexp(double(counts[i]), -m);
                const double ideal = double(betas[i]) / double(alphas[i]);
                if (std::abs(r.post_selected_amplitudes[i] -
                             double(counts[i]) / norm) > 1e-10 ||
                    !(std::abs(frac - ideal) < std::ldexp(1.0, -m))) {
                    ok = false;
                    detail = "at trial " + std::to_string(trial);
                }
            }
        }
        report_line(7, "division variant", ok, detail);
    }

    // 8. Resource claims.
    {
        bool ok = true;
        std::string detail = "2 multiplications; Newton 16 at 2^-16; crossover";
        for (const InverseRun& run : runs) {
            if (run.dense.multiplication_count != 2) {
                ok = false;
                detail = at_config(run.cfg);
            }
        }
        if (cost_newton_raphson(std::ldexp(1.0, -16)).multiplications != 16) {
            ok = false;
            detail = "Newton-Raphson at 2^-16";
        }
        for (int k = 4; k <= 40; ++k) {
            const int newton =
                cost_newton_raphson(std::ldexp(1.0, -k)).multiplications;
            if (!(newton >= 8 &&
                  cost_inequality_method().multiplications < newton)) {
                ok = false;
                detail = "crossover at eps=2^-" + std::to_string(k);
            }
        }
        report_line(8, "resource claims", ok, detail);
    }

    // 9. Backend agreement across the randomized suite.
    {
        bool ok = true;
        std::string detail = "dense vs block on 200 configs";
        for (const InverseRun& run : runs) {
            if (!reports_match(run.dense, run.block, 1e-10)) {
                ok = false;
                detail = at_config(run.cfg);
                break;
            }
        }
        report_line(9, "backend agreement", ok, detail);
    }

    // 10. Invariant suite: permutations, norms, XOR involutions.
    {
        bool ok = true;
        std::string detail = "round-trips, norms, involutions";
        RegisterLayout layout{{{"I", 2, {2, 0}}, {"B", 3, {3, 0}}}};
        std::normal_distribution<double> dist;
        for (int trial = 0; trial < 20; ++trial) {
            std::vector<cplx> amps(layout.dim());
            double n2 = 0.0;
            for (cplx& a : amps) {
                a = cplx{dist(rng), dist(rng)};
                n2 += std::norm(a);
            }
            for (cplx& a : amps) {
                a /= std::sqrt(n2);
            }
            const Statevector s(layout, amps);

            const std::uint64_t shift = 1 + trial % 7;
            const BasisPermutation perm(layout, {"B"},
                                        [shift](std::uint64_t x) {
                                            return (x + shift) % 8;
                                        });
            const Statevector round = perm.inverse().apply(perm.apply(s));
            for (std::uint64_t g = 0; g < layout.dim(); ++g) {
                if (round.amp(g) != s.amp(g)) {
                    ok = false;
                    detail = "permutation round-trip drifted";
                }
            }

            const Statevector h = apply_hadamard_layer(s, "I", 2);
            if (std::abs(h.norm() - 1.0) > 1e-12) {
                ok = false;
                detail = "Hadamard layer broke the norm";
            }

            // XOR involution, applied as raw permutations so dirty B labels
            // are exercised too.
            const std::vector<std::uint64_t> values{3, 6, 1, 7};
            const BasisPermutation load(
                layout, {"I", "B"}, [&values](std::uint64_t joint) {
                    const std::uint64_t i = joint & 3;
                    return i | ((joint >> 2) ^ values[i]) << 2;
                });
            const Statevector twice = load.apply(load.apply(s));
            for (std::uint64_t g = 0; g < layout.dim(); ++g) {
                if (twice.amp(g) != s.amp(g)) {
                    ok = false;
                    detail = "XOR load is not an involution";
                }
            }
        }
        report_line(10, "invariant suite", ok, detail);
    }

    if (g_failures == 0) {
        std::cout << "all 10 acceptance criteria passed\n";
    } else {
        std::cout << g_failures << " acceptance criteria FAILED\n";
    }
    return g_failures;
}
