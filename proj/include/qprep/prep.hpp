#pragma once

#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

#include "qprep/arithmetic.hpp"
#include "qprep/statevector.hpp"

namespace qprep {

enum class Backend { kDense, kBlock };

struct InversePrepConfig {
    OracleData data;
    std::uint64_t c = 1;
    int m = 4;
    std::optional<int> aa_rounds; // nullopt = optimal_rounds(p_raw)
    Backend backend = Backend::kDense;
};

/// Output record of a preparation run.
struct PrepReport {
    std::vector<double> post_selected_amplitudes; // length d, nonneg, unit l2
    double success_probability_raw = 0.0;
    int aa_rounds_used = 0;
    double success_probability_final = 0.0;
    int multiplication_count = 0;
    double fidelity_vs_target = 0.0;
    double max_componentwise_error = 0.0;
};

struct PrepResult {
    // Dense backend: the full post-selected state after the inverse oracle.
    // Block backend: the post-selected index-register state only.
    Statevector state;
    PrepReport report;
};

/// (C/alpha_i) / ||C/alpha||_2.
std::vector<double> classical_target_inverse(const OracleData& data,
                                             std::uint64_t c);

/// Brute-force count t = #{ j in [0, 2^m) : alpha * j < c * 2^m }.
std::uint64_t counting_oracle_inverse(std::uint64_t alpha, std::uint64_t c,
                                      int m);

/// Brute-force count t = #{ j in [0, 2^m) : predicate(g(alpha), h^{-1}(j)) }.
std::uint64_t counting_oracle_general(std::uint64_t alpha,
                                      const FunctionTablePair& tables);

PrepResult prepare_inverse(const InversePrepConfig& config);

PrepResult prepare_division(const OracleData& data,
                            const std::vector<std::uint64_t>& betas, int m,
                            std::optional<int> aa_rounds = std::nullopt,
                            Backend backend = Backend::kDense);

PrepResult prepare_general(const OracleData& data,
                           const FunctionTablePair& tables,
                           std::optional<int> aa_rounds = std::nullopt,
                           Backend backend = Backend::kDense);

/// Uniform superposition over [0, d): pure Hadamard layer when d is a power
/// of two, else comparison against d, a calibrated R_y and exactly one
/// amplification round.
PrepResult prepare_uniform(std::uint64_t d);

/// Runs the uniform preparation with theta replaced by theta - eps0 and
/// returns (exact final good-subspace probability, bound 1 - 16 eps0^2).
/// Throws if the probability falls below the bound.
std::pair<double, double> uniform_theta_perturbation(std::uint64_t d,
                                                     double eps0);

/// Field-by-field report comparison within `tol`.
bool reports_match(const PrepReport& a, const PrepReport& b,
                   double tol = 1e-10);

/// True iff the dense and block backends produce identical reports.
bool simulate_equivalence_check(const InversePrepConfig& config);

} // namespace qprep
