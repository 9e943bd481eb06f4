#pragma once

#include <cstdint>

#include "qprep/arithmetic.hpp"

namespace qprep {

/// Cost accounting in the unit of "multiplication module invocation".
struct CostModel {
    int multiplications = 0;
    double extra_qubit_factor = 0.0;
    int aa_rounds = 0;
};

/// The inequality-test method: 2 multiplications (Mult + Mult^+),
/// independent of m and n, at arbitrary precision.
CostModel cost_inequality_method();

/// Newton-Raphson reciprocal baseline: 4 ceil(log2 log2 (1/eps))
/// multiplications and a ceil(log2 log2 (1/eps)) qubit factor.
/// Requires 0 < eps < 0.5.
CostModel cost_newton_raphson(double epsilon);

/// Optimal amplification rounds for the exact discrete success probability
/// p = sum_i (t_i / 2^m)^2 / d; asserted against the asymptotic bound
/// ceil((pi/4) sqrt(d) / ||C/alpha||_2) + 1.
int aa_rounds_concrete(const OracleData& data, std::uint64_t c, int m);

} // namespace qprep
