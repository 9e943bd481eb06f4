#include "qprep/resources.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "qprep/amplification.hpp"
#include "qprep/prep.hpp"

namespace qprep {

CostModel cost_inequality_method() { return CostModel{2, 0.0, 0}; }

CostModel cost_newton_raphson(double epsilon) {
    if (!(epsilon > 0.0) || epsilon >= 0.5) {
        throw std::invalid_argument(
            "epsilon must lie in (0, 0.5); the iterate count degenerates "
            "otherwise");
    }
    const double iterations = std::ceil(std::log2(std::log2(1.0 / epsilon)));
    CostModel cost;
    cost.multiplications = static_cast<int>(4.0 * iterations);
    cost.extra_qubit_factor = iterations;
    cost.aa_rounds = 0;
    return cost;
}

int aa_rounds_concrete(const OracleData& data, std::uint64_t c, int m) {
    const ScalarConstant cc = ScalarConstant::constant(c, data);
    double p = 0.0;
    double target_norm2 = 0.0;
    for (std::uint64_t i = 0; i < data.d(); ++i) {
        const std::uint64_t t = counting_oracle_inverse(data.alphas[i], c, m);
        const double frac = std::ldexp(double(t), -m);
        p += frac * frac;
        const double ideal = double(cc.value_for(i)) / double(data.alphas[i]);
        target_norm2 += ideal * ideal;
    }
    p /= double(data.d());
    const int k = optimal_rounds(p);

    const double asymptotic = std::ceil(
        std::numbers::pi / 4.0 * std::sqrt(double(data.d()) / target_norm2));
    if (double(k) > asymptotic + 1.0) {
        throw std::logic_error(
            "round count exceeds the asymptotic bound with unit slack");
    }
    return k;
}

} // namespace qprep
