#include "qprep/amplification.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace qprep {

namespace {

std::pair<std::uint64_t, std::uint64_t>
good_mask_value(const RegisterLayout& layout, const GoodSubspace& good) {
    if (good.conditions.empty()) {
        throw std::invalid_argument("good subspace needs at least one condition");
    }
    std::uint64_t mask = 0;
    std::uint64_t want = 0;
    for (const auto& [name, label] : good.conditions) {
        const std::size_t idx = layout.index_of(name);
        const Register& r = layout.reg(idx);
        if (label >> r.width) {
            throw std::invalid_argument("good-subspace label out of range for " +
                                        name);
        }
        mask |= ((std::uint64_t{1} << r.width) - 1) << layout.offset(idx);
        want |= label << layout.offset(idx);
    }
    return {mask, want};
}

} // namespace

Statevector PreparationProgram::run(const RegisterLayout& layout) const {
    Statevector s = init_basis(layout, {});
    for (const Step& step : steps_) {
        s = step(std::move(s));
    }
    return s;
}

double success_probability(const Statevector& state, const GoodSubspace& good) {
    const auto [mask, want] = good_mask_value(state.layout(), good);
    double p = 0.0;
    const auto amps = state.amplitudes();
    for (std::uint64_t g = 0; g < amps.size(); ++g) {
        if ((g & mask) == want) {
            p += std::norm(amps[g]);
        }
    }
    return p;
}

int optimal_rounds(double p) {
    if (!(p > 0.0) || p > 1.0) {
        throw std::invalid_argument("success probability must lie in (0, 1]");
    }
    const double theta = std::asin(std::min(1.0, std::sqrt(p)));
    const long k = std::lround(std::numbers::pi / (4.0 * theta) - 0.5);
    return static_cast<int>(std::max(0L, k));
}

Statevector grover_iteration(Statevector state, const Statevector& psi,
                             const GoodSubspace& good) {
    if (!(state.layout() == psi.layout())) {
        throw std::invalid_argument("state and reference layouts differ");
    }
    const auto [mask, want] = good_mask_value(state.layout(), good);
    auto amps = state.mutable_amplitudes();
    const auto ref = psi.amplitudes();

    cplx overlap{0.0, 0.0};
    for (std::uint64_t g = 0; g < amps.size(); ++g) {
        if ((g & mask) == want) {
            amps[g] = -amps[g];
        }
        overlap += std::conj(ref[g]) * amps[g];
    }
    const cplx two_gamma = 2.0 * overlap;
    for (std::uint64_t g = 0; g < amps.size(); ++g) {
        amps[g] = two_gamma * ref[g] - amps[g];
    }
    return state;
}

Statevector amplify(Statevector state, const PreparationProgram& program,
                    const GoodSubspace& good, int rounds) {
    if (rounds < 0) {
        throw std::invalid_argument("rounds must be >= 0");
    }
    const Statevector psi = program.run(state.layout());
    const auto [mask, want] = good_mask_value(state.layout(), good);

    // The state must lie in the plane spanned by the good and bad components
    // of |psi>; anything else is a state/program mismatch.
    {
        const auto s = state.amplitudes();
        const auto r = psi.amplitudes();
        double good_n2 = 0.0;
        double bad_n2 = 0.0;
        cplx good_ov{0.0, 0.0};
        cplx bad_ov{0.0, 0.0};
        for (std::uint64_t g = 0; g < s.size(); ++g) {
            if ((g & mask) == want) {
                good_n2 += std::norm(r[g]);
                good_ov += std::conj(r[g]) * s[g];
            } else {
                bad_n2 += std::norm(r[g]);
                bad_ov += std::conj(r[g]) * s[g];
            }
        }
        double residual2 = 0.0;
        for (std::uint64_t g = 0; g < s.size(); ++g) {
            const bool is_good = (g & mask) == want;
            cplx proj{0.0, 0.0};
            if (is_good && good_n2 > 0.0) {
                proj = good_ov / good_n2 * r[g];
            } else if (!is_good && bad_n2 > 0.0) {
                proj = bad_ov / bad_n2 * r[g];
            }
            residual2 += std::norm(s[g] - proj);
        }
        if (residual2 > kReductionTol * kReductionTol) {
            throw std::runtime_error(
                "amplify: state does not match the preparation program");
        }
    }

    for (int k = 0; k < rounds; ++k) {
        state = grover_iteration(std::move(state), psi, good);
    }
    return state;
}

} // namespace qprep
