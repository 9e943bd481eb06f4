#include "qprep/block_state.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace qprep {

BlockState::BlockState(int index_bits, RegisterLayout work_layout)
    : l_(index_bits), work_(std::move(work_layout)) {
    if (l_ < 1 || l_ > 20) {
        throw std::invalid_argument("index width out of range");
    }
    const std::uint64_t blocks = std::uint64_t{1} << l_;
    b_label_.assign(blocks, 0);
    blocks_.assign(blocks, std::vector<cplx>(work_.dim(), cplx{0.0, 0.0}));
    blocks_[0][0] = cplx{1.0, 0.0};
}

double BlockState::norm() const {
    double s = 0.0;
    for (const auto& phi : blocks_) {
        for (const cplx& a : phi) {
            s += std::norm(a);
        }
    }
    return std::sqrt(s);
}

void BlockState::hadamard_index(int bits) {
    if (bits < 0 || bits > l_) {
        throw std::invalid_argument("hadamard_index bit count out of range");
    }
    const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
    for (int t = 0; t < bits; ++t) {
        const std::uint64_t bit = std::uint64_t{1} << t;
        for (std::uint64_t i = 0; i < blocks_.size(); ++i) {
            if (i & bit) {
                continue;
            }
            if (b_label_[i] != b_label_[i | bit]) {
                throw std::runtime_error(
                    "hadamard_index: mixed blocks carry different data labels");
            }
            auto& lo = blocks_[i];
            auto& hi = blocks_[i | bit];
            for (std::uint64_t w = 0; w < lo.size(); ++w) {
                const cplx a0 = lo[w];
                const cplx a1 = hi[w];
                lo[w] = (a0 + a1) * inv_sqrt2;
                hi[w] = (a0 - a1) * inv_sqrt2;
            }
        }
    }
}

void BlockState::hadamard_work(std::string_view reg, int low_bits) {
    const std::size_t idx = work_.index_of(reg);
    if (low_bits < 0 || low_bits > work_.reg(idx).width) {
        throw std::invalid_argument("low_bits out of range");
    }
    const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
    for (auto& phi : blocks_) {
        for (int b = 0; b < low_bits; ++b) {
            const std::uint64_t bit = std::uint64_t{1} << (work_.offset(idx) + b);
            for (std::uint64_t w = 0; w < phi.size(); ++w) {
                if (w & bit) {
                    continue;
                }
                const cplx a0 = phi[w];
                const cplx a1 = phi[w | bit];
                phi[w] = (a0 + a1) * inv_sqrt2;
                phi[w | bit] = (a0 - a1) * inv_sqrt2;
            }
        }
    }
}

void BlockState::ry_work(std::string_view reg, double theta) {
    const std::size_t idx = work_.index_of(reg);
    if (work_.reg(idx).width != 1) {
        throw std::invalid_argument("ry_work expects a 1-qubit register");
    }
    const double c = std::cos(theta / 2.0);
    const double s = std::sin(theta / 2.0);
    const std::uint64_t bit = std::uint64_t{1} << work_.offset(idx);
    for (auto& phi : blocks_) {
        for (std::uint64_t w = 0; w < phi.size(); ++w) {
            if (w & bit) {
                continue;
            }
            const cplx a0 = phi[w];
            const cplx a1 = phi[w | bit];
            phi[w] = c * a0 - s * a1;
            phi[w | bit] = s * a0 + c * a1;
        }
    }
}

void BlockState::permute_work(
    const std::function<std::uint64_t(std::uint64_t, std::uint64_t,
                                      std::uint64_t)>& map) {
    const std::uint64_t dim = work_.dim();
    std::vector<cplx> scratch(dim);
    std::vector<bool> seen(dim);
    for (std::uint64_t i = 0; i < blocks_.size(); ++i) {
        std::fill(scratch.begin(), scratch.end(), cplx{0.0, 0.0});
        std::fill(seen.begin(), seen.end(), false);
        for (std::uint64_t w = 0; w < dim; ++w) {
            const std::uint64_t y = map(i, b_label_[i], w);
            if (y >= dim || seen[y]) {
                throw std::invalid_argument(
                    "permute_work: map is not a bijection for block " +
                    std::to_string(i));
            }
            seen[y] = true;
            scratch[y] = blocks_[i][w];
        }
        blocks_[i] = scratch;
    }
}

void BlockState::xor_data_labels(std::span<const std::uint64_t> xor_values) {
    for (std::uint64_t i = 0; i < b_label_.size() && i < xor_values.size(); ++i) {
        b_label_[i] ^= xor_values[i];
    }
}

std::pair<std::uint64_t, std::uint64_t> BlockState::condition_mask(
    const std::map<std::string, std::uint64_t>& conditions) const {
    if (conditions.empty()) {
        throw std::invalid_argument("conditions must not be empty");
    }
    std::uint64_t mask = 0;
    std::uint64_t want = 0;
    for (const auto& [name, label] : conditions) {
        const std::size_t idx = work_.index_of(name);
        const Register& r = work_.reg(idx);
        if (label >> r.width) {
            throw std::invalid_argument("condition label out of range for " +
                                        name);
        }
        mask |= ((std::uint64_t{1} << r.width) - 1) << work_.offset(idx);
        want |= label << work_.offset(idx);
    }
    return {mask, want};
}

double BlockState::good_probability(
    const std::map<std::string, std::uint64_t>& conditions) const {
    const auto [mask, want] = condition_mask(conditions);
    double p = 0.0;
    for (const auto& phi : blocks_) {
        for (std::uint64_t w = 0; w < phi.size(); ++w) {
            if ((w & mask) == want) {
                p += std::norm(phi[w]);
            }
        }
    }
    return p;
}

void BlockState::flip_sign_on(
    const std::map<std::string, std::uint64_t>& conditions) {
    const auto [mask, want] = condition_mask(conditions);
    for (auto& phi : blocks_) {
        for (std::uint64_t w = 0; w < phi.size(); ++w) {
            if ((w & mask) == want) {
                phi[w] = -phi[w];
            }
        }
    }
}

cplx BlockState::inner(const BlockState& other) const {
    if (l_ != other.l_ || !(work_ == other.work_)) {
        throw std::invalid_argument("block states have different shapes");
    }
    cplx s{0.0, 0.0};
    for (std::uint64_t i = 0; i < blocks_.size(); ++i) {
        if (b_label_[i] != other.b_label_[i]) {
            throw std::invalid_argument(
                "block states carry different data labels");
        }
        const auto& a = blocks_[i];
        const auto& b = other.blocks_[i];
        for (std::uint64_t w = 0; w < a.size(); ++w) {
            s += std::conj(a[w]) * b[w];
        }
    }
    return s;
}

void BlockState::reflect_about(const BlockState& psi) {
    const cplx two_gamma = 2.0 * psi.inner(*this);
    for (std::uint64_t i = 0; i < blocks_.size(); ++i) {
        auto& phi = blocks_[i];
        const auto& ref = psi.blocks_[i];
        for (std::uint64_t w = 0; w < phi.size(); ++w) {
            phi[w] = two_gamma * ref[w] - phi[w];
        }
    }
}

void BlockState::grover_iteration(
    const BlockState& psi, const std::map<std::string, std::uint64_t>& good) {
    flip_sign_on(good);
    reflect_about(psi);
}

std::pair<double, std::vector<cplx>> BlockState::post_select_all_work(
    const std::map<std::string, std::uint64_t>& conditions) const {
    const auto [mask, want] = condition_mask(conditions);
    if (mask != work_.dim() - 1) {
        throw std::invalid_argument(
            "post_select_all_work: conditions must fix every work register");
    }
    double p = 0.0;
    std::vector<cplx> amps(blocks_.size());
    for (std::uint64_t i = 0; i < blocks_.size(); ++i) {
        amps[i] = blocks_[i][want];
        p += std::norm(amps[i]);
    }
    if (p <= 0.0) {
        throw std::runtime_error("zero-probability post-selection");
    }
    const double scale = 1.0 / std::sqrt(p);
    for (cplx& a : amps) {
        a *= scale;
    }
    return {p, std::move(amps)};
}

} // namespace qprep
