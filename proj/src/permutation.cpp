#include "qprep/permutation.hpp"

#include <stdexcept>
#include <string>

namespace qprep {

namespace {
constexpr int kMaxJointBits = 24;
}

BasisPermutation::BasisPermutation(
    const RegisterLayout& layout, std::vector<std::string> registers,
    const std::function<std::uint64_t(std::uint64_t)>& map)
    : layout_(layout) {
    if (registers.empty()) {
        throw std::invalid_argument("permutation needs at least one register");
    }
    for (const std::string& name : registers) {
        const std::size_t idx = layout_.index_of(name);
        reg_idx_.push_back(idx);
        joint_offsets_.push_back(joint_bits_);
        joint_bits_ += layout_.reg(idx).width;
    }
    if (joint_bits_ > kMaxJointBits) {
        throw std::invalid_argument("joint label space too large to tabulate");
    }

    const std::uint64_t space = std::uint64_t{1} << joint_bits_;
    fwd_.resize(space);
    std::vector<bool> seen(space, false);
    for (std::uint64_t x = 0; x < space; ++x) {
        const std::uint64_t y = map(x);
        if (y >= space || seen[y]) {
            throw std::invalid_argument(
                "map is not a bijection on the joint label space (at input " +
                std::to_string(x) + ")");
        }
        seen[y] = true;
        fwd_[x] = y;
    }
}

Statevector BasisPermutation::apply(Statevector state) const {
    if (!(state.layout() == layout_)) {
        throw std::invalid_argument("permutation applied to a different layout");
    }
    const auto in = state.amplitudes();
    std::vector<cplx> out(in.size(), cplx{0.0, 0.0});
    const std::size_t k = reg_idx_.size();
    for (std::uint64_t g = 0; g < in.size(); ++g) {
        std::uint64_t joint = 0;
        for (std::size_t r = 0; r < k; ++r) {
            joint |= layout_.extract(g, reg_idx_[r]) << joint_offsets_[r];
        }
        const std::uint64_t mapped = fwd_[joint];
        std::uint64_t g2 = g;
        for (std::size_t r = 0; r < k; ++r) {
            const int w = layout_.reg(reg_idx_[r]).width;
            const std::uint64_t label =
                (mapped >> joint_offsets_[r]) & ((std::uint64_t{1} << w) - 1);
            g2 = layout_.insert(g2, reg_idx_[r], label);
        }
        out[g2] = in[g];
    }
    return Statevector(layout_, std::move(out));
}

BasisPermutation BasisPermutation::inverse() const {
    BasisPermutation inv;
    inv.layout_ = layout_;
    inv.reg_idx_ = reg_idx_;
    inv.joint_offsets_ = joint_offsets_;
    inv.joint_bits_ = joint_bits_;
    inv.fwd_.resize(fwd_.size());
    for (std::uint64_t x = 0; x < fwd_.size(); ++x) {
        inv.fwd_[fwd_[x]] = x;
    }
    return inv;
}

Statevector apply_basis_permutation(Statevector state,
                                    const BasisPermutation& perm) {
    return perm.apply(std::move(state));
}

} // namespace qprep
