#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "qprep/statevector.hpp"

namespace qprep {

/// A bijection on the joint basis labels of a list of registers, applied as
/// an exact permutation of amplitudes. The map is tabulated and verified to
/// be a bijection at construction; application introduces no floating-point
/// drift.
///
/// Joint labels pack the listed registers in order, first register in the
/// low bits.
class BasisPermutation {
  public:
    BasisPermutation(const RegisterLayout& layout,
                     std::vector<std::string> registers,
                     const std::function<std::uint64_t(std::uint64_t)>& map);

    Statevector apply(Statevector state) const;
    BasisPermutation inverse() const;

    int joint_bits() const { return joint_bits_; }
    std::uint64_t map_label(std::uint64_t joint) const { return fwd_[joint]; }

  private:
    BasisPermutation() = default;

    RegisterLayout layout_;
    std::vector<std::size_t> reg_idx_;
    std::vector<int> joint_offsets_;
    int joint_bits_ = 0;
    std::vector<std::uint64_t> fwd_;
};

/// Convenience wrapper matching the rest of the free-function API.
Statevector apply_basis_permutation(Statevector state,
                                    const BasisPermutation& perm);

} // namespace qprep
