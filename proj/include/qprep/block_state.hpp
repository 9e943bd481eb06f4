#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <string>
#include <vector>

#include "qprep/statevector.hpp"

namespace qprep {

/// Block-structured backend. The preparation circuits only ever entangle
/// the index register with the work registers through the classically known
/// data value, so the state always has the form
///
///     sum_i |i>_I |b_i>_B (x) phi_i(work)
///
/// with b_i a tracked classical label per block and phi_i dense over the
/// work registers only. Cost is 2^l blocks of 2^{work qubits} amplitudes
/// instead of one vector over the full layout; registers whose value is a
/// function of i (B, and the g/h registers of the general scheme) are
/// carried implicitly.
class BlockState {
  public:
    BlockState(int index_bits, RegisterLayout work_layout);

    int index_bits() const { return l_; }
    std::uint64_t block_count() const { return blocks_.size(); }
    const RegisterLayout& work() const { return work_; }
    std::uint64_t work_dim() const { return work_.dim(); }

    std::uint64_t data_label(std::uint64_t i) const { return b_label_[i]; }
    const std::vector<cplx>& block(std::uint64_t i) const { return blocks_[i]; }

    double norm() const;

    /// Hadamard on each of the low `bits` qubits of the index register.
    /// Mixes blocks; their data labels must agree pairwise.
    void hadamard_index(int bits);

    /// Hadamard on the low `low_bits` qubits of a work register, per block.
    void hadamard_work(std::string_view reg, int low_bits);

    /// R_y(theta) on a 1-qubit work register, per block.
    void ry_work(std::string_view reg, double theta);

    /// Applies a basis permutation on work labels that may depend on the
    /// block index and its data label. Verified to be a bijection per block.
    void permute_work(
        const std::function<std::uint64_t(std::uint64_t i, std::uint64_t b,
                                          std::uint64_t work_label)>& map);

    /// XOR the data label of block i with xor_values[i] (identity beyond the
    /// table). Realizes the oracle load/unload.
    void xor_data_labels(std::span<const std::uint64_t> xor_values);

    double good_probability(
        const std::map<std::string, std::uint64_t>& conditions) const;

    void flip_sign_on(const std::map<std::string, std::uint64_t>& conditions);

    cplx inner(const BlockState& other) const;

    /// this <- 2 <psi|this> psi - this.
    void reflect_about(const BlockState& psi);

    /// One amplification round: sign flip on the good labels, then
    /// reflection about psi.
    void grover_iteration(const BlockState& psi,
                          const std::map<std::string, std::uint64_t>& good);

    /// Post-selects on conditions that fix every work register; returns the
    /// probability and the renormalized per-block scalar amplitudes.
    std::pair<double, std::vector<cplx>> post_select_all_work(
        const std::map<std::string, std::uint64_t>& conditions) const;

  private:
    std::pair<std::uint64_t, std::uint64_t>
    condition_mask(const std::map<std::string, std::uint64_t>& conditions) const;

    int l_;
    RegisterLayout work_;
    std::vector<std::uint64_t> b_label_;
    std::vector<std::vector<cplx>> blocks_;
};

} // namespace qprep
