#pragma once

#include <complex>
#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace qprep {

using cplx = std::complex<double>;

// Tolerances used across the library. All operations are permutations,
// Hadamard layers and single-qubit rotations, so error growth is benign.
inline constexpr double kUnitaryTol = 1e-12;
inline constexpr double kReductionTol = 1e-9;

// Qubit budget for dense simulation. Default 26, override with the
// QPREP_MAX_QUBITS environment variable.
int qubit_budget();

/// Interprets a register's basis labels as reals: value = bits * 2^{-point}.
struct FixedPointFormat {
    int width = 0;
    int point = 0; // binary point position counted from the right; 0 = integer

    double value(std::uint64_t bits) const;

    bool operator==(const FixedPointFormat&) const = default;
};

struct Register {
    std::string name;
    int width = 0;
    FixedPointFormat format{};

    bool operator==(const Register&) const = default;
};

/// Ordered named registers with bit widths and fixed-point formats.
/// The first listed register occupies the least-significant bits of the
/// global amplitude index.
class RegisterLayout {
  public:
    RegisterLayout() = default; // empty layout; useful as a placeholder
    explicit RegisterLayout(std::vector<Register> registers);

    int total_qubits() const { return total_qubits_; }
    std::uint64_t dim() const { return std::uint64_t{1} << total_qubits_; }

    std::size_t register_count() const { return regs_.size(); }
    const Register& reg(std::size_t idx) const { return regs_[idx]; }
    const Register& reg(std::string_view name) const;
    bool has(std::string_view name) const;
    std::size_t index_of(std::string_view name) const; // throws on unknown name
    int offset(std::size_t idx) const { return offsets_[idx]; }

    std::uint64_t extract(std::uint64_t global, std::size_t idx) const;
    std::uint64_t insert(std::uint64_t global, std::size_t idx,
                         std::uint64_t label) const;

    bool operator==(const RegisterLayout&) const;

  private:
    std::vector<Register> regs_;
    std::vector<int> offsets_;
    int total_qubits_ = 0;
};

/// Dense complex amplitude vector over a named multi-register layout.
/// Operations return new states; callers never observe mutation.
class Statevector {
  public:
    Statevector(RegisterLayout layout, std::vector<cplx> amplitudes);

    const RegisterLayout& layout() const { return layout_; }
    std::uint64_t dim() const { return amps_.size(); }
    cplx amp(std::uint64_t global) const { return amps_[global]; }
    std::span<const cplx> amplitudes() const { return amps_; }
    std::span<cplx> mutable_amplitudes() { return amps_; }

    double norm() const;

  private:
    RegisterLayout layout_;
    std::vector<cplx> amps_;
};

/// Computational basis state with amplitude 1 on the assigned labels.
/// Unassigned registers default to 0.
Statevector init_basis(const RegisterLayout& layout,
                       const std::map<std::string, std::uint64_t>& assignments);

/// Hadamard applied independently to each of the low `low_bits` qubits of
/// the register.
Statevector apply_hadamard_layer(Statevector state, std::string_view reg,
                                 int low_bits);

/// R_y(theta) on a single qubit: |0> -> cos(theta/2)|0> + sin(theta/2)|1>.
Statevector apply_ry(Statevector state, int qubit, double theta);

/// Probability mass on the conditioned subspace and the renormalized
/// post-selected state. Throws on zero probability.
std::pair<Statevector, double>
project_and_renormalize(const Statevector& state,
                        const std::map<std::string, std::uint64_t>& conditions);

/// Probability mass on the conditioned subspace without projecting.
double condition_probability(const Statevector& state,
                             const std::map<std::string, std::uint64_t>& conditions);

/// |<reference|reduced state>|^2 on the named register, both normalized.
/// Throws when the register subsystem is entangled with the rest beyond
/// kReductionTol.
double fidelity(const Statevector& state, std::string_view reg,
                std::span<const cplx> reference);

} // namespace qprep
