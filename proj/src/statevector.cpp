#include "qprep/statevector.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <numeric>
#include <set>
#include <stdexcept>
#include <string>

namespace qprep {

namespace {

constexpr int kDefaultQubitBudget = 26;

std::pair<std::uint64_t, std::uint64_t>
condition_mask_value(const RegisterLayout& layout,
                     const std::map<std::string, std::uint64_t>& conditions) {
    std::uint64_t mask = 0;
    std::uint64_t want = 0;
    for (const auto& [name, label] : conditions) {
        const std::size_t idx = layout.index_of(name);
        const Register& r = layout.reg(idx);
        if (label >> r.width) {
            throw std::invalid_argument("condition label " + std::to_string(label) +
                                        " out of range for register " + name);
        }
        const std::uint64_t reg_mask = ((std::uint64_t{1} << r.width) - 1)
                                       << layout.offset(idx);
        mask |= reg_mask;
        want |= label << layout.offset(idx);
    }
    return {mask, want};
}

} // namespace

int qubit_budget() {
    if (const char* env = std::getenv("QPREP_MAX_QUBITS")) {
        const int v = std::atoi(env);
        if (v >= 1 && v <= 34) {
            return v;
        }
        throw std::invalid_argument("QPREP_MAX_QUBITS must be in [1, 34]");
    }
    return kDefaultQubitBudget;
}

double FixedPointFormat::value(std::uint64_t bits) const {
    return std::ldexp(static_cast<double>(bits), -point);
}

RegisterLayout::RegisterLayout(std::vector<Register> registers)
    : regs_(std::move(registers)) {
    if (regs_.empty()) {
        throw std::invalid_argument("layout needs at least one register");
    }
    std::set<std::string> names;
    for (const Register& r : regs_) {
        if (r.width < 1) {
            throw std::invalid_argument("register width must be >= 1: " + r.name);
        }
        if (!names.insert(r.name).second) {
            throw std::invalid_argument("duplicate register name: " + r.name);
        }
        if (r.format.point < 0 || r.format.point > r.format.width) {
            throw std::invalid_argument("binary point out of range for " + r.name);
        }
        offsets_.push_back(total_qubits_);
        total_qubits_ += r.width;
    }
    if (total_qubits_ > qubit_budget()) {
        throw std::invalid_argument("layout needs " + std::to_string(total_qubits_) +
                                    " qubits, exceeding the budget of " +
                                    std::to_string(qubit_budget()));
    }
}

const Register& RegisterLayout::reg(std::string_view name) const {
    return regs_[index_of(name)];
}

bool RegisterLayout::has(std::string_view name) const {
    return std::any_of(regs_.begin(), regs_.end(),
                       [&](const Register& r) { return r.name == name; });
}

std::size_t RegisterLayout::index_of(std::string_view name) const {
    for (std::size_t i = 0; i < regs_.size(); ++i) {
        if (regs_[i].name == name) {
            return i;
        }
    }
    throw std::invalid_argument("unknown register: " + std::string(name));
}

std::uint64_t RegisterLayout::extract(std::uint64_t global,
                                      std::size_t idx) const {
    const Register& r = regs_[idx];
    return (global >> offsets_[idx]) & ((std::uint64_t{1} << r.width) - 1);
}

std::uint64_t RegisterLayout::insert(std::uint64_t global, std::size_t idx,
                                     std::uint64_t label) const {
    const Register& r = regs_[idx];
    const std::uint64_t mask = ((std::uint64_t{1} << r.width) - 1)
                               << offsets_[idx];
    return (global & ~mask) | (label << offsets_[idx]);
}

bool RegisterLayout::operator==(const RegisterLayout& other) const {
    return regs_ == other.regs_;
}

Statevector::Statevector(RegisterLayout layout, std::vector<cplx> amplitudes)
    : layout_(std::move(layout)), amps_(std::move(amplitudes)) {
    if (amps_.size() != layout_.dim()) {
        throw std::invalid_argument("amplitude vector size does not match layout");
    }
}

double Statevector::norm() const {
    double s = 0.0;
    for (const cplx& a : amps_) {
        s += std::norm(a);
    }
    return std::sqrt(s);
}

Statevector init_basis(const RegisterLayout& layout,
                       const std::map<std::string, std::uint64_t>& assignments) {
    std::uint64_t index = 0;
    for (const auto& [name, label] : assignments) {
        const std::size_t idx = layout.index_of(name);
        if (label >> layout.reg(idx).width) {
            throw std::invalid_argument("assignment out of range for register " +
                                        name);
        }
        index = layout.insert(index, idx, label);
    }
    std::vector<cplx> amps(layout.dim(), cplx{0.0, 0.0});
    amps[index] = cplx{1.0, 0.0};
    return Statevector(layout, std::move(amps));
}

Statevector apply_hadamard_layer(Statevector state, std::string_view reg,
                                 int low_bits) {
    const RegisterLayout& layout = state.layout();
    const std::size_t idx = layout.index_of(reg);
    if (low_bits < 0 || low_bits > layout.reg(idx).width) {
        throw std::invalid_argument("low_bits out of range for register " +
                                    std::string(reg));
    }
    const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
    auto amps = state.mutable_amplitudes();
    const std::uint64_t dim = amps.size();
    for (int b = 0; b < low_bits; ++b) {
        const std::uint64_t bit = std::uint64_t{1} << (layout.offset(idx) + b);
        for (std::uint64_t g = 0; g < dim; ++g) {
            if (g & bit) {
                continue;
            }
            const cplx a0 = amps[g];
            const cplx a1 = amps[g | bit];
            amps[g] = (a0 + a1) * inv_sqrt2;
            amps[g | bit] = (a0 - a1) * inv_sqrt2;
        }
    }
    return state;
}

Statevector apply_ry(Statevector state, int qubit, double theta) {
    if (qubit < 0 || qubit >= state.layout().total_qubits()) {
        throw std::invalid_argument("qubit index out of range");
    }
    const double c = std::cos(theta / 2.0);
    const double s = std::sin(theta / 2.0);
    const std::uint64_t bit = std::uint64_t{1} << qubit;
    auto amps = state.mutable_amplitudes();
    for (std::uint64_t g = 0; g < amps.size(); ++g) {
        if (g & bit) {
            continue;
        }
        const cplx a0 = amps[g];
        const cplx a1 = amps[g | bit];
        amps[g] = c * a0 - s * a1;
        amps[g | bit] = s * a0 + c * a1;
    }
    return state;
}

double condition_probability(const Statevector& state,
                             const std::map<std::string, std::uint64_t>& conditions) {
    const auto [mask, want] = condition_mask_value(state.layout(), conditions);
    double p = 0.0;
    const auto amps = state.amplitudes();
    for (std::uint64_t g = 0; g < amps.size(); ++g) {
        if ((g & mask) == want) {
            p += std::norm(amps[g]);
        }
    }
    return p;
}

std::pair<Statevector, double>
project_and_renormalize(const Statevector& state,
                        const std::map<std::string, std::uint64_t>& conditions) {
    const auto [mask, want] = condition_mask_value(state.layout(), conditions);
    const auto amps = state.amplitudes();
    double p = 0.0;
    for (std::uint64_t g = 0; g < amps.size(); ++g) {
        if ((g & mask) == want) {
            p += std::norm(amps[g]);
        }
    }
    if (p <= 0.0) {
        throw std::runtime_error("zero-probability post-selection");
    }
    const double scale = 1.0 / std::sqrt(p);
    std::vector<cplx> out(amps.size(), cplx{0.0, 0.0});
    for (std::uint64_t g = 0; g < amps.size(); ++g) {
        if ((g & mask) == want) {
            out[g] = amps[g] * scale;
        }
    }
    return {Statevector(state.layout(), std::move(out)), p};
}

double fidelity(const Statevector& state, std::string_view reg,
                std::span<const cplx> reference) {
    const RegisterLayout& layout = state.layout();
    const std::size_t idx = layout.index_of(reg);
    const int w = layout.reg(idx).width;
    const std::uint64_t sub_dim = std::uint64_t{1} << w;
    if (reference.size() > sub_dim) {
        throw std::invalid_argument("reference longer than the register subspace");
    }
    if (w > 12) {
        throw std::invalid_argument("register too wide for reduced-state fidelity");
    }

    const int off = layout.offset(idx);
    const int high_bits = layout.total_qubits() - off - w;
    const std::uint64_t low_dim = std::uint64_t{1} << off;
    const std::uint64_t high_dim = std::uint64_t{1} << high_bits;

    // Reduced density matrix of the register subsystem.
    std::vector<cplx> rho(sub_dim * sub_dim, cplx{0.0, 0.0});
    std::vector<cplx> col(sub_dim);
    const auto amps = state.amplitudes();
    for (std::uint64_t hi = 0; hi < high_dim; ++hi) {
        for (std::uint64_t lo = 0; lo < low_dim; ++lo) {
            const std::uint64_t base = lo | (hi << (off + w));
            for (std::uint64_t x = 0; x < sub_dim; ++x) {
                col[x] = amps[base | (x << off)];
            }
            for (std::uint64_t x = 0; x < sub_dim; ++x) {
                if (col[x] == cplx{0.0, 0.0}) {
                    continue;
                }
                for (std::uint64_t y = 0; y < sub_dim; ++y) {
                    rho[x * sub_dim + y] += col[x] * std::conj(col[y]);
                }
            }
        }
    }

    double trace = 0.0;
    double purity = 0.0;
    for (std::uint64_t x = 0; x < sub_dim; ++x) {
        trace += rho[x * sub_dim + x].real();
        for (std::uint64_t y = 0; y < sub_dim; ++y) {
            purity += std::norm(rho[x * sub_dim + y]);
        }
    }
    if (trace <= 0.0) {
        throw std::runtime_error("state has no mass; cannot reduce");
    }
    purity /= trace * trace;
    if (purity < 1.0 - kReductionTol) {
        throw std::runtime_error("register " + std::string(reg) +
                                 " is entangled with the rest (purity " +
                                 std::to_string(purity) + ")");
    }

    double ref_norm2 = 0.0;
    for (const cplx& r : reference) {
        ref_norm2 += std::norm(r);
    }
    if (ref_norm2 <= 0.0) {
        throw std::invalid_argument("reference vector has zero norm");
    }

    cplx quad{0.0, 0.0};
    for (std::uint64_t x = 0; x < reference.size(); ++x) {
        for (std::uint64_t y = 0; y < reference.size(); ++y) {
            quad += std::conj(reference[x]) * rho[x * sub_dim + y] * reference[y];
        }
    }
    const double f = quad.real() / (trace * ref_norm2);
    return std::clamp(f, 0.0, 1.0);
}

} // namespace qprep
