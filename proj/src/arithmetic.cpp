#include "qprep/arithmetic.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>

namespace qprep {

namespace {

// Mass tolerance for pre-condition checks on amplitude support. Residuals
// left by exact-probability amplification rounds sit near 1e-32 and must
// pass; genuine misuse carries O(1) mass.
constexpr double kSupportTol = 1e-18;

double violating_mass(const Statevector& state,
                      const std::function<bool(std::uint64_t)>& violates) {
    double mass = 0.0;
    const auto amps = state.amplitudes();
    for (std::uint64_t g = 0; g < amps.size(); ++g) {
        if (violates(g)) {
            mass += std::norm(amps[g]);
        }
    }
    return mass;
}

void require_support(const Statevector& state,
                     const std::function<bool(std::uint64_t)>& violates,
                     const char* what) {
    if (violating_mass(state, violates) > kSupportTol) {
        throw std::invalid_argument(what);
    }
}

} // namespace

OracleData::OracleData(std::vector<std::uint64_t> values, int bit_width,
                       bool allow_zero)
    : alphas(std::move(values)), n(bit_width) {
    if (alphas.empty()) {
        throw std::invalid_argument("oracle data must hold at least one value");
    }
    if (n < 1 || n > 32) {
        throw std::invalid_argument("data bit width out of range");
    }
    for (std::uint64_t a : alphas) {
        if (a == 0 && !allow_zero) {
            throw std::invalid_argument(
                "alpha = 0 is forbidden: reciprocal undefined and Mult "
                "non-injective");
        }
        if (a >> n) {
            throw std::invalid_argument("alpha " + std::to_string(a) +
                                        " does not fit in " + std::to_string(n) +
                                        " bits");
        }
    }
}

int OracleData::index_width() const {
    const std::uint64_t count = d();
    if (count <= 2) {
        return 1;
    }
    return std::bit_width(count - 1);
}

bool OracleData::d_is_power_of_two() const { return std::has_single_bit(d()); }

std::uint64_t OracleData::min_alpha() const {
    return *std::min_element(alphas.begin(), alphas.end());
}

ScalarConstant ScalarConstant::constant(std::uint64_t c, const OracleData& data) {
    if (c == 0) {
        throw std::invalid_argument("C = 0 is forbidden");
    }
    if (c > data.min_alpha()) {
        throw std::invalid_argument("C must not exceed the minimum alpha");
    }
    return ScalarConstant{{c}, false};
}

ScalarConstant ScalarConstant::per_index_betas(std::vector<std::uint64_t> betas,
                                               const OracleData& data) {
    if (betas.size() != data.d()) {
        throw std::invalid_argument("beta vector length must equal d");
    }
    for (std::size_t i = 0; i < betas.size(); ++i) {
        if (betas[i] == 0) {
            throw std::invalid_argument("beta = 0 is forbidden");
        }
        if (betas[i] > data.alphas[i]) {
            throw std::invalid_argument("beta_i must not exceed alpha_i");
        }
    }
    return ScalarConstant{std::move(betas), true};
}

int FunctionTablePair::n_bits() const {
    return std::bit_width(g_table.size()) - 1;
}

int FunctionTablePair::m_bits() const {
    return std::bit_width(hinv_table.size()) - 1;
}

bool FunctionTablePair::predicate(std::uint64_t g_value,
                                  std::uint64_t h_value) const {
    using u128 = unsigned __int128;
    if (mode == PredicateMode::kLessThan) {
        // h * 2^{-ph} < g * 2^{-pg}  <=>  h << pg < g << ph
        return (u128(h_value) << g_format.point) <
               (u128(g_value) << h_format.point);
    }
    // g * h * 2^{-(pg+ph)} < 1  <=>  g * h < 2^{pg+ph}
    return u128(g_value) * u128(h_value) <
           (u128(1) << (g_format.point + h_format.point));
}

FunctionTablePair FunctionTablePair::validated(
    std::vector<std::uint64_t> g_table, FixedPointFormat g_format,
    std::vector<std::uint64_t> hinv_table, FixedPointFormat h_format,
    PredicateMode mode, const std::function<double(std::uint64_t)>& f) {
    if (!std::has_single_bit(g_table.size()) ||
        !std::has_single_bit(hinv_table.size())) {
        throw std::invalid_argument("table sizes must be powers of two");
    }
    for (std::uint64_t v : g_table) {
        if (g_format.width < 64 && (v >> g_format.width)) {
            throw std::invalid_argument("g table value overflows its format");
        }
    }
    for (std::uint64_t v : hinv_table) {
        if (h_format.width < 64 && (v >> h_format.width)) {
            throw std::invalid_argument("h table value overflows its format");
        }
    }

    FunctionTablePair tables{std::move(g_table), g_format,
                             std::move(hinv_table), h_format, mode, {}};
    const int m = tables.m_bits();
    tables.f_values.resize(tables.g_table.size());
    for (std::uint64_t a = 0; a < tables.g_table.size(); ++a) {
        const double fa = f(a);
        if (!(fa >= 0.0) || fa > 1.0) {
            throw std::invalid_argument("f values must lie in [0, 1]; scale first");
        }
        tables.f_values[a] = fa;
        for (std::uint64_t j = 0; j < tables.hinv_table.size(); ++j) {
            const bool pred =
                tables.predicate(tables.g_table[a], tables.hinv_table[j]);
            const bool want = std::ldexp(static_cast<double>(j), -m) < fa;
            if (pred != want) {
                throw std::invalid_argument(
                    "table contract violated at alpha=" + std::to_string(a) +
                    ", j=" + std::to_string(j) +
                    ": predicate disagrees with j*2^-m < f(alpha)");
            }
        }
    }
    return tables;
}

FunctionTablePair make_inv_sqrt_1p_tables(int n, int m) {
    std::vector<std::uint64_t> g(std::uint64_t{1} << n);
    for (std::uint64_t a = 0; a < g.size(); ++a) {
        g[a] = 1 + a;
    }
    std::vector<std::uint64_t> h(std::uint64_t{1} << m);
    for (std::uint64_t j = 0; j < h.size(); ++j) {
        h[j] = j * j;
    }
    return FunctionTablePair::validated(
        std::move(g), FixedPointFormat{n + 1, 0}, std::move(h),
        FixedPointFormat{2 * m, 2 * m}, PredicateMode::kProductLessThanOne,
        [](std::uint64_t a) { return 1.0 / std::sqrt(1.0 + double(a)); });
}

FunctionTablePair make_linear_tables(int n, int m) {
    std::vector<std::uint64_t> g(std::uint64_t{1} << n);
    std::iota(g.begin(), g.end(), std::uint64_t{0});
    std::vector<std::uint64_t> h(std::uint64_t{1} << m);
    std::iota(h.begin(), h.end(), std::uint64_t{0});
    return FunctionTablePair::validated(
        std::move(g), FixedPointFormat{n, n}, std::move(h),
        FixedPointFormat{m, m}, PredicateMode::kLessThan,
        [n](std::uint64_t a) { return std::ldexp(double(a), -n); });
}

FunctionTablePair make_inverse_reduction_tables(int n, int m) {
    std::vector<std::uint64_t> g(std::uint64_t{1} << n);
    std::iota(g.begin(), g.end(), std::uint64_t{0});
    std::vector<std::uint64_t> h(std::uint64_t{1} << m);
    std::iota(h.begin(), h.end(), std::uint64_t{0});
    return FunctionTablePair::validated(
        std::move(g), FixedPointFormat{n, 0}, std::move(h),
        FixedPointFormat{m, m}, PredicateMode::kProductLessThanOne,
        [](std::uint64_t a) { return a == 0 ? 1.0 : 1.0 / double(a); });
}

FunctionTablePair make_threshold_tables(std::span<const double> f_values,
                                        int m) {
    if (!std::has_single_bit(f_values.size())) {
        throw std::invalid_argument("f table length must be a power of two");
    }
    std::vector<std::uint64_t> g(f_values.size());
    for (std::size_t a = 0; a < f_values.size(); ++a) {
        if (!(f_values[a] >= 0.0) || f_values[a] > 1.0) {
            throw std::invalid_argument("f values must lie in [0, 1]; scale first");
        }
        g[a] = static_cast<std::uint64_t>(
            std::ceil(std::ldexp(f_values[a], m) - 0.0));
    }
    std::vector<std::uint64_t> h(std::uint64_t{1} << m);
    std::iota(h.begin(), h.end(), std::uint64_t{0});
    std::vector<double> f_copy(f_values.begin(), f_values.end());
    return FunctionTablePair::validated(
        std::move(g), FixedPointFormat{m + 1, m}, std::move(h),
        FixedPointFormat{m, m}, PredicateMode::kLessThan,
        [f_copy](std::uint64_t a) { return f_copy[a]; });
}

Statevector oracle_load(Statevector state, const OracleData& data,
                        std::string_view reg_index, std::string_view reg_data,
                        bool strict) {
    const RegisterLayout& layout = state.layout();
    const std::size_t idx_i = layout.index_of(reg_index);
    const std::size_t idx_b = layout.index_of(reg_data);
    const int l = layout.reg(idx_i).width;
    const int nb = layout.reg(idx_b).width;
    if (l < data.index_width()) {
        throw std::invalid_argument("index register too narrow for d values");
    }
    if (nb < data.n) {
        throw std::invalid_argument("data register too narrow for n-bit values");
    }
    require_support(
        state,
        [&](std::uint64_t g) { return layout.extract(g, idx_i) >= data.d(); },
        "oracle_load: nonzero amplitude on index labels >= d");
    if (strict) {
        require_support(
            state,
            [&](std::uint64_t g) { return layout.extract(g, idx_b) != 0; },
            "oracle_load: data register is not |0> in strict mode");
    }

    BasisPermutation perm(
        layout, {std::string(reg_index), std::string(reg_data)},
        [&](std::uint64_t joint) {
            const std::uint64_t i = joint & ((std::uint64_t{1} << l) - 1);
            std::uint64_t b = joint >> l;
            if (i < data.d()) {
                b ^= data.alphas[i];
            }
            return i | (b << l);
        });
    return perm.apply(std::move(state));
}

Statevector oracle_unload(Statevector state, const OracleData& data,
                          std::string_view reg_index,
                          std::string_view reg_data) {
    // XOR-load is an involution; reuse it without the strict B = |0> check.
    Statevector out =
        oracle_load(std::move(state), data, reg_index, reg_data, false);
    const RegisterLayout& layout = out.layout();
    const std::size_t idx_b = layout.index_of(reg_data);
    const double residual = violating_mass(out, [&](std::uint64_t g) {
        return layout.extract(g, idx_b) != 0;
    });
    if (residual > kReductionTol * kReductionTol) {
        throw std::runtime_error(
            "oracle_unload: data register retains entanglement; the state was "
            "not of the loaded form");
    }
    return out;
}

std::vector<std::uint64_t> multiplication_permutation(std::uint64_t b, int m,
                                                      int total_bits) {
    const std::uint64_t space = std::uint64_t{1} << total_bits;
    const std::uint64_t grid = std::uint64_t{1} << m;
    std::vector<std::uint64_t> table(space);
    if (b == 0) {
        std::iota(table.begin(), table.end(), std::uint64_t{0});
        return table;
    }
    std::vector<bool> used(space, false);
    for (std::uint64_t j = 0; j < grid; ++j) {
        table[j] = b * j;
        used[b * j] = true;
    }
    // Complete to a total permutation: remaining inputs take the unused
    // outputs in increasing order.
    std::uint64_t next = 0;
    for (std::uint64_t j = grid; j < space; ++j) {
        while (used[next]) {
            ++next;
        }
        table[j] = next;
        used[next] = true;
    }
    return table;
}

namespace {

struct MultRegs {
    std::size_t idx_b;
    std::size_t idx_a;
    int nb;
    int na;
    int m;
};

MultRegs mult_regs(const RegisterLayout& layout, std::string_view reg_b,
                   std::string_view reg_a) {
    MultRegs r{};
    r.idx_b = layout.index_of(reg_b);
    r.idx_a = layout.index_of(reg_a);
    r.nb = layout.reg(r.idx_b).width;
    r.na = layout.reg(r.idx_a).width;
    if (r.na <= r.nb) {
        throw std::invalid_argument(
            "product register must be wider than the data register");
    }
    r.m = r.na - r.nb;
    return r;
}

BasisPermutation multiply_permutation(const RegisterLayout& layout,
                                      std::string_view reg_b,
                                      std::string_view reg_a, bool forward) {
    const MultRegs r = mult_regs(layout, reg_b, reg_a);
    std::vector<std::vector<std::uint64_t>> tables(std::uint64_t{1} << r.nb);
    for (std::uint64_t b = 0; b < tables.size(); ++b) {
        tables[b] = multiplication_permutation(b, r.m, r.na);
        if (!forward) {
            std::vector<std::uint64_t> inv(tables[b].size());
            for (std::uint64_t x = 0; x < tables[b].size(); ++x) {
                inv[tables[b][x]] = x;
            }
            tables[b] = std::move(inv);
        }
    }
    return BasisPermutation(
        layout, {std::string(reg_b), std::string(reg_a)},
        [&](std::uint64_t joint) {
            const std::uint64_t b = joint & ((std::uint64_t{1} << r.nb) - 1);
            const std::uint64_t a = joint >> r.nb;
            return b | (tables[b][a] << r.nb);
        });
}

} // namespace

Statevector multiply_in_place(Statevector state, std::string_view reg_b,
                              std::string_view reg_a) {
    const RegisterLayout& layout = state.layout();
    const MultRegs r = mult_regs(layout, reg_b, reg_a);
    require_support(
        state,
        [&](std::uint64_t g) { return layout.extract(g, r.idx_b) == 0; },
        "multiply_in_place: support on data label 0 is non-injective");
    require_support(
        state,
        [&](std::uint64_t g) {
            return layout.extract(g, r.idx_a) >= (std::uint64_t{1} << r.m);
        },
        "multiply_in_place: product register support must sit in the low m bits");
    return multiply_permutation(layout, reg_b, reg_a, true)
        .apply(std::move(state));
}

Statevector uncompute_multiply(Statevector state, std::string_view reg_b,
                               std::string_view reg_a) {
    const RegisterLayout& layout = state.layout();
    const MultRegs r = mult_regs(layout, reg_b, reg_a);
    require_support(
        state,
        [&](std::uint64_t g) {
            const std::uint64_t b = layout.extract(g, r.idx_b);
            const std::uint64_t a = layout.extract(g, r.idx_a);
            if (b == 0) {
                return false;
            }
            return !(a % b == 0 && a / b < (std::uint64_t{1} << r.m));
        },
        "uncompute_multiply: state is not in the image of multiply_in_place");
    return multiply_permutation(layout, reg_b, reg_a, false)
        .apply(std::move(state));
}

namespace {

void require_flag_clear(const Statevector& state, std::string_view flag) {
    const RegisterLayout& layout = state.layout();
    const std::size_t idx_f = layout.index_of(flag);
    if (layout.reg(idx_f).width != 1) {
        throw std::invalid_argument("flag register must be a single qubit");
    }
    require_support(
        state,
        [&](std::uint64_t g) { return layout.extract(g, idx_f) != 0; },
        "flag qubit must start in |0>");
}

} // namespace

Statevector compare_flag(Statevector state, std::string_view reg_a,
                         std::uint64_t threshold_times, std::string_view flag) {
    const RegisterLayout& layout = state.layout();
    require_flag_clear(state, flag);
    const int na = layout.reg(reg_a).width;
    BasisPermutation perm(
        layout, {std::string(reg_a), std::string(flag)},
        [&](std::uint64_t joint) {
            const std::uint64_t a = joint & ((std::uint64_t{1} << na) - 1);
            std::uint64_t f = joint >> na;
            if (a >= threshold_times) {
                f ^= 1;
            }
            return a | (f << na);
        });
    return perm.apply(std::move(state));
}

Statevector compare_flag_indexed(Statevector state, std::string_view reg_index,
                                 std::string_view reg_a,
                                 std::span<const std::uint64_t> thresholds_times,
                                 std::string_view flag) {
    const RegisterLayout& layout = state.layout();
    require_flag_clear(state, flag);
    const int l = layout.reg(reg_index).width;
    const int na = layout.reg(reg_a).width;
    BasisPermutation perm(
        layout, {std::string(reg_index), std::string(reg_a), std::string(flag)},
        [&](std::uint64_t joint) {
            const std::uint64_t i = joint & ((std::uint64_t{1} << l) - 1);
            const std::uint64_t a =
                (joint >> l) & ((std::uint64_t{1} << na) - 1);
            std::uint64_t f = joint >> (l + na);
            if (i < thresholds_times.size() && a >= thresholds_times[i]) {
                f ^= 1;
            }
            return i | (a << l) | (f << (l + na));
        });
    return perm.apply(std::move(state));
}

Statevector apply_function_to_register(Statevector state, std::string_view src,
                                       std::string_view dst,
                                       std::span<const std::uint64_t> table,
                                       bool expect_zero) {
    const RegisterLayout& layout = state.layout();
    const std::size_t idx_src = layout.index_of(src);
    const std::size_t idx_dst = layout.index_of(dst);
    const int ws = layout.reg(idx_src).width;
    const int wd = layout.reg(idx_dst).width;
    if (table.size() < (std::uint64_t{1} << ws)) {
        throw std::invalid_argument("table must be total on the source labels");
    }
    for (std::uint64_t x = 0; x < (std::uint64_t{1} << ws); ++x) {
        if (wd < 64 && (table[x] >> wd)) {
            throw std::invalid_argument("table output overflows the destination "
                                        "register");
        }
    }
    if (expect_zero) {
        require_support(
            state,
            [&](std::uint64_t g) { return layout.extract(g, idx_dst) != 0; },
            "apply_function_to_register: destination register must start in "
            "|0>");
    } else {
        require_support(
            state,
            [&](std::uint64_t g) {
                return layout.extract(g, idx_dst) !=
                       table[layout.extract(g, idx_src)];
            },
            "apply_function_to_register: destination does not hold table(src); "
            "the state is not in the loaded form");
    }
    BasisPermutation perm(
        layout, {std::string(src), std::string(dst)},
        [&](std::uint64_t joint) {
            const std::uint64_t x = joint & ((std::uint64_t{1} << ws) - 1);
            const std::uint64_t y = (joint >> ws) ^ table[x];
            return x | (y << ws);
        });
    return perm.apply(std::move(state));
}

Statevector compare_general(Statevector state, std::string_view reg_g,
                            std::string_view reg_h, PredicateMode mode,
                            std::string_view flag) {
    const RegisterLayout& layout = state.layout();
    require_flag_clear(state, flag);
    const std::size_t idx_g = layout.index_of(reg_g);
    const std::size_t idx_h = layout.index_of(reg_h);
    const FixedPointFormat gfmt = layout.reg(idx_g).format;
    const FixedPointFormat hfmt = layout.reg(idx_h).format;
    const int wg = layout.reg(idx_g).width;
    const int wh = layout.reg(idx_h).width;
    if (wg + hfmt.point > 100 || wh + gfmt.point > 100) {
        throw std::invalid_argument("comparand alignment overflows");
    }

    FunctionTablePair scratch;
    scratch.g_format = gfmt;
    scratch.h_format = hfmt;
    scratch.mode = mode;

    BasisPermutation perm(
        layout, {std::string(reg_g), std::string(reg_h), std::string(flag)},
        [&](std::uint64_t joint) {
            const std::uint64_t gv = joint & ((std::uint64_t{1} << wg) - 1);
            const std::uint64_t hv =
                (joint >> wg) & ((std::uint64_t{1} << wh) - 1);
            std::uint64_t f = joint >> (wg + wh);
            if (!scratch.predicate(gv, hv)) {
                f ^= 1; // flag |0> marks the accepted branch
            }
            return gv | (hv << wg) | (f << (wg + wh));
        });
    return perm.apply(std::move(state));
}

} // namespace qprep
