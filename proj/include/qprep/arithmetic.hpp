#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "qprep/permutation.hpp"
#include "qprep/statevector.hpp"

namespace qprep {

/// The classical amplitude vector accessed as the black box. Each entry is
/// an n-bit integer. Zero entries are forbidden unless `allow_zero` is set
/// (only the general nonlinear preparation tolerates them; the multiplier
/// is non-injective at zero and the reciprocal is undefined).
struct OracleData {
    std::vector<std::uint64_t> alphas;
    int n = 0;

    OracleData(std::vector<std::uint64_t> values, int bit_width,
               bool allow_zero = false);

    std::uint64_t d() const { return alphas.size(); }
    /// Width of the index register: max(1, ceil(log2 d)).
    int index_width() const;
    bool d_is_power_of_two() const;
    std::uint64_t min_alpha() const;
};

/// Normalization constant C (inverse mode) or per-index beta vector
/// (division mode), validated against the oracle data.
struct ScalarConstant {
    std::vector<std::uint64_t> values;
    bool per_index = false;

    static ScalarConstant constant(std::uint64_t c, const OracleData& data);
    static ScalarConstant per_index_betas(std::vector<std::uint64_t> betas,
                                          const OracleData& data);

    std::uint64_t value_for(std::uint64_t i) const {
        return per_index ? values[i] : values[0];
    }
};

enum class PredicateMode {
    kLessThan,          // h^{-1}(j) < g(alpha), fixed-point aligned
    kProductLessThanOne // g(alpha) * h^{-1}(j) < 1, fixed-point aligned
};

/// Forward map g and backward map h^{-1} as lookup tables, with the
/// predicate mode tying them together. The contract
///     predicate(g(alpha), h^{-1}(j))  <=>  j * 2^{-m} < f(alpha)
/// is validated exhaustively over the m-bit grid at construction.
struct FunctionTablePair {
    std::vector<std::uint64_t> g_table; // indexed by n-bit labels
    FixedPointFormat g_format;
    std::vector<std::uint64_t> hinv_table; // indexed by m-bit labels
    FixedPointFormat h_format;
    PredicateMode mode = PredicateMode::kLessThan;
    std::vector<double> f_values; // target f per n-bit label, in [0, 1]

    static FunctionTablePair
    validated(std::vector<std::uint64_t> g_table, FixedPointFormat g_format,
              std::vector<std::uint64_t> hinv_table, FixedPointFormat h_format,
              PredicateMode mode, const std::function<double(std::uint64_t)>& f);

    int n_bits() const;
    int m_bits() const;
    /// True on the accepted branch (flag stays |0>).
    bool predicate(std::uint64_t g_value, std::uint64_t h_value) const;
};

/// f(a) = 1 / sqrt(1 + a): g(a) = 1 + a, h^{-1}(j) = j^2 interpreted as
/// (j 2^{-m})^2, product-less-than-one test.
FunctionTablePair make_inv_sqrt_1p_tables(int n, int m);

/// f(a) = a * 2^{-n} (the linear-coefficients reduction): identity tables,
/// less-than test.
FunctionTablePair make_linear_tables(int n, int m);

/// The inverse-coefficients algorithm expressed in the general framework:
/// g(a) = a, h^{-1}(j) = j * 2^{-m}, product test; f(a) = 1/a (f(0) := 1).
FunctionTablePair make_inverse_reduction_tables(int n, int m);

/// Arbitrary f given per-label values in [0, 1]: threshold tables
/// g(a) = ceil(2^m f(a)) against h^{-1}(j) = j, less-than test.
FunctionTablePair make_threshold_tables(std::span<const double> f_values, int m);

// ---- Oracle and arithmetic unitaries (verified basis permutations) ----

/// U_o: |i>|b> -> |i>|b xor alpha_i> for i < d. XOR-load, self-inverse when
/// the destination starts in |0>. Requires (within tolerance) zero amplitude
/// on index labels >= d; with `strict`, also requires Reg. B in |0>.
Statevector oracle_load(Statevector state, const OracleData& data,
                        std::string_view reg_index = "I",
                        std::string_view reg_data = "B", bool strict = true);

/// Inverse oracle; additionally checks that Reg. B returns to |0> within
/// kReductionTol, which signals misuse otherwise.
Statevector oracle_unload(Statevector state, const OracleData& data,
                          std::string_view reg_index = "I",
                          std::string_view reg_data = "B");

/// Mult: |a>_B |j>_A -> |a>_B |a*j>_A. Reg. A must be m + n bits wide with
/// support confined to the low m bits, and Reg. B support must avoid 0.
/// Extended to a total permutation per B label so the operation is exactly
/// unitary.
Statevector multiply_in_place(Statevector state, std::string_view reg_b,
                              std::string_view reg_a);

/// Mult^+: exact inverse of multiply_in_place. Support on A labels that are
/// not products of the correlated B value signals a corrupted state.
Statevector uncompute_multiply(Statevector state, std::string_view reg_b,
                               std::string_view reg_a);

/// Comp: flag ^= [label_A >= threshold_times]. The threshold is the
/// binary-point-aligned integer C * 2^m; equality goes to flag |1>.
Statevector compare_flag(Statevector state, std::string_view reg_a,
                         std::uint64_t threshold_times, std::string_view flag);

/// Per-index thresholds (division mode): flag ^= [label_A >= t[label_I]].
/// Index labels beyond the table are left untouched.
Statevector compare_flag_indexed(Statevector state, std::string_view reg_index,
                                 std::string_view reg_a,
                                 std::span<const std::uint64_t> thresholds_times,
                                 std::string_view flag);

/// U_g / U_{h^-1}: |x>_src |0>_dst -> |x>_src |table(x)>_dst. XOR-load,
/// self-inverse. With `expect_zero` the |0> dst pre-condition is checked;
/// without it (the uncompute direction) dst must hold table(src) instead.
Statevector apply_function_to_register(Statevector state, std::string_view src,
                                       std::string_view dst,
                                       std::span<const std::uint64_t> table,
                                       bool expect_zero = true);

/// Inequality test between the g and h registers; flag is set on the
/// rejected branch (flag |0> marks the accepted one). Fixed-point alignment
/// comes from the two registers' formats.
Statevector compare_general(Statevector state, std::string_view reg_g,
                            std::string_view reg_h, PredicateMode mode,
                            std::string_view flag);

/// The total permutation on [0, 2^{total_bits}) that agrees with j -> b*j
/// on [0, 2^{m}) and completes order-preservingly elsewhere (identity for
/// b = 0). Exposed for exhaustive injectivity tests.
std::vector<std::uint64_t> multiplication_permutation(std::uint64_t b, int m,
                                                      int total_bits);

} // namespace qprep
