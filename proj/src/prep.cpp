#include "qprep/prep.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <memory>
#include <numeric>
#include <stdexcept>
#include <string>

#include "qprep/amplification.hpp"
#include "qprep/block_state.hpp"
#include "qprep/permutation.hpp"

namespace qprep {

namespace {

double uniform_theta(int l, std::uint64_t d) {
    return 2.0 * std::acos(std::sqrt(std::ldexp(1.0, l - 2) / double(d)));
}

// Align signs (amplification may leave a global -1) and clamp the tiny
// negative dust left by floating point.
std::vector<double> realize_amplitudes(std::span<const cplx> amps) {
    std::size_t peak = 0;
    for (std::size_t i = 0; i < amps.size(); ++i) {
        if (std::abs(amps[i]) > std::abs(amps[peak])) {
            peak = i;
        }
    }
    const double sign = amps[peak].real() < 0.0 ? -1.0 : 1.0;
    std::vector<double> out(amps.size());
    for (std::size_t i = 0; i < amps.size(); ++i) {
        const cplx a = sign * amps[i];
        if (std::abs(a.imag()) > 1e-10) {
            throw std::runtime_error("post-selected amplitudes are not real");
        }
        out[i] = std::max(0.0, a.real());
    }
    return out;
}

std::vector<cplx> normalized_target(std::span<const double> targets) {
    double n2 = 0.0;
    for (double t : targets) {
        n2 += t * t;
    }
    std::vector<cplx> out(targets.size());
    for (std::size_t i = 0; i < targets.size(); ++i) {
        out[i] = cplx{targets[i] / std::sqrt(n2), 0.0};
    }
    return out;
}

double target_fidelity(std::span<const double> amps,
                       std::span<const cplx> target) {
    double dot = 0.0;
    for (std::size_t i = 0; i < target.size(); ++i) {
        dot += amps[i] * target[i].real();
    }
    return std::clamp(dot * dot, 0.0, 1.0);
}

double max_error_vs_targets(std::span<const double> amps,
                            std::span<const double> targets, double p_raw) {
    // Recover the pre-normalization values t_i / 2^m from the normalized
    // amplitudes via the raw success probability p = sum (t_i/2^m)^2 / d.
    const double scale = std::sqrt(p_raw * double(targets.size()));
    double worst = 0.0;
    for (std::size_t i = 0; i < targets.size(); ++i) {
        worst = std::max(worst, std::abs(amps[i] * scale - targets[i]));
    }
    return worst;
}

// ---------------------------------------------------------------------
// Dense backend
// ---------------------------------------------------------------------

struct DenseRun {
    Statevector state;
    PreparationProgram program;
    GoodSubspace good;
};

// Shared front end: uniform index superposition (with the comparator + R_y +
// one amplification round when d is not a power of two) followed by the
// oracle load.
DenseRun dense_prologue(const RegisterLayout& layout, const OracleData& data,
                        double theta) {
    const std::uint64_t d = data.d();
    const int l = data.index_width();
    const bool pow2 = data.d_is_power_of_two();

    DenseRun run{init_basis(layout, {}), {}, {}};
    auto step = [&](PreparationProgram::Step f) {
        run.state = f(std::move(run.state));
        run.program.add(std::move(f));
    };

    const int h_bits = pow2 ? std::bit_width(d) - 1 : l;
    step([h_bits](Statevector x) {
        return apply_hadamard_layer(std::move(x), "I", h_bits);
    });

    if (!pow2) {
        step([l, d](Statevector x) {
            BasisPermutation mark(
                x.layout(), {"I", "anc1"}, [l, d](std::uint64_t joint) {
                    const std::uint64_t i = joint & ((std::uint64_t{1} << l) - 1);
                    std::uint64_t a = joint >> l;
                    if (i >= d) {
                        a ^= 1;
                    }
                    return i | (a << l);
                });
            return mark.apply(std::move(x));
        });
        const int anc2_qubit = layout.offset(layout.index_of("anc2"));
        step([anc2_qubit, theta](Statevector x) {
            return apply_ry(std::move(x), anc2_qubit, theta);
        });
        auto psi_u = std::make_shared<const Statevector>(run.state);
        const GoodSubspace good_u{{{"anc1", 0}, {"anc2", 0}}};
        step([psi_u, good_u](Statevector x) {
            return grover_iteration(std::move(x), *psi_u, good_u);
        });
        run.good.conditions["anc1"] = 0;
        run.good.conditions["anc2"] = 0;
    }
    return run;
}

PrepResult finish_dense(DenseRun run, const OracleData& data,
                        std::optional<int> aa_rounds,
                        std::span<const double> targets, int mult_count) {
    const std::uint64_t d = data.d();
    const double p_raw = success_probability(run.state, run.good);
    const int rounds = aa_rounds ? *aa_rounds : optimal_rounds(p_raw);

    Statevector amped = amplify(run.state, run.program, run.good, rounds);
    const double p_final = success_probability(amped, run.good);

    auto [post, p_post] = project_and_renormalize(amped, run.good.conditions);
    post = oracle_unload(std::move(post), data);

    const RegisterLayout& layout = post.layout();
    const std::size_t idx_i = layout.index_of("I");
    std::vector<cplx> raw(d);
    for (std::uint64_t i = 0; i < d; ++i) {
        raw[i] = post.amp(layout.insert(0, idx_i, i));
    }
    std::vector<double> amps = realize_amplitudes(raw);

    const std::vector<cplx> target = normalized_target(targets);
    PrepReport report;
    report.post_selected_amplitudes = amps;
    report.success_probability_raw = p_raw;
    report.aa_rounds_used = rounds;
    report.success_probability_final = p_final;
    report.multiplication_count = mult_count;
    report.fidelity_vs_target = fidelity(post, "I", target);
    report.max_componentwise_error = max_error_vs_targets(amps, targets, p_raw);
    return {std::move(post), std::move(report)};
}

PrepResult dense_threshold_run(const OracleData& data,
                               const std::vector<std::uint64_t>& thresholds,
                               int m, std::optional<int> aa_rounds,
                               std::span<const double> targets) {
    const int l = data.index_width();
    const int n = data.n;
    const bool pow2 = data.d_is_power_of_two();

    std::vector<Register> regs{{"I", l, {l, 0}},
                               {"B", n, {n, 0}},
                               {"A", m + n, {m + n, m}},
                               {"flag", 1, {1, 0}}};
    if (!pow2) {
        regs.push_back({"anc1", 1, {1, 0}});
        regs.push_back({"anc2", 1, {1, 0}});
    }
    RegisterLayout layout{regs};

    DenseRun run = dense_prologue(layout, data, uniform_theta(l, data.d()));
    auto step = [&](PreparationProgram::Step f) {
        run.state = f(std::move(run.state));
        run.program.add(std::move(f));
    };

    step([data](Statevector x) { return oracle_load(std::move(x), data); });
    step([m](Statevector x) {
        return apply_hadamard_layer(std::move(x), "A", m);
    });
    step([](Statevector x) { return multiply_in_place(std::move(x), "B", "A"); });

    const bool same_threshold =
        std::all_of(thresholds.begin(), thresholds.end(),
                    [&](std::uint64_t t) { return t == thresholds.front(); });
    if (same_threshold) {
        const std::uint64_t t = thresholds.front();
        step([t](Statevector x) {
            return compare_flag(std::move(x), "A", t, "flag");
        });
    } else {
        step([thresholds](Statevector x) {
            return compare_flag_indexed(std::move(x), "I", "A", thresholds,
                                        "flag");
        });
    }

    step([](Statevector x) { return uncompute_multiply(std::move(x), "B", "A"); });
    step([m](Statevector x) {
        return apply_hadamard_layer(std::move(x), "A", m);
    });

    run.good.conditions["A"] = 0;
    run.good.conditions["flag"] = 0;
    return finish_dense(std::move(run), data, aa_rounds, targets, 2);
}

PrepResult dense_general_run(const OracleData& data,
                             const FunctionTablePair& tables,
                             std::optional<int> aa_rounds,
                             std::span<const double> targets, int mult_count) {
    const int l = data.index_width();
    const int n = data.n;
    const int m = tables.m_bits();
    const bool pow2 = data.d_is_power_of_two();

    std::vector<Register> regs{{"I", l, {l, 0}},
                               {"B", n, {n, 0}},
                               {"G", tables.g_format.width, tables.g_format},
                               {"A", m, {m, m}},
                               {"H", tables.h_format.width, tables.h_format},
                               {"flag", 1, {1, 0}}};
    if (!pow2) {
        regs.push_back({"anc1", 1, {1, 0}});
        regs.push_back({"anc2", 1, {1, 0}});
    }
    RegisterLayout layout{regs};

    DenseRun run = dense_prologue(layout, data, uniform_theta(l, data.d()));
    auto step = [&](PreparationProgram::Step f) {
        run.state = f(std::move(run.state));
        run.program.add(std::move(f));
    };

    step([data](Statevector x) { return oracle_load(std::move(x), data); });
    const auto g_table = tables.g_table;
    const auto h_table = tables.hinv_table;
    step([g_table](Statevector x) {
        return apply_function_to_register(std::move(x), "B", "G", g_table);
    });
    step([m](Statevector x) {
        return apply_hadamard_layer(std::move(x), "A", m);
    });
    step([h_table](Statevector x) {
        return apply_function_to_register(std::move(x), "A", "H", h_table);
    });
    const PredicateMode mode = tables.mode;
    step([mode](Statevector x) {
        return compare_general(std::move(x), "G", "H", mode, "flag");
    });
    step([h_table](Statevector x) {
        return apply_function_to_register(std::move(x), "A", "H", h_table,
                                          /*expect_zero=*/false);
    });
    step([g_table](Statevector x) {
        return apply_function_to_register(std::move(x), "B", "G", g_table,
                                          /*expect_zero=*/false);
    });
    step([m](Statevector x) {
        return apply_hadamard_layer(std::move(x), "A", m);
    });

    run.good.conditions["A"] = 0;
    run.good.conditions["G"] = 0;
    run.good.conditions["H"] = 0;
    run.good.conditions["flag"] = 0;
    return finish_dense(std::move(run), data, aa_rounds, targets, mult_count);
}

// ---------------------------------------------------------------------
// Block backend
// ---------------------------------------------------------------------

using BlockStep = std::function<void(BlockState&)>;

struct BlockRun {
    std::unique_ptr<BlockState> state;
    std::vector<BlockStep> steps;
    std::map<std::string, std::uint64_t> good;
    int index_bits = 0;
    RegisterLayout work;
};

BlockState block_replay(const BlockRun& run) {
    BlockState s(run.index_bits, run.work);
    for (const BlockStep& f : run.steps) {
        f(s);
    }
    return s;
}

BlockRun block_prologue(RegisterLayout work, const OracleData& data,
                        double theta) {
    const std::uint64_t d = data.d();
    const int l = data.index_width();
    const bool pow2 = data.d_is_power_of_two();

    BlockRun run;
    run.index_bits = l;
    run.work = std::move(work);
    run.state = std::make_unique<BlockState>(l, run.work);
    auto step = [&](BlockStep f) {
        f(*run.state);
        run.steps.push_back(std::move(f));
    };

    const int h_bits = pow2 ? std::bit_width(d) - 1 : l;
    step([h_bits](BlockState& s) { s.hadamard_index(h_bits); });

    if (!pow2) {
        const std::uint64_t anc1_bit =
            std::uint64_t{1} << run.work.offset(run.work.index_of("anc1"));
        step([d, anc1_bit](BlockState& s) {
            s.permute_work([d, anc1_bit](std::uint64_t i, std::uint64_t,
                                         std::uint64_t w) {
                return i >= d ? (w ^ anc1_bit) : w;
            });
        });
        step([theta](BlockState& s) { s.ry_work("anc2", theta); });
        auto psi_u = std::make_shared<const BlockState>(*run.state);
        const std::map<std::string, std::uint64_t> good_u{{"anc1", 0},
                                                          {"anc2", 0}};
        step([psi_u, good_u](BlockState& s) {
            s.grover_iteration(*psi_u, good_u);
        });
        run.good["anc1"] = 0;
        run.good["anc2"] = 0;
    }

    std::vector<std::uint64_t> alphas = data.alphas;
    step([alphas](BlockState& s) { s.xor_data_labels(alphas); });
    return run;
}

PrepResult finish_block(BlockRun run, const OracleData& data,
                        std::optional<int> aa_rounds,
                        std::span<const double> targets, int mult_count) {
    const std::uint64_t d = data.d();
    const double p_raw = run.state->good_probability(run.good);
    const int rounds = aa_rounds ? *aa_rounds : optimal_rounds(p_raw);

    if (rounds > 0) {
        BlockState psi = block_replay(run);
        // Replay must reproduce the recorded pre-measurement state.
        const double mismatch =
            std::abs(1.0 - std::abs(psi.inner(*run.state)));
        if (mismatch > kReductionTol) {
            throw std::runtime_error(
                "block program does not reproduce the prepared state");
        }
        for (int k = 0; k < rounds; ++k) {
            run.state->grover_iteration(psi, run.good);
        }
    }
    const double p_final = run.state->good_probability(run.good);

    auto [p_post, raw] = run.state->post_select_all_work(run.good);
    std::vector<double> all = realize_amplitudes(raw);
    std::vector<double> amps(all.begin(), all.begin() + d);

    const std::vector<cplx> target = normalized_target(targets);
    PrepReport report;
    report.post_selected_amplitudes = amps;
    report.success_probability_raw = p_raw;
    report.aa_rounds_used = rounds;
    report.success_probability_final = p_final;
    report.multiplication_count = mult_count;
    report.fidelity_vs_target = target_fidelity(amps, target);
    report.max_componentwise_error = max_error_vs_targets(amps, targets, p_raw);

    // Return the post-selected index-register state.
    RegisterLayout layout_i{{{"I", run.index_bits, {run.index_bits, 0}}}};
    std::vector<cplx> i_amps(layout_i.dim(), cplx{0.0, 0.0});
    for (std::uint64_t i = 0; i < all.size(); ++i) {
        i_amps[i] = cplx{all[i], 0.0};
    }
    return {Statevector(layout_i, std::move(i_amps)), std::move(report)};
}

PrepResult block_threshold_run(const OracleData& data,
                               const std::vector<std::uint64_t>& thresholds,
                               int m, std::optional<int> aa_rounds,
                               std::span<const double> targets) {
    const int n = data.n;
    const bool pow2 = data.d_is_power_of_two();

    std::vector<Register> regs{{"A", m + n, {m + n, m}}, {"flag", 1, {1, 0}}};
    if (!pow2) {
        regs.push_back({"anc1", 1, {1, 0}});
        regs.push_back({"anc2", 1, {1, 0}});
    }
    RegisterLayout work{regs};
    const std::size_t idx_a = work.index_of("A");
    const std::uint64_t flag_bit = std::uint64_t{1}
                                   << work.offset(work.index_of("flag"));

    BlockRun run =
        block_prologue(work, data, uniform_theta(data.index_width(), data.d()));
    auto step = [&](BlockStep f) {
        f(*run.state);
        run.steps.push_back(std::move(f));
    };

    step([m](BlockState& s) { s.hadamard_work("A", m); });

    // Multiplication permutations per index, reused forward and backward.
    auto mult_tables =
        std::make_shared<std::vector<std::vector<std::uint64_t>>>();
    for (std::uint64_t a : data.alphas) {
        mult_tables->push_back(multiplication_permutation(a, m, m + n));
    }
    const std::uint64_t d = data.d();
    step([mult_tables, d, idx_a, work](BlockState& s) {
        s.permute_work([&, d, idx_a](std::uint64_t i, std::uint64_t,
                                     std::uint64_t w) {
            if (i >= d) {
                return w;
            }
            const std::uint64_t a = work.extract(w, idx_a);
            return work.insert(w, idx_a, (*mult_tables)[i][a]);
        });
    });
    step([thresholds, d, idx_a, flag_bit, work](BlockState& s) {
        s.permute_work([&, d](std::uint64_t i, std::uint64_t, std::uint64_t w) {
            if (i >= d) {
                return w;
            }
            return work.extract(w, idx_a) >= thresholds[i] ? (w ^ flag_bit) : w;
        });
    });
    auto inv_tables =
        std::make_shared<std::vector<std::vector<std::uint64_t>>>();
    for (const auto& t : *mult_tables) {
        std::vector<std::uint64_t> inv(t.size());
        for (std::uint64_t x = 0; x < t.size(); ++x) {
            inv[t[x]] = x;
        }
        inv_tables->push_back(std::move(inv));
    }
    step([inv_tables, d, idx_a, work](BlockState& s) {
        s.permute_work([&, d](std::uint64_t i, std::uint64_t, std::uint64_t w) {
            if (i >= d) {
                return w;
            }
            const std::uint64_t a = work.extract(w, idx_a);
            return work.insert(w, idx_a, (*inv_tables)[i][a]);
        });
    });
    step([m](BlockState& s) { s.hadamard_work("A", m); });

    run.good["A"] = 0;
    run.good["flag"] = 0;
    return finish_block(std::move(run), data, aa_rounds, targets, 2);
}

PrepResult block_general_run(const OracleData& data,
                             const FunctionTablePair& tables,
                             std::optional<int> aa_rounds,
                             std::span<const double> targets, int mult_count) {
    const int m = tables.m_bits();
    const bool pow2 = data.d_is_power_of_two();

    std::vector<Register> regs{{"A", m, {m, m}}, {"flag", 1, {1, 0}}};
    if (!pow2) {
        regs.push_back({"anc1", 1, {1, 0}});
        regs.push_back({"anc2", 1, {1, 0}});
    }
    RegisterLayout work{regs};
    const std::size_t idx_a = work.index_of("A");
    const std::uint64_t flag_bit = std::uint64_t{1}
                                   << work.offset(work.index_of("flag"));

    BlockRun run =
        block_prologue(work, data, uniform_theta(data.index_width(), data.d()));
    auto step = [&](BlockStep f) {
        f(*run.state);
        run.steps.push_back(std::move(f));
    };

    step([m](BlockState& s) { s.hadamard_work("A", m); });
    // The g and h registers stay perfectly correlated with the index and A
    // registers, so the comparator reads the tables directly instead of
    // materializing them.
    const std::uint64_t d = data.d();
    auto shared_tables = std::make_shared<const FunctionTablePair>(tables);
    const std::vector<std::uint64_t> alphas = data.alphas;
    step([shared_tables, alphas, d, idx_a, flag_bit, work](BlockState& s) {
        s.permute_work([&, d](std::uint64_t i, std::uint64_t, std::uint64_t w) {
            if (i >= d) {
                return w;
            }
            const std::uint64_t a = work.extract(w, idx_a);
            const bool accept = shared_tables->predicate(
                shared_tables->g_table[alphas[i]], shared_tables->hinv_table[a]);
            return accept ? w : (w ^ flag_bit);
        });
    });
    step([m](BlockState& s) { s.hadamard_work("A", m); });

    run.good["A"] = 0;
    run.good["flag"] = 0;
    return finish_block(std::move(run), data, aa_rounds, targets, mult_count);
}

} // namespace

// ---------------------------------------------------------------------
// Classical oracles
// ---------------------------------------------------------------------

std::vector<double> classical_target_inverse(const OracleData& data,
                                             std::uint64_t c) {
    const ScalarConstant cc = ScalarConstant::constant(c, data);
    std::vector<double> target(data.d());
    double n2 = 0.0;
    for (std::uint64_t i = 0; i < data.d(); ++i) {
        target[i] = double(cc.value_for(i)) / double(data.alphas[i]);
        n2 += target[i] * target[i];
    }
    for (double& t : target) {
        t /= std::sqrt(n2);
    }
    return target;
}

std::uint64_t counting_oracle_inverse(std::uint64_t alpha, std::uint64_t c,
                                      int m) {
    if (alpha == 0 || c == 0) {
        throw std::invalid_argument("alpha and C must be positive");
    }
    const std::uint64_t threshold = c << m;
    std::uint64_t count = 0;
    for (std::uint64_t j = 0; j < (std::uint64_t{1} << m); ++j) {
        if (alpha * j < threshold) {
            ++count;
        }
    }
    return count;
}

std::uint64_t counting_oracle_general(std::uint64_t alpha,
                                      const FunctionTablePair& tables) {
    if (alpha >= tables.g_table.size()) {
        throw std::invalid_argument("alpha outside the g table domain");
    }
    std::uint64_t count = 0;
    for (std::uint64_t j = 0; j < tables.hinv_table.size(); ++j) {
        if (tables.predicate(tables.g_table[alpha], tables.hinv_table[j])) {
            ++count;
        }
    }
    return count;
}

// ---------------------------------------------------------------------
// End-to-end preparations
// ---------------------------------------------------------------------

PrepResult prepare_inverse(const InversePrepConfig& config) {
    if (config.m < 1) {
        throw std::invalid_argument("m must be >= 1");
    }
    (void)ScalarConstant::constant(config.c, config.data); // validates C
    std::vector<std::uint64_t> thresholds(config.data.d(),
                                          config.c << config.m);
    std::vector<double> targets(config.data.d());
    for (std::uint64_t i = 0; i < config.data.d(); ++i) {
        targets[i] = double(config.c) / double(config.data.alphas[i]);
    }
    if (config.backend == Backend::kBlock) {
        return block_threshold_run(config.data, thresholds, config.m,
                                   config.aa_rounds, targets);
    }
    return dense_threshold_run(config.data, thresholds, config.m,
                               config.aa_rounds, targets);
}

PrepResult prepare_division(const OracleData& data,
                            const std::vector<std::uint64_t>& betas, int m,
                            std::optional<int> aa_rounds, Backend backend) {
    if (m < 1) {
        throw std::invalid_argument("m must be >= 1");
    }
    (void)ScalarConstant::per_index_betas(betas, data); // validates betas
    std::vector<std::uint64_t> thresholds(data.d());
    std::vector<double> targets(data.d());
    for (std::uint64_t i = 0; i < data.d(); ++i) {
        thresholds[i] = betas[i] << m;
        targets[i] = double(betas[i]) / double(data.alphas[i]);
    }
    if (backend == Backend::kBlock) {
        return block_threshold_run(data, thresholds, m, aa_rounds, targets);
    }
    return dense_threshold_run(data, thresholds, m, aa_rounds, targets);
}

PrepResult prepare_general(const OracleData& data,
                           const FunctionTablePair& tables,
                           std::optional<int> aa_rounds, Backend backend) {
    if (data.n != tables.n_bits()) {
        throw std::invalid_argument("table domain does not match the data width");
    }
    std::vector<double> targets(data.d());
    for (std::uint64_t i = 0; i < data.d(); ++i) {
        targets[i] = tables.f_values[data.alphas[i]];
        if (targets[i] <= 0.0) {
            throw std::invalid_argument(
                "f(alpha_i) = 0 makes the component vanish; rejected");
        }
    }
    const int mult_count =
        tables.mode == PredicateMode::kProductLessThanOne ? 2 : 0;
    if (backend == Backend::kBlock) {
        return block_general_run(data, tables, aa_rounds, targets, mult_count);
    }
    return dense_general_run(data, tables, aa_rounds, targets, mult_count);
}

namespace {

struct UniformRun {
    Statevector state;
    double p_raw;
    double p_final;
    int rounds;
    std::map<std::string, std::uint64_t> good;
};

UniformRun uniform_run(std::uint64_t d, double theta) {
    if (d < 1) {
        throw std::invalid_argument("d must be >= 1");
    }
    const bool pow2 = std::has_single_bit(d);
    const int l = d <= 2 ? 1 : std::bit_width(d - 1);

    if (pow2) {
        RegisterLayout layout{{{"I", l, {l, 0}}}};
        Statevector s = apply_hadamard_layer(init_basis(layout, {}), "I",
                                             std::bit_width(d) - 1);
        return {std::move(s), 1.0, 1.0, 0, {}};
    }

    RegisterLayout layout{
        {{"I", l, {l, 0}}, {"anc1", 1, {1, 0}}, {"anc2", 1, {1, 0}}}};
    PreparationProgram prog;
    Statevector s = init_basis(layout, {});
    auto step = [&](PreparationProgram::Step f) {
        s = f(std::move(s));
        prog.add(std::move(f));
    };

    step([l](Statevector x) {
        return apply_hadamard_layer(std::move(x), "I", l);
    });
    step([l, d](Statevector x) {
        BasisPermutation mark(x.layout(), {"I", "anc1"},
                              [l, d](std::uint64_t joint) {
                                  const std::uint64_t i =
                                      joint & ((std::uint64_t{1} << l) - 1);
                                  std::uint64_t a = joint >> l;
                                  if (i >= d) {
                                      a ^= 1;
                                  }
                                  return i | (a << l);
                              });
        return mark.apply(std::move(x));
    });
    const int anc2_qubit = layout.offset(layout.index_of("anc2"));
    step([anc2_qubit, theta](Statevector x) {
        return apply_ry(std::move(x), anc2_qubit, theta);
    });

    const GoodSubspace good{{{"anc1", 0}, {"anc2", 0}}};
    const double p_raw = success_probability(s, good);
    Statevector amped = amplify(s, prog, good, 1);
    const double p_final = success_probability(amped, good);
    return {std::move(amped), p_raw, p_final, 1, good.conditions};
}

} // namespace

PrepResult prepare_uniform(std::uint64_t d) {
    const int l = d <= 2 ? 1 : std::bit_width(d - 1);
    UniformRun run = uniform_run(d, uniform_theta(l, d));

    Statevector post = run.good.empty()
                           ? std::move(run.state)
                           : project_and_renormalize(run.state, run.good).first;

    const RegisterLayout& layout = post.layout();
    const std::size_t idx_i = layout.index_of("I");
    std::vector<cplx> raw(d);
    for (std::uint64_t i = 0; i < d; ++i) {
        raw[i] = post.amp(layout.insert(0, idx_i, i));
    }
    std::vector<double> amps = realize_amplitudes(raw);

    const double inv_sqrt_d = 1.0 / std::sqrt(double(d));
    std::vector<cplx> target(d, cplx{inv_sqrt_d, 0.0});
    double max_err = 0.0;
    for (double a : amps) {
        max_err = std::max(max_err, std::abs(a - inv_sqrt_d));
    }

    PrepReport report;
    report.post_selected_amplitudes = amps;
    report.success_probability_raw = run.p_raw;
    report.aa_rounds_used = run.rounds;
    report.success_probability_final = run.p_final;
    report.multiplication_count = 0;
    report.fidelity_vs_target = fidelity(post, "I", target);
    report.max_componentwise_error = max_err;
    return {std::move(post), std::move(report)};
}

std::pair<double, double> uniform_theta_perturbation(std::uint64_t d,
                                                     double eps0) {
    if (std::has_single_bit(d)) {
        throw std::invalid_argument(
            "theta perturbation applies to non-power-of-two d only");
    }
    if (!(eps0 >= 0.0) || eps0 >= 0.2) {
        throw std::invalid_argument("eps0 must lie in [0, 0.2)");
    }
    const int l = std::bit_width(d - 1);
    UniformRun run = uniform_run(d, uniform_theta(l, d) - eps0);
    const double bound = 1.0 - 16.0 * eps0 * eps0;
    if (run.p_final < bound - 1e-12) { // slack for the eps0 = 0 float dust
        throw std::runtime_error(
            "final probability fell below the 1 - 16 eps0^2 bound");
    }
    return {run.p_final, bound};
}

bool reports_match(const PrepReport& a, const PrepReport& b, double tol) {
    if (a.post_selected_amplitudes.size() != b.post_selected_amplitudes.size()) {
        return false;
    }
    for (std::size_t i = 0; i < a.post_selected_amplitudes.size(); ++i) {
        if (std::abs(a.post_selected_amplitudes[i] -
                     b.post_selected_amplitudes[i]) > tol) {
            return false;
        }
    }
    return std::abs(a.success_probability_raw - b.success_probability_raw) <=
               tol &&
           a.aa_rounds_used == b.aa_rounds_used &&
           std::abs(a.success_probability_final -
                    b.success_probability_final) <= tol &&
           a.multiplication_count == b.multiplication_count &&
           std::abs(a.fidelity_vs_target - b.fidelity_vs_target) <= tol &&
           std::abs(a.max_componentwise_error - b.max_componentwise_error) <=
               tol;
}

bool simulate_equivalence_check(const InversePrepConfig& config) {
    InversePrepConfig dense = config;
    dense.backend = Backend::kDense;
    InversePrepConfig block = config;
    block.backend = Backend::kBlock;
    return reports_match(prepare_inverse(dense).report,
                         prepare_inverse(block).report);
}

} // namespace qprep
