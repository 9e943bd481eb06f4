#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <string>
#include <vector>

#include "qprep/statevector.hpp"

namespace qprep {

/// The "good" subspace for amplitude amplification, defined by required
/// labels on named registers (e.g. A = 0 and flag = 0).
struct GoodSubspace {
    std::map<std::string, std::uint64_t> conditions;
};

/// Ordered list of unitary steps that build the pre-measurement state from
/// |0...0>. Needed to realize the reflection A S_0 A^{-1}.
class PreparationProgram {
  public:
    using Step = std::function<Statevector(Statevector)>;

    void add(Step step) { steps_.push_back(std::move(step)); }
    std::size_t size() const { return steps_.size(); }

    Statevector run(const RegisterLayout& layout) const;

  private:
    std::vector<Step> steps_;
};

/// Exact probability mass of the good subspace.
double success_probability(const Statevector& state, const GoodSubspace& good);

/// k = max(0, round(pi / (4 asin sqrt(p)) - 1/2)); maximizes
/// sin^2((2k+1) asin sqrt(p)). Throws on p <= 0.
int optimal_rounds(double p);

/// One round of Q = (2|psi><psi| - I) S_good applied to `state`, reflecting
/// about the fixed reference |psi> = A|0>.
Statevector grover_iteration(Statevector state, const Statevector& psi,
                             const GoodSubspace& good);

/// Applies Q `rounds` times. The state must lie in the plane spanned by the
/// good and bad components of the program's output (checked within
/// kReductionTol), so chained calls compose: r1 rounds then r2 equals
/// r1 + r2.
Statevector amplify(Statevector state, const PreparationProgram& program,
                    const GoodSubspace& good, int rounds);

} // namespace qprep
