#pragma once

#include "piwb/config.hpp"
#include "piwb/fdalg.hpp"
#include "piwb/poly.hpp"

#include <map>
#include <optional>
#include <string>
#include <vector>

namespace piwb {

/// Layout of a candidate multialternating polynomial: disjoint small sets of
/// size d, big sets of size d+1, and the remaining free variables.
struct AlternationShape {
    std::vector<std::vector<VarId>> small_sets;
    std::vector<std::vector<VarId>> big_sets;
    std::vector<VarId> free_vars;

    int small_size() const { return small_sets.empty() ? 0 : static_cast<int>(small_sets[0].size()); }
    std::vector<std::vector<VarId>> all_sets() const {
        auto v = small_sets;
        v.insert(v.end(), big_sets.begin(), big_sets.end());
        return v;
    }
    int total_degree() const {
        size_t n = free_vars.size();
        for (const auto &s : small_sets) n += s.size();
        for (const auto &s : big_sets) n += s.size();
        return static_cast<int>(n);
    }
    std::vector<VarId> universe() const;
    /// Disjointness and declared-size consistency; throws on violation.
    void validate() const;
};

using EvalAssignment = std::map<VarId, Vec>;
using BasisAssignment = std::map<VarId, int>;

/// Exact evaluation through the structure constants.
Vec eval(const FDAlgebra &A, const Polynomial &f, const EvalAssignment &sigma);
Vec eval_basis(const FDAlgebra &A, const Polynomial &f, const BasisAssignment &sigma);

enum class Verdict { Identity, NonIdentity, Unknown };

struct WitnessReport {
    BasisAssignment assignment;
    Vec value;
};

struct IdentityResult {
    Verdict verdict = Verdict::Unknown;
    std::optional<WitnessReport> witness;
    std::uint64_t ops = 0;
    std::string note;
};

/// Exhaustion strategy for multilinear identity testing. Both are exact and
/// agree; DenseTuples walks all dim^deg basis tuples, SparsePaths enumerates,
/// per monomial, only the basis sequences with nonzero product and
/// accumulates values per assignment.
enum class Strategy { Auto, DenseTuples, SparsePaths };

struct IdTestOptions {
    Strategy strategy = Strategy::Auto;
    int threads = 1;
    /// Deterministic random tuples tried first when hunting a witness.
    int prefilter_samples = 64;
    /// Structured assignments tried before anything else.
    std::vector<BasisAssignment> hints;
};

/// Ground truth for multilinear f: true iff f vanishes on all basis tuples.
IdentityResult is_identity_multilinear(const FDAlgebra &A, const Polynomial &f, Budget &budget,
                                       const IdTestOptions &opt = IdTestOptions());

/// Arbitrary f within caps: polarize, then test every component exhaustively.
IdentityResult is_identity(const FDAlgebra &A, const Polynomial &f, Budget &budget,
                           const Limits &lim = Limits(), const IdTestOptions &opt = IdTestOptions());

// --- alternating-shape probe --------------------------------------------------

enum class ProbeOutcome { Witness, NoneExhausted, Unknown };

struct ProbeSeed {
    Monomial skeleton;
    std::vector<BasisAssignment> hints;
};

struct ProbeConfig {
    std::uint64_t skeleton_budget = 200000;
    IdTestOptions idtest;
    std::vector<ProbeSeed> seeds;
};

struct ProbeResult {
    ProbeOutcome outcome = ProbeOutcome::Unknown;
    std::optional<Polynomial> witness_poly;
    std::optional<Monomial> witness_skeleton;
    std::optional<WitnessReport> witness;
    std::uint64_t skeletons_tested = 0;
    std::string note;
};

/// Decides whether a multilinear nonidentity with the given alternation shape
/// and exactly the given variable universe exists. Spanning argument: every
/// polynomial alternating on the shape's sets is a combination of
/// Alt_shape(w) over skeleton monomials w, and the identities of A form a
/// subspace, so it is enough to test the spanning vectors. Skeletons are
/// enumerated with each set's variables in increasing order (within-set
/// reordering only changes sign).
ProbeResult alt_shape_probe(const FDAlgebra &A, const AlternationShape &shape, Budget &budget,
                            const ProbeConfig &cfg = ProbeConfig(), const Limits &lim = Limits());

/// Apply the full alternation of every set of the shape to a skeleton.
Polynomial alternate_shape(const Monomial &skeleton, const AlternationShape &shape);

/// All basis tuples with nonzero value of a multilinear polynomial, in
/// odometer order, up to `cap` hits. Exhausts the tuple space unless truncated
/// by the cap or the budget.
struct NonzeroEval {
    BasisAssignment assignment;
    Vec value;
};
std::vector<NonzeroEval> collect_nonzero_basis_evals(const FDAlgebra &A, const Polynomial &f,
                                                     size_t cap, Budget &budget);

} // namespace piwb
