#pragma once

#include "piwb/config.hpp"
#include "piwb/fdalg.hpp"
#include "piwb/idtest.hpp"
#include "piwb/poly.hpp"

#include <optional>
#include <string>
#include <vector>

namespace piwb {

enum class CoordStatus { Exact, LowerBound };

struct KemerIndex {
    int d = 0;
    int s = 0;
    CoordStatus d_status = CoordStatus::LowerBound;
    CoordStatus s_status = CoordStatus::LowerBound;
};

struct KemerCertificate {
    Polynomial poly;
    AlternationShape shape; // small sets of size d, big sets of size d+1
    EvalAssignment assignment;
    Vec value;
};

/// Basis used for structural evaluations: surviving matrix units of the
/// simple components plus the radical basis. component == -1 marks radical
/// elements.
struct TaggedBasisElement {
    Vec value;
    int component;
    std::string label;
};
std::vector<TaggedBasisElement> wedderburn_basis(const FDAlgebra &A, const WedderburnData &w);

// --- full / property K --------------------------------------------------------

struct FullnessReport {
    std::optional<bool> nonidentity; // nullopt: budget ran out
    std::optional<bool> full;
    std::optional<BasisAssignment> witness;   // tagged-basis indices
    std::optional<BasisAssignment> violating; // nonzero eval missing a component
    int missing_component = -1;
    std::string note;
};

/// Enumerates all evaluations of the multilinear f on the tagged basis and
/// reports whether every nonvanishing one touches every simple component
/// among its semisimple substitutions.
FullnessReport check_full(const FDAlgebra &A, const WedderburnData &w, const Polynomial &f,
                          Budget &budget);

struct PropertyKReport {
    std::optional<bool> holds; // nullopt: budget ran out
    std::optional<BasisAssignment> violating; // nonzero eval with < n_A - 1 radical slots
    std::string note;
};

/// Property K: f vanishes on every tagged-basis evaluation with fewer than
/// n_A - 1 radical substitutions.
PropertyKReport check_property_k(const FDAlgebra &A, const WedderburnData &w, const Polynomial &f,
                                 Budget &budget);

// --- certificates --------------------------------------------------------------

VerifyReport verify_kemer_certificate(const FDAlgebra &A, const KemerCertificate &cert);

/// Default extra-variable choice for the Cayley-Hamilton membership check on
/// a certificate: the smallest free variable that immediately precedes a
/// member of the chosen small set in every monomial (the bordered position of
/// the corollary's factored form), falling back to the smallest free
/// variable.
VarId choose_zubrilin_extra(const KemerCertificate &cert, int set_index);

/// Certification rule: a verified certificate whose small sets have size
/// d(A) and which carries exactly n_A - 1 big sets of size d(A)+1 witnesses
/// that the algebra's bounded index meets Par(A), i.e. the algebra is basic.
bool basic_certified(const FDAlgebra &A, const WedderburnData &w, const KemerCertificate &cert);

std::string certificate_to_json(const KemerCertificate &cert, const FDAlgebra &A);
KemerCertificate certificate_from_json(const std::string &text, const FDAlgebra &A,
                                       const Limits &lim = Limits());

// --- Eulerian unit words --------------------------------------------------------

/// All k^2 matrix-unit coordinates (row, col), 0-based, each exactly once,
/// consecutively composable (col == next row), starting row == final col ==
/// t. Hierholzer's circuit on the complete digraph with loops.
std::vector<std::pair<int, int>> eulerian_unit_word(int k, int t);

// --- constructive Kemer Lemma 1 -------------------------------------------------

/// Input to the constructor: a multilinear polynomial f together with a
/// nonvanishing evaluation in which the designated variable for component i
/// takes a value inside component i's span.
struct FullWitness {
    Polynomial poly;
    std::vector<VarId> component_vars; // one per component, in component order
    EvalAssignment assignment;
};

/// Builds, from a full-witnessing polynomial, a nonidentity with nu
/// alternating small sets of cardinality dim(ssp(A)), together with its
/// certifying evaluation: borders the designated variables with fresh
/// idempotent-valued variables, substitutes Eulerian matrix-unit words with
/// framed designated variables, alternates each designated set, and
/// cross-alternates the p-th sets across components.
KemerCertificate construct_kemer_lemma1(const FDAlgebra &A, const WedderburnData &w,
                                        const FullWitness &base, int nu,
                                        const Limits &lim = Limits());

// --- Kemer Lemma 2, unital cases -----------------------------------------------

struct Lemma2Error : std::runtime_error {
    std::string step;
    Lemma2Error(const std::string &st, const std::string &msg)
        : std::runtime_error("kemer lemma 2 not assembled at step '" + st + "': " + msg), step(st) {}
};

/// Assembles a certificate with nu small sets of size d and exactly n_A - 1
/// big sets of size d+1 from a property-K polynomial with a witnessing
/// evaluation, for unital A. q = 1 follows the h*f route; q > 1 borders the
/// radical values by component idempotents. Throws Lemma2Error naming the
/// failing step when the fixed evaluation degenerates.
KemerCertificate assemble_kemer_lemma2_unital(const FDAlgebra &A, const WedderburnData &w,
                                              const Polynomial &f_k,
                                              const EvalAssignment &witness, int nu, Budget &budget,
                                              const Limits &lim = Limits());

// --- bounded index probing -------------------------------------------------------

struct ProbeBudgets {
    int degree_budget = 12;
    int extras_budget = 2; // free variables per universe; default 2 * (#sets) is applied by the caller
    std::uint64_t skeleton_budget = 20000;
    std::uint64_t eval_budget = 100'000'000;
    int threads = 1;
};

struct KemerProbeRow {
    int nu = 0;
    int d_nu = 0;
    CoordStatus d_status = CoordStatus::LowerBound;
    int s_nu = 0;
    CoordStatus s_status = CoordStatus::LowerBound;
    std::optional<Polynomial> d_witness;
    std::optional<Polynomial> s_witness;
    std::string note;
};

struct KemerProbeReport {
    std::vector<KemerProbeRow> rows;
    KemerIndex index;
    std::string note;
};

/// Estimates d_nu and s_nu for nu <= nu_max by alternating-shape probing,
/// with upper bounds ("ceilings") supplied by the alternating-set lemmas when
/// verified WedderburnData is available. Coordinates are flagged Exact only
/// when the probe witness meets the ceiling or every larger size was
/// exhausted.
KemerProbeReport kemer_probe(const FDAlgebra &A, const WedderburnData *w, int nu_max,
                             const ProbeBudgets &budgets, const Limits &lim = Limits());

} // namespace piwb
