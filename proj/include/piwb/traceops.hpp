#pragma once

#include "piwb/config.hpp"
#include "piwb/fdalg.hpp"
#include "piwb/idtest.hpp"
#include "piwb/poly.hpp"

#include <optional>
#include <string>
#include <vector>

namespace piwb {

/// The Zubrilin operator delta_k^z restricted to an ordered designated
/// variable list. z is a single variable or a monomial in variables disjoint
/// from the designated ones.
struct DeltaSpec {
    int k = 0;
    Monomial z;
    std::vector<VarId> designated;

    void validate() const;
};

/// Sum over all k-subsets S of the designated variables of f with
/// x -> z*x for x in S. delta_0 is the identity.
Polynomial delta(const DeltaSpec &spec, const Polynomial &f, const Limits &lim = Limits());

struct DeltaPropertyReport {
    bool alternation_applicable = false;
    bool alternation_pass = false;
    bool commute_pass = false;
    std::string detail;
    bool all_pass() const { return (!alternation_applicable || alternation_pass) && commute_pass; }
};

/// Asserts, as exact polynomial identities, that (1) delta_k preserves
/// alternation on the designated set when f alternates on it, and (2)
/// delta_k and delta_k2 commute.
DeltaPropertyReport delta_properties_check(const DeltaSpec &spec, int k2, const Polynomial &f,
                                           const Limits &lim = Limits());

struct ZubrilinResult {
    Verdict verdict = Verdict::Unknown;
    Polynomial combination;
    std::optional<WitnessReport> witness;
    std::string note;
};

/// Cayley-Hamilton-type membership: for f multilinear in the n designated
/// variables plus `extra`, alternating on the designated set, forms
///   g = sum_{t=0..n} (-1)^t delta_t^z ( f |_{z^{n-t} * extra -> extra} )
/// and decides whether g is an identity of A (exactly, via polarization of
/// the z powers). With substitute_extra_by_z set, additionally substitutes
/// extra <- z before testing (the corollary form).
ZubrilinResult zubrilin_ch_check(const FDAlgebra &A, const Polynomial &f,
                                 const std::vector<VarId> &designated, VarId extra, VarId z,
                                 Budget &budget, const Limits &lim = Limits(),
                                 const IdTestOptions &opt = IdTestOptions(),
                                 bool substitute_extra_by_z = false);

struct TraceTransferResult {
    bool pass = false;
    bool arguments_independent = true;
    Vec lhs;
    Vec rhs;
};

/// Trace transfer along an alternating polynomial: with a_1..a_d spanning a
/// matrix-unit component and Tr the trace of left multiplication on that
/// span,
///   Tr(a0) f(a_1..a_d, L) = sum_i f(a_1, .., a0*a_i, .., a_d, L).
/// Both sides are evaluated exactly in A. If the a_i are dependent both
/// sides must vanish (still asserted).
TraceTransferResult trace_transfer_check(const FDAlgebra &A, const std::vector<Vec> &span_basis,
                                         const Vec &a0, const Polynomial &f,
                                         const std::vector<VarId> &alternating_vars,
                                         const EvalAssignment &lambda);

struct TraceIntegrality {
    std::vector<Rat> coeffs; // q_0..q_{d-1}: characteristic coefficients of L_a
    Vec residual;            // a^{d+1} + sum q_i a^{i+1}, must be zero
    std::vector<Rat> power_traces;
};

/// Cayley-Hamilton integrality relation for an element of a multiplicatively
/// closed component span: computes the power traces of left multiplication on
/// the span, converts them by Newton's identities, and evaluates the
/// resulting relation in A.
TraceIntegrality trace_integrality_relation(const FDAlgebra &A, const std::vector<Vec> &span_basis,
                                            const Vec &a);

/// Newton's identities: power sums p_1..p_d to monic characteristic
/// coefficients c_0..c_{d-1} with char(t) = t^d + c_{d-1} t^{d-1} + ... + c_0.
std::vector<Rat> newton_to_charpoly(const std::vector<Rat> &power_sums);

struct ShirshovConfig {
    std::vector<Vec> generators;
    int word_length = 1;  // m
    int height = 1;       // h
    int exponent_cap = 0; // 0: use dim(A)+1
};

struct ShirshovReport {
    bool spans = false;
    std::optional<int> minimal_height;
    int subalgebra_dim = 0;
    int reached_dim = 0;
    bool budget_exceeded = false;
    std::string note;
};

/// Verifies that power products y_1^{n_1} .. y_l^{n_l} of words y_i of length
/// <= m, with l <= h, span the subalgebra generated by the generators.
ShirshovReport shirshov_span_check(const FDAlgebra &A, const ShirshovConfig &cfg, Budget &budget);

} // namespace piwb
