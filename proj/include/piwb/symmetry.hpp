#pragma once

#include "piwb/config.hpp"
#include "piwb/idtest.hpp"
#include "piwb/poly.hpp"

#include <optional>
#include <vector>

namespace piwb {

/// Partition of n, weakly decreasing parts.
using Partition = std::vector<int>;

/// All partitions of n, in decreasing lexicographic order: (n) first, (1^n)
/// last.
std::vector<Partition> partitions(int n, const Limits &lim = Limits());

int partitions_cap_default();

struct Tableau {
    Partition shape;
    std::vector<std::vector<int>> rows; // filling with 1..n, rows[i][j]

    int n() const;
    int height() const { return static_cast<int>(shape.size()); }
    bool is_standard() const;
    std::vector<std::vector<int>> columns() const;
};

/// All standard tableaux of shape mu, in the order produced by placing
/// 1, 2, ..., n row-by-row (deterministic).
std::vector<Tableau> standard_tableaux(const Partition &mu);

/// Number of standard tableaux (enumerated, exact).
long tableau_count(const Partition &mu);

/// Inner signed column sum: g0 = sum_{tau in C_T} sign(tau) tau . f, where
/// S_n acts on multilinear polynomials of degree n by permuting variables
/// (sorted variable list of f corresponds to 1..n).
Polynomial young_column_part(const Tableau &T, const Polynomial &f);

/// Full Young symmetrizer action e_T . f = sum_{sigma in R_T} sigma . g0.
/// Throws when |R_T| * |C_T| exceeds group_budget.
Polynomial young_apply(const Tableau &T, const Polynomial &f,
                       std::uint64_t group_budget = 10'000'000);

struct SymmetrizerHit {
    Partition mu;
    Tableau tableau;
    Polynomial image;
    WitnessReport witness;
};

struct SymmetrizerScan {
    std::optional<SymmetrizerHit> hit;
    bool budget_exhausted = false;
    int tableaux_scanned = 0;
};

/// Scans partitions (decreasing lex) and their standard tableaux for a
/// tableau with e_T . f a nonidentity of A. For a multilinear nonidentity f
/// a hit must exist; a completed scan without one throws (internal
/// inconsistency).
SymmetrizerScan find_nonzero_symmetrizer(const FDAlgebra &A, const Polynomial &f, Budget &budget,
                                         const IdTestOptions &opt = IdTestOptions(),
                                         const Limits &lim = Limits());

/// Replaces all variables of the i-th row of T by one fresh variable y_i.
/// Requires g invariant under the row stabilizer (checked). The collapsed
/// polynomial recovers g by multilinearization, so g and the result are
/// identities of the same algebras.
Polynomial collapse_rows(const Tableau &T, const Polynomial &g,
                         std::vector<VarId> *row_vars_out = nullptr);

} // namespace piwb
