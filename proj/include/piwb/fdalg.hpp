#pragma once

#include "piwb/config.hpp"
#include "piwb/linalg.hpp"
#include "piwb/rational.hpp"

#include <optional>
#include <string>
#include <vector>

namespace piwb {

/// Finite-dimensional associative Q-algebra given by structure constants on a
/// labeled basis: b_i * b_j = sum_k c_{ijk} b_k. Immutable after load.
class FDAlgebra {
  public:
    using TermList = std::vector<std::pair<int, Rat>>;

    FDAlgebra(std::string name, std::vector<std::string> labels,
              std::vector<std::vector<TermList>> mult, std::optional<Vec> unit);

    const std::string &name() const { return name_; }
    int dim() const { return static_cast<int>(labels_.size()); }
    const std::vector<std::string> &labels() const { return labels_; }
    const TermList &basis_product(int i, int j) const { return mult_[i][j]; }
    const std::optional<Vec> &unit() const { return unit_; }

    Vec basis_element(int i) const;
    Vec zero() const { return Vec::Zero(dim()); }
    Vec multiply(const Vec &u, const Vec &v) const;

    /// Matrix of left multiplication x -> a*x on the whole algebra.
    Mat left_mult_matrix(const Vec &a) const;

    /// Exact associativity check on all basis triples; throws on violation.
    void check_associativity() const;
    /// Unit axioms if a unit is declared; throws on violation.
    void check_unit() const;

  private:
    std::string name_;
    std::vector<std::string> labels_;
    std::vector<std::vector<TermList>> mult_;
    std::optional<Vec> unit_;
};

/// Wedderburn-Malcev data: designated radical basis and split simple
/// components with matrix-unit labels. Required before any structural
/// (Kemer-side) use; verified, never trusted.
struct WedderburnData {
    struct Component {
        int size = 1;                      // k: component is M_k(Q)
        std::vector<Vec> units;            // row-major: units[a*k+b] = E_{a+1,b+1}
        const Vec &unit_at(int a, int b) const { return units[static_cast<size_t>(a * size + b)]; }
    };
    std::vector<Vec> radical_basis;
    std::vector<Component> components;
    int nilpotency = 1; // n_A: least n with J^n = 0; 1 means J = 0

    int semisimple_dim() const {
        int d = 0;
        for (const auto &c : components) d += c.size * c.size;
        return d;
    }
    /// Sum of the component identity elements; the algebra unit when A is
    /// unital with unit inside the semisimple part.
    Vec semisimple_identity(const FDAlgebra &A) const;
};

struct ParValue {
    int d = 0; // dim of semisimple part
    int s = 0; // n_A - 1
};

struct AlgebraWithData {
    FDAlgebra algebra;
    WedderburnData wedderburn;
};

// --- constructors (ship verified WedderburnData) -----------------------------

AlgebraWithData build_matrix_algebra(int k, const Limits &lim = Limits());
AlgebraWithData build_ut(const std::vector<int> &block_sizes, const Limits &lim = Limits());
AlgebraWithData build_nilpotent_free(int generators, int nilpotency, const Limits &lim = Limits());
AlgebraWithData direct_product(const AlgebraWithData &a, const AlgebraWithData &b,
                               const Limits &lim = Limits());
AlgebraWithData unitalize(const AlgebraWithData &a, const Limits &lim = Limits());

// --- structure --------------------------------------------------------------

/// Basis of the Jacobson radical via the Dickson trace-form criterion on the
/// unitalization: J(A) = { x in A : trace(L_{xy}) = 0 for all y }.
std::vector<Vec> radical(const FDAlgebra &A);

/// Least n with J^n = 0 (n = 1 iff J = 0), by product-space iteration.
int nilpotency_index(const FDAlgebra &A, const std::vector<Vec> &radical_basis);

ParValue par(const FDAlgebra &A);
ParValue par(const FDAlgebra &A, const WedderburnData &w);

/// One line of a verification report.
struct CheckResult {
    std::string check;
    bool pass = false;
    std::string detail;
};
struct VerifyReport {
    std::vector<CheckResult> checks;
    bool all_pass() const {
        for (const auto &c : checks)
            if (!c.pass) return false;
        return true;
    }
};

/// Exact verification of every WedderburnData invariant against A.
VerifyReport verify_wedderburn(const FDAlgebra &A, const WedderburnData &w);

// --- JSON file format --------------------------------------------------------

/// Schema: { name, dim, basis:[...], mult:[{i,j,terms:[[k,"p/q"],...]},...],
///           unit:[...]?, wedderburn:{radical:[[..]..], components:[{size,
///           units:[[row,col,[coords]],...]}], nilpotency}? }  (0-based indices)
AlgebraWithData load_algebra_json(const std::string &path, const Limits &lim = Limits());
AlgebraWithData parse_algebra_json(const std::string &text, const Limits &lim = Limits());
std::string algebra_to_json(const AlgebraWithData &awd, const std::string &name = "");

std::string format_element(const FDAlgebra &A, const Vec &v);

} // namespace piwb
