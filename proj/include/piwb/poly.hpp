#pragma once

#include "piwb/config.hpp"
#include "piwb/rational.hpp"
#include "piwb/vars.hpp"

#include <map>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

namespace piwb {

/// A word in the free monoid on the variable registry. The empty word is the
/// unit monomial; it is only meaningful in unital contexts and the parser
/// rejects it unless asked not to.
struct Monomial {
    std::vector<VarId> word;

    Monomial() = default;
    explicit Monomial(std::vector<VarId> w) : word(std::move(w)) {}

    int degree() const { return static_cast<int>(word.size()); }
    bool empty() const { return word.empty(); }

    Monomial operator*(const Monomial &o) const {
        std::vector<VarId> w = word;
        w.insert(w.end(), o.word.begin(), o.word.end());
        return Monomial(std::move(w));
    }

    friend bool operator==(const Monomial &a, const Monomial &b) { return a.word == b.word; }
};

/// Length-lexicographic order on ordinals: shorter words first, then lex.
/// Gives deterministic printing and term iteration.
struct MonoLess {
    bool operator()(const Monomial &a, const Monomial &b) const {
        if (a.word.size() != b.word.size()) return a.word.size() < b.word.size();
        return a.word < b.word;
    }
};

using Multidegree = std::map<VarId, int>;

/// Exact sparse element of the free (nonunital by convention) algebra Q<X>.
class Polynomial {
  public:
    using TermMap = std::map<Monomial, Rat, MonoLess>;

    Polynomial() = default;

    static Polynomial zero() { return Polynomial(); }
    static Polynomial variable(VarId v) {
        Polynomial p;
        p.terms_[Monomial({v})] = Rat(1);
        return p;
    }
    static Polynomial monomial(Monomial m, Rat c = Rat(1)) {
        Polynomial p;
        if (!c.is_zero()) p.terms_[std::move(m)] = std::move(c);
        return p;
    }
    /// Unit element (empty word); only for explicitly unital contexts.
    static Polynomial one() { return monomial(Monomial{}, Rat(1)); }

    bool is_zero() const { return terms_.empty(); }
    size_t term_count() const { return terms_.size(); }
    const TermMap &terms() const { return terms_; }

    int degree() const {
        int d = 0;
        for (const auto &[m, c] : terms_) d = std::max(d, m.degree());
        return d;
    }

    Rat coeff(const Monomial &m) const {
        auto it = terms_.find(m);
        return it == terms_.end() ? Rat(0) : it->second;
    }

    std::set<VarId> vars() const;

    void add_term(const Monomial &m, const Rat &c) {
        if (c.is_zero()) return;
        auto it = terms_.find(m);
        if (it == terms_.end()) {
            terms_.emplace(m, c);
        } else {
            it->second += c;
            if (it->second.is_zero()) terms_.erase(it);
        }
    }

    Polynomial &operator+=(const Polynomial &o);
    Polynomial &operator-=(const Polynomial &o);
    Polynomial &operator*=(const Rat &c);

    friend Polynomial operator+(Polynomial a, const Polynomial &b) { a += b; return a; }
    friend Polynomial operator-(Polynomial a, const Polynomial &b) { a -= b; return a; }
    friend Polynomial operator-(const Polynomial &a) { Polynomial r = a; r *= Rat(-1); return r; }
    friend Polynomial operator*(Polynomial a, const Rat &c) { a *= c; return a; }
    friend Polynomial operator*(const Rat &c, Polynomial a) { a *= c; return a; }
    friend Polynomial operator*(const Polynomial &a, const Polynomial &b) { return mul(a, b); }

    friend bool operator==(const Polynomial &a, const Polynomial &b) { return a.terms_ == b.terms_; }

    static Polynomial mul(const Polynomial &a, const Polynomial &b);

  private:
    TermMap terms_;
};

// --- inspection -------------------------------------------------------------

/// Multidegree of a monomial restricted to nothing (full degree vector).
Multidegree multidegree(const Monomial &m);

/// Every variable of vars(f) occurs exactly once in every monomial.
bool is_multilinear(const Polynomial &f);

/// Each x in X occurs exactly once in every monomial of f.
bool is_multilinear_in(const Polynomial &f, const std::set<VarId> &X);

/// f is (-1)-symmetric under every transposition of X. Assumes nothing;
/// checks adjacent transpositions of the sorted list, which generate Sym(X).
bool is_alternating_on(const Polynomial &f, const std::set<VarId> &X);

// --- constructions ----------------------------------------------------------

/// Variable renaming m: applied letterwise to every word. Variables absent
/// from m are kept. m need not be injective (used for row collapse).
Polynomial rename(const Polynomial &f, const std::map<VarId, VarId> &m);

/// Swap two variables everywhere.
Polynomial swap_vars(const Polynomial &f, VarId a, VarId b);

/// Signed symmetrization over Sym(X): sum of sign(s) * f^s.
/// Requires f multilinear in X, X a subset of vars(f).
Polynomial alt(const Polynomial &f, const std::set<VarId> &X);

/// Sum over the shuffle transversal of Sym(S1) x ... x Sym(Sq) in Sym(U),
/// U = disjoint union of the sets. If f already alternates on each S_i, the
/// result alternates on U (it equals Alt_U(f) divided by prod |S_i|!).
Polynomial shuffle_alt(const Polynomial &f, const std::vector<std::vector<VarId>> &sets);

/// The standard polynomial s_n on fresh variables x1..xn.
Polynomial standard_poly(int n, const Limits &lim = Limits());

/// Capelli polynomial c_n: alternation of x1 y1 x2 y2 ... y_{n-1} x_n over
/// the x's, with the given n-1 interleaved border variables.
Polynomial capelli(int n, const std::vector<VarId> &borders, const Limits &lim = Limits());
Polynomial capelli(const std::vector<VarId> &alternators, const std::vector<VarId> &borders,
                   const Limits &lim = Limits());

/// Simultaneous substitution; variables absent from s map to themselves.
Polynomial substitute(const Polynomial &f, const std::map<VarId, Polynomial> &s,
                      const Limits &lim = Limits());

/// Full characteristic-zero polarization. Returns one multilinear polynomial
/// per multihomogeneous component of f, tagged with the component's
/// multidegree. f is an identity of an algebra iff every returned polynomial
/// is; this is the reduction used by identity testing on non-multilinear
/// input.
struct PolarizedComponent {
    Polynomial poly;
    Multidegree source_degree;
    /// For each source variable of degree >= 2, the fresh copies used.
    std::map<VarId, std::vector<VarId>> copies;
};
std::vector<PolarizedComponent> multilinearize(const Polynomial &f, const Limits &lim = Limits());

// --- text i/o ---------------------------------------------------------------

/// Canonical rendering; parse_poly(to_string(f)) == f.
std::string to_string(const Polynomial &f);

/// Parser for the expression grammar: rationals, variables, '*', '+', '-',
/// parentheses, and the macros s{n}(vars), c{n}(alts; borders),
/// alt[v1,...,vk](expr), delta{k}[z; v1,...,vn](expr).
/// Throws ParseError with a position on malformed input.
struct ParseError : std::runtime_error {
    size_t pos;
    ParseError(const std::string &msg, size_t p)
        : std::runtime_error(msg + " at position " + std::to_string(p)), pos(p) {}
};
Polynomial parse_poly(const std::string &text, const Limits &lim = Limits(),
                      bool allow_unit = false);

// --- permutation helpers ----------------------------------------------------

int permutation_sign(const std::vector<int> &perm);

/// Sum over all k-subsets S of xs of f with x -> z*x for x in S; k = 0 is the
/// identity. z is a monomial in variables disjoint from xs.
Polynomial delta_expand(int k, const Monomial &z, const std::vector<VarId> &xs,
                        const Polynomial &f, const Limits &lim = Limits());

} // namespace piwb
