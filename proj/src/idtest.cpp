#include "piwb/idtest.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <random>
#include <set>
#include <stdexcept>
#include <thread>

namespace piwb {

std::vector<VarId> AlternationShape::universe() const {
    std::vector<VarId> u = free_vars;
    for (const auto &s : small_sets) u.insert(u.end(), s.begin(), s.end());
    for (const auto &s : big_sets) u.insert(u.end(), s.begin(), s.end());
    std::sort(u.begin(), u.end());
    return u;
}

void AlternationShape::validate() const {
    std::set<VarId> seen;
    auto take = [&](const std::vector<VarId> &vs, const char *what) {
        for (VarId v : vs) {
            if (!seen.insert(v).second)
                throw std::invalid_argument(std::string("AlternationShape: variable ") + var_name(v) +
                                            " repeated across " + what);
        }
    };
    size_t d = small_sets.empty() ? 0 : small_sets[0].size();
    for (const auto &s : small_sets) {
        if (s.size() != d) throw std::invalid_argument("AlternationShape: small sets must share one size");
        take(s, "sets");
    }
    for (const auto &s : big_sets) {
        if (!small_sets.empty() && s.size() != d + 1)
            throw std::invalid_argument("AlternationShape: big sets must have size d+1");
        if (small_sets.empty() && !big_sets.empty() && s.size() != big_sets[0].size())
            throw std::invalid_argument("AlternationShape: big sets must share one size");
        take(s, "sets");
    }
    take(free_vars, "free variables");
}

// ---------------------------------------------------------------------------
// Evaluation
// ---------------------------------------------------------------------------

Vec eval(const FDAlgebra &A, const Polynomial &f, const EvalAssignment &sigma) {
    Vec acc = A.zero();
    for (const auto &[m, c] : f.terms()) {
        if (m.empty()) {
            if (!A.unit()) throw std::invalid_argument("eval: unit monomial on a nonunital algebra");
            acc += c * (*A.unit());
            continue;
        }
        Vec cur;
        bool first = true;
        bool dead = false;
        for (VarId v : m.word) {
            auto it = sigma.find(v);
            if (it == sigma.end())
                throw std::invalid_argument("eval: assignment does not cover variable " + var_name(v));
            if (first) {
                cur = it->second;
                first = false;
            } else {
                cur = A.multiply(cur, it->second);
            }
            if (cur.isZero(Rat(0))) { dead = true; break; }
        }
        if (!dead) acc += c * cur;
    }
    return acc;
}

Vec eval_basis(const FDAlgebra &A, const Polynomial &f, const BasisAssignment &sigma) {
    EvalAssignment full;
    for (const auto &[v, i] : sigma) full[v] = A.basis_element(i);
    return eval(A, f, full);
}

// ---------------------------------------------------------------------------
// Sparse element helper for basis-tuple chains
// ---------------------------------------------------------------------------

namespace {

struct SparseElem {
    std::vector<std::pair<int, Rat>> e;

    void clear() { e.clear(); }
    bool empty() const { return e.empty(); }
    void add(int k, const Rat &c) {
        for (auto &[idx, coeff] : e)
            if (idx == k) {
                coeff += c;
                return;
            }
        e.emplace_back(k, c);
    }
    void prune() {
        e.erase(std::remove_if(e.begin(), e.end(),
                               [](const auto &p) { return p.second.is_zero(); }),
                e.end());
    }
};

// cur * b_j through the structure constants; returns ops performed.
std::uint64_t mul_basis(const FDAlgebra &A, const SparseElem &cur, int j, SparseElem &out) {
    out.clear();
    std::uint64_t ops = 0;
    for (const auto &[i, c] : cur.e) {
        for (const auto &[k, c2] : A.basis_product(i, j)) {
            out.add(k, c * c2);
            ++ops;
        }
    }
    out.prune();
    return ops;
}

struct MonomialPlan {
    std::vector<int> positions; // positions into the sorted variable list
    Rat coeff;
};

std::vector<MonomialPlan> plan_monomials(const Polynomial &f, const std::vector<VarId> &vars) {
    std::map<VarId, int> pos;
    for (size_t i = 0; i < vars.size(); ++i) pos[vars[i]] = static_cast<int>(i);
    std::vector<MonomialPlan> plans;
    for (const auto &[m, c] : f.terms()) {
        MonomialPlan p;
        p.coeff = c;
        for (VarId v : m.word) p.positions.push_back(pos.at(v));
        plans.push_back(std::move(p));
    }
    return plans;
}

// Evaluates the planned polynomial at one basis tuple; zero test via `out`.
void eval_tuple(const FDAlgebra &A, const std::vector<MonomialPlan> &plans,
                const std::vector<int> &tuple, Vec &out, SparseElem &s1, SparseElem &s2) {
    out.setZero();
    for (const auto &p : plans) {
        if (p.positions.empty()) continue; // unit monomial: no basis slots
        s1.clear();
        s1.e.emplace_back(tuple[static_cast<size_t>(p.positions[0])], Rat(1));
        bool dead = false;
        for (size_t t = 1; t < p.positions.size(); ++t) {
            mul_basis(A, s1, tuple[static_cast<size_t>(p.positions[t])], s2);
            std::swap(s1, s2);
            if (s1.empty()) { dead = true; break; }
        }
        if (dead) continue;
        for (const auto &[k, c] : s1.e) out(k) += p.coeff * c;
    }
}

void decode_tuple(std::uint64_t index, int dim, std::vector<int> &tuple) {
    for (size_t p = tuple.size(); p-- > 0;) {
        tuple[p] = static_cast<int>(index % static_cast<std::uint64_t>(dim));
        index /= static_cast<std::uint64_t>(dim);
    }
}

BasisAssignment make_assignment(const std::vector<VarId> &vars, const std::vector<int> &tuple) {
    BasisAssignment a;
    for (size_t i = 0; i < vars.size(); ++i) a[vars[i]] = tuple[i];
    return a;
}

// Deterministic witness hunt on explicit candidate tuples.
std::optional<WitnessReport> try_candidates(const FDAlgebra &A,
                                            const std::vector<MonomialPlan> &plans,
                                            const std::vector<VarId> &vars,
                                            const std::vector<std::vector<int>> &tuples) {
    Vec out = A.zero();
    SparseElem s1, s2;
    for (const auto &t : tuples) {
        eval_tuple(A, plans, t, out, s1, s2);
        if (!out.isZero(Rat(0))) return WitnessReport{make_assignment(vars, t), out};
    }
    return std::nullopt;
}

} // namespace

// ---------------------------------------------------------------------------
// Exhaustive engines
// ---------------------------------------------------------------------------

namespace {

IdentityResult dense_engine(const FDAlgebra &A, const Polynomial &f,
                            const std::vector<VarId> &vars, Budget &budget, int threads) {
    IdentityResult res;
    const int dim = A.dim();
    const size_t m = vars.size();
    // Tuple space must fit in 64 bits.
    long double total_ld = std::pow(static_cast<long double>(dim), static_cast<long double>(m));
    if (total_ld > 9e18) {
        res.verdict = Verdict::Unknown;
        res.note = "tuple space too large for dense enumeration";
        return res;
    }
    std::uint64_t total = 1;
    for (size_t i = 0; i < m; ++i) total *= static_cast<std::uint64_t>(dim);

    auto plans = plan_monomials(f, vars);
    // Deterministic budget cutoff: charge each tuple its worst-case chain cost.
    std::uint64_t per_tuple = 0;
    for (const auto &p : plans) per_tuple += p.positions.size();
    if (per_tuple == 0) per_tuple = 1;
    std::uint64_t allowed = (budget.limit > budget.used)
                                ? (budget.limit - budget.used) / per_tuple
                                : 0;
    std::uint64_t to_scan = std::min(total, allowed);
    budget.charge(to_scan * per_tuple);

    std::atomic<std::uint64_t> first_witness{UINT64_MAX};
    int nthreads = std::max(1, threads);
    std::uint64_t chunk = (to_scan + static_cast<std::uint64_t>(nthreads) - 1) /
                          std::max<std::uint64_t>(1, static_cast<std::uint64_t>(nthreads));
    auto worker = [&](std::uint64_t lo, std::uint64_t hi) {
        std::vector<int> tuple(m);
        Vec out = A.zero();
        SparseElem s1, s2;
        for (std::uint64_t idx = lo; idx < hi; ++idx) {
            if (first_witness.load(std::memory_order_relaxed) < idx) return;
            decode_tuple(idx, dim, tuple);
            eval_tuple(A, plans, tuple, out, s1, s2);
            if (!out.isZero(Rat(0))) {
                std::uint64_t expect = first_witness.load();
                while (idx < expect && !first_witness.compare_exchange_weak(expect, idx)) {}
                return;
            }
        }
    };
    if (nthreads == 1 || to_scan < 1024) {
        worker(0, to_scan);
    } else {
        std::vector<std::thread> pool;
        for (int t = 0; t < nthreads; ++t) {
            std::uint64_t lo = static_cast<std::uint64_t>(t) * chunk;
            std::uint64_t hi = std::min(to_scan, lo + chunk);
            if (lo >= hi) break;
            pool.emplace_back(worker, lo, hi);
        }
        for (auto &th : pool) th.join();
    }

    std::uint64_t w = first_witness.load();
    if (w != UINT64_MAX) {
        std::vector<int> tuple(m);
        decode_tuple(w, dim, tuple);
        Vec out = A.zero();
        SparseElem s1, s2;
        eval_tuple(A, plans, tuple, out, s1, s2);
        res.verdict = Verdict::NonIdentity;
        res.witness = WitnessReport{make_assignment(vars, tuple), out};
        return res;
    }
    if (to_scan < total) {
        res.verdict = Verdict::Unknown;
        res.note = "budget exhausted after " + std::to_string(to_scan) + " of " +
                   std::to_string(total) + " tuples";
        return res;
    }
    res.verdict = Verdict::Identity;
    return res;
}

IdentityResult sparse_engine(const FDAlgebra &A, const Polynomial &f,
                             const std::vector<VarId> &vars, Budget &budget) {
    IdentityResult res;
    const int dim = A.dim();
    const size_t m = vars.size();
    std::map<VarId, int> pos;
    for (size_t i = 0; i < m; ++i) pos[vars[i]] = static_cast<int>(i);

    // Assignments are packed into 64-bit keys (position-major); falls back to
    // the dense walk path only through the caller, so the packing must fit.
    int bits = 1;
    while ((1 << bits) < dim) ++bits;
    if (m * static_cast<size_t>(bits) > 63) {
        res.verdict = Verdict::Unknown;
        res.note = "variable count too large for packed sparse enumeration";
        return res;
    }
    std::unordered_map<std::uint64_t, SparseElem> acc;
    acc.reserve(1024);

    std::uint64_t key = 0;
    bool out_of_budget = false;

    // DFS over word positions; only prefixes with a nonzero product survive.
    auto dfs = [&](auto &&self, const Monomial &word, const Rat &coeff, size_t at,
                   const SparseElem &prod) -> void {
        if (out_of_budget) return;
        if (at == word.word.size()) {
            SparseElem &slot = acc[key];
            for (const auto &[k, c] : prod.e) slot.add(k, coeff * c);
            return;
        }
        VarId v = word.word[at];
        int p = pos.at(v);
        for (int b = 0; b < dim; ++b) {
            SparseElem next;
            std::uint64_t ops;
            if (at == 0) {
                next.e.emplace_back(b, Rat(1));
                ops = 1;
            } else {
                ops = mul_basis(A, prod, b, next);
            }
            if (!budget.charge(ops + 1)) { out_of_budget = true; return; }
            if (next.empty()) continue;
            std::uint64_t saved = key;
            key |= static_cast<std::uint64_t>(b) << ((m - 1 - static_cast<size_t>(p)) * bits);
            self(self, word, coeff, at + 1, next);
            key = saved;
            if (out_of_budget) return;
        }
    };

    for (const auto &[word, coeff] : f.terms()) {
        if (word.empty()) {
            if (!A.unit()) throw std::invalid_argument("is_identity: unit monomial on nonunital algebra");
            // constant term: only reachable when the varset is empty
            SparseElem &slot = acc[0];
            for (int i = 0; i < dim; ++i)
                if (!(*A.unit())(i).is_zero()) slot.add(i, coeff * (*A.unit())(i));
            continue;
        }
        SparseElem seed;
        dfs(dfs, word, coeff, 0, seed);
        if (out_of_budget) break;
    }

    if (out_of_budget) {
        res.verdict = Verdict::Unknown;
        res.note = "budget exhausted during sparse path enumeration";
        return res;
    }
    // Deterministic witness: smallest packed key with a nonzero value.
    bool found = false;
    std::uint64_t best = 0;
    for (auto &[k, slot] : acc) {
        slot.prune();
        if (slot.empty()) continue;
        if (!found || k < best) {
            best = k;
            found = true;
        }
    }
    if (found) {
        std::vector<int> tuple(m);
        for (size_t i = 0; i < m; ++i)
            tuple[i] = static_cast<int>((best >> ((m - 1 - i) * bits)) & ((1u << bits) - 1));
        Vec value = A.zero();
        for (const auto &[k, c] : acc[best].e) value(k) += c;
        res.verdict = Verdict::NonIdentity;
        res.witness = WitnessReport{make_assignment(vars, tuple), value};
        return res;
    }
    res.verdict = Verdict::Identity;
    return res;
}

std::vector<std::vector<int>> prefilter_tuples(const FDAlgebra &A, const std::vector<VarId> &vars,
                                               const IdTestOptions &opt) {
    std::vector<std::vector<int>> tuples;
    for (const auto &hint : opt.hints) {
        std::vector<int> t;
        bool ok = true;
        for (VarId v : vars) {
            auto it = hint.find(v);
            if (it == hint.end() || it->second < 0 || it->second >= A.dim()) { ok = false; break; }
            t.push_back(it->second);
        }
        if (ok) tuples.push_back(std::move(t));
    }
    std::mt19937_64 rng(0x51f15eedULL); // fixed seed: identical runs, identical reports
    std::uniform_int_distribution<int> pick(0, A.dim() - 1);
    for (int s = 0; s < opt.prefilter_samples; ++s) {
        std::vector<int> t(vars.size());
        for (auto &x : t) x = pick(rng);
        tuples.push_back(std::move(t));
    }
    return tuples;
}

} // namespace

IdentityResult is_identity_multilinear(const FDAlgebra &A, const Polynomial &f, Budget &budget,
                                       const IdTestOptions &opt) {
    IdentityResult res;
    if (f.is_zero()) {
        res.verdict = Verdict::Identity;
        return res;
    }
    if (!is_multilinear(f))
        throw std::invalid_argument("is_identity_multilinear: polynomial is not multilinear");
    std::set<VarId> vset = f.vars();
    std::vector<VarId> vars(vset.begin(), vset.end());
    if (vars.empty()) {
        // Nonzero constant: only meaningful on a unital algebra.
        if (!A.unit()) throw std::invalid_argument("is_identity_multilinear: constant on nonunital algebra");
        Vec v = eval(A, f, {});
        res.verdict = v.isZero(Rat(0)) ? Verdict::Identity : Verdict::NonIdentity;
        if (res.verdict == Verdict::NonIdentity) res.witness = WitnessReport{{}, v};
        return res;
    }

    // Witness hunt on hints and deterministic random tuples first. A witness
    // is always re-derivable exactly; identity verdicts only come from the
    // exhaustive engines below.
    auto plans = plan_monomials(f, vars);
    auto cands = prefilter_tuples(A, vars, opt);
    std::uint64_t per_tuple = 0;
    for (const auto &p : plans) per_tuple += p.positions.size();
    if (!budget.charge(cands.size() * std::max<std::uint64_t>(per_tuple, 1))) {
        res.verdict = Verdict::Unknown;
        res.note = "budget exhausted during prefilter";
        return res;
    }
    if (auto w = try_candidates(A, plans, vars, cands)) {
        res.verdict = Verdict::NonIdentity;
        res.witness = std::move(w);
        return res;
    }

    Strategy st = opt.strategy;
    if (st == Strategy::Auto) {
        // The path enumeration is output-sensitive and usually far cheaper on
        // algebras with sparse products; the dense walk only wins when the
        // whole tuple space is tiny.
        long double dense_cost = std::pow(static_cast<long double>(A.dim()),
                                          static_cast<long double>(vars.size())) *
                                 static_cast<long double>(std::max<std::uint64_t>(per_tuple, 1));
        st = dense_cost <= 5e4L ? Strategy::DenseTuples : Strategy::SparsePaths;
    }
    std::uint64_t before = budget.used;
    res = (st == Strategy::DenseTuples) ? dense_engine(A, f, vars, budget, opt.threads)
                                        : sparse_engine(A, f, vars, budget);
    res.ops = budget.used - before;
    return res;
}

IdentityResult is_identity(const FDAlgebra &A, const Polynomial &f, Budget &budget,
                           const Limits &lim, const IdTestOptions &opt) {
    IdentityResult res;
    if (f.is_zero()) {
        res.verdict = Verdict::Identity;
        return res;
    }
    std::vector<PolarizedComponent> comps = multilinearize(f, lim);
    for (const auto &pc : comps) {
        if (pc.poly.is_zero()) continue;
        IdentityResult r = is_identity_multilinear(A, pc.poly, budget, opt);
        if (r.verdict == Verdict::NonIdentity) {
            r.note = "witness is for the multilinear polarization of a multihomogeneous component";
            return r;
        }
        if (r.verdict == Verdict::Unknown) return r;
    }
    res.verdict = Verdict::Identity;
    return res;
}

// ---------------------------------------------------------------------------
// Alternating-shape probe
// ---------------------------------------------------------------------------

Polynomial alternate_shape(const Monomial &skeleton, const AlternationShape &shape) {
    Polynomial f = Polynomial::monomial(skeleton);
    for (const auto &s : shape.small_sets)
        if (s.size() > 1) f = alt(f, std::set<VarId>(s.begin(), s.end()));
    for (const auto &s : shape.big_sets)
        if (s.size() > 1) f = alt(f, std::set<VarId>(s.begin(), s.end()));
    return f;
}

std::vector<NonzeroEval> collect_nonzero_basis_evals(const FDAlgebra &A, const Polynomial &f,
                                                     size_t cap, Budget &budget) {
    std::vector<NonzeroEval> hits;
    if (f.is_zero()) return hits;
    if (!is_multilinear(f))
        throw std::invalid_argument("collect_nonzero_basis_evals: polynomial is not multilinear");
    std::set<VarId> vset = f.vars();
    std::vector<VarId> vars(vset.begin(), vset.end());
    auto plans = plan_monomials(f, vars);
    std::uint64_t per_tuple = 0;
    for (const auto &p : plans) per_tuple += p.positions.size();
    per_tuple = std::max<std::uint64_t>(per_tuple, 1);

    std::vector<int> tuple(vars.size(), 0);
    Vec out = A.zero();
    SparseElem s1, s2;
    for (;;) {
        if (!budget.charge(per_tuple)) return hits;
        eval_tuple(A, plans, tuple, out, s1, s2);
        if (!out.isZero(Rat(0))) {
            hits.push_back({make_assignment(vars, tuple), out});
            if (hits.size() >= cap) return hits;
        }
        size_t p = tuple.size();
        bool done = true;
        while (p > 0) {
            --p;
            if (++tuple[p] < A.dim()) { done = false; break; }
            tuple[p] = 0;
        }
        if (done || tuple.empty()) return hits;
    }
}

ProbeResult alt_shape_probe(const FDAlgebra &A, const AlternationShape &shape, Budget &budget,
                            const ProbeConfig &cfg, const Limits &lim) {
    shape.validate();
    ProbeResult res;
    if (shape.total_degree() > lim.degree_cap) {
        res.outcome = ProbeOutcome::Unknown;
        res.note = "shape degree exceeds the degree cap";
        return res;
    }

    auto test_skeleton = [&](const Monomial &w, const std::vector<BasisAssignment> &hints)
        -> std::optional<IdentityResult> {
        Polynomial f = alternate_shape(w, shape);
        if (f.is_zero()) return std::nullopt;
        IdTestOptions opts = cfg.idtest;
        opts.hints.insert(opts.hints.end(), hints.begin(), hints.end());
        IdentityResult r = is_identity_multilinear(A, f, budget, opts);
        ++res.skeletons_tested;
        if (r.verdict == Verdict::NonIdentity) {
            res.outcome = ProbeOutcome::Witness;
            res.witness_poly = std::move(f);
            res.witness_skeleton = w;
            res.witness = r.witness;
            return r;
        }
        if (r.verdict == Verdict::Unknown) return r;
        return std::nullopt;
    };

    for (const auto &seed : cfg.seeds) {
        auto r = test_skeleton(seed.skeleton, seed.hints);
        if (r && r->verdict == Verdict::NonIdentity) return res;
        if (r && r->verdict == Verdict::Unknown) {
            res.outcome = ProbeOutcome::Unknown;
            res.note = "budget exhausted while testing seed skeletons";
            return res;
        }
    }

    // Deterministic enumeration: at each position append either the next
    // unused variable of some alternating set (sets in declared order, small
    // before big) or an unused free variable (in increasing order).
    std::vector<std::vector<VarId>> sets;
    for (auto s : shape.small_sets) {
        std::sort(s.begin(), s.end());
        if (!s.empty()) sets.push_back(std::move(s));
    }
    for (auto s : shape.big_sets) {
        std::sort(s.begin(), s.end());
        if (!s.empty()) sets.push_back(std::move(s));
    }
    std::vector<VarId> frees = shape.free_vars;
    std::sort(frees.begin(), frees.end());

    size_t degree = static_cast<size_t>(shape.total_degree());
    std::vector<size_t> set_used(sets.size(), 0);
    std::vector<bool> free_used(frees.size(), false);
    std::vector<VarId> word;
    word.reserve(degree);
    bool stop = false;
    bool truncated = false;

    std::function<void()> rec = [&]() {
        if (stop) return;
        if (word.size() == degree) {
            if (res.skeletons_tested >= cfg.skeleton_budget) {
                truncated = true;
                stop = true;
                return;
            }
            auto r = test_skeleton(Monomial(word), {});
            if (r) {
                if (r->verdict == Verdict::Unknown) {
                    truncated = true;
                    res.note = "eval budget exhausted during enumeration";
                }
                stop = true;
            }
            return;
        }
        for (size_t si = 0; si < sets.size() && !stop; ++si) {
            if (set_used[si] == sets[si].size()) continue;
            word.push_back(sets[si][set_used[si]]);
            ++set_used[si];
            rec();
            --set_used[si];
            word.pop_back();
        }
        for (size_t fi = 0; fi < frees.size() && !stop; ++fi) {
            if (free_used[fi]) continue;
            free_used[fi] = true;
            word.push_back(frees[fi]);
            rec();
            word.pop_back();
            free_used[fi] = false;
        }
    };
    rec();

    if (res.outcome == ProbeOutcome::Witness) return res;
    if (truncated) {
        res.outcome = ProbeOutcome::Unknown;
        if (res.note.empty())
            res.note = "skeleton budget exhausted after " + std::to_string(res.skeletons_tested);
        return res;
    }
    res.outcome = ProbeOutcome::NoneExhausted;
    return res;
}

} // namespace piwb
