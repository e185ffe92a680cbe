#include "piwb/kemer.hpp"

#include <algorithm>
#include <functional>
#include <limits>
#include <set>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

namespace piwb {

std::vector<TaggedBasisElement> wedderburn_basis(const FDAlgebra &, const WedderburnData &w) {
    std::vector<TaggedBasisElement> out;
    for (size_t ci = 0; ci < w.components.size(); ++ci) {
        const auto &c = w.components[ci];
        for (int a = 0; a < c.size; ++a)
            for (int b = 0; b < c.size; ++b)
                out.push_back({c.unit_at(a, b), static_cast<int>(ci),
                               "C" + std::to_string(ci + 1) + ".E" + std::to_string(a + 1) +
                                   std::to_string(b + 1)});
    }
    for (size_t r = 0; r < w.radical_basis.size(); ++r)
        out.push_back({w.radical_basis[r], -1, "J" + std::to_string(r + 1)});
    return out;
}

// ---------------------------------------------------------------------------
// Tagged-basis enumeration for full / property K
// ---------------------------------------------------------------------------

namespace {

struct TaggedScan {
    bool completed = false;
    std::uint64_t tuples = 0;
};

// Visits every assignment of f's variables to tagged basis elements; fn gets
// the index tuple and exact value. Returns completed=false when the budget
// ran out first.
TaggedScan scan_tagged(const FDAlgebra &A, const std::vector<TaggedBasisElement> &basis,
                       const Polynomial &f, Budget &budget,
                       const std::function<bool(const std::vector<int> &, const Vec &)> &fn) {
    TaggedScan sc;
    std::set<VarId> vset = f.vars();
    std::vector<VarId> vars(vset.begin(), vset.end());
    size_t m = vars.size();
    std::uint64_t per_tuple = 0;
    for (const auto &[mono, c] : f.terms()) per_tuple += mono.word.size();
    per_tuple = std::max<std::uint64_t>(per_tuple, 1) * static_cast<std::uint64_t>(A.dim());

    std::vector<int> tuple(m, 0);
    EvalAssignment sigma;
    for (;;) {
        if (!budget.charge(per_tuple)) return sc;
        for (size_t i = 0; i < m; ++i) sigma[vars[i]] = basis[static_cast<size_t>(tuple[i])].value;
        Vec v = eval(A, f, sigma);
        ++sc.tuples;
        if (!fn(tuple, v)) return sc; // early stop requested
        // odometer
        size_t p = m;
        while (p > 0) {
            --p;
            if (++tuple[p] < static_cast<int>(basis.size())) break;
            tuple[p] = 0;
            if (p == 0) {
                sc.completed = true;
                return sc;
            }
        }
        if (m == 0) {
            sc.completed = true;
            return sc;
        }
    }
}

BasisAssignment tagged_assignment(const Polynomial &f, const std::vector<int> &tuple) {
    std::set<VarId> vset = f.vars();
    std::vector<VarId> vars(vset.begin(), vset.end());
    BasisAssignment a;
    for (size_t i = 0; i < vars.size(); ++i) a[vars[i]] = tuple[i];
    return a;
}

} // namespace

FullnessReport check_full(const FDAlgebra &A, const WedderburnData &w, const Polynomial &f,
                          Budget &budget) {
    if (!is_multilinear(f)) throw std::invalid_argument("check_full: f must be multilinear");
    FullnessReport rep;
    auto basis = wedderburn_basis(A, w);
    int q = static_cast<int>(w.components.size());
    bool found_nonzero = false;
    bool all_full = true;

    auto visit = [&](const std::vector<int> &tuple, const Vec &v) {
        if (v.isZero(Rat(0))) return true;
        if (!found_nonzero) {
            found_nonzero = true;
            rep.witness = tagged_assignment(f, tuple);
        }
        std::vector<bool> seen(static_cast<size_t>(q), false);
        for (int idx : tuple) {
            int c = basis[static_cast<size_t>(idx)].component;
            if (c >= 0) seen[static_cast<size_t>(c)] = true;
        }
        for (int c = 0; c < q; ++c)
            if (!seen[static_cast<size_t>(c)]) {
                if (all_full) {
                    all_full = false;
                    rep.violating = tagged_assignment(f, tuple);
                    rep.missing_component = c;
                }
                return true;
            }
        return true;
    };
    TaggedScan sc = scan_tagged(A, basis, f, budget, visit);
    if (!sc.completed) {
        rep.note = "budget exhausted after " + std::to_string(sc.tuples) + " evaluations";
        return rep;
    }
    rep.nonidentity = found_nonzero;
    rep.full = found_nonzero && all_full;
    return rep;
}

PropertyKReport check_property_k(const FDAlgebra &A, const WedderburnData &w, const Polynomial &f,
                                 Budget &budget) {
    if (!is_multilinear(f)) throw std::invalid_argument("check_property_k: f must be multilinear");
    PropertyKReport rep;
    auto basis = wedderburn_basis(A, w);
    int threshold = w.nilpotency - 1;
    bool ok = true;

    auto visit = [&](const std::vector<int> &tuple, const Vec &v) {
        if (v.isZero(Rat(0))) return true;
        int radicals = 0;
        for (int idx : tuple)
            if (basis[static_cast<size_t>(idx)].component < 0) ++radicals;
        if (radicals < threshold) {
            ok = false;
            rep.violating = tagged_assignment(f, tuple);
            return false;
        }
        return true;
    };
    TaggedScan sc = scan_tagged(A, basis, f, budget, visit);
    if (!ok) {
        rep.holds = false;
        return rep;
    }
    if (!sc.completed) {
        rep.note = "budget exhausted after " + std::to_string(sc.tuples) + " evaluations";
        return rep;
    }
    rep.holds = true;
    return rep;
}

// ---------------------------------------------------------------------------
// Certificates
// ---------------------------------------------------------------------------

VerifyReport verify_kemer_certificate(const FDAlgebra &A, const KemerCertificate &cert) {
    VerifyReport rep;
    auto push = [&](const std::string &name, bool pass, const std::string &detail = "") {
        rep.checks.push_back({name, pass, detail});
    };

    try {
        cert.shape.validate();
        push("shape_disjoint_and_sized", true);
    } catch (const std::exception &e) {
        push("shape_disjoint_and_sized", false, e.what());
        return rep;
    }

    std::set<VarId> fv = cert.poly.vars();
    {
        bool ok = true;
        std::string missing;
        for (VarId v : cert.shape.universe())
            if (!fv.count(v)) {
                ok = false;
                missing = var_name(v);
                break;
            }
        push("sets_within_varset", ok, ok ? "" : "variable " + missing + " not in the polynomial");
        if (!ok) return rep;
    }

    push("multilinear", is_multilinear(cert.poly),
         is_multilinear(cert.poly) ? "" : "certificate polynomial is not multilinear");

    {
        bool ok = true;
        std::string bad;
        auto check_sets = [&](const std::vector<std::vector<VarId>> &sets, const char *kind) {
            for (size_t i = 0; i < sets.size() && ok; ++i) {
                std::set<VarId> X(sets[i].begin(), sets[i].end());
                if (!is_alternating_on(cert.poly, X)) {
                    ok = false;
                    bad = std::string(kind) + " set " + std::to_string(i + 1);
                }
            }
        };
        check_sets(cert.shape.small_sets, "small");
        check_sets(cert.shape.big_sets, "big");
        push("alternation", ok, ok ? "" : bad + " fails the transposition antisymmetry check");
    }

    {
        bool covers = true;
        for (VarId v : fv)
            if (!cert.assignment.count(v)) covers = false;
        if (!covers) {
            push("witness_nonzero", false, "assignment does not cover the variables");
        } else {
            Vec v = eval(A, cert.poly, cert.assignment);
            bool nz = !v.isZero(Rat(0));
            bool matches = v == cert.value;
            push("witness_nonzero", nz && matches,
                 !nz ? "witness evaluates to zero"
                     : (matches ? "" : "witness value differs from the declared value"));
        }
    }
    return rep;
}

VarId choose_zubrilin_extra(const KemerCertificate &cert, int set_index) {
    if (set_index < 0 || set_index >= static_cast<int>(cert.shape.small_sets.size()))
        throw std::invalid_argument("choose_zubrilin_extra: set index out of range");
    std::set<VarId> S(cert.shape.small_sets[static_cast<size_t>(set_index)].begin(),
                      cert.shape.small_sets[static_cast<size_t>(set_index)].end());
    std::vector<VarId> frees = cert.shape.free_vars;
    std::sort(frees.begin(), frees.end());
    for (VarId y : frees) {
        bool borders = true;
        for (const auto &[m, c] : cert.poly.terms()) {
            bool ok = false;
            for (size_t i = 0; i + 1 < m.word.size(); ++i)
                if (m.word[i] == y && S.count(m.word[i + 1])) { ok = true; break; }
            if (!ok) { borders = false; break; }
        }
        if (borders) return y;
    }
    if (frees.empty()) throw std::invalid_argument("choose_zubrilin_extra: no free variables");
    return frees.front();
}

bool basic_certified(const FDAlgebra &A, const WedderburnData &w, const KemerCertificate &cert) {
    if (!verify_kemer_certificate(A, cert).all_pass()) return false;
    int d = w.semisimple_dim();
    if (cert.shape.small_sets.empty() && d > 0) return false;
    for (const auto &s : cert.shape.small_sets)
        if (static_cast<int>(s.size()) != d) return false;
    if (static_cast<int>(cert.shape.big_sets.size()) != w.nilpotency - 1) return false;
    for (const auto &s : cert.shape.big_sets)
        if (static_cast<int>(s.size()) != d + 1) return false;
    return true;
}

// ---------------------------------------------------------------------------
// Eulerian unit words
// ---------------------------------------------------------------------------

std::vector<std::pair<int, int>> eulerian_unit_word(int k, int t) {
    if (k < 1 || t < 0 || t >= k) throw std::invalid_argument("eulerian_unit_word: bad parameters");
    // Hierholzer on the complete digraph with loops: every vertex has
    // in-degree = out-degree = k, so a circuit through all k^2 edges exists.
    std::vector<int> next(static_cast<size_t>(k), 0);
    std::vector<int> stack{t};
    std::vector<int> circuit;
    while (!stack.empty()) {
        int v = stack.back();
        if (next[static_cast<size_t>(v)] < k) {
            stack.push_back(next[static_cast<size_t>(v)]++);
        } else {
            circuit.push_back(v);
            stack.pop_back();
        }
    }
    std::reverse(circuit.begin(), circuit.end());
    std::vector<std::pair<int, int>> edges;
    for (size_t i = 0; i + 1 < circuit.size(); ++i)
        edges.emplace_back(circuit[i], circuit[i + 1]);
    if (static_cast<int>(edges.size()) != k * k || circuit.front() != t || circuit.back() != t)
        throw std::logic_error("eulerian_unit_word: circuit construction failed");
    return edges;
}

// ---------------------------------------------------------------------------
// Kemer Lemma 1 constructor
// ---------------------------------------------------------------------------

namespace {

VarId named_fresh_var(const std::string &name, const std::set<VarId> &taken) {
    VarId v = var(name);
    if (taken.count(v))
        throw std::invalid_argument("variable name '" + name +
                                    "' collides with the base polynomial; rename the base variables");
    return v;
}

struct ZBlock {
    Polynomial poly;                          // alternated Sigma word for one component
    std::vector<std::vector<VarId>> folds;    // designated set per fold
    EvalAssignment values;                    // frames and designated values
};

// Sigma_nu{t}: nu concatenated framed Eulerian words for component ci, each
// designated set alternated separately.
ZBlock build_z_block(const WedderburnData::Component &comp, int ci, int t, int folds,
                     const std::set<VarId> &taken) {
    ZBlock z;
    auto edges = eulerian_unit_word(comp.size, t);
    std::vector<VarId> word;
    for (int p = 1; p <= folds; ++p) {
        std::vector<VarId> dset;
        for (size_t e = 0; e < edges.size(); ++e) {
            auto [r, c] = edges[e];
            std::string stem =
                std::to_string(ci + 1) + "_" + std::to_string(p) + "_" + std::to_string(e + 1);
            VarId yl = named_fresh_var("yl" + stem, taken);
            VarId u = named_fresh_var("u" + stem, taken);
            VarId yr = named_fresh_var("yr" + stem, taken);
            word.push_back(yl);
            word.push_back(u);
            word.push_back(yr);
            z.values[yl] = comp.unit_at(r, r);
            z.values[u] = comp.unit_at(r, c);
            z.values[yr] = comp.unit_at(c, c);
            dset.push_back(u);
        }
        z.folds.push_back(dset);
    }
    z.poly = Polynomial::monomial(Monomial(word));
    for (const auto &dset : z.folds)
        if (dset.size() > 1) z.poly = alt(z.poly, std::set<VarId>(dset.begin(), dset.end()));
    return z;
}

} // namespace

KemerCertificate construct_kemer_lemma1(const FDAlgebra &A, const WedderburnData &w,
                                        const FullWitness &base, int nu, const Limits &lim) {
    int q = static_cast<int>(w.components.size());
    if (q < 1) throw std::invalid_argument("construct_kemer_lemma1: algebra has no simple components");
    if (nu < 1) throw std::invalid_argument("construct_kemer_lemma1: nu must be >= 1");
    if (static_cast<int>(base.component_vars.size()) != q)
        throw std::invalid_argument("construct_kemer_lemma1: need one designated variable per component");
    std::set<VarId> fv = base.poly.vars();
    for (VarId v : base.component_vars)
        if (!fv.count(v))
            throw std::invalid_argument("construct_kemer_lemma1: designated variable missing from the polynomial");
    if (!is_multilinear(base.poly))
        throw std::invalid_argument("construct_kemer_lemma1: base polynomial must be multilinear");

    // Designated values must sit inside their components.
    for (int i = 0; i < q; ++i) {
        auto it = base.assignment.find(base.component_vars[static_cast<size_t>(i)]);
        if (it == base.assignment.end())
            throw std::invalid_argument("construct_kemer_lemma1: assignment misses a designated variable");
        Mat span = columns<Rat>(w.components[static_cast<size_t>(i)].units, A.dim());
        if (!in_span<Rat>(span, it->second))
            throw std::invalid_argument("construct_kemer_lemma1: designated value lies outside component " +
                                        std::to_string(i + 1));
    }
    Vec base_val = eval(A, base.poly, base.assignment);
    if (base_val.isZero(Rat(0)))
        throw std::invalid_argument("construct_kemer_lemma1: base evaluation is zero");

    Limits wide = lim;
    {
        int extra = 0;
        for (const auto &c : w.components) extra += 3 * c.size * c.size * nu;
        wide.degree_cap = std::max(lim.degree_cap, base.poly.degree() + extra);
    }

    // Border each designated variable on the left by a fresh variable.
    std::vector<VarId> borders;
    std::map<VarId, Polynomial> border_sub;
    for (int i = 0; i < q; ++i) {
        VarId zb = named_fresh_var("zb" + std::to_string(i + 1), fv);
        borders.push_back(zb);
        VarId xi = base.component_vars[static_cast<size_t>(i)];
        border_sub[xi] = Polynomial::monomial(Monomial({zb, xi}));
    }
    Polynomial f1 = substitute(base.poly, border_sub, wide);

    // Greedy idempotent selection: z_i = 1_{A_i} keeps the value, hence some
    // diagonal unit keeps it nonzero; fix components one at a time.
    EvalAssignment cur = base.assignment;
    for (int i = 0; i < q; ++i) {
        const auto &c = w.components[static_cast<size_t>(i)];
        Vec one = A.zero();
        for (int a = 0; a < c.size; ++a) one += c.unit_at(a, a);
        cur[borders[static_cast<size_t>(i)]] = one;
    }
    if (eval(A, f1, cur) != base_val)
        throw std::logic_error("construct_kemer_lemma1: component identities failed to absorb");
    std::vector<int> chosen_t(static_cast<size_t>(q), 0);
    for (int i = 0; i < q; ++i) {
        const auto &c = w.components[static_cast<size_t>(i)];
        bool found = false;
        for (int a = 0; a < c.size && !found; ++a) {
            EvalAssignment trial = cur;
            trial[borders[static_cast<size_t>(i)]] = c.unit_at(a, a);
            if (!eval(A, f1, trial).isZero(Rat(0))) {
                cur = trial;
                chosen_t[static_cast<size_t>(i)] = a;
                found = true;
            }
        }
        if (!found)
            throw std::logic_error("construct_kemer_lemma1: no diagonal unit keeps the evaluation nonzero");
    }
    Vec bordered_val = eval(A, f1, cur);

    // Build and substitute the alternated Eulerian words.
    std::vector<ZBlock> blocks;
    std::map<VarId, Polynomial> zsub;
    EvalAssignment final_assign = base.assignment;
    for (int i = 0; i < q; ++i) {
        ZBlock z = build_z_block(w.components[static_cast<size_t>(i)], i,
                                 chosen_t[static_cast<size_t>(i)], nu, fv);
        zsub[borders[static_cast<size_t>(i)]] = z.poly;
        for (const auto &[v, val] : z.values) final_assign[v] = val;
        blocks.push_back(std::move(z));
    }
    Polynomial fprime = substitute(f1, zsub, wide);

    // Cross-alternate the p-th designated sets across the components.
    AlternationShape shape;
    for (int p = 0; p < nu; ++p) {
        std::vector<std::vector<VarId>> sets;
        std::vector<VarId> small;
        for (const auto &z : blocks) {
            sets.push_back(z.folds[static_cast<size_t>(p)]);
            small.insert(small.end(), z.folds[static_cast<size_t>(p)].begin(),
                         z.folds[static_cast<size_t>(p)].end());
        }
        if (sets.size() > 1) fprime = shuffle_alt(fprime, sets);
        std::sort(small.begin(), small.end());
        shape.small_sets.push_back(small);
    }

    Vec value = eval(A, fprime, final_assign);
    if (value != bordered_val)
        throw std::logic_error("construct_kemer_lemma1: alternation disturbed the certifying evaluation");

    std::set<VarId> in_sets;
    for (const auto &s : shape.small_sets) in_sets.insert(s.begin(), s.end());
    for (VarId v : fprime.vars())
        if (!in_sets.count(v)) shape.free_vars.push_back(v);

    KemerCertificate cert;
    cert.poly = std::move(fprime);
    cert.shape = std::move(shape);
    cert.assignment = std::move(final_assign);
    cert.value = value;
    return cert;
}

// ---------------------------------------------------------------------------
// Kemer Lemma 2 (unital cases)
// ---------------------------------------------------------------------------

KemerCertificate assemble_kemer_lemma2_unital(const FDAlgebra &A, const WedderburnData &w,
                                              const Polynomial &f_k,
                                              const EvalAssignment &witness, int nu, Budget &budget,
                                              const Limits &lim) {
    int q = static_cast<int>(w.components.size());
    if (!A.unit()) throw Lemma2Error("unital", "algebra has no unit");
    {
        Vec e = w.semisimple_identity(A);
        if (!A.unit() || *A.unit() != e)
            throw Lemma2Error("unital", "the unit does not equal the sum of component identities");
    }
    if (q < 1) throw Lemma2Error("components", "no simple components");
    if (!is_multilinear(f_k)) throw Lemma2Error("multilinear", "f is not multilinear");

    Vec f_val = eval(A, f_k, witness);
    if (f_val.isZero(Rat(0))) throw Lemma2Error("witness", "witness evaluation is zero");

    {
        PropertyKReport pk = check_property_k(A, w, f_k, budget);
        if (!pk.holds.has_value()) throw Lemma2Error("property_k", "budget exhausted: " + pk.note);
        if (!*pk.holds) throw Lemma2Error("property_k", "property K check failed");
    }

    // Classify witness values. Radical variables are those whose value lies
    // in the radical span; everything else must live in a component span.
    Mat rad_span = columns<Rat>(w.radical_basis, A.dim());
    std::vector<Mat> comp_spans;
    for (const auto &c : w.components) comp_spans.push_back(columns<Rat>(c.units, A.dim()));
    std::vector<VarId> radical_vars;
    for (const auto &[v, val] : witness) {
        if (!f_k.vars().count(v)) continue;
        if (!w.radical_basis.empty() && in_span<Rat>(rad_span, val)) {
            radical_vars.push_back(v);
            continue;
        }
        bool in_comp = false;
        for (const auto &sp : comp_spans)
            if (in_span<Rat>(sp, val)) { in_comp = true; break; }
        if (!in_comp)
            throw Lemma2Error("classify", "witness value of " + var_name(v) +
                                              " is neither radical nor inside one component");
    }
    int s = w.nilpotency - 1;
    if (static_cast<int>(radical_vars.size()) != s)
        throw Lemma2Error("radical_count",
                          "nonzero property-K witness must use exactly n_A - 1 radical values, got " +
                              std::to_string(radical_vars.size()));

    int folds = nu + s;
    std::set<VarId> fv = f_k.vars();
    EvalAssignment sigma = witness;
    Polynomial g = f_k;

    std::vector<VarId> designated;
    if (q == 1) {
        // h * f with h built from a fresh left variable evaluated at the unit.
        VarId x0 = named_fresh_var("h0", fv);
        g = Polynomial::variable(x0) * g;
        sigma[x0] = *A.unit();
        designated = {x0};
        if (eval(A, g, sigma) != f_val) throw Lemma2Error("left_unit", "left unit failed to absorb");
    } else {
        // Border every radical value by component idempotents, keeping the
        // evaluation nonzero (possible by linearity).
        auto comp_one = [&](int t) {
            Vec one = A.zero();
            const auto &c = w.components[static_cast<size_t>(t)];
            for (int a = 0; a < c.size; ++a) one += c.unit_at(a, a);
            return one;
        };
        std::map<VarId, std::pair<int, int>> border_of;
        for (VarId wv : radical_vars) {
            bool fixed = false;
            for (int al = 0; al < q && !fixed; ++al)
                for (int be = 0; be < q && !fixed; ++be) {
                    EvalAssignment trial = sigma;
                    trial[wv] = A.multiply(comp_one(al), A.multiply(sigma.at(wv), comp_one(be)));
                    if (!eval(A, f_k, trial).isZero(Rat(0))) {
                        sigma = trial;
                        border_of[wv] = {al, be};
                        fixed = true;
                    }
                }
            if (!fixed)
                throw Lemma2Error("border", "no idempotent pair keeps the evaluation nonzero for " +
                                                var_name(wv));
        }
        // Attach each component to a cross-bordered radical variable.
        std::map<VarId, Polynomial> attach_sub;
        std::map<VarId, std::vector<VarId>> left_of, right_of;
        for (int t = 0; t < q; ++t) {
            VarId host = -1;
            bool left = false;
            for (VarId wv : radical_vars) {
                auto [al, be] = border_of.at(wv);
                if (al == be) continue;
                if (al == t) { host = wv; left = true; break; }
                if (be == t) { host = wv; left = false; break; }
            }
            if (host < 0)
                throw Lemma2Error("attach", "component " + std::to_string(t + 1) +
                                                " is not represented among the cross borders");
            VarId y = named_fresh_var((left ? "ya" : "yb") + std::to_string(t + 1), fv);
            if (left)
                left_of[host].push_back(y);
            else
                right_of[host].push_back(y);
            sigma[y] = comp_one(t);
            designated.push_back(y);
        }
        for (VarId wv : radical_vars) {
            if (!left_of.count(wv) && !right_of.count(wv)) continue;
            std::vector<VarId> word;
            if (left_of.count(wv)) word.insert(word.end(), left_of[wv].begin(), left_of[wv].end());
            word.push_back(wv);
            if (right_of.count(wv)) word.insert(word.end(), right_of[wv].begin(), right_of[wv].end());
            attach_sub[wv] = Polynomial::monomial(Monomial(word));
        }
        Limits wide = lim;
        wide.degree_cap = std::max(lim.degree_cap, g.degree() + q);
        g = substitute(g, attach_sub, wide);
        if (eval(A, g, sigma).isZero(Rat(0)))
            throw Lemma2Error("attach_eval", "idempotent attachment killed the evaluation");
    }

    // The designated variables now carry component-identity values: feed the
    // construction of Kemer Lemma 1 with nu + s folds.
    // For q > 1 the designated list built above has exactly one variable per
    // component, ordered by component.
    FullWitness base;
    base.poly = g;
    base.component_vars = designated;
    base.assignment = sigma;
    KemerCertificate cert0 = construct_kemer_lemma1(A, w, base, folds, lim);

    // Merge each radical variable into its own trailing small set.
    Polynomial f2 = cert0.poly;
    AlternationShape shape;
    for (int p = 0; p < nu; ++p) shape.small_sets.push_back(cert0.shape.small_sets[static_cast<size_t>(p)]);
    for (int j = 0; j < s; ++j) {
        VarId wv = radical_vars[static_cast<size_t>(j)];
        const auto &host_set = cert0.shape.small_sets[static_cast<size_t>(nu + j)];
        f2 = shuffle_alt(f2, {host_set, {wv}});
        std::vector<VarId> big = host_set;
        big.push_back(wv);
        std::sort(big.begin(), big.end());
        shape.big_sets.push_back(big);
    }
    Vec value = eval(A, f2, cert0.assignment);
    if (value.isZero(Rat(0)))
        throw Lemma2Error("merge", "merging the radical variables into big sets killed the evaluation");

    std::set<VarId> in_sets;
    for (const auto &st : shape.small_sets) in_sets.insert(st.begin(), st.end());
    for (const auto &st : shape.big_sets) in_sets.insert(st.begin(), st.end());
    for (VarId v : f2.vars())
        if (!in_sets.count(v)) shape.free_vars.push_back(v);

    KemerCertificate cert;
    cert.poly = std::move(f2);
    cert.shape = std::move(shape);
    cert.assignment = cert0.assignment;
    cert.value = value;

    VerifyReport rep = verify_kemer_certificate(A, cert);
    if (!rep.all_pass()) {
        std::string bad;
        for (const auto &c : rep.checks)
            if (!c.pass) bad += c.check + " (" + c.detail + ") ";
        throw Lemma2Error("final_verification", bad);
    }
    return cert;
}

// ---------------------------------------------------------------------------
// Bounded Kemer-index probing
// ---------------------------------------------------------------------------

namespace {

struct Universe {
    AlternationShape shape;
};

Universe make_universe(int nu, int set_size, int big_count, int big_size, int extras) {
    Universe u;
    int counter = 1;
    for (int i = 0; i < nu; ++i) {
        std::vector<VarId> s;
        for (int j = 0; j < set_size; ++j)
            s.push_back(var("q" + std::to_string(counter) + "_" + std::to_string(j + 1)));
        ++counter;
        if (set_size > 0) u.shape.small_sets.push_back(s);
    }
    for (int i = 0; i < big_count; ++i) {
        std::vector<VarId> s;
        for (int j = 0; j < big_size; ++j)
            s.push_back(var("q" + std::to_string(counter) + "_" + std::to_string(j + 1)));
        ++counter;
        u.shape.big_sets.push_back(s);
    }
    for (int e = 0; e < extras; ++e)
        u.shape.free_vars.push_back(var("w" + std::to_string(e + 1)));
    return u;
}

// Deterministic seed skeletons for a single-component algebra: products of nu
// Capelli blocks with interleaved borders, plus composed basis assignments
// found by a bounded dense scan of one block.
std::vector<ProbeSeed> capelli_block_seeds(const FDAlgebra &A, const AlternationShape &shape,
                                           int nu, int r) {
    std::vector<ProbeSeed> seeds;
    if (static_cast<int>(shape.free_vars.size()) != nu * (r - 1)) return seeds;
    // Block skeleton: x_{p,1} b x_{p,2} b ... b x_{p,r} per small set p.
    std::vector<VarId> word;
    size_t border_at = 0;
    for (int p = 0; p < nu; ++p) {
        std::vector<VarId> s = shape.small_sets[static_cast<size_t>(p)];
        std::sort(s.begin(), s.end());
        for (int i = 0; i < r; ++i) {
            word.push_back(s[static_cast<size_t>(i)]);
            if (i + 1 < r) word.push_back(shape.free_vars[border_at++]);
        }
    }
    ProbeSeed seed;
    seed.skeleton = Monomial(word);

    // Witnesses of a single block, collected exhaustively up to a cap.
    std::vector<VarId> bx, bb;
    for (int i = 0; i < r; ++i) bx.push_back(var("blkx" + std::to_string(i + 1)));
    for (int i = 0; i + 1 < r; ++i) bb.push_back(var("blkb" + std::to_string(i + 1)));
    Limits blk_lim;
    blk_lim.degree_cap = 2 * r;
    Polynomial block = capelli(bx, bb, blk_lim);
    Budget blk_budget(200'000'000);
    std::vector<NonzeroEval> hits = collect_nonzero_basis_evals(A, block, 128, blk_budget);
    if (hits.empty()) return seeds;

    // Compose one hit per block so the chained product stays nonzero.
    std::vector<const NonzeroEval *> chain;
    std::function<bool(int, const Vec *)> pick = [&](int p, const Vec *acc) -> bool {
        if (p == nu) return true;
        for (const auto &h : hits) {
            Vec next = acc ? A.multiply(*acc, h.value) : h.value;
            if (next.isZero(Rat(0))) continue;
            chain.push_back(&h);
            if (pick(p + 1, &next)) return true;
            chain.pop_back();
        }
        return false;
    };
    if (!pick(0, nullptr)) return seeds;

    BasisAssignment hint;
    border_at = 0;
    for (int p = 0; p < nu; ++p) {
        std::vector<VarId> s = shape.small_sets[static_cast<size_t>(p)];
        std::sort(s.begin(), s.end());
        const auto &asg = chain[static_cast<size_t>(p)]->assignment;
        for (int i = 0; i < r; ++i)
            hint[s[static_cast<size_t>(i)]] = asg.at(bx[static_cast<size_t>(i)]);
        for (int i = 0; i + 1 < r; ++i)
            hint[shape.free_vars[border_at++]] = asg.at(bb[static_cast<size_t>(i)]);
    }
    seed.hints.push_back(hint);
    seeds.push_back(std::move(seed));
    return seeds;
}

struct SizeProbe {
    bool witness_found = false;
    bool all_exhausted = true;
    std::optional<Polynomial> witness;
};

} // namespace

KemerProbeReport kemer_probe(const FDAlgebra &A, const WedderburnData *w, int nu_max,
                             const ProbeBudgets &budgets, const Limits &lim) {
    if (nu_max < 1) throw std::invalid_argument("kemer_probe: nu_max must be >= 1");
    KemerProbeReport rep;
    Budget budget(budgets.eval_budget);
    Limits plim = lim;
    plim.degree_cap = std::max(lim.degree_cap, budgets.degree_budget);

    int q = w ? static_cast<int>(w->components.size()) : 0;
    int dA = w ? w->semisimple_dim() : 0;
    int nA = w ? w->nilpotency : 0;

    auto probe_shape = [&](int nu, int set_size, int big_count, int big_size,
                           bool with_seeds) -> SizeProbe {
        SizeProbe out;
        int base_degree = nu * set_size + big_count * big_size;
        int max_extras = std::min(budgets.extras_budget, budgets.degree_budget - base_degree);
        if (max_extras < 0) {
            out.all_exhausted = false;
            return out;
        }
        for (int extras = 0; extras <= max_extras; ++extras) {
            if (base_degree + extras == 0) continue;
            Universe u = make_universe(nu, set_size, big_count, big_size, extras);
            ProbeConfig cfg;
            cfg.skeleton_budget = budgets.skeleton_budget;
            cfg.idtest.threads = budgets.threads;
            cfg.idtest.prefilter_samples = 4;
            if (with_seeds && w && q == 1 && big_count == 0 &&
                set_size == w->components[0].size * w->components[0].size &&
                extras == nu * (set_size - 1))
                cfg.seeds = capelli_block_seeds(A, u.shape, nu, set_size);
            ProbeResult r = alt_shape_probe(A, u.shape, budget, cfg, plim);
            if (r.outcome == ProbeOutcome::Witness) {
                out.witness_found = true;
                out.witness = r.witness_poly;
                return out;
            }
            if (r.outcome == ProbeOutcome::Unknown) out.all_exhausted = false;
        }
        return out;
    };

    // Seed-only pass for the single-component ceiling size: avoids burning
    // the skeleton budget on the smaller-extras universes first.
    auto seed_pass = [&](int nu, int set_size) -> SizeProbe {
        SizeProbe out;
        out.all_exhausted = false;
        if (!(w && q == 1 && set_size == dA)) return out;
        int extras = nu * (set_size - 1);
        if (extras > budgets.extras_budget || nu * set_size + extras > budgets.degree_budget)
            return out;
        Universe u = make_universe(nu, set_size, 0, 0, extras);
        ProbeConfig cfg;
        cfg.skeleton_budget = 0; // seeds only
        cfg.idtest.threads = budgets.threads;
        cfg.idtest.prefilter_samples = 4;
        cfg.seeds = capelli_block_seeds(A, u.shape, nu, set_size);
        if (cfg.seeds.empty()) return out;
        ProbeResult r = alt_shape_probe(A, u.shape, budget, cfg, plim);
        if (r.outcome == ProbeOutcome::Witness) {
            out.witness_found = true;
            out.witness = r.witness_poly;
        }
        return out;
    };

    // Pass 1: d_nu.
    for (int nu = 1; nu <= nu_max; ++nu) {
        KemerProbeRow row;
        row.nu = nu;
        int ceiling = A.dim();
        if (w && nu >= nA) ceiling = dA;
        int search_top = std::min(ceiling, budgets.degree_budget / std::max(nu, 1));
        bool reach_ceiling = search_top == ceiling;
        bool above_exhausted = reach_ceiling;
        int found_r = 0;
        for (int r = search_top; r >= 1; --r) {
            SizeProbe sp = seed_pass(nu, r);
            if (!sp.witness_found) sp = probe_shape(nu, r, 0, 0, true);
            if (sp.witness_found) {
                found_r = r;
                row.d_witness = sp.witness;
                row.d_status = (w && above_exhausted) ? CoordStatus::Exact : CoordStatus::LowerBound;
                break;
            }
            if (!sp.all_exhausted) above_exhausted = false;
        }
        row.d_nu = found_r;
        if (found_r == 0)
            row.d_status = (w && above_exhausted) ? CoordStatus::Exact : CoordStatus::LowerBound;
        rep.rows.push_back(row);
    }

    int d = rep.rows.back().d_nu;
    CoordStatus d_status = rep.rows.back().d_status;

    // Pass 2: s_nu with small sets of the limiting size d.
    for (auto &row : rep.rows) {
        int nu = row.nu;
        bool ceiling_known = w && d == dA && d_status == CoordStatus::Exact;
        int ceiling = ceiling_known ? nA - 1 : std::numeric_limits<int>::max();
        int degree_room = budgets.degree_budget - nu * d;
        int search_top = std::min(ceiling, d + 1 > 0 ? degree_room / (d + 1) : 0);
        bool above_excluded = ceiling_known && search_top == ceiling;
        int found_j = -1;
        for (int j = search_top; j >= 0; --j) {
            SizeProbe sp;
            if (j == 0 && d > 0 && row.d_nu == d && row.d_witness) {
                sp.witness_found = true;
                sp.witness = row.d_witness;
            } else {
                sp = probe_shape(nu, d, j, d + 1, false);
            }
            if (sp.witness_found) {
                found_j = j;
                row.s_witness = sp.witness;
                row.s_status = (w && above_excluded && d_status == CoordStatus::Exact)
                                   ? CoordStatus::Exact
                                   : CoordStatus::LowerBound;
                break;
            }
            if (!sp.all_exhausted) above_excluded = false;
        }
        row.s_nu = std::max(found_j, 0);
        if (found_j < 0) {
            row.s_status = CoordStatus::LowerBound;
            row.note = "no witness found even with zero big sets";
        }
    }

    rep.index.d = d;
    rep.index.d_status = d_status;
    rep.index.s = rep.rows.back().s_nu;
    rep.index.s_status = rep.rows.back().s_status;
    if (w && nu_max < nA) {
        // d_nu has provably stabilized at the Par ceiling only from nu >= n_A
        // on; below that the nu_max row may still sit above the limit.
        rep.index.d_status = CoordStatus::LowerBound;
        rep.index.s_status = CoordStatus::LowerBound;
        rep.note = "nu_max is below the nilpotency index; the reported pair is the nu_max row, "
                   "not a stabilized limit";
    }
    if (budget.exhausted()) rep.note = "evaluation budget exhausted; values are lower bounds";
    return rep;
}

// ---------------------------------------------------------------------------
// Certificate JSON
// ---------------------------------------------------------------------------

using nlohmann::json;

namespace {
json vec_json(const Vec &v) {
    json a = json::array();
    for (long i = 0; i < v.size(); ++i) a.push_back(v(i).str());
    return a;
}
Vec vec_unjson(const json &j, int dim) {
    if (!j.is_array() || static_cast<int>(j.size()) != dim)
        throw std::runtime_error("certificate json: bad vector length");
    Vec v(dim);
    for (int i = 0; i < dim; ++i)
        v(i) = j[static_cast<size_t>(i)].is_number_integer()
                   ? Rat(static_cast<long>(j[static_cast<size_t>(i)].get<long long>()))
                   : Rat::parse(j[static_cast<size_t>(i)].get<std::string>());
    return v;
}
json varlist_json(const std::vector<VarId> &vs) {
    json a = json::array();
    for (VarId v : vs) a.push_back(var_name(v));
    return a;
}
std::vector<VarId> varlist_unjson(const json &j) {
    std::vector<VarId> out;
    for (const auto &s : j) out.push_back(var(s.get<std::string>()));
    return out;
}
} // namespace

std::string certificate_to_json(const KemerCertificate &cert, const FDAlgebra &) {
    json j;
    j["poly"] = to_string(cert.poly);
    json shape;
    shape["small"] = json::array();
    for (const auto &s : cert.shape.small_sets) shape["small"].push_back(varlist_json(s));
    shape["big"] = json::array();
    for (const auto &s : cert.shape.big_sets) shape["big"].push_back(varlist_json(s));
    shape["free"] = varlist_json(cert.shape.free_vars);
    j["shape"] = shape;
    json as;
    for (const auto &[v, val] : cert.assignment) as[var_name(v)] = vec_json(val);
    j["assignment"] = as;
    j["value"] = vec_json(cert.value);
    return j.dump(2);
}

KemerCertificate certificate_from_json(const std::string &text, const FDAlgebra &A,
                                       const Limits &lim) {
    json j = json::parse(text);
    KemerCertificate cert;
    Limits wide = lim;
    wide.degree_cap = 1 << 20; // certificates may legitimately exceed the parse cap
    cert.poly = parse_poly(j.at("poly").get<std::string>(), wide);
    for (const auto &s : j.at("shape").at("small")) cert.shape.small_sets.push_back(varlist_unjson(s));
    for (const auto &s : j.at("shape").at("big")) cert.shape.big_sets.push_back(varlist_unjson(s));
    cert.shape.free_vars = varlist_unjson(j.at("shape").at("free"));
    for (const auto &[k, v] : j.at("assignment").items())
        cert.assignment[var(k)] = vec_unjson(v, A.dim());
    cert.value = vec_unjson(j.at("value"), A.dim());
    return cert;
}

} // namespace piwb
