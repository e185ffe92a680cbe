#include "piwb/traceops.hpp"

#include <algorithm>
#include <functional>
#include <set>
#include <stdexcept>

namespace piwb {

void DeltaSpec::validate() const {
    if (k < 0 || k > static_cast<int>(designated.size()))
        throw std::invalid_argument("DeltaSpec: k out of range");
    if (z.word.empty()) throw std::invalid_argument("DeltaSpec: z must be a nonempty monomial");
    std::set<VarId> xs(designated.begin(), designated.end());
    if (xs.size() != designated.size())
        throw std::invalid_argument("DeltaSpec: designated variables repeat");
    for (VarId v : z.word)
        if (xs.count(v))
            throw std::invalid_argument("DeltaSpec: z must be independent of the designated variables");
}

Polynomial delta(const DeltaSpec &spec, const Polynomial &f, const Limits &lim) {
    spec.validate();
    return delta_expand(spec.k, spec.z, spec.designated, f, lim);
}

DeltaPropertyReport delta_properties_check(const DeltaSpec &spec, int k2, const Polynomial &f,
                                           const Limits &lim) {
    spec.validate();
    DeltaSpec spec2 = spec;
    spec2.k = k2;
    spec2.validate();
    DeltaPropertyReport rep;
    // Composing two deltas inserts up to 2 |z| letters per designated slot.
    Limits wide = lim;
    wide.degree_cap =
        std::max(lim.degree_cap,
                 f.degree() + 2 * spec.z.degree() * static_cast<int>(spec.designated.size()));

    std::set<VarId> X(spec.designated.begin(), spec.designated.end());
    if (is_multilinear_in(f, X) && is_alternating_on(f, X)) {
        rep.alternation_applicable = true;
        Polynomial df = delta(spec, f, wide);
        rep.alternation_pass = is_alternating_on(df, X);
        if (!rep.alternation_pass) rep.detail = "delta_k broke alternation on the designated set";
    }

    Polynomial ab = delta(spec2, delta(spec, f, wide), wide);
    Polynomial ba = delta(spec, delta(spec2, f, wide), wide);
    rep.commute_pass = ab == ba;
    if (!rep.commute_pass) rep.detail = "delta_k and delta_k' do not commute on this input";
    return rep;
}

ZubrilinResult zubrilin_ch_check(const FDAlgebra &A, const Polynomial &f,
                                 const std::vector<VarId> &designated, VarId extra, VarId z,
                                 Budget &budget, const Limits &lim, const IdTestOptions &opt,
                                 bool substitute_extra_by_z) {
    ZubrilinResult res;
    int n = static_cast<int>(designated.size());
    std::set<VarId> fv = f.vars();
    for (VarId v : designated)
        if (!fv.count(v)) throw std::invalid_argument("zubrilin: designated variable missing from f");
    if (!fv.count(extra)) throw std::invalid_argument("zubrilin: extra variable missing from f");
    if (fv.count(z)) throw std::invalid_argument("zubrilin: z must be fresh");
    std::set<VarId> xs(designated.begin(), designated.end());
    if (xs.count(extra)) throw std::invalid_argument("zubrilin: extra overlaps the designated set");
    std::set<VarId> ml = xs;
    ml.insert(extra);
    if (!is_multilinear_in(f, ml))
        throw std::invalid_argument("zubrilin: f must be multilinear in the designated variables and extra");
    if (!is_alternating_on(f, xs))
        throw std::invalid_argument("zubrilin: f must alternate on the designated variables");

    DeltaSpec spec;
    spec.z = Monomial({z});
    spec.designated = designated;
    Limits wide = lim;
    wide.degree_cap = std::max(lim.degree_cap, f.degree() + 2 * n + 1);

    Polynomial g;
    for (int t = 0; t <= n; ++t) {
        // f |_{z^{n-t} * extra -> extra}
        std::vector<VarId> w;
        for (int p = 0; p < n - t; ++p) w.push_back(z);
        w.push_back(extra);
        std::map<VarId, Polynomial> sub;
        sub[extra] = Polynomial::monomial(Monomial(w));
        Polynomial ft = substitute(f, sub, wide);
        spec.k = t;
        Polynomial dft = delta(spec, ft, wide);
        if (t % 2 == 1) dft *= Rat(-1);
        g += dft;
    }
    if (substitute_extra_by_z) {
        std::map<VarId, Polynomial> sub;
        sub[extra] = Polynomial::variable(z);
        g = substitute(g, sub, wide);
    }
    res.combination = g;
    IdentityResult r = is_identity(A, g, budget, wide, opt);
    res.verdict = r.verdict;
    res.witness = r.witness;
    res.note = r.note;
    return res;
}

// ---------------------------------------------------------------------------
// Traces on a component span
// ---------------------------------------------------------------------------

namespace {

// Coordinates of v in the given span basis; throws if v is outside.
Vec span_coords(const std::vector<Vec> &basis, const Vec &v) {
    long dim = v.size();
    Mat B = columns<Rat>(basis, dim);
    Eigen::FullPivLU<Mat> lu(B);
    lu.setThreshold(Rat(0));
    Vec x = lu.solve(v);
    if (B * x != v) throw std::invalid_argument("span_coords: element outside the span");
    return x;
}

// Matrix of left multiplication by a restricted to span(basis).
Mat left_mult_on_span(const FDAlgebra &A, const std::vector<Vec> &basis, const Vec &a) {
    long d = static_cast<long>(basis.size());
    Mat m(d, d);
    for (long j = 0; j < d; ++j)
        m.col(j) = span_coords(basis, A.multiply(a, basis[static_cast<size_t>(j)]));
    return m;
}

} // namespace

TraceTransferResult trace_transfer_check(const FDAlgebra &A, const std::vector<Vec> &span_basis,
                                         const Vec &a0, const Polynomial &f,
                                         const std::vector<VarId> &alternating_vars,
                                         const EvalAssignment &lambda) {
    size_t d = span_basis.size();
    if (alternating_vars.size() != d)
        throw std::invalid_argument("trace_transfer: need one alternating variable per span element");
    std::set<VarId> X(alternating_vars.begin(), alternating_vars.end());
    if (!is_multilinear_in(f, X) || !is_alternating_on(f, X))
        throw std::invalid_argument("trace_transfer: f must be multilinear alternating on the designated variables");

    TraceTransferResult res;
    res.arguments_independent =
        rank<Rat>(columns<Rat>(span_basis, A.dim())) == static_cast<long>(d);

    // Tr of left multiplication by a0 on the span.
    Rat tr(0);
    for (size_t j = 0; j < d; ++j)
        tr += span_coords(span_basis, A.multiply(a0, span_basis[j]))(static_cast<long>(j));

    EvalAssignment base = lambda;
    for (size_t i = 0; i < d; ++i) base[alternating_vars[i]] = span_basis[i];
    res.lhs = tr * eval(A, f, base);

    res.rhs = A.zero();
    for (size_t i = 0; i < d; ++i) {
        EvalAssignment s = base;
        s[alternating_vars[i]] = A.multiply(a0, span_basis[i]);
        res.rhs += eval(A, f, s);
    }
    res.pass = res.lhs == res.rhs;
    if (!res.arguments_independent)
        res.pass = res.pass && res.lhs.isZero(Rat(0)) && res.rhs.isZero(Rat(0));
    return res;
}

std::vector<Rat> newton_to_charpoly(const std::vector<Rat> &p) {
    // e_0 = 1; k e_k = sum_{i=1..k} (-1)^{i-1} e_{k-i} p_i; c_{d-k} = (-1)^k e_k.
    size_t d = p.size();
    std::vector<Rat> e(d + 1, Rat(0));
    e[0] = Rat(1);
    for (size_t k = 1; k <= d; ++k) {
        Rat acc(0);
        for (size_t i = 1; i <= k; ++i) {
            Rat term = e[k - i] * p[i - 1];
            if (i % 2 == 0) term = -term;
            acc += term;
        }
        e[k] = acc / Rat(static_cast<long>(k));
    }
    std::vector<Rat> c(d);
    for (size_t k = 1; k <= d; ++k) {
        Rat v = e[k];
        if (k % 2 == 1) v = -v;
        c[d - k] = v;
    }
    return c;
}

TraceIntegrality trace_integrality_relation(const FDAlgebra &A, const std::vector<Vec> &span_basis,
                                            const Vec &a) {
    size_t d = span_basis.size();
    if (d == 0) throw std::invalid_argument("trace_integrality: empty span");
    // The span must be multiplicatively closed; left_mult_on_span throws if a
    // product escapes. The element itself must lie in the span too.
    span_coords(span_basis, a);
    Mat L = left_mult_on_span(A, span_basis, a);

    TraceIntegrality out;
    Mat Lp = Mat::Identity(static_cast<long>(d), static_cast<long>(d));
    for (size_t j = 1; j <= d; ++j) {
        Lp = Mat(Lp * L);
        out.power_traces.push_back(Lp.trace());
    }
    out.coeffs = newton_to_charpoly(out.power_traces);

    // residual = a^{d+1} + sum_{i=0}^{d-1} c_i a^{i+1}
    std::vector<Vec> powers; // powers[i] = a^{i+1}
    powers.push_back(a);
    for (size_t i = 1; i <= d; ++i) powers.push_back(A.multiply(powers.back(), a));
    Vec r = powers[d];
    for (size_t i = 0; i < d; ++i) r += out.coeffs[i] * powers[i];
    out.residual = r;
    return out;
}

// ---------------------------------------------------------------------------
// Shirshov spanning
// ---------------------------------------------------------------------------

ShirshovReport shirshov_span_check(const FDAlgebra &A, const ShirshovConfig &cfg, Budget &budget) {
    if (cfg.word_length < 1 || cfg.height < 1)
        throw std::invalid_argument("shirshov: word length and height must be >= 1");
    ShirshovReport rep;
    int exp_cap = cfg.exponent_cap > 0 ? cfg.exponent_cap : A.dim() + 1;

    // Subalgebra generated by the generators: span closure under
    // multiplication by generators on either side.
    SpanBuilder<Rat> sub(A.dim());
    for (const auto &g : cfg.generators) sub.add(g);
    {
        std::vector<Vec> frontier;
        for (long c = 0; c < sub.basis().cols(); ++c) frontier.push_back(sub.basis().col(c));
        while (!frontier.empty()) {
            std::vector<Vec> next;
            for (const auto &v : frontier)
                for (const auto &g : cfg.generators) {
                    if (!budget.charge(static_cast<std::uint64_t>(A.dim()) * A.dim())) {
                        rep.budget_exceeded = true;
                        rep.note = "budget exhausted during subalgebra closure";
                        return rep;
                    }
                    Vec p = A.multiply(v, g);
                    if (sub.add(p)) next.push_back(p);
                    Vec q = A.multiply(g, v);
                    if (sub.add(q)) next.push_back(q);
                }
            frontier = std::move(next);
        }
    }
    rep.subalgebra_dim = static_cast<int>(sub.dim());

    // Y: values of all words in the generators of length 1..m.
    std::vector<Vec> words;
    {
        std::vector<Vec> layer = cfg.generators;
        for (int len = 1; len <= cfg.word_length; ++len) {
            words.insert(words.end(), layer.begin(), layer.end());
            if (len == cfg.word_length) break;
            std::vector<Vec> next;
            for (const auto &w : layer)
                for (const auto &g : cfg.generators) {
                    if (!budget.charge(static_cast<std::uint64_t>(A.dim()) * A.dim())) {
                        rep.budget_exceeded = true;
                        rep.note = "budget exhausted enumerating base words";
                        return rep;
                    }
                    next.push_back(A.multiply(w, g));
                }
            layer = std::move(next);
        }
    }

    // Powers y^n for each word, n = 1..exp_cap.
    std::vector<std::vector<Vec>> powers(words.size());
    for (size_t i = 0; i < words.size(); ++i) {
        powers[i].push_back(words[i]);
        for (int n = 2; n <= exp_cap; ++n)
            powers[i].push_back(A.multiply(powers[i].back(), words[i]));
    }

    // Height-bounded power products, increasing height; record the least
    // height whose span already covers the subalgebra.
    SpanBuilder<Rat> span(A.dim());
    auto covered = [&]() { return span.dim() == sub.dim(); };
    std::function<bool(int, const std::optional<Vec> &)> extend =
        [&](int remaining, const std::optional<Vec> &prefix) -> bool {
        if (covered()) return true;
        if (remaining == 0) return false;
        for (size_t i = 0; i < words.size(); ++i)
            for (int n = 1; n <= exp_cap; ++n) {
                if (!budget.charge(static_cast<std::uint64_t>(A.dim()) * A.dim())) return false;
                Vec val = prefix ? A.multiply(*prefix, powers[i][static_cast<size_t>(n - 1)])
                                 : powers[i][static_cast<size_t>(n - 1)];
                span.add(val);
                if (covered()) return true;
                if (extend(remaining - 1, val)) return true;
            }
        return false;
    };

    for (int h = 1; h <= cfg.height; ++h) {
        span = SpanBuilder<Rat>(A.dim());
        extend(h, std::nullopt);
        if (budget.exhausted()) {
            rep.budget_exceeded = true;
            rep.note = "budget exhausted enumerating power products";
            rep.reached_dim = static_cast<int>(span.dim());
            return rep;
        }
        rep.reached_dim = static_cast<int>(span.dim());
        if (covered()) {
            rep.spans = true;
            rep.minimal_height = h;
            return rep;
        }
    }
    rep.spans = false;
    return rep;
}

} // namespace piwb
