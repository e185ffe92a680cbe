#include "piwb/poly.hpp"

#include <algorithm>
#include <numeric>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace piwb {

std::ostream &operator<<(std::ostream &os, const Rat &r) { return os << r.str(); }

std::set<VarId> Polynomial::vars() const {
    std::set<VarId> vs;
    for (const auto &[m, c] : terms_)
        vs.insert(m.word.begin(), m.word.end());
    return vs;
}

Polynomial &Polynomial::operator+=(const Polynomial &o) {
    for (const auto &[m, c] : o.terms_) add_term(m, c);
    return *this;
}

Polynomial &Polynomial::operator-=(const Polynomial &o) {
    for (const auto &[m, c] : o.terms_) add_term(m, -c);
    return *this;
}

Polynomial &Polynomial::operator*=(const Rat &c) {
    if (c.is_zero()) {
        terms_.clear();
        return *this;
    }
    for (auto &[m, v] : terms_) v *= c;
    return *this;
}

Polynomial Polynomial::mul(const Polynomial &a, const Polynomial &b) {
    Polynomial r;
    for (const auto &[ma, ca] : a.terms_)
        for (const auto &[mb, cb] : b.terms_)
            r.add_term(ma * mb, ca * cb);
    return r;
}

Multidegree multidegree(const Monomial &m) {
    Multidegree d;
    for (VarId v : m.word) d[v]++;
    return d;
}

bool is_multilinear(const Polynomial &f) {
    return is_multilinear_in(f, f.vars());
}

bool is_multilinear_in(const Polynomial &f, const std::set<VarId> &X) {
    for (const auto &[m, c] : f.terms()) {
        std::map<VarId, int> cnt;
        for (VarId v : m.word)
            if (X.count(v)) cnt[v]++;
        if (cnt.size() != X.size()) return false;
        for (const auto &[v, k] : cnt)
            if (k != 1) return false;
    }
    return true;
}

bool is_alternating_on(const Polynomial &f, const std::set<VarId> &X) {
    std::vector<VarId> xs(X.begin(), X.end());
    for (size_t i = 0; i + 1 < xs.size(); ++i) {
        if (!(swap_vars(f, xs[i], xs[i + 1]) == -f)) return false;
    }
    return true;
}

Polynomial rename(const Polynomial &f, const std::map<VarId, VarId> &m) {
    Polynomial r;
    for (const auto &[mono, c] : f.terms()) {
        std::vector<VarId> w;
        w.reserve(mono.word.size());
        for (VarId v : mono.word) {
            auto it = m.find(v);
            w.push_back(it == m.end() ? v : it->second);
        }
        r.add_term(Monomial(std::move(w)), c);
    }
    return r;
}

Polynomial swap_vars(const Polynomial &f, VarId a, VarId b) {
    return rename(f, {{a, b}, {b, a}});
}

int permutation_sign(const std::vector<int> &perm) {
    int sign = 1;
    std::vector<bool> seen(perm.size(), false);
    for (size_t i = 0; i < perm.size(); ++i) {
        if (seen[i]) continue;
        size_t len = 0, j = i;
        while (!seen[j]) {
            seen[j] = true;
            j = static_cast<size_t>(perm[j]);
            ++len;
        }
        if (len % 2 == 0) sign = -sign;
    }
    return sign;
}

Polynomial alt(const Polynomial &f, const std::set<VarId> &X) {
    if (f.is_zero()) return f;
    std::set<VarId> fv = f.vars();
    for (VarId v : X)
        if (!fv.count(v)) throw std::invalid_argument("alt: variable not in polynomial");
    if (!is_multilinear_in(f, X)) throw std::invalid_argument("alt: polynomial not multilinear on the set");

    std::vector<VarId> xs(X.begin(), X.end());
    size_t n = xs.size();
    std::vector<int> idx(n);
    std::iota(idx.begin(), idx.end(), 0);
    Polynomial r;
    do {
        std::map<VarId, VarId> m;
        for (size_t i = 0; i < n; ++i) m[xs[i]] = xs[static_cast<size_t>(idx[i])];
        Polynomial g = rename(f, m);
        g *= Rat(permutation_sign(idx));
        r += g;
    } while (std::next_permutation(idx.begin(), idx.end()));
    return r;
}

Polynomial shuffle_alt(const Polynomial &f, const std::vector<std::vector<VarId>> &sets) {
    // Sorted union; each transversal element sends the j-th smallest variable
    // of set i to the j-th smallest element of the chosen block T_i.
    std::vector<VarId> uni;
    std::vector<std::vector<VarId>> sorted_sets = sets;
    for (auto &s : sorted_sets) std::sort(s.begin(), s.end());
    for (const auto &s : sorted_sets) uni.insert(uni.end(), s.begin(), s.end());
    std::sort(uni.begin(), uni.end());
    size_t n = uni.size();

    std::map<VarId, int> pos_of;
    for (size_t i = 0; i < n; ++i) pos_of[uni[i]] = static_cast<int>(i);

    // Assignment of each union position to a block, with |T_i| = |S_i|.
    std::vector<int> block_of(n, -1);
    Polynomial r;
    std::vector<size_t> need(sorted_sets.size());
    for (size_t i = 0; i < sorted_sets.size(); ++i) need[i] = sorted_sets[i].size();

    std::vector<std::vector<VarId>> chosen(sorted_sets.size());
    auto emit = [&]() {
        std::map<VarId, VarId> m;
        std::vector<int> perm(n);
        for (size_t i = 0; i < sorted_sets.size(); ++i)
            for (size_t j = 0; j < sorted_sets[i].size(); ++j) {
                m[sorted_sets[i][j]] = chosen[i][j];
                perm[static_cast<size_t>(pos_of[sorted_sets[i][j]])] = pos_of[chosen[i][j]];
            }
        Polynomial g = rename(f, m);
        g *= Rat(permutation_sign(perm));
        r += g;
    };
    // Walk union positions in order, assigning each to a block with capacity.
    auto rec = [&](auto &&self, size_t p) -> void {
        if (p == n) {
            emit();
            return;
        }
        for (size_t i = 0; i < sorted_sets.size(); ++i) {
            if (chosen[i].size() == need[i]) continue;
            chosen[i].push_back(uni[p]);
            self(self, p + 1);
            chosen[i].pop_back();
        }
    };
    rec(rec, 0);
    return r;
}

Polynomial standard_poly(int n, const Limits &lim) {
    if (n < 1) throw std::invalid_argument("standard_poly: n must be >= 1");
    if (n > lim.degree_cap) throw std::invalid_argument("standard_poly: degree cap exceeded");
    std::vector<VarId> xs;
    std::vector<VarId> word;
    for (int i = 1; i <= n; ++i) {
        VarId v = var("x" + std::to_string(i));
        xs.push_back(v);
        word.push_back(v);
    }
    Polynomial base = Polynomial::monomial(Monomial(word));
    return alt(base, std::set<VarId>(xs.begin(), xs.end()));
}

Polynomial capelli(const std::vector<VarId> &alternators, const std::vector<VarId> &borders,
                   const Limits &lim) {
    size_t n = alternators.size();
    if (n < 1) throw std::invalid_argument("capelli: need at least one alternator");
    if (borders.size() != n - 1) throw std::invalid_argument("capelli: need n-1 border variables");
    if (static_cast<int>(2 * n - 1) > lim.degree_cap)
        throw std::invalid_argument("capelli: degree cap exceeded");
    std::set<VarId> aset(alternators.begin(), alternators.end());
    for (VarId b : borders)
        if (aset.count(b)) throw std::invalid_argument("capelli: borders must be disjoint from alternators");
    std::vector<VarId> word;
    for (size_t i = 0; i < n; ++i) {
        word.push_back(alternators[i]);
        if (i + 1 < n) word.push_back(borders[i]);
    }
    return alt(Polynomial::monomial(Monomial(word)), aset);
}

Polynomial capelli(int n, const std::vector<VarId> &borders, const Limits &lim) {
    std::vector<VarId> xs;
    for (int i = 1; i <= n; ++i) xs.push_back(var("x" + std::to_string(i)));
    return capelli(xs, borders, lim);
}

Polynomial substitute(const Polynomial &f, const std::map<VarId, Polynomial> &s,
                      const Limits &lim) {
    Polynomial r;
    for (const auto &[mono, c] : f.terms()) {
        Polynomial acc = Polynomial::monomial(Monomial{}, c); // empty-word seed, consumed below
        for (VarId v : mono.word) {
            auto it = s.find(v);
            const Polynomial img = (it == s.end()) ? Polynomial::variable(v) : it->second;
            acc = Polynomial::mul(acc, img);
            if (acc.is_zero()) break;
            if (acc.term_count() > lim.term_cap)
                throw std::runtime_error("substitute: term cap exceeded");
        }
        for (const auto &[m2, c2] : acc.terms())
            if (m2.degree() > lim.degree_cap)
                throw std::runtime_error("substitute: degree cap exceeded");
        r += acc;
        if (r.term_count() > lim.term_cap)
            throw std::runtime_error("substitute: term cap exceeded");
    }
    return r;
}

std::vector<PolarizedComponent> multilinearize(const Polynomial &f, const Limits &lim) {
    // Split into multihomogeneous components.
    std::map<Multidegree, Polynomial> comps;
    for (const auto &[m, c] : f.terms())
        comps[multidegree(m)].add_term(m, c);

    std::vector<PolarizedComponent> out;
    for (auto &[deg, g] : comps) {
        PolarizedComponent pc;
        pc.source_degree = deg;
        std::map<VarId, Polynomial> images;
        for (const auto &[v, k] : deg) {
            if (k < 2) continue;
            std::vector<VarId> copies;
            Polynomial sum;
            for (int j = 0; j < k; ++j) {
                VarId nv = VarTable::instance().fresh(var_name(v) + "_");
                copies.push_back(nv);
                sum += Polynomial::variable(nv);
            }
            pc.copies[v] = copies;
            images[v] = sum;
        }
        if (images.empty()) {
            pc.poly = g;
            out.push_back(std::move(pc));
            continue;
        }
        Polynomial expanded = substitute(g, images, lim);
        // Multilinear part: every fresh copy appears exactly once.
        Polynomial ml;
        for (const auto &[m, c] : expanded.terms()) {
            Multidegree md = multidegree(m);
            bool ok = true;
            for (const auto &[v, copies] : pc.copies)
                for (VarId nv : copies)
                    if (md[nv] != 1) { ok = false; break; }
            if (ok) ml.add_term(m, c);
        }
        pc.poly = std::move(ml);
        out.push_back(std::move(pc));
    }
    return out;
}

std::string to_string(const Polynomial &f) {
    if (f.is_zero()) return "0";
    std::ostringstream os;
    bool first = true;
    for (const auto &[m, c] : f.terms()) {
        Rat a = c;
        if (first) {
            if (a.sign() < 0) { os << "-"; a = -a; }
        } else {
            os << (a.sign() < 0 ? " - " : " + ");
            if (a.sign() < 0) a = -a;
        }
        first = false;
        bool unit_coeff = a.is_one();
        if (!unit_coeff || m.empty()) os << a.str();
        bool need_star = !unit_coeff || m.empty();
        for (VarId v : m.word) {
            if (need_star) os << "*";
            os << var_name(v);
            need_star = true;
        }
    }
    return os.str();
}

// ---------------------------------------------------------------------------
// Parser
// ---------------------------------------------------------------------------

namespace {

struct Parser {
    const std::string &s;
    size_t pos = 0;
    const Limits &lim;
    bool allow_unit;

    Parser(const std::string &text, const Limits &l, bool au) : s(text), lim(l), allow_unit(au) {}

    void skip_ws() {
        while (pos < s.size() && std::isspace(static_cast<unsigned char>(s[pos]))) ++pos;
    }
    bool eat(char c) {
        skip_ws();
        if (pos < s.size() && s[pos] == c) { ++pos; return true; }
        return false;
    }
    void expect(char c) {
        if (!eat(c)) throw ParseError(std::string("expected '") + c + "'", pos);
    }
    char peek() {
        skip_ws();
        return pos < s.size() ? s[pos] : '\0';
    }

    std::string ident() {
        skip_ws();
        size_t start = pos;
        if (pos >= s.size() || !std::isalpha(static_cast<unsigned char>(s[pos])))
            throw ParseError("expected identifier", pos);
        while (pos < s.size() &&
               (std::isalnum(static_cast<unsigned char>(s[pos])) || s[pos] == '_'))
            ++pos;
        return s.substr(start, pos - start);
    }

    Rat number() {
        skip_ws();
        size_t start = pos;
        while (pos < s.size() && std::isdigit(static_cast<unsigned char>(s[pos]))) ++pos;
        if (start == pos) throw ParseError("expected number", pos);
        std::string num = s.substr(start, pos - start);
        if (eat('/')) {
            skip_ws();
            size_t dstart = pos;
            while (pos < s.size() && std::isdigit(static_cast<unsigned char>(s[pos]))) ++pos;
            if (dstart == pos) throw ParseError("expected denominator", pos);
            num += "/" + s.substr(dstart, pos - dstart);
        }
        return Rat::parse(num);
    }

    std::vector<VarId> var_list(char terminator) {
        std::vector<VarId> vs;
        for (;;) {
            vs.push_back(var(ident()));
            if (eat(',')) continue;
            skip_ws();
            if (peek() == terminator || terminator == '\0') break;
            throw ParseError("expected ',' in variable list", pos);
        }
        return vs;
    }

    Polynomial parse_expr() {
        Polynomial r;
        bool neg = false;
        if (eat('-')) neg = true;
        else eat('+');
        for (;;) {
            Polynomial t = parse_term();
            if (neg) t *= Rat(-1);
            r += t;
            skip_ws();
            if (eat('+')) neg = false;
            else if (eat('-')) neg = true;
            else break;
        }
        return r;
    }

    Polynomial parse_term() {
        Polynomial r = parse_factor();
        while (eat('*')) r = Polynomial::mul(r, parse_factor());
        for (const auto &[m, c] : r.terms()) {
            if (m.degree() > lim.degree_cap)
                throw ParseError("degree cap exceeded", pos);
            if (m.empty() && !allow_unit)
                throw ParseError("unit monomial in nonunital context", pos);
        }
        return r;
    }

    Polynomial parse_factor() {
        skip_ws();
        if (pos >= s.size()) throw ParseError("unexpected end of input", pos);
        char c = s[pos];
        if (c == '(') {
            ++pos;
            Polynomial e = parse_expr();
            expect(')');
            return e;
        }
        if (std::isdigit(static_cast<unsigned char>(c))) {
            Rat q = number();
            return Polynomial::monomial(Monomial{}, q);
        }
        if (std::isalpha(static_cast<unsigned char>(c))) {
            size_t save = pos;
            std::string id = ident();
            char nxt = peek();
            if ((nxt == '(' || nxt == '[') && is_macro(id)) return parse_macro(id);
            pos = save;
            return Polynomial::variable(var(ident()));
        }
        throw ParseError("unexpected character", pos);
    }

    static bool all_digits(const std::string &t) {
        if (t.empty()) return false;
        for (char ch : t)
            if (!std::isdigit(static_cast<unsigned char>(ch))) return false;
        return true;
    }

    static bool is_macro(const std::string &id) {
        if (id == "alt") return true;
        if (id.size() > 1 && (id[0] == 's' || id[0] == 'c') && all_digits(id.substr(1))) return true;
        if (id.size() > 5 && id.rfind("delta", 0) == 0 && all_digits(id.substr(5))) return true;
        return false;
    }

    Polynomial parse_macro(const std::string &id) {
        if (id == "alt") {
            expect('[');
            std::vector<VarId> vs = var_list(']');
            expect(']');
            expect('(');
            Polynomial body = parse_expr();
            expect(')');
            return alt(body, std::set<VarId>(vs.begin(), vs.end()));
        }
        if (id[0] == 's') {
            int n = std::stoi(id.substr(1));
            expect('(');
            std::vector<VarId> vs = var_list(')');
            expect(')');
            if (static_cast<int>(vs.size()) != n)
                throw ParseError("s" + std::to_string(n) + " expects " + std::to_string(n) + " variables", pos);
            if (n > lim.degree_cap) throw ParseError("degree cap exceeded", pos);
            std::vector<VarId> word(vs.begin(), vs.end());
            return alt(Polynomial::monomial(Monomial(word)), std::set<VarId>(vs.begin(), vs.end()));
        }
        if (id[0] == 'c') {
            int n = std::stoi(id.substr(1));
            expect('(');
            std::vector<VarId> alts = var_list(';');
            expect(';');
            std::vector<VarId> borders = var_list(')');
            expect(')');
            if (static_cast<int>(alts.size()) != n)
                throw ParseError("c" + std::to_string(n) + " expects " + std::to_string(n) + " alternators", pos);
            return capelli(alts, borders, lim);
        }
        // delta{k}[z; v1,...,vn](expr)
        int k = std::stoi(id.substr(5));
        expect('[');
        std::vector<VarId> zword;
        for (;;) {
            zword.push_back(var(ident()));
            if (!eat('*')) break;
        }
        expect(';');
        std::vector<VarId> xs = var_list(']');
        expect(']');
        expect('(');
        Polynomial body = parse_expr();
        expect(')');
        return delta_macro(k, Monomial(zword), xs, body);
    }

    Polynomial delta_macro(int k, const Monomial &z, const std::vector<VarId> &xs,
                           const Polynomial &f);
};

} // namespace

// Zubrilin delta expansion used by the parser macro; the full operator with
// validation lives in traceops and reuses this.
Polynomial delta_expand(int k, const Monomial &z, const std::vector<VarId> &xs,
                        const Polynomial &f, const Limits &lim) {
    if (k < 0 || k > static_cast<int>(xs.size()))
        throw std::invalid_argument("delta: k out of range");
    std::set<VarId> zvars(z.word.begin(), z.word.end());
    for (VarId x : xs)
        if (zvars.count(x)) throw std::invalid_argument("delta: z must be independent of the designated variables");
    if (k == 0) return f;

    size_t n = xs.size();
    std::vector<int> subset(static_cast<size_t>(k));
    std::iota(subset.begin(), subset.end(), 0);
    Polynomial r;
    for (;;) {
        std::map<VarId, Polynomial> sub;
        for (int i : subset) {
            VarId x = xs[static_cast<size_t>(i)];
            std::vector<VarId> w = z.word;
            w.push_back(x);
            sub[x] = Polynomial::monomial(Monomial(w));
        }
        r += substitute(f, sub, lim);
        // next k-combination
        int i = k - 1;
        while (i >= 0 && subset[static_cast<size_t>(i)] == static_cast<int>(n) - k + i) --i;
        if (i < 0) break;
        ++subset[static_cast<size_t>(i)];
        for (int j = i + 1; j < k; ++j)
            subset[static_cast<size_t>(j)] = subset[static_cast<size_t>(j - 1)] + 1;
    }
    return r;
}

namespace {
Polynomial Parser::delta_macro(int k, const Monomial &z, const std::vector<VarId> &xs,
                               const Polynomial &f) {
    return delta_expand(k, z, xs, f, lim);
}
} // namespace

Polynomial parse_poly(const std::string &text, const Limits &lim, bool allow_unit) {
    Parser p(text, lim, allow_unit);
    Polynomial r = p.parse_expr();
    p.skip_ws();
    if (p.pos != text.size()) throw ParseError("trailing input", p.pos);
    return r;
}

} // namespace piwb
