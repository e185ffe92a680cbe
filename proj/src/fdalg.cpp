#include "piwb/fdalg.hpp"

#include <fstream>
#include <set>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

namespace piwb {

FDAlgebra::FDAlgebra(std::string name, std::vector<std::string> labels,
                     std::vector<std::vector<TermList>> mult, std::optional<Vec> unit)
    : name_(std::move(name)), labels_(std::move(labels)), mult_(std::move(mult)),
      unit_(std::move(unit)) {
    size_t n = labels_.size();
    if (mult_.size() != n) throw std::invalid_argument("FDAlgebra: mult table rows != dim");
    for (const auto &row : mult_)
        if (row.size() != n) throw std::invalid_argument("FDAlgebra: mult table cols != dim");
    for (const auto &row : mult_)
        for (const auto &cell : row)
            for (const auto &[k, c] : cell)
                if (k < 0 || k >= static_cast<int>(n))
                    throw std::invalid_argument("FDAlgebra: structure constant index out of range");
    if (unit_ && unit_->size() != static_cast<long>(n))
        throw std::invalid_argument("FDAlgebra: unit vector has wrong length");
}

Vec FDAlgebra::basis_element(int i) const {
    Vec v = Vec::Zero(dim());
    v(i) = Rat(1);
    return v;
}

Vec FDAlgebra::multiply(const Vec &u, const Vec &v) const {
    Vec r = Vec::Zero(dim());
    for (int i = 0; i < dim(); ++i) {
        if (u(i).is_zero()) continue;
        for (int j = 0; j < dim(); ++j) {
            if (v(j).is_zero()) continue;
            Rat uv = u(i) * v(j);
            for (const auto &[k, c] : mult_[static_cast<size_t>(i)][static_cast<size_t>(j)])
                r(k) += uv * c;
        }
    }
    return r;
}

Mat FDAlgebra::left_mult_matrix(const Vec &a) const {
    Mat m(dim(), dim());
    for (int j = 0; j < dim(); ++j) m.col(j) = multiply(a, basis_element(j));
    return m;
}

void FDAlgebra::check_associativity() const {
    for (int i = 0; i < dim(); ++i) {
        Vec bi = basis_element(i);
        for (int j = 0; j < dim(); ++j) {
            Vec bij = multiply(bi, basis_element(j));
            for (int k = 0; k < dim(); ++k) {
                Vec lhs = multiply(bij, basis_element(k));
                Vec rhs = multiply(bi, multiply(basis_element(j), basis_element(k)));
                if (lhs != rhs)
                    throw std::runtime_error("associativity fails on basis triple (" +
                                             labels_[static_cast<size_t>(i)] + ", " +
                                             labels_[static_cast<size_t>(j)] + ", " +
                                             labels_[static_cast<size_t>(k)] + ")");
            }
        }
    }
}

void FDAlgebra::check_unit() const {
    if (!unit_) return;
    for (int i = 0; i < dim(); ++i) {
        Vec b = basis_element(i);
        if (multiply(*unit_, b) != b || multiply(b, *unit_) != b)
            throw std::runtime_error("declared unit fails on basis element " +
                                     labels_[static_cast<size_t>(i)]);
    }
}

Vec WedderburnData::semisimple_identity(const FDAlgebra &A) const {
    Vec e = A.zero();
    for (const auto &comp : components)
        for (int a = 0; a < comp.size; ++a) e += comp.unit_at(a, a);
    return e;
}

// ---------------------------------------------------------------------------
// Constructors
// ---------------------------------------------------------------------------

namespace {

std::vector<std::vector<FDAlgebra::TermList>> empty_table(int n) {
    return std::vector<std::vector<FDAlgebra::TermList>>(
        static_cast<size_t>(n), std::vector<FDAlgebra::TermList>(static_cast<size_t>(n)));
}

void check_dim_cap(int n, const Limits &lim, const char *who) {
    if (n > lim.dim_cap)
        throw std::invalid_argument(std::string(who) + ": dimension " + std::to_string(n) +
                                    " exceeds cap " + std::to_string(lim.dim_cap));
    if (n < 1) throw std::invalid_argument(std::string(who) + ": empty algebra");
}

} // namespace

AlgebraWithData build_matrix_algebra(int k, const Limits &lim) {
    if (k < 1) throw std::invalid_argument("build_matrix_algebra: k must be >= 1");
    int n = k * k;
    check_dim_cap(n, lim, "build_matrix_algebra");
    auto idx = [k](int r, int c) { return r * k + c; };
    std::vector<std::string> labels;
    for (int r = 0; r < k; ++r)
        for (int c = 0; c < k; ++c)
            labels.push_back("E" + std::to_string(r + 1) + std::to_string(c + 1));
    auto mult = empty_table(n);
    for (int r = 0; r < k; ++r)
        for (int c = 0; c < k; ++c)
            for (int r2 = 0; r2 < k; ++r2)
                for (int c2 = 0; c2 < k; ++c2)
                    if (c == r2)
                        mult[static_cast<size_t>(idx(r, c))][static_cast<size_t>(idx(r2, c2))] = {
                            {idx(r, c2), Rat(1)}};
    Vec unit = Vec::Zero(n);
    for (int r = 0; r < k; ++r) unit(idx(r, r)) = Rat(1);
    FDAlgebra A("M" + std::to_string(k), labels, mult, unit);

    WedderburnData w;
    w.nilpotency = 1;
    WedderburnData::Component comp;
    comp.size = k;
    for (int r = 0; r < k; ++r)
        for (int c = 0; c < k; ++c) comp.units.push_back(A.basis_element(idx(r, c)));
    w.components.push_back(std::move(comp));
    return {std::move(A), std::move(w)};
}

AlgebraWithData build_ut(const std::vector<int> &block_sizes, const Limits &lim) {
    if (block_sizes.empty()) throw std::invalid_argument("build_ut: need at least one block");
    int total = 0;
    for (int b : block_sizes) {
        if (b < 1) throw std::invalid_argument("build_ut: block sizes must be >= 1");
        total += b;
    }
    std::vector<int> block_of(static_cast<size_t>(total));
    {
        int p = 0;
        for (size_t bi = 0; bi < block_sizes.size(); ++bi)
            for (int t = 0; t < block_sizes[bi]; ++t) block_of[static_cast<size_t>(p++)] = static_cast<int>(bi);
    }
    // Basis: matrix positions (r,c) with block(r) <= block(c), row-major order.
    std::vector<std::pair<int, int>> pos;
    std::map<std::pair<int, int>, int> pos_index;
    for (int r = 0; r < total; ++r)
        for (int c = 0; c < total; ++c)
            if (block_of[static_cast<size_t>(r)] <= block_of[static_cast<size_t>(c)]) {
                pos_index[{r, c}] = static_cast<int>(pos.size());
                pos.emplace_back(r, c);
            }
    int n = static_cast<int>(pos.size());
    check_dim_cap(n, lim, "build_ut");
    std::vector<std::string> labels;
    for (auto [r, c] : pos) labels.push_back("e" + std::to_string(r + 1) + std::to_string(c + 1));
    auto mult = empty_table(n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            auto [r, c] = pos[static_cast<size_t>(i)];
            auto [r2, c2] = pos[static_cast<size_t>(j)];
            if (c == r2) mult[static_cast<size_t>(i)][static_cast<size_t>(j)] = {{pos_index.at({r, c2}), Rat(1)}};
        }
    Vec unit = Vec::Zero(n);
    for (int r = 0; r < total; ++r) unit(pos_index[{r, r}]) = Rat(1);
    std::string nm = "UT(";
    for (size_t i = 0; i < block_sizes.size(); ++i)
        nm += (i ? "," : "") + std::to_string(block_sizes[i]);
    nm += ")";
    FDAlgebra A(nm, labels, mult, unit);

    WedderburnData w;
    w.nilpotency = static_cast<int>(block_sizes.size());
    for (int i = 0; i < n; ++i) {
        auto [r, c] = pos[static_cast<size_t>(i)];
        if (block_of[static_cast<size_t>(r)] < block_of[static_cast<size_t>(c)])
            w.radical_basis.push_back(A.basis_element(i));
    }
    int row_start = 0;
    for (int bsz : block_sizes) {
        WedderburnData::Component comp;
        comp.size = bsz;
        for (int a = 0; a < bsz; ++a)
            for (int b = 0; b < bsz; ++b)
                comp.units.push_back(A.basis_element(pos_index[{row_start + a, row_start + b}]));
        w.components.push_back(std::move(comp));
        row_start += bsz;
    }
    return {std::move(A), std::move(w)};
}

AlgebraWithData build_nilpotent_free(int generators, int nilpotency, const Limits &lim) {
    if (generators < 1) throw std::invalid_argument("build_nilpotent_free: need >= 1 generator");
    if (nilpotency < 2) throw std::invalid_argument("build_nilpotent_free: nilpotency must be >= 2");
    // Basis: words over the generators of length 1 .. nilpotency-1.
    std::vector<std::vector<int>> words;
    std::map<std::vector<int>, int> word_index;
    {
        std::vector<std::vector<int>> frontier;
        for (int g = 0; g < generators; ++g) frontier.push_back({g});
        for (int len = 1; len < nilpotency; ++len) {
            std::vector<std::vector<int>> next;
            for (auto &w : frontier) {
                word_index[w] = static_cast<int>(words.size());
                words.push_back(w);
                for (int g = 0; g < generators; ++g) {
                    auto w2 = w;
                    w2.push_back(g);
                    next.push_back(std::move(w2));
                }
            }
            frontier = std::move(next);
        }
    }
    int n = static_cast<int>(words.size());
    check_dim_cap(n, lim, "build_nilpotent_free");
    auto gen_name = [generators](int g) {
        return generators == 1 ? std::string("t") : "t" + std::to_string(g + 1);
    };
    std::vector<std::string> labels;
    for (const auto &w : words) {
        std::string l;
        for (size_t i = 0; i < w.size(); ++i) l += (i ? "." : "") + gen_name(w[i]);
        labels.push_back(l);
    }
    auto mult = empty_table(n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            auto w = words[static_cast<size_t>(i)];
            const auto &w2 = words[static_cast<size_t>(j)];
            w.insert(w.end(), w2.begin(), w2.end());
            if (static_cast<int>(w.size()) < nilpotency)
                mult[static_cast<size_t>(i)][static_cast<size_t>(j)] = {{word_index.at(w), Rat(1)}};
        }
    FDAlgebra A("N(" + std::to_string(generators) + "," + std::to_string(nilpotency) + ")",
                labels, mult, std::nullopt);
    WedderburnData w;
    w.nilpotency = nilpotency;
    for (int i = 0; i < n; ++i) w.radical_basis.push_back(A.basis_element(i));
    return {std::move(A), std::move(w)};
}

namespace {
std::vector<std::string> merge_labels(const std::vector<std::string> &a,
                                      const std::vector<std::string> &b) {
    std::vector<std::string> out = a;
    std::set<std::string> used(a.begin(), a.end());
    for (std::string l : b) {
        while (used.count(l)) l += "'";
        used.insert(l);
        out.push_back(l);
    }
    return out;
}
} // namespace

AlgebraWithData direct_product(const AlgebraWithData &a, const AlgebraWithData &b,
                               const Limits &lim) {
    const FDAlgebra &A = a.algebra;
    const FDAlgebra &B = b.algebra;
    int n = A.dim() + B.dim();
    check_dim_cap(n, lim, "direct_product");
    auto mult = empty_table(n);
    for (int i = 0; i < A.dim(); ++i)
        for (int j = 0; j < A.dim(); ++j)
            mult[static_cast<size_t>(i)][static_cast<size_t>(j)] = A.basis_product(i, j);
    for (int i = 0; i < B.dim(); ++i)
        for (int j = 0; j < B.dim(); ++j) {
            FDAlgebra::TermList shifted;
            for (auto [k, c] : B.basis_product(i, j)) shifted.emplace_back(k + A.dim(), c);
            mult[static_cast<size_t>(i + A.dim())][static_cast<size_t>(j + A.dim())] = shifted;
        }
    std::optional<Vec> unit;
    if (A.unit() && B.unit()) {
        Vec u = Vec::Zero(n);
        u.head(A.dim()) = *A.unit();
        u.tail(B.dim()) = *B.unit();
        unit = u;
    }
    FDAlgebra P(A.name() + "x" + B.name(), merge_labels(A.labels(), B.labels()), mult, unit);

    auto embed = [&](const Vec &v, int offset, int src_dim) {
        Vec r = Vec::Zero(n);
        r.segment(offset, src_dim) = v;
        return r;
    };
    WedderburnData w;
    w.nilpotency = std::max(a.wedderburn.nilpotency, b.wedderburn.nilpotency);
    for (const auto &r : a.wedderburn.radical_basis) w.radical_basis.push_back(embed(r, 0, A.dim()));
    for (const auto &r : b.wedderburn.radical_basis)
        w.radical_basis.push_back(embed(r, A.dim(), B.dim()));
    for (const auto &c : a.wedderburn.components) {
        WedderburnData::Component nc;
        nc.size = c.size;
        for (const auto &u : c.units) nc.units.push_back(embed(u, 0, A.dim()));
        w.components.push_back(std::move(nc));
    }
    for (const auto &c : b.wedderburn.components) {
        WedderburnData::Component nc;
        nc.size = c.size;
        for (const auto &u : c.units) nc.units.push_back(embed(u, A.dim(), B.dim()));
        w.components.push_back(std::move(nc));
    }
    return {std::move(P), std::move(w)};
}

AlgebraWithData unitalize(const AlgebraWithData &a, const Limits &lim) {
    const FDAlgebra &A = a.algebra;
    int n = A.dim() + 1;
    check_dim_cap(n, lim, "unitalize");
    auto mult = empty_table(n);
    for (int i = 0; i < A.dim(); ++i)
        for (int j = 0; j < A.dim(); ++j)
            mult[static_cast<size_t>(i)][static_cast<size_t>(j)] = A.basis_product(i, j);
    int u = A.dim();
    for (int i = 0; i < A.dim(); ++i) {
        mult[static_cast<size_t>(u)][static_cast<size_t>(i)] = {{i, Rat(1)}};
        mult[static_cast<size_t>(i)][static_cast<size_t>(u)] = {{i, Rat(1)}};
    }
    mult[static_cast<size_t>(u)][static_cast<size_t>(u)] = {{u, Rat(1)}};
    std::vector<std::string> labels = merge_labels(A.labels(), {"one"});
    Vec unit = Vec::Zero(n);
    unit(u) = Rat(1);
    FDAlgebra U(A.name() + "+1", labels, mult, unit);

    auto embed = [&](const Vec &v) {
        Vec r = Vec::Zero(n);
        r.head(A.dim()) = v;
        return r;
    };
    WedderburnData w;
    w.nilpotency = a.wedderburn.nilpotency;
    for (const auto &r : a.wedderburn.radical_basis) w.radical_basis.push_back(embed(r));
    for (const auto &c : a.wedderburn.components) {
        WedderburnData::Component nc;
        nc.size = c.size;
        for (const auto &uv : c.units) nc.units.push_back(embed(uv));
        w.components.push_back(std::move(nc));
    }
    // Extra one-dimensional component spanned by (1 - sum of component units).
    Vec e = Vec::Zero(n);
    for (const auto &c : a.wedderburn.components)
        for (int t = 0; t < c.size; ++t) e += embed(c.unit_at(t, t));
    WedderburnData::Component nc;
    nc.size = 1;
    nc.units.push_back(unit - e);
    w.components.push_back(std::move(nc));
    return {std::move(U), std::move(w)};
}

// ---------------------------------------------------------------------------
// Radical, nilpotency, Par
// ---------------------------------------------------------------------------

std::vector<Vec> radical(const FDAlgebra &A) {
    A.check_associativity();
    A.check_unit();
    // Work in the unitalization: J(A) = { x in A : tr(L_{x*y}) = 0 for all y }
    // where L is left multiplication on A+Q*1 and y ranges over its basis.
    int n = A.dim();
    auto lifted_trace = [&](const Vec &z) {
        // trace of left multiplication by z (element of A) on A + Q*1:
        // the unit column contributes z itself, whose coordinate on the unit
        // axis is zero, so the trace equals tr(L_z on A).
        Rat t(0);
        for (int j = 0; j < n; ++j) t += A.multiply(z, A.basis_element(j))(j);
        return t;
    };
    Mat M(n + 1, n);
    for (int i = 0; i < n; ++i) {
        Vec bi = A.basis_element(i);
        for (int j = 0; j < n; ++j)
            M(j, i) = lifted_trace(A.multiply(bi, A.basis_element(j)));
        M(n, i) = lifted_trace(bi); // y = 1
    }
    Mat K = kernel<Rat>(M);
    std::vector<Vec> basis;
    for (long c = 0; c < K.cols(); ++c) basis.push_back(K.col(c));
    return basis;
}

int nilpotency_index(const FDAlgebra &A, const std::vector<Vec> &radical_basis) {
    if (radical_basis.empty()) return 1;
    std::vector<Vec> current = radical_basis; // spans J^k, k = 1
    int k = 1;
    for (;;) {
        SpanBuilder<Rat> next(A.dim());
        for (const auto &r : radical_basis)
            for (const auto &c : current) {
                Vec p = A.multiply(r, c);
                if (!p.isZero(Rat(0))) next.add(p);
            }
        ++k;
        if (next.dim() == 0) return k;
        if (k > A.dim() + 1) throw std::runtime_error("nilpotency_index: radical is not nilpotent");
        current.clear();
        for (long c = 0; c < next.basis().cols(); ++c) current.push_back(next.basis().col(c));
    }
}

ParValue par(const FDAlgebra &A) {
    std::vector<Vec> J = radical(A);
    return ParValue{A.dim() - static_cast<int>(J.size()), nilpotency_index(A, J) - 1};
}

ParValue par(const FDAlgebra &, const WedderburnData &w) {
    return ParValue{w.semisimple_dim(), w.nilpotency - 1};
}

// ---------------------------------------------------------------------------
// Wedderburn verification
// ---------------------------------------------------------------------------

VerifyReport verify_wedderburn(const FDAlgebra &A, const WedderburnData &w) {
    VerifyReport rep;
    auto push = [&](const std::string &name, bool pass, const std::string &detail = "") {
        rep.checks.push_back({name, pass, detail});
    };

    bool dims_ok = true;
    std::string dim_detail;
    for (const auto &r : w.radical_basis)
        if (r.size() != A.dim()) { dims_ok = false; dim_detail = "radical vector of wrong length"; }
    for (const auto &c : w.components) {
        if (static_cast<int>(c.units.size()) != c.size * c.size) {
            dims_ok = false;
            dim_detail = "component with size " + std::to_string(c.size) + " must carry k^2 units";
        }
        for (const auto &u : c.units)
            if (u.size() != A.dim()) { dims_ok = false; dim_detail = "unit vector of wrong length"; }
    }
    push("dimensions", dims_ok, dim_detail);
    if (!dims_ok) return rep;

    // Direct sum: radical + all units form a basis of A.
    {
        std::vector<Vec> all = w.radical_basis;
        for (const auto &c : w.components)
            for (const auto &u : c.units) all.push_back(u);
        bool count_ok = static_cast<int>(all.size()) == A.dim();
        bool rank_ok = count_ok && rank<Rat>(columns<Rat>(all, A.dim())) == A.dim();
        push("direct_sum", count_ok && rank_ok,
             count_ok ? (rank_ok ? "" : "vectors are linearly dependent")
                      : "radical dim + sum k_i^2 != dim A");
    }

    // Matrix-unit relations inside each component.
    {
        bool ok = true;
        std::string detail;
        for (size_t ci = 0; ci < w.components.size() && ok; ++ci) {
            const auto &c = w.components[ci];
            int k = c.size;
            for (int a = 0; a < k && ok; ++a)
                for (int b = 0; b < k && ok; ++b)
                    for (int a2 = 0; a2 < k && ok; ++a2)
                        for (int b2 = 0; b2 < k && ok; ++b2) {
                            Vec p = A.multiply(c.unit_at(a, b), c.unit_at(a2, b2));
                            Vec want = (b == a2) ? Vec(c.unit_at(a, b2)) : Vec(A.zero());
                            if (p != want) {
                                ok = false;
                                detail = "component " + std::to_string(ci) + ": E" +
                                         std::to_string(a + 1) + std::to_string(b + 1) + "*E" +
                                         std::to_string(a2 + 1) + std::to_string(b2 + 1) +
                                         " violates the matrix-unit pattern";
                            }
                        }
        }
        push("matrix_units", ok, detail);
    }

    // Distinct components annihilate each other.
    {
        bool ok = true;
        std::string detail;
        for (size_t i = 0; i < w.components.size() && ok; ++i)
            for (size_t j = 0; j < w.components.size() && ok; ++j) {
                if (i == j) continue;
                for (const auto &u : w.components[i].units) {
                    bool bad = false;
                    for (const auto &v : w.components[j].units)
                        if (!A.multiply(u, v).isZero(Rat(0))) { bad = true; break; }
                    if (bad) {
                        ok = false;
                        detail = "components " + std::to_string(i) + " and " + std::to_string(j) +
                                 " do not annihilate";
                        break;
                    }
                }
            }
        push("components_annihilate", ok, detail);
    }

    // Radical span is a two-sided ideal.
    {
        bool ok = true;
        std::string detail;
        Mat span = columns<Rat>(w.radical_basis, A.dim());
        for (const auto &r : w.radical_basis) {
            for (int i = 0; i < A.dim() && ok; ++i) {
                Vec b = A.basis_element(i);
                if (!in_span<Rat>(span, A.multiply(r, b)) || !in_span<Rat>(span, A.multiply(b, r))) {
                    ok = false;
                    detail = "product with basis element " + A.labels()[static_cast<size_t>(i)] +
                             " leaves the radical span";
                }
            }
            if (!ok) break;
        }
        push("radical_ideal", ok, detail);
    }

    // Nilpotency index equals the declared one.
    {
        bool ok = true;
        std::string detail;
        if (w.radical_basis.empty()) {
            ok = w.nilpotency == 1;
            if (!ok) detail = "J = 0 forces nilpotency 1";
        } else {
            try {
                int actual = nilpotency_index(A, w.radical_basis);
                ok = actual == w.nilpotency;
                if (!ok)
                    detail = "declared " + std::to_string(w.nilpotency) + ", computed " +
                             std::to_string(actual);
            } catch (const std::exception &e) {
                ok = false;
                detail = e.what();
            }
        }
        push("nilpotency", ok, detail);
    }

    // Declared radical spans the computed Jacobson radical.
    {
        std::vector<Vec> J = radical(A);
        bool ok = J.size() == w.radical_basis.size();
        if (ok && !J.empty()) {
            Mat span = columns<Rat>(w.radical_basis, A.dim());
            for (const auto &v : J)
                if (!in_span<Rat>(span, v)) { ok = false; break; }
        }
        push("radical_matches_computed", ok,
             ok ? "" : "declared radical differs from the Dickson-criterion radical");
    }

    return rep;
}

// ---------------------------------------------------------------------------
// JSON
// ---------------------------------------------------------------------------

using nlohmann::json;

namespace {

Vec vec_from_json(const json &j, int dim, const char *what) {
    if (!j.is_array() || static_cast<int>(j.size()) != dim)
        throw std::runtime_error(std::string("algebra json: ") + what + " must be an array of length dim");
    Vec v(dim);
    for (int i = 0; i < dim; ++i) {
        const auto &e = j[static_cast<size_t>(i)];
        if (e.is_number_integer())
            v(i) = Rat(static_cast<long>(e.get<long long>()));
        else
            v(i) = Rat::parse(e.get<std::string>());
    }
    return v;
}

json vec_to_json(const Vec &v) {
    json a = json::array();
    for (long i = 0; i < v.size(); ++i) a.push_back(v(i).str());
    return a;
}

} // namespace

AlgebraWithData parse_algebra_json(const std::string &text, const Limits &lim) {
    json j = json::parse(text);
    std::string name = j.value("name", "algebra");
    int dim = j.at("dim").get<int>();
    check_dim_cap(dim, lim, "algebra json");
    std::vector<std::string> labels = j.at("basis").get<std::vector<std::string>>();
    if (static_cast<int>(labels.size()) != dim)
        throw std::runtime_error("algebra json: basis length != dim");
    auto mult = empty_table(dim);
    for (const auto &cell : j.at("mult")) {
        int i = cell.at("i").get<int>();
        int jj = cell.at("j").get<int>();
        if (i < 0 || i >= dim || jj < 0 || jj >= dim)
            throw std::runtime_error("algebra json: mult index out of range at /mult");
        FDAlgebra::TermList terms;
        for (const auto &t : cell.at("terms")) {
            int k = t.at(0).get<int>();
            Rat c = t.at(1).is_number_integer() ? Rat(static_cast<long>(t.at(1).get<long long>()))
                                                : Rat::parse(t.at(1).get<std::string>());
            if (k < 0 || k >= dim) throw std::runtime_error("algebra json: term index out of range");
            if (!c.is_zero()) terms.emplace_back(k, c);
        }
        mult[static_cast<size_t>(i)][static_cast<size_t>(jj)] = std::move(terms);
    }
    std::optional<Vec> unit;
    if (j.contains("unit") && !j.at("unit").is_null())
        unit = vec_from_json(j.at("unit"), dim, "unit");
    FDAlgebra A(name, labels, mult, unit);
    A.check_associativity();
    A.check_unit();

    WedderburnData w;
    if (j.contains("wedderburn") && !j.at("wedderburn").is_null()) {
        const json &wj = j.at("wedderburn");
        for (const auto &r : wj.value("radical", json::array()))
            w.radical_basis.push_back(vec_from_json(r, dim, "wedderburn/radical"));
        for (const auto &cj : wj.value("components", json::array())) {
            WedderburnData::Component comp;
            comp.size = cj.at("size").get<int>();
            comp.units.resize(static_cast<size_t>(comp.size * comp.size), Vec::Zero(dim));
            for (const auto &uj : cj.at("units")) {
                int r = uj.at(0).get<int>();
                int c = uj.at(1).get<int>();
                if (r < 0 || r >= comp.size || c < 0 || c >= comp.size)
                    throw std::runtime_error("algebra json: unit row/col out of range");
                comp.units[static_cast<size_t>(r * comp.size + c)] =
                    vec_from_json(uj.at(2), dim, "wedderburn/components/units");
            }
            w.components.push_back(std::move(comp));
        }
        w.nilpotency = wj.value("nilpotency", 1);
    }
    return {std::move(A), std::move(w)};
}

AlgebraWithData load_algebra_json(const std::string &path, const Limits &lim) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open algebra file: " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_algebra_json(ss.str(), lim);
}

std::string algebra_to_json(const AlgebraWithData &awd, const std::string &name) {
    const FDAlgebra &A = awd.algebra;
    json j;
    j["name"] = name.empty() ? A.name() : name;
    j["dim"] = A.dim();
    j["basis"] = A.labels();
    json mult = json::array();
    for (int i = 0; i < A.dim(); ++i)
        for (int jj = 0; jj < A.dim(); ++jj) {
            const auto &terms = A.basis_product(i, jj);
            if (terms.empty()) continue;
            json cell;
            cell["i"] = i;
            cell["j"] = jj;
            json ts = json::array();
            for (const auto &[k, c] : terms) ts.push_back(json::array({k, c.str()}));
            cell["terms"] = ts;
            mult.push_back(cell);
        }
    j["mult"] = mult;
    if (A.unit()) j["unit"] = vec_to_json(*A.unit());
    json wj;
    json rad = json::array();
    for (const auto &r : awd.wedderburn.radical_basis) rad.push_back(vec_to_json(r));
    wj["radical"] = rad;
    json comps = json::array();
    for (const auto &c : awd.wedderburn.components) {
        json cj;
        cj["size"] = c.size;
        json units = json::array();
        for (int a = 0; a < c.size; ++a)
            for (int b = 0; b < c.size; ++b)
                units.push_back(json::array({a, b, vec_to_json(c.unit_at(a, b))}));
        cj["units"] = units;
        comps.push_back(cj);
    }
    wj["components"] = comps;
    wj["nilpotency"] = awd.wedderburn.nilpotency;
    j["wedderburn"] = wj;
    return j.dump(2);
}

std::string format_element(const FDAlgebra &A, const Vec &v) {
    std::string out;
    for (int i = 0; i < A.dim(); ++i) {
        if (v(i).is_zero()) continue;
        Rat c = v(i);
        if (out.empty()) {
            if (c.sign() < 0) { out += "-"; c = -c; }
        } else {
            out += c.sign() < 0 ? " - " : " + ";
            if (c.sign() < 0) c = -c;
        }
        if (!c.is_one()) out += c.str() + "*";
        out += A.labels()[static_cast<size_t>(i)];
    }
    return out.empty() ? "0" : out;
}

} // namespace piwb
