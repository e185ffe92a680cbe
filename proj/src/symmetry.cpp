#include "piwb/symmetry.hpp"

#include <algorithm>
#include <functional>
#include <numeric>
#include <stdexcept>

namespace piwb {

int partitions_cap_default() { return 8; }

std::vector<Partition> partitions(int n, const Limits &lim) {
    if (n < 1) throw std::invalid_argument("partitions: n must be >= 1");
    if (n > std::max(partitions_cap_default(), lim.degree_cap))
        throw std::invalid_argument("partitions: n exceeds cap");
    std::vector<Partition> out;
    Partition cur;
    // Decreasing lex: always try the largest admissible next part first.
    std::function<void(int, int)> rec = [&](int rest, int maxpart) {
        if (rest == 0) {
            out.push_back(cur);
            return;
        }
        for (int p = std::min(rest, maxpart); p >= 1; --p) {
            cur.push_back(p);
            rec(rest - p, p);
            cur.pop_back();
        }
    };
    rec(n, n);
    return out;
}

int Tableau::n() const {
    int total = 0;
    for (int p : shape) total += p;
    return total;
}

bool Tableau::is_standard() const {
    for (size_t r = 0; r < rows.size(); ++r)
        for (size_t c = 0; c < rows[r].size(); ++c) {
            if (c + 1 < rows[r].size() && rows[r][c] >= rows[r][c + 1]) return false;
            if (r + 1 < rows.size() && c < rows[r + 1].size() && rows[r][c] >= rows[r + 1][c])
                return false;
        }
    return true;
}

std::vector<std::vector<int>> Tableau::columns() const {
    std::vector<std::vector<int>> cols(shape.empty() ? 0 : static_cast<size_t>(shape[0]));
    for (const auto &row : rows)
        for (size_t c = 0; c < row.size(); ++c) cols[c].push_back(row[c]);
    return cols;
}

std::vector<Tableau> standard_tableaux(const Partition &mu) {
    int total = 0;
    for (int p : mu) total += p;
    std::vector<Tableau> out;
    std::vector<std::vector<int>> rows(mu.size());
    // Place 1..n one at a time; a cell is admissible when it is the next free
    // cell of its row and the cell above is already filled.
    std::function<void(int)> rec = [&](int next) {
        if (next > total) {
            Tableau t{mu, rows};
            out.push_back(std::move(t));
            return;
        }
        for (size_t r = 0; r < mu.size(); ++r) {
            size_t c = rows[r].size();
            if (static_cast<int>(c) >= mu[r]) continue;
            if (r > 0 && rows[r - 1].size() <= c) continue;
            rows[r].push_back(next);
            rec(next + 1);
            rows[r].pop_back();
        }
    };
    rec(1);
    return out;
}

long tableau_count(const Partition &mu) {
    return static_cast<long>(standard_tableaux(mu).size());
}

namespace {

// Enumerate the direct product of symmetric groups on the given blocks as
// permutations of {1..n} (1-based entries; perm[i-1] = image of i).
void for_each_block_permutation(const std::vector<std::vector<int>> &blocks, int n,
                                const std::function<void(const std::vector<int> &, int)> &fn) {
    std::vector<std::vector<int>> arrangements(blocks.size());
    std::vector<std::vector<int>> sorted_blocks = blocks;
    for (auto &b : sorted_blocks) std::sort(b.begin(), b.end());

    std::vector<int> perm(static_cast<size_t>(n));
    std::function<void(size_t, int)> rec = [&](size_t bi, int sign) {
        if (bi == sorted_blocks.size()) {
            fn(perm, sign);
            return;
        }
        const auto &block = sorted_blocks[bi];
        std::vector<int> img = block;
        std::sort(img.begin(), img.end());
        do {
            // sign of the arrangement relative to the sorted block
            std::vector<int> idx(img.size());
            for (size_t i = 0; i < img.size(); ++i)
                idx[i] = static_cast<int>(std::lower_bound(block.begin(), block.end(), img[i]) -
                                          block.begin());
            int s = permutation_sign(idx);
            for (size_t i = 0; i < block.size(); ++i)
                perm[static_cast<size_t>(block[i] - 1)] = img[i];
            rec(bi + 1, sign * s);
        } while (std::next_permutation(img.begin(), img.end()));
}
    ;
    // identity fill first so untouched positions are fixed
    for (int i = 1; i <= n; ++i) perm[static_cast<size_t>(i - 1)] = i;
    rec(0, 1);
}

Polynomial apply_numbered_permutation(const Polynomial &f, const std::vector<VarId> &vars,
                                      const std::vector<int> &perm) {
    std::map<VarId, VarId> m;
    for (size_t i = 0; i < vars.size(); ++i)
        m[vars[i]] = vars[static_cast<size_t>(perm[i] - 1)];
    return rename(f, m);
}

std::uint64_t group_order(const std::vector<std::vector<int>> &blocks) {
    std::uint64_t o = 1;
    for (const auto &b : blocks) {
        std::uint64_t f = 1;
        for (std::uint64_t k = 2; k <= b.size(); ++k) f *= k;
        o *= f;
    }
    return o;
}

std::vector<VarId> numbered_vars(const Polynomial &f, const Tableau &T) {
    std::set<VarId> vs = f.vars();
    if (static_cast<int>(vs.size()) != T.n())
        throw std::invalid_argument("young_apply: tableau size differs from the variable count");
    if (!is_multilinear(f))
        throw std::invalid_argument("young_apply: polynomial must be multilinear");
    return std::vector<VarId>(vs.begin(), vs.end());
}

} // namespace

Polynomial young_column_part(const Tableau &T, const Polynomial &f) {
    std::vector<VarId> vars = numbered_vars(f, T);
    Polynomial g0;
    for_each_block_permutation(T.columns(), T.n(), [&](const std::vector<int> &perm, int sign) {
        Polynomial t = apply_numbered_permutation(f, vars, perm);
        t *= Rat(sign);
        g0 += t;
    });
    return g0;
}

Polynomial young_apply(const Tableau &T, const Polynomial &f, std::uint64_t group_budget) {
    std::vector<VarId> vars = numbered_vars(f, T);
    std::uint64_t order = group_order(T.rows) * group_order(T.columns());
    if (order * f.term_count() > group_budget)
        throw std::runtime_error("young_apply: row/column group size exceeds budget");
    Polynomial g0 = young_column_part(T, f);
    Polynomial g;
    for_each_block_permutation(T.rows, T.n(), [&](const std::vector<int> &perm, int) {
        g += apply_numbered_permutation(g0, vars, perm);
    });
    return g;
}

SymmetrizerScan find_nonzero_symmetrizer(const FDAlgebra &A, const Polynomial &f, Budget &budget,
                                         const IdTestOptions &opt, const Limits &lim) {
    if (f.is_zero()) throw std::invalid_argument("find_nonzero_symmetrizer: zero polynomial");
    {
        Budget pre(budget.limit - std::min(budget.limit, budget.used));
        IdentityResult base = is_identity_multilinear(A, f, pre, opt);
        if (base.verdict != Verdict::NonIdentity)
            throw std::invalid_argument("find_nonzero_symmetrizer: input must be a nonidentity");
    }
    int n = static_cast<int>(f.vars().size());
    SymmetrizerScan scan;
    for (const Partition &mu : partitions(n, lim)) {
        for (const Tableau &T : standard_tableaux(mu)) {
            Polynomial g = young_apply(T, f);
            ++scan.tableaux_scanned;
            if (g.is_zero()) continue;
            IdentityResult r = is_identity_multilinear(A, g, budget, opt);
            if (r.verdict == Verdict::NonIdentity) {
                scan.hit = SymmetrizerHit{mu, T, std::move(g), *r.witness};
                return scan;
            }
            if (r.verdict == Verdict::Unknown) {
                scan.budget_exhausted = true;
                return scan;
            }
        }
    }
    // The S_n-module P_n(A) is spanned by the images of the symmetrizers, so
    // a nonidentity with every e_T . f an identity is impossible.
    throw std::logic_error("find_nonzero_symmetrizer: no tableau hit for a verified nonidentity");
}

Polynomial collapse_rows(const Tableau &T, const Polynomial &g, std::vector<VarId> *row_vars_out) {
    std::vector<VarId> vars = numbered_vars(g, T);
    // Row invariance check: adjacent transpositions within each row generate
    // the row stabilizer.
    for (const auto &row : T.rows)
        for (size_t i = 0; i + 1 < row.size(); ++i) {
            Polynomial swapped = swap_vars(g, vars[static_cast<size_t>(row[i] - 1)],
                                           vars[static_cast<size_t>(row[i + 1] - 1)]);
            if (!(swapped == g))
                throw std::invalid_argument("collapse_rows: polynomial is not row-symmetric");
        }
    std::map<VarId, VarId> m;
    std::vector<VarId> row_vars;
    for (size_t r = 0; r < T.rows.size(); ++r) {
        VarId y = VarTable::instance().fresh("y_row");
        row_vars.push_back(y);
        for (int num : T.rows[r]) m[vars[static_cast<size_t>(num - 1)]] = y;
    }
    if (row_vars_out) *row_vars_out = row_vars;
    return rename(g, m);
}

} // namespace piwb
