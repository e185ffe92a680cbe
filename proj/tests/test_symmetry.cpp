#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "piwb/symmetry.hpp"

#include <algorithm>
#include <numeric>
#include <random>

using namespace piwb;

namespace {

Polynomial P(const std::string &s) { return parse_poly(s); }

Polynomial monomial_on(const std::vector<VarId> &vars) {
    return Polynomial::monomial(Monomial(vars));
}

long hook_length_count(const Partition &mu) {
    // independent oracle: n! / prod(hooks)
    long n = std::accumulate(mu.begin(), mu.end(), 0L);
    long fact = 1;
    for (long i = 2; i <= n; ++i) fact *= i;
    long hooks = 1;
    for (size_t r = 0; r < mu.size(); ++r)
        for (int c = 0; c < mu[r]; ++c) {
            int arm = mu[r] - c - 1;
            int leg = 0;
            for (size_t r2 = r + 1; r2 < mu.size(); ++r2)
                if (mu[r2] > c) ++leg;
            hooks *= (arm + leg + 1);
        }
    return fact / hooks;
}

} // namespace

TEST_CASE("partitions in decreasing lex order") {
    auto p3 = partitions(3);
    REQUIRE(p3.size() == 3);
    CHECK(p3[0] == Partition{3});
    CHECK(p3[1] == Partition{2, 1});
    CHECK(p3[2] == Partition{1, 1, 1});
    CHECK(partitions(5).size() == 7);
    CHECK_THROWS(partitions(100));
}

TEST_CASE("standard tableaux counts match the hook-length oracle") {
    CHECK(tableau_count({2, 1}) == 2);
    for (int n = 1; n <= 6; ++n) {
        long total = 0;
        for (const auto &mu : partitions(n)) {
            long f = tableau_count(mu);
            CHECK(f == hook_length_count(mu));
            total += f * f;
        }
        long fact = 1;
        for (long i = 2; i <= n; ++i) fact *= i;
        CHECK(total == fact); // sum of squares equals n!
    }
}

TEST_CASE("standard tableaux really are standard and complete") {
    for (const auto &mu : partitions(5))
        for (const auto &T : standard_tableaux(mu)) {
            REQUIRE(T.is_standard());
            REQUIRE(T.shape == mu);
        }
}

TEST_CASE("young_apply: single row symmetrizes, single column alternates") {
    std::vector<VarId> xs{var("x1"), var("x2"), var("x3")};
    Polynomial w = monomial_on(xs);

    Tableau row{{3}, {{1, 2, 3}}};
    Polynomial sym = young_apply(row, w);
    CHECK(sym.term_count() == 6);
    for (const auto &[m, c] : sym.terms()) CHECK(c == Rat(1));

    Tableau col{{1, 1, 1}, {{1}, {2}, {3}}};
    Polynomial a = young_apply(col, w);
    CHECK(a == alt(w, std::set<VarId>(xs.begin(), xs.end())));
}

TEST_CASE("young symmetrizer is quasi-idempotent: e_T e_T = (n!/f^mu) e_T") {
    for (int n = 2; n <= 5; ++n) {
        std::vector<VarId> xs;
        for (int i = 1; i <= n; ++i) xs.push_back(var("x" + std::to_string(i)));
        Polynomial w = monomial_on(xs);
        long fact = 1;
        for (long i = 2; i <= n; ++i) fact *= i;
        for (const auto &mu : partitions(n))
            for (const auto &T : standard_tableaux(mu)) {
                Polynomial once = young_apply(T, w);
                if (once.is_zero()) continue;
                Polynomial twice = young_apply(T, once);
                Rat gamma(fact, tableau_count(mu));
                REQUIRE(twice == gamma * once);
            }
    }
}

TEST_CASE("young_column_part alternates down each column") {
    std::vector<VarId> xs{var("x1"), var("x2"), var("x3"), var("x4")};
    Polynomial w = monomial_on(xs);
    Tableau T{{2, 2}, {{1, 3}, {2, 4}}};
    Polynomial g0 = young_column_part(T, w);
    // columns are {1,2} and {3,4}: variables x1,x2 and x3,x4
    CHECK(is_alternating_on(g0, {var("x1"), var("x2")}));
    CHECK(is_alternating_on(g0, {var("x3"), var("x4")}));
}

TEST_CASE("young_apply output is row-symmetric") {
    std::vector<VarId> xs{var("x1"), var("x2"), var("x3"), var("x4")};
    Polynomial w = P("x1*x3*x2*x4 - 2*x4*x2*x1*x3");
    Tableau T{{3, 1}, {{1, 2, 4}, {3}}};
    Polynomial g = young_apply(T, w);
    if (!g.is_zero()) {
        CHECK(swap_vars(g, var("x1"), var("x2")) == g);
        CHECK(swap_vars(g, var("x2"), var("x4")) == g);
    }
}

TEST_CASE("find_nonzero_symmetrizer on the scalars hits the symmetric partition") {
    auto m1 = build_matrix_algebra(1);
    Budget b;
    SymmetrizerScan scan = find_nonzero_symmetrizer(m1.algebra, P("x1*x2"), b);
    REQUIRE(scan.hit.has_value());
    CHECK(scan.hit->mu == Partition{2});
}

TEST_CASE("find_nonzero_symmetrizer: alternating input lands on the column shape") {
    auto ut2 = build_ut({1, 1});
    Budget b;
    SymmetrizerScan scan = find_nonzero_symmetrizer(ut2.algebra, standard_poly(3), b);
    REQUIRE(scan.hit.has_value());
    CHECK(scan.hit->mu == Partition{1, 1, 1});
    CHECK(!eval_basis(ut2.algebra, scan.hit->image, scan.hit->witness.assignment).isZero(Rat(0)));
}

TEST_CASE("find_nonzero_symmetrizer: plain monomial on UT2, height below the Capelli bound") {
    auto ut2 = build_ut({1, 1});
    Budget b;
    SymmetrizerScan scan = find_nonzero_symmetrizer(ut2.algebra, P("x1*x2*x3"), b);
    REQUIRE(scan.hit.has_value());
    CHECK(scan.hit->tableau.height() <= 3);
    CHECK(scan.hit->tableau.is_standard());
}

TEST_CASE("find_nonzero_symmetrizer rejects identities") {
    auto ut2 = build_ut({1, 1});
    Budget b;
    Polynomial lewin = P("(x1*x2 - x2*x1)*(x3*x4 - x4*x3)");
    // multilinear identity of UT2
    CHECK_THROWS(find_nonzero_symmetrizer(ut2.algebra, lewin, b));
}

TEST_CASE("collapse_rows: single row squares the variable") {
    Tableau T{{2}, {{1, 2}}};
    Polynomial g = P("x1*x2 + x2*x1");
    std::vector<VarId> rows;
    Polynomial ghat = collapse_rows(T, g, &rows);
    REQUIRE(rows.size() == 1);
    Polynomial want;
    want.add_term(Monomial({rows[0], rows[0]}), Rat(2));
    CHECK(ghat == want);
}

TEST_CASE("collapse_rows: single-column tableau renames only") {
    Tableau T{{1, 1}, {{1}, {2}}};
    Polynomial g = P("x1*x2 - x2*x1");
    std::vector<VarId> rows;
    Polynomial ghat = collapse_rows(T, g, &rows);
    REQUIRE(rows.size() == 2);
    Polynomial want;
    want.add_term(Monomial({rows[0], rows[1]}), Rat(1));
    want.add_term(Monomial({rows[1], rows[0]}), Rat(-1));
    CHECK(ghat == want);
}

TEST_CASE("collapse_rows rejects non-row-symmetric input") {
    Tableau T{{2}, {{1, 2}}};
    CHECK_THROWS(collapse_rows(T, P("x1*x2")));
}

TEST_CASE("collapse equivalence: identity status is preserved (randomized)") {
    auto ut2 = build_ut({1, 1});
    std::mt19937 rng(61);
    int checked = 0;
    for (int it = 0; it < 12 && checked < 30; ++it) {
        int n = 3 + (it % 2);
        std::vector<VarId> xs;
        for (int i = 1; i <= n; ++i) xs.push_back(var("x" + std::to_string(i)));
        Polynomial f;
        std::vector<VarId> w = xs;
        std::uniform_int_distribution<int> coef(-2, 2);
        for (int t = 0; t < 3; ++t) {
            std::shuffle(w.begin(), w.end(), rng);
            int c = coef(rng);
            f.add_term(Monomial(w), Rat(c == 0 ? 1 : c));
        }
        if (f.is_zero()) continue;
        for (const auto &mu : partitions(n)) {
            for (const auto &T : standard_tableaux(mu)) {
                Polynomial g = young_apply(T, f);
                if (g.is_zero()) continue;
                Polynomial ghat = collapse_rows(T, g);
                Budget b(2'000'000'000);
                bool gid = is_identity(ut2.algebra, g, b).verdict == Verdict::Identity;
                bool ghid = is_identity(ut2.algebra, ghat, b).verdict == Verdict::Identity;
                REQUIRE(gid == ghid);
                ++checked;
                if (checked >= 30) break;
            }
            if (checked >= 30) break;
        }
    }
    CHECK(checked >= 30);
}
