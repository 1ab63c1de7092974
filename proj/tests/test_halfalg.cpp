// Unit tests for the half-algebra: Serre quotient bases, multiplication,
// divided powers, differentials, and the bilinear form.

#include "doctest.h"

#include "coverquant/halfalg.hpp"

using namespace coverquant;

namespace {

// Classical graded dimension oracle: number of ways to write nu as an
// N-combination of the positive roots (with multiplicity one each), i.e.
// the Kostant partition count.  For B2 (our osp(1|4) Cartan matrix) the
// positive roots in simple-root coordinates are
//   a1, a2, a1+a2, 2a1+a2.
int kostant_b2(int n1, int n2) {
    int count = 0;
    for (int c = 0; 2 * c <= n1; ++c)        // 2a1+a2
        for (int b = 0; b + 2 * c <= n1; ++b)  // a1+a2
            if (b + c <= n2) ++count;
    return count;
}

}  // namespace

TEST_CASE("rank one components are free of relations") {
    HalfAlg f(builtin_datum("osp(1|2)"), 8);
    for (int n = 0; n <= 8; ++n) CHECK(f.dim_at({n}) == 1);
    CHECK(f.component({3}).basis_word(0) == Word({0, 0, 0}));
}

TEST_CASE("osp(1|4) graded dimensions match the classical oracle") {
    HalfAlg f(builtin_datum("osp(1|4)"), 6);
    for (int n1 = 0; n1 <= 6; ++n1)
        for (int n2 = 0; n1 + n2 <= 6; ++n2)
            CHECK(f.dim_at({n1, n2}) == kostant_b2(n1, n2));
    // Specific small cases: no Serre element reaches weight (1,1); the
    // weight with two long roots has one relation among its three words.
    CHECK(f.dim_at({1, 1}) == 2);
    CHECK(f.dim_at({1, 2}) == 2);
    CHECK(f.dim_at({2, 1}) == 3);
}

TEST_CASE("serre elements expand to zero") {
    HalfAlg f(builtin_datum("osp(1|4)"), 6);
    CHECK(f.from_combo(f.serre_element(0, 1)).is_zero());
    CHECK(f.from_combo(f.serre_element(1, 0)).is_zero());
    // ... and remain zero after multiplying by generators on either side.
    FElem s01;
    for (auto& [c, w] : f.serre_element(0, 1).terms) {
        (void)c;
        (void)w;
    }
    FElem t0 = f.theta(0);
    FElem z = f.multiply(t0, f.from_combo(f.serre_element(1, 0)));
    CHECK(z.is_zero());
}

TEST_CASE("multiplication and divided powers") {
    HalfAlg f(builtin_datum("osp(1|2)"), 8);
    FElem t = f.theta(0);
    // theta * theta = [2] theta^{(2)}
    CHECK(f.multiply(t, t) == f.divided_power(0, 2) * qint(2, 1));
    // 1 * x = x
    CHECK(f.multiply(f.one(), t) == t);
    // theta^{(a)} theta^{(b)} = binom(a+b, a) theta^{(a+b)}
    for (int a = 0; a <= 4; ++a)
        for (int b = 0; a + b <= 8; ++b)
            CHECK(f.multiply(f.divided_power(0, a), f.divided_power(0, b)) ==
                  f.divided_power(0, a + b) * qbinom(a + b, a, 1));
}

TEST_CASE("associativity across components (osp(1|4))") {
    HalfAlg f(builtin_datum("osp(1|4)"), 6);
    std::vector<FElem> gens = {f.theta(0), f.theta(1),
                               f.multiply(f.theta(0), f.theta(1)),
                               f.divided_power(0, 2)};
    for (auto& x : gens)
        for (auto& y : gens)
            for (auto& z : gens) {
                if (ht(add_nu(add_nu(x.weight(), y.weight()), z.weight())) > 6)
                    continue;
                CHECK(f.multiply(f.multiply(x, y), z) ==
                      f.multiply(x, f.multiply(y, z)));
            }
}

TEST_CASE("bar and dagger on f") {
    HalfAlg f(builtin_datum("osp(1|2)"), 8);
    FElem x = f.divided_power(0, 3) * PiScalar::v(2);
    CHECK(f.bar_f(f.bar_f(x)) == x);
    // bar fixes divided powers (coefficients of theta^{(n)} are bar-fixed)
    for (int n = 0; n <= 5; ++n)
        CHECK(f.bar_f(f.divided_power(0, n)) == f.divided_power(0, n));
    CHECK(f.bar_f(f.theta(0) * PiScalar::v()) ==
          f.theta(0) * (PiScalar::pi() * PiScalar::v(-1)));
}

TEST_CASE("differentials") {
    HalfAlg f(builtin_datum("osp(1|2)"), 8);
    CHECK(f.diff_left(0, f.theta(0)) == f.one());
    CHECK(f.diff_right(0, f.theta(0)) == f.one());
    // _ir(theta^{(n)}) = (pi v)^{1-n} theta^{(n-1)}: the geometric sum
    // sum_k (pi v^{-2})^k equals (pi v)^{1-n} [n].
    for (int n = 1; n <= 6; ++n)
        CHECK(f.diff_left(0, f.divided_power(0, n)) ==
              f.divided_power(0, n - 1) * PiScalar::piv(n - 1, 1 - n));

    HalfAlg g(builtin_datum("osp(1|4)"), 6);
    // r_i strips the last letter: r_i(theta_j theta_i) = theta_j for i != j
    // (the twisted prefactor only multiplies the r_i(theta_j) = 0 term).
    FElem tji = g.multiply(g.theta(1), g.theta(0));
    CHECK(g.diff_right(0, tji) == g.theta(1));
    // ... while _ir strips the first letter likewise:
    CHECK(g.diff_left(1, tji) == g.theta(0));
    // Leibniz rule for _ir on random-ish products
    for (auto& [x, y] : std::vector<std::pair<FElem, FElem>>{
             {g.theta(0), g.theta(1)},
             {g.multiply(g.theta(0), g.theta(1)), g.theta(0)},
             {g.divided_power(1, 2), g.theta(0)}}) {
        for (int i = 0; i < 2; ++i) {
            NuVec xw = x.weight();
            long long idx = 0;
            for (int l = 0; l < 2; ++l) idx += g.datum().cd.dot[i][l] * xw[l];
            FElem lhs = g.diff_left(i, g.multiply(x, y));
            FElem rhs = g.multiply(g.diff_left(i, x), y) +
                        g.multiply(x, g.diff_left(i, y)) *
                            (PiScalar::pi_pow(g.datum().p_nu(xw) *
                                              g.datum().parity(i)) *
                             PiScalar::v(static_cast<int>(-idx)));
            CHECK(lhs == rhs);
        }
    }
}

TEST_CASE("bilinear form on f") {
    HalfAlg f(builtin_datum("osp(1|2)"), 8);
    PiScalar c = f.form_const(0);
    CHECK(f.form_f(f.one(), f.one()) == PiScalar::one());
    CHECK(f.form_f(f.theta(0), f.theta(0)) == c);
    // (theta^{(k)}, theta^{(k)}) = pi^{C(k,2)} prod_{s=1..k} 1/(1-(pi v^2)^s)
    for (int k = 1; k <= 5; ++k) {
        PiScalar expect = PiScalar::pi_pow(static_cast<long long>(k) * (k - 1) / 2);
        for (int s = 1; s <= k; ++s) {
            PiScalar pv2s = PiScalar::pi_pow(s) * PiScalar::v(2 * s);
            expect *= PiScalar::one() / (PiScalar::one() - pv2s);
        }
        CHECK(f.form_f(f.divided_power(0, k), f.divided_power(0, k)) == expect);
    }
}

TEST_CASE("form symmetry, adjunction, nondegeneracy (osp(1|4))") {
    HalfAlg g(builtin_datum("osp(1|4)"), 5);
    std::vector<NuVec> wts = {{1, 0}, {0, 1}, {1, 1}, {2, 1}, {2, 2}, {3, 1}};
    for (auto& nu : wts) {
        const auto& G = g.gram(nu);
        int n = g.dim_at(nu);
        // symmetry
        for (int a = 0; a < n; ++a)
            for (int b = 0; b < n; ++b) CHECK(G[a][b] == G[b][a]);
        // nondegeneracy per eps-component: row-reduce and count pivots
        std::vector<std::vector<PiScalar>> rows = G;
        std::vector<int> order;
        for (int cc = 0; cc < n; ++cc) order.push_back(cc);
        auto rr = rref_pi(rows, order);
        CHECK(static_cast<int>(rr.rref_rows.size()) == n);
    }
    // adjunction (theta_i x, y) = c_i (x, _ir(y))
    FElem x = g.multiply(g.theta(0), g.theta(1));
    FElem y = g.multiply(g.multiply(g.theta(0), g.theta(0)), g.theta(1));
    for (int i = 0; i < 2; ++i) {
        FElem tix = g.multiply(g.theta(i), x);
        CHECK(g.form_f(tix, y) ==
              g.form_const(i) * g.form_f(x, g.diff_left(i, y)));
    }
}

TEST_CASE("pi=1 and pi=-1 dimensions agree") {
    HalfAlg g(builtin_datum("osp(1|4)"), 5);
    // implicit in the construction: rref_pi would have thrown otherwise;
    // spot-check one nontrivial component anyway
    CHECK(g.dim_at({2, 2}) == kostant_b2(2, 2));
}
