// Unit tests for the canonical-basis engine: the height partial order, the
// semi-linear solver (with a hypothesis-violation negative control), the
// bar-involution Psi and the canonical basis of N(lambda, lambda') in rank
// one and for osp(1|4) through the file-backed provider, the cancellation
// maps chi / chi_4 / delta / t, and the glued canonical basis of Udot with
// its rank-one closed form, bar-invariance, Delta_4 compatibility, and
// pi-almost-orthonormality.

#include "doctest.h"

#include <fstream>

#include "coverquant/cbengine.hpp"

using namespace coverquant;

namespace {

std::shared_ptr<const HalfAlg> make_f(const std::string& name, int h) {
    return std::make_shared<HalfAlg>(builtin_datum(name), h);
}

PiScalar piv(long long a, int b) { return PiScalar::piv(a, b); }

// Set equality of Udot elements up to pi normalization.
bool same_cb_set(std::vector<UDotElem> got, std::vector<UDotElem> want) {
    if (got.size() != want.size()) return false;
    for (auto& g : got) g = pi_normal_form(g);
    for (auto& w : want) {
        UDotElem n = pi_normal_form(w);
        auto it = std::find(got.begin(), got.end(), n);
        if (it == got.end()) return false;
        got.erase(it);
    }
    return got.empty();
}

}  // namespace

TEST_CASE("height partial order on pair indices") {
    NuVec n0{0}, n1{1}, n2{2};
    PiPair p00{{n0, 0}, {n0, 0}}, p11{{n1, 0}, {n1, 0}};
    PiPair p10{{n1, 0}, {n0, 0}}, p21{{n2, 0}, {n1, 0}};
    CHECK(partial_order_leq(p00, p00));
    CHECK(partial_order_leq(p00, p11));
    CHECK_FALSE(partial_order_leq(p11, p00));
    // Unequal height difference: incomparable both ways.
    CHECK_FALSE(partial_order_leq(p10, p11));
    CHECK_FALSE(partial_order_leq(p11, p10));
    // (theta^(1), theta^(0)) <= (theta^(2), theta^(1)).
    CHECK(partial_order_leq(p10, p21));
    CHECK_FALSE(partial_order_leq(p21, p10));
}

TEST_CASE("semilinear solver: singleton, chain, negative control") {
    PiScalar one = PiScalar::one();
    // Singleton poset.
    auto p = semilinear_solve({{1}}, {{one}});
    CHECK(p[0][0] == one);

    // Chain h < h' with r_{h',h} = v - pi v^{-1}: p_{h',h} = v.
    PiScalar q = piv(0, 1) - piv(1, -1);
    CHECK((q + q.bar()).is_zero());
    std::vector<std::vector<char>> leq{{1, 1}, {0, 1}};
    std::vector<std::vector<PiScalar>> r{{one, PiScalar::zero()}, {q, one}};
    p = semilinear_solve(leq, r);
    CHECK(p[1][0] == piv(0, 1));
    CHECK(p[0][0] == one);
    CHECK(p[1][1] == one);

    // q + bar q != 0 must be detected.
    r[1][0] = piv(0, 1) + piv(0, -1);
    CHECK_THROWS_AS(semilinear_solve(leq, r), SemilinearError);
}

TEST_CASE("Psi is an involution fixing the extreme vector") {
    auto f = make_f("osp(1|2)", 12);
    RankOneCBProvider bp(f);
    NCanonicalBasis ncb = cb_of_N(bp, {2}, {1}, 3);
    ThetaTruncation th = compute_theta(*f, 3, 3);

    // Psi(eta (x) xi) = eta (x) xi.
    TVec hi = ncb.module->highest();
    CHECK(psi(*ncb.module, th, hi) == hi);

    for (size_t a = 0; a < ncb.standard.size(); ++a) {
        const TVec& w = ncb.standard_vecs[a];
        CHECK(psi(*ncb.module, th, psi(*ncb.module, th, w)) == w);
        for (size_t b = 0; b < ncb.standard.size(); ++b) {
            // r entries integral Laurent per eps-component, supported on <=.
            CHECK(ncb.r[a][b].is_laurent());
            if (!ncb.r[a][b].is_zero()) CHECK(ncb.leq[b][a]);
        }
        CHECK(ncb.r[a][a] == PiScalar::one());
    }
}

TEST_CASE("canonical basis of N: rank-one values and invariants") {
    auto f = make_f("osp(1|2)", 12);
    RankOneCBProvider bp(f);

    // N(lambda, 0): the canonical basis is the standard basis.
    {
        NCanonicalBasis ncb = cb_of_N(bp, {3}, {0}, 3);
        for (size_t a = 0; a < ncb.standard.size(); ++a)
            for (size_t b = 0; b < ncb.standard.size(); ++b)
                CHECK(ncb.p[a][b] ==
                      (a == b ? PiScalar::one() : PiScalar::zero()));
    }

    // N((1),(1)): single off-diagonal entry pi v, whose pi = +1
    // specialization v is the classical sl_2 tensor-square coefficient.
    {
        NCanonicalBasis ncb = cb_of_N(bp, {1}, {1}, 1);
        REQUIRE(ncb.standard.size() == 4);
        int off = 0;
        for (size_t a = 0; a < 4; ++a)
            for (size_t b = 0; b < 4; ++b) {
                if (a == b) {
                    CHECK(ncb.p[a][b] == PiScalar::one());
                    continue;
                }
                if (ncb.p[a][b].is_zero()) continue;
                ++off;
                CHECK(ht(ncb.standard[a].b1.nu) == 1);
                CHECK(ht(ncb.standard[a].b2.nu) == 1);
                CHECK(ht(ncb.standard[b].b1.nu) == 0);
                CHECK(ht(ncb.standard[b].b2.nu) == 0);
                CHECK(ncb.p[a][b] == piv(1, 1));
            }
        CHECK(off == 1);
    }

    // N((2),(1)): all outputs Psi-fixed, off-diagonal entries in vZ^pi[v].
    {
        NCanonicalBasis ncb = cb_of_N(bp, {2}, {1}, 3);
        ThetaTruncation th = compute_theta(*f, 3, 3);
        for (size_t a = 0; a < ncb.standard.size(); ++a) {
            TVec cb = ncb.cb_vec(a);
            CHECK(psi(*ncb.module, th, cb) == cb);
            for (size_t b = 0; b < ncb.standard.size(); ++b) {
                if (a == b) continue;
                const PiScalar& c = ncb.p[a][b];
                if (c.is_zero()) continue;
                CHECK(c.is_laurent());
                CHECK(*c.vval() >= 1);
                CHECK(c.plus().num().val() >= 1);
                CHECK(c.minus().num().val() >= 1);
            }
        }
    }
}

TEST_CASE("canonical basis of N for osp(1|4) via the file provider") {
    auto f = make_f("osp(1|4)", 8);
    FileCBProvider bp(f, std::string(COVERQUANT_SOURCE_DIR) +
                             "/data/osp1-4_cb.json");
    // V(omega_1) is four-dimensional; exactly one provider element per
    // supported weight survives the vanishing predicate.
    Weight om1{1, 0};
    WeightModule v1(f, om1, true, 4);
    int nb = 0;
    for (NuVec nu : {NuVec{0, 0}, NuVec{1, 0}, NuVec{1, 1}, NuVec{2, 1}})
        for (int k = 0; k < bp.count(nu); ++k)
            if (in_b_lambda(v1, bp.element(nu, k))) ++nb;
    CHECK(nb == 4);

    NCanonicalBasis ncb = cb_of_N(bp, om1, om1, 3);
    REQUIRE(ncb.standard.size() == 16);
    ThetaTruncation th = compute_theta(*f, 3, 3);
    for (size_t a = 0; a < ncb.standard.size(); ++a) {
        TVec cb = ncb.cb_vec(a);
        CHECK(psi(*ncb.module, th, cb) == cb);
        CHECK(ncb.p[a][a] == PiScalar::one());
        for (size_t b = 0; b < ncb.standard.size(); ++b) {
            if (a == b || ncb.p[a][b].is_zero()) continue;
            CHECK(ncb.leq[b][a]);
            CHECK(ncb.p[a][b].is_laurent());
            CHECK(*ncb.p[a][b].vval() >= 1);
        }
    }
}

TEST_CASE("file provider validation rejects non-bar-fixed input") {
    auto f = make_f("osp(1|2)", 8);
    std::string path = "/tmp/coverquant_badcb.json";
    {
        std::ofstream out(path);
        // theta^2 scaled by v is not bar-fixed.
        out << R"js({"schema": 1, "datum": "osp(1|2)", "elements": [
          {"nu": [2], "terms": [{"monomial": [[0, 2]],
                                 "coeff": [[1, 1, 1]]}]}]})js";
    }
    CHECK_THROWS(FileCBProvider(f, path));
}

TEST_CASE("tensor splitting maps chi and chi_4") {
    auto f = make_f("osp(1|2)", 12);
    const RootDatum& rd = f->datum();

    // chi(eta'') = eta (x) eta'; one-step coefficients f(theta; theta, 1)=1
    // and the complementary coefficient pi v (in Z[v] per eps-component up
    // to the pi class).
    SplitHom chi = chi_split(f, {1}, {1}, 3);
    CHECK(chi.apply(chi.source->highest()) == chi.target->highest());
    MVec fe;
    fe.add_in(NuVec{1}, 0, PiScalar::one());
    TVec img = chi.apply(fe);
    CHECK(img.comps.at({NuVec{1}, NuVec{0}})[0][0] == PiScalar::one());
    CHECK(img.comps.at({NuVec{0}, NuVec{1}})[0][0] == piv(1, 1));

    // chi_4(xi'') = xi (x) xi'; its one-step coefficients carry the extra
    // sign pi^{p(b1)p(b2)} relative to chi (both factors odd here).
    SplitHom chi4 = chi4_split(f, {1}, {1}, 3);
    CHECK(chi4.apply(chi4.source->highest()) == chi4.target->highest());
    TVec img4 = chi4.apply(fe);
    PiScalar a0 = img4.comps.at({NuVec{1}, NuVec{0}})[0][0];
    PiScalar a1 = img4.comps.at({NuVec{0}, NuVec{1}})[0][0];
    // One coefficient is 1 on the b2=1 slot; the mixed slot picks up the
    // pi^{p(b1)p(b2)} with p = 1 for theta.
    CHECK((a0 * a0 == PiScalar::one() || a1 * a1 == PiScalar::one()));
    CHECK(!a0.is_zero());
    CHECK(!a1.is_zero());

    // Both are module homomorphisms: commute with the F-action.
    for (const Weight& lam : {Weight{2}, Weight{3}}) {
        SplitHom c = chi_split(f, lam, {1}, 4);
        MVec x = c.source->highest();
        for (int step = 0; step < 3; ++step) {
            MVec fx = act(*c.source, false, UElem::F(0), x);
            CHECK(c.apply(fx) == c.target->act(UElem::F(0), c.apply(x)));
            x = fx;
        }
        (void)rd;
    }
}

TEST_CASE("contraction delta") {
    auto f = make_f("osp(1|2)", 12);
    const RootDatum& rd = f->datum();
    for (const Weight& lam : {Weight{1}, Weight{2}}) {
        Contraction d = delta_contract(f, lam, 4);
        // delta(eta (x) xi) = 1.
        CHECK(d.apply(d.module->pure(d.module->first().highest(),
                                     d.module->second().highest())) ==
              PiScalar::one());
        // Invariance: delta kills E- and F-images of weight +-i' vectors.
        for (int h = 0; h + 1 <= lam[0]; ++h) {
            MVec x, y;
            x.add_in(NuVec{h}, 0, PiScalar::one());
            y.add_in(NuVec{h + 1}, 0, PiScalar::one());
            CHECK(d.apply(d.module->act(UElem::F(0), d.module->pure(x, y)))
                      .is_zero());
            CHECK(d.apply(d.module->act(UElem::E(0), d.module->pure(y, x)))
                      .is_zero());
        }
        // The one-step pairing identity: on the depth-(i, i) component,
        // delta(x (x) y) = (-1) pi_i v_i (x, y).
        NuVec nu{1};
        MVec x, y;
        x.add_in(nu, 0, PiScalar::one());
        y.add_in(nu, 0, PiScalar::one());
        PiScalar lhs = d.apply(d.module->pure(x, y));
        PiScalar rhs = PiScalar(Int(-1)) * rd.pi_nu(nu) * rd.v_nu(nu) *
                       polarization(d.module->first(), x, y);
        CHECK(lhs == rhs);
        // Non-highest values lie in vZ^pi[v] after the normalization.
        if (lam[0] >= 1) CHECK(lhs.series_integral_from(1, 12));
    }
}

TEST_CASE("cancellation map t") {
    auto f = make_f("osp(1|2)", 14);
    RankOneCBProvider bp(f);
    CancellationMap t = t_map(f, {1}, {1}, {1}, 4);

    // t(eta (x) xi) generates the target.
    CHECK(t.apply(t.source->highest()) == t.target->highest());

    // Psi t = t Psi on all standard vectors of N((2),(2)).
    NCanonicalBasis src = cb_of_N(bp, {2}, {2}, 2);
    NCanonicalBasis tgt = cb_of_N(bp, {1}, {1}, 2);
    ThetaTruncation th = compute_theta(*f, 3, 3);
    for (size_t a = 0; a < src.standard.size(); ++a) {
        const TVec& w = src.standard_vecs[a];
        CHECK(t.apply(psi(*src.module, th, w)) ==
              psi(*tgt.module, th, t.apply(w)));
    }

    // t maps the canonical basis to the canonical basis or to zero,
    // according to membership of the factors in B((1)).
    for (size_t a = 0; a < src.standard.size(); ++a) {
        TVec img = t.apply(src.cb_vec(a));
        const PiPair& pp = src.standard[a];
        bool in_target = ht(pp.b1.nu) <= 1 && ht(pp.b2.nu) <= 1;
        if (!in_target) {
            CHECK(img.is_zero());
            continue;
        }
        size_t idx = tgt.standard.size();
        for (size_t b = 0; b < tgt.standard.size(); ++b)
            if (tgt.standard[b] == pp) idx = b;
        REQUIRE(idx < tgt.standard.size());
        CHECK(img == tgt.cb_vec(idx));
    }
}

TEST_CASE("canonical basis of Udot: rank-one closed form") {
    auto f = make_f("osp(1|2)", 14);
    RankOneCBProvider bp(f);
    const int bound = 2;
    for (int n = 0; n <= 4; ++n) {
        // 1_n block, pairs with a + b <= n: F^{(a)} E^{(b)} 1_n.
        UDotCanonicalBasis ub = cb_of_udot(bp, {n}, bound);
        std::vector<UDotElem> got, want;
        for (const auto& e : ub.elements) {
            int a = ht(e.index.b1.nu), b = ht(e.index.b2.nu);
            if (a + b > std::min(n, 2 * bound)) continue;
            got.push_back(e.value);
        }
        for (int a = 0; a <= bound; ++a)
            for (int b = 0; b <= bound; ++b) {
                if (a + b > n) continue;
                want.push_back(
                    normalize(*f, UElem::F(0, a) * UElem::E(0, b), {n}));
            }
        CHECK(same_cb_set(got, want));

        // 1_{-n} block, pairs with a + b <= n: pi^{ab} E^{(b)} F^{(a)} 1_{-n}.
        UDotCanonicalBasis ubm = cb_of_udot(bp, {-n}, bound);
        got.clear();
        want.clear();
        for (const auto& e : ubm.elements) {
            int a = ht(e.index.b1.nu), b = ht(e.index.b2.nu);
            if (a + b > std::min(n, 2 * bound)) continue;
            got.push_back(e.value);
        }
        for (int a = 0; a <= bound; ++a)
            for (int b = 0; b <= bound; ++b) {
                if (a + b > n) continue;
                want.push_back(normalize(
                    *f, (UElem::E(0, b) * UElem::F(0, a)) *
                            PiScalar::pi_pow(static_cast<long long>(a) * b),
                    {-n}));
            }
        CHECK(same_cb_set(got, want));
    }
}

TEST_CASE("canonical basis of Udot: bar-invariance and triangularity") {
    auto f = make_f("osp(1|2)", 14);
    RankOneCBProvider bp(f);
    for (const Weight& zeta : {Weight{0}, Weight{1}, Weight{-2}}) {
        UDotCanonicalBasis ub = cb_of_udot(bp, zeta, 2);
        for (const auto& e : ub.elements) {
            CHECK(auto_udot(*f, AutoKind::Bar, e.value) == e.value);
            // Unitriangular against b^- b''^+ 1_zeta: the leading key has
            // coefficient 1 and every key respects the height filtration.
            UDotKey lead{add_w(zeta, f->datum().nu_to_x(e.index.b2.nu)),
                         e.index.b1.nu, e.index.b2.nu};
            REQUIRE(e.value.comps.count(lead) == 1);
            // The coordinate matrices are over the plain word basis, so the
            // divided-power monomial b^- b''^+ 1 contributes 1/([a]![b]!).
            CHECK(e.value.comps.at(lead)[0][0] *
                      qfact(ht(e.index.b1.nu), 1) *
                      qfact(ht(e.index.b2.nu), 1) ==
                  PiScalar::one());
            for (const auto& [key, mat] : e.value.comps) {
                CHECK(ht(key.nm) <= ht(e.index.b1.nu));
                CHECK(ht(key.np) <= ht(e.index.b2.nu));
                (void)mat;
            }
        }
    }
}

TEST_CASE("canonical basis of Udot: vanishing law on small weights") {
    auto f = make_f("osp(1|2)", 14);
    RankOneCBProvider bp(f);
    UDotCanonicalBasis ub = cb_of_udot(bp, {0}, 2);
    // On N(lambda, lambda'') with lambda = lambda'' = (1), elements whose
    // factor heights exceed 1 must act by zero on eta (x) xi.
    auto m1 = std::make_shared<WeightModule>(f, Weight{1}, true, 4);
    auto m2 = std::make_shared<WeightModule>(f, Weight{1}, true, 4);
    TensorModule n(m1, false, m2, true, 3);
    for (const auto& e : ub.elements) {
        TVec w = act_on_family(n, e.value);
        bool in_b = ht(e.index.b1.nu) <= 1 && ht(e.index.b2.nu) <= 1;
        if (!in_b) CHECK(w.is_zero());
        else CHECK_FALSE(w.is_zero());
    }
}

TEST_CASE("canonical basis of Udot: Delta_4 compatibility") {
    auto f = make_f("osp(1|2)", 14);
    const RootDatum& rd = f->datum();
    RankOneCBProvider bp(f);
    UDotCanonicalBasis ub = cb_of_udot(bp, {0}, 2);
    Weight lam{3};
    auto m1 = std::make_shared<WeightModule>(f, lam, true, 4);
    auto m2 = std::make_shared<WeightModule>(f, lam, true, 4);
    TensorModule n4(m1, false, m2, true, 4);
    NCanonicalBasis ncb4 = cb_of_N(bp, lam, lam, 2, 4);
    for (const auto& e : ub.elements) {
        size_t idx = ncb4.standard.size();
        for (size_t b = 0; b < ncb4.standard.size(); ++b)
            if (ncb4.standard[b] == e.index) idx = b;
        REQUIRE(idx < ncb4.standard.size());
        PiScalar fac = PiScalar::pi_pow(rd.pair(rd.tilde(e.index.b2.nu), lam));
        CHECK(act_on_family(n4, e.value) == ncb4.cb_vec(idx) * fac);
    }
}

TEST_CASE("pi-almost-orthonormality of the Udot canonical basis") {
    auto f = make_f("osp(1|2)", 14);
    RankOneCBProvider bp(f);
    UDotCanonicalBasis ub = cb_of_udot(bp, {1}, 2);
    for (size_t a = 0; a < ub.elements.size(); ++a)
        for (size_t b = a; b < ub.elements.size(); ++b) {
            PiScalar g = dot_form(*f, ub.elements[a].value,
                                  ub.elements[b].value);
            if (a == b)
                CHECK(((g - PiScalar::one()).series_integral_from(1, 12) ||
                       (g - PiScalar::pi()).series_integral_from(1, 12)));
            else
                CHECK(g.series_integral_from(1, 12));
        }
}
