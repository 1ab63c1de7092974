// Unit tests for the quasi-R-matrix truncations: the rank-one closed form
// at low height, integrality, unitarity (with a corrupted-input negative
// control), the intertwining relation checked as module operators for all
// four tensor structures (E and F equations), the transports between the
// four variants, and the induced bar involution squaring to the identity.

#include "doctest.h"

#include "coverquant/quasir.hpp"

using namespace coverquant;

namespace {

std::shared_ptr<const HalfAlg> make_f(const std::string& name, int h) {
    return std::make_shared<HalfAlg>(builtin_datum(name), h);
}

// A Verma tensor product with tensor structure s, twisted so Theta_s acts
// locally finitely: for s = 3,4 (Theta in U^+ (x) U^-) the F-slot must meet
// the omega-twisted factor, M(lambda) (x) {}^omega M(lambda'); for s = 1,2
// (Theta in U^- (x) U^+) it is {}^omega M(lambda) (x) M(lambda').
TensorModule verma_tensor(std::shared_ptr<const HalfAlg> f, Weight lam,
                          Weight lamp, int depth, int s) {
    auto m1 = std::make_shared<WeightModule>(f, lam, false, depth);
    auto m2 = std::make_shared<WeightModule>(f, lamp, false, depth);
    if (s >= 3) return TensorModule(m1, false, m2, true, s);
    return TensorModule(m1, true, m2, false, s);
}

// Some probe vectors: images of the highest vector under low F-monomials.
std::vector<TVec> probes(const TensorModule& n, int rank) {
    std::vector<TVec> out;
    out.push_back(n.highest());
    for (int i = 0; i < rank; ++i) out.push_back(n.act(UElem::F(i), out[0]));
    for (int i = 0; i < rank; ++i)
        for (int j = 0; j < rank; ++j)
            out.push_back(n.act(UElem::F(i), n.act(UElem::F(j), out[0])));
    out.push_back(n.act(UElem::F(0, 2), out[0]));
    return out;
}

// Check Delta_s(u) Theta w = Theta Delta_s-bar(u) w for generators u.
void check_intertwining(const TensorModule& n, const ThetaTruncation& th) {
    const RootDatum& rd = n.first().half().datum();
    std::vector<UElem> gens;
    for (int i = 0; i < rd.rank(); ++i) {
        gens.push_back(UElem::E(i));
        gens.push_back(UElem::F(i));
    }
    gens.push_back(u_ktilde(rd, NuVec(rd.rank(), 1)));
    gens.push_back(u_jtilde(rd, NuVec(rd.rank(), 1)));
    for (const TVec& w : probes(n, rd.rank())) {
        for (const UElem& u : gens) {
            // act_barred evaluates (bar (x) bar) Delta at the given letter,
            // so Delta-bar(u) is act_barred at bar(u).
            TVec lhs = n.act(u, apply_theta(n, th, w));
            TVec rhs = apply_theta(
                n, th, n.act_barred(apply_auto(rd, AutoKind::Bar, u), w));
            CHECK(lhs == rhs);
        }
    }
}

}  // namespace

TEST_CASE("rank one lowest terms and integrality") {
    auto f = make_f("osp(1|2)", 8);
    ThetaTruncation th = compute_theta(*f, 3, 6);
    // Height zero: 1 (x) 1.
    CHECK(th.comps.at({0})[0][0] == PiScalar::one());
    // Height one: (v - pi v^{-1}) E (x) F, pinned by the E-equations.
    PiScalar c1 = PiScalar::v(1) - PiScalar::piv(1, -1);
    CHECK(th.comps.at({1})[0][0] == c1);
    // bar-antisymmetry of the height-one term.
    CHECK(th.comps.at({1})[0][0].bar() == -c1);
    // Integrality in divided-power normalization: the stored coefficient is
    // against the word theta^n = [n]! theta^{(n)}, so the coefficient of
    // E^{(n)} (x) F^{(n)} is c_n [n]!^2 and lies in Z^pi[v, v^{-1}].
    for (const auto& [nu, m] : th.comps) {
        PiScalar fac = qfact(nu[0], 1);
        CHECK((m[0][0] * fac * fac).is_integral());
    }
}

TEST_CASE("unitarity for osp(1|2) and osp(1|4)") {
    auto f1 = make_f("osp(1|2)", 8);
    for (int s : {1, 2, 3, 4}) {
        ThetaTruncation th = compute_theta(*f1, s, 6);
        CHECK(check_unitarity(*f1, th).pass);
    }
    auto f2 = make_f("osp(1|4)", 6);
    for (int s : {1, 3}) {
        ThetaTruncation th = compute_theta(*f2, s, 4);
        UnitarityReport rep = check_unitarity(*f2, th);
        CHECK(rep.pass);
        CHECK(rep.failures.empty());
    }
}

TEST_CASE("unitarity fails on a corrupted truncation") {
    auto f = make_f("osp(1|2)", 8);
    ThetaTruncation th = compute_theta(*f, 3, 4);
    th.comps.at({2})[0][0] += PiScalar::v(3);
    UnitarityReport rep = check_unitarity(*f, th);
    CHECK(!rep.pass);
    CHECK(!rep.failures.empty());
}

TEST_CASE("theta denominators for osp(1|4) are quantum factorials") {
    // In word coordinates the coefficients acquire factorial denominators
    // (the basis words are not divided powers); clearing the per-letter
    // factorials of the weight must recover Laurent entries at low height.
    auto f = make_f("osp(1|4)", 6);
    ThetaTruncation th = compute_theta(*f, 3, 3);
    for (const auto& [nu, m] : th.comps) {
        PiScalar fac = qfact(nu[0], f->datum().d(0)) *
                       qfact(nu[1], f->datum().d(1));
        for (const auto& row : m)
            for (const auto& c : row) CHECK((c * fac * fac).is_laurent());
    }
}

TEST_CASE("intertwining as operators, rank one, s = 3 and s = 4") {
    auto f = make_f("osp(1|2)", 10);
    for (int s : {3, 4}) {
        ThetaTruncation th = compute_theta(*f, s, 6);
        check_intertwining(verma_tensor(f, {3}, {2}, 9, s), th);
    }
}

TEST_CASE("intertwining as operators, rank one, s = 1 and s = 2") {
    auto f = make_f("osp(1|2)", 10);
    for (int s : {1, 2}) {
        ThetaTruncation th = compute_theta(*f, s, 6);
        check_intertwining(verma_tensor(f, {3}, {2}, 9, s), th);
    }
}

TEST_CASE("intertwining as operators, osp(1|4), all s") {
    auto f = make_f("osp(1|4)", 7);
    for (int s : {1, 2, 3, 4}) {
        ThetaTruncation th = compute_theta(*f, s, 4);
        check_intertwining(verma_tensor(f, {1, 1}, {1, 0}, 7, s), th);
    }
}

TEST_CASE("transport between the variants") {
    for (auto& [name, H] :
         std::vector<std::pair<std::string, int>>{{"osp(1|2)", 6},
                                                  {"osp(1|4)", 4}}) {
        auto f = make_f(name, 8);
        const RootDatum& rd = f->datum();
        ThetaTruncation t1 = compute_theta(*f, 1, H);
        ThetaTruncation t3 = compute_theta(*f, 3, H);
        // Theta_3 = tau(bar Theta_1): entrywise
        // t3[nu][l][k] = pi^{p(nu)} bar(t1[nu][k][l]).
        for (const auto& [nu, m1] : t1.comps) {
            const auto& m3 = t3.comps.at(nu);
            PiScalar sgn = PiScalar::pi_pow(rd.p_nu(nu));
            int d = static_cast<int>(m1.size());
            for (int k = 0; k < d; ++k)
                for (int l = 0; l < d; ++l)
                    CHECK(m3[l][k] == sgn * m1[k][l].bar());
        }
        // Theta_4 carries the Theta_3 matrices with the Jt decoration.
        ThetaTruncation t4 = compute_theta(*f, 4, H);
        CHECK(t4.jslot == 1);
        CHECK(t4.comps == t3.comps);
    }
}

TEST_CASE("bar involution on a simple tensor module squares to one") {
    auto f = make_f("osp(1|2)", 10);
    ThetaTruncation th = compute_theta(*f, 3, 8);
    auto m1 = std::make_shared<WeightModule>(f, Weight{3}, true, 8);
    auto m2 = std::make_shared<WeightModule>(f, Weight{2}, true, 8);
    TensorModule n(m1, false, m2, true, 3);
    auto psi = [&](const TVec& w) { return apply_theta(n, th, bar_tvec(w)); };
    TVec w = n.highest();
    std::vector<TVec> ws{w};
    for (int k = 0; k < 5; ++k) ws.push_back(n.act(UElem::F(0), ws.back()));
    for (const TVec& x : ws) {
        CHECK(psi(psi(x)) == x);
        // Psi commutes with the bar-fixed generators:
        // Psi(F x) = Theta bar-Delta(F) bar(x) = Delta(F) Psi(x).
        CHECK(psi(n.act(UElem::F(0), x)) == n.act(UElem::F(0), psi(x)));
    }
    // The highest vector itself is bar-invariant.
    CHECK(psi(w) == w);
}
