#pragma once

// Twistor maps: the Q(t)-linear isomorphisms (t^2 = -1) exchanging the
// pi = +1 and pi = -1 specializations, built from an enhancer phi.
//
// An enhancer is a map phi : Z[I] x X -> Z/4 additive in the first slot and
// additive in the second against root-lattice shifts,
//     phi(nu, lam + mu') = phi(nu, lam) + phi(nu, mu'),
// subject to phi(i,i') = d_i, phi(i,j') even for i != j, and
// phi(i,j') - phi(j,i') = i.j + 2p(i)p(j).  It is stored through its values
// on (i, j') together with its (free) values on coset representatives of
// X / Z[I']; build_enhancer finds the lexicographically least table.
//
// On scalars the twist is v -> t^{-1} v, pi -> -pi (twist_scalar); elements
// over the Gaussian ring are kept as re/im pairs of the base objects, so all
// linear structure is reused.  The twists implemented here:
//   - f[t]:    theta_i -> theta_i with the star-product rule
//              x * y = t^{phi(|x|,|y|')} x y, so a word w = i_1...i_n maps to
//              t^{sum_{s<t} phi(i_s, i_t')} w,
//   - Udot[t]: E_i -> t^{2d_i} E_i Tt_i Ups_i,  F_i -> F_i Ups_{-i},
//              K_mu -> T_{-mu} K_mu,  J_mu -> T_{2mu} J_mu, with the tag
//              letters T_mu, Ups_mu resolved against idempotents via
//              1_lam T_mu Ups_nu = t^{<mu,lam> + phi(nu,lam)} 1_lam,
//   - V(lambda)[t]:  X_lam(x eta) = t^{-phi(nu,lam)} X(x) eta,
//   - N(lambda,lambda')[t]:  X(w (x) w') =
//              t^{kappa(|w|,|w'|)} X_lam(w) (x) X_{-lam'}(w'),
// with kappa built by the recursion
//   kappa(lam, -lam') = 0,   kappa(lam - nu', -lam') = phi(nu, lam'),
//   kappa(zeta, zeta' + i') = kappa(zeta, zeta') + phi(i, zeta) + 2 d_i
//                             + <tilde i, zeta + zeta'> + 2 p(zeta) p(i).
// Canonical basis vectors are exact t-power eigenvectors of these maps; the
// eigencheck routines extract the exponents (mod 4) and throw otherwise.

#include "coverquant/cbengine.hpp"

namespace coverquant {

// ---------------------------------------------------------------------------
// Enhancer.
// ---------------------------------------------------------------------------
struct Enhancer {
    RootDatum rd;
    // Coset representatives of X / Z[I']; reps[0] is the zero weight.
    std::vector<Weight> coset_reps;
    // phi_root[i][j] = phi(i, j') mod 4.
    std::vector<std::vector<int>> phi_root;
    // phi_coset[i][c] = phi(i, coset_reps[c]) mod 4.
    std::vector<std::vector<int>> phi_coset;

    // phi(i, lam) mod 4 via the decomposition lam = rep + sum_j m_j j'.
    int phi_i(int i, const Weight& lam) const;
    // phi(nu, lam) mod 4, additive in nu (entries may be negative).
    int phi(const NuVec& nu, const Weight& lam) const;
};

// Exhaustive mod-4 search over the free choices (diagonal and mixed root
// values constrained as above, coset-representative values free), returning
// the lexicographically least table.  Throws if no solution exists.
Enhancer build_enhancer(const RootDatum& rd);

// ---------------------------------------------------------------------------
// Gaussian extension of the element types: x = re + t * im.
// ---------------------------------------------------------------------------
template <class T>
struct Gauss {
    T re, im;

    Gauss() = default;
    explicit Gauss(T r) : re(std::move(r)) {}
    Gauss(T r, T i) : re(std::move(r)), im(std::move(i)) {}

    bool is_zero() const { return re.is_zero() && im.is_zero(); }
    Gauss operator+(const Gauss& o) const {
        return Gauss(re + o.re, im + o.im);
    }
    Gauss operator-(const Gauss& o) const {
        return Gauss(re - o.re, im - o.im);
    }
    Gauss operator*(const GaussPi& g) const {
        return Gauss(re * g.re() - im * g.im(), re * g.im() + im * g.re());
    }
    bool operator==(const Gauss& o) const { return re == o.re && im == o.im; }
    bool operator!=(const Gauss& o) const { return !(*this == o); }
};

using GFElem = Gauss<FElem>;
using GMVec = Gauss<MVec>;
using GTVec = Gauss<TVec>;
using GUDotElem = Gauss<UDotElem>;

// x * t^k as a Gaussian element.
template <class T>
Gauss<T> gauss_embed(const T& x, long long tpow = 0) {
    return Gauss<T>(x) * GaussPi::t_pow(tpow);
}

// ---------------------------------------------------------------------------
// Twist on f[t].
// ---------------------------------------------------------------------------

// sum_{s<t} phi(i_s, i_t') mod 4 for a generator word.
int word_twist_exp(const Enhancer& e, const Word& w);

GFElem twist_f(const HalfAlg& f, const Enhancer& e, const FElem& x);

// The exponent l with X(b) = t^l b; throws when the image is not an exact
// t-power multiple (never happens on canonical basis elements).
int ell_of(const HalfAlg& f, const Enhancer& e, const FElem& b);

// Componentwise differential on Gaussian f elements.
GFElem gdiff_left(const HalfAlg& f, int i, const GFElem& x);

// The anti-automorphism of f fixing the generators (word reversal).
FElem rho_f(const HalfAlg& f, const FElem& x);

// ---------------------------------------------------------------------------
// Twist on Udot[t].
// ---------------------------------------------------------------------------
GUDotElem twist_udot(const HalfAlg& f, const Enhancer& e, const UDotElem& a);

// X(u) 1_zeta for a formal word u, computed letter by letter with the tag
// bookkeeping (used to verify that twist_udot respects the relations).
GUDotElem twist_act(const HalfAlg& f, const Enhancer& e, const UElem& u,
                    const Weight& zeta);

// ---------------------------------------------------------------------------
// kappa and the module twists.
// ---------------------------------------------------------------------------

// kappa(lam - nu', mu' - lamp) mod 4 by the defining recursion.
int kappa(const Enhancer& e, const Weight& lam, const Weight& lamp,
          const NuVec& nu, const NuVec& mu);

// X_lam on V(lambda)[t] (or its omega twist; the map is the same, only the
// intertwining generators differ).
GMVec twist_module(const WeightModule& m, const Enhancer& e, const MVec& x);

// The operator X(E_i) / X(F_i) (untwisted) or X'(E_i) / X'(F_i) (twisted,
// X' = omega^{-1} X omega) on module vectors, tags resolved per weight.
GMVec xgen_act(const WeightModule& m, bool twisted, const Enhancer& e,
               const ULetter& l, const GMVec& x);

// X_{lam,lam'} on N(lambda, lambda')[t].
GTVec twist_N(const TensorModule& n, const Enhancer& e, const TVec& w);

// Delta(X(E_i)) / Delta(X(F_i)) as an operator on N(lambda,lambda')[t]:
// the tag group-likes T (x) T, Ups (x) Ups resolve against the bi-weight and
// the remaining Delta(gen) acts through the module.
GTVec xgen_act_N(const TensorModule& n, const Enhancer& e, const ULetter& l,
                 const GTVec& w);

// ---------------------------------------------------------------------------
// Eigenchecks on canonical bases.
// ---------------------------------------------------------------------------

// The exponent l with X(a) = t^l a; throws when not proportional.
int cb_eigencheck_udot(const HalfAlg& f, const Enhancer& e, const UDotElem& a);
int cb_eigencheck_N(const TensorModule& n, const Enhancer& e, const TVec& w);

// Exponent table f(b, b', zeta) mod 4 over the glued Udot canonical basis
// with factor heights <= bound.
struct TwistEigenTable {
    Weight zeta;
    std::vector<PiPair> index;
    std::vector<int> exponent;
};
TwistEigenTable cb_eigencheck(const CBProvider& bp, const Enhancer& e,
                              const Weight& zeta, int bound);

}  // namespace coverquant
