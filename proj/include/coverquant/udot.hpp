#pragma once

// The modified form U-dot: idempotented U with orthogonal idempotents 1_zeta.
//
// Elements are kept in the minus-then-plus normal form
//     sum  c . (b_k)^- 1_zeta (b_l)^+
// with b_k, b_l halfalg basis monomials; coordinates are stored per
// (zeta, |x|, |x'|) as a matrix over the two f bases.  The relations
//     x 1_lambda y 1_eta = delta_{lambda, eta+|y|} (xy) 1_lambda,
//     K_nu 1_lambda = v^{<nu,lambda>} 1_lambda,
//     J_nu 1_lambda = pi^{<nu,lambda>} 1_lambda
// are applied eagerly, so no Cartan letters survive.  Moving E_i to the
// right of an F-monomial uses the commutation
//     E_i y^- = pi_i^{p(y)} y^- E_i
//       + (pi_i^{p(y)-p(i)} r_i(y)^- Jt_i Kt_i - Kt_{-i} (_ir y)^-) /
//         (pi_i v_i - v_i^{-1}),
// with the Cartan tags resolved against the idempotent.
//
// The module also carries the four (anti)automorphisms, evaluation on the
// tensor families N(lambda, lambda'), and the two bilinear forms: the
// tau_1-contravariant form (computed algebraically by stripping E-parts
// through the right adjunction (xu, y) = (x, y tau1bar(u)) down to the base
// case (x^- 1_zeta, y^- 1_zeta) = (x, y)_f) and its dagger-conjugate
// variant, plus the limit realization over growing (lambda, lambda').

#include "coverquant/repmod.hpp"

namespace coverquant {

struct UDotKey {
    Weight zeta;  // idempotent between the F-part and the E-part
    NuVec nm;     // Z[I]-weight of the F-side f monomial
    NuVec np;     // Z[I]-weight of the E-side f monomial

    bool operator<(const UDotKey& o) const {
        return std::tie(zeta, nm, np) < std::tie(o.zeta, o.nm, o.np);
    }
    bool operator==(const UDotKey& o) const {
        return zeta == o.zeta && nm == o.nm && np == o.np;
    }
};

struct UDotElem {
    // comps[key][k][l]: coefficient of (b_k)^- 1_zeta (b_l)^+.
    std::map<UDotKey, std::vector<std::vector<PiScalar>>> comps;

    bool is_zero() const;
    UDotElem operator+(const UDotElem& o) const;
    UDotElem operator-(const UDotElem& o) const;
    UDotElem operator*(const PiScalar& c) const;
    bool operator==(const UDotElem& o) const;
    void add_in(const UDotKey& key, int k, int l, const PiScalar& c, int dm,
                int dp);
    void prune();
};

// 1_zeta.
UDotElem udot_unit(const Weight& zeta);
// x^- 1_zeta x'^+ for homogeneous x, x' in f.
UDotElem udot_monomial(const HalfAlg& f, const FElem& xm, const Weight& zeta,
                       const FElem& xp);

// The left and right weights: the term lies in 1_wL Udot 1_wR.
Weight udot_left_weight(const RootDatum& rd, const UDotKey& key);
Weight udot_right_weight(const RootDatum& rd, const UDotKey& key);

// Left action u . a and right action a . u of a formal U word.
UDotElem act_left(const HalfAlg& f, const UElem& u, const UDotElem& a);
UDotElem mult_right(const HalfAlg& f, const UDotElem& a, const UElem& u);

// u 1_zeta in normal form.
UDotElem normalize(const HalfAlg& f, const UElem& u, const Weight& zeta);

// Product in Udot (bilinear; orthogonal across mismatched idempotents).
UDotElem udot_mult(const HalfAlg& f, const UDotElem& a, const UDotElem& b);

// omega, rho, bar, dagger on Udot: 1_zeta maps to 1_{-zeta} under omega and
// rho (rho antimultiplicative); bar and dagger fix the idempotents and
// conjugate coefficients.
UDotElem auto_udot(const HalfAlg& f, AutoKind kind, const UDotElem& a);

// Evaluation a . (eta (x) xi) on a tensor family member N(lambda, lambda'):
// the embedded idempotent projects onto the weight-zeta part.
TVec act_on_family(const TensorModule& n, const UDotElem& a);

// The tau_1-contravariant symmetric bilinear form (Theorem-level form).
PiScalar dot_form(const HalfAlg& f, const UDotElem& a, const UDotElem& b);
// The tau_1'-contravariant variant (x,y)' = dagger(bar((bar(x)^dag, ...))).
PiScalar dot_form_prime(const HalfAlg& f, const UDotElem& a,
                        const UDotElem& b);

// Limit realization: (a(eta (x) xi), b(eta (x) xi))_{lambda, lambda'} along
// lambda = lambda_0 + k rho-hat until two successive values agree to v-adic
// order `order` (left side acted through Delta_3, right side through
// Delta_4, paired by the J-polarization).
struct FormLimitResult {
    PiScalar value;
    int k = -1;
    bool stabilized = false;
};
FormLimitResult form_limit(const HalfAlg& f, const UDotElem& a,
                           const UDotElem& b, int kmax = 6, int order = 20);

// A weight lambda with <i, lambda> = targets[i] for all i (exact; throws if
// no integral solution exists in the X lattice).
Weight weight_with_pairings(const RootDatum& rd,
                            const std::vector<long long>& targets);

}  // namespace coverquant
