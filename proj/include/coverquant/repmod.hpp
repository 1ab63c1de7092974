#pragma once

// Weight modules for the covering quantum group U: formal words in the
// generators E_i^{(n)}, F_i^{(n)}, K_mu, J_mu; the algebra automorphisms
// omega, rho, bar, dagger, tau_1, bar-tau_1 as word transformations; Verma
// modules M(lambda) (= f as a space), simple quotients V(lambda) with exact
// per-weight bases, omega-twisted actions; the four tensor structures
// Delta_1..Delta_4 with the super Koszul sign rule; polarizations.
//
// Conventions (all actions are left actions):
//   M(lambda):  E_i 1 = 0,  F_i x = theta_i x,
//               J_nu K_mu x = pi^{<nu,lambda-|x|'>} v^{<mu,lambda-|x|'>} x,
//   E_i x = ( pi_i^{p(x)-p(i)} r_i(x) (pi_i v_i)^{<i,lambda>}
//             - v_i^{-<i,lambda-|x|'+i'>} _ir(x) ) / (pi_i v_i - v_i^{-1}).
//   V(lambda) = M(lambda) / sum_i f theta_i^{<i,lambda>+1}.
//   The omega-twisted module {}^omega M has u acting as omega(u).

#include <memory>
#include <tuple>

#include "coverquant/halfalg.hpp"

namespace coverquant {

// ---------------------------------------------------------------------------
// Formal words in the generators of U.
// ---------------------------------------------------------------------------
struct ULetter {
    char kind = 'E';  // 'E', 'F', 'K', 'J'
    int i = 0;        // generator index (E/F only)
    int n = 1;        // divided power (E/F only)
    Coweight mu;      // lattice argument (K/J only)

    bool operator==(const ULetter& o) const {
        return kind == o.kind && i == o.i && n == o.n && mu == o.mu;
    }
    bool operator<(const ULetter& o) const {
        return std::tie(kind, i, n, mu) < std::tie(o.kind, o.i, o.n, o.mu);
    }
};

struct UTerm {
    PiScalar c;
    std::vector<ULetter> word;
};

struct UElem {
    std::vector<UTerm> terms;

    static UElem one();
    static UElem gen(ULetter l);
    static UElem E(int i, int n = 1);
    static UElem F(int i, int n = 1);
    static UElem K(Coweight mu);
    static UElem J(Coweight mu);

    UElem operator*(const UElem& o) const;  // concatenation product
    UElem operator+(const UElem& o) const;
    UElem operator-(const UElem& o) const;
    UElem operator*(const PiScalar& s) const;

    // Merge equal words, drop zero terms, sort words for determinism.
    void collect();
    bool is_zero() const;
    bool operator==(const UElem& o) const;
};

// K_{sign * tilde(nu)} and J_{tilde(nu)} as single-letter elements.
UElem u_ktilde(const RootDatum& rd, const NuVec& nu, int sign = +1);
UElem u_jtilde(const RootDatum& rd, const NuVec& nu);

// Z[I]-weight of a word: +n i per E_i^{(n)}, -n i per F_i^{(n)}.
NuVec uword_wt(const RootDatum& rd, const std::vector<ULetter>& w);
// Z_2-parity of a word.
int uword_parity(const RootDatum& rd, const std::vector<ULetter>& w);

// ---------------------------------------------------------------------------
// Automorphisms of U as word transformations.
//   omega:  E -> F, F_i -> pi_i Jt_i E_i, K_mu -> K_{-mu}          (auto)
//   rho:    E_i -> pi_i Jt_i E_i, F -> F, K_mu -> K_{-mu}          (anti)
//   bar:    K_mu -> J_mu K_{-mu}, coefficients bar-conjugated      (auto)
//   dagger: E_i -> pi_i Jt_i E_i, K_mu -> J_mu K_mu, coeff dagger  (auto)
//   tau1:   E_i -> v_i^{-1} Kt_{-i} F_i, F_i -> v_i^{-1} Kt_i E_i  (anti)
//   tau1bar = bar . tau1 . bar                                     (anti)
// Divided powers are mapped exactly (closed forms; J_nu^2 = 1 used).
// ---------------------------------------------------------------------------
enum class AutoKind { Omega, OmegaInv, Rho, Bar, Dagger, Tau1, Tau1Bar };
UElem apply_auto(const RootDatum& rd, AutoKind kind, const UElem& u);

// ---------------------------------------------------------------------------
// Module vectors: coordinates per f-depth nu (the vector sits in weight
// lambda - nu').  Coordinate vectors follow the module's per-depth basis.
// ---------------------------------------------------------------------------
struct MVec {
    std::map<NuVec, std::vector<PiScalar>> comps;

    bool is_zero() const;
    MVec operator+(const MVec& o) const;
    MVec operator-(const MVec& o) const;
    MVec operator*(const PiScalar& s) const;
    bool operator==(const MVec& o) const;
    void add_in(const NuVec& nu, int k, const PiScalar& c);
    void prune();
};

// ---------------------------------------------------------------------------
// A highest-weight module: the Verma M(lambda) or the simple V(lambda),
// realized on quotients of the halfalg graded components.  Immutable after
// construction (lazy per-weight tables behind a const interface).
// ---------------------------------------------------------------------------
class WeightModule {
public:
    WeightModule(std::shared_ptr<const HalfAlg> f, Weight lambda, bool simple,
                 int depth);

    const HalfAlg& half() const { return *f_; }
    std::shared_ptr<const HalfAlg> half_ptr() const { return f_; }
    const Weight& lambda() const { return lambda_; }
    bool simple() const { return simple_; }
    int depth() const { return depth_; }

    int dim(const NuVec& nu) const;
    // Indices (into the halfalg basis of f_nu) of the chosen basis words.
    const std::vector<int>& basis(const NuVec& nu) const;
    // Module coordinates of the k-th halfalg basis vector of f_nu.
    const std::vector<PiScalar>& fbasis_coords(const NuVec& nu, int k) const;

    // Project an f element to module coordinates / lift a component back to
    // a representative in f (basis words map to themselves).
    MVec project(const FElem& x) const;
    FElem lift(const NuVec& nu, const std::vector<PiScalar>& coords) const;

    // The highest-weight vector (image of 1).
    MVec highest() const;

    // Gram matrix of the polarization on the depth-nu weight space,
    // normalized by (eta, eta) = 1 and contravariant under tau1.
    const std::vector<std::vector<PiScalar>>& pol_gram(const NuVec& nu) const;

private:
    struct QComp {
        std::vector<int> qbasis;                      // indices into f basis
        std::vector<std::vector<PiScalar>> fb_coords; // f-basis -> module
    };
    const QComp& qcomp(const NuVec& nu) const;

    std::shared_ptr<const HalfAlg> f_;
    Weight lambda_;
    bool simple_;
    int depth_;
    mutable std::map<NuVec, QComp> comps_;
    mutable std::map<NuVec, std::vector<std::vector<PiScalar>>> pol_;
};

// E_i action on Verma coordinates (raw f element), highest weight lambda.
FElem verma_E(const HalfAlg& f, const Weight& lambda, int i, const FElem& x);

// Action of one generator letter / a whole element on a module vector.
// `twisted` selects the omega-twisted structure (u acts by omega(u)).
// Throws on depth overflow.
MVec act_letter(const WeightModule& m, bool twisted, const ULetter& l,
                const MVec& x);
MVec act(const WeightModule& m, bool twisted, const UElem& u, const MVec& x);

// Polarization (x, y) on a module; zero across different depths.
PiScalar polarization(const WeightModule& m, const MVec& x, const MVec& y);

// ---------------------------------------------------------------------------
// Tensor structures.  A tensor vector stores, per bi-depth (nu1, nu2), the
// coefficient matrix in basis1(nu1) x basis2(nu2).
// ---------------------------------------------------------------------------
struct TVec {
    std::map<std::pair<NuVec, NuVec>, std::vector<std::vector<PiScalar>>> comps;

    bool is_zero() const;
    TVec operator+(const TVec& o) const;
    TVec operator-(const TVec& o) const;
    TVec operator*(const PiScalar& s) const;
    bool operator==(const TVec& o) const;
    void add_in(const NuVec& n1, const NuVec& n2, int k, int l,
                const PiScalar& c, int d1, int d2);
    void prune();
};

// The terms of Delta_s(letter) (or its bar-conjugate): a list of
// (first factor, second factor, parity of the second factor) with the
// convention that applying (A tensor B) to x tensor y costs the Koszul
// sign pi^{p(B) p(x)}.
std::vector<std::tuple<UElem, UElem, int>> delta_terms(const RootDatum& rd,
                                                       int s, const ULetter& l,
                                                       bool barred);

class TensorModule {
public:
    TensorModule(std::shared_ptr<const WeightModule> first, bool first_twisted,
                 std::shared_ptr<const WeightModule> second,
                 bool second_twisted, int s);

    const WeightModule& first() const { return *m1_; }
    const WeightModule& second() const { return *m2_; }
    bool first_twisted() const { return tw1_; }
    bool second_twisted() const { return tw2_; }
    int s() const { return s_; }

    // eta tensor xi: the product of the factor highest vectors.
    TVec highest() const;
    TVec act(const UElem& u, const TVec& w) const;
    // Action through Delta_s-bar instead of Delta_s (used by the quasi-R
    // intertwining equations).
    TVec act_barred(const UElem& u, const TVec& w) const;
    // Pure tensor from factor vectors.
    TVec pure(const MVec& x, const MVec& y) const;

private:
    TVec act_word(const std::vector<ULetter>& w, const TVec& x,
                  bool barred) const;
    TVec act_letter_t(const ULetter& l, const TVec& x, bool barred) const;

    std::shared_ptr<const WeightModule> m1_, m2_;
    bool tw1_, tw2_;
    int s_;
};

// Diagonal factor pi_nu pi^{<tilde nu, lambda>} realizing the isomorphism
// V(lambda) -> {}^{omega^2} V(lambda) on the depth-nu weight space.
PiScalar omega_square_factor(const RootDatum& rd, const Weight& lambda,
                             const NuVec& nu);

// J-polarization pairing on N(lambda, lambda') = V(lambda) x omega-twisted
// V(lambda'): (x (x) x', y (x) y') = pi_nu pi^{<tilde nu, lambda'>}
// (x, y)_lambda (x', y')_{lambda'}, nu the common depth of the second
// factors; contravariant for Delta_3 against Delta_4 through tau1.
PiScalar jpolarization(const TensorModule& n, const TVec& w, const TVec& wp);

}  // namespace coverquant
