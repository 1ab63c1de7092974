#pragma once

// Canonical bases.
//
// The canonical basis B of f enters as a pluggable provider: rank one is
// exact (B = {pi^eps theta^{(a)}}), higher rank is loaded from a data file
// and validated (bar-fixedness, integrality, image properties) before use.
// On top of the provider this module computes
//   - the bar-involution Psi = Theta . (bar (x) bar) on N(lambda, lambda'),
//   - the r-matrix of Psi against the standard pi-basis
//     {b^- eta (x) b'^+ xi} and the semi-linear solver producing the
//     unitriangular p-coefficients,
//   - the canonical basis of N(lambda, lambda') per weight block,
//   - the cancellation maps chi, chi_4, delta_lambda and the composite t,
//   - the glued canonical basis of Udot (stabilized lift through the
//     evaluation Udot -> N(lambda, lambda'') for lambda >> 0, with a
//     mandatory recomputation at the rho-hat-shifted pair).

#include "coverquant/quasir.hpp"
#include "coverquant/udot.hpp"

namespace coverquant {

// ---------------------------------------------------------------------------
// Canonical basis provider for f.
// ---------------------------------------------------------------------------
class CBProvider {
public:
    virtual ~CBProvider() = default;
    virtual const HalfAlg& half() const { return *half_ptr(); }
    virtual std::shared_ptr<const HalfAlg> half_ptr() const = 0;
    // Number of B elements of weight nu (pi-classes; the canonical
    // representative has +1 leading eps_+ coefficient).
    virtual int count(const NuVec& nu) const = 0;
    // Monomial-coordinate expansion of the k-th element in the f_nu basis.
    virtual FElem element(const NuVec& nu, int k) const = 0;
};

// Rank one: B = {theta^{(a)}}, one element per height.
class RankOneCBProvider : public CBProvider {
public:
    explicit RankOneCBProvider(std::shared_ptr<const HalfAlg> f);
    std::shared_ptr<const HalfAlg> half_ptr() const override { return f_; }
    int count(const NuVec& nu) const override;
    FElem element(const NuVec& nu, int k) const override;

private:
    std::shared_ptr<const HalfAlg> f_;
};

// File-backed provider for higher rank.  The JSON schema is
//   {"schema": 1, "datum": "...", "elements": [
//      {"nu": [..], "terms": [{"monomial": [[i, n], ...],
//                              "coeff": [[exp, plus, minus], ...]}, ...]}]}
// where each term is a product of divided powers theta_i^{(n)} scaled by a
// Laurent coefficient (entries [e, a, b] meaning a v^e at pi=+1 and b v^e
// at pi=-1).  Divided-power combinations with integral coefficients lie in
// the integral form by construction; loading additionally validates each
// element: bar_f-fixed, homogeneous of the declared weight, and nonzero.
class FileCBProvider : public CBProvider {
public:
    FileCBProvider(std::shared_ptr<const HalfAlg> f, const std::string& path);
    std::shared_ptr<const HalfAlg> half_ptr() const override { return f_; }
    int count(const NuVec& nu) const override;
    FElem element(const NuVec& nu, int k) const override;

private:
    std::shared_ptr<const HalfAlg> f_;
    std::map<NuVec, std::vector<FElem>> elems_;
};

// The vanishing predicate: b in B(lambda) iff b^- eta_lambda != 0.
bool in_b_lambda(const WeightModule& m, const FElem& b);

// ---------------------------------------------------------------------------
// Pair indices and the partial order.
// ---------------------------------------------------------------------------
struct CBIndex {
    NuVec nu;
    int k = 0;
    bool operator<(const CBIndex& o) const {
        return std::tie(nu, k) < std::tie(o.nu, o.k);
    }
    bool operator==(const CBIndex& o) const { return nu == o.nu && k == o.k; }
};

// Canonical representative of a pi-pair class (b, b'): both factors are
// provider representatives, the pi sign being absorbed by coefficients.
struct PiPair {
    CBIndex b1;
    CBIndex b2;
    bool operator<(const PiPair& o) const {
        return std::tie(b1, b2) < std::tie(o.b1, o.b2);
    }
    bool operator==(const PiPair& o) const {
        return b1 == o.b1 && b2 == o.b2;
    }
};

// (p <= q): equal height difference ht|p1| - ht|p2| = ht|q1| - ht|q2|, and
// either equal classes or a strict double height drop.
bool partial_order_leq(const PiPair& p, const PiPair& q);

// ---------------------------------------------------------------------------
// Bar involution and the semi-linear solver.
// ---------------------------------------------------------------------------

// Psi = Theta . (bar (x) bar).  The truncation must cover the depth of w.
TVec psi(const TensorModule& n, const ThetaTruncation& th, const TVec& w);

// Thrown when the input r-matrix violates the unitarity hypothesis of the
// semi-linear lemma (q + bar q != 0 at some step).
struct SemilinearError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Solve the semi-linear system on a finite poset.  leq[a][b] is the order
// (a <= b); r[a][b] is the coefficient of node b in Psi(node a), with
// r[a][a] = 1 and support b <= a.  Returns p with p[a][a] = 1,
// p[a][b] in vZ^pi[v] for b < a, and P = bar(P) R.  The splitting step
// takes q' = (positive-exponent part of q) from q = q' - bar q'.
std::vector<std::vector<PiScalar>> semilinear_solve(
    const std::vector<std::vector<char>>& leq,
    const std::vector<std::vector<PiScalar>>& r);

// The scalar-generic core of the solver, shared between the covering ring
// and classical instantiations (e.g. plain Z[v, v^{-1}] via RatFunc).
// `bar` is the semi-linear conjugation; `split(q)` returns q' with
// q = q' - bar(q') and q' in vZ[v], throwing SemilinearError otherwise.
template <class Scalar, class Bar, class Split>
std::vector<std::vector<Scalar>> semilinear_solve_generic(
    const std::vector<std::vector<char>>& leq,
    const std::vector<std::vector<Scalar>>& r, const Scalar& one, Bar&& bar,
    Split&& split) {
    size_t n = leq.size();
    for (size_t a = 0; a < n; ++a) {
        if (!(r[a][a] == one))
            throw SemilinearError("semilinear_solve: diagonal of r is not 1");
        for (size_t b = 0; b < n; ++b)
            if (!r[a][b].is_zero() && !leq[b][a])
                throw SemilinearError(
                    "semilinear_solve: r supported off the order");
    }
    std::vector<std::vector<Scalar>> p(n, std::vector<Scalar>(n));
    std::vector<std::vector<char>> done(n, std::vector<char>(n, 0));
    for (size_t a = 0; a < n; ++a) {
        p[a][a] = one;
        done[a][a] = 1;
    }
    // Fill p[a][c] for c < a once every intermediate p[a][b], c < b <= a, is
    // known; repeat passes until stable (the intervals are finite).
    bool progress = true;
    while (progress) {
        progress = false;
        for (size_t a = 0; a < n; ++a)
            for (size_t c = 0; c < n; ++c) {
                if (done[a][c] || !leq[c][a] || c == a) continue;
                bool ready = true;
                for (size_t b = 0; b < n && ready; ++b)
                    if (b != c && leq[c][b] && leq[b][a] && !done[a][b])
                        ready = false;
                if (!ready) continue;
                Scalar q;
                for (size_t b = 0; b < n; ++b)
                    if (b != c && leq[c][b] && leq[b][a])
                        q = q + bar(p[a][b]) * r[b][c];
                p[a][c] = split(q);
                done[a][c] = 1;
                progress = true;
            }
    }
    return p;
}

// ---------------------------------------------------------------------------
// Canonical basis of N(lambda, lambda').
// ---------------------------------------------------------------------------
struct NCanonicalBasis {
    Weight lambda, lambdap;
    int s = 3;
    std::shared_ptr<TensorModule> module;
    std::vector<PiPair> standard;  // index set (fixed deterministic order)
    std::vector<TVec> standard_vecs;
    std::vector<std::vector<char>> leq;     // partial order on `standard`
    std::vector<std::vector<PiScalar>> r;   // Psi against the standard basis
    std::vector<std::vector<PiScalar>> p;   // CB coefficients (rows)
    // CB vector for row a: sum_b p[a][b] standard_vecs[b].
    TVec cb_vec(size_t a) const;
};

// Compute the canonical basis of N_s(lambda, lambda') up to factor heights
// `bound` (inclusive); `s` is 3 or 4.  The provider supplies B; factors are
// restricted to B(lambda) x B(lambda').
NCanonicalBasis cb_of_N(const CBProvider& bp, const Weight& lambda,
                        const Weight& lambdap, int bound, int s = 3);

// Express a TVec in the standard basis of `ncb`; throws if not in the span.
std::vector<PiScalar> std_coords(const NCanonicalBasis& ncb, const TVec& w);

// ---------------------------------------------------------------------------
// Cancellation maps.
// ---------------------------------------------------------------------------

// A homomorphism from a highest-weight module into a tensor module, stored
// as per-depth images of the source basis vectors.
struct SplitHom {
    std::shared_ptr<const WeightModule> source;
    bool source_twisted = false;
    std::shared_ptr<TensorModule> target;
    std::map<NuVec, std::vector<TVec>> images;
    TVec apply(const MVec& x) const;
};

// chi: V(lambda + lambda') -> V(lambda) (x) V(lambda'), eta'' -> eta (x)
// eta' (both factors untwisted, Delta_3).  Built depth by depth up to
// `depth` by expressing each basis vector through F_i images.
SplitHom chi_split(std::shared_ptr<const HalfAlg> f, const Weight& lambda,
                   const Weight& lambdap, int depth);

// chi_4: {}^omega V(lambda' + lambda'') -> {}^omega V(lambda') (x)
// {}^omega V(lambda''), xi'' -> xi' (x) xi'' (both factors twisted,
// Delta_3), built through E_i images.
SplitHom chi4_split(std::shared_ptr<const HalfAlg> f, const Weight& lambdap,
                    const Weight& lambdapp, int depth);

// The contraction functional delta_lambda on N(lambda, lambda): stored as
// coefficients against the word basis on the weight-zero part.
struct Contraction {
    std::shared_ptr<TensorModule> module;
    std::map<std::pair<NuVec, NuVec>, std::vector<std::vector<PiScalar>>>
        coeffs;
    PiScalar apply(const TVec& w) const;
};

// Solve for the unique U-homomorphism N(lambda, lambda) -> trivial with
// delta(eta (x) xi) = 1.  Throws if the solution is not unique (depth must
// cover the whole finite-dimensional module).
Contraction delta_contract(std::shared_ptr<const HalfAlg> f,
                           const Weight& lambda, int depth);

// The cancellation map t = (1 (x) delta_{lambda'} (x) 1) . (chi (x) chi_4):
// N(lambda+lambda', lambda'+lambda'') -> N(lambda, lambda'').
struct CancellationMap {
    std::shared_ptr<TensorModule> source;
    std::shared_ptr<TensorModule> target;
    SplitHom chi;
    SplitHom chi4;
    Contraction delta;
    TVec apply(const TVec& w) const;
};

CancellationMap t_map(std::shared_ptr<const HalfAlg> f, const Weight& lambda,
                      const Weight& lambdap, const Weight& lambdapp,
                      int depth);

// ---------------------------------------------------------------------------
// Canonical basis of Udot.
// ---------------------------------------------------------------------------
struct UDotCBElement {
    PiPair index;
    UDotElem value;
};

struct UDotCanonicalBasis {
    Weight zeta;
    Weight lambda, lambdapp;  // the stabilization pair actually used
    std::vector<UDotCBElement> elements;
};

// Compute the elements b diamond_zeta b'' for all provider pairs with
// factor heights <= bound.  Picks lambda, lambda'' with <i,lambda>,
// <i,lambda''> > bound, lifts the CB of N(lambda, lambda'') through the
// evaluation at eta (x) xi, and recomputes at (lambda + rho-hat,
// lambda'' + rho-hat), asserting equality (throws on mismatch).
UDotCanonicalBasis cb_of_udot(const CBProvider& bp, const Weight& zeta,
                              int bound);

// The pi-sign-normalized form of a UDotElem: scaled by +-pi^eps so the
// lexicographically first nonzero coordinate has monic eps_+ leading term.
// Used for set comparisons "up to pi-representatives".
UDotElem pi_normal_form(const UDotElem& a);

// The bullet and bold-p combinatorics on Z[I] weights:
//   bullet(nu) = sum_{s<t} i_s . i_t over a reading of nu,
//   pbold(nu) = sum_{s<t} p(i_s) p(i_t).
long long bullet_form(const RootDatum& rd, const NuVec& nu);
long long pbold(const RootDatum& rd, const NuVec& nu);

}  // namespace coverquant
