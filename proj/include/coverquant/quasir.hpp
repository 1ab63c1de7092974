#pragma once

// Quasi-R-matrices Theta_s (s = 1..4) computed as exact truncations by
// weight recursion, entirely in f (x) f coordinates.
//
// Shapes: Theta_{1,nu} and Theta_{2,nu} live in U^-_nu (x) U^+_nu,
// Theta_{3,nu} and Theta_{4,nu} in U^+_nu (x) U^-_nu, with a central
// Jt_nu decoration on one slot for s in {2,4} (recorded in `jslot` and
// applied as a scalar on the target weight at application time).
//
// The defining relation Delta_s(u) Theta_s = Theta_s Delta_s-bar(u),
// restricted to u = E_i and graded by the first (s = 3,4) or the
// (f-coordinate) slot weight, becomes a linear system per weight with a
// unique solution; the commutation E_i y^- = pi_i^{p(y)} y^- E_i +
// (pi_i^{p(y)-p(i)} r_i(y)^- Jt_i Kt_i - Kt_{-i} _ir(y)^-)/(pi_i v_i -
// v_i^{-1}) turns both sides into f (x) f data with Cartan tags, so no
// module evaluation is needed.  Theta_4 = (Jt_nu (x) 1) Theta_3 and
// Theta_2 = tau((omega^{-1} (x) omega^{-1}) Theta_1) by transport.

#include "coverquant/repmod.hpp"

namespace coverquant {

struct ThetaTruncation {
    int s = 3;
    int H = 0;
    int jslot = 0;  // 0: none, 1: Jt_nu on slot 1, 2: Jt_nu on slot 2
    // comps[nu][k][l]: coefficient of (slot-1 basis k) (x) (slot-2 basis l)
    // in the f_nu halfalg bases.
    std::map<NuVec, std::vector<std::vector<PiScalar>>> comps;
};

// Compute the truncation of Theta_s to heights <= H.  Throws if the
// per-weight linear system is inconsistent or underdetermined (the defining
// relation guarantees a unique solution).
ThetaTruncation compute_theta(const HalfAlg& f, int s, int H);

struct UnitarityReport {
    bool pass = true;
    std::vector<NuVec> failures;
};

// Verify sum_{mu+mu'=nu} Theta_mu . bar(Theta_mu') = delta_{nu,0} for all
// ht nu <= H, as elements of f (x) f (the central Jt decorations cancel).
UnitarityReport check_unitarity(const HalfAlg& f, const ThetaTruncation& th);

// Apply (u1 (x) u2) to a tensor-module vector with the Koszul sign
// pi^{p(u2) p(x)} (u1, u2 acting on the respective factors).
TVec tensor_op(const TensorModule& n, const UElem& u1, const UElem& u2,
               const TVec& w);

// Apply Theta = sum_nu Theta_nu to a tensor-module vector.  The sum
// truncates because the slot acting on the first factor lowers its depth
// (s = 3,4) or the second factor's (s = 1,2); H must cover the support.
TVec apply_theta(const TensorModule& n, const ThetaTruncation& th,
                 const TVec& w);

// Coefficientwise bar on tensor coordinates: the bar involution of
// M(lambda) (x) {}^omega M(lambda') (and of its simple quotients) in the
// word bases.
TVec bar_tvec(const TVec& w);

// Exact solve of the (possibly overdetermined, consistent) system
// A x = b over PiScalar; throws on inconsistency or a nontrivial kernel.
std::vector<PiScalar> lin_solve(
    const std::vector<std::vector<PiScalar>>& a,
    const std::vector<PiScalar>& b);

}  // namespace coverquant
