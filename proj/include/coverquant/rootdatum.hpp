#pragma once

// Anisotropic super Cartan data and root data.
//
// A Cartan datum is a finite index set I with a symmetric pairing
// dot[i][j] = i.j and a parity p : I -> {0,1} subject to
//   (a) d_i = (i.i)/2 > 0,
//   (b) a_ij = 2(i.j)/(i.i) <= 0 for i != j (an integer),
//   (c) i odd  =>  a_ij even (anisotropy),
//   (d) d_i = p(i) mod 2 (bar-consistency); together these force i.j even.
// A root datum adds lattices Y, X with a perfect pairing and embeddings
// i -> i in Y (coroots) and i -> i' in X (roots) with <i, j'> = a_ij.

#include <numeric>
#include <string>
#include <vector>

#include "coverquant/scalar.hpp"

namespace coverquant {

// nu in N[I] (or Z[I]): multiplicities of the simple roots.
using NuVec = std::vector<int>;
// lambda in X, mu in Y: coordinates in the chosen lattice bases.
using Weight = std::vector<int>;
using Coweight = std::vector<int>;

inline int ht(const NuVec& nu) { return std::accumulate(nu.begin(), nu.end(), 0); }

struct CartanDatum {
    int rank = 0;
    std::vector<std::vector<int>> dot;  // rank x rank, symmetric
    std::vector<int> parity;            // entries in {0,1}

    int d(int i) const { return dot[i][i] / 2; }
    // a_ij = <i, j'> = 2(i.j)/(i.i)
    int a(int i, int j) const { return 2 * dot[i][j] / dot[i][i]; }
};

struct RootDatum {
    CartanDatum cd;
    int x_rank = 0;
    int y_rank = 0;
    // pairing[m][k] = <e_m, f_k> for the chosen bases of Y and X.
    std::vector<std::vector<int>> pairing;
    // embed_y[i] = coordinates of simple coroot i in Y.
    std::vector<Coweight> embed_y;
    // embed_x[i] = coordinates of simple root i' in X.
    std::vector<Weight> embed_x;

    int rank() const { return cd.rank; }
    int d(int i) const { return cd.d(i); }
    int parity(int i) const { return cd.parity[i]; }

    // <mu, lam> for mu in Y, lam in X.
    long long pair(const Coweight& mu, const Weight& lam) const;
    // <i, lam>: simple-coroot pairing.
    long long pair_i(int i, const Weight& lam) const {
        return pair(embed_y[i], lam);
    }
    // nu' in X: image of nu in Z[I] under i -> i'.
    Weight nu_to_x(const NuVec& nu) const;
    // tilde(nu) = sum_i d_i nu_i i in Y.
    Coweight tilde(const NuVec& nu) const;
    // <tilde(nu), mu'> = nu . mu (symmetric bilinear extension of dot).
    long long dot_nn(const NuVec& nu, const NuVec& mu) const;
    // parity p(nu) in {0,1}.
    int p_nu(const NuVec& nu) const;
    // v_nu = prod v_i^{nu_i}, pi_nu = prod pi_i^{nu_i}.
    PiScalar v_nu(const NuVec& nu) const;
    PiScalar pi_nu(const NuVec& nu) const;

    bool dominant(const Weight& lam) const {
        for (int i = 0; i < rank(); ++i)
            if (pair_i(i, lam) < 0) return false;
        return true;
    }

    // Shift lam by nu' (sign +1) or -nu' (sign -1).
    Weight shift(const Weight& lam, const NuVec& nu, int sign) const;
};

// Validation: returns a list of human-readable violations; empty == valid.
std::vector<std::string> validate(const CartanDatum& cd);
std::vector<std::string> validate(const RootDatum& rd);

// Builtin simply-connected data: "osp(1|2)" and "osp(1|4)".
RootDatum builtin_datum(const std::string& name);

// Vector helpers shared across modules.
Weight add_w(const Weight& a, const Weight& b);
Weight sub_w(const Weight& a, const Weight& b);
Weight neg_w(const Weight& a);
NuVec add_nu(const NuVec& a, const NuVec& b);
NuVec sub_nu(const NuVec& a, const NuVec& b);

}  // namespace coverquant
