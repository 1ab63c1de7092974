#include "coverquant/quasir.hpp"

#include <algorithm>
#include <array>
#include <stdexcept>
#include <utility>

namespace coverquant {

namespace {

using Mat = std::vector<std::vector<PiScalar>>;

FElem unit_f(const NuVec& nu, int k) {
    FElem x;
    x.add_in(nu, k, PiScalar::one());
    return x;
}

NuVec unit_nu(int rank, int i) {
    NuVec e(rank, 0);
    e[i] = 1;
    return e;
}

Mat zero_mat(int rows, int cols) {
    return Mat(rows, std::vector<PiScalar>(cols, PiScalar::zero()));
}

// Coefficient matrix of homogeneous images in the basis of `target`.
Mat image_matrix(const std::vector<FElem>& imgs, const NuVec& target,
                 int dim_t) {
    Mat m = zero_mat(static_cast<int>(imgs.size()), dim_t);
    for (size_t r = 0; r < imgs.size(); ++r) {
        auto it = imgs[r].comps.find(target);
        if (it == imgs[r].comps.end()) continue;
        // Coordinate vectors may be stored short of the full dimension.
        int len = std::min(dim_t, static_cast<int>(it->second.size()));
        for (int c = 0; c < len; ++c) m[r][c] = it->second[c];
    }
    return m;
}

void gen_weights(int rank, int rem, NuVec& cur, std::vector<NuVec>& out) {
    if (static_cast<int>(cur.size()) == rank) {
        out.push_back(cur);
        return;
    }
    for (int k = 0; k <= rem; ++k) {
        cur.push_back(k);
        gen_weights(rank, rem - k, cur, out);
        cur.pop_back();
    }
}

// All nu in N[I] with ht(nu) <= H, sorted by height (then lexicographically).
std::vector<NuVec> weights_up_to(int rank, int H) {
    std::vector<NuVec> out;
    NuVec cur;
    gen_weights(rank, H, cur, out);
    std::stable_sort(out.begin(), out.end(), [](const NuVec& a, const NuVec& b) {
        return ht(a) < ht(b);
    });
    return out;
}

// The + or - embedding of a halfalg basis word as a word in the generators.
UElem word_to_u(const HalfAlg& f, const NuVec& nu, int k, char kind) {
    const GradedComponent& gc = f.component(nu);
    const Word& w = gc.basis_word(k);
    UElem u = UElem::one();
    for (uint8_t j : w)
        u = u * (kind == 'E' ? UElem::E(j) : UElem::F(j));
    return u;
}

}  // namespace

std::vector<PiScalar> lin_solve(const Mat& a, const std::vector<PiScalar>& b) {
    int m = static_cast<int>(a.size());
    int n = m ? static_cast<int>(a[0].size()) : 0;
    std::array<std::vector<RatFunc>, 2> sols;
    for (int comp = 0; comp < 2; ++comp) {
        std::vector<std::vector<RatFunc>> rows(
            m, std::vector<RatFunc>(n + 1, RatFunc::zero()));
        for (int r = 0; r < m; ++r) {
            for (int c = 0; c < n; ++c)
                rows[r][c] = comp == 0 ? a[r][c].plus() : a[r][c].minus();
            rows[r][n] = comp == 0 ? b[r].plus() : b[r].minus();
        }
        int rank = 0;
        for (int col = 0; col < n; ++col) {
            int piv = -1;
            for (int r = rank; r < m; ++r)
                if (!rows[r][col].is_zero()) {
                    piv = r;
                    break;
                }
            if (piv < 0)
                throw std::runtime_error("lin_solve: nontrivial kernel");
            std::swap(rows[rank], rows[piv]);
            RatFunc lead = rows[rank][col];
            for (int c = col; c <= n; ++c) rows[rank][c] = rows[rank][c] / lead;
            for (int r = 0; r < m; ++r) {
                if (r == rank || rows[r][col].is_zero()) continue;
                RatFunc fac = rows[r][col];
                for (int c = col; c <= n; ++c)
                    rows[r][c] = rows[r][c] - fac * rows[rank][c];
            }
            ++rank;
        }
        for (int r = rank; r < m; ++r)
            if (!rows[r][n].is_zero())
                throw std::runtime_error("lin_solve: inconsistent system");
        sols[comp].resize(n, RatFunc::zero());
        // Full reduction with a pivot in every column: row j solves x_j.
        for (int j = 0; j < n; ++j) sols[comp][j] = rows[j][n];
    }
    std::vector<PiScalar> x(n);
    for (int j = 0; j < n; ++j) x[j] = PiScalar(sols[0][j], sols[1][j]);
    return x;
}

// ---------------------------------------------------------------------------
// compute_theta.
//
// For s = 3 write Theta_{3,mu} = sum c_{kl} b_k^+ (x) b_l^-.  Grading the
// relation Delta_3(E_i) Theta = Theta Delta_3-bar(E_i) by the first-slot
// weight gives, per mu and i (D = pi_i v_i - v_i^{-1}, d = Theta_{3,mu-i}):
//   sum_l c_{kl} [r_i(b_l)]_m   = pi^{p(i)(1+p(mu-i))} D sum_a d_{am}[b_a theta_i]_k
//   sum_l c_{kl} [_ir(b_l)]_m   = pi^{p(i)p(mu)}       D sum_a d_{am}[theta_i b_a]_k
// (the Cartan tags Jt_i Kt_i and Kt_{-i} separate the two families; the
// v^{i.(mu-i)} factors from normalizing Kt_{-i} to the right cancel).
//
// For s = 1 (Theta_{1,mu} = sum c_{kl} b_k^- (x) b_l^+, graded by the
// f-coordinate slot weight) the analogous families are
//   sum_k c_{kl} [r_i(b_k)]_m  = -v^{-i.(mu-i)} D sum_b d_{mb}[theta_i b_b]_l
//   sum_k c_{kl} [_ir(b_k)]_m  = -v^{-i.(mu-i)} D sum_b d_{mb}[b_b theta_i]_l
// (all pi factors cancel).  Theta_4 = (Jt_nu (x) 1) Theta_3 because the
// Jt decoration is central and sits in the slot where Delta_4 differs from
// Delta_3; Theta_2 = tau((omega^{-1} (x) omega^{-1}) Theta_1), which lands
// in (Jt_nu U^-_nu) (x) U^+_nu with coefficients pi_nu pi^{p(nu)} c_{lk}.
// ---------------------------------------------------------------------------
ThetaTruncation compute_theta(const HalfAlg& f, int s, int H) {
    if (s < 1 || s > 4)
        throw std::invalid_argument("compute_theta: s must be in 1..4");
    const RootDatum& rd = f.datum();
    const int rank = rd.rank();
    if (s == 4) {
        ThetaTruncation th = compute_theta(f, 3, H);
        th.s = 4;
        th.jslot = 1;
        return th;
    }
    if (s == 2) {
        ThetaTruncation th1 = compute_theta(f, 1, H);
        ThetaTruncation th;
        th.s = 2;
        th.H = H;
        th.jslot = 1;
        for (const auto& [nu, m] : th1.comps) {
            int d = static_cast<int>(m.size());
            PiScalar pref = rd.pi_nu(nu) * PiScalar::pi_pow(rd.p_nu(nu));
            Mat t = zero_mat(d, d);
            for (int k = 0; k < d; ++k)
                for (int l = 0; l < d; ++l) t[l][k] = pref * m[k][l];
            th.comps[nu] = std::move(t);
        }
        return th;
    }

    ThetaTruncation th;
    th.s = s;
    th.H = H;
    th.jslot = 0;
    for (const NuVec& nu : weights_up_to(rank, H)) {
        if (ht(nu) == 0) {
            th.comps[nu] = {{PiScalar::one()}};
            continue;
        }
        int dim = f.dim_at(nu);
        if (dim == 0) continue;
        std::vector<FElem> bnu;
        bnu.reserve(dim);
        for (int k = 0; k < dim; ++k) bnu.push_back(unit_f(nu, k));

        // Per unknown index u: concatenated equation coefficients; per free
        // index: concatenated right-hand sides.
        std::vector<std::vector<PiScalar>> acat(dim), bmat(dim);
        for (int i = 0; i < rank; ++i) {
            if (nu[i] == 0) continue;
            NuVec mu = nu;
            mu[i] -= 1;
            int dmu = f.dim_at(mu);
            if (dmu == 0) continue;
            auto itd = th.comps.find(mu);
            const Mat* dm = itd != th.comps.end() ? &itd->second : nullptr;

            std::vector<FElem> rimg, limg, mul_r, mul_l;
            for (int k = 0; k < dim; ++k) {
                rimg.push_back(f.diff_right(i, bnu[k]));
                limg.push_back(f.diff_left(i, bnu[k]));
            }
            for (int a = 0; a < dmu; ++a) {
                FElem ba = unit_f(mu, a);
                mul_r.push_back(f.multiply(ba, f.theta(i)));
                mul_l.push_back(f.multiply(f.theta(i), ba));
            }
            Mat R = image_matrix(rimg, mu, dmu);
            Mat L = image_matrix(limg, mu, dmu);
            Mat MR = image_matrix(mul_r, nu, dim);
            Mat ML = image_matrix(mul_l, nu, dim);

            int di = rd.d(i);
            int pi_i = rd.parity(i);
            PiScalar D = PiScalar::piv(di, di) - PiScalar::v(-di);
            long long dot_im = rd.dot_nn(unit_nu(rank, i), mu);

            Mat B1 = zero_mat(dim, dmu), B2 = zero_mat(dim, dmu);
            if (dm) {
                if (s == 3) {
                    PiScalar c1 =
                        PiScalar::pi_pow(pi_i * (1LL + rd.p_nu(mu))) * D;
                    PiScalar c2 = PiScalar::pi_pow(pi_i * rd.p_nu(nu)) * D;
                    for (int k = 0; k < dim; ++k)
                        for (int m = 0; m < dmu; ++m) {
                            PiScalar s1 = PiScalar::zero(), s2 = PiScalar::zero();
                            for (int a = 0; a < dmu; ++a) {
                                s1 += (*dm)[a][m] * MR[a][k];
                                s2 += (*dm)[a][m] * ML[a][k];
                            }
                            B1[k][m] = c1 * s1;
                            B2[k][m] = c2 * s2;
                        }
                } else {  // s == 1
                    PiScalar c =
                        -PiScalar::v(static_cast<int>(-dot_im)) * D;
                    for (int l = 0; l < dim; ++l)
                        for (int m = 0; m < dmu; ++m) {
                            PiScalar s1 = PiScalar::zero(), s2 = PiScalar::zero();
                            for (int b = 0; b < dmu; ++b) {
                                s1 += (*dm)[m][b] * ML[b][l];
                                s2 += (*dm)[m][b] * MR[b][l];
                            }
                            B1[l][m] = c * s1;
                            B2[l][m] = c * s2;
                        }
                }
            }
            for (int u = 0; u < dim; ++u) {
                acat[u].insert(acat[u].end(), R[u].begin(), R[u].end());
                acat[u].insert(acat[u].end(), L[u].begin(), L[u].end());
                bmat[u].insert(bmat[u].end(), B1[u].begin(), B1[u].end());
                bmat[u].insert(bmat[u].end(), B2[u].begin(), B2[u].end());
            }
        }
        if (acat[0].empty())
            throw std::runtime_error("compute_theta: empty system at a weight");
        int tcols = static_cast<int>(acat[0].size());
        Mat at = zero_mat(tcols, dim);
        for (int u = 0; u < dim; ++u)
            for (int t = 0; t < tcols; ++t) at[t][u] = acat[u][t];
        Mat c = zero_mat(dim, dim);
        for (int fr = 0; fr < dim; ++fr) {
            std::vector<PiScalar> x;
            try {
                x = lin_solve(at, bmat[fr]);
            } catch (const std::runtime_error& e) {
                std::string where = "compute_theta at nu = (";
                for (int t = 0; t < rank; ++t)
                    where += (t ? "," : "") + std::to_string(nu[t]);
                throw std::runtime_error(where + "): " + e.what());
            }
            if (s == 3)
                c[fr] = std::move(x);  // x runs over the second slot
            else
                for (int u = 0; u < dim; ++u) c[u][fr] = x[u];
        }
        th.comps[nu] = std::move(c);
    }
    return th;
}

UnitarityReport check_unitarity(const HalfAlg& f, const ThetaTruncation& th) {
    const RootDatum& rd = f.datum();
    const int rank = rd.rank();
    UnitarityReport rep;
    for (const NuVec& nu : weights_up_to(rank, th.H)) {
        int dn = f.dim_at(nu);
        if (dn == 0) continue;
        Mat acc = zero_mat(dn, dn);
        for (const auto& [mu, cm] : th.comps) {
            NuVec mu2(rank);
            bool ok = true;
            for (int i = 0; i < rank; ++i) {
                mu2[i] = nu[i] - mu[i];
                if (mu2[i] < 0) ok = false;
            }
            if (!ok) continue;
            auto it2 = th.comps.find(mu2);
            if (it2 == th.comps.end()) continue;
            const Mat& dmat = it2->second;
            int d1 = static_cast<int>(cm.size());
            int d2 = static_cast<int>(dmat.size());
            // Product expansions b_k(mu) . b_a(mu2) in the basis of f_nu;
            // both slots multiply through the same embeddings, so one table
            // serves both.
            std::vector<std::vector<std::vector<PiScalar>>> prod(
                d1, std::vector<std::vector<PiScalar>>(d2));
            for (int k = 0; k < d1; ++k)
                for (int a = 0; a < d2; ++a) {
                    FElem p = f.multiply(unit_f(mu, k), unit_f(mu2, a));
                    auto it = p.comps.find(nu);
                    prod[k][a].assign(dn, PiScalar::zero());
                    if (it != p.comps.end()) {
                        int len = std::min(
                            dn, static_cast<int>(it->second.size()));
                        for (int m = 0; m < len; ++m)
                            prod[k][a][m] = it->second[m];
                    }
                }
            PiScalar sign = PiScalar::pi_pow(
                static_cast<long long>(rd.p_nu(mu)) * rd.p_nu(mu2));
            for (int k = 0; k < d1; ++k)
                for (int l = 0; l < d1; ++l) {
                    if (cm[k][l].is_zero()) continue;
                    for (int a = 0; a < d2; ++a)
                        for (int b = 0; b < d2; ++b) {
                            if (dmat[a][b].is_zero()) continue;
                            PiScalar coef =
                                cm[k][l] * dmat[a][b].bar() * sign;
                            for (int m = 0; m < dn; ++m) {
                                if (prod[k][a][m].is_zero()) continue;
                                for (int m2 = 0; m2 < dn; ++m2) {
                                    if (prod[l][b][m2].is_zero()) continue;
                                    acc[m][m2] +=
                                        coef * prod[k][a][m] * prod[l][b][m2];
                                }
                            }
                        }
                }
        }
        bool good = true;
        for (int m = 0; m < dn; ++m)
            for (int m2 = 0; m2 < dn; ++m2) {
                PiScalar want = (ht(nu) == 0 && m == 0 && m2 == 0)
                                    ? PiScalar::one()
                                    : PiScalar::zero();
                if (acc[m][m2] != want) good = false;
            }
        if (!good) {
            rep.pass = false;
            rep.failures.push_back(nu);
        }
    }
    return rep;
}

TVec tensor_op(const TensorModule& n, const UElem& u1, const UElem& u2,
               const TVec& w) {
    const RootDatum& rd = n.first().half().datum();
    TVec res;
    for (const auto& [key, mat] : w.comps) {
        const NuVec& nu1 = key.first;
        const NuVec& nu2 = key.second;
        int d1 = static_cast<int>(mat.size());
        int d2 = d1 ? static_cast<int>(mat[0].size()) : 0;
        std::vector<MVec> y1(d1);
        for (int k = 0; k < d1; ++k) {
            MVec e;
            e.add_in(nu1, k, PiScalar::one());
            y1[k] = act(n.first(), n.first_twisted(), u1, e);
        }
        for (const UTerm& t2 : u2.terms) {
            UElem u2w;
            u2w.terms.push_back({PiScalar::one(), t2.word});
            int p2 = uword_parity(rd, t2.word);
            PiScalar base = t2.c * PiScalar::pi_pow(
                                       static_cast<long long>(p2) *
                                       rd.p_nu(nu1));
            std::vector<MVec> y2(d2);
            for (int l = 0; l < d2; ++l) {
                MVec e;
                e.add_in(nu2, l, PiScalar::one());
                y2[l] = act(n.second(), n.second_twisted(), u2w, e);
            }
            for (int k = 0; k < d1; ++k)
                for (int l = 0; l < d2; ++l) {
                    if (mat[k][l].is_zero()) continue;
                    PiScalar c = mat[k][l] * base;
                    for (const auto& [m1, v1] : y1[k].comps)
                        for (const auto& [m2, v2] : y2[l].comps) {
                            int t1 = n.first().dim(m1);
                            int t2d = n.second().dim(m2);
                            int a1 = std::min(
                                t1, static_cast<int>(v1.size()));
                            int b1 = std::min(
                                t2d, static_cast<int>(v2.size()));
                            for (int a = 0; a < a1; ++a) {
                                if (v1[a].is_zero()) continue;
                                for (int b = 0; b < b1; ++b) {
                                    if (v2[b].is_zero()) continue;
                                    res.add_in(m1, m2, a, b,
                                               c * v1[a] * v2[b], t1, t2d);
                                }
                            }
                        }
                }
        }
    }
    res.prune();
    return res;
}

TVec apply_theta(const TensorModule& n, const ThetaTruncation& th,
                 const TVec& w) {
    const HalfAlg& f = n.first().half();
    const RootDatum& rd = f.datum();
    char k1 = th.s >= 3 ? 'E' : 'F';
    char k2 = th.s >= 3 ? 'F' : 'E';
    TVec res;
    for (const auto& [nu, cm] : th.comps) {
        int d = static_cast<int>(cm.size());
        for (int k = 0; k < d; ++k)
            for (int l = 0; l < d; ++l) {
                if (cm[k][l].is_zero()) continue;
                UElem u1 = word_to_u(f, nu, k, k1);
                UElem u2 = word_to_u(f, nu, l, k2);
                if (th.jslot == 1) u1 = UElem::J(rd.tilde(nu)) * u1;
                if (th.jslot == 2) u2 = UElem::J(rd.tilde(nu)) * u2;
                res = res + tensor_op(n, u1, u2, w) * cm[k][l];
            }
    }
    res.prune();
    return res;
}

TVec bar_tvec(const TVec& w) {
    TVec out = w;
    for (auto& [key, mat] : out.comps)
        for (auto& row : mat)
            for (auto& c : row) c = c.bar();
    return out;
}

}  // namespace coverquant
