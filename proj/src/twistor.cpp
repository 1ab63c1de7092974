#include "coverquant/twistor.hpp"

#include <optional>
#include <stdexcept>

namespace coverquant {

namespace {

int mod4(long long x) { return static_cast<int>(((x % 4) + 4) % 4); }

int mod4_int(const Int& x) {
    Int r = x % 4;
    if (r < 0) r += 4;
    return static_cast<int>(r);
}

// Solve sum_j m_j embed_x[j] = target over the integers (unique solution or
// none; the root lattice embeds injectively for X-regular data).
std::optional<std::vector<Int>> lattice_solve(const RootDatum& rd,
                                              const Weight& target) {
    int rows = rd.x_rank, cols = rd.rank();
    std::vector<std::vector<Rat>> a(rows, std::vector<Rat>(cols + 1));
    for (int r = 0; r < rows; ++r) {
        for (int j = 0; j < cols; ++j) a[r][j] = Rat(rd.embed_x[j][r]);
        a[r][cols] = Rat(target[r]);
    }
    std::vector<int> pivot_row(cols, -1);
    int prow = 0;
    for (int c = 0; c < cols && prow < rows; ++c) {
        int sel = -1;
        for (int r = prow; r < rows; ++r)
            if (a[r][c] != 0) { sel = r; break; }
        if (sel < 0) continue;
        std::swap(a[sel], a[prow]);
        Rat inv = a[prow][c];
        for (int k = c; k <= cols; ++k) a[prow][k] /= inv;
        for (int r = 0; r < rows; ++r) {
            if (r == prow || a[r][c] == 0) continue;
            Rat f = a[r][c];
            for (int k = c; k <= cols; ++k) a[r][k] -= f * a[prow][k];
        }
        pivot_row[c] = prow;
        ++prow;
    }
    for (int c = 0; c < cols; ++c)
        if (pivot_row[c] < 0)
            throw std::runtime_error(
                "lattice_solve: root lattice not of full rank in X "
                "(non-X-regular datum)");
    for (int r = prow; r < rows; ++r)
        if (a[r][cols] != 0) return std::nullopt;
    std::vector<Int> m(cols);
    for (int c = 0; c < cols; ++c) {
        Rat val = a[pivot_row[c]][cols];
        if (boost::multiprecision::denominator(val) != 1) return std::nullopt;
        m[c] = boost::multiprecision::numerator(val);
    }
    return m;
}

// |det| of the root-lattice embedding (square case); the index of Z[I'].
Int lattice_index(const RootDatum& rd) {
    int ncols = rd.rank();
    if (rd.x_rank != ncols)
        throw std::runtime_error(
            "build_enhancer: X and the root lattice must have equal rank");
    std::vector<std::vector<Rat>> a(ncols, std::vector<Rat>(ncols));
    for (int r = 0; r < ncols; ++r)
        for (int j = 0; j < ncols; ++j) a[r][j] = Rat(rd.embed_x[j][r]);
    Rat det = 1;
    for (int c = 0; c < ncols; ++c) {
        int sel = -1;
        for (int r = c; r < ncols; ++r)
            if (a[r][c] != 0) { sel = r; break; }
        if (sel < 0) return 0;
        if (sel != c) {
            std::swap(a[sel], a[c]);
            det = -det;
        }
        det *= a[c][c];
        for (int r = c + 1; r < ncols; ++r) {
            Rat f = a[r][c] / a[c][c];
            for (int k = c; k < ncols; ++k) a[r][k] -= f * a[c][k];
        }
    }
    Int d = boost::multiprecision::numerator(det) /
            boost::multiprecision::denominator(det);
    return d < 0 ? -d : d;
}

// Enumerate lattice points of Z^n by max-norm shells; within a shell the
// coordinates run through 0, 1, -1, 2, -2, ... so nonnegative candidates are
// preferred.  fn is called until it returns false.
void enumerate_points(int n, int max_shell,
                      const std::function<bool(const Weight&)>& fn) {
    for (int shell = 0; shell <= max_shell; ++shell) {
        std::vector<int> order;
        order.push_back(0);
        for (int k = 1; k <= shell; ++k) {
            order.push_back(k);
            order.push_back(-k);
        }
        std::vector<size_t> idx(n, 0);
        while (true) {
            Weight p(n);
            int mx = 0;
            for (int c = 0; c < n; ++c) {
                p[c] = order[idx[c]];
                mx = std::max(mx, std::abs(p[c]));
            }
            if (mx == shell && !fn(p)) return;
            int k = n - 1;
            while (k >= 0 && idx[k] + 1 == order.size()) idx[k--] = 0;
            if (k < 0) break;
            ++idx[k];
        }
    }
}

// The twist of a scalar known to be a t-power multiple of itself:
// twist_scalar(s) = t^k s.  Used for the divided-power denominators.
int t_power_of(const PiScalar& s) {
    GaussPi tw = twist_scalar(s);
    for (int k = 0; k < 4; ++k)
        if (tw == GaussPi::t_pow(k) * GaussPi(s)) return k;
    throw std::runtime_error("t_power_of: scalar is not a twist eigenvector");
}

NuVec unit_nu(int rank, int i) {
    NuVec nu(rank, 0);
    nu[i] = 1;
    return nu;
}

Coweight add_cw(const Coweight& a, const Coweight& b) {
    Coweight r(a);
    for (size_t k = 0; k < r.size(); ++k) r[k] += b[k];
    return r;
}

}  // namespace

// ---------------------------------------------------------------------------
// Enhancer.
// ---------------------------------------------------------------------------

int Enhancer::phi_i(int i, const Weight& lam) const {
    for (size_t c = 0; c < coset_reps.size(); ++c) {
        auto m = lattice_solve(rd, sub_w(lam, coset_reps[c]));
        if (!m) continue;
        long long acc = phi_coset[i][c];
        for (int j = 0; j < rd.rank(); ++j)
            acc += static_cast<long long>(mod4_int((*m)[j])) * phi_root[i][j];
        return mod4(acc);
    }
    throw std::runtime_error("Enhancer::phi_i: weight not covered by cosets");
}

int Enhancer::phi(const NuVec& nu, const Weight& lam) const {
    long long acc = 0;
    for (int i = 0; i < rd.rank(); ++i)
        if (nu[i] != 0) acc += static_cast<long long>(nu[i]) * phi_i(i, lam);
    return mod4(acc);
}

Enhancer build_enhancer(const RootDatum& rd) {
    Enhancer e;
    e.rd = rd;
    int r = rd.rank();

    // Coset representatives of X / Z[I'].
    Int index = lattice_index(rd);
    if (index == 0)
        throw std::runtime_error("build_enhancer: degenerate root lattice");
    e.coset_reps.push_back(Weight(rd.x_rank, 0));
    enumerate_points(rd.x_rank, 8, [&](const Weight& p) {
        bool fresh = true;
        for (const Weight& s : e.coset_reps)
            if (lattice_solve(rd, sub_w(p, s))) {
                fresh = false;
                break;
            }
        if (fresh) e.coset_reps.push_back(p);
        return Int(e.coset_reps.size()) < index;
    });
    if (Int(e.coset_reps.size()) != index)
        throw std::runtime_error("build_enhancer: coset enumeration failed");
    int nc = static_cast<int>(e.coset_reps.size());

    // Variables in lexicographic order: phi_root row-major, then phi_coset
    // row-major.  Backtracking with ascending values returns the least table.
    int nroot = r * r, total = nroot + r * nc;
    std::vector<int> val(total, 0);
    auto root_ok = [&](int idx) {
        int i = idx / r, j = idx % r;
        int x = val[idx];
        if (i == j) return x == mod4(rd.d(i));
        if (x % 2 != 0) return false;
        int other = j * r + i;
        if (other < idx) {
            // phi(i,j') - phi(j,i') = i.j + 2 p(i) p(j) (mod 4).
            long long rhs = rd.cd.dot[i][j] + 2LL * rd.parity(i) * rd.parity(j);
            if (mod4(x - val[other]) != mod4(rhs)) return false;
        }
        return true;
    };
    auto coset_ok = [&](int idx) {
        int c = (idx - nroot) % nc;
        return c != 0 || val[idx] == 0;
    };
    std::function<bool(int)> search = [&](int idx) {
        if (idx == total) return true;
        for (int x = 0; x < 4; ++x) {
            val[idx] = x;
            bool ok = idx < nroot ? root_ok(idx) : coset_ok(idx);
            if (ok && search(idx + 1)) return true;
        }
        return false;
    };
    if (!search(0))
        throw std::runtime_error("build_enhancer: no enhancer exists");

    e.phi_root.assign(r, std::vector<int>(r));
    for (int i = 0; i < r; ++i)
        for (int j = 0; j < r; ++j) e.phi_root[i][j] = val[i * r + j];
    e.phi_coset.assign(r, std::vector<int>(nc));
    for (int i = 0; i < r; ++i)
        for (int c = 0; c < nc; ++c) e.phi_coset[i][c] = val[nroot + i * nc + c];
    return e;
}

// ---------------------------------------------------------------------------
// Twist on f[t].
// ---------------------------------------------------------------------------

int word_twist_exp(const Enhancer& e, const Word& w) {
    long long acc = 0;
    for (size_t s = 0; s + 1 < w.size(); ++s)
        for (size_t t = s + 1; t < w.size(); ++t)
            acc += e.phi_root[w[s]][w[t]];
    return mod4(acc);
}

GFElem twist_f(const HalfAlg& f, const Enhancer& e, const FElem& x) {
    GFElem out;
    for (const auto& [nu, coords] : x.comps) {
        const GradedComponent& gc = f.component(nu);
        for (size_t k = 0; k < coords.size(); ++k) {
            if (coords[k].is_zero()) continue;
            GaussPi g = twist_scalar(coords[k]) *
                        GaussPi::t_pow(word_twist_exp(e, gc.basis_word((int)k)));
            out.re.add_in(nu, (int)k, g.re());
            out.im.add_in(nu, (int)k, g.im());
        }
    }
    out.re.prune();
    out.im.prune();
    return out;
}

int ell_of(const HalfAlg& f, const Enhancer& e, const FElem& b) {
    GFElem tw = twist_f(f, e, b);
    for (int l = 0; l < 4; ++l)
        if (tw == gauss_embed(b, l)) return l;
    throw std::runtime_error("ell_of: image is not a t-power multiple");
}

GFElem gdiff_left(const HalfAlg& f, int i, const GFElem& x) {
    return GFElem(f.diff_left(i, x.re), f.diff_left(i, x.im));
}

FElem rho_f(const HalfAlg& f, const FElem& x) {
    FElem out;
    for (const auto& [nu, coords] : x.comps) {
        const GradedComponent& gc = f.component(nu);
        for (size_t k = 0; k < coords.size(); ++k) {
            if (coords[k].is_zero()) continue;
            Word w = gc.basis_word((int)k);
            std::reverse(w.begin(), w.end());
            out = out + f.from_word(w) * coords[k];
        }
    }
    out.prune();
    return out;
}

// ---------------------------------------------------------------------------
// Twist on Udot[t].
// ---------------------------------------------------------------------------

GUDotElem twist_udot(const HalfAlg& f, const Enhancer& e, const UDotElem& a) {
    const RootDatum& rd = f.datum();
    GUDotElem out;
    for (const auto& [key, mat] : a.comps) {
        NuVec nm = key.nm, np = key.np;
        nm.resize(rd.rank(), 0);
        np.resize(rd.rank(), 0);
        const GradedComponent& gm = f.component(nm);
        const GradedComponent& gp = f.component(np);
        int dm = gm.dim(), dp = gp.dim();
        Weight zr = sub_w(key.zeta, rd.nu_to_x(np));
        long long plus_base = bullet_form(rd, np) + rd.pair(rd.tilde(np), zr) +
                              e.phi(np, zr);
        for (int i = 0; i < rd.rank(); ++i)
            plus_base += 2LL * rd.d(i) * np[i];
        long long base = plus_base - e.phi(nm, key.zeta);
        for (int k = 0; k < dm; ++k) {
            for (int l = 0; l < dp; ++l) {
                const PiScalar& c = mat[k][l];
                if (c.is_zero()) continue;
                long long expn = base + word_twist_exp(e, gm.basis_word(k)) +
                                 word_twist_exp(e, gp.basis_word(l));
                GaussPi g = twist_scalar(c) * GaussPi::t_pow(expn);
                out.re.add_in(key, k, l, g.re(), dm, dp);
                out.im.add_in(key, k, l, g.im(), dm, dp);
            }
        }
    }
    out.re.prune();
    out.im.prune();
    return out;
}

GUDotElem twist_act(const HalfAlg& f, const Enhancer& e, const UElem& u,
                    const Weight& zeta) {
    const RootDatum& rd = f.datum();
    GUDotElem out;
    for (const UTerm& term : u.terms) {
        long long expn = 0;
        Coweight mu_t(rd.y_rank, 0);          // pending T tag argument in Y
        std::vector<long long> mu_u(rd.rank(), 0);  // pending Upsilon tag
        std::vector<ULetter> plain;
        auto tag_cost = [&](int i) {
            long long c = rd.pair(mu_t, rd.embed_x[i]);
            for (int j = 0; j < rd.rank(); ++j)
                c += mu_u[j] * e.phi_root[j][i];
            return c;
        };
        for (const ULetter& l : term.word) {
            switch (l.kind) {
                case 'E':
                    for (int rep = 0; rep < l.n; ++rep) {
                        expn += tag_cost(l.i) + 2 * rd.d(l.i);
                        mu_t = add_cw(mu_t, rd.tilde(unit_nu(rd.rank(), l.i)));
                        mu_u[l.i] += 1;
                    }
                    expn -= t_power_of(qfact(l.n, rd.d(l.i)));
                    plain.push_back(l);
                    break;
                case 'F':
                    for (int rep = 0; rep < l.n; ++rep) {
                        expn -= tag_cost(l.i);
                        mu_u[l.i] -= 1;
                    }
                    expn -= t_power_of(qfact(l.n, rd.d(l.i)));
                    plain.push_back(l);
                    break;
                case 'K':
                    for (int k = 0; k < rd.y_rank; ++k) mu_t[k] -= l.mu[k];
                    plain.push_back(l);
                    break;
                case 'J':
                    for (int k = 0; k < rd.y_rank; ++k) mu_t[k] += 2 * l.mu[k];
                    plain.push_back(l);
                    break;
                default:
                    throw std::runtime_error("twist_act: unknown letter");
            }
        }
        expn += rd.pair(mu_t, zeta);
        for (int j = 0; j < rd.rank(); ++j)
            expn += mu_u[j] * e.phi_i(j, zeta);
        UElem w;
        w.terms.push_back({PiScalar::one(), plain});
        UDotElem nf = normalize(f, w, zeta);
        out = out + Gauss<UDotElem>(nf) *
                        (twist_scalar(term.c) * GaussPi::t_pow(expn));
    }
    out.re.prune();
    out.im.prune();
    return out;
}

// ---------------------------------------------------------------------------
// kappa and the module twists.
// ---------------------------------------------------------------------------

int kappa(const Enhancer& e, const Weight& lam, const Weight& lamp,
          const NuVec& nu, const NuVec& mu) {
    const RootDatum& rd = e.rd;
    Weight zeta = sub_w(lam, rd.nu_to_x(nu));
    long long k = e.phi(nu, lamp);
    int pz = rd.p_nu(nu);
    NuVec muhat(rd.rank(), 0);
    for (int i = 0; i < rd.rank(); ++i) {
        for (int c = 0; c < mu[i]; ++c) {
            Weight zp = sub_w(rd.nu_to_x(muhat), lamp);
            k += e.phi_i(i, zeta) + 2 * rd.d(i) +
                 rd.pair(rd.tilde(unit_nu(rd.rank(), i)), add_w(zeta, zp)) +
                 2LL * pz * rd.parity(i);
            ++muhat[i];
        }
    }
    return mod4(k);
}

GMVec twist_module(const WeightModule& m, const Enhancer& e, const MVec& x) {
    const HalfAlg& f = m.half();
    GMVec out;
    for (const auto& [nu, coords] : x.comps) {
        const GradedComponent& gc = f.component(nu);
        const std::vector<int>& qb = m.basis(nu);
        int phl = e.phi(nu, m.lambda());
        for (size_t k = 0; k < coords.size(); ++k) {
            if (coords[k].is_zero()) continue;
            int expn = mod4(word_twist_exp(e, gc.basis_word(qb[k])) - phl);
            GaussPi g = twist_scalar(coords[k]) * GaussPi::t_pow(expn);
            out.re.add_in(nu, (int)k, g.re());
            out.im.add_in(nu, (int)k, g.im());
        }
    }
    out.re.prune();
    out.im.prune();
    return out;
}

GMVec xgen_act(const WeightModule& m, bool twisted, const Enhancer& e,
               const ULetter& l, const GMVec& x) {
    if (l.n != 1 || (l.kind != 'E' && l.kind != 'F'))
        throw std::runtime_error("xgen_act: single E_i/F_i letters only");
    const RootDatum& rd = m.half().datum();
    Coweight ti = rd.tilde(unit_nu(rd.rank(), l.i));
    GMVec out;
    auto handle = [&](const MVec* part, int which) {
        for (const auto& [nu, coords] : part->comps) {
            // All tags resolve against the V(lambda) weight (the omega twist
            // is the same linear map, conjugated through omega).
            Weight wt = sub_w(m.lambda(), rd.nu_to_x(nu));
            long long expn;
            if (!twisted) {
                // X(E_i) = t^{2d} E T~ Ups;  X(F_i) = F Ups_{-i}.
                expn = l.kind == 'E' ? 2 * rd.d(l.i) + rd.pair(ti, wt) +
                                           e.phi_i(l.i, wt)
                                     : -e.phi_i(l.i, wt);
            } else {
                // X(omega(E_i)) = X(F_i);  X(omega(F_i)) resolved likewise.
                expn = l.kind == 'E'
                           ? -e.phi_i(l.i, wt)
                           : 3 * rd.d(l.i) * rd.pair_i(l.i, wt) +
                                 e.phi_i(l.i, wt);
            }
            MVec comp;
            comp.comps[nu] = coords;
            MVec img = act_letter(m, twisted, l, comp);
            GMVec g = which == 0 ? GMVec(img) : GMVec(MVec{}, img);
            out = out + g * GaussPi::t_pow(expn);
        }
    };
    handle(&x.re, 0);
    handle(&x.im, 1);
    out.re.prune();
    out.im.prune();
    return out;
}

GTVec twist_N(const TensorModule& n, const Enhancer& e, const TVec& w) {
    const HalfAlg& f = n.first().half();
    const Weight& lam = n.first().lambda();
    const Weight& lamp = n.second().lambda();
    GTVec out;
    for (const auto& [bd, mat] : w.comps) {
        const auto& [n1, n2] = bd;
        const GradedComponent& g1 = f.component(n1);
        const GradedComponent& g2 = f.component(n2);
        const std::vector<int>& qb1 = n.first().basis(n1);
        const std::vector<int>& qb2 = n.second().basis(n2);
        int d1 = n.first().dim(n1), d2 = n.second().dim(n2);
        long long base = kappa(e, lam, lamp, n1, n2) - e.phi(n1, lam) -
                         e.phi(n2, lamp);
        for (int k = 0; k < d1; ++k) {
            for (int l = 0; l < d2; ++l) {
                const PiScalar& c = mat[k][l];
                if (c.is_zero()) continue;
                long long expn = base +
                                 word_twist_exp(e, g1.basis_word(qb1[k])) +
                                 word_twist_exp(e, g2.basis_word(qb2[l]));
                GaussPi g = twist_scalar(c) * GaussPi::t_pow(expn);
                out.re.add_in(n1, n2, k, l, g.re(), d1, d2);
                out.im.add_in(n1, n2, k, l, g.im(), d1, d2);
            }
        }
    }
    out.re.prune();
    out.im.prune();
    return out;
}

GTVec xgen_act_N(const TensorModule& n, const Enhancer& e, const ULetter& l,
                 const GTVec& w) {
    if (l.n != 1 || (l.kind != 'E' && l.kind != 'F'))
        throw std::runtime_error("xgen_act_N: single E_i/F_i letters only");
    const RootDatum& rd = n.first().half().datum();
    const Weight& lam = n.first().lambda();
    const Weight& lamp = n.second().lambda();
    Coweight ti = rd.tilde(unit_nu(rd.rank(), l.i));
    UElem gen = UElem::gen(l);
    GTVec out;
    auto handle = [&](const TVec* part, int which) {
        for (const auto& [bd, mat] : part->comps) {
            const auto& [n1, n2] = bd;
            Weight zeta = sub_w(lam, rd.nu_to_x(n1));
            // Second-factor tags resolve through the V(lambda') presentation
            // of the omega twist, i.e. against lambda' - n2' with conjugated
            // tags (phi enters with the opposite sign).
            Weight zbar = sub_w(lamp, rd.nu_to_x(n2));
            long long expn;
            if (l.kind == 'E') {
                expn = 2 * rd.d(l.i) + rd.pair(ti, sub_w(zeta, zbar)) +
                       e.phi_i(l.i, zeta) - e.phi_i(l.i, zbar);
            } else {
                expn = -e.phi_i(l.i, zeta) + e.phi_i(l.i, zbar);
            }
            TVec comp;
            comp.comps[bd] = mat;
            TVec img = n.act(gen, comp);
            GTVec g = which == 0 ? GTVec(img) : GTVec(TVec{}, img);
            out = out + g * GaussPi::t_pow(expn);
        }
    };
    handle(&w.re, 0);
    handle(&w.im, 1);
    out.re.prune();
    out.im.prune();
    return out;
}

// ---------------------------------------------------------------------------
// Eigenchecks.
// ---------------------------------------------------------------------------

int cb_eigencheck_udot(const HalfAlg& f, const Enhancer& e,
                       const UDotElem& a) {
    GUDotElem tw = twist_udot(f, e, a);
    for (int l = 0; l < 4; ++l)
        if (tw == gauss_embed(a, l)) return l;
    throw std::runtime_error(
        "cb_eigencheck_udot: image is not a t-power multiple");
}

int cb_eigencheck_N(const TensorModule& n, const Enhancer& e, const TVec& w) {
    GTVec tw = twist_N(n, e, w);
    for (int l = 0; l < 4; ++l)
        if (tw == gauss_embed(w, l)) return l;
    throw std::runtime_error(
        "cb_eigencheck_N: image is not a t-power multiple");
}

TwistEigenTable cb_eigencheck(const CBProvider& bp, const Enhancer& e,
                              const Weight& zeta, int bound) {
    UDotCanonicalBasis ub = cb_of_udot(bp, zeta, bound);
    TwistEigenTable table;
    table.zeta = zeta;
    for (const UDotCBElement& el : ub.elements) {
        table.index.push_back(el.index);
        table.exponent.push_back(cb_eigencheck_udot(bp.half(), e, el.value));
    }
    return table;
}

}  // namespace coverquant
