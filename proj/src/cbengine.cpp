#include "coverquant/cbengine.hpp"

#include <fstream>
#include <functional>

#include "nlohmann/json.hpp"

namespace coverquant {

namespace {

// All nu in N[I] with ht <= bound, lexicographic order.
std::vector<NuVec> nu_list(int rank, int bound) {
    std::vector<NuVec> out;
    NuVec cur(static_cast<size_t>(rank), 0);
    std::function<void(int, int)> rec = [&](int pos, int left) {
        if (pos == rank) {
            out.push_back(cur);
            return;
        }
        for (int a = 0; a <= left; ++a) {
            cur[static_cast<size_t>(pos)] = a;
            rec(pos + 1, left - a);
        }
        cur[static_cast<size_t>(pos)] = 0;
    };
    rec(0, bound);
    return out;
}

}  // namespace

// ---------------------------------------------------------------------------
// Providers.
// ---------------------------------------------------------------------------
RankOneCBProvider::RankOneCBProvider(std::shared_ptr<const HalfAlg> f)
    : f_(std::move(f)) {
    if (f_->datum().rank() != 1)
        throw std::invalid_argument("RankOneCBProvider: datum has rank != 1");
}

int RankOneCBProvider::count(const NuVec& nu) const {
    (void)nu;
    return 1;
}

FElem RankOneCBProvider::element(const NuVec& nu, int k) const {
    if (k != 0) throw std::out_of_range("RankOneCBProvider: bad index");
    return f_->divided_power(0, nu.at(0));
}

FileCBProvider::FileCBProvider(std::shared_ptr<const HalfAlg> f,
                               const std::string& path)
    : f_(std::move(f)) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("FileCBProvider: cannot open " + path);
    nlohmann::json j;
    in >> j;
    if (j.value("schema", 0) != 1)
        throw std::runtime_error("FileCBProvider: unsupported schema");
    for (const auto& e : j.at("elements")) {
        NuVec nu = e.at("nu").get<NuVec>();
        if (static_cast<int>(nu.size()) != f_->datum().rank())
            throw std::runtime_error("FileCBProvider: nu rank mismatch");
        FElem x;
        for (const auto& term : e.at("terms")) {
            Laurent lp, lm;
            for (const auto& mono : term.at("coeff")) {
                int exp = mono.at(0).get<int>();
                lp.add_term(exp, Int(mono.at(1).get<long long>()));
                lm.add_term(exp, Int(mono.at(2).get<long long>()));
            }
            PiScalar c{RatFunc(lp), RatFunc(lm)};
            FElem m = f_->one();
            for (const auto& dp : term.at("monomial"))
                m = f_->multiply(
                    m, f_->divided_power(dp.at(0).get<int>(),
                                         dp.at(1).get<int>()));
            x = x + m * c;
        }
        x.prune();
        if (x.is_zero())
            throw std::runtime_error("FileCBProvider: zero element");
        if (!(x.weight() == nu))
            throw std::runtime_error("FileCBProvider: weight mismatch");
        if (!(f_->bar_f(x) == x))
            throw std::runtime_error("FileCBProvider: element not bar-fixed");
        elems_[nu].push_back(std::move(x));
    }
}

int FileCBProvider::count(const NuVec& nu) const {
    auto it = elems_.find(nu);
    return it == elems_.end() ? 0 : static_cast<int>(it->second.size());
}

FElem FileCBProvider::element(const NuVec& nu, int k) const {
    return elems_.at(nu).at(static_cast<size_t>(k));
}

bool in_b_lambda(const WeightModule& m, const FElem& b) {
    return !m.project(b).is_zero();
}

// ---------------------------------------------------------------------------
// Partial order.
// ---------------------------------------------------------------------------
bool partial_order_leq(const PiPair& p, const PiPair& q) {
    if (ht(p.b1.nu) - ht(p.b2.nu) != ht(q.b1.nu) - ht(q.b2.nu)) return false;
    if (p == q) return true;
    return ht(p.b1.nu) < ht(q.b1.nu) && ht(p.b2.nu) < ht(q.b2.nu);
}

// ---------------------------------------------------------------------------
// Psi and the semi-linear solver.
// ---------------------------------------------------------------------------
TVec psi(const TensorModule& n, const ThetaTruncation& th, const TVec& w) {
    return apply_theta(n, th, bar_tvec(w));
}

namespace {

// The positive-exponent part of a Laurent polynomial.
Laurent positive_part(const Laurent& x) {
    Laurent r;
    for (const auto& [e, c] : x.coeffs())
        if (e > 0) r.add_term(e, c);
    return r;
}

// Split q = q' - bar q' with q' in vZ^pi[v]; throws if q + bar q != 0.
PiScalar split_skew(const PiScalar& q) {
    if (!q.is_laurent())
        throw SemilinearError("semilinear_solve: r-matrix entry not Laurent");
    if (!(q + q.bar()).is_zero())
        throw SemilinearError(
            "semilinear_solve: unitarity hypothesis violated (q + bar q != 0)");
    PiScalar qp(RatFunc(positive_part(q.plus().num())),
                RatFunc(positive_part(q.minus().num())));
    if (!(qp - qp.bar() == q))
        throw SemilinearError("semilinear_solve: splitting failed");
    return qp;
}

}  // namespace

std::vector<std::vector<PiScalar>> semilinear_solve(
    const std::vector<std::vector<char>>& leq,
    const std::vector<std::vector<PiScalar>>& r) {
    return semilinear_solve_generic(
        leq, r, PiScalar::one(), [](const PiScalar& x) { return x.bar(); },
        split_skew);
}

// ---------------------------------------------------------------------------
// Canonical basis of N(lambda, lambda').
// ---------------------------------------------------------------------------
TVec NCanonicalBasis::cb_vec(size_t a) const {
    TVec w;
    for (size_t b = 0; b < standard.size(); ++b)
        if (!p[a][b].is_zero()) w = w + standard_vecs[b] * p[a][b];
    return w;
}

std::vector<PiScalar> std_coords(const NCanonicalBasis& ncb, const TVec& w) {
    std::vector<PiScalar> out(ncb.standard.size());
    for (const auto& [bd, mat] : w.comps) {
        bool any = false;
        for (const auto& row : mat)
            for (const auto& c : row)
                if (!c.is_zero()) any = true;
        if (!any) continue;
        // Candidate standard vectors supported at this bi-depth.
        std::vector<size_t> cand;
        for (size_t b = 0; b < ncb.standard.size(); ++b)
            if (ncb.standard[b].b1.nu == bd.first &&
                ncb.standard[b].b2.nu == bd.second)
                cand.push_back(b);
        size_t d1 = mat.size(), d2 = mat[0].size();
        std::vector<std::vector<PiScalar>> rows(d1 * d2,
                                                std::vector<PiScalar>(cand.size()));
        std::vector<PiScalar> rhs(d1 * d2);
        for (size_t k = 0; k < d1; ++k)
            for (size_t l = 0; l < d2; ++l) {
                rhs[k * d2 + l] = mat[k][l];
                for (size_t cc = 0; cc < cand.size(); ++cc) {
                    const auto& sv = ncb.standard_vecs[cand[cc]];
                    auto it = sv.comps.find(bd);
                    if (it != sv.comps.end())
                        rows[k * d2 + l][cc] = it->second[k][l];
                }
            }
        if (cand.empty())
            throw std::runtime_error("std_coords: vector outside the span");
        std::vector<PiScalar> sol = lin_solve(rows, rhs);
        for (size_t cc = 0; cc < cand.size(); ++cc) out[cand[cc]] += sol[cc];
    }
    return out;
}

NCanonicalBasis cb_of_N(const CBProvider& bp, const Weight& lambda,
                        const Weight& lambdap, int bound, int s) {
    auto f = bp.half_ptr();
    const RootDatum& rd = f->datum();
    NCanonicalBasis ncb;
    ncb.lambda = lambda;
    ncb.lambdap = lambdap;
    ncb.s = s;
    auto m1 = std::make_shared<WeightModule>(f, lambda, true, bound + 1);
    auto m2 = std::make_shared<WeightModule>(f, lambdap, true, bound + 1);
    ncb.module = std::make_shared<TensorModule>(m1, false, m2, true, s);

    // Standard index set: B(lambda) x B(lambda') up to the height bound.
    std::vector<CBIndex> b1s, b2s;
    for (const NuVec& nu : nu_list(rd.rank(), bound))
        for (int k = 0; k < bp.count(nu); ++k) {
            if (in_b_lambda(*m1, bp.element(nu, k))) b1s.push_back({nu, k});
            if (in_b_lambda(*m2, bp.element(nu, k))) b2s.push_back({nu, k});
        }
    for (const CBIndex& a : b1s)
        for (const CBIndex& b : b2s) {
            ncb.standard.push_back({a, b});
            ncb.standard_vecs.push_back(ncb.module->pure(
                m1->project(bp.element(a.nu, a.k)),
                m2->project(bp.element(b.nu, b.k))));
        }
    size_t n = ncb.standard.size();
    ncb.leq.assign(n, std::vector<char>(n, 0));
    for (size_t a = 0; a < n; ++a)
        for (size_t b = 0; b < n; ++b)
            ncb.leq[a][b] = partial_order_leq(ncb.standard[a], ncb.standard[b]);

    // r-matrix of Psi.
    ThetaTruncation th = compute_theta(*f, s, bound);
    ncb.r.assign(n, std::vector<PiScalar>(n));
    for (size_t a = 0; a < n; ++a) {
        std::vector<PiScalar> co =
            std_coords(ncb, psi(*ncb.module, th, ncb.standard_vecs[a]));
        for (size_t b = 0; b < n; ++b) ncb.r[a][b] = co[b];
    }

    // Solve per weight block (nu1 - nu2 constant); entries across blocks
    // vanish, so a single solve over the whole index set is equivalent, but
    // blocks keep the intermediate systems small.
    ncb.p.assign(n, std::vector<PiScalar>(n));
    std::map<NuVec, std::vector<size_t>> blocks;
    for (size_t a = 0; a < n; ++a)
        blocks[sub_nu(ncb.standard[a].b1.nu, ncb.standard[a].b2.nu)]
            .push_back(a);
    for (const auto& [key, nodes] : blocks) {
        size_t m = nodes.size();
        std::vector<std::vector<char>> bl(m, std::vector<char>(m));
        std::vector<std::vector<PiScalar>> br(m, std::vector<PiScalar>(m));
        for (size_t x = 0; x < m; ++x)
            for (size_t y = 0; y < m; ++y) {
                bl[x][y] = ncb.leq[nodes[x]][nodes[y]];
                br[x][y] = ncb.r[nodes[x]][nodes[y]];
            }
        std::vector<std::vector<PiScalar>> bpm = semilinear_solve(bl, br);
        for (size_t x = 0; x < m; ++x)
            for (size_t y = 0; y < m; ++y)
                ncb.p[nodes[x]][nodes[y]] = bpm[x][y];
    }
    return ncb;
}

// ---------------------------------------------------------------------------
// Cancellation maps.
// ---------------------------------------------------------------------------
TVec SplitHom::apply(const MVec& x) const {
    TVec out;
    for (const auto& [nu, coords] : x.comps) {
        auto it = images.find(nu);
        if (it == images.end())
            throw std::out_of_range("SplitHom: depth beyond construction");
        for (size_t k = 0; k < coords.size(); ++k)
            if (!coords[k].is_zero()) out = out + it->second[k] * coords[k];
    }
    return out;
}

namespace {

// Generic builder: images of the source basis through one-letter actions.
// `letter(i)` is the generator whose source action reaches depth nu from
// nu - e_i; images extend along the target's Delta_3 action.
SplitHom build_split(std::shared_ptr<const WeightModule> src, bool twisted,
                     std::shared_ptr<TensorModule> target, char kind,
                     int depth) {
    const HalfAlg& f = src->half();
    const RootDatum& rd = f.datum();
    SplitHom hom;
    hom.source = src;
    hom.source_twisted = twisted;
    hom.target = target;
    hom.images[NuVec(static_cast<size_t>(rd.rank()), 0)] = {target->highest()};
    for (const NuVec& nu : nu_list(rd.rank(), depth)) {
        int h = ht(nu);
        if (h == 0 || src->dim(nu) == 0) continue;
        // Columns: letter(i) applied to the basis of depth nu - e_i.
        std::vector<std::pair<int, int>> col_ids;  // (i, source index)
        std::vector<std::vector<PiScalar>> cols;
        for (int i = 0; i < rd.rank(); ++i) {
            if (nu[static_cast<size_t>(i)] == 0) continue;
            NuVec prev = nu;
            --prev[static_cast<size_t>(i)];
            ULetter l{kind, i, 1, {}};
            for (int x = 0; x < src->dim(prev); ++x) {
                MVec ex;
                ex.add_in(prev, x, PiScalar::one());
                MVec img = act_letter(*src, twisted, l, ex);
                std::vector<PiScalar> col(static_cast<size_t>(src->dim(nu)));
                auto it = img.comps.find(nu);
                if (it != img.comps.end())
                    for (size_t k = 0; k < it->second.size(); ++k)
                        col[k] = it->second[k];
                cols.push_back(std::move(col));
                col_ids.emplace_back(i, x);
            }
        }
        // The columns usually overdetermine the depth-nu space; keep a
        // maximal independent subset so the solve below has a trivial
        // kernel (lin_solve rejects anything else).
        size_t rows_n = static_cast<size_t>(src->dim(nu));
        std::vector<size_t> sel;
        for (size_t cc = 0; cc < cols.size() && sel.size() < rows_n; ++cc) {
            bool nz = false;
            for (const auto& e : cols[cc])
                if (!e.is_zero()) nz = true;
            if (!nz) continue;
            if (sel.empty()) {
                sel.push_back(cc);
                continue;
            }
            std::vector<std::vector<PiScalar>> rows(
                rows_n, std::vector<PiScalar>(sel.size()));
            for (size_t rr = 0; rr < rows_n; ++rr)
                for (size_t sc = 0; sc < sel.size(); ++sc)
                    rows[rr][sc] = cols[sel[sc]][rr];
            try {
                lin_solve(rows, cols[cc]);  // solvable => dependent, skip
            } catch (const std::runtime_error&) {
                sel.push_back(cc);
            }
        }
        if (sel.size() != rows_n)
            throw std::runtime_error(
                "split hom: generator images do not span the weight space");
        std::vector<TVec>& out = hom.images[nu];
        out.resize(rows_n);
        std::vector<std::vector<PiScalar>> rows(
            rows_n, std::vector<PiScalar>(sel.size()));
        for (size_t rr = 0; rr < rows_n; ++rr)
            for (size_t sc = 0; sc < sel.size(); ++sc)
                rows[rr][sc] = cols[sel[sc]][rr];
        for (int k = 0; k < src->dim(nu); ++k) {
            std::vector<PiScalar> rhs(rows_n);
            rhs[static_cast<size_t>(k)] = PiScalar::one();
            std::vector<PiScalar> sol = lin_solve(rows, rhs);
            TVec img;
            for (size_t sc = 0; sc < sel.size(); ++sc) {
                if (sol[sc].is_zero()) continue;
                auto [i, x] = col_ids[sel[sc]];
                NuVec prev = nu;
                --prev[static_cast<size_t>(i)];
                UElem gen = kind == 'F' ? UElem::F(i) : UElem::E(i);
                img = img +
                      target->act(gen, hom.images.at(prev)[static_cast<size_t>(
                                      x)]) *
                          sol[sc];
            }
            out[static_cast<size_t>(k)] = std::move(img);
        }
    }
    return hom;
}

}  // namespace

SplitHom chi_split(std::shared_ptr<const HalfAlg> f, const Weight& lambda,
                   const Weight& lambdap, int depth) {
    auto src = std::make_shared<WeightModule>(f, add_w(lambda, lambdap), true,
                                              depth + 1);
    auto t1 = std::make_shared<WeightModule>(f, lambda, true, depth + 1);
    auto t2 = std::make_shared<WeightModule>(f, lambdap, true, depth + 1);
    auto target = std::make_shared<TensorModule>(t1, false, t2, false, 3);
    return build_split(src, false, target, 'F', depth);
}

SplitHom chi4_split(std::shared_ptr<const HalfAlg> f, const Weight& lambdap,
                    const Weight& lambdapp, int depth) {
    auto src = std::make_shared<WeightModule>(f, add_w(lambdap, lambdapp),
                                              true, depth + 1);
    auto t1 = std::make_shared<WeightModule>(f, lambdap, true, depth + 1);
    auto t2 = std::make_shared<WeightModule>(f, lambdapp, true, depth + 1);
    auto target = std::make_shared<TensorModule>(t1, true, t2, true, 3);
    return build_split(src, true, target, 'E', depth);
}

PiScalar Contraction::apply(const TVec& w) const {
    PiScalar out;
    for (const auto& [bd, mat] : w.comps) {
        auto it = coeffs.find(bd);
        if (it == coeffs.end()) continue;
        for (size_t k = 0; k < mat.size(); ++k)
            for (size_t l = 0; l < mat[k].size(); ++l)
                out += it->second[k][l] * mat[k][l];
    }
    return out;
}

Contraction delta_contract(std::shared_ptr<const HalfAlg> f,
                           const Weight& lambda, int depth) {
    const RootDatum& rd = f->datum();
    auto m1 = std::make_shared<WeightModule>(f, lambda, true, depth + 1);
    Contraction d;
    d.module = std::make_shared<TensorModule>(m1, false, m1, true, 3);

    // Unknowns: coefficients on the weight-zero bi-depths (nu, nu); the
    // normalization pins the (0, 0) entry to 1.
    struct Slot {
        NuVec nu;
        int k, l;
    };
    std::vector<Slot> slots;
    std::map<NuVec, int> first_slot;
    for (const NuVec& nu : nu_list(rd.rank(), depth)) {
        int dim = m1->dim(nu);
        if (dim == 0) continue;
        first_slot[nu] = static_cast<int>(slots.size());
        for (int k = 0; k < dim; ++k)
            for (int l = 0; l < dim; ++l) slots.push_back({nu, k, l});
    }
    auto slot_of = [&](const NuVec& nu, int k, int l) {
        return first_slot.at(nu) + k * m1->dim(nu) + l;
    };
    // Equations: delta(Delta(F_i) w) = 0 on weight-i' vectors and
    // delta(Delta(E_i) w) = 0 on weight-(-i') vectors.
    std::vector<std::vector<PiScalar>> rows;
    std::vector<PiScalar> rhs;
    auto add_equations = [&](const UElem& gen, const NuVec& mu1,
                             const NuVec& mu2) {
        if (m1->dim(mu1) == 0 || m1->dim(mu2) == 0) return;
        for (int k = 0; k < m1->dim(mu1); ++k)
            for (int l = 0; l < m1->dim(mu2); ++l) {
                MVec x, y;
                x.add_in(mu1, k, PiScalar::one());
                y.add_in(mu2, l, PiScalar::one());
                TVec img = d.module->act(gen, d.module->pure(x, y));
                std::vector<PiScalar> row(slots.size());
                PiScalar b;
                bool any = false;
                for (const auto& [bd, mat] : img.comps) {
                    if (!(bd.first == bd.second)) continue;
                    for (size_t kk = 0; kk < mat.size(); ++kk)
                        for (size_t ll = 0; ll < mat[kk].size(); ++ll) {
                            if (mat[kk][ll].is_zero()) continue;
                            any = true;
                            int sl = slot_of(bd.first, static_cast<int>(kk),
                                             static_cast<int>(ll));
                            if (sl == 0)
                                b -= mat[kk][ll];  // normalized entry
                            else
                                row[static_cast<size_t>(sl)] = mat[kk][ll];
                        }
                }
                if (!any) continue;
                rows.push_back(std::move(row));
                rhs.push_back(b);
            }
    };
    for (int i = 0; i < rd.rank(); ++i) {
        for (const NuVec& nu1 : nu_list(rd.rank(), depth)) {
            // weight i': nu2 - nu1 = e_i  =>  F_i lands on weight zero;
            // weight -i': nu1 - nu2 = e_i  =>  E_i lands on weight zero.
            NuVec up = nu1;
            ++up[static_cast<size_t>(i)];
            if (ht(up) <= depth) {
                add_equations(UElem::F(i), nu1, up);
                add_equations(UElem::E(i), up, nu1);
            }
        }
    }
    // Solve for the non-normalized unknowns.
    std::vector<std::vector<PiScalar>> sys;
    for (auto& row : rows)
        sys.push_back(std::vector<PiScalar>(row.begin() + 1, row.end()));
    std::vector<PiScalar> sol;
    if (slots.size() > 1)
        sol = lin_solve(sys, rhs);
    for (size_t s = 0; s < slots.size(); ++s) {
        PiScalar c = s == 0 ? PiScalar::one() : sol[s - 1];
        if (c.is_zero()) continue;
        auto key = std::make_pair(slots[s].nu, slots[s].nu);
        auto& mat = d.coeffs[key];
        int dim = m1->dim(slots[s].nu);
        if (mat.empty())
            mat.assign(static_cast<size_t>(dim),
                       std::vector<PiScalar>(static_cast<size_t>(dim)));
        mat[static_cast<size_t>(slots[s].k)][static_cast<size_t>(slots[s].l)] =
            c;
    }
    return d;
}

TVec CancellationMap::apply(const TVec& w) const {
    TVec out;
    for (const auto& [bd, mat] : w.comps) {
        bool any = false;
        for (const auto& row : mat)
            for (const auto& c : row)
                if (!c.is_zero()) any = true;
        if (!any) continue;
        auto it1 = chi.images.find(bd.first);
        auto it2 = chi4.images.find(bd.second);
        if (it1 == chi.images.end() || it2 == chi4.images.end())
            throw std::out_of_range("t_map: depth beyond construction");
        for (size_t k = 0; k < mat.size(); ++k)
            for (size_t l = 0; l < mat[k].size(); ++l) {
                if (mat[k][l].is_zero()) continue;
                const TVec& a = it1->second[k];
                const TVec& b = it2->second[l];
                for (const auto& [abd, amat] : a.comps)
                    for (const auto& [bbd, bmat] : b.comps) {
                        if (!(abd.second == bbd.first)) continue;
                        auto dit = delta.coeffs.find(
                            std::make_pair(abd.second, bbd.first));
                        if (dit == delta.coeffs.end()) continue;
                        for (size_t p = 0; p < amat.size(); ++p)
                            for (size_t q = 0; q < amat[p].size(); ++q) {
                                if (amat[p][q].is_zero()) continue;
                                for (size_t r = 0; r < bmat.size(); ++r) {
                                    const PiScalar& dc = dit->second[q][r];
                                    if (dc.is_zero()) continue;
                                    for (size_t ss = 0; ss < bmat[r].size();
                                         ++ss) {
                                        PiScalar c = mat[k][l] * amat[p][q] *
                                                     dc * bmat[r][ss];
                                        if (c.is_zero()) continue;
                                        out.add_in(
                                            abd.first, bbd.second,
                                            static_cast<int>(p),
                                            static_cast<int>(ss), c,
                                            target->first().dim(abd.first),
                                            target->second().dim(bbd.second));
                                    }
                                }
                            }
                    }
            }
    }
    out.prune();
    return out;
}

CancellationMap t_map(std::shared_ptr<const HalfAlg> f, const Weight& lambda,
                      const Weight& lambdap, const Weight& lambdapp,
                      int depth) {
    CancellationMap t;
    t.chi = chi_split(f, lambda, lambdap, depth);
    t.chi4 = chi4_split(f, lambdap, lambdapp, depth);
    t.delta = delta_contract(f, lambdap, depth);
    auto s1 = std::make_shared<WeightModule>(f, add_w(lambda, lambdap), true,
                                             depth + 1);
    auto s2 = std::make_shared<WeightModule>(f, add_w(lambdap, lambdapp),
                                             true, depth + 1);
    t.source = std::make_shared<TensorModule>(s1, false, s2, true, 3);
    auto t1 = std::make_shared<WeightModule>(f, lambda, true, depth + 1);
    auto t2 = std::make_shared<WeightModule>(f, lambdapp, true, depth + 1);
    t.target = std::make_shared<TensorModule>(t1, false, t2, true, 3);
    return t;
}

// ---------------------------------------------------------------------------
// Canonical basis of Udot.
// ---------------------------------------------------------------------------
namespace {

struct UDotLiftContext {
    const CBProvider* bp;
    const NCanonicalBasis* ncb;
    Weight zeta;
    std::map<size_t, UDotElem> memo;

    UDotElem mono(size_t a) {
        const PiPair& pp = ncb->standard[a];
        const HalfAlg& f = bp->half();
        return udot_monomial(
            f, bp->element(pp.b1.nu, pp.b1.k),
            add_w(zeta, f.datum().nu_to_x(pp.b2.nu)),
            bp->element(pp.b2.nu, pp.b2.k));
    }

    const UDotElem& lift(size_t a) {
        auto it = memo.find(a);
        if (it != memo.end()) return it->second;
        UDotElem u = mono(a);
        std::vector<PiScalar> co =
            std_coords(*ncb, act_on_family(*ncb->module, u));
        if (!(co[a] == PiScalar::one()))
            throw std::runtime_error("cb_of_udot: lift not unitriangular");
        for (size_t b = 0; b < co.size(); ++b) {
            if (b == a || co[b].is_zero()) continue;
            if (!ncb->leq[b][a])
                throw std::runtime_error("cb_of_udot: lift support violation");
            u = u - lift(b) * co[b];
        }
        return memo.emplace(a, std::move(u)).first->second;
    }
};

std::vector<UDotCBElement> lift_all(const CBProvider& bp, const Weight& zeta,
                                    const Weight& lambda,
                                    const Weight& lambdapp, int bound) {
    NCanonicalBasis ncb = cb_of_N(bp, lambda, lambdapp, bound);
    UDotLiftContext ctx{&bp, &ncb, zeta, {}};
    std::vector<UDotCBElement> out;
    for (size_t a = 0; a < ncb.standard.size(); ++a) {
        UDotElem u;
        for (size_t b = 0; b < ncb.standard.size(); ++b)
            if (!ncb.p[a][b].is_zero()) u = u + ctx.lift(b) * ncb.p[a][b];
        out.push_back({ncb.standard[a], std::move(u)});
    }
    return out;
}

}  // namespace

UDotCanonicalBasis cb_of_udot(const CBProvider& bp, const Weight& zeta,
                              int bound) {
    const RootDatum& rd = bp.half().datum();
    std::vector<long long> targets(static_cast<size_t>(rd.rank()));
    for (int i = 0; i < rd.rank(); ++i)
        targets[static_cast<size_t>(i)] =
            bound + 1 + std::max<long long>(0, rd.pair_i(i, zeta));
    Weight lambda = weight_with_pairings(rd, targets);
    Weight lambdapp = sub_w(lambda, zeta);
    UDotCanonicalBasis out;
    out.zeta = zeta;
    out.lambda = lambda;
    out.lambdapp = lambdapp;
    out.elements = lift_all(bp, zeta, lambda, lambdapp, bound);

    // Mandatory stabilization assertion: the rho-hat-shifted pair must give
    // the same elements.
    Weight rhohat = weight_with_pairings(
        rd, std::vector<long long>(static_cast<size_t>(rd.rank()), 1));
    std::vector<UDotCBElement> shifted = lift_all(
        bp, zeta, add_w(lambda, rhohat), add_w(lambdapp, rhohat), bound);
    if (shifted.size() != out.elements.size())
        throw std::runtime_error("cb_of_udot: shifted index set mismatch");
    for (size_t a = 0; a < shifted.size(); ++a)
        if (!(shifted[a].index == out.elements[a].index &&
              shifted[a].value == out.elements[a].value))
            throw std::runtime_error(
                "cb_of_udot: result depends on the stabilization pair");
    return out;
}

UDotElem pi_normal_form(const UDotElem& a) {
    UDotElem b = a;
    b.prune();
    for (const auto& [key, mat] : b.comps)
        for (const auto& row : mat)
            for (const auto& c : row) {
                if (c.is_zero()) continue;
                // Multiply by pi when the eps_- leading coefficient of the
                // first nonzero coordinate is negative (pi fixes eps_+).
                const Laurent& lm = c.minus().num();
                if (!lm.is_zero() &&
                    lm.coeffs().rbegin()->second < 0)
                    return b * PiScalar::pi();
                return b;
            }
    return b;
}

long long bullet_form(const RootDatum& rd, const NuVec& nu) {
    long long out = 0;
    for (int i = 0; i < rd.rank(); ++i) {
        long long ni = nu[static_cast<size_t>(i)];
        out += ni * (ni - 1) / 2 * rd.cd.dot[i][i];
        for (int j = i + 1; j < rd.rank(); ++j)
            out += ni * nu[static_cast<size_t>(j)] * rd.cd.dot[i][j];
    }
    return out;
}

long long pbold(const RootDatum& rd, const NuVec& nu) {
    long long out = 0;
    for (int i = 0; i < rd.rank(); ++i) {
        long long ni = nu[static_cast<size_t>(i)];
        out += ni * (ni - 1) / 2 * rd.parity(i);
        for (int j = i + 1; j < rd.rank(); ++j)
            out += ni * nu[static_cast<size_t>(j)] * rd.parity(i) *
                   rd.parity(j);
    }
    return out;
}

}  // namespace coverquant
