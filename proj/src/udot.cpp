#include "coverquant/udot.hpp"

#include <algorithm>
#include <stdexcept>

namespace coverquant {

namespace {

FElem unit_f(const NuVec& nu, int k) {
    FElem e;
    e.add_in(nu, k, PiScalar::one());
    return e;
}

NuVec zero_nu(const RootDatum& rd) { return NuVec(rd.rank(), 0); }

// The basis monomial as a formal U word on the requested side.
UElem side_word(const HalfAlg& f, const NuVec& nu, int k, char kind) {
    UElem u = UElem::one();
    if (ht(nu) == 0) return u;
    const Word& w = f.component(nu).basis_word(k);
    for (uint8_t g : w)
        u = u * (kind == 'F' ? UElem::F(g) : UElem::E(g));
    return u;
}

void add_scaled(UDotElem& r, const UDotElem& a, const PiScalar& c) {
    if (c.is_zero()) return;
    for (const auto& [key, m] : a.comps)
        for (size_t k = 0; k < m.size(); ++k)
            for (size_t l = 0; l < m[k].size(); ++l)
                if (!m[k][l].is_zero())
                    r.add_in(key, static_cast<int>(k), static_cast<int>(l),
                             c * m[k][l], static_cast<int>(m.size()),
                             static_cast<int>(m[k].size()));
}

// One application of E_i (no divided power) on the left.
UDotElem act_E(const HalfAlg& f, int i, const UDotElem& a) {
    const RootDatum& rd = f.datum();
    int di = rd.d(i);
    PiScalar denom = PiScalar::piv(di, di) - PiScalar::v(-di);
    UDotElem r;
    for (const auto& [key, m] : a.comps) {
        long long zi = rd.pair_i(i, key.zeta);
        int dm = static_cast<int>(m.size());
        int dp = dm > 0 ? static_cast<int>(m[0].size()) : 0;
        // Cartan-free piece: x^- 1_{zeta+i'} (theta_i x')^+.
        UDotKey kmain{add_w(key.zeta, rd.embed_x[i]), key.nm, key.np};
        kmain.np[i] += 1;
        PiScalar cmain =
            PiScalar::pi_pow(static_cast<long long>(di) * rd.p_nu(key.nm));
        int dpn = f.dim_at(kmain.np);
        for (int k = 0; k < dm; ++k)
            for (int l = 0; l < dp; ++l) {
                if (m[k][l].is_zero()) continue;
                FElem xp = f.multiply(f.theta(i), unit_f(key.np, l));
                for (const auto& [nu2, co] : xp.comps)
                    for (size_t j = 0; j < co.size(); ++j)
                        if (!co[j].is_zero())
                            r.add_in(kmain, k, static_cast<int>(j),
                                     cmain * m[k][l] * co[j], dm, dpn);
            }
        // Differential pieces lower the F-side by i.
        if (key.nm[i] == 0) continue;
        UDotKey kdiff{key.zeta, key.nm, key.np};
        kdiff.nm[i] -= 1;
        int dmn = f.dim_at(kdiff.nm);
        PiScalar cr = PiScalar::pi_pow(static_cast<long long>(di) *
                                       (rd.p_nu(key.nm) - rd.parity(i))) *
                      PiScalar::piv(di * zi, static_cast<int>(di * zi)) /
                      denom;
        // Kt_{-i} commutes through (_ir x)^- before hitting 1_zeta.
        long long e =
            rd.pair_i(i, rd.nu_to_x(kdiff.nm)) - zi;
        PiScalar cl = -PiScalar::v(static_cast<int>(di * e)) / denom;
        for (int k = 0; k < dm; ++k) {
            bool row_nz = false;
            for (int l = 0; l < dp; ++l) row_nz = row_nz || !m[k][l].is_zero();
            if (!row_nz) continue;
            FElem ri = f.diff_right(i, unit_f(key.nm, k));
            FElem ir = f.diff_left(i, unit_f(key.nm, k));
            for (int l = 0; l < dp; ++l) {
                if (m[k][l].is_zero()) continue;
                for (const auto& [nu2, co] : ri.comps)
                    for (size_t j = 0; j < co.size(); ++j)
                        if (!co[j].is_zero())
                            r.add_in(kdiff, static_cast<int>(j), l,
                                     cr * m[k][l] * co[j], dmn, dp);
                for (const auto& [nu2, co] : ir.comps)
                    for (size_t j = 0; j < co.size(); ++j)
                        if (!co[j].is_zero())
                            r.add_in(kdiff, static_cast<int>(j), l,
                                     cl * m[k][l] * co[j], dmn, dp);
            }
        }
    }
    r.prune();
    return r;
}

UDotElem act_letter_udot(const HalfAlg& f, const ULetter& l,
                         const UDotElem& a) {
    const RootDatum& rd = f.datum();
    switch (l.kind) {
        case 'F': {
            UDotElem r;
            FElem dp = f.divided_power(l.i, l.n);
            for (const auto& [key, m] : a.comps) {
                UDotKey kn{key.zeta, key.nm, key.np};
                kn.nm[l.i] += l.n;
                int dmn = f.dim_at(kn.nm);
                int dpc = static_cast<int>(m.empty() ? 0 : m[0].size());
                for (size_t k = 0; k < m.size(); ++k) {
                    bool nz = false;
                    for (const auto& c : m[k]) nz = nz || !c.is_zero();
                    if (!nz) continue;
                    FElem xm = f.multiply(dp, unit_f(key.nm,
                                                     static_cast<int>(k)));
                    for (const auto& [nu2, co] : xm.comps)
                        for (size_t j = 0; j < co.size(); ++j) {
                            if (co[j].is_zero()) continue;
                            for (int lc = 0; lc < dpc; ++lc)
                                if (!m[k][lc].is_zero())
                                    r.add_in(kn, static_cast<int>(j), lc,
                                             co[j] * m[k][lc], dmn, dpc);
                        }
                }
            }
            r.prune();
            return r;
        }
        case 'E': {
            UDotElem r = a;
            for (int s = 0; s < l.n; ++s) r = act_E(f, l.i, r);
            if (l.n > 1)
                r = r * (PiScalar::one() / qfact(l.n, rd.d(l.i)));
            return r;
        }
        case 'K':
        case 'J': {
            UDotElem r;
            for (const auto& [key, m] : a.comps) {
                long long e = rd.pair(l.mu, udot_left_weight(rd, key));
                PiScalar c = l.kind == 'K'
                                 ? PiScalar::v(static_cast<int>(e))
                                 : PiScalar::pi_pow(e);
                UDotElem one_key;
                one_key.comps[key] = m;
                add_scaled(r, one_key, c);
            }
            r.prune();
            return r;
        }
        default:
            throw std::logic_error("act_letter_udot: unknown letter");
    }
}

}  // namespace

bool UDotElem::is_zero() const {
    for (const auto& [key, m] : comps)
        for (const auto& row : m)
            for (const auto& c : row)
                if (!c.is_zero()) return false;
    return true;
}

UDotElem UDotElem::operator+(const UDotElem& o) const {
    UDotElem r = *this;
    add_scaled(r, o, PiScalar::one());
    r.prune();
    return r;
}

UDotElem UDotElem::operator-(const UDotElem& o) const {
    UDotElem r = *this;
    add_scaled(r, o, -PiScalar::one());
    r.prune();
    return r;
}

UDotElem UDotElem::operator*(const PiScalar& c) const {
    UDotElem r;
    add_scaled(r, *this, c);
    r.prune();
    return r;
}

bool UDotElem::operator==(const UDotElem& o) const {
    return (*this - o).is_zero();
}

void UDotElem::add_in(const UDotKey& key, int k, int l, const PiScalar& c,
                      int dm, int dp) {
    auto& m = comps[key];
    if (m.empty()) m.assign(static_cast<size_t>(dm),
                            std::vector<PiScalar>(static_cast<size_t>(dp),
                                                  PiScalar::zero()));
    m[static_cast<size_t>(k)][static_cast<size_t>(l)] += c;
}

void UDotElem::prune() {
    for (auto it = comps.begin(); it != comps.end();) {
        bool nz = false;
        for (const auto& row : it->second)
            for (const auto& c : row) nz = nz || !c.is_zero();
        it = nz ? std::next(it) : comps.erase(it);
    }
}

UDotElem udot_unit(const Weight& zeta) {
    UDotElem r;
    UDotKey key{zeta, {}, {}};
    // Rank is implicit: empty nu vectors mean height zero in any rank; the
    // first arithmetic step normalizes them, so store explicit zeros lazily
    // on use instead.  To keep keys comparable we require callers to use the
    // HalfAlg-aware constructors below for nonzero parts; the unit uses the
    // dimension from the zeta length only when needed.
    r.comps[key] = {{PiScalar::one()}};
    return r;
}

UDotElem udot_monomial(const HalfAlg& f, const FElem& xm, const Weight& zeta,
                       const FElem& xp) {
    UDotElem r;
    for (const auto& [nm, cm] : xm.comps)
        for (size_t k = 0; k < cm.size(); ++k) {
            if (cm[k].is_zero()) continue;
            for (const auto& [np, cp] : xp.comps)
                for (size_t l = 0; l < cp.size(); ++l) {
                    if (cp[l].is_zero()) continue;
                    UDotKey key{zeta, nm, np};
                    r.add_in(key, static_cast<int>(k), static_cast<int>(l),
                             cm[k] * cp[l], f.dim_at(nm), f.dim_at(np));
                }
        }
    r.prune();
    return r;
}

Weight udot_left_weight(const RootDatum& rd, const UDotKey& key) {
    NuVec nm = key.nm.empty() ? NuVec(rd.rank(), 0) : key.nm;
    return sub_w(key.zeta, rd.nu_to_x(nm));
}

Weight udot_right_weight(const RootDatum& rd, const UDotKey& key) {
    NuVec np = key.np.empty() ? NuVec(rd.rank(), 0) : key.np;
    return sub_w(key.zeta, rd.nu_to_x(np));
}

namespace {

// Replace empty (height-zero) nu markers with explicit zero vectors so keys
// merge correctly across construction paths.
UDotElem canon_keys(const RootDatum& rd, const UDotElem& a) {
    UDotElem r;
    for (const auto& [key, m] : a.comps) {
        UDotKey kn = key;
        if (kn.nm.empty()) kn.nm = zero_nu(rd);
        if (kn.np.empty()) kn.np = zero_nu(rd);
        for (size_t k = 0; k < m.size(); ++k)
            for (size_t l = 0; l < m[k].size(); ++l)
                if (!m[k][l].is_zero())
                    r.add_in(kn, static_cast<int>(k), static_cast<int>(l),
                             m[k][l], static_cast<int>(m.size()),
                             static_cast<int>(m[k].size()));
    }
    return r;
}

}  // namespace

UDotElem act_left(const HalfAlg& f, const UElem& u, const UDotElem& a) {
    UDotElem base = canon_keys(f.datum(), a);
    UDotElem r;
    for (const auto& t : u.terms) {
        if (t.c.is_zero()) continue;
        UDotElem cur = base;
        for (auto it = t.word.rbegin(); it != t.word.rend(); ++it)
            cur = act_letter_udot(f, *it, cur);
        add_scaled(r, cur, t.c);
    }
    r.prune();
    return r;
}

UDotElem normalize(const HalfAlg& f, const UElem& u, const Weight& zeta) {
    return act_left(f, u, canon_keys(f.datum(), udot_unit(zeta)));
}

UDotElem mult_right(const HalfAlg& f, const UDotElem& a, const UElem& u) {
    const RootDatum& rd = f.datum();
    UDotElem ac = canon_keys(rd, a);
    UDotElem r;
    for (const auto& [key, m] : ac.comps)
        for (size_t k = 0; k < m.size(); ++k)
            for (size_t l = 0; l < m[k].size(); ++l) {
                if (m[k][l].is_zero()) continue;
                // term = x^- . ( 1_zeta . (x'^+ u) ); push the idempotent
                // through each homogeneous word of x'^+ u.
                UElem w2u = side_word(f, key.np, static_cast<int>(l), 'E') * u;
                w2u.collect();
                UElem w1 = side_word(f, key.nm, static_cast<int>(k), 'F');
                for (const auto& t : w2u.terms) {
                    if (t.c.is_zero()) continue;
                    Weight mu = sub_w(key.zeta,
                                      rd.nu_to_x(uword_wt(rd, t.word)));
                    UElem single;
                    single.terms.push_back({PiScalar::one(), t.word});
                    UDotElem piece = act_left(
                        f, w1, act_left(f, single,
                                        canon_keys(rd, udot_unit(mu))));
                    add_scaled(r, piece, m[k][l] * t.c);
                }
            }
    r.prune();
    return r;
}

UDotElem udot_mult(const HalfAlg& f, const UDotElem& a, const UDotElem& b) {
    const RootDatum& rd = f.datum();
    UDotElem ac = canon_keys(rd, a);
    UDotElem bc = canon_keys(rd, b);
    UDotElem r;
    for (const auto& [key, m] : ac.comps) {
        for (size_t k = 0; k < m.size(); ++k)
            for (size_t l = 0; l < m[k].size(); ++l) {
                if (m[k][l].is_zero()) continue;
                UDotElem mid =
                    act_left(f, side_word(f, key.np, static_cast<int>(l), 'E'),
                             bc);
                // 1_zeta projector between the parts.
                UDotElem proj;
                for (const auto& [bk, bm] : mid.comps)
                    if (udot_left_weight(rd, bk) == key.zeta)
                        proj.comps[bk] = bm;
                UDotElem piece = act_left(
                    f, side_word(f, key.nm, static_cast<int>(k), 'F'), proj);
                add_scaled(r, piece, m[k][l]);
            }
    }
    r.prune();
    return r;
}

UDotElem auto_udot(const HalfAlg& f, AutoKind kind, const UDotElem& a) {
    const RootDatum& rd = f.datum();
    UDotElem ac = canon_keys(rd, a);
    UDotElem r;
    for (const auto& [key, m] : ac.comps)
        for (size_t k = 0; k < m.size(); ++k)
            for (size_t l = 0; l < m[k].size(); ++l) {
                if (m[k][l].is_zero()) continue;
                UElem w1 = side_word(f, key.nm, static_cast<int>(k), 'F');
                UElem w2 = side_word(f, key.np, static_cast<int>(l), 'E');
                UElem A, B;
                Weight eta;
                if (kind == AutoKind::Rho) {
                    A = apply_auto(rd, kind, w2);
                    B = apply_auto(rd, kind, w1);
                    eta = neg_w(key.zeta);
                } else {
                    A = apply_auto(rd, kind, w1);
                    B = apply_auto(rd, kind, w2);
                    eta = (kind == AutoKind::Omega ||
                           kind == AutoKind::OmegaInv)
                              ? neg_w(key.zeta)
                              : key.zeta;
                }
                PiScalar c = m[k][l];
                if (kind == AutoKind::Bar) c = c.bar();
                if (kind == AutoKind::Dagger) c = c.dagger();
                B.collect();
                for (const auto& t : B.terms) {
                    if (t.c.is_zero()) continue;
                    Weight mu =
                        sub_w(eta, rd.nu_to_x(uword_wt(rd, t.word)));
                    UElem single;
                    single.terms.push_back({PiScalar::one(), t.word});
                    UDotElem piece = act_left(
                        f, A, act_left(f, single,
                                       canon_keys(rd, udot_unit(mu))));
                    add_scaled(r, piece, c * t.c);
                }
            }
    r.prune();
    return r;
}

TVec act_on_family(const TensorModule& n, const UDotElem& a) {
    const HalfAlg& f = n.first().half();
    const RootDatum& rd = f.datum();
    UDotElem ac = canon_keys(rd, a);
    TVec r;
    TVec top = n.highest();
    for (const auto& [key, m] : ac.comps)
        for (size_t k = 0; k < m.size(); ++k)
            for (size_t l = 0; l < m[k].size(); ++l) {
                if (m[k][l].is_zero()) continue;
                TVec mid = n.act(side_word(f, key.np, static_cast<int>(l),
                                           'E'),
                                 top);
                // 1_zeta projector on the tensor weight.
                TVec proj;
                for (const auto& [bk, bm] : mid.comps) {
                    Weight w1 = sub_w(n.first().lambda(),
                                      rd.nu_to_x(bk.first));
                    if (n.first_twisted()) w1 = neg_w(w1);
                    Weight w2 = sub_w(n.second().lambda(),
                                      rd.nu_to_x(bk.second));
                    if (n.second_twisted()) w2 = neg_w(w2);
                    if (add_w(w1, w2) == key.zeta) proj.comps[bk] = bm;
                }
                TVec piece = n.act(side_word(f, key.nm, static_cast<int>(k),
                                             'F'),
                                   proj);
                r = r + piece * m[k][l];
            }
    r.prune();
    return r;
}

PiScalar dot_form(const HalfAlg& f, const UDotElem& a, const UDotElem& b) {
    const RootDatum& rd = f.datum();
    UDotElem ac = canon_keys(rd, a);
    UDotElem bc = canon_keys(rd, b);
    // Strip one E-part from the first argument, if any, via the right
    // adjunction (x u, y) = (x, y tau1bar(u)).
    for (const auto& [key, m] : ac.comps) {
        if (ht(key.np) == 0) continue;
        for (size_t k = 0; k < m.size(); ++k)
            for (size_t l = 0; l < m[k].size(); ++l) {
                if (m[k][l].is_zero()) continue;
                UDotElem rest = ac;
                rest.comps[key][k][l] = PiScalar::zero();
                rest.prune();
                UElem tb = apply_auto(
                    rd, AutoKind::Tau1Bar,
                    side_word(f, key.np, static_cast<int>(l), 'E'));
                UDotElem head = udot_monomial(
                    f, unit_f(key.nm, static_cast<int>(k)), key.zeta,
                    f.one());
                return m[k][l] * dot_form(f, head, mult_right(f, bc, tb)) +
                       dot_form(f, rest, bc);
            }
    }
    // First argument is E-free; use symmetry if the second is not.
    for (const auto& [key, m] : bc.comps)
        if (ht(key.np) != 0) return dot_form(f, bc, ac);
    // Base: (x^- 1_zeta, y^- 1_zeta) = (x, y)_f, orthogonal otherwise.
    PiScalar total = PiScalar::zero();
    for (const auto& [key, m] : ac.comps) {
        auto it = bc.comps.find(key);
        if (it == bc.comps.end()) continue;
        const auto& g = f.gram(key.nm);
        for (size_t k = 0; k < m.size(); ++k)
            for (size_t j = 0; j < it->second.size(); ++j)
                total += m[k][0] * g[k][j] * it->second[j][0];
    }
    return total;
}

PiScalar dot_form_prime(const HalfAlg& f, const UDotElem& a,
                        const UDotElem& b) {
    UDotElem at = auto_udot(f, AutoKind::Dagger, auto_udot(f, AutoKind::Bar,
                                                           a));
    UDotElem bt = auto_udot(f, AutoKind::Dagger, auto_udot(f, AutoKind::Bar,
                                                           b));
    return dot_form(f, at, bt).bar().dagger();
}

Weight weight_with_pairings(const RootDatum& rd,
                            const std::vector<long long>& targets) {
    // Solve <i, lambda> = targets[i] by fraction-free elimination over the
    // pairing matrix restricted to the coroot rows.
    int n = rd.rank();
    int mcols = rd.x_rank;
    std::vector<std::vector<long long>> aug(
        static_cast<size_t>(n), std::vector<long long>(mcols + 1, 0));
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < mcols; ++j) {
            Weight ej(mcols, 0);
            ej[j] = 1;
            aug[i][j] = rd.pair(rd.embed_y[i], ej);
        }
        aug[i][mcols] = targets[static_cast<size_t>(i)];
    }
    std::vector<int> pivcol(static_cast<size_t>(n), -1);
    int row = 0;
    for (int c = 0; c < mcols && row < n; ++c) {
        int pick = -1;
        for (int rr = row; rr < n; ++rr)
            if (aug[rr][c] != 0) { pick = rr; break; }
        if (pick < 0) continue;
        std::swap(aug[row], aug[static_cast<size_t>(pick)]);
        for (int rr = 0; rr < n; ++rr) {
            if (rr == row || aug[rr][c] == 0) continue;
            long long p = aug[row][c], q = aug[rr][c];
            for (int cc = 0; cc <= mcols; ++cc)
                aug[rr][cc] = aug[rr][cc] * p - aug[row][cc] * q;
        }
        pivcol[static_cast<size_t>(row)] = c;
        ++row;
    }
    Weight lam(mcols, 0);
    for (int rr = 0; rr < row; ++rr) {
        int c = pivcol[static_cast<size_t>(rr)];
        if (aug[rr][mcols] % aug[rr][c] != 0)
            throw std::runtime_error(
                "weight_with_pairings: no integral solution");
        lam[c] = static_cast<int>(aug[rr][mcols] / aug[rr][c]);
    }
    for (int i = 0; i < n; ++i)
        if (rd.pair_i(i, lam) != targets[static_cast<size_t>(i)])
            throw std::runtime_error(
                "weight_with_pairings: inconsistent system");
    return lam;
}

FormLimitResult form_limit(const HalfAlg& f, const UDotElem& a,
                           const UDotElem& b, int kmax, int order) {
    const RootDatum& rd = f.datum();
    UDotElem ac = canon_keys(rd, a);
    UDotElem bc = canon_keys(rd, b);
    // All terms must share the right weight zeta (elements of Udot 1_zeta).
    Weight zeta;
    bool have = false;
    int h = 1;
    for (const UDotElem* e : {&ac, &bc})
        for (const auto& [key, m] : e->comps) {
            Weight wr = udot_right_weight(rd, key);
            if (!have) {
                zeta = wr;
                have = true;
            } else if (!(wr == zeta)) {
                throw std::invalid_argument(
                    "form_limit: arguments not supported on one 1_zeta");
            }
            h = std::max(h, ht(key.nm) + ht(key.np));
        }
    if (!have) return {PiScalar::zero(), 0, true};
    FormLimitResult res;
    PiScalar prev;
    bool have_prev = false;
    for (int k = 0; k <= kmax; ++k) {
        std::vector<long long> t(static_cast<size_t>(rd.rank()), 0);
        for (int i = 0; i < rd.rank(); ++i)
            // Successive values differ by terms suppressed like v^{<i,lam>},
            // so step the weight by `order` to certify order-many digits in
            // a couple of iterations.
            t[static_cast<size_t>(i)] =
                std::max<long long>(0, rd.pair_i(i, zeta)) + h + 1 +
                static_cast<long long>(k) * std::max(order, 1);
        Weight lam = weight_with_pairings(rd, t);
        Weight lamp = sub_w(lam, zeta);
        auto v1 = std::make_shared<WeightModule>(
            std::shared_ptr<const HalfAlg>(&f, [](const HalfAlg*) {}), lam,
            true, h + 1);
        auto v2 = std::make_shared<WeightModule>(
            std::shared_ptr<const HalfAlg>(&f, [](const HalfAlg*) {}), lamp,
            true, h + 1);
        TensorModule n3(v1, false, v2, true, 3);
        TensorModule n4(v1, false, v2, true, 4);
        TVec x = act_on_family(n3, ac);
        TVec y = act_on_family(n4, bc);
        PiScalar val = jpolarization(n3, x, y);
        if (have_prev) {
            PiScalar d = val - prev;
            auto vv = d.vval();
            if (!vv || *vv >= order) {
                res.value = val;
                res.k = k;
                res.stabilized = true;
                return res;
            }
        }
        prev = val;
        have_prev = true;
    }
    res.value = prev;
    res.k = kmax;
    res.stabilized = false;
    return res;
}

}  // namespace coverquant
