#include "coverquant/repmod.hpp"

#include <stdexcept>

namespace coverquant {

// ---------------------------------------------------------------------------
// UElem
// ---------------------------------------------------------------------------
UElem UElem::one() { return UElem{{UTerm{PiScalar::one(), {}}}}; }

UElem UElem::gen(ULetter l) { return UElem{{UTerm{PiScalar::one(), {l}}}}; }

UElem UElem::E(int i, int n) { return gen(ULetter{'E', i, n, {}}); }
UElem UElem::F(int i, int n) { return gen(ULetter{'F', i, n, {}}); }
UElem UElem::K(Coweight mu) { return gen(ULetter{'K', 0, 1, std::move(mu)}); }
UElem UElem::J(Coweight mu) { return gen(ULetter{'J', 0, 1, std::move(mu)}); }

UElem UElem::operator*(const UElem& o) const {
    UElem r;
    for (const auto& a : terms)
        for (const auto& b : o.terms) {
            UTerm t;
            t.c = a.c * b.c;
            t.word = a.word;
            t.word.insert(t.word.end(), b.word.begin(), b.word.end());
            r.terms.push_back(std::move(t));
        }
    r.collect();
    return r;
}

UElem UElem::operator+(const UElem& o) const {
    UElem r = *this;
    r.terms.insert(r.terms.end(), o.terms.begin(), o.terms.end());
    r.collect();
    return r;
}

UElem UElem::operator-(const UElem& o) const {
    return *this + o * (-PiScalar::one());
}

UElem UElem::operator*(const PiScalar& s) const {
    UElem r = *this;
    for (auto& t : r.terms) t.c *= s;
    r.collect();
    return r;
}

void UElem::collect() {
    std::map<std::vector<ULetter>, PiScalar> acc;
    for (auto& t : terms) {
        auto it = acc.find(t.word);
        if (it == acc.end())
            acc.emplace(t.word, t.c);
        else
            it->second += t.c;
    }
    terms.clear();
    for (auto& [w, c] : acc)
        if (!c.is_zero()) terms.push_back(UTerm{c, w});
}

bool UElem::is_zero() const {
    UElem c = *this;
    c.collect();
    return c.terms.empty();
}

bool UElem::operator==(const UElem& o) const { return (*this - o).is_zero(); }

UElem u_ktilde(const RootDatum& rd, const NuVec& nu, int sign) {
    Coweight mu = rd.tilde(nu);
    if (sign < 0) mu = neg_w(mu);
    return UElem::K(mu);
}

UElem u_jtilde(const RootDatum& rd, const NuVec& nu) {
    return UElem::J(rd.tilde(nu));
}

NuVec uword_wt(const RootDatum& rd, const std::vector<ULetter>& w) {
    NuVec nu(rd.rank(), 0);
    for (const auto& l : w) {
        if (l.kind == 'E') nu[l.i] += l.n;
        if (l.kind == 'F') nu[l.i] -= l.n;
    }
    return nu;
}

int uword_parity(const RootDatum& rd, const std::vector<ULetter>& w) {
    int p = 0;
    for (const auto& l : w)
        if (l.kind == 'E' || l.kind == 'F') p += l.n * rd.parity(l.i);
    return p & 1;
}

// ---------------------------------------------------------------------------
// apply_auto
// ---------------------------------------------------------------------------
namespace {

// tilde(n * i) as a Y-vector.
Coweight tilde_ni(const RootDatum& rd, int i, int n) {
    NuVec nu(rd.rank(), 0);
    nu[i] = n;
    return rd.tilde(nu);
}

// Image of a single letter; returns (scalar, replacement word).
std::pair<PiScalar, std::vector<ULetter>> letter_image(const RootDatum& rd,
                                                       AutoKind kind,
                                                       const ULetter& l) {
    const PiScalar one = PiScalar::one();
    auto Ei = [&](int n) { return ULetter{'E', l.i, n, {}}; };
    auto Fi = [&](int n) { return ULetter{'F', l.i, n, {}}; };
    auto Jt = [&](int n) { return ULetter{'J', 0, 1, tilde_ni(rd, l.i, n)}; };
    auto Kt = [&](int n) { return ULetter{'K', 0, 1, tilde_ni(rd, l.i, n)}; };
    int di = (l.kind == 'E' || l.kind == 'F') ? rd.d(l.i) : 0;
    long long n = l.n;

    switch (kind) {
        case AutoKind::Omega:
            if (l.kind == 'E') return {one, {Fi(l.n)}};
            if (l.kind == 'F')
                return {PiScalar::pi_pow(di * n), {Ei(l.n), Jt(l.n)}};
            if (l.kind == 'K') return {one, {ULetter{'K', 0, 1, neg_w(l.mu)}}};
            return {one, {l}};
        case AutoKind::OmegaInv:
            if (l.kind == 'E')
                return {PiScalar::pi_pow(di * n), {Jt(l.n), Fi(l.n)}};
            if (l.kind == 'F') return {one, {Ei(l.n)}};
            if (l.kind == 'K') return {one, {ULetter{'K', 0, 1, neg_w(l.mu)}}};
            return {one, {l}};
        case AutoKind::Rho:
            if (l.kind == 'E')
                return {PiScalar::pi_pow(di * n), {Jt(l.n), Ei(l.n)}};
            if (l.kind == 'F') return {one, {l}};
            if (l.kind == 'K') return {one, {ULetter{'K', 0, 1, neg_w(l.mu)}}};
            return {one, {l}};
        case AutoKind::Bar:
            if (l.kind == 'K')
                return {one,
                        {ULetter{'J', 0, 1, l.mu},
                         ULetter{'K', 0, 1, neg_w(l.mu)}}};
            return {one, {l}};
        case AutoKind::Dagger:
            if (l.kind == 'E')
                return {PiScalar::pi_pow(di * (n * (n + 1) / 2)),
                        {Ei(l.n), Jt(l.n)}};
            if (l.kind == 'F')
                return {PiScalar::pi_pow(di * (n * (n - 1) / 2)), {Fi(l.n)}};
            if (l.kind == 'K')
                return {one,
                        {ULetter{'J', 0, 1, l.mu}, ULetter{'K', 0, 1, l.mu}}};
            return {one, {l}};
        case AutoKind::Tau1:
            if (l.kind == 'E')
                return {PiScalar::v(static_cast<int>(-di * n * n)),
                        {ULetter{'K', 0, 1, neg_w(tilde_ni(rd, l.i, l.n))},
                         Fi(l.n)}};
            if (l.kind == 'F')
                return {PiScalar::v(static_cast<int>(-di * n * n)),
                        {Kt(l.n), Ei(l.n)}};
            return {one, {l}};
        case AutoKind::Tau1Bar:
            if (l.kind == 'E')
                return {PiScalar::pi_pow(di * n) *
                            PiScalar::v(static_cast<int>(di * n * n)),
                        {Jt(l.n), Kt(l.n), Fi(l.n)}};
            if (l.kind == 'F')
                return {PiScalar::pi_pow(di * n) *
                            PiScalar::v(static_cast<int>(di * n * n)),
                        {Jt(l.n),
                         ULetter{'K', 0, 1, neg_w(tilde_ni(rd, l.i, l.n))},
                         Ei(l.n)}};
            return {one, {l}};
    }
    throw std::logic_error("unreachable");
}

bool is_anti(AutoKind k) {
    return k == AutoKind::Rho || k == AutoKind::Tau1 || k == AutoKind::Tau1Bar;
}

PiScalar conj_coeff(AutoKind k, const PiScalar& c) {
    if (k == AutoKind::Bar) return c.bar();
    if (k == AutoKind::Dagger) return c.dagger();
    return c;
}

}  // namespace

UElem apply_auto(const RootDatum& rd, AutoKind kind, const UElem& u) {
    UElem r;
    for (const auto& t : u.terms) {
        UTerm out;
        out.c = conj_coeff(kind, t.c);
        std::vector<ULetter> word = t.word;
        if (is_anti(kind)) std::reverse(word.begin(), word.end());
        for (const auto& l : word) {
            auto [s, img] = letter_image(rd, kind, l);
            out.c *= s;
            out.word.insert(out.word.end(), img.begin(), img.end());
        }
        r.terms.push_back(std::move(out));
    }
    r.collect();
    return r;
}

// ---------------------------------------------------------------------------
// MVec
// ---------------------------------------------------------------------------
bool MVec::is_zero() const {
    for (const auto& [nu, co] : comps)
        for (const auto& c : co)
            if (!c.is_zero()) return false;
    return true;
}

MVec MVec::operator+(const MVec& o) const {
    MVec r = *this;
    for (const auto& [nu, co] : o.comps) {
        auto it = r.comps.find(nu);
        if (it == r.comps.end()) {
            r.comps.emplace(nu, co);
        } else {
            for (size_t k = 0; k < co.size(); ++k) it->second[k] += co[k];
        }
    }
    r.prune();
    return r;
}

MVec MVec::operator-(const MVec& o) const {
    return *this + o * (-PiScalar::one());
}

MVec MVec::operator*(const PiScalar& s) const {
    MVec r = *this;
    for (auto& [nu, co] : r.comps)
        for (auto& c : co) c *= s;
    r.prune();
    return r;
}

bool MVec::operator==(const MVec& o) const { return (*this - o).is_zero(); }

void MVec::add_in(const NuVec& nu, int k, const PiScalar& c) {
    auto& co = comps[nu];
    if (static_cast<int>(co.size()) <= k) co.resize(k + 1);
    co[k] += c;
}

void MVec::prune() {
    for (auto it = comps.begin(); it != comps.end();) {
        bool z = true;
        for (const auto& c : it->second) z = z && c.is_zero();
        it = z ? comps.erase(it) : std::next(it);
    }
}

// ---------------------------------------------------------------------------
// WeightModule
// ---------------------------------------------------------------------------
WeightModule::WeightModule(std::shared_ptr<const HalfAlg> f, Weight lambda,
                           bool simple, int depth)
    : f_(std::move(f)), lambda_(std::move(lambda)), simple_(simple),
      depth_(depth) {
    if (simple_ && !f_->datum().dominant(lambda_))
        throw std::invalid_argument("simple module needs a dominant weight");
}

const WeightModule::QComp& WeightModule::qcomp(const NuVec& nu) const {
    auto it = comps_.find(nu);
    if (it != comps_.end()) return it->second;
    if (ht(nu) > depth_) throw std::runtime_error("module depth exceeded");

    const RootDatum& rd = f_->datum();
    const auto& gc = f_->component(nu);
    int dimf = gc.dim();
    QComp qc;
    if (!simple_) {
        for (int k = 0; k < dimf; ++k) {
            qc.qbasis.push_back(k);
            std::vector<PiScalar> unit(dimf);
            unit[k] = PiScalar::one();
            qc.fb_coords.push_back(std::move(unit));
        }
        return comps_.emplace(nu, std::move(qc)).first->second;
    }

    // Rows spanning the depth-nu piece of the submodule generated by the
    // theta_i^{<i,lambda>+1}.
    std::vector<std::vector<PiScalar>> rows;
    for (int i = 0; i < rd.rank(); ++i) {
        int a1 = static_cast<int>(rd.pair_i(i, lambda_)) + 1;
        if (nu[i] < a1) continue;
        NuVec mu = nu;
        mu[i] -= a1;
        const auto& gm = f_->component(mu);
        for (int b = 0; b < gm.dim(); ++b) {
            FElem x;
            std::vector<PiScalar> co(gm.dim());
            co[b] = PiScalar::one();
            x.comps.emplace(mu, std::move(co));
            FElem prod = f_->multiply(x, f_->divided_power(i, a1));
            std::vector<PiScalar> row(dimf);
            auto pit = prod.comps.find(nu);
            if (pit != prod.comps.end())
                for (size_t k = 0; k < pit->second.size(); ++k)
                    row[k] = pit->second[k];
            rows.push_back(std::move(row));
        }
    }

    std::vector<int> order;
    for (int c = dimf - 1; c >= 0; --c) order.push_back(c);
    auto rr = rref_pi(rows, order);

    qc.qbasis = rr.basis_cols;
    std::map<int, int> pos;
    for (size_t j = 0; j < qc.qbasis.size(); ++j) pos[qc.qbasis[j]] = (int)j;
    for (int k = 0; k < dimf; ++k) {
        std::vector<PiScalar> co(qc.qbasis.size());
        if (rr.pivot_of_col[k] < 0) {
            co[pos[k]] = PiScalar::one();
        } else {
            const auto& row = rr.rref_rows[rr.pivot_of_col[k]];
            for (size_t j = 0; j < qc.qbasis.size(); ++j)
                co[j] = -row[qc.qbasis[j]];
        }
        qc.fb_coords.push_back(std::move(co));
    }
    return comps_.emplace(nu, std::move(qc)).first->second;
}

int WeightModule::dim(const NuVec& nu) const {
    return static_cast<int>(qcomp(nu).qbasis.size());
}

const std::vector<int>& WeightModule::basis(const NuVec& nu) const {
    return qcomp(nu).qbasis;
}

const std::vector<PiScalar>& WeightModule::fbasis_coords(const NuVec& nu,
                                                         int k) const {
    return qcomp(nu).fb_coords[k];
}

MVec WeightModule::project(const FElem& x) const {
    MVec r;
    for (const auto& [nu, co] : x.comps) {
        const QComp& qc = qcomp(nu);
        for (size_t k = 0; k < co.size(); ++k) {
            if (co[k].is_zero()) continue;
            for (size_t j = 0; j < qc.qbasis.size(); ++j)
                r.add_in(nu, (int)j, co[k] * qc.fb_coords[k][j]);
        }
    }
    r.prune();
    return r;
}

FElem WeightModule::lift(const NuVec& nu, const std::vector<PiScalar>& coords)
    const {
    const QComp& qc = qcomp(nu);
    FElem r;
    std::vector<PiScalar> co(f_->component(nu).dim());
    for (size_t j = 0; j < coords.size(); ++j) co[qc.qbasis[j]] = coords[j];
    r.comps.emplace(nu, std::move(co));
    r.prune();
    return r;
}

MVec WeightModule::highest() const {
    MVec r;
    r.add_in(NuVec(f_->datum().rank(), 0), 0, PiScalar::one());
    return r;
}

// ---------------------------------------------------------------------------
// Actions
// ---------------------------------------------------------------------------
FElem verma_E(const HalfAlg& f, const Weight& lambda, int i, const FElem& x) {
    const RootDatum& rd = f.datum();
    int di = rd.d(i);
    PiScalar denom = PiScalar::piv(di, di) - PiScalar::v(-di);
    FElem res;
    for (const auto& [nu, co] : x.comps) {
        if (nu[i] == 0) continue;
        FElem xc;
        xc.comps.emplace(nu, co);
        FElem ri = f.diff_right(i, xc);
        FElem ir = f.diff_left(i, xc);
        long long il = rd.pair_i(i, lambda);
        // <i, lambda - nu' + i'>
        long long e = rd.pair_i(i, rd.shift(lambda, nu, -1)) + 2;
        PiScalar c1 = PiScalar::pi_pow((long long)di *
                                       (rd.p_nu(nu) - rd.parity(i))) *
                      PiScalar::piv(di * il, (int)(di * il));
        PiScalar c2 = PiScalar::v((int)(-di * e));
        FElem term = ri * (c1 / denom) - ir * (c2 / denom);
        res = res + term;
    }
    res.prune();
    return res;
}

namespace {

MVec act_letter_plain(const WeightModule& m, const ULetter& l, const MVec& x) {
    const HalfAlg& f = m.half();
    const RootDatum& rd = f.datum();
    MVec r;
    switch (l.kind) {
        case 'F': {
            for (const auto& [nu, co] : x.comps) {
                NuVec target = nu;
                target[l.i] += l.n;
                if (ht(target) > m.depth())
                    throw std::runtime_error("module depth exceeded");
                FElem xf = m.lift(nu, co);
                FElem prod = f.multiply(f.divided_power(l.i, l.n), xf);
                r = r + m.project(prod);
            }
            break;
        }
        case 'E': {
            for (const auto& [nu, co] : x.comps) {
                FElem xf = m.lift(nu, co);
                for (int k = 0; k < l.n; ++k)
                    xf = verma_E(f, m.lambda(), l.i, xf);
                if (l.n > 1)
                    xf = xf * (PiScalar::one() / qfact(l.n, rd.d(l.i)));
                r = r + m.project(xf);
            }
            break;
        }
        case 'K':
        case 'J': {
            for (const auto& [nu, co] : x.comps) {
                long long e = rd.pair(l.mu, rd.shift(m.lambda(), nu, -1));
                PiScalar s = (l.kind == 'K') ? PiScalar::v((int)e)
                                             : PiScalar::pi_pow(e);
                for (size_t k = 0; k < co.size(); ++k)
                    r.add_in(nu, (int)k, co[k] * s);
            }
            break;
        }
        default:
            throw std::invalid_argument("unknown generator letter");
    }
    r.prune();
    return r;
}

}  // namespace

MVec act_letter(const WeightModule& m, bool twisted, const ULetter& l,
                const MVec& x) {
    if (!twisted) return act_letter_plain(m, l, x);
    UElem img = apply_auto(m.half().datum(), AutoKind::Omega, UElem::gen(l));
    MVec r;
    for (const auto& t : img.terms) {
        MVec y = x;
        for (auto it = t.word.rbegin(); it != t.word.rend(); ++it)
            y = act_letter_plain(m, *it, y);
        r = r + y * t.c;
    }
    return r;
}

MVec act(const WeightModule& m, bool twisted, const UElem& u, const MVec& x) {
    MVec r;
    for (const auto& t : u.terms) {
        MVec y = x;
        for (auto it = t.word.rbegin(); it != t.word.rend(); ++it)
            y = act_letter(m, twisted, *it, y);
        r = r + y * t.c;
    }
    return r;
}

// ---------------------------------------------------------------------------
// Polarization
// ---------------------------------------------------------------------------
const std::vector<std::vector<PiScalar>>& WeightModule::pol_gram(
    const NuVec& nu) const {
    auto it = pol_.find(nu);
    if (it != pol_.end()) return it->second;

    const RootDatum& rd = f_->datum();
    int n = dim(nu);
    std::vector<std::vector<PiScalar>> g(n, std::vector<PiScalar>(n));
    if (ht(nu) == 0) {
        if (n > 0) g[0][0] = PiScalar::one();
        return pol_.emplace(nu, std::move(g)).first->second;
    }

    const auto& gc = f_->component(nu);
    const QComp& qc = qcomp(nu);
    for (int k = 0; k < n; ++k) {
        // Basis vector k is the image of the f word w = theta_i * rest.
        const Word& w = gc.basis_word(qc.qbasis[k]);
        int i = w[0];
        Word rest(w.begin() + 1, w.end());
        NuVec sub = nu;
        sub[i] -= 1;
        MVec mrest = project(f_->from_word(rest));
        const auto& gsub = pol_gram(sub);
        // (F_i m_rest, e_l) = v_i^{-1} (m_rest, Kt_i E_i e_l)
        int di = rd.d(i);
        long long kexp =
            di * rd.pair_i(i, rd.shift(lambda_, sub, -1)) - di;
        for (int l = 0; l < n; ++l) {
            MVec el;
            el.add_in(nu, l, PiScalar::one());
            MVec z = act_letter(*this, false, ULetter{'E', i, 1, {}}, el);
            PiScalar val;
            auto zit = z.comps.find(sub);
            auto mit = mrest.comps.find(sub);
            if (zit != z.comps.end() && mit != mrest.comps.end()) {
                for (size_t a = 0; a < mit->second.size(); ++a)
                    for (size_t b = 0; b < zit->second.size(); ++b)
                        val += mit->second[a] * zit->second[b] * gsub[a][b];
            }
            g[k][l] = val * PiScalar::v((int)kexp);
        }
    }
    return pol_.emplace(nu, std::move(g)).first->second;
}

PiScalar polarization(const WeightModule& m, const MVec& x, const MVec& y) {
    PiScalar r;
    for (const auto& [nu, xc] : x.comps) {
        auto it = y.comps.find(nu);
        if (it == y.comps.end()) continue;
        const auto& g = m.pol_gram(nu);
        for (size_t a = 0; a < xc.size(); ++a)
            for (size_t b = 0; b < it->second.size(); ++b)
                r += xc[a] * it->second[b] * g[a][b];
    }
    return r;
}

// ---------------------------------------------------------------------------
// TVec
// ---------------------------------------------------------------------------
bool TVec::is_zero() const {
    for (const auto& [key, mat] : comps)
        for (const auto& row : mat)
            for (const auto& c : row)
                if (!c.is_zero()) return false;
    return true;
}

TVec TVec::operator+(const TVec& o) const {
    TVec r = *this;
    for (const auto& [key, mat] : o.comps) {
        auto it = r.comps.find(key);
        if (it == r.comps.end()) {
            r.comps.emplace(key, mat);
        } else {
            for (size_t a = 0; a < mat.size(); ++a)
                for (size_t b = 0; b < mat[a].size(); ++b)
                    it->second[a][b] += mat[a][b];
        }
    }
    r.prune();
    return r;
}

TVec TVec::operator-(const TVec& o) const {
    return *this + o * (-PiScalar::one());
}

TVec TVec::operator*(const PiScalar& s) const {
    TVec r = *this;
    for (auto& [key, mat] : r.comps)
        for (auto& row : mat)
            for (auto& c : row) c *= s;
    r.prune();
    return r;
}

bool TVec::operator==(const TVec& o) const { return (*this - o).is_zero(); }

void TVec::add_in(const NuVec& n1, const NuVec& n2, int k, int l,
                  const PiScalar& c, int d1, int d2) {
    auto& mat = comps[{n1, n2}];
    if (mat.empty())
        mat.assign(d1, std::vector<PiScalar>(d2));
    mat[k][l] += c;
}

void TVec::prune() {
    for (auto it = comps.begin(); it != comps.end();) {
        bool z = true;
        for (const auto& row : it->second)
            for (const auto& c : row) z = z && c.is_zero();
        it = z ? comps.erase(it) : std::next(it);
    }
}

// ---------------------------------------------------------------------------
// delta_terms
// ---------------------------------------------------------------------------
std::vector<std::tuple<UElem, UElem, int>> delta_terms(const RootDatum& rd,
                                                       int s, const ULetter& l,
                                                       bool barred) {
    const UElem one = UElem::one();
    if (l.kind == 'K') {
        UElem k = barred ? UElem::J(l.mu) * UElem::K(neg_w(l.mu))
                         : UElem::K(l.mu);
        return {{k, k, 0}};
    }
    if (l.kind == 'J') {
        UElem j = UElem::J(l.mu);
        return {{j, j, 0}};
    }
    if (l.n != 1)
        throw std::invalid_argument("delta_terms expects exponent 1 letters");

    int i = l.i;
    int p = rd.parity(i);
    NuVec ei(rd.rank(), 0);
    ei[i] = 1;
    UElem E = UElem::E(i), F = UElem::F(i);
    UElem Kp = u_ktilde(rd, ei, +1), Km = u_ktilde(rd, ei, -1);
    UElem Jt = u_jtilde(rd, ei);
    // bar(Kt_i) = Jt_i Kt_{-i}; bar(Jt_i Kt_i) = Kt_{-i}; etc.
    UElem bKp = Jt * Km, bKm = Jt * Kp, JKp = Jt * Kp, JKm = Jt * Km;

    if (l.kind == 'E') {
        switch (s) {
            case 1:
                return {{E, one, 0}, {barred ? Km : JKp, E, p}};
            case 2:
                return {{E, one, 0}, {barred ? bKp : Kp, E, p}};
            case 3:
                return {{E, barred ? JKp : Km, 0}, {one, E, p}};
            case 4:
                return {{E, barred ? JKp : Km, 0}, {Jt, E, p}};
        }
    } else if (l.kind == 'F') {
        switch (s) {
            case 1:
                return {{F, barred ? JKp : Km, 0}, {one, F, p}};
            case 2:
                return {{F, barred ? JKp : Km, 0}, {Jt, F, p}};
            case 3:
                return {{F, one, 0}, {barred ? Km : JKp, F, p}};
            case 4:
                return {{F, one, 0}, {barred ? bKp : Kp, F, p}};
        }
    }
    throw std::invalid_argument("bad coproduct index or letter");
}

// ---------------------------------------------------------------------------
// TensorModule
// ---------------------------------------------------------------------------
TensorModule::TensorModule(std::shared_ptr<const WeightModule> first,
                           bool first_twisted,
                           std::shared_ptr<const WeightModule> second,
                           bool second_twisted, int s)
    : m1_(std::move(first)), m2_(std::move(second)), tw1_(first_twisted),
      tw2_(second_twisted), s_(s) {
    if (s < 1 || s > 4) throw std::invalid_argument("coproduct index");
}

TVec TensorModule::highest() const {
    TVec r;
    NuVec z1(m1_->half().datum().rank(), 0);
    r.add_in(z1, z1, 0, 0, PiScalar::one(), 1, 1);
    return r;
}

TVec TensorModule::pure(const MVec& x, const MVec& y) const {
    TVec r;
    for (const auto& [n1, c1] : x.comps)
        for (const auto& [n2, c2] : y.comps)
            for (size_t a = 0; a < c1.size(); ++a)
                for (size_t b = 0; b < c2.size(); ++b)
                    r.add_in(n1, n2, (int)a, (int)b, c1[a] * c2[b],
                             (int)c1.size(), (int)c2.size());
    r.prune();
    return r;
}

TVec TensorModule::act_letter_t(const ULetter& l, const TVec& x,
                                bool barred) const {
    if ((l.kind == 'E' || l.kind == 'F') && l.n > 1) {
        // Delta is an algebra map: expand the divided power.
        TVec y = x;
        ULetter single = l;
        single.n = 1;
        for (int k = 0; k < l.n; ++k) y = act_letter_t(single, y, barred);
        return y * (PiScalar::one() /
                    qfact(l.n, m1_->half().datum().d(l.i)));
    }
    const RootDatum& rd = m1_->half().datum();
    auto terms = delta_terms(rd, s_, l, barred);
    TVec r;
    for (const auto& [key, mat] : x.comps) {
        const auto& [n1, n2] = key;
        int d1 = (int)mat.size();
        int d2 = d1 ? (int)mat[0].size() : 0;
        for (const auto& [A, B, pB] : terms) {
            PiScalar sign = PiScalar::pi_pow((long long)pB * rd.p_nu(n1));
            // Columns: apply A to the column vectors, B to unit vectors.
            for (int b = 0; b < d2; ++b) {
                MVec col;
                bool nz = false;
                for (int a = 0; a < d1; ++a) {
                    if (!mat[a][b].is_zero()) nz = true;
                    col.add_in(n1, a, mat[a][b]);
                }
                if (!nz) continue;
                col.prune();
                MVec y1 = coverquant::act(*m1_, tw1_, A, col);
                MVec eb;
                eb.add_in(n2, b, PiScalar::one());
                MVec y2 = coverquant::act(*m2_, tw2_, B, eb);
                for (const auto& [p1, c1] : y1.comps)
                    for (const auto& [p2, c2] : y2.comps)
                        for (size_t a = 0; a < c1.size(); ++a)
                            for (size_t bb = 0; bb < c2.size(); ++bb)
                                r.add_in(p1, p2, (int)a, (int)bb,
                                         sign * c1[a] * c2[bb],
                                         m1_->dim(p1), m2_->dim(p2));
            }
        }
    }
    r.prune();
    return r;
}

TVec TensorModule::act_word(const std::vector<ULetter>& w, const TVec& x,
                            bool barred) const {
    TVec y = x;
    for (auto it = w.rbegin(); it != w.rend(); ++it)
        y = act_letter_t(*it, y, barred);
    return y;
}

TVec TensorModule::act(const UElem& u, const TVec& w) const {
    TVec r;
    for (const auto& t : u.terms) r = r + act_word(t.word, w, false) * t.c;
    return r;
}

TVec TensorModule::act_barred(const UElem& u, const TVec& w) const {
    TVec r;
    for (const auto& t : u.terms)
        r = r + act_word(t.word, w, true) * t.c.bar();
    return r;
}

// ---------------------------------------------------------------------------
// Structural maps
// ---------------------------------------------------------------------------
PiScalar omega_square_factor(const RootDatum& rd, const Weight& lambda,
                             const NuVec& nu) {
    return rd.pi_nu(nu) * PiScalar::pi_pow(rd.pair(rd.tilde(nu), lambda));
}

PiScalar jpolarization(const TensorModule& n, const TVec& w, const TVec& wp) {
    const RootDatum& rd = n.first().half().datum();
    PiScalar r;
    for (const auto& [key, mat] : w.comps) {
        auto it = wp.comps.find(key);
        if (it == wp.comps.end()) continue;
        const auto& [n1, n2] = key;
        const auto& g1 = n.first().pol_gram(n1);
        const auto& g2 = n.second().pol_gram(n2);
        PiScalar pref = rd.pi_nu(n2) * PiScalar::pi_pow(rd.pair(
                            rd.tilde(n2), n.second().lambda()));
        const auto& matp = it->second;
        for (size_t a = 0; a < mat.size(); ++a)
            for (size_t b = 0; b < mat[a].size(); ++b)
                for (size_t ap = 0; ap < matp.size(); ++ap)
                    for (size_t bp = 0; bp < matp[ap].size(); ++bp)
                        r += pref * mat[a][b] * matp[ap][bp] * g1[a][ap] *
                             g2[b][bp];
    }
    return r;
}

}  // namespace coverquant
