#include "coverquant/halfalg.hpp"

#include <stdexcept>

namespace coverquant {

// ---------------------------------------------------------------------------
// FElem
// ---------------------------------------------------------------------------
bool FElem::is_zero() const {
    for (auto& [nu, c] : comps)
        for (auto& x : c)
            if (!x.is_zero()) return false;
    return true;
}

NuVec FElem::weight() const {
    const NuVec* found = nullptr;
    for (auto& [nu, c] : comps) {
        bool nz = false;
        for (auto& x : c) nz = nz || !x.is_zero();
        if (nz) {
            if (found) throw std::logic_error("FElem::weight: not homogeneous");
            found = &nu;
        }
    }
    if (!found) throw std::logic_error("FElem::weight: zero element");
    return *found;
}

FElem FElem::operator+(const FElem& o) const {
    FElem r = *this;
    for (auto& [nu, c] : o.comps) {
        auto& dst = r.comps[nu];
        if (dst.empty()) dst.assign(c.size(), PiScalar::zero());
        for (size_t k = 0; k < c.size(); ++k) dst[k] += c[k];
    }
    r.prune();
    return r;
}

FElem FElem::operator-() const {
    FElem r = *this;
    for (auto& [nu, c] : r.comps)
        for (auto& x : c) x = -x;
    return r;
}

FElem FElem::operator-(const FElem& o) const { return *this + (-o); }

FElem FElem::operator*(const PiScalar& c) const {
    FElem r = *this;
    for (auto& [nu, cc] : r.comps)
        for (auto& x : cc) x *= c;
    r.prune();
    return r;
}

bool FElem::operator==(const FElem& o) const {
    return (*this - o).is_zero();
}

void FElem::add_in(const NuVec& nu, int k, const PiScalar& c) {
    auto& dst = comps[nu];
    if (static_cast<int>(dst.size()) <= k) dst.resize(k + 1, PiScalar::zero());
    dst[k] += c;
}

void FElem::prune() {
    for (auto it = comps.begin(); it != comps.end();) {
        bool nz = false;
        for (auto& x : it->second) nz = nz || !x.is_zero();
        it = nz ? std::next(it) : comps.erase(it);
    }
}

// ---------------------------------------------------------------------------
// Row reduction over the componentwise fraction field.
// ---------------------------------------------------------------------------
namespace {

struct FieldRref {
    std::vector<int> pivot_cols;                    // in elimination order
    std::vector<std::vector<RatFunc>> rows;         // matching rref rows
};

FieldRref rref_field(std::vector<std::vector<RatFunc>> rows,
                     const std::vector<int>& col_order) {
    FieldRref out;
    std::vector<size_t> picks;
    std::vector<bool> used(rows.size(), false);
    for (int c : col_order) {
        int pick = -1;
        for (size_t r = 0; r < rows.size(); ++r)
            if (!used[r] && !rows[r][c].is_zero()) {
                pick = static_cast<int>(r);
                break;
            }
        if (pick < 0) continue;
        used[static_cast<size_t>(pick)] = true;
        // Normalize the pivot to 1.
        RatFunc inv = RatFunc::one() / rows[pick][c];
        for (auto& x : rows[pick]) x *= inv;
        // Eliminate the column everywhere else.
        for (size_t r = 0; r < rows.size(); ++r) {
            if (static_cast<int>(r) == pick || rows[r][c].is_zero()) continue;
            RatFunc f = rows[r][c];
            for (size_t k = 0; k < rows[r].size(); ++k)
                rows[r][k] -= f * rows[pick][k];
        }
        out.pivot_cols.push_back(c);
        picks.push_back(static_cast<size_t>(pick));
    }
    // Snapshot the pivot rows only now: earlier pivot rows keep being
    // modified by later eliminations, so copying them inside the loop would
    // leave stale entries at later pivot columns.
    for (size_t pick : picks) out.rows.push_back(std::move(rows[pick]));
    return out;
}

}  // namespace

RrefResult rref_pi(std::vector<std::vector<PiScalar>> rows,
                   const std::vector<int>& col_order) {
    size_t ncols = rows.empty() ? col_order.size() : rows[0].size();
    std::vector<std::vector<RatFunc>> rp, rm;
    for (auto& row : rows) {
        std::vector<RatFunc> a, b;
        for (auto& x : row) {
            a.push_back(x.plus());
            b.push_back(x.minus());
        }
        rp.push_back(std::move(a));
        rm.push_back(std::move(b));
    }
    FieldRref fp = rref_field(std::move(rp), col_order);
    FieldRref fm = rref_field(std::move(rm), col_order);
    if (fp.pivot_cols != fm.pivot_cols)
        throw std::logic_error(
            "rref_pi: eps-components disagree on the pivot set");
    RrefResult out;
    out.pivot_of_col.assign(ncols, -1);
    for (size_t r = 0; r < fp.pivot_cols.size(); ++r) {
        out.pivot_of_col[fp.pivot_cols[r]] = static_cast<int>(r);
        out.pivot_col_of_row.push_back(fp.pivot_cols[r]);
        std::vector<PiScalar> row;
        for (size_t k = 0; k < ncols; ++k)
            row.emplace_back(fp.rows[r][k], fm.rows[r][k]);
        out.rref_rows.push_back(std::move(row));
    }
    for (size_t c = 0; c < ncols; ++c)
        if (out.pivot_of_col[c] < 0) out.basis_cols.push_back(static_cast<int>(c));
    return out;
}

// ---------------------------------------------------------------------------
// HalfAlg
// ---------------------------------------------------------------------------
NuVec HalfAlg::word_weight(const Word& w) const {
    NuVec nu(rd_.rank(), 0);
    for (auto g : w) nu[g] += 1;
    return nu;
}

PiScalar HalfAlg::form_const(int i) const {
    int d = rd_.d(i);
    return PiScalar::one() /
           (PiScalar::one() - PiScalar::pi_pow(d) * PiScalar::v(2 * d));
}

WordCombo HalfAlg::serre_element(int i, int j) const {
    if (i == j) throw std::invalid_argument("serre_element: i == j");
    int b = 1 - rd_.cd.a(i, j);
    int di = rd_.d(i);
    WordCombo wc;
    for (int k = 0; k <= b; ++k) {
        long long e = static_cast<long long>(k) * (k - 1) / 2 * rd_.parity(i) +
                      static_cast<long long>(k) * rd_.parity(i) * rd_.parity(j);
        PiScalar c = PiScalar::pi_pow(e) * qbinom(b, k, di);
        if (k % 2 != 0) c = -c;
        Word w;
        for (int s = 0; s < b - k; ++s) w.push_back(static_cast<uint8_t>(i));
        w.push_back(static_cast<uint8_t>(j));
        for (int s = 0; s < k; ++s) w.push_back(static_cast<uint8_t>(i));
        wc.terms.emplace_back(c, w);
    }
    return wc;
}

namespace {

void enumerate_words(NuVec rem, Word& cur, std::vector<Word>& out) {
    bool done = true;
    for (size_t i = 0; i < rem.size(); ++i) {
        if (rem[i] > 0) {
            done = false;
            rem[i] -= 1;
            cur.push_back(static_cast<uint8_t>(i));
            enumerate_words(rem, cur, out);
            cur.pop_back();
            rem[i] += 1;
        }
    }
    if (done) out.push_back(cur);
}

}  // namespace

void HalfAlg::build_component(const NuVec& nu) const {
    GradedComponent gc;
    gc.nu = nu;
    Word cur;
    enumerate_words(nu, cur, gc.words);
    for (size_t w = 0; w < gc.words.size(); ++w)
        gc.word_index[gc.words[w]] = static_cast<int>(w);
    int nwords = static_cast<int>(gc.words.size());

    // Two-sided span of the Serre elements inside this weight.
    std::vector<std::vector<PiScalar>> rows;
    for (int i = 0; i < rd_.rank(); ++i) {
        for (int j = 0; j < rd_.rank(); ++j) {
            if (i == j) continue;
            int b = 1 - rd_.cd.a(i, j);
            NuVec snu(rd_.rank(), 0);
            snu[i] = b;
            snu[j] += 1;
            // Remaining weight distributed over the left/right cofactors.
            NuVec rem = sub_nu(nu, snu);
            bool ok = true;
            for (int x : rem) ok = ok && x >= 0;
            if (!ok) continue;
            WordCombo s = serre_element(i, j);
            // Enumerate all splittings rem = |x| + |y| and all words x, y.
            // Iterate over x-weights by odometer.
            NuVec xw(rd_.rank(), 0);
            for (;;) {
                NuVec yw = sub_nu(rem, xw);
                std::vector<Word> xs, ys;
                Word tmp;
                enumerate_words(xw, tmp, xs);
                enumerate_words(yw, tmp, ys);
                for (auto& x : xs)
                    for (auto& y : ys) {
                        std::vector<PiScalar> row(
                            static_cast<size_t>(nwords), PiScalar::zero());
                        for (auto& [c, w] : s.terms) {
                            Word full = x;
                            full.insert(full.end(), w.begin(), w.end());
                            full.insert(full.end(), y.begin(), y.end());
                            row[static_cast<size_t>(
                                gc.word_index.at(full))] += c;
                        }
                        rows.push_back(std::move(row));
                    }
                // advance odometer over 0 <= xw <= rem
                int k = 0;
                while (k < rd_.rank()) {
                    if (xw[k] < rem[k]) {
                        xw[k] += 1;
                        for (int l = 0; l < k; ++l) xw[l] = 0;
                        break;
                    }
                    ++k;
                }
                if (k == rd_.rank()) break;
            }
        }
    }

    if (rows.empty()) {
        gc.basis.resize(static_cast<size_t>(nwords));
        for (int w = 0; w < nwords; ++w) gc.basis[static_cast<size_t>(w)] = w;
        gc.expand.assign(static_cast<size_t>(nwords), {});
        for (int w = 0; w < nwords; ++w) {
            gc.expand[static_cast<size_t>(w)].assign(
                static_cast<size_t>(nwords), PiScalar::zero());
            gc.expand[static_cast<size_t>(w)][static_cast<size_t>(w)] =
                PiScalar::one();
        }
        comps_[nu] = std::move(gc);
        return;
    }

    // Pivot on lex-largest words first so the basis is the set of
    // lex-smallest surviving words.
    std::vector<int> col_order;
    for (int c = nwords - 1; c >= 0; --c) col_order.push_back(c);
    RrefResult rr = rref_pi(std::move(rows), col_order);

    gc.basis = rr.basis_cols;
    std::map<int, int> basis_pos;
    for (size_t k = 0; k < gc.basis.size(); ++k)
        basis_pos[gc.basis[k]] = static_cast<int>(k);

    gc.expand.assign(static_cast<size_t>(nwords), {});
    for (int w = 0; w < nwords; ++w) {
        auto& row = gc.expand[static_cast<size_t>(w)];
        row.assign(gc.basis.size(), PiScalar::zero());
        int piv = rr.pivot_of_col[static_cast<size_t>(w)];
        if (piv < 0) {
            row[static_cast<size_t>(basis_pos.at(w))] = PiScalar::one();
        } else {
            // Word w is a pivot: its rref row reads w + sum_j c_j b_j = 0.
            auto& rrow = rr.rref_rows[static_cast<size_t>(piv)];
            for (size_t k = 0; k < gc.basis.size(); ++k)
                row[k] = -rrow[static_cast<size_t>(gc.basis[k])];
        }
    }
    comps_[nu] = std::move(gc);
}

const GradedComponent& HalfAlg::component(const NuVec& nu) const {
    if (ht(nu) > height_bound_)
        throw std::out_of_range("HalfAlg: height bound exceeded");
    auto it = comps_.find(nu);
    if (it == comps_.end()) {
        build_component(nu);
        it = comps_.find(nu);
    }
    return it->second;
}

FElem HalfAlg::one() const {
    FElem r;
    NuVec nu(rd_.rank(), 0);
    r.add_in(nu, 0, PiScalar::one());
    return r;
}

FElem HalfAlg::theta(int i) const {
    Word w{static_cast<uint8_t>(i)};
    return from_word(w);
}

FElem HalfAlg::from_word(const Word& w) const {
    const GradedComponent& gc = component(word_weight(w));
    FElem r;
    auto& row = gc.expand[static_cast<size_t>(gc.word_index.at(w))];
    for (size_t k = 0; k < row.size(); ++k)
        if (!row[k].is_zero()) r.add_in(gc.nu, static_cast<int>(k), row[k]);
    return r;
}

FElem HalfAlg::from_combo(const WordCombo& wc) const {
    FElem r;
    for (auto& [c, w] : wc.terms) {
        if (c.is_zero()) continue;
        const GradedComponent& gc = component(word_weight(w));
        auto& row = gc.expand[static_cast<size_t>(gc.word_index.at(w))];
        for (size_t k = 0; k < row.size(); ++k)
            if (!row[k].is_zero())
                r.add_in(gc.nu, static_cast<int>(k), c * row[k]);
    }
    r.prune();
    return r;
}

FElem HalfAlg::divided_power(int i, int n) const {
    Word w(static_cast<size_t>(n), static_cast<uint8_t>(i));
    return from_word(w) * (PiScalar::one() / qfact(n, rd_.d(i)));
}

FElem HalfAlg::multiply(const FElem& x, const FElem& y) const {
    FElem r;
    for (auto& [nu1, c1] : x.comps) {
        const GradedComponent& g1 = component(nu1);
        for (auto& [nu2, c2] : y.comps) {
            const GradedComponent& g2 = component(nu2);
            NuVec target = add_nu(nu1, nu2);
            const GradedComponent& gt = component(target);
            for (size_t k1 = 0; k1 < c1.size(); ++k1) {
                if (c1[k1].is_zero()) continue;
                for (size_t k2 = 0; k2 < c2.size(); ++k2) {
                    if (c2[k2].is_zero()) continue;
                    Word w = g1.basis_word(static_cast<int>(k1));
                    const Word& w2 = g2.basis_word(static_cast<int>(k2));
                    w.insert(w.end(), w2.begin(), w2.end());
                    auto& row =
                        gt.expand[static_cast<size_t>(gt.word_index.at(w))];
                    PiScalar c = c1[k1] * c2[k2];
                    for (size_t k = 0; k < row.size(); ++k)
                        if (!row[k].is_zero())
                            r.add_in(target, static_cast<int>(k), c * row[k]);
                }
            }
        }
    }
    r.prune();
    return r;
}

FElem HalfAlg::bar_f(const FElem& x) const {
    FElem r = x;
    for (auto& [nu, c] : r.comps)
        for (auto& s : c) s = s.bar();
    return r;
}

FElem HalfAlg::dagger_f(const FElem& x) const {
    FElem r = x;
    for (auto& [nu, c] : r.comps)
        for (auto& s : c) s = s.dagger();
    return r;
}

WordCombo HalfAlg::diff_left_word(int i, const Word& w) const {
    auto key = std::make_pair(i, w);
    auto it = diff_left_cache_.find(key);
    if (it != diff_left_cache_.end()) return it->second;
    WordCombo out;
    if (!w.empty()) {
        int j = w.front();
        Word rest(w.begin() + 1, w.end());
        if (j == i) out.terms.emplace_back(PiScalar::one(), rest);
        // _ir(theta_j y) = delta_ij y + pi^{p(j)p(i)} v^{-i.j} theta_j _ir(y)
        PiScalar c = PiScalar::pi_pow(rd_.parity(j) * rd_.parity(i)) *
                     PiScalar::v(-rd_.cd.dot[i][j]);
        for (auto& [cc, ww] : diff_left_word(i, rest).terms) {
            Word full{static_cast<uint8_t>(j)};
            full.insert(full.end(), ww.begin(), ww.end());
            out.terms.emplace_back(c * cc, full);
        }
    }
    diff_left_cache_[key] = out;
    return out;
}

WordCombo HalfAlg::diff_right_word(int i, const Word& w) const {
    auto key = std::make_pair(i, w);
    auto it = diff_right_cache_.find(key);
    if (it != diff_right_cache_.end()) return it->second;
    WordCombo out;
    if (!w.empty()) {
        int j = w.back();
        Word prefix(w.begin(), w.end() - 1);
        if (j == i) out.terms.emplace_back(PiScalar::one(), prefix);
        // r_i(x theta_j) = delta_ij x + pi^{p(j)p(i)} v^{-i.j} r_i(x) theta_j
        // (the twist carries the parity/weight of the *right* cofactor, as
        // forced by r_i = sigma . _ir . sigma for the word-reversal sigma).
        PiScalar c = PiScalar::pi_pow(rd_.parity(j) * rd_.parity(i)) *
                     PiScalar::v(-rd_.cd.dot[i][j]);
        for (auto& [cc, ww] : diff_right_word(i, prefix).terms) {
            Word full = ww;
            full.push_back(static_cast<uint8_t>(j));
            out.terms.emplace_back(c * cc, full);
        }
    }
    diff_right_cache_[key] = out;
    return out;
}

void HalfAlg::wc_scaled_add(FElem& r, const PiScalar& c, const Word& w) const {
    if (c.is_zero()) return;
    const GradedComponent& gc = component(word_weight(w));
    auto& row = gc.expand[static_cast<size_t>(gc.word_index.at(w))];
    for (size_t k = 0; k < row.size(); ++k)
        if (!row[k].is_zero()) r.add_in(gc.nu, static_cast<int>(k), c * row[k]);
}

FElem HalfAlg::basis_elem(const GradedComponent& gc, const NuVec& nu, int l) {
    (void)gc;
    FElem r;
    r.add_in(nu, l, PiScalar::one());
    return r;
}

FElem HalfAlg::diff_left(int i, const FElem& x) const {
    FElem r;
    for (auto& [nu, c] : x.comps) {
        const GradedComponent& gc = component(nu);
        for (size_t k = 0; k < c.size(); ++k) {
            if (c[k].is_zero()) continue;
            WordCombo wc = diff_left_word(i, gc.basis_word(static_cast<int>(k)));
            for (auto& [cc, ww] : wc.terms) wc_scaled_add(r, c[k] * cc, ww);
        }
    }
    r.prune();
    return r;
}

FElem HalfAlg::diff_right(int i, const FElem& x) const {
    FElem r;
    for (auto& [nu, c] : x.comps) {
        const GradedComponent& gc = component(nu);
        for (size_t k = 0; k < c.size(); ++k) {
            if (c[k].is_zero()) continue;
            WordCombo wc =
                diff_right_word(i, gc.basis_word(static_cast<int>(k)));
            for (auto& [cc, ww] : wc.terms) wc_scaled_add(r, c[k] * cc, ww);
        }
    }
    r.prune();
    return r;
}

const std::vector<std::vector<PiScalar>>& HalfAlg::gram(const NuVec& nu) const {
    auto it = gram_.find(nu);
    if (it != gram_.end()) return it->second;
    const GradedComponent& gc = component(nu);
    int n = gc.dim();
    std::vector<std::vector<PiScalar>> G(
        static_cast<size_t>(n),
        std::vector<PiScalar>(static_cast<size_t>(n), PiScalar::zero()));
    if (ht(nu) == 0) {
        G[0][0] = PiScalar::one();
    } else {
        for (int k = 0; k < n; ++k) {
            const Word& w = gc.basis_word(k);
            int i = w.front();
            Word rest(w.begin() + 1, w.end());
            NuVec sub = nu;
            sub[static_cast<size_t>(i)] -= 1;
            const GradedComponent& gsub = component(sub);
            auto& rest_row =
                gsub.expand[static_cast<size_t>(gsub.word_index.at(rest))];
            const auto& Gsub = gram(sub);
            PiScalar ci = form_const(i);
            for (int l = 0; l < n; ++l) {
                // (theta_i rest, e_l) = c_i (rest, _ir(e_l))
                FElem dl = diff_left(i, basis_elem(gc, nu, l));
                PiScalar acc = PiScalar::zero();
                auto dit = dl.comps.find(sub);
                if (dit != dl.comps.end()) {
                    for (size_t a = 0; a < rest_row.size(); ++a) {
                        if (rest_row[a].is_zero()) continue;
                        for (size_t b = 0; b < dit->second.size(); ++b) {
                            if (dit->second[b].is_zero()) continue;
                            acc += rest_row[a] * dit->second[b] * Gsub[a][b];
                        }
                    }
                }
                G[static_cast<size_t>(k)][static_cast<size_t>(l)] = ci * acc;
            }
        }
    }
    gram_[nu] = std::move(G);
    return gram_.at(nu);
}

PiScalar HalfAlg::form_f(const FElem& x, const FElem& y) const {
    PiScalar acc = PiScalar::zero();
    for (auto& [nu, cx] : x.comps) {
        auto it = y.comps.find(nu);
        if (it == y.comps.end()) continue;
        const auto& G = gram(nu);
        for (size_t a = 0; a < cx.size(); ++a) {
            if (cx[a].is_zero()) continue;
            for (size_t b = 0; b < it->second.size(); ++b) {
                if (it->second[b].is_zero()) continue;
                acc += cx[a] * it->second[b] * G[a][b];
            }
        }
    }
    return acc;
}

}  // namespace coverquant
