#include "coverquant/rootdatum.hpp"

#include <stdexcept>

namespace coverquant {

long long RootDatum::pair(const Coweight& mu, const Weight& lam) const {
    if (static_cast<int>(mu.size()) != y_rank ||
        static_cast<int>(lam.size()) != x_rank)
        throw std::invalid_argument("pair: dimension mismatch");
    long long acc = 0;
    for (int m = 0; m < y_rank; ++m)
        for (int k = 0; k < x_rank; ++k)
            acc += static_cast<long long>(mu[m]) * pairing[m][k] * lam[k];
    return acc;
}

Weight RootDatum::nu_to_x(const NuVec& nu) const {
    Weight out(x_rank, 0);
    for (int i = 0; i < rank(); ++i)
        for (int k = 0; k < x_rank; ++k) out[k] += nu[i] * embed_x[i][k];
    return out;
}

Coweight RootDatum::tilde(const NuVec& nu) const {
    Coweight out(y_rank, 0);
    for (int i = 0; i < rank(); ++i)
        for (int m = 0; m < y_rank; ++m) out[m] += d(i) * nu[i] * embed_y[i][m];
    return out;
}

long long RootDatum::dot_nn(const NuVec& nu, const NuVec& mu) const {
    long long acc = 0;
    for (int i = 0; i < rank(); ++i)
        for (int j = 0; j < rank(); ++j)
            acc += static_cast<long long>(nu[i]) * cd.dot[i][j] * mu[j];
    return acc;
}

int RootDatum::p_nu(const NuVec& nu) const {
    int acc = 0;
    for (int i = 0; i < rank(); ++i) acc += nu[i] * parity(i);
    return ((acc % 2) + 2) % 2;
}

PiScalar RootDatum::v_nu(const NuVec& nu) const {
    int e = 0;
    for (int i = 0; i < rank(); ++i) e += d(i) * nu[i];
    return PiScalar::v(e);
}

PiScalar RootDatum::pi_nu(const NuVec& nu) const {
    long long e = 0;
    for (int i = 0; i < rank(); ++i) e += static_cast<long long>(d(i)) * nu[i];
    return PiScalar::pi_pow(e);
}

Weight RootDatum::shift(const Weight& lam, const NuVec& nu, int sign) const {
    Weight nx = nu_to_x(nu);
    Weight out = lam;
    for (int k = 0; k < x_rank; ++k) out[k] += sign * nx[k];
    return out;
}

std::vector<std::string> validate(const CartanDatum& cd) {
    std::vector<std::string> errs;
    int r = cd.rank;
    if (r <= 0) {
        errs.push_back("empty index set");
        return errs;
    }
    if (static_cast<int>(cd.dot.size()) != r ||
        static_cast<int>(cd.parity.size()) != r) {
        errs.push_back("dimension mismatch in dot/parity tables");
        return errs;
    }
    for (int i = 0; i < r; ++i)
        for (int j = 0; j < r; ++j)
            if (cd.dot[i][j] != cd.dot[j][i])
                errs.push_back("dot matrix not symmetric at (" +
                               std::to_string(i) + "," + std::to_string(j) + ")");
    for (int i = 0; i < r; ++i) {
        if (cd.dot[i][i] <= 0 || cd.dot[i][i] % 2 != 0)
            errs.push_back("(a): i.i not a positive even integer at i=" +
                           std::to_string(i));
    }
    for (int i = 0; i < r; ++i) {
        if (cd.dot[i][i] <= 0) continue;
        for (int j = 0; j < r; ++j) {
            if (i == j) continue;
            if ((2 * cd.dot[i][j]) % cd.dot[i][i] != 0) {
                errs.push_back("(b): 2(i.j)/(i.i) not an integer at (" +
                               std::to_string(i) + "," + std::to_string(j) + ")");
                continue;
            }
            int a = 2 * cd.dot[i][j] / cd.dot[i][i];
            if (a > 0)
                errs.push_back("(b): a_ij > 0 at (" + std::to_string(i) + "," +
                               std::to_string(j) + ")");
            if (cd.parity[i] == 1 && a % 2 != 0)
                errs.push_back("(c): odd i with odd a_ij at (" +
                               std::to_string(i) + "," + std::to_string(j) + ")");
        }
    }
    for (int i = 0; i < r; ++i) {
        if (cd.parity[i] != 0 && cd.parity[i] != 1)
            errs.push_back("parity not in {0,1} at i=" + std::to_string(i));
        else if (cd.dot[i][i] > 0 && cd.dot[i][i] % 2 == 0 &&
                 ((cd.dot[i][i] / 2) % 2 + 2) % 2 != cd.parity[i])
            errs.push_back("(d): d_i != p(i) mod 2 at i=" + std::to_string(i));
    }
    bool any_odd = false;
    for (int i = 0; i < r; ++i) any_odd = any_odd || cd.parity[i] == 1;
    if (!any_odd) errs.push_back("no odd index (datum is purely even)");
    return errs;
}

namespace {

// Rank of an integer matrix (over Q), by fraction-free elimination.
int int_rank(std::vector<std::vector<long long>> m) {
    int rows = static_cast<int>(m.size());
    if (rows == 0) return 0;
    int cols = static_cast<int>(m[0].size());
    int rank = 0;
    for (int c = 0; c < cols && rank < rows; ++c) {
        int piv = -1;
        for (int r2 = rank; r2 < rows; ++r2)
            if (m[r2][c] != 0) {
                piv = r2;
                break;
            }
        if (piv < 0) continue;
        std::swap(m[rank], m[piv]);
        for (int r2 = rank + 1; r2 < rows; ++r2) {
            if (m[r2][c] == 0) continue;
            long long a = m[rank][c], b = m[r2][c];
            for (int c2 = 0; c2 < cols; ++c2)
                m[r2][c2] = m[r2][c2] * a - m[rank][c2] * b;
        }
        ++rank;
    }
    return rank;
}

}  // namespace

std::vector<std::string> validate(const RootDatum& rd) {
    std::vector<std::string> errs = validate(rd.cd);
    int r = rd.rank();
    if (static_cast<int>(rd.embed_y.size()) != r ||
        static_cast<int>(rd.embed_x.size()) != r) {
        errs.push_back("embedding tables have wrong rank");
        return errs;
    }
    // <i, j'> must equal a_ij.
    for (int i = 0; i < r; ++i)
        for (int j = 0; j < r; ++j) {
            long long got = rd.pair(rd.embed_y[i], rd.embed_x[j]);
            if (got != rd.cd.a(i, j))
                errs.push_back("<i,j'> != a_ij at (" + std::to_string(i) + "," +
                               std::to_string(j) + ")");
        }
    // Y-regularity: the coroots are linearly independent in Y.
    {
        std::vector<std::vector<long long>> m;
        for (int i = 0; i < r; ++i)
            m.emplace_back(rd.embed_y[i].begin(), rd.embed_y[i].end());
        if (int_rank(m) != r) errs.push_back("datum is not Y-regular");
    }
    // X-regularity (needed by the twistor layer): roots independent in X.
    {
        std::vector<std::vector<long long>> m;
        for (int i = 0; i < r; ++i)
            m.emplace_back(rd.embed_x[i].begin(), rd.embed_x[i].end());
        if (int_rank(m) != r) errs.push_back("datum is not X-regular");
    }
    return errs;
}

RootDatum builtin_datum(const std::string& name) {
    RootDatum rd;
    if (name == "osp(1|2)") {
        rd.cd.rank = 1;
        rd.cd.dot = {{2}};
        rd.cd.parity = {1};
        rd.x_rank = rd.y_rank = 1;
        rd.pairing = {{1}};
        rd.embed_y = {{1}};
        rd.embed_x = {{2}};
    } else if (name == "osp(1|4)") {
        // B2 with the short root odd: d = (1,2), a_12 = -2, a_21 = -1.
        rd.cd.rank = 2;
        rd.cd.dot = {{2, -2}, {-2, 4}};
        rd.cd.parity = {1, 0};
        rd.x_rank = rd.y_rank = 2;
        rd.pairing = {{1, 0}, {0, 1}};  // X = fundamental weights, Y = coroots
        rd.embed_y = {{1, 0}, {0, 1}};
        // i' = i-th column of the Cartan matrix (a_ji) in this basis.
        rd.embed_x = {{2, -1}, {-2, 2}};
    } else {
        throw std::invalid_argument("unknown builtin datum: " + name);
    }
    auto errs = validate(rd);
    if (!errs.empty())
        throw std::logic_error("builtin datum fails validation: " + errs.front());
    return rd;
}

Weight add_w(const Weight& a, const Weight& b) {
    Weight r = a;
    for (size_t k = 0; k < r.size(); ++k) r[k] += b[k];
    return r;
}
Weight sub_w(const Weight& a, const Weight& b) {
    Weight r = a;
    for (size_t k = 0; k < r.size(); ++k) r[k] -= b[k];
    return r;
}
Weight neg_w(const Weight& a) {
    Weight r = a;
    for (auto& x : r) x = -x;
    return r;
}
NuVec add_nu(const NuVec& a, const NuVec& b) {
    NuVec r = a;
    for (size_t k = 0; k < r.size(); ++k) r[k] += b[k];
    return r;
}
NuVec sub_nu(const NuVec& a, const NuVec& b) {
    NuVec r = a;
    for (size_t k = 0; k < r.size(); ++k) r[k] -= b[k];
    return r;
}

}  // namespace coverquant
