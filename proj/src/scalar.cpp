#include "coverquant/scalar.hpp"

namespace coverquant {

bool PiScalar::series_integral_from(int minval, int order) const {
    for (const RatFunc* f : {&plus_, &minus_}) {
        if (f->is_zero()) continue;
        if (f->vval().value() < minval) return false;
        for (auto& [e, c] : f->series(order)) {
            (void)e;
            if (boost::multiprecision::denominator(c) != 1) return false;
        }
    }
    return true;
}

namespace {

// v -> t^{-1} v on one integral Laurent polynomial: splits into the real and
// imaginary Gaussian parts according to the exponent mod 4
// (t^{-n} = 1, -t, -1, t for n = 0,1,2,3 mod 4).
std::pair<Laurent, Laurent> gauss_sub_laurent(const Laurent& p) {
    Laurent re, im;
    for (auto& [e, c] : p.coeffs()) {
        switch (((e % 4) + 4) % 4) {
            case 0: re.add_term(e, c); break;
            case 1: im.add_term(e, -c); break;
            case 2: re.add_term(e, -c); break;
            default: im.add_term(e, c); break;
        }
    }
    return {re, im};
}

// v -> t^{-1} v on a rational function: apply to numerator and denominator,
// then clear t from the denominator by multiplying with its conjugate
// (a + bt)(a - bt) = a^2 + b^2.
std::pair<RatFunc, RatFunc> gauss_sub(const RatFunc& f) {
    auto [nr, ni] = gauss_sub_laurent(f.num());
    auto [dr, di] = gauss_sub_laurent(f.den());
    Laurent dd = dr * dr + di * di;  // nonzero: f.den() != 0
    // (nr + ni t)(dr - di t) = (nr dr + ni di) + (ni dr - nr di) t
    return {RatFunc(nr * dr + ni * di, dd), RatFunc(ni * dr - nr * di, dd)};
}

}  // namespace

GaussPi twist_scalar(const PiScalar& x) {
    // pi -> -pi swaps the idempotent components, then v -> t^{-1} v acts on
    // each component independently.
    auto [pr, pi_] = gauss_sub(x.minus());
    auto [mr, mi] = gauss_sub(x.plus());
    return GaussPi(PiScalar(pr, mr), PiScalar(pi_, mi));
}

LaurentPi qint(long long n, int d) {
    // [n] = ((pi_d v_d)^n - v_d^{-n}) / (pi_d v_d - v_d^{-1}) with v_d = v^d,
    // pi_d = pi^d.  Per eps-component pi_d specializes to sgn = (+-1)^d and
    // the quotient is an exact Laurent polynomial (valid for all n in Z):
    //   (sgn^n v^{dn} - v^{-dn}) / (sgn v^d - v^{-d}).
    auto comp = [&](int sgn) {
        long long sn = (((n % 2) + 2) % 2 == 1) ? sgn : 1;
        Laurent num = Laurent::monomial(sn, static_cast<int>(d * n)) -
                      Laurent::monomial(1, static_cast<int>(-d * n));
        Laurent den = Laurent::monomial(sgn, d) - Laurent::monomial(1, -d);
        RatFunc r(num, den);
        if (!r.is_laurent()) throw std::logic_error("qint: division not exact");
        return r;
    };
    int sminus = (d % 2 == 0) ? 1 : -1;
    return PiScalar(comp(1), comp(sminus));
}

LaurentPi qfact(long long n, int d) {
    if (n < 0) throw std::domain_error("qfact: negative argument");
    PiScalar r = PiScalar::one();
    for (long long l = 1; l <= n; ++l) r *= qint(l, d);
    return r;
}

LaurentPi qbinom(long long n, long long k, int d) {
    if (k < 0) throw std::domain_error("qbinom: negative k");
    PiScalar num = PiScalar::one();
    for (long long s = 1; s <= k; ++s) num *= qint(n - k + s, d);
    PiScalar r = num / qfact(k, d);
    if (!r.is_laurent()) throw std::logic_error("qbinom: division not exact");
    return r;
}

PiScalar random_scalar(std::mt19937& rng, int max_terms, int max_exp,
                       int max_coeff) {
    std::uniform_int_distribution<int> nterms(1, max_terms);
    std::uniform_int_distribution<int> exps(-max_exp, max_exp);
    std::uniform_int_distribution<int> coeffs(-max_coeff, max_coeff);
    auto mk = [&]() {
        Laurent p;
        int t = nterms(rng);
        for (int i = 0; i < t; ++i) p.add_term(exps(rng), coeffs(rng));
        return RatFunc(p);
    };
    return PiScalar(mk(), mk());
}

}  // namespace coverquant
