#pragma once

// Scalars for the covering algebra: the ring Q(v)^pi = Q(v)[pi]/(pi^2-1)
// represented through the idempotent splitting eps_+/- = (1 +- pi)/2, so an
// element is the pair of its two specializations and all arithmetic is
// componentwise.  pi itself is the pair (1, -1).
//
// The subring of pairs of integral Laurent polynomials is the integral form
// A = Z^pi[v, v^{-1}]; membership is a predicate here, not a separate type
// (alias LaurentPi documents intent).
//
// GaussPi adjoins t with t^2 = -1 (so t^4 = 1): a pair of PiScalars
// re + im*t.  It carries the variable change v -> t^{-1} v used by the
// twistor maps.

#include <array>
#include <functional>
#include <random>

#include "coverquant/laurent.hpp"

namespace coverquant {

class PiScalar {
public:
    PiScalar() = default;
    PiScalar(RatFunc plus, RatFunc minus)
        : plus_(std::move(plus)), minus_(std::move(minus)) {}
    explicit PiScalar(const RatFunc& both) : plus_(both), minus_(both) {}
    explicit PiScalar(const Int& c) : plus_(c), minus_(c) {}
    explicit PiScalar(const Rat& q) : plus_(q), minus_(q) {}

    static PiScalar zero() { return PiScalar(); }
    static PiScalar one() { return PiScalar(Int(1)); }
    static PiScalar pi() { return PiScalar(RatFunc(Int(1)), RatFunc(Int(-1))); }
    static PiScalar v(int exp = 1) { return PiScalar(RatFunc::v(exp)); }
    // pi^k
    static PiScalar pi_pow(long long k) {
        bool odd = (k % 2 + 2) % 2 == 1;
        return odd ? pi() : one();
    }
    // (pi^a v^b) convenience
    static PiScalar piv(long long a, int b) { return pi_pow(a) * v(b); }

    const RatFunc& plus() const { return plus_; }
    const RatFunc& minus() const { return minus_; }
    // Specialization at pi = +1 / -1.
    const RatFunc& specialize(int sign) const {
        return sign >= 0 ? plus_ : minus_;
    }

    bool is_zero() const { return plus_.is_zero() && minus_.is_zero(); }
    bool is_laurent() const { return plus_.is_laurent() && minus_.is_laurent(); }
    // Membership in A = Z^pi[v,v^{-1}]: both components integral Laurent.
    bool is_integral() const {
        if (!is_laurent()) return false;
        return true;  // coefficients are integers by construction (Z coeffs)
    }

    PiScalar operator-() const { return PiScalar(-plus_, -minus_); }
    PiScalar operator+(const PiScalar& o) const {
        return PiScalar(plus_ + o.plus_, minus_ + o.minus_);
    }
    PiScalar operator-(const PiScalar& o) const {
        return PiScalar(plus_ - o.plus_, minus_ - o.minus_);
    }
    PiScalar operator*(const PiScalar& o) const {
        return PiScalar(plus_ * o.plus_, minus_ * o.minus_);
    }
    PiScalar operator/(const PiScalar& o) const {
        return PiScalar(plus_ / o.plus_, minus_ / o.minus_);
    }
    PiScalar& operator+=(const PiScalar& o) { return *this = *this + o; }
    PiScalar& operator-=(const PiScalar& o) { return *this = *this - o; }
    PiScalar& operator*=(const PiScalar& o) { return *this = *this * o; }
    PiScalar& operator/=(const PiScalar& o) { return *this = *this / o; }

    bool operator==(const PiScalar& o) const {
        return plus_ == o.plus_ && minus_ == o.minus_;
    }
    bool operator!=(const PiScalar& o) const { return !(*this == o); }
    bool operator<(const PiScalar& o) const {
        if (plus_ != o.plus_) return plus_ < o.plus_;
        return minus_ < o.minus_;
    }

    // Bar involution: v -> pi v^{-1} (per component v -> v^{-1} / -v^{-1}).
    PiScalar bar() const {
        return PiScalar(plus_.sub_inv(), minus_.sub_inv().sub_neg());
    }
    // Dagger involution: v -> pi v (per component id / v -> -v).
    PiScalar dagger() const { return PiScalar(plus_, minus_.sub_neg()); }

    // Minimum v-adic valuation of the two components (nullopt when zero).
    std::optional<int> vval() const {
        auto a = plus_.vval();
        auto b = minus_.vval();
        if (!a) return b;
        if (!b) return a;
        return std::min(*a, *b);
    }

    // True when both component power series up to v^order have integer
    // coefficients and vanish below v^minval.  Used for statements like
    // "x is in v Z^pi[[v]] modulo v^{order+1}".
    bool series_integral_from(int minval, int order) const;

    std::string str() const {
        return "eps+: " + plus_.str() + "; eps-: " + minus_.str();
    }

private:
    RatFunc plus_;
    RatFunc minus_;
};

// Documented alias: values expected to lie in A = Z^pi[v, v^{-1}].
using LaurentPi = PiScalar;

// ---------------------------------------------------------------------------
// GaussPi: re + im * t over PiScalar, t^2 = -1.
// ---------------------------------------------------------------------------
class GaussPi {
public:
    GaussPi() = default;
    GaussPi(PiScalar re, PiScalar im) : re_(std::move(re)), im_(std::move(im)) {}
    explicit GaussPi(const PiScalar& re) : re_(re) {}

    static GaussPi zero() { return GaussPi(); }
    static GaussPi one() { return GaussPi(PiScalar::one()); }
    static GaussPi t() { return GaussPi(PiScalar::zero(), PiScalar::one()); }
    // t^k, exponent taken mod 4.
    static GaussPi t_pow(long long k) {
        switch (((k % 4) + 4) % 4) {
            case 0: return one();
            case 1: return t();
            case 2: return GaussPi(-PiScalar::one());
            default: return GaussPi(PiScalar::zero(), -PiScalar::one());
        }
    }

    const PiScalar& re() const { return re_; }
    const PiScalar& im() const { return im_; }
    bool is_zero() const { return re_.is_zero() && im_.is_zero(); }

    GaussPi operator-() const { return GaussPi(-re_, -im_); }
    GaussPi operator+(const GaussPi& o) const {
        return GaussPi(re_ + o.re_, im_ + o.im_);
    }
    GaussPi operator-(const GaussPi& o) const {
        return GaussPi(re_ - o.re_, im_ - o.im_);
    }
    GaussPi operator*(const GaussPi& o) const {
        return GaussPi(re_ * o.re_ - im_ * o.im_, re_ * o.im_ + im_ * o.re_);
    }
    GaussPi& operator+=(const GaussPi& o) { return *this = *this + o; }
    GaussPi& operator-=(const GaussPi& o) { return *this = *this - o; }
    GaussPi& operator*=(const GaussPi& o) { return *this = *this * o; }
    bool operator==(const GaussPi& o) const {
        return re_ == o.re_ && im_ == o.im_;
    }
    bool operator!=(const GaussPi& o) const { return !(*this == o); }

    std::string str() const {
        return "(" + re_.str() + ") + t*(" + im_.str() + ")";
    }

private:
    PiScalar re_;
    PiScalar im_;
};

// The twistor substitution on scalars: v -> t^{-1} v, pi -> -pi.
// pi -> -pi swaps the eps components; v -> t^{-1} v sends a monomial c v^n
// to c t^{-n} v^n and extends to fractions by clearing t from the
// denominator with the Gaussian conjugate.
GaussPi twist_scalar(const PiScalar& x);

// ---------------------------------------------------------------------------
// (v,pi)-combinatorics.  The deformed integer for d_i = d is
//   [n]_{v_i,pi_i} = ((pi_i v_i)^n - v_i^{-n}) / (pi_i v_i - v_i^{-1}),
// with v_i = v^d and pi_i = pi^d; factorials and binomials as usual, all
// exact Laurent (division verified).
// ---------------------------------------------------------------------------
LaurentPi qint(long long n, int d);
LaurentPi qfact(long long n, int d);
LaurentPi qbinom(long long n, long long k, int d);

// Uniform random integral scalar for property tests (Laurent, small).
PiScalar random_scalar(std::mt19937& rng, int max_terms = 4, int max_exp = 5,
                       int max_coeff = 9);

}  // namespace coverquant
