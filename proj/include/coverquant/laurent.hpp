#pragma once

// Exact sparse Laurent polynomials over Z and reduced rational functions
// over Q, in a single variable v.  These are the building blocks for the
// coefficient rings used everywhere else in the library: every scalar the
// library touches is a pair (or quadruple) of the fraction type defined
// here.  No floating point anywhere.

#include <algorithm>
#include <cassert>
#include <map>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

namespace coverquant {

using Int = boost::multiprecision::cpp_int;
using Rat = boost::multiprecision::cpp_rational;

// ---------------------------------------------------------------------------
// Laurent: sparse Laurent polynomial over Z, exponent -> nonzero coefficient.
// ---------------------------------------------------------------------------
class Laurent {
public:
    using Map = std::map<int, Int>;

    Laurent() = default;
    explicit Laurent(const Int& c) {
        if (c != 0) coeffs_[0] = c;
    }
    static Laurent monomial(const Int& c, int exp) {
        Laurent r;
        if (c != 0) r.coeffs_[exp] = c;
        return r;
    }
    static Laurent v(int exp = 1) { return monomial(1, exp); }
    static Laurent zero() { return Laurent(); }
    static Laurent one() { return Laurent(Int(1)); }

    const Map& coeffs() const { return coeffs_; }
    bool is_zero() const { return coeffs_.empty(); }

    Int coeff(int exp) const {
        auto it = coeffs_.find(exp);
        return it == coeffs_.end() ? Int(0) : it->second;
    }

    // Lowest/highest exponents with nonzero coefficient; only valid nonzero.
    int val() const {
        assert(!is_zero());
        return coeffs_.begin()->first;
    }
    int deg() const {
        assert(!is_zero());
        return coeffs_.rbegin()->first;
    }

    void add_term(int exp, const Int& c) {
        if (c == 0) return;
        auto [it, fresh] = coeffs_.emplace(exp, c);
        if (!fresh) {
            it->second += c;
            if (it->second == 0) coeffs_.erase(it);
        }
    }

    Laurent operator-() const {
        Laurent r;
        for (auto& [e, c] : coeffs_) r.coeffs_[e] = -c;
        return r;
    }
    Laurent operator+(const Laurent& o) const {
        Laurent r = *this;
        for (auto& [e, c] : o.coeffs_) r.add_term(e, c);
        return r;
    }
    Laurent operator-(const Laurent& o) const {
        Laurent r = *this;
        for (auto& [e, c] : o.coeffs_) r.add_term(e, -c);
        return r;
    }
    Laurent operator*(const Laurent& o) const {
        Laurent r;
        for (auto& [e1, c1] : coeffs_)
            for (auto& [e2, c2] : o.coeffs_) r.add_term(e1 + e2, c1 * c2);
        return r;
    }
    Laurent& operator+=(const Laurent& o) { return *this = *this + o; }
    Laurent& operator-=(const Laurent& o) { return *this = *this - o; }
    Laurent& operator*=(const Laurent& o) { return *this = *this * o; }

    bool operator==(const Laurent& o) const { return coeffs_ == o.coeffs_; }
    bool operator!=(const Laurent& o) const { return !(*this == o); }
    bool operator<(const Laurent& o) const { return coeffs_ < o.coeffs_; }

    // v -> v^{-1}
    Laurent sub_inv() const {
        Laurent r;
        for (auto& [e, c] : coeffs_) r.coeffs_[-e] = c;
        return r;
    }
    // v -> -v
    Laurent sub_neg() const {
        Laurent r;
        for (auto& [e, c] : coeffs_) r.coeffs_[e] = (e % 2 != 0) ? Int(-c) : c;
        return r;
    }
    // v -> v^k (k >= 1)
    Laurent sub_pow(int k) const {
        Laurent r;
        for (auto& [e, c] : coeffs_) r.coeffs_[e * k] = c;
        return r;
    }
    // Multiply by v^k.
    Laurent shifted(int k) const {
        Laurent r;
        for (auto& [e, c] : coeffs_) r.coeffs_[e + k] = c;
        return r;
    }

    // gcd of all coefficients (nonnegative); 0 for the zero polynomial.
    Int content() const {
        Int g = 0;
        for (auto& [e, c] : coeffs_) g = boost::multiprecision::gcd(g, c);
        return g;
    }

    // Exact division; throws if the division leaves a remainder.
    Laurent div_exact(const Laurent& d) const;

    // Evaluate at a rational point (exponents must be >= 0 or value != 0).
    Rat eval(const Rat& x) const;

    std::string str() const;

private:
    Map coeffs_;
};

// Polynomial gcd over Z (primitive, positive leading coefficient).  Both
// arguments are shifted to have valuation 0 first; v-power factors are the
// caller's business.
Laurent poly_gcd(const Laurent& a, const Laurent& b);

// ---------------------------------------------------------------------------
// RatFunc: reduced fraction num/den with num a Laurent polynomial over Z and
// den an ordinary polynomial over Z with nonzero constant term and positive
// leading coefficient, gcd(num, den) = 1 and gcd(content num, content den)=1.
// The canonical form makes equality a plain comparison.
// ---------------------------------------------------------------------------
class RatFunc {
public:
    RatFunc() : num_(), den_(Laurent::one()) {}
    RatFunc(const Laurent& n, const Laurent& d) : num_(n), den_(d) {
        if (den_.is_zero()) throw std::domain_error("RatFunc: division by zero");
        reduce();
    }
    explicit RatFunc(const Laurent& n) : num_(n), den_(Laurent::one()) {}
    explicit RatFunc(const Int& c) : num_(Laurent(c)), den_(Laurent::one()) {}
    explicit RatFunc(const Rat& q)
        : num_(Laurent(boost::multiprecision::numerator(q))),
          den_(Laurent(boost::multiprecision::denominator(q))) {
        reduce();
    }
    static RatFunc v(int exp = 1) { return RatFunc(Laurent::v(exp)); }
    static RatFunc zero() { return RatFunc(); }
    static RatFunc one() { return RatFunc(Int(1)); }

    const Laurent& num() const { return num_; }
    const Laurent& den() const { return den_; }
    bool is_zero() const { return num_.is_zero(); }
    bool is_laurent() const { return den_ == Laurent::one(); }

    RatFunc operator-() const { return RatFunc(unchecked{}, -num_, den_); }
    RatFunc operator+(const RatFunc& o) const {
        return RatFunc(num_ * o.den_ + o.num_ * den_, den_ * o.den_);
    }
    RatFunc operator-(const RatFunc& o) const {
        return RatFunc(num_ * o.den_ - o.num_ * den_, den_ * o.den_);
    }
    RatFunc operator*(const RatFunc& o) const {
        return RatFunc(num_ * o.num_, den_ * o.den_);
    }
    RatFunc operator/(const RatFunc& o) const {
        if (o.is_zero()) throw std::domain_error("RatFunc: division by zero");
        return RatFunc(num_ * o.den_, den_ * o.num_);
    }
    RatFunc& operator+=(const RatFunc& o) { return *this = *this + o; }
    RatFunc& operator-=(const RatFunc& o) { return *this = *this - o; }
    RatFunc& operator*=(const RatFunc& o) { return *this = *this * o; }
    RatFunc& operator/=(const RatFunc& o) { return *this = *this / o; }

    bool operator==(const RatFunc& o) const {
        return num_ == o.num_ && den_ == o.den_;
    }
    bool operator!=(const RatFunc& o) const { return !(*this == o); }
    bool operator<(const RatFunc& o) const {
        if (num_ != o.num_) return num_ < o.num_;
        return den_ < o.den_;
    }

    // Substitutions extend from Laurent by acting on both parts.
    RatFunc sub_inv() const { return RatFunc(num_.sub_inv(), den_.sub_inv()); }
    RatFunc sub_neg() const { return RatFunc(num_.sub_neg(), den_.sub_neg()); }
    RatFunc sub_pow(int k) const { return RatFunc(num_.sub_pow(k), den_.sub_pow(k)); }

    // v-adic valuation (order of vanishing at v = 0); nullopt for zero.
    std::optional<int> vval() const {
        if (is_zero()) return std::nullopt;
        return num_.val();  // den has nonzero constant term by canonicity
    }

    // Power-series expansion around v = 0 up to and including v^order.
    // Requires vval() >= some finite bound automatically (den(0) != 0).
    std::map<int, Rat> series(int order) const;

    // Evaluate at a rational point.
    Rat eval(const Rat& x) const {
        Rat d = den_.eval(x);
        if (d == 0) throw std::domain_error("RatFunc: pole at evaluation point");
        return num_.eval(x) / d;
    }

    std::string str() const;

private:
    struct unchecked {};
    RatFunc(unchecked, const Laurent& n, const Laurent& d) : num_(n), den_(d) {}
    void reduce();

    Laurent num_;
    Laurent den_;
};

}  // namespace coverquant
