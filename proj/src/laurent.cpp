#include "coverquant/laurent.hpp"

namespace coverquant {

Laurent Laurent::div_exact(const Laurent& d) const {
    if (d.is_zero()) throw std::domain_error("Laurent: division by zero");
    if (is_zero()) return Laurent();
    // Normalize both to valuation 0, remember the shift.
    Laurent n = shifted(-val());
    Laurent dd = d.shifted(-d.val());
    int shift = val() - d.val();
    Laurent q;
    // Long division from the top.
    while (!n.is_zero()) {
        int e = n.deg() - dd.deg();
        if (e < 0) throw std::domain_error("Laurent: inexact division");
        Int lead_n = n.coeff(n.deg());
        Int lead_d = dd.coeff(dd.deg());
        if (lead_n % lead_d != 0)
            throw std::domain_error("Laurent: inexact division");
        Laurent t = Laurent::monomial(lead_n / lead_d, e);
        q += t;
        n -= t * dd;
    }
    return q.shifted(shift);
}

Rat Laurent::eval(const Rat& x) const {
    Rat acc = 0;
    for (auto& [e, c] : coeffs_) {
        Rat p = 1;
        int a = e >= 0 ? e : -e;
        for (int k = 0; k < a; ++k) p *= x;
        if (e < 0) {
            if (x == 0) throw std::domain_error("Laurent: pole at 0");
            p = Rat(1) / p;
        }
        acc += Rat(c) * p;
    }
    return acc;
}

std::string Laurent::str() const {
    if (is_zero()) return "0";
    std::ostringstream os;
    bool first = true;
    for (auto& [e, c] : coeffs_) {
        if (!first && c > 0) os << "+";
        if (c == -1 && e != 0)
            os << "-";
        else if (c != 1 || e == 0)
            os << c;
        if (e != 0) {
            if (c != 1 && c != -1) os << "*";
            os << "v";
            if (e != 1) os << "^" << e;
        }
        first = false;
    }
    return os.str();
}

namespace {

// Primitive part with positive leading coefficient, valuation shifted to 0.
Laurent primitive(const Laurent& a) {
    if (a.is_zero()) return a;
    Laurent r = a.shifted(-a.val());
    Int c = r.content();
    if (r.coeff(r.deg()) < 0) c = -c;
    Laurent out;
    for (auto& [e, k] : r.coeffs()) out.add_term(e, k / c);
    return out;
}

// Pseudo-remainder of a by b (both valuation-0 polynomials, b nonzero).
Laurent prem(Laurent a, const Laurent& b) {
    while (!a.is_zero() && a.deg() >= b.deg()) {
        // Scale a so the leading term divides exactly, then cancel it.
        Int la = a.coeff(a.deg());
        Int lb = b.coeff(b.deg());
        Int g = boost::multiprecision::gcd(la, lb);
        a = a * Laurent(lb / g) - b * Laurent::monomial(la / g, a.deg() - b.deg());
    }
    return a;
}

}  // namespace

Laurent poly_gcd(const Laurent& a, const Laurent& b) {
    if (a.is_zero()) return primitive(b);
    if (b.is_zero()) return primitive(a);
    Laurent x = primitive(a), y = primitive(b);
    if (x.deg() < y.deg()) std::swap(x, y);
    while (!y.is_zero()) {
        Laurent r = prem(x, y);
        x = y;
        y = r.is_zero() ? r : primitive(r);
        if (!y.is_zero() && x.deg() < y.deg()) std::swap(x, y);
    }
    return primitive(x);
}

void RatFunc::reduce() {
    if (num_.is_zero()) {
        den_ = Laurent::one();
        return;
    }
    // Move all v-power factors of the denominator into the numerator so the
    // denominator has nonzero constant term.
    int dval = den_.val();
    den_ = den_.shifted(-dval);
    num_ = num_.shifted(-dval);
    // Cancel the polynomial gcd (ignoring v powers of the numerator).
    Laurent g = poly_gcd(num_, den_);
    if (g != Laurent::one()) {
        // g is primitive with valuation 0; div_exact handles the numerator's
        // own v-power shift internally.
        num_ = num_.div_exact(g);
        den_ = den_.div_exact(g);
    }
    // Cancel integer content between the two parts.
    Int cn = num_.content();
    Int cd = den_.content();
    Int g2 = boost::multiprecision::gcd(cn, cd);
    if (den_.coeff(den_.deg()) < 0) g2 = -g2;
    if (g2 != 1) {
        Laurent n2, d2;
        for (auto& [e, c] : num_.coeffs()) n2.add_term(e, c / g2);
        for (auto& [e, c] : den_.coeffs()) d2.add_term(e, c / g2);
        num_ = n2;
        den_ = d2;
    } else if (den_.coeff(den_.deg()) < 0) {
        num_ = -num_;
        den_ = -den_;
    }
}

std::map<int, Rat> RatFunc::series(int order) const {
    std::map<int, Rat> out;
    if (is_zero()) return out;
    int nval = num_.val();
    // den has nonzero constant term; invert it as a power series.
    Rat d0 = Rat(den_.coeff(0));
    // Coefficients of the series of num/den, starting at exponent nval.
    int terms = order - nval + 1;
    if (terms <= 0) return out;
    std::vector<Rat> s(static_cast<size_t>(terms), Rat(0));
    for (int k = 0; k < terms; ++k) {
        Rat acc = Rat(num_.coeff(nval + k));
        for (int j = 1; j <= k; ++j) acc -= Rat(den_.coeff(j)) * s[static_cast<size_t>(k - j)];
        s[static_cast<size_t>(k)] = acc / d0;
    }
    for (int k = 0; k < terms; ++k)
        if (s[static_cast<size_t>(k)] != 0) out[nval + k] = s[static_cast<size_t>(k)];
    return out;
}

std::string RatFunc::str() const {
    if (is_laurent()) return num_.str();
    return "(" + num_.str() + ")/(" + den_.str() + ")";
}

}  // namespace coverquant
