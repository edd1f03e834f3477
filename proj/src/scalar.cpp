#include "kgr/scalar.hpp"

#include <cmath>

namespace kgr {

namespace {

using i128 = __int128;

long long checked_mul(long long a, long long b, const char* what) {
    i128 p = static_cast<i128>(a) * b;
    if (p > static_cast<i128>(INT64_MAX) || p < static_cast<i128>(INT64_MIN))
        throw overflow_error(std::string("int64 overflow in surd ") + what);
    return static_cast<long long>(p);
}

long long gcd_ll(long long a, long long b) {
    while (b != 0) {
        long long t = a % b;
        a = b;
        b = t;
    }
    return a;
}

long long isqrt_ll(long long n) {
    if (n < 0) return -1;
    long long r = static_cast<long long>(std::sqrt(static_cast<double>(n)));
    while (r > 0 && r * r > n) --r;
    while ((r + 1) * (r + 1) <= n) ++r;
    return r;
}

// Factor n = s^2 * m with m squarefree (complete for numbers whose square
// factors are 4096-smooth or perfect squares, which covers all rational
// data this library manipulates).
void extract_square(long long& n, long long& s) {
    s = 1;
    for (long long d = 2; d * d * d * d <= n || d <= 4096; ++d) {
        if (d * d > n) break;
        while (n % (d * d) == 0) {
            n /= d * d;
            s = checked_mul(s, d, "square extraction");
        }
    }
    long long r = isqrt_ll(n);
    if (r > 1 && r * r == n) {
        n = 1;
        s = checked_mul(s, r, "square extraction");
    }
}

} // namespace

SurdSum::SurdSum(const Rational& r) {
    if (!r.is_zero()) terms_[1] = r;
}

void SurdSum::add_term(long long radicand, const Rational& coeff) {
    if (coeff.is_zero()) return;
    auto it = terms_.find(radicand);
    if (it == terms_.end()) {
        terms_[radicand] = coeff;
    } else {
        it->second += coeff;
        if (it->second.is_zero()) terms_.erase(it);
    }
}

SurdSum SurdSum::sqrt_rational(const Rational& r) {
    if (r.sign() < 0) throw numeric_error("sqrt of negative rational " + r.str());
    if (r.is_zero()) return SurdSum();
    // sqrt(p/q) = sqrt(p*q) / q
    long long n = checked_mul(r.num(), r.den(), "sqrt radicand");
    long long s = 1;
    extract_square(n, s);
    SurdSum out;
    out.add_term(n, Rational(s, r.den()));
    return out;
}

bool SurdSum::is_rational() const {
    return terms_.empty() || (terms_.size() == 1 && terms_.begin()->first == 1);
}

Rational SurdSum::rational_value() const {
    if (terms_.empty()) return Rational(0);
    if (terms_.size() == 1 && terms_.begin()->first == 1) return terms_.begin()->second;
    throw exactness_error("value " + str() + " is not rational");
}

SurdSum SurdSum::operator-() const {
    SurdSum out;
    for (const auto& [rad, c] : terms_) out.terms_[rad] = -c;
    return out;
}

SurdSum SurdSum::operator+(const SurdSum& o) const {
    SurdSum out = *this;
    for (const auto& [rad, c] : o.terms_) out.add_term(rad, c);
    return out;
}

SurdSum SurdSum::operator-(const SurdSum& o) const { return *this + (-o); }

SurdSum SurdSum::operator*(const SurdSum& o) const {
    SurdSum out;
    for (const auto& [r1, c1] : terms_) {
        for (const auto& [r2, c2] : o.terms_) {
            // r1, r2 squarefree: r1*r2 = g^2 * (r1/g)*(r2/g) with the cofactors
            // coprime and squarefree, so no re-extraction is needed.
            long long g = gcd_ll(r1, r2);
            long long rad = checked_mul(r1 / g, r2 / g, "term product");
            out.add_term(rad, c1 * c2 * Rational(g));
        }
    }
    return out;
}

SurdSum SurdSum::operator/(const SurdSum& o) const {
    if (o.is_zero()) throw numeric_error("surd division by zero");
    if (!o.is_single_term())
        throw exactness_error("division by multi-term surd " + o.str());
    auto [rad, coeff] = *o.terms_.begin();
    // 1 / (c*sqrt(r)) = sqrt(r) / (c*r)
    SurdSum inv;
    inv.add_term(rad, Rational(1) / (coeff * Rational(rad)));
    return *this * inv;
}

double SurdSum::to_double() const {
    double v = 0.0;
    for (const auto& [rad, c] : terms_)
        v += c.to_double() * std::sqrt(static_cast<double>(rad));
    return v;
}

std::string SurdSum::str() const {
    if (terms_.empty()) return "0";
    std::string out;
    bool first = true;
    for (const auto& [rad, c] : terms_) {
        if (!first) out += " + ";
        first = false;
        if (rad == 1) {
            out += c.str();
        } else {
            out += c.str() + "*sqrt(" + std::to_string(rad) + ")";
        }
    }
    return out;
}

Scalar Scalar::approx(double v) {
    Scalar s;
    s.exact_ = false;
    s.approx_ = v;
    return s;
}

Rational Scalar::rational_value() const {
    if (!exact_) throw exactness_error("approximate value is not rational");
    return sum_.rational_value();
}

const SurdSum& Scalar::exact_value() const {
    if (!exact_) throw exactness_error("approximate value has no exact form");
    return sum_;
}

Scalar Scalar::operator-() const {
    if (exact_) return Scalar(-sum_);
    return approx(-approx_);
}

Scalar Scalar::operator+(const Scalar& o) const {
    if (exact_ && o.exact_) return Scalar(sum_ + o.sum_);
    return approx(to_double() + o.to_double());
}

Scalar Scalar::operator-(const Scalar& o) const {
    if (exact_ && o.exact_) return Scalar(sum_ - o.sum_);
    return approx(to_double() - o.to_double());
}

Scalar Scalar::operator*(const Scalar& o) const {
    if (exact_ && o.exact_) return Scalar(sum_ * o.sum_);
    return approx(to_double() * o.to_double());
}

Scalar Scalar::operator/(const Scalar& o) const {
    if (exact_ && o.exact_) return Scalar(sum_ / o.sum_);
    double d = o.to_double();
    if (d == 0.0) throw numeric_error("division by zero");
    return approx(to_double() / d);
}

Scalar Scalar::sqrt() const {
    if (exact_) {
        if (sum_.is_rational()) return Scalar(SurdSum::sqrt_rational(sum_.rational_value()));
        double v = sum_.to_double();
        if (v < 0) throw numeric_error("sqrt of negative value");
        return approx(std::sqrt(v));
    }
    if (approx_ < 0) throw numeric_error("sqrt of negative value");
    return approx(std::sqrt(approx_));
}

bool Scalar::identical(const Scalar& o) const {
    if (exact_ != o.exact_) return false;
    if (exact_) return sum_ == o.sum_;
    return approx_ == o.approx_;
}

double Scalar::abs_double() const {
    double v = to_double();
    return v < 0 ? -v : v;
}

std::string Scalar::str() const {
    if (exact_) return sum_.str();
    return std::to_string(approx_);
}

} // namespace kgr
