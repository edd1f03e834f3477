#include "kgr/rational.hpp"

#include <cstdlib>
#include <numeric>

namespace kgr {

namespace {

using i128 = __int128;

long long checked_narrow(i128 v, const char* what) {
    if (v > static_cast<i128>(INT64_MAX) || v < static_cast<i128>(INT64_MIN))
        throw overflow_error(std::string("int64 overflow in rational ") + what);
    return static_cast<long long>(v);
}

i128 gcd128(i128 a, i128 b) {
    if (a < 0) a = -a;
    if (b < 0) b = -b;
    while (b != 0) {
        i128 t = a % b;
        a = b;
        b = t;
    }
    return a;
}

} // namespace

Rational::Rational(long long n, long long d) {
    if (d == 0) throw numeric_error("rational with zero denominator");
    i128 nn = n, dd = d;
    if (dd < 0) { nn = -nn; dd = -dd; }
    i128 g = gcd128(nn, dd);
    if (g > 1) { nn /= g; dd /= g; }
    num_ = checked_narrow(nn, "construct");
    den_ = checked_narrow(dd, "construct");
}

Rational Rational::parse(const std::string& text) {
    std::string s = text;
    auto slash = s.find('/');
    if (slash != std::string::npos) {
        long long p = std::stoll(s.substr(0, slash));
        long long q = std::stoll(s.substr(slash + 1));
        return Rational(p, q);
    }
    auto dot = s.find('.');
    if (dot != std::string::npos) {
        // decimal literal: scale by a power of ten
        std::string head = s.substr(0, dot), tail = s.substr(dot + 1);
        bool neg = !head.empty() && head[0] == '-';
        if (neg) head = head.substr(1);
        long long ip = head.empty() ? 0 : std::stoll(head);
        long long scale = 1;
        long long frac = 0;
        for (char c : tail) {
            if (c < '0' || c > '9') throw malformed_spec("bad rational literal '" + text + "'");
            frac = checked_narrow(static_cast<i128>(frac) * 10 + (c - '0'), "parse");
            scale = checked_narrow(static_cast<i128>(scale) * 10, "parse");
        }
        i128 n = static_cast<i128>(ip) * scale + frac;
        if (neg) n = -n;
        return Rational(checked_narrow(n, "parse"), scale);
    }
    return Rational(std::stoll(s));
}

Rational Rational::operator+(const Rational& o) const {
    i128 n = static_cast<i128>(num_) * o.den_ + static_cast<i128>(o.num_) * den_;
    i128 d = static_cast<i128>(den_) * o.den_;
    i128 g = gcd128(n, d);
    if (g > 1) { n /= g; d /= g; }
    Rational r;
    r.num_ = checked_narrow(n, "add");
    r.den_ = checked_narrow(d, "add");
    return r;
}

Rational Rational::operator-(const Rational& o) const { return *this + (-o); }

Rational Rational::operator*(const Rational& o) const {
    i128 n = static_cast<i128>(num_) * o.num_;
    i128 d = static_cast<i128>(den_) * o.den_;
    i128 g = gcd128(n, d);
    if (g > 1) { n /= g; d /= g; }
    Rational r;
    r.num_ = checked_narrow(n, "mul");
    r.den_ = checked_narrow(d, "mul");
    return r;
}

Rational Rational::operator/(const Rational& o) const {
    if (o.num_ == 0) throw numeric_error("rational division by zero");
    i128 n = static_cast<i128>(num_) * o.den_;
    i128 d = static_cast<i128>(den_) * o.num_;
    if (d < 0) { n = -n; d = -d; }
    i128 g = gcd128(n, d);
    if (g > 1) { n /= g; d /= g; }
    Rational r;
    r.num_ = checked_narrow(n, "div");
    r.den_ = checked_narrow(d, "div");
    return r;
}

bool Rational::operator<(const Rational& o) const {
    return static_cast<i128>(num_) * o.den_ < static_cast<i128>(o.num_) * den_;
}

std::string Rational::str() const {
    if (den_ == 1) return std::to_string(num_);
    return std::to_string(num_) + "/" + std::to_string(den_);
}

} // namespace kgr
