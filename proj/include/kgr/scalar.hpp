#ifndef KGR_SCALAR_HPP
#define KGR_SCALAR_HPP

#include <map>
#include <string>

#include "kgr/rational.hpp"

namespace kgr {

// Exact element of a real multi-quadratic field: a finite sum
//     sum_i  c_i * sqrt(n_i)
// with rational c_i and distinct squarefree positive integers n_i
// (n = 1 is the rational part). Keeping every radicand squarefree makes
// equality with zero a structural test, so identities between products of
// square roots of rationals are decided exactly.
class SurdSum {
public:
    SurdSum() = default;
    explicit SurdSum(const Rational& r);

    // sqrt(r) for rational r >= 0.
    static SurdSum sqrt_rational(const Rational& r);

    bool is_zero() const { return terms_.empty(); }
    bool is_rational() const;
    // Rational value; throws if irrational terms are present.
    Rational rational_value() const;
    // True when the sum is c*sqrt(n) for a single (c, n).
    bool is_single_term() const { return terms_.size() == 1; }

    SurdSum operator-() const;
    SurdSum operator+(const SurdSum& o) const;
    SurdSum operator-(const SurdSum& o) const;
    SurdSum operator*(const SurdSum& o) const;
    // Division by a single-term surd (all divisions in the library are
    // by Radon-Nikodym roots, which are single terms).
    SurdSum operator/(const SurdSum& o) const;

    bool operator==(const SurdSum& o) const { return terms_ == o.terms_; }
    bool operator!=(const SurdSum& o) const { return !(*this == o); }

    double to_double() const;
    std::string str() const;

private:
    void add_term(long long radicand, const Rational& coeff);

    // radicand (squarefree, >= 1) -> coefficient
    std::map<long long, Rational> terms_;
};

// Numeric value used throughout the library: exact (SurdSum) when all inputs
// were rational, double otherwise. Mixing degrades to double.
class Scalar {
public:
    Scalar() : exact_(true) {}
    Scalar(const Rational& r) : exact_(true), sum_(r) {}
    Scalar(const SurdSum& s) : exact_(true), sum_(s) {}

    static Scalar approx(double v);
    static Scalar zero() { return Scalar(); }
    static Scalar one() { return Scalar(Rational(1)); }

    bool is_exact() const { return exact_; }
    bool is_zero() const { return exact_ ? sum_.is_zero() : approx_ == 0.0; }
    bool is_rational() const { return exact_ && sum_.is_rational(); }
    Rational rational_value() const;
    const SurdSum& exact_value() const;

    Scalar operator-() const;
    Scalar operator+(const Scalar& o) const;
    Scalar operator-(const Scalar& o) const;
    Scalar operator*(const Scalar& o) const;
    Scalar operator/(const Scalar& o) const;
    Scalar& operator+=(const Scalar& o) { return *this = *this + o; }
    Scalar& operator-=(const Scalar& o) { return *this = *this - o; }
    Scalar& operator*=(const Scalar& o) { return *this = *this * o; }

    // Nonnegative square root; exact input must be a nonnegative rational
    // (the only case the library needs), otherwise the result is a double.
    Scalar sqrt() const;

    // Structural equality for exact values, bitwise for doubles.
    bool identical(const Scalar& o) const;

    double to_double() const { return exact_ ? sum_.to_double() : approx_; }
    double abs_double() const;
    std::string str() const;

private:
    bool exact_;
    SurdSum sum_;
    double approx_ = 0.0;
};

} // namespace kgr

#endif
