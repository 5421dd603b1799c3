#pragma once

#include "kras/algebra/rational.hpp"

#include <string>
#include <utility>
#include <vector>

namespace kras {

/// Dense univariate polynomial over the rationals, coefficients stored from
/// the constant term upwards with no trailing zeros.
class DensePoly {
public:
    DensePoly() = default;
    explicit DensePoly(std::vector<Rational> coeffs);
    DensePoly(const Rational& constant);  // NOLINT(google-explicit-constructor)

    static DensePoly monomial(const Rational& c, std::size_t degree);
    static DensePoly x() { return monomial(Rational(1), 1); }

    bool is_zero() const { return coeffs_.empty(); }
    /// Degree of the zero polynomial is -1.
    long degree() const { return static_cast<long>(coeffs_.size()) - 1; }
    Rational coeff(std::size_t i) const;
    Rational leading() const;
    const std::vector<Rational>& coeffs() const { return coeffs_; }

    DensePoly monic() const;
    DensePoly truncate(std::size_t n) const;  // reduce modulo x^n
    DensePoly derivative() const;
    Rational evaluate(const Rational& at) const;
    /// p(c*x)
    DensePoly scale_argument(const Rational& c) const;

    DensePoly operator-() const;
    DensePoly& operator+=(const DensePoly& rhs);
    DensePoly& operator-=(const DensePoly& rhs);
    DensePoly& operator*=(const DensePoly& rhs);
    friend DensePoly operator+(DensePoly a, const DensePoly& b) { return a += b; }
    friend DensePoly operator-(DensePoly a, const DensePoly& b) { return a -= b; }
    friend DensePoly operator*(DensePoly a, const DensePoly& b) { return a *= b; }
    friend bool operator==(const DensePoly& a, const DensePoly& b) { return a.coeffs_ == b.coeffs_; }

    DensePoly pow(unsigned long e) const;

    std::string to_string(const std::string& var = "x") const;

private:
    void trim();
    std::vector<Rational> coeffs_;
};

/// Quotient and remainder; throws std::domain_error on a zero divisor.
std::pair<DensePoly, DensePoly> divmod(const DensePoly& a, const DensePoly& b);

struct BezoutResult {
    DensePoly gcd;  // monic, or zero when both inputs are zero
    DensePoly a;
    DensePoly b;
};

/// a*f + b*g = gcd(f, g).
BezoutResult extended_gcd(const DensePoly& f, const DensePoly& g);

}  // namespace kras
