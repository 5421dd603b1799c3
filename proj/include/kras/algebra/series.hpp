#pragma once

#include "kras/algebra/dense_poly.hpp"

#include <string>
#include <vector>

namespace kras {

/// Residue class in Q[x]/(x^m). Always holds exactly m coefficients.
class TruncatedSeries {
public:
    TruncatedSeries(std::string variable, std::size_t modulus);
    TruncatedSeries(std::string variable, std::size_t modulus, const DensePoly& p);

    const std::string& variable() const { return variable_; }
    std::size_t modulus() const { return coeffs_.size(); }
    const std::vector<Rational>& coeffs() const { return coeffs_; }
    const Rational& operator[](std::size_t i) const { return coeffs_[i]; }

    DensePoly to_dense() const { return DensePoly(coeffs_); }

    TruncatedSeries& operator+=(const TruncatedSeries& rhs);
    TruncatedSeries& operator-=(const TruncatedSeries& rhs);
    TruncatedSeries& operator*=(const TruncatedSeries& rhs);
    TruncatedSeries& operator*=(const Rational& c);
    friend TruncatedSeries operator+(TruncatedSeries a, const TruncatedSeries& b) { return a += b; }
    friend TruncatedSeries operator-(TruncatedSeries a, const TruncatedSeries& b) { return a -= b; }
    friend TruncatedSeries operator*(TruncatedSeries a, const TruncatedSeries& b) { return a *= b; }
    friend TruncatedSeries operator*(TruncatedSeries a, const Rational& c) { return a *= c; }
    friend bool operator==(const TruncatedSeries& a, const TruncatedSeries& b)
    {
        return a.variable_ == b.variable_ && a.coeffs_ == b.coeffs_;
    }

private:
    void require_compatible(const TruncatedSeries& rhs) const;

    std::string variable_;
    std::vector<Rational> coeffs_;
};

/// exp(g) mod x^m; g must have zero constant term.
TruncatedSeries series_exp(const TruncatedSeries& g);
/// log(u) mod x^m; u must have constant term 1.
TruncatedSeries series_log(const TruncatedSeries& u);

}  // namespace kras
