#pragma once

#include "kras/algebra/dense_poly.hpp"
#include "kras/algebra/rational.hpp"

#include <memory>
#include <string>
#include <vector>

namespace kras {

/// n-th cyclotomic polynomial, computed from x^n - 1 = prod_{d | n} Phi_d.
DensePoly cyclotomic_polynomial(unsigned n);

/// Euler's totient, the degree of Phi_n.
unsigned euler_phi(unsigned n);

class CyclotomicField {
public:
    explicit CyclotomicField(unsigned conductor);
    unsigned conductor() const { return conductor_; }
    std::size_t degree() const { return degree_; }
    const DensePoly& minimal_polynomial() const { return phi_; }

private:
    unsigned conductor_;
    DensePoly phi_;
    std::size_t degree_;
};

/// Element of Q(zeta_n) written in the power basis 1, zeta, ..., zeta^(phi(n)-1).
/// A number built from a Rational carries no field (conductor 1) and is
/// promoted on contact with an element of any Q(zeta_n). Mixing two
/// different non-trivial conductors throws.
class CycloNumber {
public:
    CycloNumber() : coeffs_{Rational(0)} {}
    CycloNumber(const Rational& q) : coeffs_{q} {}   // NOLINT(google-explicit-constructor)
    CycloNumber(long v) : coeffs_{Rational(v)} {}    // NOLINT(google-explicit-constructor)
    CycloNumber(int v) : coeffs_{Rational(v)} {}     // NOLINT(google-explicit-constructor)

    /// zeta_n^power
    static CycloNumber zeta(unsigned n, long power = 1);
    static CycloNumber zeta(const std::shared_ptr<const CyclotomicField>& field, long power = 1);

    unsigned conductor() const { return field_ ? field_->conductor() : 1; }
    const std::shared_ptr<const CyclotomicField>& field() const { return field_; }
    /// Power-basis coordinates (length phi(n); length 1 for rationals).
    const std::vector<Rational>& coeffs() const { return coeffs_; }

    bool is_zero() const;
    bool is_rational() const;
    Rational rational_value() const;  // throws unless is_rational()

    CycloNumber inverse() const;
    /// Image under the automorphism zeta -> zeta^k (gcd(k, n) = 1).
    CycloNumber galois(long k) const;

    CycloNumber operator-() const;
    CycloNumber& operator+=(const CycloNumber& rhs);
    CycloNumber& operator-=(const CycloNumber& rhs);
    CycloNumber& operator*=(const CycloNumber& rhs);
    CycloNumber& operator/=(const CycloNumber& rhs) { return *this *= rhs.inverse(); }
    friend CycloNumber operator+(CycloNumber a, const CycloNumber& b) { return a += b; }
    friend CycloNumber operator-(CycloNumber a, const CycloNumber& b) { return a -= b; }
    friend CycloNumber operator*(CycloNumber a, const CycloNumber& b) { return a *= b; }
    friend CycloNumber operator/(CycloNumber a, const CycloNumber& b) { return a /= b; }
    friend bool operator==(const CycloNumber& a, const CycloNumber& b);

    CycloNumber pow(long e) const;

    std::string to_string(const std::string& symbol = "zeta") const;

private:
    CycloNumber(std::shared_ptr<const CyclotomicField> field, std::vector<Rational> coeffs);
    void promote_to(const std::shared_ptr<const CyclotomicField>& field);
    static std::shared_ptr<const CyclotomicField> common_field(const CycloNumber& a, const CycloNumber& b);
    DensePoly as_dense() const { return DensePoly(coeffs_); }
    static CycloNumber from_dense(const std::shared_ptr<const CyclotomicField>& field, const DensePoly& p);

    std::shared_ptr<const CyclotomicField> field_;
    std::vector<Rational> coeffs_;
};

}  // namespace kras
