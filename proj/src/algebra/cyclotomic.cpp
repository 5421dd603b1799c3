#include "kras/algebra/cyclotomic.hpp"

#include <numeric>
#include <stdexcept>

namespace kras {

DensePoly cyclotomic_polynomial(unsigned n)
{
    if (n == 0)
        throw std::domain_error("cyclotomic polynomial of conductor 0");
    DensePoly p = DensePoly::monomial(Rational(1), n) - DensePoly(Rational(1));
    for (unsigned d = 1; d < n; ++d) {
        if (n % d != 0)
            continue;
        auto [q, r] = divmod(p, cyclotomic_polynomial(d));
        if (!r.is_zero())
            throw std::logic_error("cyclotomic factorisation failed");
        p = q;
    }
    return p;
}

unsigned euler_phi(unsigned n)
{
    unsigned count = 0;
    for (unsigned k = 1; k <= n; ++k)
        if (std::gcd(k, n) == 1)
            ++count;
    return count;
}

CyclotomicField::CyclotomicField(unsigned conductor)
    : conductor_(conductor), phi_(cyclotomic_polynomial(conductor)),
      degree_(static_cast<std::size_t>(phi_.degree()))
{
}

CycloNumber::CycloNumber(std::shared_ptr<const CyclotomicField> field, std::vector<Rational> coeffs)
    : field_(std::move(field)), coeffs_(std::move(coeffs))
{
}

CycloNumber CycloNumber::zeta(unsigned n, long power)
{
    return zeta(std::make_shared<const CyclotomicField>(n), power);
}

CycloNumber CycloNumber::zeta(const std::shared_ptr<const CyclotomicField>& field, long power)
{
    const long n = field->conductor();
    long e = ((power % n) + n) % n;
    return from_dense(field, DensePoly::monomial(Rational(1), static_cast<std::size_t>(e)));
}

CycloNumber CycloNumber::from_dense(const std::shared_ptr<const CyclotomicField>& field, const DensePoly& p)
{
    if (!field)
        return CycloNumber(p.coeff(0));
    auto r = divmod(p, field->minimal_polynomial()).second;
    std::vector<Rational> c(field->degree());
    for (std::size_t i = 0; i < c.size(); ++i)
        c[i] = r.coeff(i);
    return CycloNumber(field, std::move(c));
}

bool CycloNumber::is_zero() const
{
    for (const auto& c : coeffs_)
        if (c != 0)
            return false;
    return true;
}

bool CycloNumber::is_rational() const
{
    for (std::size_t i = 1; i < coeffs_.size(); ++i)
        if (coeffs_[i] != 0)
            return false;
    return true;
}

Rational CycloNumber::rational_value() const
{
    if (!is_rational())
        throw std::domain_error("cyclotomic number is not rational");
    return coeffs_[0];
}

void CycloNumber::promote_to(const std::shared_ptr<const CyclotomicField>& field)
{
    if (!field || field_)
        return;
    std::vector<Rational> c(field->degree());
    c[0] = coeffs_[0];
    field_ = field;
    coeffs_ = std::move(c);
}

std::shared_ptr<const CyclotomicField> CycloNumber::common_field(const CycloNumber& a, const CycloNumber& b)
{
    if (!a.field_)
        return b.field_;
    if (!b.field_)
        return a.field_;
    if (a.field_->conductor() != b.field_->conductor())
        throw std::invalid_argument("cyclotomic conductor mismatch: " + std::to_string(a.field_->conductor()) +
                                    " vs " + std::to_string(b.field_->conductor()));
    return a.field_;
}

CycloNumber CycloNumber::operator-() const
{
    CycloNumber r = *this;
    for (auto& c : r.coeffs_)
        c = -c;
    return r;
}

CycloNumber& CycloNumber::operator+=(const CycloNumber& rhs)
{
    auto f = common_field(*this, rhs);
    promote_to(f);
    CycloNumber b = rhs;
    b.promote_to(f);
    for (std::size_t i = 0; i < coeffs_.size(); ++i)
        coeffs_[i] += b.coeffs_[i];
    return *this;
}

CycloNumber& CycloNumber::operator-=(const CycloNumber& rhs)
{
    return *this += -rhs;
}

CycloNumber& CycloNumber::operator*=(const CycloNumber& rhs)
{
    if (!field_ && !rhs.field_) {
        coeffs_[0] *= rhs.coeffs_[0];
        return *this;
    }
    if (!rhs.field_ || !field_) {
        const Rational scalar = field_ ? rhs.coeffs_[0] : coeffs_[0];
        if (!field_)
            *this = rhs;
        for (auto& c : coeffs_)
            c *= scalar;
        return *this;
    }
    auto f = common_field(*this, rhs);
    *this = from_dense(f, as_dense() * rhs.as_dense());
    return *this;
}

CycloNumber CycloNumber::inverse() const
{
    if (is_zero())
        throw std::domain_error("inverse of zero cyclotomic number");
    if (!field_)
        return CycloNumber(Rational(1) / coeffs_[0]);
    auto bez = extended_gcd(as_dense(), field_->minimal_polynomial());
    if (bez.gcd.degree() != 0)
        throw std::logic_error("cyclotomic inverse: non-trivial gcd with minimal polynomial");
    return from_dense(field_, bez.a);
}

CycloNumber CycloNumber::galois(long k) const
{
    if (!field_)
        return *this;
    const long n = field_->conductor();
    if (std::gcd(((k % n) + n) % n, n) != 1)
        throw std::domain_error("galois exponent not coprime to conductor");
    CycloNumber acc(field_, std::vector<Rational>(field_->degree()));
    for (std::size_t i = 0; i < coeffs_.size(); ++i) {
        if (coeffs_[i] == 0)
            continue;
        acc += zeta(field_, static_cast<long>(i) * k) * CycloNumber(coeffs_[i]);
    }
    return acc;
}

CycloNumber CycloNumber::pow(long e) const
{
    if (e < 0)
        return inverse().pow(-e);
    CycloNumber result(1);
    CycloNumber base = *this;
    while (e) {
        if (e & 1L)
            result *= base;
        e >>= 1L;
        if (e)
            base *= base;
    }
    return result;
}

bool operator==(const CycloNumber& a, const CycloNumber& b)
{
    if (a.is_rational() && b.is_rational())
        return a.coeffs_[0] == b.coeffs_[0];
    if (a.is_rational() != b.is_rational())
        return false;
    if (a.conductor() != b.conductor())
        return false;
    return a.coeffs_ == b.coeffs_;
}

std::string CycloNumber::to_string(const std::string& symbol) const
{
    if (is_rational())
        return coeffs_[0].get_str();
    std::string out;
    for (std::size_t k = coeffs_.size(); k-- > 0;) {
        const Rational& c = coeffs_[k];
        if (c == 0)
            continue;
        Rational mag = abs(c);
        if (out.empty())
            out += sgn(c) < 0 ? "-" : "";
        else
            out += sgn(c) < 0 ? " - " : " + ";
        std::string mono = k == 0 ? "" : (k == 1 ? symbol : symbol + "^" + std::to_string(k));
        if (mono.empty())
            out += mag.get_str();
        else if (mag == 1)
            out += mono;
        else
            out += mag.get_str() + "*" + mono;
    }
    return out;
}

}  // namespace kras
