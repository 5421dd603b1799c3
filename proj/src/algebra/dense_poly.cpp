#include "kras/algebra/dense_poly.hpp"

#include <stdexcept>

namespace kras {

DensePoly::DensePoly(std::vector<Rational> coeffs) : coeffs_(std::move(coeffs))
{
    trim();
}

DensePoly::DensePoly(const Rational& constant)
{
    if (constant != 0)
        coeffs_.push_back(constant);
}

DensePoly DensePoly::monomial(const Rational& c, std::size_t degree)
{
    if (c == 0)
        return {};
    std::vector<Rational> v(degree + 1);
    v[degree] = c;
    return DensePoly(std::move(v));
}

void DensePoly::trim()
{
    while (!coeffs_.empty() && coeffs_.back() == 0)
        coeffs_.pop_back();
}

Rational DensePoly::coeff(std::size_t i) const
{
    return i < coeffs_.size() ? coeffs_[i] : Rational(0);
}

Rational DensePoly::leading() const
{
    return coeffs_.empty() ? Rational(0) : coeffs_.back();
}

DensePoly DensePoly::monic() const
{
    if (is_zero())
        return {};
    DensePoly r = *this;
    Rational lc = leading();
    for (auto& c : r.coeffs_)
        c /= lc;
    return r;
}

DensePoly DensePoly::truncate(std::size_t n) const
{
    if (coeffs_.size() <= n)
        return *this;
    return DensePoly(std::vector<Rational>(coeffs_.begin(), coeffs_.begin() + static_cast<long>(n)));
}

DensePoly DensePoly::derivative() const
{
    if (coeffs_.size() <= 1)
        return {};
    std::vector<Rational> v(coeffs_.size() - 1);
    for (std::size_t i = 1; i < coeffs_.size(); ++i)
        v[i - 1] = coeffs_[i] * static_cast<long>(i);
    return DensePoly(std::move(v));
}

Rational DensePoly::evaluate(const Rational& at) const
{
    Rational acc(0);
    for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it)
        acc = acc * at + *it;
    return acc;
}

DensePoly DensePoly::scale_argument(const Rational& c) const
{
    std::vector<Rational> v = coeffs_;
    Rational p(1);
    for (auto& coef : v) {
        coef *= p;
        p *= c;
    }
    return DensePoly(std::move(v));
}

DensePoly DensePoly::operator-() const
{
    DensePoly r = *this;
    for (auto& c : r.coeffs_)
        c = -c;
    return r;
}

DensePoly& DensePoly::operator+=(const DensePoly& rhs)
{
    if (rhs.coeffs_.size() > coeffs_.size())
        coeffs_.resize(rhs.coeffs_.size());
    for (std::size_t i = 0; i < rhs.coeffs_.size(); ++i)
        coeffs_[i] += rhs.coeffs_[i];
    trim();
    return *this;
}

DensePoly& DensePoly::operator-=(const DensePoly& rhs)
{
    if (rhs.coeffs_.size() > coeffs_.size())
        coeffs_.resize(rhs.coeffs_.size());
    for (std::size_t i = 0; i < rhs.coeffs_.size(); ++i)
        coeffs_[i] -= rhs.coeffs_[i];
    trim();
    return *this;
}

DensePoly& DensePoly::operator*=(const DensePoly& rhs)
{
    if (is_zero() || rhs.is_zero()) {
        coeffs_.clear();
        return *this;
    }
    std::vector<Rational> v(coeffs_.size() + rhs.coeffs_.size() - 1);
    for (std::size_t i = 0; i < coeffs_.size(); ++i) {
        if (coeffs_[i] == 0)
            continue;
        for (std::size_t j = 0; j < rhs.coeffs_.size(); ++j)
            v[i + j] += coeffs_[i] * rhs.coeffs_[j];
    }
    coeffs_ = std::move(v);
    trim();
    return *this;
}

DensePoly DensePoly::pow(unsigned long e) const
{
    DensePoly result(Rational(1));
    DensePoly base = *this;
    while (e) {
        if (e & 1UL)
            result *= base;
        e >>= 1UL;
        if (e)
            base *= base;
    }
    return result;
}

std::string DensePoly::to_string(const std::string& var) const
{
    if (is_zero())
        return "0";
    std::string out;
    for (long i = degree(); i >= 0; --i) {
        const Rational& c = coeffs_[static_cast<std::size_t>(i)];
        if (c == 0)
            continue;
        Rational mag = abs(c);
        if (out.empty())
            out += sgn(c) < 0 ? "-" : "";
        else
            out += sgn(c) < 0 ? " - " : " + ";
        std::string mono;
        if (i == 1)
            mono = var;
        else if (i > 1)
            mono = var + "^" + std::to_string(i);
        if (mono.empty())
            out += mag.get_str();
        else if (mag == 1)
            out += mono;
        else
            out += mag.get_str() + "*" + mono;
    }
    return out;
}

std::pair<DensePoly, DensePoly> divmod(const DensePoly& a, const DensePoly& b)
{
    if (b.is_zero())
        throw std::domain_error("polynomial division by zero");
    DensePoly rem = a;
    std::vector<Rational> quot(a.degree() >= b.degree() ? static_cast<std::size_t>(a.degree() - b.degree() + 1) : 0);
    const Rational lc = b.leading();
    while (!rem.is_zero() && rem.degree() >= b.degree()) {
        const auto shift = static_cast<std::size_t>(rem.degree() - b.degree());
        Rational c = rem.leading() / lc;
        quot[shift] += c;
        rem -= DensePoly::monomial(c, shift) * b;
    }
    return {DensePoly(std::move(quot)), rem};
}

BezoutResult extended_gcd(const DensePoly& f, const DensePoly& g)
{
    // Invariant: r0 = s0*f + t0*g, r1 = s1*f + t1*g.
    DensePoly r0 = f, r1 = g;
    DensePoly s0(Rational(1)), s1;
    DensePoly t0, t1(Rational(1));
    while (!r1.is_zero()) {
        auto [q, r] = divmod(r0, r1);
        DensePoly s2 = s0 - q * s1;
        DensePoly t2 = t0 - q * t1;
        r0 = std::move(r1);
        r1 = std::move(r);
        s0 = std::move(s1);
        s1 = std::move(s2);
        t0 = std::move(t1);
        t1 = std::move(t2);
    }
    if (r0.is_zero())
        return {DensePoly(), DensePoly(), DensePoly()};
    const Rational lc = r0.leading();
    DensePoly inv(Rational(1) / lc);
    return {r0 * inv, s0 * inv, t0 * inv};
}

}  // namespace kras
