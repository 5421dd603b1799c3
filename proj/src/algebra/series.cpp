#include "kras/algebra/series.hpp"

#include <stdexcept>

namespace kras {

TruncatedSeries::TruncatedSeries(std::string variable, std::size_t modulus)
    : variable_(std::move(variable)), coeffs_(modulus, Rational(0))
{
    if (modulus == 0)
        throw std::invalid_argument("series modulus must be positive");
}

TruncatedSeries::TruncatedSeries(std::string variable, std::size_t modulus, const DensePoly& p)
    : TruncatedSeries(std::move(variable), modulus)
{
    for (std::size_t i = 0; i < modulus; ++i)
        coeffs_[i] = p.coeff(i);
}

void TruncatedSeries::require_compatible(const TruncatedSeries& rhs) const
{
    if (variable_ != rhs.variable_ || coeffs_.size() != rhs.coeffs_.size())
        throw std::invalid_argument("series in different rings");
}

TruncatedSeries& TruncatedSeries::operator+=(const TruncatedSeries& rhs)
{
    require_compatible(rhs);
    for (std::size_t i = 0; i < coeffs_.size(); ++i)
        coeffs_[i] += rhs.coeffs_[i];
    return *this;
}

TruncatedSeries& TruncatedSeries::operator-=(const TruncatedSeries& rhs)
{
    require_compatible(rhs);
    for (std::size_t i = 0; i < coeffs_.size(); ++i)
        coeffs_[i] -= rhs.coeffs_[i];
    return *this;
}

TruncatedSeries& TruncatedSeries::operator*=(const TruncatedSeries& rhs)
{
    require_compatible(rhs);
    const std::size_t m = coeffs_.size();
    std::vector<Rational> out(m, Rational(0));
    for (std::size_t i = 0; i < m; ++i) {
        if (coeffs_[i] == 0)
            continue;
        for (std::size_t j = 0; i + j < m; ++j)
            out[i + j] += coeffs_[i] * rhs.coeffs_[j];
    }
    coeffs_ = std::move(out);
    return *this;
}

TruncatedSeries& TruncatedSeries::operator*=(const Rational& c)
{
    for (auto& a : coeffs_)
        a *= c;
    return *this;
}

// e' = g' e, i.e. n e_n = sum_{k=1..n} k g_k e_{n-k}.
TruncatedSeries series_exp(const TruncatedSeries& g)
{
    if (g[0] != 0)
        throw std::domain_error("series_exp needs zero constant term");
    const std::size_t m = g.modulus();
    std::vector<Rational> e(m, Rational(0));
    e[0] = 1;
    for (std::size_t n = 1; n < m; ++n) {
        Rational acc = 0;
        for (std::size_t k = 1; k <= n; ++k)
            acc += Rational(static_cast<long>(k)) * g[k] * e[n - k];
        e[n] = acc / Rational(static_cast<long>(n));
    }
    return TruncatedSeries(g.variable(), m, DensePoly(e));
}

// u l' = u', i.e. n l_n = n u_n - sum_{k=1..n-1} k l_k u_{n-k}.
TruncatedSeries series_log(const TruncatedSeries& u)
{
    if (u[0] != 1)
        throw std::domain_error("series_log needs constant term 1");
    const std::size_t m = u.modulus();
    std::vector<Rational> l(m, Rational(0));
    for (std::size_t n = 1; n < m; ++n) {
        Rational acc = Rational(static_cast<long>(n)) * u[n];
        for (std::size_t k = 1; k < n; ++k)
            acc -= Rational(static_cast<long>(k)) * l[k] * u[n - k];
        l[n] = acc / Rational(static_cast<long>(n));
    }
    return TruncatedSeries(u.variable(), m, DensePoly(l));
}

}  // namespace kras
