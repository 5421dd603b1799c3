#include "kras/algebra/rational.hpp"

#include <stdexcept>

namespace kras {

Rational make_rational(const Integer& num, const Integer& den)
{
    if (den == 0)
        throw std::domain_error("rational with zero denominator");
    Rational q(num, den);
    q.canonicalize();
    return q;
}

Rational parse_rational(std::string_view text)
{
    std::string s(text);
    Rational q;
    if (q.set_str(s, 10) != 0)
        throw std::invalid_argument("malformed rational literal '" + s + "'");
    if (q.get_den() == 0)
        throw std::domain_error("rational with zero denominator");
    q.canonicalize();
    return q;
}

std::string to_string(const Rational& q)
{
    return q.get_str();
}

namespace {

std::optional<Integer> integer_root(const Integer& n, unsigned long k)
{
    Integer root;
    if (mpz_root(root.get_mpz_t(), n.get_mpz_t(), k) == 0)
        return std::nullopt;
    return root;
}

}  // namespace

std::optional<Rational> rational_root(const Rational& value, unsigned long k)
{
    if (k == 0)
        throw std::domain_error("zeroth root");
    if (k == 1)
        return value;
    const bool negative = sgn(value) < 0;
    if (negative && k % 2 == 0)
        return std::nullopt;
    Integer num = abs(value.get_num());
    auto rn = integer_root(num, k);
    auto rd = integer_root(value.get_den(), k);
    if (!rn || !rd)
        return std::nullopt;
    Rational root = make_rational(negative ? Integer(-*rn) : *rn, *rd);
    return root;
}

Rational rational_pow(const Rational& base, long exponent)
{
    if (exponent < 0) {
        if (base == 0)
            throw std::domain_error("negative power of zero");
        return rational_pow(Rational(1) / base, -exponent);
    }
    Rational result(1);
    Rational b = base;
    unsigned long e = static_cast<unsigned long>(exponent);
    while (e) {
        if (e & 1UL)
            result *= b;
        b *= b;
        e >>= 1UL;
    }
    return result;
}

}  // namespace kras
