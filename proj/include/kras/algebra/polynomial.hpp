#pragma once

#include "kras/algebra/cyclotomic.hpp"
#include "kras/algebra/rational.hpp"
#include "kras/algebra/ring.hpp"

#include <map>
#include <optional>
#include <string>
#include <utility>

namespace kras {

template <class K>
struct CoeffTraits;

template <>
struct CoeffTraits<Rational> {
    static bool is_zero(const Rational& c) { return c == 0; }
    static bool is_rational(const Rational&) { return true; }
    static Rational rational(const Rational& c) { return c; }
    static Rational inverse(const Rational& c);
    static std::string to_string(const Rational& c) { return c.get_str(); }
};

template <>
struct CoeffTraits<CycloNumber> {
    static bool is_zero(const CycloNumber& c) { return c.is_zero(); }
    static bool is_rational(const CycloNumber& c) { return c.is_rational(); }
    static Rational rational(const CycloNumber& c) { return c.rational_value(); }
    static CycloNumber inverse(const CycloNumber& c) { return c.inverse(); }
    static std::string to_string(const CycloNumber& c) { return c.to_string(); }
};

/// Sparse multivariate polynomial over K = Rational or CycloNumber.
///
/// Terms are kept in graded lexicographic order (ring variable order), zero
/// coefficients are never stored, and negative exponents appear only on
/// variables the ring marks as Laurent. Values are immutable in practice;
/// all arithmetic returns fresh polynomials.
template <class K>
class Polynomial {
public:
    using Coeff = K;
    using Terms = std::map<Monomial, K, GrLexGreater>;

    explicit Polynomial(RingPtr ring);

    static Polynomial constant(RingPtr ring, const K& c);
    static Polynomial variable(RingPtr ring, std::string_view name);
    static Polynomial monomial(RingPtr ring, Monomial exponents, const K& c);

    const RingPtr& ring() const { return ring_; }
    const Terms& terms() const { return terms_; }
    std::size_t size() const { return terms_.size(); }
    bool is_zero() const { return terms_.empty(); }
    bool is_constant() const;
    bool is_monomial() const { return terms_.size() == 1; }
    K constant_term() const;
    K coefficient(const Monomial& m) const;
    const Monomial& leading_monomial() const;
    const K& leading_coefficient() const;

    /// Largest / smallest exponent of variable i (0 for the zero polynomial).
    int degree_in(std::size_t var) const;
    int min_degree_in(std::size_t var) const;
    bool involves(std::size_t var) const;

    Polynomial operator-() const;
    Polynomial& operator+=(const Polynomial& rhs);
    Polynomial& operator-=(const Polynomial& rhs);
    Polynomial& operator*=(const Polynomial& rhs);
    Polynomial& operator*=(const K& scalar);
    friend Polynomial operator+(Polynomial a, const Polynomial& b) { return a += b; }
    friend Polynomial operator-(Polynomial a, const Polynomial& b) { return a -= b; }
    friend Polynomial operator*(Polynomial a, const Polynomial& b) { return a *= b; }
    friend Polynomial operator*(Polynomial a, const K& c) { return a *= c; }
    friend Polynomial operator*(const K& c, Polynomial a) { return a *= c; }
    friend bool operator==(const Polynomial& a, const Polynomial& b)
    {
        return same_ring(a.ring_, b.ring_) && a.terms_ == b.terms_;
    }

    /// Negative powers are allowed for monomials in Laurent variables.
    Polynomial pow(long e) const;
    Polynomial derivative(std::size_t var) const;
    /// Multiply by the monomial with the given exponent vector.
    Polynomial shift(const Monomial& by) const;
    /// Drop every term whose exponent in var is >= bound.
    Polynomial truncate(std::size_t var, int bound) const;
    /// Part with var-exponent exactly e, with that exponent cleared.
    Polynomial coefficient_in(std::size_t var, int e) const;

    void add_term(const Monomial& m, const K& c);

private:
    void check_monomial(const Monomial& m) const;
    void require_same_ring(const Polynomial& other) const;

    RingPtr ring_;
    Terms terms_;
};

using Poly = Polynomial<Rational>;
using CycloPoly = Polynomial<CycloNumber>;

/// f / g when g divides f exactly, otherwise nullopt. Laurent variables are
/// handled by clearing monomial denominators before dividing.
template <class K>
std::optional<Polynomial<K>> exact_divide(const Polynomial<K>& f, const Polynomial<K>& g);

/// Multivariate division by a single polynomial in graded lex order:
/// f = q*g + r with no term of r divisible by the leading term of g.
/// A single polynomial is a Groebner basis of its ideal, so r is the
/// canonical residue of f modulo (g). Polynomial rings only.
template <class K>
std::pair<Polynomial<K>, Polynomial<K>> divide_remainder(const Polynomial<K>& f, const Polynomial<K>& g);

/// Composition. Variables of f without an entry map to the same-named
/// variable of the target ring; a variable found in neither is an error.
template <class K>
Polynomial<K> substitute(const Polynomial<K>& f, const std::map<std::string, Polynomial<K>>& assignment,
                         const RingPtr& target);

/// Re-express f in another ring with the same variable names.
template <class K>
Polynomial<K> embed(const Polynomial<K>& f, const RingPtr& target)
{
    return substitute(f, {}, target);
}

template <class K>
std::string to_string(const Polynomial<K>& p);

/// Canonical polynomial grammar (see docs/grammar.md).
Poly parse_polynomial(std::string_view text, const RingPtr& ring);
/// Same grammar; the identifier `zeta` denotes the generator of Q(zeta_n).
CycloPoly parse_cyclo_polynomial(std::string_view text, const RingPtr& ring,
                                 const std::shared_ptr<const CyclotomicField>& field);

CycloPoly to_cyclo(const Poly& p);

class ParseError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

}  // namespace kras
