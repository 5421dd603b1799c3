#include "kras/algebra/polynomial.hpp"

#include <algorithm>
#include <stdexcept>

namespace kras {

Rational CoeffTraits<Rational>::inverse(const Rational& c)
{
    if (c == 0)
        throw std::domain_error("inverse of zero");
    return Rational(1) / c;
}

template <class K>
Polynomial<K>::Polynomial(RingPtr ring) : ring_(std::move(ring))
{
    if (!ring_)
        throw std::invalid_argument("polynomial without ring");
}

template <class K>
Polynomial<K> Polynomial<K>::constant(RingPtr ring, const K& c)
{
    Polynomial p(std::move(ring));
    p.add_term(Monomial(p.ring_->arity(), 0), c);
    return p;
}

template <class K>
Polynomial<K> Polynomial<K>::variable(RingPtr ring, std::string_view name)
{
    Polynomial p(std::move(ring));
    Monomial m(p.ring_->arity(), 0);
    m[p.ring_->require(name)] = 1;
    p.add_term(m, K(1));
    return p;
}

template <class K>
Polynomial<K> Polynomial<K>::monomial(RingPtr ring, Monomial exponents, const K& c)
{
    Polynomial p(std::move(ring));
    p.add_term(exponents, c);
    return p;
}

template <class K>
void Polynomial<K>::check_monomial(const Monomial& m) const
{
    if (m.size() != ring_->arity())
        throw std::invalid_argument("exponent vector does not match ring arity");
    for (std::size_t i = 0; i < m.size(); ++i)
        if (m[i] < 0 && !ring_->is_laurent(i))
            throw std::domain_error("negative exponent on non-Laurent variable '" + ring_->names[i] + "'");
}

template <class K>
void Polynomial<K>::require_same_ring(const Polynomial& other) const
{
    if (!same_ring(ring_, other.ring_))
        throw std::invalid_argument("ring mismatch");
}

template <class K>
void Polynomial<K>::add_term(const Monomial& m, const K& c)
{
    if (CoeffTraits<K>::is_zero(c))
        return;
    check_monomial(m);
    auto [it, inserted] = terms_.try_emplace(m, c);
    if (!inserted) {
        it->second += c;
        if (CoeffTraits<K>::is_zero(it->second))
            terms_.erase(it);
    }
}

template <class K>
bool Polynomial<K>::is_constant() const
{
    if (terms_.empty())
        return true;
    if (terms_.size() != 1)
        return false;
    const auto& m = terms_.begin()->first;
    return std::all_of(m.begin(), m.end(), [](int e) { return e == 0; });
}

template <class K>
K Polynomial<K>::constant_term() const
{
    return coefficient(Monomial(ring_->arity(), 0));
}

template <class K>
K Polynomial<K>::coefficient(const Monomial& m) const
{
    auto it = terms_.find(m);
    return it == terms_.end() ? K(0) : it->second;
}

template <class K>
const Monomial& Polynomial<K>::leading_monomial() const
{
    if (terms_.empty())
        throw std::domain_error("leading term of zero polynomial");
    return terms_.begin()->first;
}

template <class K>
const K& Polynomial<K>::leading_coefficient() const
{
    if (terms_.empty())
        throw std::domain_error("leading term of zero polynomial");
    return terms_.begin()->second;
}

template <class K>
int Polynomial<K>::degree_in(std::size_t var) const
{
    if (terms_.empty())
        return 0;
    int d = terms_.begin()->first[var];
    for (const auto& [m, c] : terms_)
        d = std::max(d, m[var]);
    return d;
}

template <class K>
int Polynomial<K>::min_degree_in(std::size_t var) const
{
    if (terms_.empty())
        return 0;
    int d = terms_.begin()->first[var];
    for (const auto& [m, c] : terms_)
        d = std::min(d, m[var]);
    return d;
}

template <class K>
bool Polynomial<K>::involves(std::size_t var) const
{
    return std::any_of(terms_.begin(), terms_.end(), [var](const auto& t) { return t.first[var] != 0; });
}

template <class K>
Polynomial<K> Polynomial<K>::operator-() const
{
    Polynomial r = *this;
    for (auto& [m, c] : r.terms_)
        c = -c;
    return r;
}

template <class K>
Polynomial<K>& Polynomial<K>::operator+=(const Polynomial& rhs)
{
    require_same_ring(rhs);
    for (const auto& [m, c] : rhs.terms_)
        add_term(m, c);
    return *this;
}

template <class K>
Polynomial<K>& Polynomial<K>::operator-=(const Polynomial& rhs)
{
    require_same_ring(rhs);
    for (const auto& [m, c] : rhs.terms_)
        add_term(m, -c);
    return *this;
}

template <class K>
Polynomial<K>& Polynomial<K>::operator*=(const Polynomial& rhs)
{
    require_same_ring(rhs);
    Polynomial out(ring_);
    Monomial m(ring_->arity());
    for (const auto& [ma, ca] : terms_) {
        for (const auto& [mb, cb] : rhs.terms_) {
            for (std::size_t i = 0; i < m.size(); ++i)
                m[i] = ma[i] + mb[i];
            out.add_term(m, ca * cb);
        }
    }
    terms_ = std::move(out.terms_);
    return *this;
}

template <class K>
Polynomial<K>& Polynomial<K>::operator*=(const K& scalar)
{
    if (CoeffTraits<K>::is_zero(scalar)) {
        terms_.clear();
        return *this;
    }
    for (auto& [m, c] : terms_)
        c *= scalar;
    return *this;
}

template <class K>
Polynomial<K> Polynomial<K>::pow(long e) const
{
    if (e < 0) {
        if (!is_monomial())
            throw std::domain_error("negative power of a non-monomial");
        const auto& [m, c] = *terms_.begin();
        Monomial inv(m.size());
        for (std::size_t i = 0; i < m.size(); ++i)
            inv[i] = -m[i];
        return monomial(ring_, inv, CoeffTraits<K>::inverse(c)).pow(-e);
    }
    Polynomial result = constant(ring_, K(1));
    Polynomial base = *this;
    while (e) {
        if (e & 1L)
            result *= base;
        e >>= 1L;
        if (e)
            base *= base;
    }
    return result;
}

template <class K>
Polynomial<K> Polynomial<K>::derivative(std::size_t var) const
{
    Polynomial out(ring_);
    for (const auto& [m, c] : terms_) {
        if (m[var] == 0)
            continue;
        Monomial d = m;
        d[var] -= 1;
        out.add_term(d, c * K(static_cast<long>(m[var])));
    }
    return out;
}

template <class K>
Polynomial<K> Polynomial<K>::shift(const Monomial& by) const
{
    Polynomial out(ring_);
    Monomial d(ring_->arity());
    for (const auto& [m, c] : terms_) {
        for (std::size_t i = 0; i < d.size(); ++i)
            d[i] = m[i] + by[i];
        out.add_term(d, c);
    }
    return out;
}

template <class K>
Polynomial<K> Polynomial<K>::truncate(std::size_t var, int bound) const
{
    Polynomial out(ring_);
    for (const auto& [m, c] : terms_)
        if (m[var] < bound)
            out.terms_.emplace_hint(out.terms_.end(), m, c);
    return out;
}

template <class K>
Polynomial<K> Polynomial<K>::coefficient_in(std::size_t var, int e) const
{
    Polynomial out(ring_);
    for (const auto& [m, c] : terms_) {
        if (m[var] != e)
            continue;
        Monomial d = m;
        d[var] = 0;
        out.add_term(d, c);
    }
    return out;
}

template <class K>
std::optional<Polynomial<K>> exact_divide(const Polynomial<K>& f, const Polynomial<K>& g)
{
    if (!same_ring(f.ring(), g.ring()))
        throw std::invalid_argument("ring mismatch");
    if (g.is_zero())
        throw std::domain_error("exact_divide by zero polynomial");
    const RingPtr& ring = f.ring();
    if (f.is_zero())
        return Polynomial<K>(ring);

    // Clear monomial denominators: f = v^a f', g = v^b g' with g' not
    // divisible by v; then g | f in the Laurent ring iff g' | f'.
    Monomial fshift(ring->arity(), 0), gshift(ring->arity(), 0), result_shift(ring->arity(), 0);
    for (std::size_t i = 0; i < ring->arity(); ++i) {
        if (!ring->is_laurent(i))
            continue;
        fshift[i] = -f.min_degree_in(i);
        gshift[i] = -g.min_degree_in(i);
        result_shift[i] = gshift[i] - fshift[i];
    }
    Polynomial<K> rem = f.shift(fshift);
    const Polynomial<K> div = g.shift(gshift);
    const Monomial& lm = div.leading_monomial();
    const K lc_inv = CoeffTraits<K>::inverse(div.leading_coefficient());

    Polynomial<K> quot(ring);
    Monomial d(ring->arity());
    while (!rem.is_zero()) {
        const Monomial& rm = rem.leading_monomial();
        for (std::size_t i = 0; i < d.size(); ++i) {
            d[i] = rm[i] - lm[i];
            if (d[i] < 0)
                return std::nullopt;
        }
        K c = rem.leading_coefficient() * lc_inv;
        auto step = Polynomial<K>::monomial(ring, d, c);
        quot += step;
        rem -= step * div;
    }
    return quot.shift(result_shift);
}

template <class K>
std::pair<Polynomial<K>, Polynomial<K>> divide_remainder(const Polynomial<K>& f, const Polynomial<K>& g)
{
    if (!same_ring(f.ring(), g.ring()))
        throw std::invalid_argument("ring mismatch");
    if (g.is_zero())
        throw std::domain_error("division by zero polynomial");
    const RingPtr& ring = f.ring();
    auto nonneg = [](const Polynomial<K>& p) {
        for (const auto& [m, c] : p.terms())
            for (int e : m)
                if (e < 0)
                    return false;
        return true;
    };
    if (!nonneg(f) || !nonneg(g))
        throw std::domain_error("divide_remainder needs non-negative exponents");

    const Monomial& lm = g.leading_monomial();
    const K lc_inv = CoeffTraits<K>::inverse(g.leading_coefficient());
    Polynomial<K> p = f, quot(ring), rem(ring);
    Monomial d(ring->arity());
    while (!p.is_zero()) {
        const Monomial pm = p.leading_monomial();
        const K pc = p.leading_coefficient();
        bool divisible = true;
        for (std::size_t i = 0; i < d.size(); ++i) {
            d[i] = pm[i] - lm[i];
            if (d[i] < 0)
                divisible = false;
        }
        if (divisible) {
            auto step = Polynomial<K>::monomial(ring, d, pc * lc_inv);
            quot += step;
            p -= step * g;
        } else {
            auto lead = Polynomial<K>::monomial(ring, pm, pc);
            rem += lead;
            p -= lead;
        }
    }
    return {quot, rem};
}

template <class K>
Polynomial<K> substitute(const Polynomial<K>& f, const std::map<std::string, Polynomial<K>>& assignment,
                         const RingPtr& target)
{
    const Ring& src = *f.ring();
    std::vector<Polynomial<K>> images;
    images.reserve(src.arity());
    for (std::size_t i = 0; i < src.arity(); ++i) {
        auto it = assignment.find(src.names[i]);
        if (it != assignment.end()) {
            if (!same_ring(it->second.ring(), target))
                throw std::invalid_argument("substitution image for '" + src.names[i] + "' lives in another ring");
            images.push_back(it->second);
        } else if (target->index_of(src.names[i])) {
            images.push_back(Polynomial<K>::variable(target, src.names[i]));
        } else {
            bool used = f.involves(i);
            if (used)
                throw std::invalid_argument("unbound variable '" + src.names[i] + "' in substitution");
            images.push_back(Polynomial<K>(target));
        }
    }

    std::map<std::pair<std::size_t, int>, Polynomial<K>> power_cache;
    auto power = [&](std::size_t var, int e) -> const Polynomial<K>& {
        auto key = std::make_pair(var, e);
        auto it = power_cache.find(key);
        if (it == power_cache.end())
            it = power_cache.emplace(key, images[var].pow(e)).first;
        return it->second;
    };

    Polynomial<K> out(target);
    for (const auto& [m, c] : f.terms()) {
        Polynomial<K> term = Polynomial<K>::constant(target, c);
        for (std::size_t i = 0; i < m.size(); ++i)
            if (m[i] != 0)
                term *= power(i, m[i]);
        out += term;
    }
    return out;
}

template <class K>
std::string to_string(const Polynomial<K>& p)
{
    if (p.is_zero())
        return "0";
    const Ring& ring = *p.ring();
    std::string out;
    bool first = true;
    for (const auto& [m, c] : p.terms()) {
        std::string mono;
        for (std::size_t i = 0; i < m.size(); ++i) {
            if (m[i] == 0)
                continue;
            if (!mono.empty())
                mono += "*";
            mono += ring.names[i];
            if (m[i] != 1)
                mono += "^" + std::to_string(m[i]);
        }
        if (CoeffTraits<K>::is_rational(c)) {
            Rational q = CoeffTraits<K>::rational(c);
            const bool negative = sgn(q) < 0;
            Rational mag = abs(q);
            if (first)
                out += negative ? "-" : "";
            else
                out += negative ? " - " : " + ";
            if (mono.empty())
                out += mag.get_str();
            else if (mag == 1)
                out += mono;
            else
                out += mag.get_str() + "*" + mono;
        } else {
            if (!first)
                out += " + ";
            out += "(" + CoeffTraits<K>::to_string(c) + ")";
            if (!mono.empty())
                out += "*" + mono;
        }
        first = false;
    }
    return out;
}

CycloPoly to_cyclo(const Poly& p)
{
    CycloPoly out(p.ring());
    for (const auto& [m, c] : p.terms())
        out.add_term(m, CycloNumber(c));
    return out;
}

template class Polynomial<Rational>;
template class Polynomial<CycloNumber>;

template std::optional<Poly> exact_divide(const Poly&, const Poly&);
template std::optional<CycloPoly> exact_divide(const CycloPoly&, const CycloPoly&);
template std::pair<Poly, Poly> divide_remainder(const Poly&, const Poly&);
template std::pair<CycloPoly, CycloPoly> divide_remainder(const CycloPoly&, const CycloPoly&);
template Poly substitute(const Poly&, const std::map<std::string, Poly>&, const RingPtr&);
template CycloPoly substitute(const CycloPoly&, const std::map<std::string, CycloPoly>&, const RingPtr&);
template std::string to_string(const Poly&);
template std::string to_string(const CycloPoly&);

}  // namespace kras
