#include "kras/algebra/univariate.hpp"

#include <stdexcept>

namespace kras {

std::string sole_variable(const Poly& p)
{
    std::string found;
    for (std::size_t i = 0; i < p.ring()->arity(); ++i) {
        if (!p.involves(i))
            continue;
        if (!found.empty())
            throw std::invalid_argument("polynomial is not univariate: " + to_string(p));
        found = p.ring()->names[i];
    }
    return found;
}

DensePoly to_dense(const Poly& p, std::string_view var)
{
    const Ring& ring = *p.ring();
    auto idx = ring.index_of(var);
    std::vector<Rational> coeffs;
    for (const auto& [m, c] : p.terms()) {
        for (std::size_t i = 0; i < m.size(); ++i)
            if (m[i] != 0 && (!idx || i != *idx))
                throw std::invalid_argument("polynomial is not univariate in " + std::string(var));
        int e = idx ? m[*idx] : 0;
        if (e < 0)
            throw std::invalid_argument("negative exponent in univariate conversion");
        if (coeffs.size() <= static_cast<std::size_t>(e))
            coeffs.resize(static_cast<std::size_t>(e) + 1, Rational(0));
        coeffs[static_cast<std::size_t>(e)] = c;
    }
    return DensePoly(coeffs);
}

Poly from_dense(const DensePoly& p, const RingPtr& ring, std::string_view var)
{
    const std::size_t idx = ring->require(var);
    Poly out(ring);
    Monomial m(ring->arity(), 0);
    for (std::size_t i = 0; i < p.coeffs().size(); ++i) {
        m[idx] = static_cast<int>(i);
        out.add_term(m, p.coeffs()[i]);
    }
    return out;
}

UnivariateBezout ext_gcd_univariate(const Poly& f, const Poly& g)
{
    if (!same_ring(f.ring(), g.ring()))
        throw std::invalid_argument("ring mismatch");
    if (f.is_zero() && g.is_zero())
        throw std::invalid_argument("ext_gcd_univariate: both inputs zero");
    std::string vf = sole_variable(f), vg = sole_variable(g);
    if (!vf.empty() && !vg.empty() && vf != vg)
        throw std::invalid_argument("ext_gcd_univariate: inputs in different variables");
    std::string var = vf.empty() ? vg : vf;
    if (var.empty())
        var = f.ring()->names.empty() ? std::string() : f.ring()->names.front();
    if (var.empty())
        throw std::invalid_argument("ext_gcd_univariate: ring has no variables");
    BezoutResult r = extended_gcd(to_dense(f, var), to_dense(g, var));
    return {from_dense(r.gcd, f.ring(), var), from_dense(r.a, f.ring(), var), from_dense(r.b, f.ring(), var)};
}

}  // namespace kras
