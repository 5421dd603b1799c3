#pragma once

#include "kras/algebra/dense_poly.hpp"
#include "kras/algebra/polynomial.hpp"

#include <string>

namespace kras {

/// Name of the only variable occurring in p, or empty when p is constant.
/// Throws std::invalid_argument if p involves two or more variables.
std::string sole_variable(const Poly& p);

/// Throws unless p only involves var with non-negative exponents.
DensePoly to_dense(const Poly& p, std::string_view var);
Poly from_dense(const DensePoly& p, const RingPtr& ring, std::string_view var);

struct UnivariateBezout {
    Poly d;
    Poly a;
    Poly b;
};

/// a*f + b*g = d with d the monic gcd. f and g share one variable.
UnivariateBezout ext_gcd_univariate(const Poly& f, const Poly& g);

}  // namespace kras
