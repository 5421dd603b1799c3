#pragma once

#include "kras/algebra/dense_poly.hpp"
#include "kras/algebra/polynomial.hpp"
#include "kras/report.hpp"

#include <array>
#include <optional>
#include <vector>

namespace kras::kr {

/// X(m, r, s, q): x^m z = y^r + t^s + x q(x).
struct KRDatum {
    int m = 2;
    int r = 2;
    int s = 3;
    DensePoly q = DensePoly(Rational(1));
};

/// Throws std::invalid_argument unless m >= 2, r, s >= 2, gcd(r, s) = 1, q(0) != 0.
void validate(const KRDatum& d);

/// Ring (x, y, z, t) that defining polynomials live in.
RingPtr kr_ring();

/// F = x^m z - y^r - t^s - x q(x).
Poly defining_polynomial(const KRDatum& d);

/// Rescale x -> lambda x, z -> lambda^-m z with lambda = 1/q(0). The result
/// has q(0) = 1 and defines an isomorphic variety.
struct UnitNormalization {
    KRDatum datum;
    Rational lambda;
};
UnitNormalization normalize_unit_constant(const KRDatum& d);

struct StableIsoCertificate {
    int m = 0;
    DensePoly f, g1, g2, h1, h2, h3;
    std::array<std::array<DensePoly, 3>, 3> matrix;
    Rational det;
    unsigned g2_shift = 0;  // multiples of x^m added to g2 to reach gcd 1
};

/// Requires q(0) = 1 (std::invalid_argument otherwise).
StableIsoCertificate build_stable_iso(const KRDatum& d);

/// det of the 3x3 polynomial matrix, expanded exactly.
DensePoly matrix_determinant(const std::array<std::array<DensePoly, 3>, 3>& m);

Report verify_stable_iso(const StableIsoCertificate& cert, const KRDatum& d);

struct IsoWitness {
    Rational lambda;
    Rational epsilon;
};

/// Decides q2 = eps * q1(lambda x) mod x^(m-1) over the rationals.
/// Throws std::invalid_argument if (m, r, s) differ.
std::optional<IsoWitness> decide_isomorphic(const KRDatum& d1, const KRDatum& d2);

/// Coordinates (a_2, ..., a_{m-1}) for q = 1 + x + sum a_i x^i.
struct ModuliPoint {
    std::vector<Rational> coords;
};

KRDatum moduli_embed(const ModuliPoint& p, int m, int r, int s);
/// Absent when q(0) or the linear coefficient vanishes.
std::optional<ModuliPoint> moduli_extract(const KRDatum& d);

}  // namespace kras::kr
