#pragma once

#include "kras/lnd/derivation.hpp"

namespace kras::lnd {

/// X(s): x^m z = y^r + t^s + x in the ring (x, y, z, t).
AmbientRing koras_russell_ambient(int m, int r, int s);

/// x^m d/dy + sign * r y^(r-1) d/dz. sign = +1 is tangent to X(s); the
/// opposite sign is kept to record its tangency defect.
Derivation koras_russell_derivation(int m, int r, int sign);

/// Certificates showing {x = y = t = 0} is the zero set of the images of the
/// tangent derivation on X(s).
std::vector<IdealCertificate> koras_russell_fixed_locus_certificates(int m, int r, int s);

/// (x, y, t)
std::vector<Poly> koras_russell_line_ideal();

/// The Russell-cubic comparison map. Residuals are reported, not asserted.
/// Sign variant (a, b) uses 2tv d/du + a x^2 d/dv + b (t^2 - 3/2 x u^2) d/dw
/// on v^2 t - x^2 u = 1 in the ring (x, t, u, v, w).
struct RussellVariant {
    int a = 1;
    int b = 1;
    Poly tangency_residual;
    Poly y_residual;
    Poly z_residual;
};

struct RussellExample {
    RingPtr ring;
    Poly relation;
    Poly y_expr;
    Poly z_expr;
    std::vector<RussellVariant> variants;
    Poly cubic_residual;  // x^2 z - (y^2 - t^3 + x) modulo the relation
};

RussellExample russell_example();

Report example_verify();

}  // namespace kras::lnd
