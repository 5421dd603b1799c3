#pragma once

#include "kras/algebra/polynomial.hpp"
#include "kras/report.hpp"

#include <optional>
#include <string>
#include <vector>

namespace kras::kr {

/// How an automorphism of the base ring permutes the root indices:
/// permutation[j] is the index of the image of sigma_j.
struct GaloisAction {
    std::string description;
    long zeta_power = 0;  // zeta -> zeta^k, or 0 for the u-rotation
    std::vector<int> permutation;
};

/// Ring (x, y, u) with u Laurent; roots and remainders live here.
RingPtr hensel_cover_ring();

/// Factorisation of y^r + t^s + x over Q(zeta_2r)[u^{+-1}][[x]] to precision
/// x^m, where t = u^r.
struct HenselSplit {
    int r = 0, s = 0, m = 0;
    std::shared_ptr<const CyclotomicField> field;
    RingPtr ring = hensel_cover_ring();
    std::vector<CycloPoly> roots;  // sigma_j(x) mod x^m, initial value zeta^(2j+1) u^s
    CycloPoly remainder{hensel_cover_ring()};  // exact quotient of the defect by x^m
    std::optional<Poly> descended;  // remainder in (x, y, t) with t Laurent, if it descends
    std::vector<GaloisAction> galois;
    Report checks;
};

/// Requires r, s >= 2, gcd(r, s) = 1, m >= 2.
HenselSplit hensel_split(int r, int s, int m);

/// Ring (x, y, t) with t Laurent used for descended remainders.
RingPtr hensel_base_ring();

/// Antisymmetry and additive cocycle identities for x^-m (sigma_j - sigma_k).
Report transition_cocycle_check(const HenselSplit& h);

/// Product of (y - sigma_j), computed exactly.
CycloPoly root_product(const HenselSplit& h);

}  // namespace kras::kr
