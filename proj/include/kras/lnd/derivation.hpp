#pragma once

#include "kras/algebra/polynomial.hpp"
#include "kras/report.hpp"

#include <map>
#include <optional>
#include <string>
#include <vector>

namespace kras::lnd {

/// Polynomial ring, optionally divided by one hypersurface relation.
struct AmbientRing {
    RingPtr ring;
    std::optional<Poly> relation;

    /// p == 0 in the quotient (exact divisibility by the relation).
    bool is_zero(const Poly& p) const;
    /// Canonical representative: remainder on division by the relation
    /// (returned unchanged when there is no relation or the ring is Laurent).
    Poly reduce(const Poly& p) const;
};

/// D given on generators. A variable without an image is undeclared and
/// apply() rejects polynomials that involve it; map it to 0 to kill it.
struct Derivation {
    RingPtr ring;
    std::map<std::string, Poly> images;

    static Derivation zero(const RingPtr& ring);
    /// Images from strings in the polynomial grammar; every variable not
    /// listed is declared killed.
    static Derivation from_strings(const RingPtr& ring, const std::map<std::string, std::string>& images);
};

Poly apply(const Derivation& D, const Poly& f);

Report tangency_check(const Derivation& D, const AmbientRing& A);

/// Least n <= bound with D^n(f) = 0 in A.
std::optional<int> nilpotency_degree(const Derivation& D, const Poly& f, const AmbientRing& A, int bound);

/// KRAS_MAX_NILPOTENCY when set to a positive integer, else 64.
int default_nilpotency_bound();

struct FlowMap {
    RingPtr ring;            // original variables plus the flow time
    std::string time;        // name of the flow-time variable
    std::map<std::string, Poly> assignment;
};

/// v -> sum_k w^k D^k(v) / k!. Throws std::runtime_error when a generator
/// is not nilpotent within bound.
FlowMap flow(const Derivation& D, const AmbientRing& A, int bound);

/// Identity at time 0, preservation of the relation, group law on generators.
Report flow_checks(const Derivation& D, const AmbientRing& A, int bound);

/// target^exponent = sum coefficient_i * generator_i, checked by expansion.
struct IdealCertificate {
    Poly target;
    int exponent = 1;
    std::vector<std::pair<Poly, Poly>> combination;  // (coefficient, generator)
};

/// Checks that the zero set of the D-images (plus relation) equals the zero
/// set of expected_ideal (plus relation). Memberships that are multiples of
/// a single generator are certified automatically; the rest need supplied
/// certificates.
Report fixed_locus_check(const Derivation& D, const AmbientRing& A, const std::vector<Poly>& expected_ideal,
                         const std::vector<IdealCertificate>& certificates);

}  // namespace kras::lnd
