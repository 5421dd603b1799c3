#pragma once

#include "kras/lnd/derivation.hpp"
#include "kras/mw/symbol.hpp"
#include "kras/report.hpp"

#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace kras::gersten {

/// Raised when a residue needs a rewrite that no checked certificate covers.
class ResidueError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct HypersurfaceVariety {
    lnd::AmbientRing ambient;  // relation required

    /// x^m z - y^r - t^s - x in (x, y, z, t).
    static HypersurfaceVariety koras_russell(int m, int r, int s);
};

struct DivisorDatum {
    std::string name;
    Poly equation;
    std::optional<std::string> coordinate;  // set when equation = c * v
    std::optional<Poly> restricted_relation;  // relation with v = 0
    std::string twist_name;
};

/// Throws std::invalid_argument when the equation is zero or a unit.
DivisorDatum make_divisor(const HypersurfaceVariety& v, std::string name, const Poly& equation, std::string twist_name);

/// Generic point given by Laurent polynomials in one parameter c.
struct CurveDatum {
    std::string name;
    std::vector<Poly> ideal_gens;
    RingPtr param_ring;  // (c), c Laurent
    std::map<std::string, Poly> parametrization;
};

RingPtr curve_parameter_ring();

/// Validates that the parametrization kills the ideal and the relation;
/// throws std::invalid_argument otherwise.
CurveDatum make_curve(const HypersurfaceVariety& v, std::string name, std::vector<Poly> ideal_gens,
                      std::map<std::string, Poly> parametrization);

/// f at the generic point of the curve.
Poly evaluate(const CurveDatum& c, const Poly& f);
bool curve_in_divisor(const CurveDatum& c, const DivisorDatum& d);

/// Named units of the symbol model and their polynomials.
using UnitTable = std::map<std::string, Poly>;

/// target = pi^k * unit_part on the divisor near the curve, witnessed by
/// target * den - pi^k * num being divisible by the restricted relation.
struct UnitCertificate {
    std::string name;
    std::string target;      // unit name
    std::string divisor;
    std::string curve;
    std::string uniformizer;  // unit name
    int valuation = 1;
    mw::UnitExpr unit_part;  // over unit names
};

/// Numerator and denominator polynomials of a unit expression.
std::pair<Poly, Poly> unit_fraction(const mw::UnitExpr& u, const UnitTable& units, const RingPtr& ring);

Report check_unit_certificate(const UnitCertificate& cert, const HypersurfaceVariety& v, const DivisorDatum& d,
                              const CurveDatum& c, const UnitTable& units);

/// A uniformizer of the curve inside the divisor: every other curve
/// generator vanishes on the divisor or is pi^k * unit by a certificate.
struct LocalUniformizer {
    std::string divisor;
    std::string curve;
    std::string uniformizer;  // unit name
};

/// Residue of symbol on `source` at a curve, supplied as data instead of
/// being computed (used where the divisor is not normal along the curve).
struct DerivedResidue {
    std::string divisor;
    std::string curve;
    mw::TwistedSymbol source;
    mw::TwistedSymbol value;
};

/// Declarations plus the certificates that passed their checks.
class GerstenContext {
public:
    explicit GerstenContext(HypersurfaceVariety v) : variety_(std::move(v)) {}

    const HypersurfaceVariety& variety() const { return variety_; }
    const RingPtr& ring() const { return variety_.ambient.ring; }

    void add_unit(const std::string& name, const Poly& p);
    void add_divisor(DivisorDatum d);
    void add_curve(CurveDatum c);
    /// Checks the certificate; it is used only when the report passes.
    Report add_certificate(const UnitCertificate& cert);
    Report add_local(const LocalUniformizer& loc);
    void add_derived(DerivedResidue d);

    const UnitTable& units() const { return units_; }
    const DivisorDatum& divisor(const std::string& name) const;
    const CurveDatum& curve(const std::string& name) const;
    const std::map<std::string, CurveDatum>& curves() const { return curves_; }

    mw::SymbolContext symbol_context;
    std::vector<std::string> twist_order{"t", "y"};

    /// Residue of a symbol on divisor d at curve c, reordered to
    /// twist_order. Zero when c is not contained in d. Throws ResidueError
    /// on an uncovered argument or a missing local uniformizer.
    mw::TwistedSymbol residue(const mw::TwistedSymbol& s, const std::string& divisor, const std::string& curve) const;

    /// Units of the residue field that evaluate to +-1 become signs.
    mw::MWSymbol evaluate_constants(const mw::MWSymbol& s, const CurveDatum& c) const;

private:
    HypersurfaceVariety variety_;
    UnitTable units_;
    std::map<std::string, DivisorDatum> divisors_;
    std::map<std::string, CurveDatum> curves_;
    std::vector<UnitCertificate> certificates_;  // checked ones only
    std::vector<LocalUniformizer> locals_;       // checked ones only
    std::vector<DerivedResidue> derived_;
};

/// Residue of a symbol on a divisor at a curve (see GerstenContext::residue).
mw::TwistedSymbol divisor_residue(const GerstenContext& ctx, const mw::TwistedSymbol& s, const std::string& divisor,
                                  const std::string& curve);

}  // namespace kras::gersten
