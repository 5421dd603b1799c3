#include "kras/gersten/divisor.hpp"

#include "kras/lnd/examples.hpp"

#include <numeric>
#include <set>

namespace kras::gersten {

namespace {

const char* const kCertAnchor = "local unit certificate: target = pi^k * unit on the divisor";
const char* const kLocalAnchor = "uniformizer of the curve inside the divisor";

Poly restrict_to(const DivisorDatum& d, const Poly& f)
{
    if (!d.coordinate)
        return f;
    return substitute(f, {{*d.coordinate, Poly(f.ring())}}, f.ring());
}

bool divisible_on(const DivisorDatum& d, const Poly& f)
{
    Poly g = restrict_to(d, f);
    if (g.is_zero())
        return true;
    return d.restricted_relation && !d.restricted_relation->is_zero() &&
           exact_divide(g, *d.restricted_relation).has_value();
}

std::set<std::string> generators_of(const mw::MWSymbol& s)
{
    std::set<std::string> out;
    for (const auto& t : s.terms) {
        for (const auto& [cls, m] : t.coeff.terms())
            out.insert(cls.gens.begin(), cls.gens.end());
        for (const auto& b : t.brackets)
            for (const auto& [g, e] : b.factors)
                out.insert(g);
    }
    return out;
}

bool proportional(const Poly& a, const Poly& b)
{
    if (a.is_zero() || b.is_zero())
        return a.is_zero() && b.is_zero();
    Rational ratio = a.leading_coefficient() / b.leading_coefficient();
    return a == b * ratio;
}

}  // namespace

HypersurfaceVariety HypersurfaceVariety::koras_russell(int m, int r, int s)
{
    return HypersurfaceVariety{lnd::koras_russell_ambient(m, r, s)};
}

DivisorDatum make_divisor(const HypersurfaceVariety& v, std::string name, const Poly& equation, std::string twist_name)
{
    if (equation.is_zero() || equation.is_constant())
        throw std::invalid_argument("divisor '" + name + "' needs a nonconstant equation");
    DivisorDatum d{std::move(name), equation, std::nullopt, std::nullopt, std::move(twist_name)};
    if (equation.is_monomial()) {
        const Monomial& mono = equation.leading_monomial();
        if (std::accumulate(mono.begin(), mono.end(), 0) == 1)
            for (std::size_t i = 0; i < mono.size(); ++i)
                if (mono[i] == 1)
                    d.coordinate = v.ambient.ring->names[i];
    }
    if (d.coordinate)
        d.restricted_relation = restrict_to(d, *v.ambient.relation);
    return d;
}

RingPtr curve_parameter_ring()
{
    static const RingPtr ring = make_ring({"c"}, {"c"});
    return ring;
}

Poly evaluate(const CurveDatum& c, const Poly& f) { return substitute(f, c.parametrization, c.param_ring); }

CurveDatum make_curve(const HypersurfaceVariety& v, std::string name, std::vector<Poly> ideal_gens,
                      std::map<std::string, Poly> parametrization)
{
    CurveDatum c{std::move(name), std::move(ideal_gens), curve_parameter_ring(), std::move(parametrization)};
    for (const auto& var : v.ambient.ring->names)
        if (!c.parametrization.count(var))
            throw std::invalid_argument("curve '" + c.name + "' has no value for '" + var + "'");
    for (const auto& g : c.ideal_gens)
        if (!evaluate(c, g).is_zero())
            throw std::invalid_argument("curve '" + c.name + "': parametrization does not kill " + to_string(g));
    if (!evaluate(c, *v.ambient.relation).is_zero())
        throw std::invalid_argument("curve '" + c.name + "' does not lie on the variety");
    return c;
}

bool curve_in_divisor(const CurveDatum& c, const DivisorDatum& d) { return evaluate(c, d.equation).is_zero(); }

std::pair<Poly, Poly> unit_fraction(const mw::UnitExpr& u, const UnitTable& units, const RingPtr& ring)
{
    Poly num = Poly::constant(ring, Rational(u.sign));
    Poly den = Poly::constant(ring, Rational(1));
    for (const auto& [g, e] : u.factors) {
        auto it = units.find(g);
        if (it == units.end())
            throw std::invalid_argument("unknown unit '" + g + "'");
        if (e > 0)
            num *= it->second.pow(e);
        else
            den *= it->second.pow(-e);
    }
    return {num, den};
}

Report check_unit_certificate(const UnitCertificate& cert, const HypersurfaceVariety& v, const DivisorDatum& d,
                              const CurveDatum& c, const UnitTable& units)
{
    Report report;
    const std::string p = "cert " + cert.name + ": ";
    auto unit_poly = [&](const std::string& name) {
        auto it = units.find(name);
        if (it == units.end())
            throw std::invalid_argument("unknown unit '" + name + "'");
        return it->second;
    };
    const Poly target = unit_poly(cert.target), pi = unit_poly(cert.uniformizer);
    auto [num, den] = unit_fraction(cert.unit_part, units, v.ambient.ring);

    report.add(p + "curve in divisor", curve_in_divisor(c, d), "0", kCertAnchor);
    if (!d.coordinate) {
        report.add(p + "witness", false, "divisor " + d.name + " is not a coordinate hyperplane", kCertAnchor);
    } else {
        Poly witness = restrict_to(d, target * den - pi.pow(cert.valuation) * num);
        bool ok = divisible_on(d, witness);
        std::string residual = "0";
        if (!ok)
            residual = to_string(divide_remainder(witness, *d.restricted_relation).second);
        report.add(p + "witness", ok, residual, kCertAnchor);
    }
    Poly num_c = evaluate(c, restrict_to(d, num)), den_c = evaluate(c, restrict_to(d, den));
    bool unit = !num_c.is_zero() && !den_c.is_zero();
    report.add(p + "unit part is a unit on " + c.name, unit,
               unit ? "0" : "vanishes: " + to_string(num_c) + " / " + to_string(den_c), kCertAnchor);
    Poly pi_c = evaluate(c, pi);
    report.add(p + "uniformizer vanishes on " + c.name, pi_c.is_zero(), to_string(pi_c), kCertAnchor);
    return report;
}

void GerstenContext::add_unit(const std::string& name, const Poly& p)
{
    if (name == "-1" || p.is_zero())
        throw std::invalid_argument("bad unit declaration '" + name + "'");
    units_.insert_or_assign(name, p);
}

void GerstenContext::add_divisor(DivisorDatum d)
{
    std::string name = d.name;
    divisors_.insert_or_assign(name, std::move(d));
}

void GerstenContext::add_curve(CurveDatum c)
{
    std::string name = c.name;
    curves_.insert_or_assign(name, std::move(c));
}

const DivisorDatum& GerstenContext::divisor(const std::string& name) const
{
    auto it = divisors_.find(name);
    if (it == divisors_.end())
        throw std::invalid_argument("unknown divisor '" + name + "'");
    return it->second;
}

const CurveDatum& GerstenContext::curve(const std::string& name) const
{
    auto it = curves_.find(name);
    if (it == curves_.end())
        throw std::invalid_argument("unknown curve '" + name + "'");
    return it->second;
}

Report GerstenContext::add_certificate(const UnitCertificate& cert)
{
    Report r = check_unit_certificate(cert, variety_, divisor(cert.divisor), curve(cert.curve), units_);
    if (r.ok())
        certificates_.push_back(cert);
    return r;
}

Report GerstenContext::add_local(const LocalUniformizer& loc)
{
    Report report;
    const std::string p = "local " + loc.divisor + " at " + loc.curve + ": ";
    const DivisorDatum& d = divisor(loc.divisor);
    const CurveDatum& c = curve(loc.curve);
    auto it = units_.find(loc.uniformizer);
    if (it == units_.end())
        throw std::invalid_argument("unknown unit '" + loc.uniformizer + "'");
    const Poly& pi = it->second;

    report.add(p + "curve in divisor", curve_in_divisor(c, d), "0", kLocalAnchor);
    Poly pi_c = evaluate(c, pi);
    report.add(p + "uniformizer vanishes", pi_c.is_zero(), to_string(pi_c), kLocalAnchor);
    bool covered = true;
    std::string missing = "0";
    for (const auto& g : c.ideal_gens) {
        if (restrict_to(d, g).is_zero() || proportional(g, d.equation) || proportional(g, pi))
            continue;
        bool found = false;
        for (const auto& cert : certificates_)
            if (cert.divisor == loc.divisor && cert.curve == loc.curve && cert.uniformizer == loc.uniformizer &&
                cert.valuation >= 1 && proportional(units_.at(cert.target), g))
                found = true;
        if (!found) {
            covered = false;
            missing = "uncertified generator " + to_string(g);
        }
    }
    report.add(p + "curve ideal generated by uniformizer", covered, missing, kLocalAnchor);
    if (report.ok())
        locals_.push_back(loc);
    return report;
}

void GerstenContext::add_derived(DerivedResidue d) { derived_.push_back(std::move(d)); }

mw::MWSymbol GerstenContext::evaluate_constants(const mw::MWSymbol& s, const CurveDatum& c) const
{
    std::map<std::string, mw::UnitExpr> images;
    for (const auto& g : generators_of(s)) {
        auto it = units_.find(g);
        if (it == units_.end())
            continue;
        Poly value = evaluate(c, it->second);
        if (value.is_constant() && !value.is_zero()) {
            Rational q = value.constant_term();
            if (q == 1)
                images.emplace(g, mw::UnitExpr{});
            else if (q == -1)
                images.emplace(g, mw::UnitExpr::minus_one());
        }
    }
    if (images.empty())
        return s;
    return mw::normalize(mw::substitute_units(s, images), symbol_context);
}

mw::TwistedSymbol GerstenContext::residue(const mw::TwistedSymbol& s, const std::string& divisor_name,
                                          const std::string& curve_name) const
{
    const DivisorDatum& d = divisor(divisor_name);
    const CurveDatum& c = curve(curve_name);
    const mw::MWSymbol zero = mw::MWSymbol::zero(s.symbol.degree - 1);
    if (!curve_in_divisor(c, d))
        return {zero, twist_order};

    auto finish = [&](mw::TwistedSymbol t) {
        if (t.symbol.is_zero())
            return mw::TwistedSymbol{mw::MWSymbol::zero(t.symbol.degree), twist_order};
        try {
            return mw::twist_reorder(t, twist_order, symbol_context);
        } catch (const std::invalid_argument& e) {
            throw ResidueError("residue on " + divisor_name + " at " + curve_name + ": twist word does not match " +
                               "the canonical order");
        }
    };

    for (const auto& dr : derived_)
        if (dr.divisor == divisor_name && dr.curve == curve_name && dr.source.twist == s.twist &&
            mw::eq(dr.source.symbol, s.symbol, symbol_context) == mw::Equality::equal)
            return finish(dr.value);

    const LocalUniformizer* loc = nullptr;
    for (const auto& l : locals_)
        if (l.divisor == divisor_name && l.curve == curve_name)
            loc = &l;
    if (!loc)
        throw ResidueError("no checked uniformizer for " + curve_name + " on " + divisor_name);
    const std::string& pi = loc->uniformizer;

    std::map<std::string, mw::UnitExpr> images;
    for (const auto& g : generators_of(s.symbol)) {
        if (g == pi)
            continue;
        const UnitCertificate* cert = nullptr;
        for (const auto& ct : certificates_)
            if (ct.target == g && ct.divisor == divisor_name && ct.curve == curve_name && ct.uniformizer == pi)
                cert = &ct;
        if (cert) {
            images.emplace(g, mw::UnitExpr::generator(pi, cert->valuation) * cert->unit_part);
            continue;
        }
        auto it = units_.find(g);
        if (it == units_.end())
            throw ResidueError("unknown unit '" + g + "'");
        if (evaluate(c, restrict_to(d, it->second)).is_zero())
            throw ResidueError("argument '" + g + "' vanishes on " + curve_name + " inside " + divisor_name +
                               " and no certificate covers it");
    }
    mw::TwistedSymbol rewritten{mw::normalize(mw::substitute_units(s.symbol, images), symbol_context), s.twist};
    mw::TwistedSymbol r;
    try {
        r = mw::residue(rewritten, pi, pi, symbol_context);
    } catch (const std::invalid_argument& e) {
        throw ResidueError(std::string("residue on ") + divisor_name + " at " + curve_name + ": " + e.what());
    }
    r.symbol = evaluate_constants(r.symbol, c);
    return finish(r);
}

mw::TwistedSymbol divisor_residue(const GerstenContext& ctx, const mw::TwistedSymbol& s, const std::string& divisor,
                                  const std::string& curve)
{
    return ctx.residue(s, divisor, curve);
}

}  // namespace kras::gersten
