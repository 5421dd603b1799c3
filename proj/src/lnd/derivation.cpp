#include "kras/lnd/derivation.hpp"

#include <cstdlib>
#include <stdexcept>

namespace kras::lnd {

namespace {

const char* const kLndAnchor = "additive group action generated by a locally nilpotent derivation";
const char* const kFixedAnchor = "fixed point locus of the action";

std::string fresh_name(const Ring& ring, std::string base)
{
    while (ring.index_of(base))
        base += "_";
    return base;
}

Rational factorial(int k)
{
    Rational f = 1;
    for (int i = 2; i <= k; ++i)
        f *= i;
    return f;
}

bool tangent(const Derivation& D, const AmbientRing& A)
{
    return !A.relation || A.is_zero(apply(D, *A.relation));
}

/// D^0(v), D^1(v), ... up to the first iterate that vanishes in A.
std::optional<std::vector<Poly>> iterates(const Derivation& D, const Poly& f, const AmbientRing& A, int bound,
                                          bool reduce)
{
    std::vector<Poly> out;
    Poly g = f;
    for (int n = 0; n <= bound; ++n) {
        if (A.is_zero(g))
            return out;
        out.push_back(g);
        g = apply(D, g);
        if (reduce)
            g = A.reduce(g);
    }
    return std::nullopt;
}

}  // namespace

bool AmbientRing::is_zero(const Poly& p) const
{
    if (!relation)
        return p.is_zero();
    return exact_divide(p, *relation).has_value();
}

Poly AmbientRing::reduce(const Poly& p) const
{
    if (!relation || ring->has_laurent())
        return p;
    return divide_remainder(p, *relation).second;
}

Derivation Derivation::zero(const RingPtr& ring)
{
    Derivation D{ring, {}};
    for (const auto& name : ring->names)
        D.images.emplace(name, Poly(ring));
    return D;
}

Derivation Derivation::from_strings(const RingPtr& ring, const std::map<std::string, std::string>& images)
{
    Derivation D = zero(ring);
    for (const auto& [name, text] : images) {
        ring->require(name);
        D.images.insert_or_assign(name, parse_polynomial(text, ring));
    }
    return D;
}

Poly apply(const Derivation& D, const Poly& f)
{
    if (!same_ring(D.ring, f.ring()))
        throw std::invalid_argument("derivation and polynomial live in different rings");
    Poly out(f.ring());
    const Ring& ring = *f.ring();
    for (std::size_t i = 0; i < ring.arity(); ++i) {
        if (!f.involves(i))
            continue;
        auto it = D.images.find(ring.names[i]);
        if (it == D.images.end())
            throw std::invalid_argument("derivation has no image for variable '" + ring.names[i] + "'");
        if (!it->second.is_zero())
            out += f.derivative(i) * it->second;
    }
    return out;
}

Report tangency_check(const Derivation& D, const AmbientRing& A)
{
    Report report;
    if (!A.relation) {
        report.add("tangency", true, "0", kLndAnchor);
        return report;
    }
    Poly DF = apply(D, *A.relation);
    bool ok = A.is_zero(DF);
    report.add("tangency", ok, ok ? "0" : to_string(A.reduce(DF)), kLndAnchor);
    return report;
}

std::optional<int> nilpotency_degree(const Derivation& D, const Poly& f, const AmbientRing& A, int bound)
{
    if (bound < 1)
        throw std::invalid_argument("nilpotency bound must be >= 1");
    auto its = iterates(D, f, A, bound, tangent(D, A));
    if (!its)
        return std::nullopt;
    return static_cast<int>(its->size());
}

int default_nilpotency_bound()
{
    if (const char* env = std::getenv("KRAS_MAX_NILPOTENCY")) {
        char* end = nullptr;
        long v = std::strtol(env, &end, 10);
        if (end != env && *end == '\0' && v > 0 && v < 1'000'000)
            return static_cast<int>(v);
    }
    return 64;
}

FlowMap flow(const Derivation& D, const AmbientRing& A, int bound)
{
    FlowMap fm;
    fm.time = fresh_name(*A.ring, "w");
    fm.ring = extend_ring(A.ring, fm.time);
    const Poly w = Poly::variable(fm.ring, fm.time);
    const bool reduce = tangent(D, A);
    for (const auto& name : A.ring->names) {
        auto its = iterates(D, Poly::variable(A.ring, name), A, bound, reduce);
        if (!its)
            throw std::runtime_error("generator '" + name + "' is not nilpotent within bound " + std::to_string(bound));
        Poly image(fm.ring);
        for (std::size_t k = 0; k < its->size(); ++k)
            image += w.pow(static_cast<long>(k)) * embed((*its)[k], fm.ring) *
                     (Rational(1) / factorial(static_cast<int>(k)));
        fm.assignment.emplace(name, image);
    }
    return fm;
}

Report flow_checks(const Derivation& D, const AmbientRing& A, int bound)
{
    Report report;
    FlowMap fm = flow(D, A, bound);

    bool identity = true;
    std::string id_residual = "0";
    for (const auto& [name, image] : fm.assignment) {
        Poly at0 = substitute(image, {{fm.time, Poly(fm.ring)}}, fm.ring);
        if (at0 != Poly::variable(fm.ring, name)) {
            identity = false;
            id_residual = name + " -> " + to_string(at0);
        }
    }
    report.add("flow-identity-at-0", identity, id_residual, kLndAnchor);

    if (A.relation) {
        Poly F = embed(*A.relation, fm.ring);
        Poly moved = substitute(F, fm.assignment, fm.ring) - F;
        AmbientRing ext{fm.ring, F};
        bool ok = ext.is_zero(moved);
        report.add("flow-preserves-relation", ok, ok ? "0" : to_string(ext.reduce(moved)), kLndAnchor);
    }

    // phi_{w1}(phi_{w2}(v)) = phi_{w1+w2}(v)
    const std::string w1n = fresh_name(*fm.ring, "w1");
    RingPtr r1 = extend_ring(fm.ring, w1n);
    const std::string w2n = fresh_name(*r1, "w2");
    RingPtr r12 = extend_ring(r1, w2n);
    const Poly w1 = Poly::variable(r12, w1n), w2 = Poly::variable(r12, w2n);
    std::map<std::string, Poly> phi1, phi2, phi12;
    for (const auto& [name, image] : fm.assignment) {
        Poly lifted = embed(image, r12);
        phi1.emplace(name, substitute(lifted, {{fm.time, w1}}, r12));
        phi2.emplace(name, substitute(lifted, {{fm.time, w2}}, r12));
        phi12.emplace(name, substitute(lifted, {{fm.time, w1 + w2}}, r12));
    }
    std::optional<Poly> rel;
    if (A.relation)
        rel = embed(*A.relation, r12);
    AmbientRing big{r12, rel};
    bool law = true;
    std::string law_residual = "0";
    for (const auto& name : A.ring->names) {
        std::map<std::string, Poly> outer = phi1;
        outer.emplace(fm.time, Poly::variable(r12, fm.time));
        Poly composed = substitute(phi2.at(name), outer, r12);
        Poly diff = composed - phi12.at(name);
        if (!big.is_zero(diff)) {
            law = false;
            law_residual = name + ": " + to_string(big.reduce(diff));
        }
    }
    report.add("flow-group-law", law, law_residual, kLndAnchor);
    return report;
}

Report fixed_locus_check(const Derivation& D, const AmbientRing& A, const std::vector<Poly>& expected_ideal,
                         const std::vector<IdealCertificate>& certificates)
{
    Report report;
    const RingPtr& ring = A.ring;

    std::vector<Poly> images;
    for (const auto& name : ring->names) {
        Poly img = apply(D, Poly::variable(ring, name));
        if (!img.is_zero())
            images.push_back(img);
    }
    std::vector<Poly> expected;
    for (const auto& e : expected_ideal)
        if (!e.is_zero())
            expected.push_back(e);
    auto with_relation = [&](std::vector<Poly> gens) {
        if (A.relation)
            gens.push_back(*A.relation);
        return gens;
    };
    const std::vector<Poly> ideal_i = with_relation(expected), ideal_ii = with_relation(images);

    auto expands = [](const IdealCertificate& c) {
        Poly sum(c.target.ring());
        for (const auto& [coef, gen] : c.combination)
            sum += coef * gen;
        return c.target.pow(c.exponent) - sum;
    };
    auto uses_only = [](const IdealCertificate& c, const std::vector<Poly>& gens) {
        for (const auto& [coef, gen] : c.combination) {
            bool found = false;
            for (const auto& g : gens)
                found = found || g == gen;
            if (!found)
                return false;
        }
        return true;
    };

    bool all_expand = true;
    std::string bad;
    for (const auto& c : certificates) {
        Poly residual = expands(c);
        if (!residual.is_zero()) {
            all_expand = false;
            bad = to_string(c.target) + "^" + std::to_string(c.exponent) + ": " + to_string(residual);
        }
    }
    report.add("certificates-expand", all_expand, all_expand ? "0" : bad, kFixedAnchor);

    auto certify = [&](const Poly& target, const std::vector<Poly>& gens) -> std::optional<IdealCertificate> {
        for (const auto& c : certificates)
            if (c.target == target && uses_only(c, gens) && expands(c).is_zero())
                return c;
        for (int k = 1; k <= 16; ++k) {
            Poly power = target.pow(k);
            for (const auto& g : gens) {
                if (auto q = exact_divide(power, g)) {
                    IdealCertificate c{target, k, {{*q, g}}};
                    if (expands(c).is_zero())
                        return c;
                }
            }
        }
        return std::nullopt;
    };

    bool inside = true;
    std::string missing;
    for (const auto& img : images)
        if (!certify(img, ideal_i)) {
            inside = false;
            missing = to_string(img);
        }
    report.add("images-in-expected-ideal", inside, inside ? "0" : "uncertified: " + missing, kFixedAnchor);

    bool radical = true;
    missing.clear();
    for (const auto& e : expected)
        if (!certify(e, ideal_ii)) {
            radical = false;
            missing = to_string(e);
        }
    report.add("expected-in-radical-of-images", radical, radical ? "0" : "uncertified: " + missing, kFixedAnchor);
    return report;
}

}  // namespace kras::lnd
