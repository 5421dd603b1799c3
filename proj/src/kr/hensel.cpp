#include "kras/kr/hensel.hpp"

#include <numeric>
#include <stdexcept>

namespace kras::kr {

namespace {

const char* const kSplitAnchor = "splitting identity y^r+t^s+x = prod(y-sigma) + x^m s(x,y)";
const char* const kTransitionAnchor = "transition functions u' = u + x^-m (sigma - sigma')";

constexpr std::size_t kX = 0, kY = 1, kU = 2;

CycloPoly mono(const RingPtr& ring, int ex, int ey, int eu, const CycloNumber& c)
{
    return CycloPoly::monomial(ring, Monomial{ex, ey, eu}, c);
}

/// Inverse of a power series in x whose constant coefficient is a monomial.
CycloPoly series_inverse(const CycloPoly& a, int prec)
{
    CycloPoly a0 = a.coefficient_in(kX, 0);
    if (!a0.is_monomial())
        throw std::domain_error("Hensel lifting: derivative is not invertible at x = 0");
    CycloPoly b = a0.pow(-1);
    const CycloPoly two = CycloPoly::constant(a.ring(), CycloNumber(2));
    for (int p = 1; p < prec;) {
        p = std::min(2 * p, prec);
        b = (b * (two - (a.truncate(kX, p) * b).truncate(kX, p))).truncate(kX, p);
    }
    return b;
}

CycloPoly galois_image(const CycloPoly& p, long k)
{
    CycloPoly out(p.ring());
    for (const auto& [m, c] : p.terms())
        out.add_term(m, c.galois(k));
    return out;
}

/// u -> zeta^2 u
CycloPoly rotate_u(const CycloPoly& p, const std::shared_ptr<const CyclotomicField>& field)
{
    CycloPoly out(p.ring());
    for (const auto& [m, c] : p.terms())
        out.add_term(m, c * CycloNumber::zeta(field, 2L * m[kU]));
    return out;
}

std::optional<Poly> descend(const CycloPoly& p, int r)
{
    RingPtr base = hensel_base_ring();
    Poly out(base);
    for (const auto& [m, c] : p.terms()) {
        if (!c.is_rational() || m[kU] % r != 0)
            return std::nullopt;
        out.add_term(Monomial{m[kX], m[kY], m[kU] / r}, c.rational_value());
    }
    return out;
}

}  // namespace

RingPtr hensel_cover_ring()
{
    static const RingPtr ring = make_ring({"x", "y", "u"}, {"u"});
    return ring;
}

RingPtr hensel_base_ring()
{
    static const RingPtr ring = make_ring({"x", "y", "t"}, {"t"});
    return ring;
}

CycloPoly root_product(const HenselSplit& h)
{
    CycloPoly y = CycloPoly::variable(h.ring, "y");
    CycloPoly prod = CycloPoly::constant(h.ring, CycloNumber(1));
    for (const auto& sigma : h.roots)
        prod *= y - sigma;
    return prod;
}

HenselSplit hensel_split(int r, int s, int m)
{
    if (r < 2 || s < 2)
        throw std::invalid_argument("hensel_split needs r, s >= 2");
    if (std::gcd(r, s) != 1)
        throw std::invalid_argument("hensel_split needs gcd(r, s) = 1");
    if (m < 2)
        throw std::invalid_argument("hensel_split needs m >= 2");

    HenselSplit h;
    h.r = r;
    h.s = s;
    h.m = m;
    h.field = std::make_shared<const CyclotomicField>(static_cast<unsigned>(2 * r));
    const RingPtr& ring = h.ring;

    const CycloPoly x = CycloPoly::variable(ring, "x");
    const CycloPoly y = CycloPoly::variable(ring, "y");
    const CycloPoly ts = mono(ring, 0, 0, r * s, CycloNumber(1));  // t^s = u^(rs)

    for (int j = 0; j < r; ++j) {
        CycloPoly sigma = mono(ring, 0, 0, s, CycloNumber::zeta(h.field, 2L * j + 1));
        for (int p = 1; p < m;) {
            p = std::min(2 * p, m);
            CycloPoly value = (sigma.pow(r) + ts + x).truncate(kX, p);
            CycloPoly slope = (CycloNumber(static_cast<long>(r)) * sigma.pow(r - 1)).truncate(kX, p);
            sigma = (sigma - (value * series_inverse(slope, p)).truncate(kX, p)).truncate(kX, p);
        }
        h.roots.push_back(sigma.truncate(kX, m));
    }

    const CycloPoly target = y.pow(r) + ts + x;
    const CycloPoly defect = target - root_product(h);
    auto quotient = exact_divide(defect, x.pow(m));
    h.remainder = quotient.value_or(CycloPoly(ring));
    h.checks.add("product-identity", quotient.has_value(), to_string(defect.truncate(kX, m)), kSplitAnchor);

    h.descended = quotient ? descend(h.remainder, r) : std::nullopt;
    h.checks.add("descent", h.descended.has_value(),
                 h.descended ? to_string(*h.descended) : to_string(h.remainder), kSplitAnchor);

    std::map<std::string, CycloPoly> at_zero{{"x", CycloPoly(ring)}};
    CycloPoly base = CycloPoly::constant(ring, CycloNumber(1));
    for (const auto& sigma : h.roots)
        base *= y - substitute(sigma, at_zero, ring);
    CycloPoly base_defect = base - (y.pow(r) + ts);
    h.checks.add("base-factorization", base_defect.is_zero(), to_string(base_defect), kSplitAnchor);

    auto index_of_root = [&](const CycloPoly& p) {
        for (int k = 0; k < r; ++k)
            if (h.roots[static_cast<std::size_t>(k)] == p)
                return k;
        return -1;
    };
    bool galois_ok = true;
    for (long k = 1; k < 2L * r; ++k) {
        if (std::gcd(k, 2L * r) != 1)
            continue;
        GaloisAction act{"zeta -> zeta^" + std::to_string(k), k, {}};
        for (int j = 0; j < r; ++j) {
            int image = index_of_root(galois_image(h.roots[static_cast<std::size_t>(j)], k));
            int expected = static_cast<int>((((2L * j + 1) * k) % (2L * r) - 1) / 2);
            galois_ok = galois_ok && image == expected;
            act.permutation.push_back(image);
        }
        h.galois.push_back(std::move(act));
    }
    GaloisAction rot{"u -> zeta^2 u", 0, {}};
    for (int j = 0; j < r; ++j) {
        int image = index_of_root(rotate_u(h.roots[static_cast<std::size_t>(j)], h.field));
        galois_ok = galois_ok && image == (j + s) % r;
        rot.permutation.push_back(image);
    }
    h.galois.push_back(std::move(rot));
    h.checks.add("galois-permutations", galois_ok, galois_ok ? "0" : "root set not permuted as expected",
                 "roots permuted by zeta -> zeta^k and u -> zeta^2 u");
    return h;
}

Report transition_cocycle_check(const HenselSplit& h)
{
    if (h.r < 2)
        throw std::invalid_argument("transition_cocycle_check needs r >= 2");
    Report report;
    RingPtr lring = make_ring({"x", "y", "u"}, {"x", "u"});
    const CycloPoly xm_inv = CycloPoly::monomial(lring, Monomial{-h.m, 0, 0}, CycloNumber(1));
    std::vector<CycloPoly> roots;
    for (const auto& sigma : h.roots)
        roots.push_back(embed(sigma, lring));
    auto tau = [&](int j, int k) {
        return xm_inv * (roots[static_cast<std::size_t>(j)] - roots[static_cast<std::size_t>(k)]);
    };

    const int r = h.r;
    bool anti = true;
    std::string anti_residual = "0";
    for (int j = 0; j < r; ++j)
        for (int k = j + 1; k < r; ++k) {
            CycloPoly sum = tau(j, k) + tau(k, j);
            if (!sum.is_zero()) {
                anti = false;
                anti_residual = to_string(sum);
            }
        }
    report.add("antisymmetry", anti, anti_residual, kTransitionAnchor);

    bool cocycle = true;
    int triples = 0;
    std::string cocycle_residual = "0";
    for (int j = 0; j < r; ++j)
        for (int k = 0; k < r; ++k)
            for (int l = 0; l < r; ++l) {
                if (j == k || k == l || j == l)
                    continue;
                ++triples;
                CycloPoly sum = tau(j, k) + tau(k, l) - tau(j, l);
                if (!sum.is_zero()) {
                    cocycle = false;
                    cocycle_residual = to_string(sum);
                }
            }
    report.add("cocycle (" + std::to_string(triples) + " ordered triples)", cocycle, cocycle_residual,
               kTransitionAnchor);
    return report;
}

}  // namespace kras::kr
