#include "kras/kr/family.hpp"

#include "kras/algebra/series.hpp"
#include "kras/algebra/univariate.hpp"

#include <numeric>
#include <stdexcept>

namespace kras::kr {

namespace {

const char* const kIsoAnchor = "stable isomorphism: substitution maps the ideal (x^m, y^r+t^s+xq)";

DensePoly x_pow(int m) { return DensePoly::monomial(Rational(1), static_cast<std::size_t>(m)); }

}  // namespace

void validate(const KRDatum& d)
{
    if (d.m < 2)
        throw std::invalid_argument("m must be >= 2");
    if (d.r < 2 || d.s < 2)
        throw std::invalid_argument("r and s must be >= 2");
    if (std::gcd(d.r, d.s) != 1)
        throw std::invalid_argument("r and s must be coprime");
    if (d.q.coeff(0) == 0)
        throw std::invalid_argument("q(0) must be nonzero");
}

RingPtr kr_ring()
{
    static const RingPtr ring = make_ring({"x", "y", "z", "t"});
    return ring;
}

Poly defining_polynomial(const KRDatum& d)
{
    validate(d);
    RingPtr ring = kr_ring();
    Poly x = Poly::variable(ring, "x");
    return x.pow(d.m) * Poly::variable(ring, "z") - Poly::variable(ring, "y").pow(d.r) -
           Poly::variable(ring, "t").pow(d.s) - x * from_dense(d.q, ring, "x");
}

UnitNormalization normalize_unit_constant(const KRDatum& d)
{
    validate(d);
    Rational lambda = Rational(1) / d.q.coeff(0);
    KRDatum out = d;
    std::vector<Rational> c = d.q.scale_argument(lambda).coeffs();
    for (auto& a : c)
        a *= lambda;
    out.q = DensePoly(c);
    return {out, lambda};
}

DensePoly matrix_determinant(const std::array<std::array<DensePoly, 3>, 3>& a)
{
    return a[0][0] * (a[1][1] * a[2][2] - a[1][2] * a[2][1]) - a[0][1] * (a[1][0] * a[2][2] - a[1][2] * a[2][0]) +
           a[0][2] * (a[1][0] * a[2][1] - a[1][1] * a[2][0]);
}

StableIsoCertificate build_stable_iso(const KRDatum& d)
{
    validate(d);
    if (d.q.coeff(0) != 1)
        throw std::invalid_argument("build_stable_iso needs q(0) = 1; normalize first");
    const auto m = static_cast<std::size_t>(d.m);

    StableIsoCertificate cert;
    cert.m = d.m;
    TruncatedSeries logq = series_log(TruncatedSeries("x", m, d.q));
    std::vector<Rational> f(m - 1, Rational(0));
    for (std::size_t i = 1; i < m; ++i)
        f[i - 1] = logq[i];
    cert.f = DensePoly(f);

    cert.g1 = series_exp(logq * Rational(1, d.r)).to_dense();
    const DensePoly g2_base = series_exp(logq * Rational(1, d.s)).to_dense();
    cert.g2 = g2_base;
    const DensePoly xm = x_pow(d.m);
    BezoutResult ab = extended_gcd(cert.g1, cert.g2);
    while (ab.gcd.degree() != 0) {
        ++cert.g2_shift;
        cert.g2 = g2_base + DensePoly(Rational(cert.g2_shift)) * xm;
        ab = extended_gcd(cert.g1, cert.g2);
    }

    BezoutResult uv = extended_gcd(cert.g1 * cert.g2, xm);
    if (uv.gcd.degree() != 0)
        throw std::logic_error("g1*g2 and x^m are not coprime");
    cert.h3 = uv.a;
    cert.h1 = -(uv.b * ab.b);
    cert.h2 = -(uv.b * ab.a);

    cert.matrix = {{{cert.g1, DensePoly(), xm}, {DensePoly(), cert.g2, xm}, {cert.h1, cert.h2, cert.h3}}};
    DensePoly det = matrix_determinant(cert.matrix);
    if (det.degree() != 0)
        throw std::logic_error("constructed matrix has non-constant determinant " + det.to_string());
    cert.det = det.coeff(0);
    return cert;
}

Report verify_stable_iso(const StableIsoCertificate& cert, const KRDatum& d)
{
    Report report;
    const int m = d.m;
    const DensePoly xm = x_pow(m);

    DensePoly det = matrix_determinant(cert.matrix);
    report.add("determinant", det.degree() == 0, det.to_string(), "matrix lies in GL_3(k[x])");

    auto expected = [&](int i, int j) -> const DensePoly& { return cert.matrix[i][j]; };
    bool rows_ok = expected(0, 0) == cert.g1 && expected(0, 1).is_zero() && expected(0, 2) == xm &&
                   expected(1, 0).is_zero() && expected(1, 1) == cert.g2 && expected(1, 2) == xm &&
                   expected(2, 0) == cert.h1 && expected(2, 1) == cert.h2 && expected(2, 2) == cert.h3;
    report.add("matrix-shape", rows_ok, rows_ok ? "0" : "rows differ from (g1,0,x^m),(0,g2,x^m),(h1,h2,h3)",
               "matrix rows");

    RingPtr ring = make_ring({"x", "y", "t", "w"});
    Poly x = Poly::variable(ring, "x"), y = Poly::variable(ring, "y"), t = Poly::variable(ring, "t"),
         w = Poly::variable(ring, "w");
    Poly q = from_dense(d.q, ring, "x");
    Poly xmp = x.pow(m);
    auto P = [&](const DensePoly& p) { return from_dense(p, ring, "x"); };
    std::map<std::string, Poly> alpha{
        {"y", P(cert.matrix[0][0]) * y + P(cert.matrix[0][1]) * t + P(cert.matrix[0][2]) * w},
        {"t", P(cert.matrix[1][0]) * y + P(cert.matrix[1][1]) * t + P(cert.matrix[1][2]) * w},
        {"w", P(cert.matrix[2][0]) * y + P(cert.matrix[2][1]) * t + P(cert.matrix[2][2]) * w},
    };
    Poly Fq = y.pow(d.r) + t.pow(d.s) + x * q;
    Poly F1 = y.pow(d.r) + t.pow(d.s) + x;
    Poly diff = substitute(Fq, alpha, ring) - q * F1;
    bool divisible = exact_divide(diff, xmp).has_value();
    report.add("ideal-image", divisible, to_string(diff.truncate(0, m)), kIsoAnchor);

    report.add("q-unit-mod-x^m", d.q.coeff(0) != 0, d.q.coeff(0) != 0 ? "0" : "q(0) = 0", kIsoAnchor);

    DensePoly r1 = (cert.g1.pow(static_cast<unsigned long>(d.r)) - d.q).truncate(static_cast<std::size_t>(m));
    DensePoly r2 = (cert.g2.pow(static_cast<unsigned long>(d.s)) - d.q).truncate(static_cast<std::size_t>(m));
    report.add("g1^r=q mod x^m", r1.is_zero(), r1.to_string(), "g1 = exp(xf/r)");
    report.add("g2^s=q mod x^m", r2.is_zero(), r2.to_string(), "g2 = exp(xf/s)");
    BezoutResult g = extended_gcd(cert.g1, cert.g2);
    report.add("gcd(g1,g2)=1", g.gcd.degree() == 0, g.gcd.to_string(), "g1, g2 relatively prime");
    return report;
}

std::optional<IsoWitness> decide_isomorphic(const KRDatum& d1, const KRDatum& d2)
{
    if (d1.m != d2.m || d1.r != d2.r || d1.s != d2.s)
        throw std::invalid_argument("decide_isomorphic needs equal (m, r, s)");
    validate(d1);
    validate(d2);
    const int top = d1.m - 2;  // compare modulo x^(m-1)
    for (int k = 0; k <= top; ++k)
        if ((d1.q.coeff(k) == 0) != (d2.q.coeff(k) == 0))
            return std::nullopt;

    const Rational eps = d2.q.coeff(0) / d1.q.coeff(0);
    auto verify = [&](const Rational& lambda) {
        Rational pw = 1;
        for (int k = 0; k <= top; ++k) {
            if (d2.q.coeff(k) != eps * pw * d1.q.coeff(k))
                return false;
            pw *= lambda;
        }
        return true;
    };

    int k = 1;
    while (k <= top && d1.q.coeff(k) == 0)
        ++k;
    if (k > top)
        return IsoWitness{Rational(1), eps};

    const Rational power = d2.q.coeff(k) / (eps * d1.q.coeff(k));
    std::vector<Rational> candidates;
    if (auto root = rational_root(power, static_cast<unsigned long>(k))) {
        candidates.push_back(*root);
        if (k % 2 == 0)
            candidates.push_back(-*root);
    }
    for (const auto& lambda : candidates)
        if (verify(lambda))
            return IsoWitness{lambda, eps};
    return std::nullopt;
}

KRDatum moduli_embed(const ModuliPoint& p, int m, int r, int s)
{
    if (m < 2 || p.coords.size() != static_cast<std::size_t>(m - 2))
        throw std::invalid_argument("moduli point needs m-2 coordinates");
    std::vector<Rational> c(static_cast<std::size_t>(m), Rational(0));
    c[0] = 1;
    c[1] = 1;
    for (std::size_t i = 0; i < p.coords.size(); ++i)
        c[i + 2] = p.coords[i];
    KRDatum d{m, r, s, DensePoly(c)};
    validate(d);
    return d;
}

std::optional<ModuliPoint> moduli_extract(const KRDatum& d)
{
    const Rational c0 = d.q.coeff(0), c1 = d.q.coeff(1);
    if (c0 == 0 || c1 == 0)
        return std::nullopt;
    const Rational eps = Rational(1) / c0;
    const Rational lambda = c0 / c1;
    ModuliPoint p;
    Rational pw = lambda * lambda;
    for (int i = 2; i <= d.m - 1; ++i) {
        p.coords.push_back(eps * pw * d.q.coeff(i));
        pw *= lambda;
    }
    return p;
}

}  // namespace kras::kr
