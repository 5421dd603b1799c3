#include "kras/lnd/examples.hpp"

namespace kras::lnd {

namespace {

const char* const kExampleAnchor = "Russell cubic: quotient map V x A^1 -> X \\ L";

RingPtr kr_xyzt()
{
    static const RingPtr ring = make_ring({"x", "y", "z", "t"});
    return ring;
}

std::string sign_name(int v) { return v > 0 ? "+" : "-"; }

}  // namespace

AmbientRing koras_russell_ambient(int m, int r, int s)
{
    RingPtr ring = kr_xyzt();
    Poly x = Poly::variable(ring, "x");
    Poly F = x.pow(m) * Poly::variable(ring, "z") - Poly::variable(ring, "y").pow(r) -
             Poly::variable(ring, "t").pow(s) - x;
    return {ring, F};
}

Derivation koras_russell_derivation(int m, int r, int sign)
{
    RingPtr ring = kr_xyzt();
    Derivation D = Derivation::zero(ring);
    D.images.insert_or_assign("y", Poly::variable(ring, "x").pow(m));
    D.images.insert_or_assign("z", Poly::variable(ring, "y").pow(r - 1) * Rational(sign * r));
    return D;
}

std::vector<Poly> koras_russell_line_ideal()
{
    RingPtr ring = kr_xyzt();
    return {Poly::variable(ring, "x"), Poly::variable(ring, "y"), Poly::variable(ring, "t")};
}

std::vector<IdealCertificate> koras_russell_fixed_locus_certificates(int m, int r, int s)
{
    RingPtr ring = kr_xyzt();
    AmbientRing A = koras_russell_ambient(m, r, s);
    Poly x = Poly::variable(ring, "x"), y = Poly::variable(ring, "y"), z = Poly::variable(ring, "z"),
         t = Poly::variable(ring, "t");
    Poly xm = x.pow(m);
    Poly ry = y.pow(r - 1) * Rational(r);
    // t^s + x = z x^m - (y/r)(r y^(r-1)) - F, then
    // t^(sm) = (-x)^m + Q (t^s + x) with Q = sum_i (t^s)^(m-1-i) (-x)^i.
    Poly ts = t.pow(s);
    Poly Q(ring);
    for (int i = 0; i < m; ++i)
        Q += ts.pow(m - 1 - i) * (-x).pow(i);
    Poly sign = Poly::constant(ring, Rational(m % 2 == 0 ? 1 : -1));
    IdealCertificate tcert{t, s * m, {{sign + Q * z, xm}, {-(Q * y) * Rational(1, r), ry}, {-Q, *A.relation}}};
    return {tcert};
}

RussellExample russell_example()
{
    const RingPtr ring = make_ring({"x", "t", "u", "v", "w"});
    const Poly relation = parse_polynomial("v^2*t - x^2*u - 1", ring);
    RussellExample ex{ring,
                      relation,
                      parse_polynomial("x^2*w + t^2*u - 1/2*x*u^3", ring),
                      parse_polynomial("x^2*w^2 + 1/4*u^6 + 2*t^2*u*w - x*u^3*w + t^3*v - x^3*v^2 + 2*x*t*u*v^2", ring),
                      {},
                      Poly(ring)};
    AmbientRing A{ring, ex.relation};
    for (int a : {1, -1})
        for (int b : {1, -1}) {
            Derivation D = Derivation::zero(ring);
            D.images.insert_or_assign("u", parse_polynomial("2*t*v", ring));
            D.images.insert_or_assign("v", parse_polynomial("x^2", ring) * Rational(a));
            Derivation Dt = D;
            Dt.images.insert_or_assign("w", parse_polynomial("t^2 - 3/2*x*u^2", ring) * Rational(b));
            ex.variants.push_back({a, b, A.reduce(apply(D, ex.relation)), A.reduce(apply(Dt, ex.y_expr)),
                                   A.reduce(apply(Dt, ex.z_expr))});
        }
    Poly x = Poly::variable(ring, "x"), t = Poly::variable(ring, "t");
    ex.cubic_residual = A.reduce(x.pow(2) * ex.z_expr - (ex.y_expr.pow(2) - t.pow(3) + x));
    return ex;
}

Report example_verify()
{
    Report report;

    // Control: on k[u, v, w] the derivation d/dw kills u and v and flows w -> w + time.
    RingPtr cring = make_ring({"u", "v", "w"});
    Derivation dw = Derivation::from_strings(cring, {{"w", "1"}});
    AmbientRing plain{cring, std::nullopt};
    for (const char* inv : {"u", "v"}) {
        Poly res = apply(dw, parse_polynomial(inv, cring));
        report.add(std::string("control: d/dw(") + inv + ")", res.is_zero(), to_string(res), "synthetic control");
    }
    Report fl = flow_checks(dw, plain, default_nilpotency_bound());
    report.append(fl, "control: ");

    RussellExample ex = russell_example();
    for (const auto& v : ex.variants) {
        std::string tag = "variant(" + sign_name(v.a) + "x^2 d/dv, " + sign_name(v.b) + " d/dw): ";
        report.note(tag + "tangency", to_string(v.tangency_residual), kExampleAnchor);
        report.note(tag + "D~(y)", to_string(v.y_residual), kExampleAnchor);
        report.note(tag + "D~(z)", to_string(v.z_residual), kExampleAnchor);
    }
    report.note("cubic: x^2 z - (y^2 - t^3 + x)", to_string(ex.cubic_residual), kExampleAnchor);
    return report;
}

}  // namespace kras::lnd
