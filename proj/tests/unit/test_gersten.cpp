#include "kras/gersten/divisor.hpp"
#include "kras/gersten/scenario.hpp"

#include <doctest.h>

#include <fstream>
#include <sstream>

using namespace kras;
using namespace kras::gersten;

namespace {

std::string read_scenario(const std::string& name)
{
    std::ifstream in(std::string(KRAS_SCENARIO_DIR) + "/" + name);
    REQUIRE(in.good());
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

struct KrFixture {
    int m, r, s;
    HypersurfaceVariety v;
    GerstenContext ctx;

    KrFixture(int m_, int r_, int s_)
        : m(m_), r(r_), s(s_), v(HypersurfaceVariety::koras_russell(m_, r_, s_)), ctx(v)
    {
        const RingPtr& R = v.ambient.ring;
        for (const char* n : {"x", "y", "t"})
            ctx.add_unit(n, Poly::variable(R, n));
        ctx.add_unit("S", p("x^" + std::to_string(m - 1) + "*z - 1"));
        ctx.symbol_context.order = {"t", "y", "x", "S"};
        ctx.add_divisor(make_divisor(v, "N", p("t"), "t"));
        ctx.add_divisor(make_divisor(v, "M", p("y"), "y"));
        ctx.add_divisor(make_divisor(v, "S", p("x^" + std::to_string(m - 1) + "*z - 1"), "S"));
        const RingPtr& C = curve_parameter_ring();
        auto c = [&](const std::string& t) { return parse_polynomial(t, C); };
        ctx.add_curve(make_curve(v, "L", {p("x"), p("y"), p("t")},
                                 {{"x", c("0")}, {"y", c("0")}, {"z", c("c")}, {"t", c("0")}}));
        ctx.add_curve(make_curve(v, "L'", {p("y"), p("t"), p("x^" + std::to_string(m - 1) + "*z - 1")},
                                 {{"x", c("c")}, {"y", c("0")}, {"z", c("c^" + std::to_string(1 - m))}, {"t", c("0")}}));
    }

    Poly p(const std::string& text) const { return parse_polynomial(text, v.ambient.ring); }

    UnitCertificate cert(const std::string& name, const std::string& target, const std::string& d,
                         const std::string& c, const std::string& pi, int k, mw::UnitExpr unit) const
    {
        return UnitCertificate{name, target, d, c, pi, k, std::move(unit)};
    }

    void certify_all()
    {
        using mw::UnitExpr;
        REQUIRE(ctx.add_certificate(cert("xN", "x", "N", "L", "y", r, UnitExpr::generator("S", -1))).ok());
        REQUIRE(ctx.add_certificate(cert("SN", "S", "N", "L'", "y", r, UnitExpr::generator("x", -1))).ok());
        REQUIRE(ctx.add_certificate(cert("xM", "x", "M", "L", "t", s, UnitExpr::generator("S", -1))).ok());
        REQUIRE(ctx.add_certificate(cert("SM", "S", "M", "L'", "t", s, UnitExpr::generator("x", -1))).ok());
        REQUIRE(ctx.add_local({"N", "L", "y"}).ok());
        REQUIRE(ctx.add_local({"N", "L'", "y"}).ok());
        REQUIRE(ctx.add_local({"M", "L", "t"}).ok());
        REQUIRE(ctx.add_local({"M", "L'", "t"}).ok());
    }

    bool same(const mw::TwistedSymbol& a, const std::string& expected)
    {
        mw::TwistedSymbol e = mw::twist_reorder(mw::parse_symbol(expected), ctx.twist_order, ctx.symbol_context);
        return a.twist == e.twist && mw::eq(a.symbol, e.symbol, ctx.symbol_context) == mw::Equality::equal;
    }
};

}  // namespace

TEST_CASE("integer macro expressions")
{
    std::map<std::string, mpz_class> env{{"r", 2}, {"s", 3}, {"g", 2}};
    CHECK(eval_int_expr("1 + 2*3", env) == 7);
    CHECK(eval_int_expr("(g*r - 1) / s", env) == 1);
    CHECK(eval_int_expr("(-1)^(g*r + 1)", env) == -1);
    CHECK(eval_int_expr("-1^2", env) == -1);
    CHECK(eval_int_expr("-7 % 3", env) == 2);
    CHECK(eval_int_expr("inv(3, 4)", env) == 3);
    CHECK(eval_int_expr("inv(2, 5)", env) == 3);
    CHECK(eval_int_expr("1 - m", {{"m", 4}}) == -3);
    CHECK_THROWS_AS(eval_int_expr("5 / 2", env), std::invalid_argument);
    CHECK_THROWS_AS(eval_int_expr("inv(2, 4)", env), std::invalid_argument);
    CHECK_THROWS_AS(eval_int_expr("q + 1", env), std::invalid_argument);
    CHECK_THROWS_AS(eval_int_expr("2^-1", env), std::invalid_argument);
    CHECK_THROWS_AS(eval_int_expr("(1", env), std::invalid_argument);
}

TEST_CASE("divisors and curves")
{
    KrFixture f(3, 2, 3);
    const DivisorDatum& n = f.ctx.divisor("N");
    REQUIRE(n.coordinate);
    CHECK(*n.coordinate == "t");
    CHECK(*n.restricted_relation == f.p("x^3*z - y^2 - x"));
    CHECK_FALSE(f.ctx.divisor("S").coordinate);
    CHECK(curve_in_divisor(f.ctx.curve("L"), n));
    CHECK(curve_in_divisor(f.ctx.curve("L'"), f.ctx.divisor("S")));
    CHECK_FALSE(curve_in_divisor(f.ctx.curve("L"), f.ctx.divisor("S")));
    CHECK_THROWS_AS(make_divisor(f.v, "bad", f.p("1"), "b"), std::invalid_argument);

    const RingPtr& C = curve_parameter_ring();
    // x = c does not kill the generator x.
    CHECK_THROWS_AS(make_curve(f.v, "bad", {f.p("x"), f.p("y"), f.p("t")},
                               {{"x", parse_polynomial("c", C)}, {"y", Poly(C)}, {"z", Poly(C)}, {"t", Poly(C)}}),
                    std::invalid_argument);
    // Off the threefold: x = c, z = 0 on y = t = 0 leaves -c.
    CHECK_THROWS_AS(make_curve(f.v, "off", {f.p("y"), f.p("t")},
                               {{"x", parse_polynomial("c", C)}, {"y", Poly(C)}, {"z", Poly(C)}, {"t", Poly(C)}}),
                    std::invalid_argument);
}

TEST_CASE("unit certificates")
{
    for (int m : {2, 3, 4}) {
        KrFixture f(m, 2, 3);
        using mw::UnitExpr;
        const auto& d = f.ctx;
        auto check = [&](const UnitCertificate& c) {
            return check_unit_certificate(c, f.v, d.divisor(c.divisor), d.curve(c.curve), d.units());
        };
        // On M: x S = t^s, so S = t^s x^-1 near L'.
        CHECK(check(f.cert("SM", "S", "M", "L'", "t", 3, UnitExpr::generator("x", -1))).ok());
        CHECK(check(f.cert("xN", "x", "N", "L", "y", 2, UnitExpr::generator("S", -1))).ok());
        // Negative controls: valuation off by one.
        CHECK_FALSE(check(f.cert("SM", "S", "M", "L'", "t", 2, UnitExpr::generator("x", -1))).ok());
        CHECK_FALSE(check(f.cert("SM", "S", "M", "L'", "t", 4, UnitExpr::generator("x", -1))).ok());
        // x = y^r (1 - x^(m-1) z)^-1 has the wrong sign: 1 - x^(m-1) z = -S.
        CHECK_FALSE(check(f.cert("xN", "x", "N", "L", "y", 2, UnitExpr::minus_one() * UnitExpr::generator("S", -1)
                                                                  * UnitExpr::minus_one() * UnitExpr::minus_one()))
                        .ok());
        // The unit part must not vanish on the curve: x is zero along L.
        Report r = check(f.cert("bad", "S", "N", "L", "y", 2, UnitExpr::generator("x", -1)));
        CHECK_FALSE(r.ok());
        const Check* unit = r.find("cert bad: unit part is a unit on L");
        REQUIRE(unit);
        CHECK(unit->status == Status::fail);
    }
}

TEST_CASE("local uniformizers need certificates")
{
    KrFixture f(2, 2, 3);
    Report r = f.ctx.add_local({"N", "L", "y"});
    CHECK_FALSE(r.ok());
    f.certify_all();
    // t on N vanishes on L' but not to first order: t is zero on N itself.
    CHECK(f.ctx.add_local({"N", "L", "y"}).ok());
    CHECK_FALSE(f.ctx.add_local({"N", "L", "x"}).ok());
}

TEST_CASE("divisor residues")
{
    for (int m : {2, 3, 4}) {
        KrFixture f(m, 2, 3);
        f.certify_all();
        auto res = [&](const std::string& sym, const std::string& d, const std::string& c) {
            mw::TwistedSymbol s = mw::parse_symbol(sym);
            s.symbol = mw::normalize(s.symbol, f.ctx.symbol_context);
            return divisor_residue(f.ctx, s, d, c);
        };
        CHECK(f.same(res("[y] @[t]", "N", "L"), "<1> @[t,y]"));
        CHECK(f.same(res("[y] @[t]", "N", "L'"), "<1> @[t,y]"));
        CHECK(f.same(res("[S] @[y]", "M", "L'"), "<-x>*3_eps @[t,y]"));
        CHECK(f.same(res("[S] @[y]", "M", "L'"), "<x>*3_eps @[y,t]"));
        CHECK(f.same(res("[S] @[t]", "N", "L'"), "<x>*2_eps @[t,y]"));
        // x is a unit along L' inside N.
        CHECK(res("[x] @[t]", "N", "L'").symbol.is_zero());
        // L is not contained in S.
        CHECK(res("<x>*[y] @[S]", "S", "L").symbol.is_zero());
        // x vanishes on L: rewritten through its certificate, x = y^2 S^-1.
        CHECK(f.same(res("[x] @[t]", "N", "L"), "2_eps @[t,y]"));
        // S is not a coordinate divisor and nothing is derived yet.
        CHECK_THROWS_AS(res("<x>*[y] @[S]", "S", "L'"), ResidueError);
    }
}

TEST_CASE("residue without certificates errors")
{
    KrFixture f(2, 2, 3);
    auto s = mw::parse_symbol("[y] @[t]");
    CHECK_THROWS_AS(divisor_residue(f.ctx, s, "N", "L"), ResidueError);
}

TEST_CASE("twist order flip")
{
    KrFixture f(2, 2, 3);
    f.certify_all();
    auto s = mw::parse_symbol("[y] @[t]");
    mw::TwistedSymbol a = divisor_residue(f.ctx, s, "N", "L");
    f.ctx.twist_order = {"y", "t"};
    mw::TwistedSymbol b = divisor_residue(f.ctx, s, "N", "L");
    CHECK(b.twist == std::vector<std::string>{"y", "t"});
    CHECK(mw::eq(b.symbol, a.symbol * mw::GWElem::minus_one_class(), f.ctx.symbol_context) == mw::Equality::equal);
}

TEST_CASE("prop36 scenario over the grid")
{
    const std::string text = read_scenario("prop36.scn");
    for (long m : {2, 3, 4})
        for (auto [r, s] : {std::pair{2L, 3L}, {3L, 4L}, {2L, 5L}}) {
            CAPTURE(m);
            CAPTURE(r);
            CAPTURE(s);
            ScenarioResult res = run_scenario(text, {{{"m", m}, {"r", r}, {"s", s}}, {}, {}});
            INFO(res.error);
            for (const auto& c : res.report.checks)
                if (c.status == Status::fail)
                    INFO(c.name << " -> " << c.residual);
            CHECK_FALSE(res.errored);
            CHECK(res.report.ok());
            CHECK(res.passed());
            const Check* last = res.report.find("assert-support bY : L, L'");
            CHECK(last);
        }
}

TEST_CASE("prop36 boundary sign follows gr parity")
{
    const std::string text = read_scenario("prop36.scn");
    // (2,3): g = 2, gr = 4 even; (3,4): g = 3, gr = 9 odd.
    for (auto [r, s, sign] : {std::tuple{2L, 3L, "<-1>"}, {3L, 4L, "<1>"}, {2L, 5L, "<-1>"}}) {
        ScenarioResult res = run_scenario(text, {{{"m", 2}, {"r", r}, {"s", s}}, {}, {}});
        REQUIRE(res.passed());
        std::string name = std::string("assert-equal bW@L {") + sign + " @[t,y]}";
        CHECK(res.report.find(name));
    }
}

TEST_CASE("prop36 errors when any certificate is disabled")
{
    const std::string text = read_scenario("prop36.scn");
    ScenarioInfo info = describe_scenario(text);
    REQUIRE(info.certificates.size() == 4);
    for (const auto& cert : info.certificates) {
        CAPTURE(cert);
        ScenarioResult res = run_scenario(text, {{}, {cert}, {}});
        CHECK(res.errored);
        CHECK_FALSE(res.passed());
    }
}

TEST_CASE("prop36 under the opposite twist order")
{
    const std::string text = read_scenario("prop36.scn");
    ScenarioResult a = run_scenario(text, {});
    ScenarioResult b = run_scenario(text, {{}, {}, std::vector<std::string>{"y", "t"}});
    REQUIRE(a.report.checks.size() == b.report.checks.size());
    CHECK(a.passed());
    CHECK(b.passed());
    for (std::size_t i = 0; i < a.report.checks.size(); ++i)
        CHECK(a.report.checks[i].status == b.report.checks[i].status);
    const Check* za = a.report.find("residue zL = Z at L");
    const Check* zb = b.report.find("residue zL = Z at L");
    REQUIRE(za);
    REQUIRE(zb);
    CHECK(za->residual == "<1> @[t,y]");
    CHECK(zb->residual == "<-1> @[y,t]");
}

TEST_CASE("negative control: nonzero residue at L' fails")
{
    std::string text = read_scenario("prop36.scn");
    text += "assert-nonzero zL'\nassert-zero zL\n";
    ScenarioResult res = run_scenario(text, {});
    CHECK_FALSE(res.errored);
    CHECK_FALSE(res.report.ok());
    REQUIRE_FALSE(res.report.checks.empty());
    CHECK(res.report.checks.back().name == "assert-nonzero zL'");
    CHECK(res.report.checks.back().status == Status::fail);
    // The run halts at the first failed assert.
    CHECK_FALSE(res.report.find("assert-zero zL"));
}

TEST_CASE("other shipped scenarios")
{
    ScenarioResult r = run_scenario(read_scenario("example-russell.scn"), {});
    INFO(r.error);
    CHECK(r.passed());
    bool reported = false;
    for (const auto& c : r.report.checks)
        reported = reported || c.status == Status::reported;
    CHECK(reported);

    for (long m : {2, 3, 4})
        for (auto [rr, s] : {std::pair{2L, 3L}, {3L, 4L}, {2L, 5L}}) {
            ScenarioResult k = run_scenario(read_scenario("lnd-koras.scn"), {{{"m", m}, {"r", rr}, {"s", s}}, {}, {}});
            INFO(k.error);
            for (const auto& c : k.report.checks)
                if (c.status == Status::fail)
                    INFO(c.name << " -> " << c.residual);
            CHECK(k.passed());
        }
}

TEST_CASE("scenario parse errors")
{
    auto parse_error_line = [](const std::string& text) {
        try {
            run_scenario(text, {});
        } catch (const ScenarioParseError& e) {
            return e.line();
        }
        return -1;
    };
    CHECK(parse_error_line("ring x\n") == 1);
    CHECK(parse_error_line("kras-scenario 2\n") == 1);
    CHECK(parse_error_line("kras-scenario 1\nfrobnicate x\n") == 2);
    CHECK(parse_error_line("kras-scenario 1\nring x y\nchain A\nterm N : [y] @[t]\n") == 3);
    CHECK(parse_error_line("kras-scenario 1\nparam m 2\nring x\nrelation x^${m/0}\n") == 4);
    CHECK(parse_error_line("kras-scenario 1\nring x y\nrelation x +* y\n") == 3);
    CHECK(parse_error_line("kras-scenario 1\nring x y\ncert a : x on N at L = y\n") == 3);
    CHECK_THROWS_AS(run_scenario("kras-scenario 1\nring x\n", {{{"q", 1}}, {}, {}}), ScenarioParseError);
}

TEST_CASE("scenario runtime errors")
{
    ScenarioResult r = run_scenario("kras-scenario 1\nring x y\nvalue a = [x]\nassert-equal b a\n", {});
    CHECK(r.errored);
    INFO(r.error);
    CHECK(r.error.find("unknown value 'b'") != std::string::npos);
}
