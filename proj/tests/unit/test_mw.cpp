#include "doctest.h"
#include "mw_oracle.hpp"
#include "../common/random_symbol.hpp"

#include "kras/mw/symbol.hpp"

#include <numeric>
#include <random>

using namespace kras::mw;

namespace {

MWSymbol sym(const std::string& text, int zero_degree = 0) { return parse_symbol(text, zero_degree).symbol; }

std::string nf(const std::string& text, const SymbolContext& ctx = {}) { return to_string(normalize(sym(text), ctx)); }

bool same(const std::string& a, const std::string& b, const SymbolContext& ctx = {})
{
    return eq(sym(a), sym(b), ctx) == Equality::equal;
}

using kras::testdata::random_symbol;

/// Apply one defining relation somewhere in s; the value is unchanged.
MWSymbol rewrite_once(MWSymbol s, std::mt19937& rng, const std::vector<std::string>& gens, const SymbolContext& ctx)
{
    if (s.terms.empty())
        return s;
    std::uniform_int_distribution<int> kind_d(0, 4), exp_d(-2, 2), coin(0, 1);
    std::uniform_int_distribution<std::size_t> gen_d(0, gens.size() - 1);
    auto unit = [&] {
        UnitExpr u;
        u.sign = coin(rng) ? -1 : 1;
        u = u * UnitExpr::generator(gens[gen_d(rng)], exp_d(rng));
        return u;
    };
    std::size_t ti = std::uniform_int_distribution<std::size_t>(0, s.terms.size() - 1)(rng);
    MWTerm t = s.terms[ti];
    switch (kind_d(rng)) {
    case 0:  // [ab] = [a] + <a>[b]
        if (!t.brackets.empty()) {
            std::size_t i = std::uniform_int_distribution<std::size_t>(0, t.brackets.size() - 1)(rng);
            UnitExpr a = unit();
            MWTerm first = t, second = t;
            first.brackets[i] = a;
            second.brackets[i] = t.brackets[i] * a.inverse();
            second.coeff = second.coeff * GWElem::of(a);
            s.terms[ti] = first;
            s.terms.push_back(second);
        }
        break;
    case 1:  // [a][b] = eps [b][a]
        if (t.brackets.size() >= 2) {
            std::size_t i = std::uniform_int_distribution<std::size_t>(0, t.brackets.size() - 2)(rng);
            std::swap(s.terms[ti].brackets[i], s.terms[ti].brackets[i + 1]);
            s.terms[ti].coeff = s.terms[ti].coeff * GWElem::epsilon();
        }
        break;
    case 2: {  // C = <u>(<u>C) and <u> = 1 + eta[u]
        UnitExpr u = unit();
        GWElem c = t.coeff * GWElem::of(u);
        MWTerm plain{t.eta, c, t.brackets}, eta{t.eta + 1, c, t.brackets};
        eta.brackets.insert(eta.brackets.begin(), u);
        s.terms[ti] = plain;
        s.terms.push_back(eta);
        break;
    }
    case 3: {  // + eta h C [u] B = 0
        MWTerm z{t.eta + 1, GWElem::hyperbolic() * t.coeff, t.brackets};
        z.brackets.insert(z.brackets.begin(), unit());
        s.terms.push_back(z);
        break;
    }
    default:  // + C [z][w] R = 0 for a declared complement pair
        if (t.brackets.size() >= 2 && !ctx.complements.empty()) {
            MWTerm z = t;
            z.brackets[0] = UnitExpr::generator(ctx.complements[0].first);
            z.brackets[1] = UnitExpr::generator(ctx.complements[0].second);
            if (coin(rng))
                std::swap(z.brackets[0], z.brackets[1]);
            s.terms.push_back(z);
        }
        break;
    }
    return s;
}

}  // namespace

TEST_CASE("GW arithmetic and epsilon integers")
{
    CHECK(epsilon_int(0).is_zero());
    CHECK(epsilon_int(1) == GWElem::one());
    CHECK(epsilon_int(2) == GWElem::hyperbolic());
    CHECK(GWElem::epsilon() * GWElem::epsilon() == GWElem::one());
    CHECK(epsilon_int(-1) == GWElem::minus_one_class());
    CHECK(epsilon_int(-3) == GWElem::minus_one_class() * epsilon_int(3));
    for (long p = -6; p <= 6; ++p)
        for (long q = -6; q <= 6; ++q)
            CHECK(epsilon_int(p) * epsilon_int(q) == epsilon_int(p * q));
    for (long n = 0; n <= 20; ++n)
        CHECK(epsilon_int(n).rank() == n);
    CHECK(to_string(GWElem::hyperbolic()) == "<1> + <-1>");
}

TEST_CASE("square classes")
{
    UnitExpr u = UnitExpr::generator("x", 3) * UnitExpr::generator("t", 2) * UnitExpr::minus_one();
    SquareClass c = SquareClass::of(u);
    CHECK(c.negative);
    CHECK(c.gens == std::vector<std::string>{"x"});
    CHECK(to_string(c) == "<-x>");
    CHECK(SquareClass::of(u * u).gens.empty());
    CHECK(to_string(u) == "-t^2*x^3");
    CHECK((u * u.inverse()).is_one());
}

TEST_CASE("normalize: worked examples")
{
    CHECK(nf("[1]") == "0");
    CHECK(normalize(sym("[1]")).degree == 1);
    CHECK(same("[t^3]", "3_eps*[t]"));
    CHECK(same("[x^-1*t^3]", "[x^-1] + <x>*3_eps*[t]"));
    CHECK(same("[x^-1]", "eps*[x]"));
    CHECK(same("[a*b]", "[a] + <a>[b]"));
    CHECK(same("eps^2", "<1>"));
    CHECK(nf("e*h") == "0");
    CHECK(eq(sym("[x]"), sym("[t]")) == Equality::distinct_normal_forms);
    CHECK_THROWS_AS(eq(sym("[x]"), sym("e")), std::invalid_argument);
    CHECK(nf("e*[x]") == "-<1> + <x>");
    CHECK(nf("[x][x]") == "[-1,x]");
    CHECK(nf("<-x>*[x]") == "[x]");
    CHECK(same("[y][x]", "eps*[x][y]", SymbolContext{{"x", "y"}, {}}));
    CHECK(nf("[x][y]", SymbolContext{{}, {{"x", "y"}}}) == "0");
    CHECK(nf("e*<-x>") == "-e*<x>");
}

TEST_CASE("[t^s] = s_eps [t] for s <= 9")
{
    for (int s = 1; s <= 9; ++s)
        CHECK(same("[t^" + std::to_string(s) + "]", std::to_string(s) + "_eps*[t]"));
}

TEST_CASE("g_eps r_eps - h_eps s_eps parity rule")
{
    int cases = 0;
    for (long r = 2; r <= 9; ++r)
        for (long s = 2; s <= 9; ++s) {
            if (std::gcd(r, s) != 1)
                continue;
            long g = 1;
            while ((g * r) % s != 1)
                ++g;
            long h = (g * r - 1) / s;
            MWSymbol diff = MWSymbol::gw(epsilon_int(g) * epsilon_int(r) - epsilon_int(h) * epsilon_int(s));
            MWSymbol expected = sym((g * r) % 2 == 1 ? "<1>" : "<-1>");
            CHECK_MESSAGE(eq(diff, expected) == Equality::equal, "r=" << r << " s=" << s);
            ++cases;
        }
    CHECK(cases == 38);
}

TEST_CASE("residue and twists")
{
    CHECK(to_string(residue(parse_symbol("[t]"), "t", "t")) == "<1> @[t]");
    CHECK(residue(parse_symbol("[x]"), "t", "t").symbol.is_zero());
    CHECK(residue(parse_symbol("[x]"), "t", "t").symbol.degree == 0);

    TwistedSymbol s = parse_symbol("<x>*3_eps*[t] @[y]");
    TwistedSymbol d = residue(s, "t", "t");
    CHECK(d.twist == std::vector<std::string>{"y", "t"});
    CHECK(eq(d.symbol, sym("<x>*3_eps")) == Equality::equal);
    TwistedSymbol re = twist_reorder(d, {"t", "y"});
    CHECK(eq(re.symbol, sym("<-x>*3_eps")) == Equality::equal);

    CHECK(eq(twist_reorder(d, {"y", "t"}).symbol, d.symbol) == Equality::equal);
    CHECK(eq(twist_reorder(re, {"y", "t"}).symbol, d.symbol) == Equality::equal);
    CHECK_THROWS_AS(twist_reorder(d, {"t"}), std::invalid_argument);

    // pi in a class: <t x>[y] -> eta <x>[y]
    CHECK(eq(residue(parse_symbol("<t*x>*[y]"), "t", "t").symbol, sym("e*<x>*[y]")) == Equality::equal);
    // bring pi to the front: [y][t] = eps [t][y]
    CHECK(eq(residue(parse_symbol("[y][t]"), "t", "t").symbol, sym("eps*[y]")) == Equality::equal);
    CHECK_THROWS(residue(parse_symbol("[t] @[t]"), "t", "t"));
}

TEST_CASE("twist reorder is independent of the factorization")
{
    TwistedSymbol s{sym("<x>"), {"a", "b", "c", "d"}};
    std::vector<std::string> target{"c", "a", "d", "b"};
    TwistedSymbol direct = twist_reorder(s, target);
    TwistedSymbol via = twist_reorder(twist_reorder(twist_reorder(s, {"b", "a", "c", "d"}), {"d", "c", "b", "a"}), target);
    CHECK(to_string(direct) == to_string(via));
}

TEST_CASE("residue of a pi-free symbol vanishes")
{
    std::mt19937 rng(7);
    for (int i = 0; i < 200; ++i) {
        MWSymbol s = random_symbol(rng, {"x", "y", "z"});
        CHECK(residue(TwistedSymbol{s, {}}, "t", "t").symbol.is_zero());
    }
}

TEST_CASE("parser")
{
    CHECK(to_string(parse_symbol("(-3)_eps").symbol.terms.front().coeff) == "<1> + 2*<-1>");
    CHECK(nf("2*<x> - <x> + <x>") == "2*<x>");
    CHECK(nf("[x, y]") == nf("[x][y]"));
    CHECK(parse_symbol("0", 2).symbol.degree == 2);
    CHECK(to_string(parse_symbol("<1> @[t,y]")) == "<1> @[t,y]");
    CHECK_THROWS_AS(parse_symbol("[x"), SymbolParseError);
    CHECK_THROWS_AS(parse_symbol("x"), SymbolParseError);
    CHECK_THROWS_AS(parse_symbol("<x> +"), SymbolParseError);
    CHECK_THROWS_AS(parse_symbol("[2]"), SymbolParseError);
    CHECK_THROWS_AS(parse_symbol("[x] + e"), std::invalid_argument);
}

TEST_CASE("audit trail uses whitelisted rules")
{
    Audit audit;
    normalize(sym("e*[x^2*y^-1][y][x]"), SymbolContext{}, &audit);
    CHECK(!audit.applied.empty());
    for (auto [rule, n] : audit.counts()) {
        CHECK(n > 0);
        CHECK(std::string(rule_name(rule)) != "?");
        CHECK(std::string(rule_justification(rule)).size() > 5);
    }
}

TEST_CASE("normalize on 1000 random symbols: idempotent, printable, sound")
{
    const std::vector<std::string> gens{"x", "y", "z", "w"};
    const SymbolContext ctx{{"y", "x"}, {{"z", "w"}}};
    const auto assignments = oracle::sign_assignments(gens, ctx);
    std::mt19937 rng(20261015);
    for (int i = 0; i < 1000; ++i) {
        MWSymbol s = random_symbol(rng, gens);
        MWSymbol n = normalize(s, ctx);
        MWSymbol nn = normalize(n, ctx);
        REQUIRE(to_string(nn) == to_string(n));
        CHECK(n.degree == s.degree);
        std::string printed = to_string(n);
        CHECK(to_string(normalize(parse_symbol(printed, s.degree).symbol, ctx)) == printed);
        for (const auto& sg : assignments)
            CHECK(oracle::real_value(s, sg) == oracle::real_value(n, sg));
        CHECK(oracle::milnor_value(s, ctx) == oracle::milnor_value(n, ctx));
    }
}

TEST_CASE("normal forms are stable under random applications of the defining relations")
{
    const std::vector<std::string> gens{"x", "y", "z", "w"};
    const SymbolContext ctx{{"y", "x"}, {{"z", "w"}}};
    std::mt19937 rng(1729);
    for (int i = 0; i < 1000; ++i) {
        MWSymbol s = random_symbol(rng, gens);
        MWSymbol r = s;
        for (int k = std::uniform_int_distribution<int>(1, 6)(rng); k > 0; --k)
            r = rewrite_once(r, rng, gens, ctx);
        INFO(to_string(normalize(s, ctx)));
        CHECK(eq(s, r, ctx) == Equality::equal);
    }
}
