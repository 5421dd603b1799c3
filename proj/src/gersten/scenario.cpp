#include "kras/gersten/scenario.hpp"

#include "kras/gersten/divisor.hpp"
#include "kras/lnd/derivation.hpp"
#include "kras/lnd/examples.hpp"
#include "kras/mw/symbol.hpp"

#include <algorithm>
#include <cctype>
#include <sstream>
#include <variant>

namespace kras::gersten {

ScenarioParseError::ScenarioParseError(int line, const std::string& what)
    : std::invalid_argument(line > 0 ? "line " + std::to_string(line) + ": " + what : what), line_(line)
{
}

namespace {

using Env = std::map<std::string, mpz_class>;

std::string trim(std::string_view s)
{
    std::size_t b = 0, e = s.size();
    while (b < e && std::isspace(static_cast<unsigned char>(s[b])))
        ++b;
    while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1])))
        --e;
    return std::string(s.substr(b, e - b));
}

bool is_name_start(char c) { return std::isalpha(static_cast<unsigned char>(c)) || c == '_'; }
bool is_name_char(char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '\''; }

bool is_name(std::string_view s)
{
    if (s.empty() || !is_name_start(s[0]))
        return false;
    for (char c : s)
        if (!is_name_char(c))
            return false;
    return true;
}

std::vector<std::string> words(std::string_view s)
{
    std::istringstream in{std::string(s)};
    std::vector<std::string> out;
    for (std::string w; in >> w;)
        out.push_back(w);
    return out;
}

/// Splits at commas outside brackets and parentheses.
std::vector<std::string> split_list(std::string_view s)
{
    std::vector<std::string> out;
    int depth = 0;
    std::size_t start = 0;
    for (std::size_t i = 0; i < s.size(); ++i) {
        char c = s[i];
        if (c == '(' || c == '[' || c == '{')
            ++depth;
        else if (c == ')' || c == ']' || c == '}')
            --depth;
        else if (c == ',' && depth == 0) {
            out.push_back(trim(s.substr(start, i - start)));
            start = i + 1;
        }
    }
    out.push_back(trim(s.substr(start)));
    return out;
}

class IntExprParser {
public:
    IntExprParser(std::string_view text, const Env& env) : text_(text), env_(env) {}

    mpz_class parse()
    {
        mpz_class v = expr();
        skip_ws();
        if (pos_ != text_.size())
            fail("unexpected '" + std::string(1, text_[pos_]) + "'");
        return v;
    }

private:
    [[noreturn]] void fail(const std::string& what) const
    {
        throw std::invalid_argument("integer expression '" + std::string(text_) + "': " + what);
    }
    void skip_ws()
    {
        while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_])))
            ++pos_;
    }
    bool eat(char c)
    {
        skip_ws();
        if (pos_ < text_.size() && text_[pos_] == c) {
            ++pos_;
            return true;
        }
        return false;
    }

    mpz_class expr()
    {
        mpz_class v = term();
        for (;;) {
            if (eat('+'))
                v += term();
            else if (eat('-'))
                v -= term();
            else
                return v;
        }
    }

    mpz_class term()
    {
        mpz_class v = unary();
        for (;;) {
            if (eat('*')) {
                v *= unary();
            } else if (eat('/')) {
                mpz_class d = unary();
                if (d == 0)
                    fail("division by zero");
                if (mpz_divisible_p(v.get_mpz_t(), d.get_mpz_t()) == 0)
                    fail("inexact division");
                mpz_divexact(v.get_mpz_t(), v.get_mpz_t(), d.get_mpz_t());
            } else if (eat('%')) {
                mpz_class d = unary();
                if (d <= 0)
                    fail("modulus must be positive");
                mpz_fdiv_r(v.get_mpz_t(), v.get_mpz_t(), d.get_mpz_t());
            } else {
                return v;
            }
        }
    }

    mpz_class unary()
    {
        if (eat('-'))
            return -unary();
        if (eat('+'))
            return unary();
        return power();
    }

    mpz_class power()
    {
        mpz_class base = atom();
        if (!eat('^'))
            return base;
        mpz_class e = unary();
        if (e < 0 || e > 4096)
            fail("exponent out of range");
        mpz_class r;
        mpz_pow_ui(r.get_mpz_t(), base.get_mpz_t(), e.get_ui());
        return r;
    }

    mpz_class atom()
    {
        skip_ws();
        if (eat('(')) {
            mpz_class v = expr();
            if (!eat(')'))
                fail("missing ')'");
            return v;
        }
        if (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) {
            std::size_t start = pos_;
            while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_])))
                ++pos_;
            return mpz_class(std::string(text_.substr(start, pos_ - start)));
        }
        if (pos_ < text_.size() && is_name_start(text_[pos_])) {
            std::size_t start = pos_;
            while (pos_ < text_.size() && (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_'))
                ++pos_;
            std::string name(text_.substr(start, pos_ - start));
            if (eat('('))
                return call(name);
            auto it = env_.find(name);
            if (it == env_.end())
                fail("unknown name '" + name + "'");
            return it->second;
        }
        fail("expected a number, name or '('");
    }

    mpz_class call(const std::string& name)
    {
        std::vector<mpz_class> args{expr()};
        while (eat(','))
            args.push_back(expr());
        if (!eat(')'))
            fail("missing ')'");
        if (name != "inv" || args.size() != 2)
            fail("unknown function '" + name + "'");
        if (args[1] <= 1)
            fail("inv needs a modulus above 1");
        mpz_class r;
        if (mpz_invert(r.get_mpz_t(), args[0].get_mpz_t(), args[1].get_mpz_t()) == 0)
            fail("inv arguments are not coprime");
        return r;
    }

    std::string_view text_;
    const Env& env_;
    std::size_t pos_ = 0;
};

struct Line {
    int no;
    std::string text;
};

/// Non-empty lines with comments removed; checks the version header.
std::vector<Line> source_lines(std::string_view text)
{
    std::vector<Line> out;
    std::istringstream in{std::string(text)};
    int no = 0;
    for (std::string raw; std::getline(in, raw);) {
        ++no;
        if (auto hash = raw.find('#'); hash != std::string::npos)
            raw.erase(hash);
        std::string t = trim(raw);
        if (!t.empty())
            out.push_back({no, t});
    }
    if (out.empty() || words(out.front().text) != std::vector<std::string>{"kras-scenario", "1"})
        throw ScenarioParseError(out.empty() ? 0 : out.front().no, "expected header 'kras-scenario 1'");
    out.erase(out.begin());
    return out;
}

std::pair<std::string, std::string> keyword(const std::string& text)
{
    std::size_t sp = text.find_first_of(" \t");
    if (sp == std::string::npos)
        return {text, ""};
    return {text.substr(0, sp), trim(std::string_view(text).substr(sp))};
}

long to_long(const mpz_class& v, int line)
{
    if (!v.fits_slong_p())
        throw ScenarioParseError(line, "parameter value out of range");
    return v.get_si();
}

/// Processes param and let lines and expands ${...} in the others.
std::vector<Line> expand(const std::vector<Line>& lines, const ScenarioOptions& options,
                         std::map<std::string, long>& effective)
{
    Env env;
    std::set<std::string> declared;
    std::vector<Line> out;
    for (const auto& line : lines) {
        auto [kw, rest] = keyword(line.text);
        try {
            if (kw == "param") {
                auto w = words(rest);
                if (w.size() != 2 || !is_name(w[0]))
                    throw ScenarioParseError(line.no, "expected 'param NAME DEFAULT'");
                mpz_class v = eval_int_expr(w[1], env);
                if (auto it = options.params.find(w[0]); it != options.params.end())
                    v = it->second;
                env[w[0]] = v;
                effective[w[0]] = to_long(v, line.no);
                declared.insert(w[0]);
                continue;
            }
            if (kw == "let") {
                auto eqpos = rest.find('=');
                std::string name = trim(rest.substr(0, eqpos == std::string::npos ? 0 : eqpos));
                if (eqpos == std::string::npos || !is_name(name))
                    throw ScenarioParseError(line.no, "expected 'let NAME = EXPR'");
                env[name] = eval_int_expr(rest.substr(eqpos + 1), env);
                continue;
            }
            std::string text;
            std::size_t pos = 0;
            while (pos < line.text.size()) {
                std::size_t open = line.text.find("${", pos);
                if (open == std::string::npos) {
                    text += line.text.substr(pos);
                    break;
                }
                std::size_t close = line.text.find('}', open);
                if (close == std::string::npos)
                    throw ScenarioParseError(line.no, "unterminated '${'");
                text += line.text.substr(pos, open - pos);
                text += eval_int_expr(std::string_view(line.text).substr(open + 2, close - open - 2), env).get_str();
                pos = close + 1;
            }
            out.push_back({line.no, text});
        } catch (const ScenarioParseError&) {
            throw;
        } catch (const std::invalid_argument& e) {
            throw ScenarioParseError(line.no, e.what());
        }
    }
    for (const auto& [name, v] : options.params)
        if (!declared.count(name))
            throw ScenarioParseError(0, "unknown parameter '" + name + "'");
    return out;
}

// Statements after expansion. Polynomials and symbols stay as text until
// their step runs, since they need the declared ring.

struct Operand {
    enum Kind { literal, name, at } kind = name;
    std::string text;  // symbol text or value name
    std::string curve;
};

struct RingStep {
    std::vector<std::string> names;
};
struct RelationStep {
    std::string poly;
};
struct UnitStep {
    std::string name, poly;
};
struct OrderStep {
    std::vector<std::string> names;
};
struct TwistOrderStep {
    std::vector<std::string> names;
};
struct DivisorStep {
    std::string name, poly, twist;
};
struct CurveStep {
    std::string name;
    std::vector<std::string> gens;
    std::vector<std::pair<std::string, std::string>> values;
};
struct CertStep {
    std::string name, target, divisor, curve, unit, pi;
};
struct LocalStep {
    std::string divisor, curve, pi;
};
struct DerivedStep {
    std::string divisor, curve, source, value;
};
struct ChainTerm {
    std::string divisor, scale, symbol;
};
struct ChainStep {
    std::string name;
    std::vector<ChainTerm> terms;
};
struct ResidueStep {
    std::string name, chain, curve;
};
struct BoundaryStep {
    std::string name, chain;
};
struct CombineTerm {
    int sign = 1;
    std::string coef;
    Operand ref;
};
struct CombineStep {
    std::string name;
    std::vector<CombineTerm> terms;
};
struct ValueStep {
    std::string name, symbol;
};
struct AssertStep {
    enum Kind { equal, zero, nonzero } kind;
    Operand a, b;
};
struct SupportStep {
    std::string name;
    std::vector<std::string> curves;
};
struct DerivationStep {
    std::string name;
    std::map<std::string, std::string> images;
};
struct TangentStep {
    std::string name;
};
struct ResidualStep {
    std::string name, poly;
};
struct NilpotentStep {
    std::string name, var;
    int degree;
};
struct FlowStep {
    std::string name;
};
struct RussellStep {};

using Step = std::variant<RingStep, RelationStep, UnitStep, OrderStep, TwistOrderStep, DivisorStep, CurveStep, CertStep,
                          LocalStep, DerivedStep, ChainStep, ResidueStep, BoundaryStep, CombineStep, ValueStep,
                          AssertStep, SupportStep, DerivationStep, TangentStep, ResidualStep, NilpotentStep, FlowStep,
                          RussellStep>;

struct Statement {
    int line;
    std::string text;
    Step step;
};

class Compiler {
public:
    explicit Compiler(const std::vector<Line>& lines) : lines_(lines) {}

    std::vector<Statement> compile()
    {
        for (const auto& l : lines_) {
            auto [kw, rest] = keyword(l.text);
            if (kw == "local") {
                auto [head, pi] = split_once(l, rest, ':');
                auto w = words(head);
                if (w.size() != 2 || !is_name(pi))
                    fail(l, "expected 'local DIVISOR CURVE : UNIT'");
                locals_[{w[0], w[1]}] = pi;
            }
        }
        std::vector<Statement> out;
        for (std::size_t i = 0; i < lines_.size(); ++i) {
            const Line& l = lines_[i];
            auto [kw, rest] = keyword(l.text);
            if (kw == "chain") {
                ChainStep chain{single_name(l, rest, "chain NAME"), {}};
                std::size_t j = i + 1;
                for (; j < lines_.size(); ++j) {
                    auto [kw2, rest2] = keyword(lines_[j].text);
                    if (kw2 == "end")
                        break;
                    if (kw2 != "term")
                        fail(lines_[j], "expected 'term' or 'end' inside a chain");
                    chain.terms.push_back(chain_term(lines_[j], rest2));
                }
                if (j == lines_.size())
                    fail(l, "chain without 'end'");
                if (chain.terms.empty())
                    fail(l, "empty chain");
                out.push_back({l.no, l.text, chain});
                i = j;
                continue;
            }
            out.push_back({l.no, l.text, statement(l, kw, rest)});
        }
        return out;
    }

private:
    [[noreturn]] static void fail(const Line& l, const std::string& what) { throw ScenarioParseError(l.no, what); }

    static std::pair<std::string, std::string> split_once(const Line& l, const std::string& s, char sep)
    {
        auto p = s.find(sep);
        if (p == std::string::npos)
            fail(l, std::string("missing '") + sep + "'");
        return {trim(std::string_view(s).substr(0, p)), trim(std::string_view(s).substr(p + 1))};
    }

    static std::string single_name(const Line& l, const std::string& rest, const char* shape)
    {
        if (!is_name(rest))
            fail(l, std::string("expected '") + shape + "'");
        return rest;
    }

    static std::vector<std::string> name_list(const Line& l, const std::string& rest, const char* shape)
    {
        auto w = words(rest);
        if (w.empty())
            fail(l, std::string("expected '") + shape + "'");
        for (const auto& n : w)
            if (!is_name(n))
                fail(l, "bad name '" + n + "'");
        return w;
    }

    static ChainTerm chain_term(const Line& l, const std::string& rest)
    {
        auto [head, symbol] = split_once(l, rest, ':');
        ChainTerm t;
        t.symbol = symbol;
        auto sp = head.find_first_of(" \t");
        t.divisor = head.substr(0, sp);
        if (sp != std::string::npos) {
            auto [kw, scale] = keyword(trim(std::string_view(head).substr(sp)));
            if (kw != "scale" || scale.empty())
                fail(l, "expected 'term DIVISOR [scale COEF] : SYMBOL'");
            t.scale = scale;
        }
        if (!is_name(t.divisor) || t.symbol.empty())
            fail(l, "expected 'term DIVISOR [scale COEF] : SYMBOL'");
        return t;
    }

    static Operand operand(const Line& l, const std::string& tok)
    {
        if (tok.size() >= 2 && tok.front() == '{' && tok.back() == '}')
            return {Operand::literal, trim(std::string_view(tok).substr(1, tok.size() - 2)), ""};
        auto at = tok.find('@');
        if (at == std::string::npos) {
            if (!is_name(tok))
                fail(l, "bad operand '" + tok + "'");
            return {Operand::name, tok, ""};
        }
        std::string name = tok.substr(0, at), curve = tok.substr(at + 1);
        if (!is_name(name) || !is_name(curve))
            fail(l, "bad operand '" + tok + "'");
        return {Operand::at, name, curve};
    }

    /// Operands separated by spaces; {...} may contain spaces.
    static std::vector<Operand> operands(const Line& l, const std::string& rest)
    {
        std::vector<Operand> out;
        std::size_t i = 0;
        while (i < rest.size()) {
            if (std::isspace(static_cast<unsigned char>(rest[i]))) {
                ++i;
                continue;
            }
            std::size_t j = i;
            if (rest[i] == '{') {
                j = rest.find('}', i);
                if (j == std::string::npos)
                    fail(l, "unterminated '{'");
                ++j;
            } else {
                while (j < rest.size() && !std::isspace(static_cast<unsigned char>(rest[j])))
                    ++j;
            }
            out.push_back(operand(l, rest.substr(i, j - i)));
            i = j;
        }
        return out;
    }

    static CombineStep combine(const Line& l, const std::string& rest)
    {
        auto [name, expr] = split_once(l, rest, '=');
        if (!is_name(name))
            fail(l, "expected 'combine NAME = TERMS'");
        CombineStep c{name, {}};
        std::size_t i = 0;
        auto skip = [&] {
            while (i < expr.size() && std::isspace(static_cast<unsigned char>(expr[i])))
                ++i;
        };
        skip();
        while (i < expr.size()) {
            CombineTerm t;
            if (expr[i] == '+' || expr[i] == '-') {
                t.sign = expr[i] == '-' ? -1 : 1;
                ++i;
                skip();
            } else if (!c.terms.empty()) {
                fail(l, "expected '+' or '-' between combine terms");
            }
            if (i < expr.size() && expr[i] == '(') {
                int depth = 0;
                std::size_t j = i;
                for (; j < expr.size(); ++j) {
                    if (expr[j] == '(')
                        ++depth;
                    else if (expr[j] == ')' && --depth == 0)
                        break;
                }
                if (j == expr.size())
                    fail(l, "unbalanced '('");
                t.coef = expr.substr(i + 1, j - i - 1);
                i = j + 1;
                skip();
                if (i >= expr.size() || expr[i] != '*')
                    fail(l, "expected '*' after a coefficient");
                ++i;
                skip();
            }
            std::size_t j = i;
            if (i < expr.size() && expr[i] == '{') {
                j = expr.find('}', i);
                if (j == std::string::npos)
                    fail(l, "unterminated '{'");
                ++j;
            } else {
                while (j < expr.size() && (is_name_char(expr[j]) || expr[j] == '@'))
                    ++j;
            }
            if (j == i)
                fail(l, "expected a value reference");
            t.ref = operand(l, expr.substr(i, j - i));
            c.terms.push_back(std::move(t));
            i = j;
            skip();
        }
        if (c.terms.empty())
            fail(l, "empty combination");
        return c;
    }

    Step statement(const Line& l, const std::string& kw, const std::string& rest)
    {
        if (kw == "ring")
            return RingStep{name_list(l, rest, "ring VAR...")};
        if (kw == "relation") {
            if (rest.empty())
                fail(l, "expected 'relation POLY'");
            return RelationStep{rest};
        }
        if (kw == "unit") {
            auto [name, poly] = split_once(l, rest, '=');
            if (!is_name(name) || poly.empty())
                fail(l, "expected 'unit NAME = POLY'");
            return UnitStep{name, poly};
        }
        if (kw == "order")
            return OrderStep{name_list(l, rest, "order NAME...")};
        if (kw == "twist-order")
            return TwistOrderStep{name_list(l, rest, "twist-order NAME...")};
        if (kw == "divisor") {
            auto [name, body] = split_once(l, rest, ':');
            auto tw = body.rfind(" twist ");
            if (!is_name(name) || tw == std::string::npos)
                fail(l, "expected 'divisor NAME : POLY twist NAME'");
            std::string twist = trim(std::string_view(body).substr(tw + 7));
            if (!is_name(twist))
                fail(l, "bad twist name");
            return DivisorStep{name, trim(std::string_view(body).substr(0, tw)), twist};
        }
        if (kw == "curve") {
            auto [name, body] = split_once(l, rest, ':');
            auto [gens, params] = split_once(l, body, '|');
            if (!is_name(name))
                fail(l, "expected 'curve NAME : GENS | VAR = VALUE, ...'");
            CurveStep c{name, split_list(gens), {}};
            for (const auto& item : split_list(params)) {
                auto [var, value] = split_once(l, item, '=');
                if (!is_name(var) || value.empty())
                    fail(l, "bad curve value '" + item + "'");
                c.values.emplace_back(var, value);
            }
            return c;
        }
        if (kw == "cert") {
            auto [head, unit] = split_once(l, rest, '=');
            auto [name, claim] = split_once(l, head, ':');
            auto w = words(claim);
            if (!is_name(name) || w.size() != 5 || w[1] != "on" || w[3] != "at" || unit.empty())
                fail(l, "expected 'cert NAME : TARGET on DIVISOR at CURVE = UNIT'");
            auto loc = locals_.find({w[2], w[4]});
            if (loc == locals_.end())
                fail(l, "no 'local " + w[2] + " " + w[4] + "' declaration names the uniformizer");
            return CertStep{name, w[0], w[2], w[4], unit, loc->second};
        }
        if (kw == "local") {
            auto [head, pi] = split_once(l, rest, ':');
            auto w = words(head);
            return LocalStep{w[0], w[1], pi};
        }
        if (kw == "derived") {
            auto [head, body] = split_once(l, rest, ':');
            auto w = words(head);
            auto arrow = body.find("->");
            if (w.size() != 3 || w[1] != "at" || arrow == std::string::npos)
                fail(l, "expected 'derived DIVISOR at CURVE : SYMBOL -> SYMBOL'");
            return DerivedStep{w[0], w[2], trim(std::string_view(body).substr(0, arrow)),
                               trim(std::string_view(body).substr(arrow + 2))};
        }
        if (kw == "residue") {
            auto [name, body] = split_once(l, rest, '=');
            auto w = words(body);
            if (!is_name(name) || w.size() != 3 || w[1] != "at")
                fail(l, "expected 'residue NAME = CHAIN at CURVE'");
            return ResidueStep{name, w[0], w[2]};
        }
        if (kw == "boundary") {
            auto [name, chain] = split_once(l, rest, '=');
            if (!is_name(name) || !is_name(chain))
                fail(l, "expected 'boundary NAME = CHAIN'");
            return BoundaryStep{name, chain};
        }
        if (kw == "combine")
            return combine(l, rest);
        if (kw == "value") {
            auto [name, symbol] = split_once(l, rest, '=');
            if (!is_name(name) || symbol.empty())
                fail(l, "expected 'value NAME = SYMBOL'");
            return ValueStep{name, symbol};
        }
        if (kw == "assert-equal" || kw == "assert-zero" || kw == "assert-nonzero") {
            auto ops = operands(l, rest);
            bool binary = kw == "assert-equal";
            if (ops.size() != (binary ? 2u : 1u))
                fail(l, binary ? "expected two operands" : "expected one operand");
            AssertStep a{binary ? AssertStep::equal : kw == "assert-zero" ? AssertStep::zero : AssertStep::nonzero,
                         ops[0], binary ? ops[1] : Operand{}};
            return a;
        }
        if (kw == "assert-support") {
            auto [name, list] = split_once(l, rest, ':');
            if (!is_name(name))
                fail(l, "expected 'assert-support NAME : CURVE, ...'");
            SupportStep s{name, {}};
            if (!list.empty())
                for (const auto& c : split_list(list)) {
                    if (!is_name(c))
                        fail(l, "bad curve name '" + c + "'");
                    s.curves.push_back(c);
                }
            return s;
        }
        if (kw == "derivation") {
            auto [name, body] = split_once(l, rest, ':');
            if (!is_name(name))
                fail(l, "expected 'derivation NAME : VAR -> POLY, ...'");
            DerivationStep d{name, {}};
            for (const auto& item : split_list(body)) {
                auto arrow = item.find("->");
                std::string var = trim(std::string_view(item).substr(0, arrow == std::string::npos ? 0 : arrow));
                if (arrow == std::string::npos || !is_name(var))
                    fail(l, "bad derivation image '" + item + "'");
                d.images[var] = trim(std::string_view(item).substr(arrow + 2));
            }
            return d;
        }
        if (kw == "assert-tangent")
            return TangentStep{single_name(l, rest, "assert-tangent DERIVATION")};
        if (kw == "assert-flow")
            return FlowStep{single_name(l, rest, "assert-flow DERIVATION")};
        if (kw == "assert-residual") {
            auto w = words(rest);
            if (w.size() < 2 || !is_name(w[0]))
                fail(l, "expected 'assert-residual DERIVATION POLY'");
            return ResidualStep{w[0], trim(std::string_view(rest).substr(w[0].size()))};
        }
        if (kw == "assert-nilpotent") {
            auto w = words(rest);
            if (w.size() != 3 || !is_name(w[0]) || !is_name(w[1]))
                fail(l, "expected 'assert-nilpotent DERIVATION VAR DEGREE'");
            int degree = 0;
            try {
                degree = std::stoi(w[2]);
            } catch (const std::exception&) {
                fail(l, "bad degree '" + w[2] + "'");
            }
            return NilpotentStep{w[0], w[1], degree};
        }
        if (kw == "russell-example") {
            if (!rest.empty())
                fail(l, "russell-example takes no arguments");
            return RussellStep{};
        }
        if (kw == "term" || kw == "end")
            fail(l, "'" + kw + "' outside a chain");
        fail(l, "unknown statement '" + kw + "'");
    }

    const std::vector<Line>& lines_;
    std::map<std::pair<std::string, std::string>, std::string> locals_;
};

const char* const kDeclAnchor = "scenario declaration";
const char* const kResidueAnchor = "residue of a chain along a divisor at a curve";
const char* const kDerivedAnchor = "residue derived from d^2 = 0 (cited, not computed)";
const char* const kAssertAnchor = "scenario assertion";
const char* const kLndAnchor = "locally nilpotent derivation check";

/// Halts the run after a failed assertion.
struct Halt {};

/// Declaration check or residue that could not be carried out.
struct RunError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct Value {
    bool boundary = false;
    mw::TwistedSymbol symbol;
    std::map<std::string, mw::TwistedSymbol> by_curve;
};

class Runner {
public:
    Runner(const ScenarioOptions& options, ScenarioResult& result) : options_(options), result_(result) {}

    void run(const std::vector<Statement>& steps)
    {
        for (const auto& st : steps) {
            current_ = &st;
            try {
                std::visit([this](const auto& s) { exec(s); }, st.step);
            } catch (const Halt&) {
                return;
            } catch (const ScenarioParseError&) {
                throw;
            } catch (const std::exception& e) {
                result_.errored = true;
                result_.error = "line " + std::to_string(st.line) + ": " + e.what();
                return;
            }
        }
    }

private:
    int line() const { return current_->line; }
    [[noreturn]] void parse_fail(const std::string& what) const { throw ScenarioParseError(line(), what); }

    GerstenContext& ctx()
    {
        if (!ctx_) {
            if (!ring_)
                throw RunError("no ring declared");
            ctx_.emplace(HypersurfaceVariety{lnd::AmbientRing{ring_, relation_}});
            if (options_.twist_order)
                ctx_->twist_order = *options_.twist_order;
        }
        return *ctx_;
    }
    lnd::AmbientRing ambient()
    {
        if (!ring_)
            throw RunError("no ring declared");
        return lnd::AmbientRing{ring_, relation_};
    }
    const mw::SymbolContext& sc() { return ctx().symbol_context; }

    Poly poly(const std::string& text, const RingPtr& ring) const
    {
        try {
            return parse_polynomial(text, ring);
        } catch (const std::invalid_argument& e) {
            parse_fail(e.what());
        }
    }
    mw::TwistedSymbol symbol(const std::string& text, int zero_degree = 0) const
    {
        try {
            return mw::parse_symbol(text, zero_degree);
        } catch (const std::invalid_argument& e) {
            parse_fail(e.what());
        }
    }
    mw::MWSymbol scalar(const std::string& text) const
    {
        mw::TwistedSymbol s = symbol(text);
        if (!s.twist.empty() || (!s.symbol.is_zero() && s.symbol.degree != 0))
            parse_fail("coefficient '" + text + "' must be an untwisted degree-0 symbol");
        return s.symbol;
    }
    mw::UnitExpr unit(const std::string& text) const
    {
        mw::TwistedSymbol s = symbol("[" + text + "]");
        if (s.symbol.terms.size() != 1 || s.symbol.terms[0].brackets.size() != 1 || s.symbol.terms[0].eta != 0)
            parse_fail("bad unit expression '" + text + "'");
        return s.symbol.terms[0].brackets[0];
    }

    void pass(std::string residual, const char* anchor)
    {
        result_.report.add(current_->text, true, std::move(residual), anchor);
    }
    void check(bool ok, std::string residual, const char* anchor)
    {
        result_.report.add(current_->text, ok, std::move(residual), anchor);
        if (!ok)
            throw Halt{};
    }
    void declaration(const Report& r, const std::string& what)
    {
        result_.report.append(r);
        if (!r.ok())
            throw RunError(what + " failed its checks");
    }

    mw::TwistedSymbol canonical(mw::TwistedSymbol s)
    {
        s.symbol = mw::normalize(s.symbol, sc());
        if (s.twist.empty())
            return s;
        if (s.symbol.is_zero())
            return {s.symbol, ctx().twist_order};
        return mw::twist_reorder(s, ctx().twist_order, sc());
    }

    std::string print(const mw::TwistedSymbol& s) const
    {
        return s.symbol.is_zero() ? "0" : mw::to_string(s);
    }

    const Value& lookup(const std::string& name) const
    {
        auto it = values_.find(name);
        if (it == values_.end())
            throw RunError("unknown value '" + name + "'");
        return it->second;
    }

    mw::TwistedSymbol operand(const Operand& op)
    {
        switch (op.kind) {
        case Operand::literal:
            return canonical(symbol(op.text));
        case Operand::name: {
            const Value& v = lookup(op.text);
            if (v.boundary)
                throw RunError("'" + op.text + "' is a boundary; name a curve with " + op.text + "@CURVE");
            return v.symbol;
        }
        case Operand::at: {
            const Value& v = lookup(op.text);
            if (!v.boundary)
                throw RunError("'" + op.text + "' is not a boundary");
            auto it = v.by_curve.find(op.curve);
            if (it == v.by_curve.end())
                throw RunError("unknown curve '" + op.curve + "'");
            return it->second;
        }
        }
        throw RunError("bad operand");
    }

    mw::TwistedSymbol difference(const mw::TwistedSymbol& a, const mw::TwistedSymbol& b)
    {
        if (!a.symbol.is_zero() && !b.symbol.is_zero() && a.twist != b.twist)
            throw RunError("operands have different twists");
        mw::TwistedSymbol d = a;
        if (b.symbol.is_zero())
            return canonical(d);
        if (a.symbol.is_zero())
            d = {-b.symbol, b.twist};
        else
            d.symbol = a.symbol - b.symbol;
        return canonical(d);
    }

    mw::TwistedSymbol chain_residue(const ChainStep& chain, const std::string& curve)
    {
        mw::TwistedSymbol total{mw::MWSymbol::zero(0), ctx().twist_order};
        for (const auto& term : chain.terms) {
            mw::TwistedSymbol s = symbol(term.symbol);
            s.symbol = mw::normalize(s.symbol, sc());
            const DivisorDatum& d = ctx().divisor(term.divisor);
            if (s.twist != std::vector<std::string>{d.twist_name})
                throw RunError("term on " + term.divisor + " must carry the twist @[" + d.twist_name + "]");
            mw::TwistedSymbol r = ctx().residue(s, term.divisor, curve);
            if (!term.scale.empty() && !r.symbol.is_zero())
                r.symbol = mw::normalize(r.symbol * scalar(term.scale), sc());
            total = mw::add_twisted(total, r, ctx().twist_order, sc());
        }
        return canonical(total);
    }

    const ChainStep& chain(const std::string& name) const
    {
        auto it = chains_.find(name);
        if (it == chains_.end())
            throw RunError("unknown chain '" + name + "'");
        return it->second;
    }

    void define(const std::string& name, Value v)
    {
        if (values_.count(name) || chains_.count(name))
            throw RunError("'" + name + "' is already defined");
        values_.emplace(name, std::move(v));
    }

    void exec(const RingStep& s)
    {
        if (ring_)
            throw RunError("ring declared twice");
        ring_ = make_ring(s.names);
        pass("0", kDeclAnchor);
    }
    void exec(const RelationStep& s)
    {
        if (!ring_ || ctx_ || relation_)
            throw RunError("relation must follow the ring and precede the other declarations");
        relation_ = poly(s.poly, ring_);
        pass("0", kDeclAnchor);
    }
    void exec(const UnitStep& s)
    {
        ctx().add_unit(s.name, poly(s.poly, ring_));
        pass("0", kDeclAnchor);
    }
    void exec(const OrderStep& s)
    {
        ctx().symbol_context.order = s.names;
        pass("0", kDeclAnchor);
    }
    void exec(const TwistOrderStep& s)
    {
        if (!options_.twist_order)
            ctx().twist_order = s.names;
        pass("0", kDeclAnchor);
    }
    void exec(const DivisorStep& s)
    {
        ctx().add_divisor(make_divisor(ctx().variety(), s.name, poly(s.poly, ring_), s.twist));
        pass("0", kDeclAnchor);
    }
    void exec(const CurveStep& s)
    {
        std::vector<Poly> gens;
        for (const auto& g : s.gens)
            gens.push_back(poly(g, ring_));
        std::map<std::string, Poly> values;
        for (const auto& [var, value] : s.values)
            values.insert_or_assign(var, poly(value, curve_parameter_ring()));
        ctx().add_curve(make_curve(ctx().variety(), s.name, std::move(gens), std::move(values)));
        pass("0", kDeclAnchor);
    }
    void exec(const CertStep& s)
    {
        if (options_.disabled_certificates.count(s.name)) {
            result_.report.note("cert " + s.name, "disabled", kDeclAnchor);
            return;
        }
        mw::UnitExpr u = unit(s.unit);
        int k = u.exponent(s.pi);
        if (k < 1)
            throw RunError("certificate " + s.name + " must contain a positive power of " + s.pi);
        u.factors.erase(s.pi);
        UnitCertificate cert{s.name, s.target, s.divisor, s.curve, s.pi, k, u};
        declaration(ctx().add_certificate(cert), "certificate " + s.name);
    }
    void exec(const LocalStep& s)
    {
        declaration(ctx().add_local(LocalUniformizer{s.divisor, s.curve, s.pi}),
                    "uniformizer " + s.pi + " of " + s.curve + " on " + s.divisor);
    }
    void exec(const DerivedStep& s)
    {
        ctx().divisor(s.divisor);
        ctx().curve(s.curve);
        mw::TwistedSymbol source = symbol(s.source), value = symbol(s.value);
        source.symbol = mw::normalize(source.symbol, sc());
        value.symbol = mw::normalize(value.symbol, sc());
        ctx().add_derived(DerivedResidue{s.divisor, s.curve, source, value});
        result_.report.note(current_->text, print(canonical(value)), kDerivedAnchor);
    }
    void exec(const ChainStep& s)
    {
        if (chains_.count(s.name) || values_.count(s.name))
            throw RunError("'" + s.name + "' is already defined");
        for (const auto& t : s.terms)
            ctx().divisor(t.divisor);
        chains_.emplace(s.name, s);
        pass("0", kDeclAnchor);
    }
    void exec(const ResidueStep& s)
    {
        ctx().curve(s.curve);
        mw::TwistedSymbol r = chain_residue(chain(s.chain), s.curve);
        pass(print(r), kResidueAnchor);
        define(s.name, Value{false, r, {}});
    }
    void exec(const BoundaryStep& s)
    {
        Value v{true, {}, {}};
        std::string summary;
        for (const auto& [name, c] : ctx().curves()) {
            mw::TwistedSymbol r = chain_residue(chain(s.chain), name);
            summary += (summary.empty() ? "" : "; ") + name + ": " + print(r);
            v.by_curve.emplace(name, r);
        }
        pass(summary.empty() ? "0" : summary, kResidueAnchor);
        define(s.name, std::move(v));
    }
    void exec(const CombineStep& s)
    {
        mw::TwistedSymbol total{mw::MWSymbol::zero(0), ctx().twist_order};
        for (const auto& t : s.terms) {
            mw::TwistedSymbol v = operand(t.ref);
            if (v.symbol.is_zero())
                continue;
            if (!t.coef.empty())
                v.symbol = v.symbol * scalar(t.coef);
            if (t.sign < 0)
                v.symbol = -v.symbol;
            total = mw::add_twisted(total, canonical(v), ctx().twist_order, sc());
        }
        total = canonical(total);
        pass(print(total), kResidueAnchor);
        define(s.name, Value{false, total, {}});
    }
    void exec(const ValueStep& s)
    {
        mw::TwistedSymbol v = canonical(symbol(s.symbol));
        pass(print(v), kDeclAnchor);
        define(s.name, Value{false, v, {}});
    }
    void exec(const AssertStep& s)
    {
        mw::TwistedSymbol a = operand(s.a);
        switch (s.kind) {
        case AssertStep::equal: {
            mw::TwistedSymbol d = difference(a, operand(s.b));
            check(d.symbol.is_zero(), print(d), kAssertAnchor);
            return;
        }
        case AssertStep::zero:
            check(a.symbol.is_zero(), print(a), kAssertAnchor);
            return;
        case AssertStep::nonzero:
            check(!a.symbol.is_zero(), print(a), kAssertAnchor);
            return;
        }
    }
    void exec(const SupportStep& s)
    {
        const Value& v = lookup(s.name);
        if (!v.boundary)
            throw RunError("'" + s.name + "' is not a boundary");
        for (const auto& c : s.curves)
            ctx().curve(c);
        std::string outside;
        for (const auto& [name, r] : v.by_curve)
            if (!r.symbol.is_zero() && std::find(s.curves.begin(), s.curves.end(), name) == s.curves.end())
                outside += (outside.empty() ? "" : "; ") + name + ": " + print(r);
        check(outside.empty(), outside.empty() ? "0" : outside, kAssertAnchor);
    }

    const lnd::Derivation& derivation(const std::string& name) const
    {
        auto it = derivations_.find(name);
        if (it == derivations_.end())
            throw RunError("unknown derivation '" + name + "'");
        return it->second;
    }
    void lnd_report(const Report& r)
    {
        result_.report.append(r, current_->text + ": ");
        if (!r.ok())
            throw Halt{};
    }

    void exec(const DerivationStep& s)
    {
        if (!ring_)
            throw RunError("no ring declared");
        for (const auto& [var, image] : s.images)
            poly(image, ring_);
        derivations_.insert_or_assign(s.name, lnd::Derivation::from_strings(ring_, s.images));
        pass("0", kDeclAnchor);
    }
    void exec(const TangentStep& s) { lnd_report(lnd::tangency_check(derivation(s.name), ambient())); }
    void exec(const ResidualStep& s)
    {
        lnd::AmbientRing a = ambient();
        if (!a.relation)
            throw RunError("assert-residual needs a relation");
        Poly residual = a.reduce(lnd::apply(derivation(s.name), *a.relation));
        Poly diff = residual - a.reduce(poly(s.poly, ring_));
        check(diff.is_zero(), diff.is_zero() ? "0" : "residual " + to_string(residual), kLndAnchor);
    }
    void exec(const NilpotentStep& s)
    {
        if (std::find(ring_->names.begin(), ring_->names.end(), s.var) == ring_->names.end())
            parse_fail("unknown variable '" + s.var + "'");
        auto degree = lnd::nilpotency_degree(derivation(s.name), Poly::variable(ring_, s.var), ambient(),
                                             lnd::default_nilpotency_bound());
        check(degree && *degree == s.degree, degree ? std::to_string(*degree) : "not nilpotent within bound",
              kLndAnchor);
    }
    void exec(const FlowStep& s)
    {
        lnd_report(lnd::flow_checks(derivation(s.name), ambient(), lnd::default_nilpotency_bound()));
    }
    void exec(const RussellStep&) { lnd_report(lnd::example_verify()); }

    const ScenarioOptions& options_;
    ScenarioResult& result_;
    const Statement* current_ = nullptr;
    RingPtr ring_;
    std::optional<Poly> relation_;
    std::optional<GerstenContext> ctx_;
    std::map<std::string, ChainStep> chains_;
    std::map<std::string, Value> values_;
    std::map<std::string, lnd::Derivation> derivations_;
};

}  // namespace

mpz_class eval_int_expr(std::string_view text, const std::map<std::string, mpz_class>& env)
{
    return IntExprParser(text, env).parse();
}

ScenarioInfo describe_scenario(std::string_view text)
{
    ScenarioInfo info;
    Env env;
    for (const auto& line : source_lines(text)) {
        auto [kw, rest] = keyword(line.text);
        auto w = words(rest);
        if (kw == "param" && w.size() == 2) {
            try {
                mpz_class v = eval_int_expr(w[1], env);
                env[w[0]] = v;
                info.params.emplace_back(w[0], to_long(v, line.no));
            } catch (const std::invalid_argument& e) {
                throw ScenarioParseError(line.no, e.what());
            }
        } else if (kw == "cert" && !w.empty()) {
            std::string name = w[0];
            if (!name.empty() && name.back() == ':')
                name.pop_back();
            info.certificates.push_back(name);
        }
    }
    return info;
}

ScenarioResult run_scenario(std::string_view text, const ScenarioOptions& options)
{
    ScenarioResult result;
    std::vector<Line> lines = expand(source_lines(text), options, result.params);
    std::vector<Statement> steps = Compiler(lines).compile();
    Runner(options, result).run(steps);
    return result;
}

}  // namespace kras::gersten
