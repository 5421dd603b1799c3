#include "kras/mw/symbol.hpp"

#include <algorithm>
#include <optional>
#include <stdexcept>
#include <tuple>

namespace kras::mw {

// ---------------------------------------------------------------- units

UnitExpr UnitExpr::generator(const std::string& name, int exponent)
{
    UnitExpr u;
    if (exponent != 0)
        u.factors.emplace(name, exponent);
    return u;
}

int UnitExpr::exponent(const std::string& name) const
{
    auto it = factors.find(name);
    return it == factors.end() ? 0 : it->second;
}

UnitExpr UnitExpr::operator*(const UnitExpr& rhs) const
{
    UnitExpr out = *this;
    out.sign *= rhs.sign;
    for (const auto& [g, e] : rhs.factors) {
        int& slot = out.factors[g];
        slot += e;
        if (slot == 0)
            out.factors.erase(g);
    }
    return out;
}

UnitExpr UnitExpr::inverse() const
{
    UnitExpr out = *this;
    for (auto& [g, e] : out.factors)
        e = -e;
    return out;
}

std::string to_string(const UnitExpr& u)
{
    if (u.factors.empty())
        return u.sign < 0 ? "-1" : "1";
    std::string out = u.sign < 0 ? "-" : "";
    bool first = true;
    for (const auto& [g, e] : u.factors) {
        if (!first)
            out += "*";
        first = false;
        out += g;
        if (e != 1)
            out += "^" + std::to_string(e);
    }
    return out;
}

SquareClass SquareClass::of(const UnitExpr& u)
{
    SquareClass c;
    c.negative = u.sign < 0;
    for (const auto& [g, e] : u.factors)
        if (e % 2 != 0)
            c.gens.push_back(g);
    return c;  // map order keeps gens sorted
}

SquareClass SquareClass::operator*(const SquareClass& rhs) const
{
    SquareClass out;
    out.negative = negative != rhs.negative;
    std::set_symmetric_difference(gens.begin(), gens.end(), rhs.gens.begin(), rhs.gens.end(),
                                  std::back_inserter(out.gens));
    return out;
}

bool SquareClass::contains(const std::string& g) const
{
    return std::binary_search(gens.begin(), gens.end(), g);
}

SquareClass SquareClass::without(const std::string& g) const
{
    SquareClass out = *this;
    out.gens.erase(std::remove(out.gens.begin(), out.gens.end(), g), out.gens.end());
    return out;
}

std::string to_string(const SquareClass& c)
{
    std::string body;
    for (std::size_t i = 0; i < c.gens.size(); ++i)
        body += (i ? "*" : "") + c.gens[i];
    if (body.empty())
        body = "1";
    return "<" + std::string(c.negative ? "-" : "") + body + ">";
}

// ---------------------------------------------------------------- GW

GWElem GWElem::of(const SquareClass& c, std::int64_t mult)
{
    GWElem g;
    g.add(c, mult);
    return g;
}

void GWElem::add(const SquareClass& c, std::int64_t mult)
{
    if (mult == 0)
        return;
    auto [it, inserted] = terms_.try_emplace(c, mult);
    if (!inserted) {
        it->second += mult;
        if (it->second == 0)
            terms_.erase(it);
    }
}

std::int64_t GWElem::rank() const
{
    std::int64_t r = 0;
    for (const auto& [c, m] : terms_)
        r += m;
    return r;
}

GWElem GWElem::operator-() const
{
    GWElem out = *this;
    for (auto& [c, m] : out.terms_)
        m = -m;
    return out;
}

GWElem& GWElem::operator+=(const GWElem& rhs)
{
    for (const auto& [c, m] : rhs.terms_)
        add(c, m);
    return *this;
}

GWElem& GWElem::operator-=(const GWElem& rhs)
{
    for (const auto& [c, m] : rhs.terms_)
        add(c, -m);
    return *this;
}

GWElem GWElem::operator*(const GWElem& rhs) const
{
    GWElem out;
    for (const auto& [a, ma] : terms_)
        for (const auto& [b, mb] : rhs.terms_)
            out.add(a * b, ma * mb);
    return out;
}

GWElem GWElem::operator*(std::int64_t k) const
{
    GWElem out;
    for (const auto& [c, m] : terms_)
        out.add(c, m * k);
    return out;
}

std::string to_string(const GWElem& g)
{
    if (g.is_zero())
        return "0";
    std::string out;
    bool first = true;
    for (const auto& [c, m] : g.terms()) {
        std::int64_t mag = m < 0 ? -m : m;
        if (first)
            out += m < 0 ? "-" : "";
        else
            out += m < 0 ? " - " : " + ";
        first = false;
        if (mag != 1)
            out += std::to_string(mag) + "*";
        out += to_string(c);
    }
    return out;
}

GWElem epsilon_int(long n)
{
    if (n < 0)
        return GWElem::minus_one_class() * epsilon_int(-n);  // -eps = <-1>
    GWElem out;
    out.add(SquareClass{}, (n + 1) / 2);
    out.add(SquareClass{true, {}}, n / 2);
    return out;
}

// ---------------------------------------------------------------- symbols

MWSymbol MWSymbol::gw(const GWElem& g)
{
    MWSymbol s{0, {}};
    if (!g.is_zero())
        s.terms.push_back({0, g, {}});
    return s;
}

MWSymbol MWSymbol::bracket(const UnitExpr& u) { return MWSymbol{1, {{0, GWElem::one(), {u}}}}; }

MWSymbol MWSymbol::eta() { return MWSymbol{-1, {{1, GWElem::one(), {}}}}; }

MWSymbol MWSymbol::operator-() const
{
    MWSymbol out = *this;
    for (auto& t : out.terms)
        t.coeff = -t.coeff;
    return out;
}

MWSymbol& MWSymbol::operator+=(const MWSymbol& rhs)
{
    if (rhs.is_zero())
        return *this;
    if (is_zero())
        degree = rhs.degree;
    if (degree != rhs.degree)
        throw std::invalid_argument("cannot add symbols of degree " + std::to_string(degree) + " and " +
                                    std::to_string(rhs.degree));
    terms.insert(terms.end(), rhs.terms.begin(), rhs.terms.end());
    return *this;
}

MWSymbol& MWSymbol::operator-=(const MWSymbol& rhs) { return *this += -rhs; }

MWSymbol MWSymbol::operator*(const MWSymbol& rhs) const
{
    MWSymbol out{degree + rhs.degree, {}};
    for (const auto& a : terms)
        for (const auto& b : rhs.terms) {
            MWTerm t{a.eta + b.eta, a.coeff * b.coeff, a.brackets};
            t.brackets.insert(t.brackets.end(), b.brackets.begin(), b.brackets.end());
            if (!t.coeff.is_zero())
                out.terms.push_back(std::move(t));
        }
    return out;
}

MWSymbol MWSymbol::operator*(const GWElem& g) const { return *this * MWSymbol::gw(g); }

// ---------------------------------------------------------------- context

namespace {

bool is_basic(const UnitExpr& u)
{
    if (u.is_minus_one())
        return true;
    return u.sign == 1 && u.factors.size() == 1 && u.factors.begin()->second == 1;
}

const std::string& basic_name(const UnitExpr& u)
{
    static const std::string minus = "-1";
    return u.is_minus_one() ? minus : u.factors.begin()->first;
}

}  // namespace

bool SymbolContext::basic_less(const UnitExpr& a, const UnitExpr& b) const
{
    auto rank = [&](const UnitExpr& u) {
        if (u.is_minus_one())
            return std::make_tuple(0, std::size_t{0}, std::string());
        const std::string& n = basic_name(u);
        auto it = std::find(order.begin(), order.end(), n);
        if (it != order.end())
            return std::make_tuple(1, static_cast<std::size_t>(it - order.begin()), std::string());
        return std::make_tuple(2, std::size_t{0}, n);
    };
    return rank(a) < rank(b);
}

bool SymbolContext::are_complements(const std::string& a, const std::string& b) const
{
    for (const auto& [p, q] : complements)
        if ((p == a && q == b) || (p == b && q == a))
            return true;
    return false;
}

const char* rule_name(Rule r)
{
    switch (r) {
    case Rule::split_product:
        return "split-product";
    case Rule::power:
        return "power";
    case Rule::bracket_of_one:
        return "bracket-of-one";
    case Rule::eta_absorption:
        return "eta-absorption";
    case Rule::eta_hyperbolic:
        return "eta-hyperbolic";
    case Rule::epsilon_commute:
        return "epsilon-commute";
    case Rule::repeated_bracket:
        return "repeated-bracket";
    case Rule::steinberg:
        return "steinberg";
    case Rule::unit_absorption:
        return "unit-absorption";
    case Rule::gw_hyperbolic:
        return "gw-hyperbolic";
    case Rule::minus_one_hyperbolic:
        return "minus-one-hyperbolic";
    case Rule::minus_one_eta_square:
        return "minus-one-eta-square";
    case Rule::coefficient_exchange:
        return "coefficient-exchange";
    case Rule::collect:
        return "collect";
    }
    return "?";
}

const char* rule_justification(Rule r)
{
    switch (r) {
    case Rule::split_product:
        return "[ab] = [a] + <a>[b] (defining relation)";
    case Rule::power:
        return "[a^n] = n_eps[a]; [a^-1] = -<a>[a] = eps[a]";
    case Rule::bracket_of_one:
        return "[1] = 0 (from [1*1] = [1] + <1>[1])";
    case Rule::eta_absorption:
        return "<a> = 1 + eta[a]; eta is central";
    case Rule::eta_hyperbolic:
        return "eta*h = 0 (defining relation)";
    case Rule::epsilon_commute:
        return "[a][b] = eps[b][a]";
    case Rule::repeated_bracket:
        return "[a][a] = [a][-1] = [-1][a]";
    case Rule::steinberg:
        return "[a][1-a] = 0 for literal pairs; hence eta[a][b] = 0 and <ab> = <a> + <b> - 1";
    case Rule::unit_absorption:
        return "<-a>[a] = [a] (from [a][-a] = 0)";
    case Rule::gw_hyperbolic:
        return "<a> + <-a> = <a>h = h (from eta*h = 0)";
    case Rule::minus_one_hyperbolic:
        return "h[-1] = [-1] + <-1>[-1] = [1] = 0";
    case Rule::minus_one_eta_square:
        return "eta^2[-1] = -2 eta (from eta*h = 0)";
    case Rule::coefficient_exchange:
        return "<g>[B] = [B] + eta[g][B], and eta[S] is symmetric in S since eta*eps = eta";
    case Rule::collect:
        return "additive group law";
    }
    return "?";
}

std::map<Rule, int> Audit::counts() const
{
    std::map<Rule, int> out;
    for (Rule r : applied)
        ++out[r];
    return out;
}

// ---------------------------------------------------------------- normalize

namespace {

struct BasicTerm {
    int eta = 0;
    GWElem coeff;
    std::vector<UnitExpr> brackets;  // basic units
};

class Normalizer {
public:
    Normalizer(const SymbolContext& ctx, Audit* audit) : ctx_(ctx), audit_(audit) {}

    MWSymbol run(const MWSymbol& s)
    {
        std::vector<BasicTerm> basic;
        for (const auto& t : s.terms) {
            if (static_cast<int>(t.brackets.size()) - t.eta != s.degree)
                throw std::invalid_argument("symbol term degree does not match the symbol degree");
            if (t.eta < 0)
                throw std::invalid_argument("negative eta power");
            for (auto& b : expand_term(t))
                finish(std::move(b), basic);
        }
        drain(basic);
        return collect(basic, s.degree);
    }

private:
    void log(Rule r)
    {
        if (audit_)
            audit_->applied.push_back(r);
    }

    /// [u] as a sum of coeff * [basic].
    std::vector<std::pair<GWElem, UnitExpr>> expand_unit(const UnitExpr& u)
    {
        if (u.is_one()) {
            log(Rule::bracket_of_one);
            return {};
        }
        std::vector<UnitExpr> factors;
        if (u.sign < 0)
            factors.push_back(UnitExpr::minus_one());
        std::vector<std::pair<std::string, int>> gens(u.factors.begin(), u.factors.end());
        std::sort(gens.begin(), gens.end(), [&](const auto& a, const auto& b) {
            return ctx_.basic_less(UnitExpr::generator(a.first), UnitExpr::generator(b.first));
        });
        for (const auto& [g, e] : gens)
            factors.push_back(UnitExpr::generator(g, e));

        std::vector<std::pair<GWElem, UnitExpr>> out;
        GWElem prefix = GWElem::one();  // <a_1 ... a_{i-1}>
        for (std::size_t i = 0; i < factors.size(); ++i) {
            if (i > 0)
                log(Rule::split_product);
            for (auto& [c, b] : expand_factor(factors[i]))
                out.emplace_back(prefix * c, b);
            prefix = prefix * GWElem::of(factors[i]);
        }
        return out;
    }

    std::vector<std::pair<GWElem, UnitExpr>> expand_factor(const UnitExpr& f)
    {
        if (f.is_minus_one())
            return {{GWElem::one(), f}};
        const auto& [g, e] = *f.factors.begin();
        UnitExpr base = UnitExpr::generator(g);
        if (e == 1)
            return {{GWElem::one(), base}};
        log(Rule::power);
        if (e > 0)
            return {{epsilon_int(e), base}};
        return {{GWElem::epsilon() * epsilon_int(-e), base}};
    }

    std::vector<BasicTerm> expand_term(const MWTerm& t)
    {
        std::vector<BasicTerm> acc{{t.eta, t.coeff, {}}};
        for (const auto& u : t.brackets) {
            std::vector<BasicTerm> next;
            auto parts = is_basic(u) ? std::vector<std::pair<GWElem, UnitExpr>>{{GWElem::one(), u}} : expand_unit(u);
            for (const auto& a : acc)
                for (const auto& [c, b] : parts) {
                    BasicTerm n{a.eta, a.coeff * c, a.brackets};
                    n.brackets.push_back(b);
                    if (!n.coeff.is_zero())
                        next.push_back(std::move(n));
                }
            acc = std::move(next);
        }
        return acc;
    }

    void finish(BasicTerm t, std::vector<BasicTerm>& out)
    {
        while (t.eta > 0 && !t.brackets.empty()) {
            log(Rule::eta_absorption);
            t.coeff = t.coeff * (GWElem::of(t.brackets.front()) - GWElem::one());
            t.brackets.erase(t.brackets.begin());
            --t.eta;
        }
        if (t.coeff.is_zero())
            return;
        if (t.eta > 0) {
            GWElem folded;
            const GWElem split = split_complements(t.coeff);
            for (const auto& [c, m] : split.terms()) {
                if (c.negative) {
                    log(Rule::eta_hyperbolic);
                    folded.add(SquareClass{false, c.gens}, -m);
                } else {
                    folded.add(c, m);
                }
            }
            t.coeff = folded;
            if (!t.coeff.is_zero())
                out.push_back(std::move(t));
            return;
        }
        add_pending(std::move(t));
    }

    void add_pending(BasicTerm t)
    {
        if (!sort_brackets(t))
            return;
        GWElem& slot = pending_[t.brackets];
        slot += t.coeff;
    }

    /// Rewrite pending bracket terms in passes; like terms merge between
    /// passes so cancellations happen before they multiply.
    void drain(std::vector<BasicTerm>& out)
    {
        while (!pending_.empty()) {
            auto current = std::move(pending_);
            pending_.clear();
            std::vector<BasicTerm> work;
            for (const auto& [brackets, coeff] : current)
                for (const auto& [c, m] : coeff.terms())
                    reduce_class(BasicTerm{0, GWElem::of(c, m), brackets}, work, out);
            for (auto& w : work)
                add_pending(std::move(w));
        }
    }

    /// First complement pair {a, b} inside the class, if any.
    std::optional<std::pair<std::string, std::string>> complement_pair(const SquareClass& c) const
    {
        for (std::size_t i = 0; i < c.gens.size(); ++i)
            for (std::size_t j = i + 1; j < c.gens.size(); ++j)
                if (ctx_.are_complements(c.gens[i], c.gens[j]))
                    return std::make_pair(c.gens[i], c.gens[j]);
        return std::nullopt;
    }

    /// <a b c> = <a c> + <b c> - <c> for a + b = 1.
    GWElem split_complements(const GWElem& g)
    {
        GWElem out;
        std::vector<std::pair<SquareClass, std::int64_t>> work(g.terms().begin(), g.terms().end());
        while (!work.empty()) {
            auto [c, m] = work.back();
            work.pop_back();
            auto pair = complement_pair(c);
            if (!pair) {
                out.add(c, m);
                continue;
            }
            log(Rule::steinberg);
            SquareClass rest = c.without(pair->first).without(pair->second);
            SquareClass ra = rest * SquareClass{false, {pair->first}};
            SquareClass rb = rest * SquareClass{false, {pair->second}};
            work.emplace_back(ra, m);
            work.emplace_back(rb, m);
            work.emplace_back(rest, -m);
        }
        return out;
    }

    /// Single-class term on sorted brackets. The class ends up free of
    /// bracket units, complements of bracket units and units sorting below
    /// the last bracket; eta[S] is symmetric in S, which drives the exchange.
    void reduce_class(BasicTerm t, std::vector<BasicTerm>& work, std::vector<BasicTerm>& out)
    {
        SquareClass cls = t.coeff.terms().begin()->first;
        std::int64_t mult = t.coeff.terms().begin()->second;
        auto emit_work = [&](const SquareClass& c, std::int64_t m, std::vector<UnitExpr> brackets) {
            work.push_back(BasicTerm{0, GWElem::of(c, m), std::move(brackets)});
        };

        if (auto pair = complement_pair(cls)) {
            const GWElem split = split_complements(GWElem::of(cls, mult));
            for (const auto& [c, m] : split.terms())
                emit_work(c, m, t.brackets);
            return;
        }
        if (t.brackets.empty()) {
            if (cls.negative && !cls.gens.empty()) {
                // <-c> = h - <c>
                log(Rule::gw_hyperbolic);
                out.push_back(BasicTerm{0, GWElem::hyperbolic() * mult, {}});
                cls.negative = false;
                mult = -mult;
            }
            out.push_back(BasicTerm{0, GWElem::of(cls, mult), {}});
            return;
        }

        int minus_ones = 0;
        for (const auto& b : t.brackets) {
            if (b.is_minus_one()) {
                ++minus_ones;
                continue;
            }
            const std::string& g = basic_name(b);
            if (cls.contains(g)) {
                log(Rule::unit_absorption);
                cls = cls.without(g);
                cls.negative = !cls.negative;
            }
        }
        for (const auto& b : t.brackets) {
            if (b.is_minus_one())
                continue;
            for (const auto& g : std::vector<std::string>(cls.gens))
                if (ctx_.are_complements(g, basic_name(b))) {
                    // eta[g][b] = 0
                    log(Rule::steinberg);
                    cls = cls.without(g);
                }
        }
        if (minus_ones > 0 && cls.negative) {
            log(Rule::minus_one_hyperbolic);
            cls.negative = false;
            mult = -mult;
        }
        if (minus_ones >= 2 && !cls.gens.empty()) {
            // (<g> - 1)[-1, -1, R] = eta[-1][-1][g][R] = -2[-1, g, R]
            log(Rule::minus_one_eta_square);
            const std::string g = cls.gens.front();
            SquareClass rest = cls.without(g);
            emit_work(rest, mult, t.brackets);
            std::vector<UnitExpr> moved = t.brackets;
            moved[1] = UnitExpr::generator(g);
            emit_work(rest, -2 * mult, std::move(moved));
            return;
        }
        if (minus_ones == 1 && cls.gens.size() >= 2) {
            // (<a> - 1)(<b> - 1)[-1, R] = eta^2 [-1][a][b][R] = -2 (<a> - 1)[b, R]
            log(Rule::minus_one_eta_square);
            const std::string a = cls.gens[0], b = cls.gens[1];
            SquareClass rest = cls.without(a).without(b);
            emit_work(rest * SquareClass{false, {a}}, mult, t.brackets);
            emit_work(rest * SquareClass{false, {b}}, mult, t.brackets);
            emit_work(rest, -mult, t.brackets);
            std::vector<UnitExpr> moved = t.brackets;
            moved.front() = UnitExpr::generator(b);
            work.push_back(BasicTerm{
                0, GWElem::of(rest, -2 * mult) * (GWElem::of(SquareClass{false, {a}}) - GWElem::one()), moved});
            return;
        }

        const UnitExpr& top = t.brackets.back();
        std::optional<UnitExpr> low;
        if (cls.negative)
            low = UnitExpr::minus_one();
        else
            for (const auto& g : cls.gens) {
                UnitExpr u = UnitExpr::generator(g);
                if (ctx_.basic_less(u, top) && (!low || ctx_.basic_less(u, *low)))
                    low = u;
            }
        if (!low) {
            out.push_back(BasicTerm{0, GWElem::of(cls, mult), std::move(t.brackets)});
            return;
        }
        // <g c>[B] = <c>[B] + <c> eta[g][B] = <c>[B] + <c>(<top> - 1)[B - top + g]
        log(Rule::coefficient_exchange);
        SquareClass rest = cls * SquareClass::of(*low);
        emit_work(rest, mult, t.brackets);
        std::vector<UnitExpr> moved = t.brackets;
        moved.back() = *low;
        work.push_back(BasicTerm{0, GWElem::of(rest, mult) * (GWElem::of(top) - GWElem::one()), std::move(moved)});
    }

    /// Sort by the context order; false when the term vanishes.
    bool sort_brackets(BasicTerm& t)
    {
        auto& b = t.brackets;
        for (bool changed = true; changed;) {
            changed = false;
            for (std::size_t i = 0; i + 1 < b.size(); ++i) {
                if (ctx_.basic_less(b[i + 1], b[i])) {
                    log(Rule::epsilon_commute);
                    std::swap(b[i], b[i + 1]);
                    t.coeff = t.coeff * GWElem::epsilon();
                    changed = true;
                }
            }
            if (changed)
                continue;
            for (std::size_t i = 0; i + 1 < b.size(); ++i) {
                if (b[i] == b[i + 1] && !b[i].is_minus_one()) {
                    log(Rule::repeated_bracket);
                    b[i] = UnitExpr::minus_one();
                    changed = true;
                    break;
                }
            }
        }
        for (std::size_t i = 0; i < b.size(); ++i)
            for (std::size_t j = i + 1; j < b.size(); ++j)
                if (!b[i].is_minus_one() && !b[j].is_minus_one() &&
                    ctx_.are_complements(basic_name(b[i]), basic_name(b[j]))) {
                    log(Rule::steinberg);
                    return false;
                }
        return true;
    }

    MWSymbol collect(const std::vector<BasicTerm>& basic, int degree)
    {
        auto key_less = [&](const BasicTerm& a, const BasicTerm& b) {
            if (a.eta != b.eta)
                return a.eta < b.eta;
            if (a.brackets.size() != b.brackets.size())
                return a.brackets.size() < b.brackets.size();
            for (std::size_t i = 0; i < a.brackets.size(); ++i) {
                if (ctx_.basic_less(a.brackets[i], b.brackets[i]))
                    return true;
                if (ctx_.basic_less(b.brackets[i], a.brackets[i]))
                    return false;
            }
            return false;
        };
        std::vector<BasicTerm> sorted = basic;
        std::stable_sort(sorted.begin(), sorted.end(), key_less);
        MWSymbol out{degree, {}};
        for (std::size_t i = 0; i < sorted.size();) {
            std::size_t j = i;
            GWElem sum;
            while (j < sorted.size() && !key_less(sorted[i], sorted[j]) && !key_less(sorted[j], sorted[i]))
                sum += sorted[j++].coeff;
            if (j - i > 1)
                log(Rule::collect);
            if (!sum.is_zero())
                out.terms.push_back({sorted[i].eta, sum, sorted[i].brackets});
            i = j;
        }
        return out;
    }

    const SymbolContext& ctx_;
    Audit* audit_;
    std::map<std::vector<UnitExpr>, GWElem> pending_;
};

bool same_terms(const MWSymbol& a, const MWSymbol& b)
{
    if (a.terms.size() != b.terms.size())
        return false;
    for (std::size_t i = 0; i < a.terms.size(); ++i) {
        const auto& x = a.terms[i];
        const auto& y = b.terms[i];
        if (x.eta != y.eta || !(x.coeff == y.coeff) || x.brackets != y.brackets)
            return false;
    }
    return true;
}

}  // namespace

MWSymbol normalize(const MWSymbol& s, const SymbolContext& ctx, Audit* audit)
{
    return Normalizer(ctx, audit).run(s);
}

Equality eq(const MWSymbol& a, const MWSymbol& b, const SymbolContext& ctx)
{
    if (a.degree != b.degree && !a.is_zero() && !b.is_zero())
        throw std::invalid_argument("eq: degree mismatch");
    return same_terms(normalize(a, ctx), normalize(b, ctx)) ? Equality::equal : Equality::distinct_normal_forms;
}

std::string to_string(const MWSymbol& s)
{
    if (s.is_zero())
        return "0";
    std::string out;
    bool first = true;
    for (const auto& t : s.terms) {
        for (const auto& [cls, m] : t.coeff.terms()) {
            std::vector<std::string> pieces;
            std::int64_t mag = m < 0 ? -m : m;
            if (mag != 1)
                pieces.push_back(std::to_string(mag));
            if (t.eta == 1)
                pieces.push_back("e");
            else if (t.eta > 1)
                pieces.push_back("e^" + std::to_string(t.eta));
            bool trivial = !cls.negative && cls.gens.empty();
            if (!trivial || (t.eta == 0 && t.brackets.empty()))
                pieces.push_back(to_string(cls));
            if (!t.brackets.empty()) {
                std::string br = "[";
                for (std::size_t i = 0; i < t.brackets.size(); ++i)
                    br += (i ? "," : "") + to_string(t.brackets[i]);
                pieces.push_back(br + "]");
            }
            if (first)
                out += m < 0 ? "-" : "";
            else
                out += m < 0 ? " - " : " + ";
            first = false;
            for (std::size_t i = 0; i < pieces.size(); ++i)
                out += (i ? "*" : "") + pieces[i];
        }
    }
    return out;
}

std::string to_string(const TwistedSymbol& s)
{
    std::string out = to_string(s.symbol);
    if (!s.twist.empty()) {
        if (s.symbol.terms.size() > 1 || (!s.symbol.terms.empty() && s.symbol.terms[0].coeff.terms().size() > 1))
            out = "(" + out + ")";
        out += " @[";
        for (std::size_t i = 0; i < s.twist.size(); ++i)
            out += (i ? "," : "") + s.twist[i];
        out += "]";
    }
    return out;
}

// ---------------------------------------------------------------- residue

TwistedSymbol residue(const TwistedSymbol& s, const std::string& pi, const std::string& twist_name,
                      const SymbolContext& ctx)
{
    if (pi.empty() || pi == "-1")
        throw std::invalid_argument("residue needs a generator as uniformizer");
    if (std::find(s.twist.begin(), s.twist.end(), twist_name) != s.twist.end())
        throw std::invalid_argument("twist '" + twist_name + "' already present");
    MWSymbol n = normalize(s.symbol, ctx);
    MWSymbol out{n.degree - 1, {}};
    const UnitExpr upi = UnitExpr::generator(pi);
    for (const auto& t : n.terms) {
        auto pos = std::find(t.brackets.begin(), t.brackets.end(), upi);
        for (const auto& [cls, m] : t.coeff.terms()) {
            if (pos != t.brackets.end()) {
                // bring pi to the front, then d([pi, rest]) = [rest]
                GWElem c = GWElem::of(cls, m);
                for (auto it = t.brackets.begin(); it != pos; ++it)
                    c = c * GWElem::epsilon();
                MWTerm r{t.eta, c, {}};
                for (auto it = t.brackets.begin(); it != t.brackets.end(); ++it)
                    if (it != pos)
                        r.brackets.push_back(*it);
                out.terms.push_back(std::move(r));
            } else if (cls.contains(pi)) {
                // <pi c> = <c> + <c> eta [pi]
                out.terms.push_back({t.eta + 1, GWElem::of(cls.without(pi), m), t.brackets});
            }
        }
    }
    TwistedSymbol result{normalize(out, ctx), s.twist};
    result.twist.push_back(twist_name);
    return result;
}

TwistedSymbol twist_reorder(const TwistedSymbol& s, const std::vector<std::string>& order, const SymbolContext& ctx)
{
    std::vector<std::string> a = s.twist, b = order;
    std::sort(a.begin(), a.end());
    std::sort(b.begin(), b.end());
    if (a != b || std::adjacent_find(b.begin(), b.end()) != b.end())
        throw std::invalid_argument("twist order is not a permutation of the twist word");
    std::vector<std::size_t> perm;
    for (const auto& name : s.twist)
        perm.push_back(static_cast<std::size_t>(std::find(order.begin(), order.end(), name) - order.begin()));
    std::size_t inversions = 0;
    for (std::size_t i = 0; i < perm.size(); ++i)
        for (std::size_t j = i + 1; j < perm.size(); ++j)
            inversions += perm[i] > perm[j];
    TwistedSymbol out{s.symbol, order};
    if (inversions % 2 == 1)
        out.symbol = s.symbol * GWElem::minus_one_class();
    out.symbol = normalize(out.symbol, ctx);
    return out;
}

MWSymbol substitute_units(const MWSymbol& s, const std::map<std::string, UnitExpr>& images)
{
    auto image_of = [&](const UnitExpr& u) {
        UnitExpr out;
        out.sign = u.sign;
        for (const auto& [g, e] : u.factors) {
            auto it = images.find(g);
            UnitExpr base = it == images.end() ? UnitExpr::generator(g) : it->second;
            UnitExpr power;
            for (int i = 0; i < (e < 0 ? -e : e); ++i)
                power = power * base;
            out = out * (e < 0 ? power.inverse() : power);
        }
        return out;
    };
    MWSymbol out{s.degree, {}};
    for (const auto& t : s.terms) {
        MWTerm n{t.eta, {}, {}};
        for (const auto& [cls, m] : t.coeff.terms()) {
            UnitExpr rep;
            if (cls.negative)
                rep = UnitExpr::minus_one();
            for (const auto& g : cls.gens)
                rep = rep * UnitExpr::generator(g);
            n.coeff.add(SquareClass::of(image_of(rep)), m);
        }
        for (const auto& b : t.brackets)
            n.brackets.push_back(image_of(b));
        if (!n.coeff.is_zero())
            out.terms.push_back(std::move(n));
    }
    return out;
}

TwistedSymbol add_twisted(const TwistedSymbol& a, const TwistedSymbol& b, const std::vector<std::string>& order,
                          const SymbolContext& ctx)
{
    auto aligned = [&](const TwistedSymbol& x) {
        if (x.symbol.is_zero())
            return TwistedSymbol{x.symbol, order};
        return twist_reorder(x, order, ctx);
    };
    TwistedSymbol ra = aligned(a), rb = aligned(b);
    return TwistedSymbol{normalize(ra.symbol + rb.symbol, ctx), order};
}

}  // namespace kras::mw
