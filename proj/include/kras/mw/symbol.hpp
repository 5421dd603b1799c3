#pragma once

#include <compare>
#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace kras::mw {

/// sign * prod g^e over named free units.
struct UnitExpr {
    int sign = 1;
    std::map<std::string, int> factors;  // zero exponents never stored

    static UnitExpr minus_one() { return UnitExpr{-1, {}}; }
    static UnitExpr generator(const std::string& name, int exponent = 1);

    bool is_one() const { return sign == 1 && factors.empty(); }
    bool is_minus_one() const { return sign == -1 && factors.empty(); }
    int exponent(const std::string& name) const;

    UnitExpr operator*(const UnitExpr& rhs) const;
    UnitExpr inverse() const;
    friend auto operator<=>(const UnitExpr&, const UnitExpr&) = default;
    friend bool operator==(const UnitExpr&, const UnitExpr&) = default;
};

std::string to_string(const UnitExpr& u);

/// Unit modulo squares: a sign and a set of generators with odd exponent.
struct SquareClass {
    bool negative = false;
    std::vector<std::string> gens;  // sorted, unique

    static SquareClass of(const UnitExpr& u);
    SquareClass operator*(const SquareClass& rhs) const;
    bool contains(const std::string& g) const;
    SquareClass without(const std::string& g) const;
    friend auto operator<=>(const SquareClass&, const SquareClass&) = default;
    friend bool operator==(const SquareClass&, const SquareClass&) = default;
};

std::string to_string(const SquareClass& c);

/// Integer combination of classes <a>, multiplied by <a><b> = <ab>.
class GWElem {
public:
    GWElem() = default;
    static GWElem one() { return of(SquareClass{}); }
    static GWElem of(const SquareClass& c, std::int64_t mult = 1);
    static GWElem of(const UnitExpr& u) { return of(SquareClass::of(u)); }
    static GWElem minus_one_class() { return of(SquareClass{true, {}}); }  // <-1>
    static GWElem hyperbolic() { return one() + minus_one_class(); }       // h
    static GWElem epsilon() { return -minus_one_class(); }                 // eps = -<-1>

    const std::map<SquareClass, std::int64_t>& terms() const { return terms_; }
    bool is_zero() const { return terms_.empty(); }
    std::int64_t rank() const;

    GWElem operator-() const;
    GWElem& operator+=(const GWElem& rhs);
    GWElem& operator-=(const GWElem& rhs);
    GWElem operator*(const GWElem& rhs) const;
    GWElem operator*(std::int64_t k) const;
    friend GWElem operator+(GWElem a, const GWElem& b) { return a += b; }
    friend GWElem operator-(GWElem a, const GWElem& b) { return a -= b; }
    friend bool operator==(const GWElem&, const GWElem&) = default;

    void add(const SquareClass& c, std::int64_t mult);

private:
    std::map<SquareClass, std::int64_t> terms_;
};

std::string to_string(const GWElem& g);

/// n_eps = sum_{i=1..n} <(-1)^(i-1)> for n >= 0 and -eps * (-n)_eps for n < 0.
GWElem epsilon_int(long n);

/// eta^k * coeff * [b_1][b_2]...[b_n]; degree n - k.
struct MWTerm {
    int eta = 0;
    GWElem coeff;
    std::vector<UnitExpr> brackets;
};

struct MWSymbol {
    int degree = 0;
    std::vector<MWTerm> terms;

    static MWSymbol zero(int degree) { return MWSymbol{degree, {}}; }
    static MWSymbol gw(const GWElem& g);
    static MWSymbol bracket(const UnitExpr& u);
    static MWSymbol eta();

    bool is_zero() const { return terms.empty(); }

    MWSymbol operator-() const;
    MWSymbol& operator+=(const MWSymbol& rhs);  // throws on degree mismatch
    MWSymbol& operator-=(const MWSymbol& rhs);
    MWSymbol operator*(const MWSymbol& rhs) const;
    MWSymbol operator*(const GWElem& g) const;
    friend MWSymbol operator+(MWSymbol a, const MWSymbol& b) { return a += b; }
    friend MWSymbol operator-(MWSymbol a, const MWSymbol& b) { return a -= b; }
};

/// Declared generator order and literal Steinberg pairs (b = 1 - a).
struct SymbolContext {
    std::vector<std::string> order;
    std::vector<std::pair<std::string, std::string>> complements;

    /// -1 first, then declared generators, then the rest alphabetically.
    bool basic_less(const UnitExpr& a, const UnitExpr& b) const;
    bool are_complements(const std::string& a, const std::string& b) const;
};

/// Whitelisted rewrites used by normalize.
enum class Rule {
    split_product,         // [ab] = [a] + <a>[b]
    power,                 // [a^n] = n_eps [a], [a^-n] = eps n_eps [a]
    bracket_of_one,        // [1] = 0
    eta_absorption,        // eta [a] = <a> - 1
    eta_hyperbolic,        // eta h = 0, so eta <-c> = -eta <c>
    epsilon_commute,       // [a][b] = eps [b][a]
    repeated_bracket,      // [a][a] = [-1][a]
    steinberg,             // [a][1-a] = 0 for declared pairs, and its consequences
    unit_absorption,       // <-a>[a] = [a]
    gw_hyperbolic,         // <-c> = h - <c> for c != 1
    minus_one_hyperbolic,  // <-c>[-1,R] = -<c>[-1,R]
    minus_one_eta_square,  // eta^2 [-1] = -2 eta on [-1] terms
    coefficient_exchange,  // <g>[B] = [B] + (<top> - 1)[B - top + g]
    collect,               // like terms combined, zero terms dropped
};

const char* rule_name(Rule r);
/// Relation each rule instantiates, for audit output.
const char* rule_justification(Rule r);

struct Audit {
    std::vector<Rule> applied;
    std::map<Rule, int> counts() const;
};

MWSymbol normalize(const MWSymbol& s, const SymbolContext& ctx = {}, Audit* audit = nullptr);

enum class Equality { equal, distinct_normal_forms };
/// Syntactic comparison of normal forms; distinct forms are not a proof of
/// inequality. Throws std::invalid_argument on degree mismatch.
Equality eq(const MWSymbol& a, const MWSymbol& b, const SymbolContext& ctx = {});

/// Canonical text in the symbol grammar (docs/grammar.md). Expects a
/// normalized symbol.
std::string to_string(const MWSymbol& s);

struct TwistedSymbol {
    MWSymbol symbol;
    std::vector<std::string> twist;
};

std::string to_string(const TwistedSymbol& s);

/// Residue along the valuation with uniformizer pi; twist_name is appended
/// at the end of the twist word.
TwistedSymbol residue(const TwistedSymbol& s, const std::string& pi, const std::string& twist_name,
                      const SymbolContext& ctx = {});

/// Reorder the twist word to `order`, multiplying by <-1> per transposition.
TwistedSymbol twist_reorder(const TwistedSymbol& s, const std::vector<std::string>& order,
                            const SymbolContext& ctx = {});

/// Replace generators by units (in brackets and in GW classes); the result is
/// not normalized.
MWSymbol substitute_units(const MWSymbol& s, const std::map<std::string, UnitExpr>& images);

/// Sum of twisted symbols after reordering both to `order`.
TwistedSymbol add_twisted(const TwistedSymbol& a, const TwistedSymbol& b, const std::vector<std::string>& order,
                          const SymbolContext& ctx = {});

class SymbolParseError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Parses the symbol grammar. Degree of the empty sum "0" is taken from
/// `zero_degree`.
TwistedSymbol parse_symbol(std::string_view text, int zero_degree = 0);

}  // namespace kras::mw
