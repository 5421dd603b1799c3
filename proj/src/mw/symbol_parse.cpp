#include "kras/mw/symbol.hpp"

#include <cctype>

namespace kras::mw {

namespace {

class Parser {
public:
    Parser(std::string_view text, int zero_degree) : text_(text), zero_degree_(zero_degree) {}

    TwistedSymbol parse()
    {
        TwistedSymbol out{sum(), {}};
        skip();
        if (accept('@')) {
            expect('[');
            if (!accept(']')) {
                do {
                    out.twist.push_back(identifier());
                } while (accept(','));
                expect(']');
            }
        }
        skip();
        if (pos_ != text_.size())
            fail("unexpected '" + std::string(1, text_[pos_]) + "'");
        if (out.symbol.is_zero())
            out.symbol.degree = zero_degree_;
        return out;
    }

private:
    [[noreturn]] void fail(const std::string& msg) const
    {
        throw SymbolParseError("symbol parse error at offset " + std::to_string(pos_) + ": " + msg);
    }

    void skip()
    {
        while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_])))
            ++pos_;
    }

    char peek()
    {
        skip();
        return pos_ < text_.size() ? text_[pos_] : '\0';
    }

    bool accept(char c)
    {
        if (peek() != c)
            return false;
        ++pos_;
        return true;
    }

    void expect(char c)
    {
        if (!accept(c))
            fail(std::string("expected '") + c + "'");
    }

    bool accept_word(std::string_view w)
    {
        skip();
        if (text_.substr(pos_, w.size()) != w)
            return false;
        std::size_t end = pos_ + w.size();
        if (end < text_.size() && (std::isalnum(static_cast<unsigned char>(text_[end])) || text_[end] == '_'))
            return false;
        pos_ = end;
        return true;
    }

    long integer()
    {
        skip();
        std::size_t start = pos_;
        while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_])))
            ++pos_;
        if (start == pos_)
            fail("expected integer");
        if (pos_ - start > 9)
            fail("integer too large");
        return std::stol(std::string(text_.substr(start, pos_ - start)));
    }

    std::string identifier()
    {
        skip();
        std::size_t start = pos_;
        if (pos_ < text_.size() && (std::isalpha(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_'))
            ++pos_;
        else
            fail("expected identifier");
        while (pos_ < text_.size() && (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_'))
            ++pos_;
        return std::string(text_.substr(start, pos_ - start));
    }

    MWSymbol sum()
    {
        MWSymbol out = MWSymbol::zero(zero_degree_);
        bool negate = false;
        if (accept('-'))
            negate = true;
        else
            accept('+');
        for (;;) {
            MWSymbol p = product();
            out += negate ? -p : p;
            if (accept('+'))
                negate = false;
            else if (accept('-'))
                negate = true;
            else
                return out;
        }
    }

    bool starts_factor()
    {
        char c = peek();
        return c == '<' || c == '[' || c == '(' || std::isdigit(static_cast<unsigned char>(c)) || c == 'e' ||
               c == 'h';
    }

    MWSymbol product()
    {
        MWSymbol out = factor();
        for (;;) {
            if (accept('*'))
                out = out * factor();
            else if (starts_factor())
                out = out * factor();
            else
                return out;
        }
    }

    MWSymbol factor()
    {
        MWSymbol base = primary();
        if (!accept('^'))
            return base;
        long e = integer();
        MWSymbol out = MWSymbol::gw(GWElem::one());
        for (long i = 0; i < e; ++i)
            out = out * base;
        return out;
    }

    MWSymbol primary()
    {
        char c = peek();
        if (std::isdigit(static_cast<unsigned char>(c))) {
            long n = integer();
            if (accept_word("_eps"))
                return MWSymbol::gw(epsilon_int(n));
            return MWSymbol::gw(GWElem::one() * n);
        }
        if (c == '(') {
            std::size_t save = pos_;
            ++pos_;
            if (accept('-') && std::isdigit(static_cast<unsigned char>(peek()))) {
                long n = integer();
                if (accept(')') && accept_word("_eps"))
                    return MWSymbol::gw(epsilon_int(-n));
            }
            pos_ = save + 1;
            MWSymbol inner = sum();
            expect(')');
            return inner;
        }
        if (accept('<')) {
            UnitExpr u = unit();
            expect('>');
            return MWSymbol::gw(GWElem::of(u));
        }
        if (accept('[')) {
            MWSymbol out = MWSymbol::gw(GWElem::one());
            do {
                out = out * MWSymbol::bracket(unit());
            } while (accept(','));
            expect(']');
            return out;
        }
        if (accept_word("eps"))
            return MWSymbol::gw(GWElem::epsilon());
        if (accept_word("e"))
            return MWSymbol::eta();
        if (accept_word("h"))
            return MWSymbol::gw(GWElem::hyperbolic());
        if (c == '\0')
            fail("unexpected end of input");
        fail("unexpected '" + std::string(1, c) + "'");
    }

    UnitExpr unit()
    {
        UnitExpr u;
        if (accept('-'))
            u.sign = -1;
        do {
            if (std::isdigit(static_cast<unsigned char>(peek()))) {
                if (integer() != 1)
                    fail("only the constant units 1 and -1 are supported");
                continue;
            }
            std::string g = identifier();
            int e = 1;
            if (accept('^')) {
                bool neg = accept('-');
                e = static_cast<int>(integer());
                if (neg)
                    e = -e;
            }
            u = u * UnitExpr::generator(g, e);
        } while (accept('*'));
        return u;
    }

    std::string_view text_;
    int zero_degree_;
    std::size_t pos_ = 0;
};

}  // namespace

TwistedSymbol parse_symbol(std::string_view text, int zero_degree)
{
    return Parser(text, zero_degree).parse();
}

}  // namespace kras::mw
