#include "kras/algebra/polynomial.hpp"

#include <cctype>
#include <functional>

namespace kras {
namespace {

template <class K>
class PolyParser {
public:
    using Ident = std::function<std::optional<Polynomial<K>>(std::string_view)>;

    PolyParser(std::string_view text, RingPtr ring, Ident ident)
        : text_(text), ring_(std::move(ring)), ident_(std::move(ident))
    {
    }

    Polynomial<K> run()
    {
        Polynomial<K> p = expr();
        skip_ws();
        if (pos_ != text_.size())
            fail("unexpected '" + std::string(1, text_[pos_]) + "'");
        return p;
    }

private:
    [[noreturn]] void fail(const std::string& what) const
    {
        throw ParseError("polynomial parse error at column " + std::to_string(pos_ + 1) + ": " + what);
    }

    void skip_ws()
    {
        while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_])))
            ++pos_;
    }

    char peek()
    {
        skip_ws();
        return pos_ < text_.size() ? text_[pos_] : '\0';
    }

    bool accept(char c)
    {
        if (peek() == c) {
            ++pos_;
            return true;
        }
        return false;
    }

    Polynomial<K> expr()
    {
        Polynomial<K> acc(ring_);
        bool negate = false;
        if (accept('-'))
            negate = true;
        else
            accept('+');
        Polynomial<K> t = term();
        acc = negate ? -t : t;
        for (;;) {
            if (accept('+'))
                acc += term();
            else if (accept('-'))
                acc -= term();
            else
                return acc;
        }
    }

    static bool starts_factor(char c)
    {
        return std::isdigit(static_cast<unsigned char>(c)) || std::isalpha(static_cast<unsigned char>(c)) ||
               c == '_' || c == '(';
    }

    Polynomial<K> term()
    {
        Polynomial<K> acc = factor();
        for (;;) {
            if (accept('*'))
                acc *= factor();
            else if (starts_factor(peek()))
                acc *= factor();
            else
                return acc;
        }
    }

    Integer integer()
    {
        skip_ws();
        std::size_t start = pos_;
        while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_])))
            ++pos_;
        if (start == pos_)
            fail("expected integer");
        return Integer(std::string(text_.substr(start, pos_ - start)));
    }

    Polynomial<K> factor()
    {
        Polynomial<K> base = primary();
        if (!accept('^'))
            return base;
        bool negative = accept('-');
        Integer e = integer();
        if (!e.fits_slong_p())
            fail("exponent too large");
        long ev = e.get_si();
        try {
            return base.pow(negative ? -ev : ev);
        } catch (const std::domain_error& err) {
            fail(err.what());
        }
    }

    Polynomial<K> primary()
    {
        char c = peek();
        if (c == '(') {
            ++pos_;
            Polynomial<K> inner = expr();
            if (!accept(')'))
                fail("expected ')'");
            return inner;
        }
        if (std::isdigit(static_cast<unsigned char>(c))) {
            Integer num = integer();
            Rational value(num);
            if (accept('/')) {
                Integer den = integer();
                if (den == 0)
                    fail("zero denominator");
                value = make_rational(num, den);
            }
            return Polynomial<K>::constant(ring_, K(value));
        }
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
            std::size_t start = pos_;
            while (pos_ < text_.size() &&
                   (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_'))
                ++pos_;
            std::string_view name = text_.substr(start, pos_ - start);
            if (ident_)
                if (auto special = ident_(name))
                    return *special;
            if (!ring_->index_of(name)) {
                pos_ = start;
                fail("unknown variable '" + std::string(name) + "'");
            }
            return Polynomial<K>::variable(ring_, name);
        }
        fail(c == '\0' ? "unexpected end of input" : "unexpected '" + std::string(1, c) + "'");
    }

    std::string_view text_;
    std::size_t pos_ = 0;
    RingPtr ring_;
    Ident ident_;
};

}  // namespace

Poly parse_polynomial(std::string_view text, const RingPtr& ring)
{
    return PolyParser<Rational>(text, ring, nullptr).run();
}

CycloPoly parse_cyclo_polynomial(std::string_view text, const RingPtr& ring,
                                 const std::shared_ptr<const CyclotomicField>& field)
{
    auto ident = [&](std::string_view name) -> std::optional<CycloPoly> {
        if (name == "zeta" && field && !ring->index_of(name))
            return CycloPoly::constant(ring, CycloNumber::zeta(field, 1));
        return std::nullopt;
    };
    return PolyParser<CycloNumber>(text, ring, ident).run();
}

}  // namespace kras
