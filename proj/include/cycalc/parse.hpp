#pragma once

// Polynomial surface syntax: integers or a/b coefficients, variables,
// `+ - * ^`, parentheses, and division by nonzero constants.

#include <cctype>
#include <string>
#include <string_view>

#include "cycalc/poly.hpp"

namespace cycalc {

namespace detail {

template <class F>
class PolyParser {
public:
    PolyParser(const RingPtr<F>& ring, std::string_view text) : ring_(ring), text_(text) {}

    Poly<F> parse_all() {
        Poly<F> p = expr();
        skip_ws();
        if (pos_ != text_.size()) fail("unexpected '" + std::string(1, text_[pos_]) + "'");
        return p;
    }

private:
    [[noreturn]] void fail(const std::string& what) const {
        throw parse_error("polynomial '" + std::string(text_) + "' at column " + std::to_string(pos_ + 1) + ": " +
                          what);
    }

    void skip_ws() {
        while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    }

    bool accept(char c) {
        skip_ws();
        if (pos_ < text_.size() && text_[pos_] == c) {
            ++pos_;
            return true;
        }
        return false;
    }

    Poly<F> expr() {
        skip_ws();
        bool negate = false;
        if (accept('-')) negate = true;
        else accept('+');
        Poly<F> acc = term();
        if (negate) acc = -acc;
        for (;;) {
            if (accept('+')) acc = acc + term();
            else if (accept('-')) acc = acc - term();
            else return acc;
        }
    }

    Poly<F> term() {
        Poly<F> acc = factor();
        for (;;) {
            if (accept('*')) {
                acc = acc * factor();
            } else if (accept('/')) {
                Poly<F> d = factor();
                if (!d.is_constant() || d.is_zero()) fail("division by a non-constant or zero");
                acc = acc.scale(ring_->field().inv(d.lead_coeff()));
            } else {
                return acc;
            }
        }
    }

    Poly<F> factor() {
        Poly<F> b = base();
        if (accept('^')) {
            skip_ws();
            std::size_t start = pos_;
            while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
            if (start == pos_) fail("expected exponent");
            unsigned long e = std::stoul(std::string(text_.substr(start, pos_ - start)));
            if (e > 1000) fail("exponent too large");
            b = b.pow(static_cast<unsigned>(e));
        }
        return b;
    }

    Poly<F> base() {
        skip_ws();
        if (pos_ >= text_.size()) fail("unexpected end of input");
        char c = text_[pos_];
        if (c == '(') {
            ++pos_;
            Poly<F> inner = expr();
            if (!accept(')')) fail("expected ')'");
            return inner;
        }
        if (std::isdigit(static_cast<unsigned char>(c))) {
            std::size_t start = pos_;
            while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
            mpz_class v(std::string(text_.substr(start, pos_ - start)));
            return Poly<F>::constant(ring_, ring_->field().from_ratio(v, 1));
        }
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
            std::size_t start = pos_;
            while (pos_ < text_.size() &&
                   (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_'))
                ++pos_;
            std::string name(text_.substr(start, pos_ - start));
            auto idx = ring_->var_index(name);
            if (!idx) {
                pos_ = start;
                fail("unknown variable '" + name + "'");
            }
            return Poly<F>::variable(ring_, *idx);
        }
        fail("unexpected '" + std::string(1, c) + "'");
    }

    RingPtr<F> ring_;
    std::string_view text_;
    std::size_t pos_ = 0;
};

}  // namespace detail

template <class F>
Poly<F> parse_poly(const RingPtr<F>& ring, std::string_view text) {
    return detail::PolyParser<F>(ring, text).parse_all();
}

}  // namespace cycalc
