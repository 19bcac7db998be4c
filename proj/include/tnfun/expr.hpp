#pragma once

#include <cctype>
#include <cmath>
#include <cstdlib>
#include <functional>
#include <memory>
#include <span>
#include <string>
#include <utility>

#include "tnfun/errors.hpp"
#include "tnfun/function_handle.hpp"

namespace tnfun {

namespace detail {

// Tiny recursive-descent parser:
//   expr   := term (('+'|'-') term)*
//   term   := unary (('*'|'/') unary)*
//   unary  := '-' unary | power
//   power  := atom ('^' unary)?
//   atom   := number | var | func '(' expr ')' | '(' expr ')'
// Variables are s (arity 1) or s1..sn; funcs: exp, log, sqrt.
class ExprParser {
  public:
    using Node = std::function<double(std::span<const double>)>;

    explicit ExprParser(std::string text) : text_(std::move(text)) {}

    std::pair<Node, int> parse() {
        Node root = parse_expr();
        skip_ws();
        if (pos_ != text_.size())
            throw ParseError("unexpected trailing input", pos_);
        return {std::move(root), max_var_ == 0 ? 1 : max_var_};
    }

  private:
    void skip_ws() {
        while (pos_ < text_.size() && std::isspace(
                                          static_cast<unsigned char>(
                                              text_[pos_])))
            ++pos_;
    }

    bool eat(char c) {
        skip_ws();
        if (pos_ < text_.size() && text_[pos_] == c) {
            ++pos_;
            return true;
        }
        return false;
    }

    char peek() {
        skip_ws();
        return pos_ < text_.size() ? text_[pos_] : '\0';
    }

    Node parse_expr() {
        Node lhs = parse_term();
        for (;;) {
            if (eat('+')) {
                Node rhs = parse_term();
                lhs = [l = std::move(lhs), r = std::move(rhs)](
                          std::span<const double> s) { return l(s) + r(s); };
            } else if (eat('-')) {
                Node rhs = parse_term();
                lhs = [l = std::move(lhs), r = std::move(rhs)](
                          std::span<const double> s) { return l(s) - r(s); };
            } else {
                return lhs;
            }
        }
    }

    Node parse_term() {
        Node lhs = parse_unary();
        for (;;) {
            if (eat('*')) {
                Node rhs = parse_unary();
                lhs = [l = std::move(lhs), r = std::move(rhs)](
                          std::span<const double> s) { return l(s) * r(s); };
            } else if (eat('/')) {
                Node rhs = parse_unary();
                lhs = [l = std::move(lhs), r = std::move(rhs)](
                          std::span<const double> s) { return l(s) / r(s); };
            } else {
                return lhs;
            }
        }
    }

    Node parse_unary() {
        if (eat('-')) {
            Node inner = parse_unary();
            return [inner = std::move(inner)](std::span<const double> s) {
                return -inner(s);
            };
        }
        return parse_power();
    }

    Node parse_power() {
        Node base = parse_atom();
        if (eat('^')) {
            Node exp = parse_unary();
            return [b = std::move(base),
                    e = std::move(exp)](std::span<const double> s) {
                return std::pow(b(s), e(s));
            };
        }
        return base;
    }

    Node parse_atom() {
        skip_ws();
        if (pos_ >= text_.size())
            throw ParseError("unexpected end of expression", pos_);
        const char c = text_[pos_];
        if (c == '(') {
            ++pos_;
            Node inner = parse_expr();
            if (!eat(')')) throw ParseError("expected ')'", pos_);
            return inner;
        }
        if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
            const char* start = text_.c_str() + pos_;
            char* end = nullptr;
            const double v = std::strtod(start, &end);
            if (end == start) throw ParseError("bad number", pos_);
            pos_ += static_cast<std::size_t>(end - start);
            return [v](std::span<const double>) { return v; };
        }
        if (std::isalpha(static_cast<unsigned char>(c))) {
            const std::size_t start = pos_;
            while (pos_ < text_.size() &&
                   std::isalnum(static_cast<unsigned char>(text_[pos_])))
                ++pos_;
            const std::string word = text_.substr(start, pos_ - start);
            if (word == "exp" || word == "log" || word == "sqrt") {
                if (!eat('('))
                    throw ParseError("expected '(' after " + word, pos_);
                Node inner = parse_expr();
                if (!eat(')')) throw ParseError("expected ')'", pos_);
                if (word == "exp")
                    return [i = std::move(inner)](std::span<const double> s) {
                        return std::exp(i(s));
                    };
                if (word == "log")
                    return [i = std::move(inner)](std::span<const double> s) {
                        return std::log(i(s));
                    };
                return [i = std::move(inner)](std::span<const double> s) {
                    return std::sqrt(i(s));
                };
            }
            if (word[0] == 's') {
                int idx = 1;
                if (word.size() > 1) {
                    idx = std::atoi(word.c_str() + 1);
                    if (idx <= 0 ||
                        word.find_first_not_of("0123456789", 1) !=
                            std::string::npos)
                        throw ParseError("bad variable '" + word + "'", start);
                }
                max_var_ = std::max(max_var_, idx);
                return [j = idx - 1](std::span<const double> s) {
                    return s[j];
                };
            }
            throw ParseError("unknown identifier '" + word + "'", start);
        }
        throw ParseError(std::string("unexpected character '") + c + "'",
                         pos_);
    }

    std::string text_;
    std::size_t pos_ = 0;
    int max_var_ = 0;
};

}  // namespace detail

// Parse an expression into a testable handle; arity is the highest variable
// index mentioned (plain `s` means arity 1).
inline FunctionHandle parse_expression(const std::string& text) {
    detail::ExprParser parser(text);
    auto [node, arity] = parser.parse();
    FunctionHandle h = make_handle(arity, std::move(node), "expr:" + text);
    return h;
}

}  // namespace tnfun
