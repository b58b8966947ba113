#include "subriem/exprparse.hpp"

#include <cctype>
#include <cstdlib>
#include <stdexcept>
#include <string>

namespace subriem {

namespace {

struct Parser {
    Model model;
    const std::string& text;
    std::size_t pos = 0;

    [[noreturn]] void fail(const std::string& what) const {
        throw std::runtime_error("field expression error at offset " + std::to_string(pos) + ": " +
                                 what);
    }

    void skip_ws() {
        while (pos < text.size() && std::isspace(static_cast<unsigned char>(text[pos]))) ++pos;
    }

    bool eat(char c) {
        skip_ws();
        if (pos < text.size() && text[pos] == c) {
            ++pos;
            return true;
        }
        return false;
    }

    char peek() {
        skip_ws();
        return pos < text.size() ? text[pos] : '\0';
    }

    ScalarField parse() {
        ScalarField f = expr();
        skip_ws();
        if (pos != text.size()) fail("trailing input");
        return f;
    }

    ScalarField expr() {
        ScalarField acc = term();
        for (;;) {
            if (eat('+'))
                acc = acc + term();
            else if (eat('-'))
                acc = acc - term();
            else
                return acc;
        }
    }

    ScalarField term() {
        ScalarField acc = factor();
        for (;;) {
            if (eat('*'))
                acc = acc * factor();
            else if (eat('/'))
                acc = acc / factor();
            else
                return acc;
        }
    }

    ScalarField factor() {
        if (eat('-')) return -factor();
        ScalarField base = atom();
        if (eat('^')) {
            skip_ws();
            bool neg = false;
            if (eat('-')) neg = true;
            std::size_t start = pos;
            while (pos < text.size() && std::isdigit(static_cast<unsigned char>(text[pos]))) ++pos;
            if (pos == start) fail("expected an integer exponent after '^'");
            int n = std::atoi(text.substr(start, pos - start).c_str());
            return pow_int(base, neg ? -n : n);
        }
        return base;
    }

    ScalarField atom() {
        skip_ws();
        if (pos >= text.size()) fail("unexpected end of expression");
        const char c = text[pos];
        if (c == '(') {
            ++pos;
            ScalarField f = expr();
            if (!eat(')')) fail("expected ')'");
            return f;
        }
        if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return number();
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') return identifier();
        fail(std::string("unexpected character '") + c + "'");
    }

    ScalarField number() {
        const char* begin = text.c_str() + pos;
        char* end = nullptr;
        const double v = std::strtod(begin, &end);
        if (end == begin) fail("malformed number");
        pos += static_cast<std::size_t>(end - begin);
        return constant(model, v);
    }

    ScalarField identifier() {
        std::size_t start = pos;
        while (pos < text.size() && (std::isalnum(static_cast<unsigned char>(text[pos])) || text[pos] == '_'))
            ++pos;
        const std::string name = text.substr(start, pos - start);
        if (name == "exp" || name == "log") {
            if (!eat('(')) fail("expected '(' after " + name);
            ScalarField arg = expr();
            if (!eat(')')) fail("expected ')'");
            return name == "exp" ? exp(arg) : log(arg);
        }
        for (const auto& [sym, index] : field_symbols(model))
            if (sym == name) return coordinate(model, index);
        pos = start;
        fail("unknown symbol '" + name + "' on this model");
    }
};

}  // namespace

ScalarField parse_field(Model m, const std::string& text) {
    Parser p{m, text};
    return p.parse();
}

}  // namespace subriem
