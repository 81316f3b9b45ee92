#include "monores/parse.hpp"

#include <cctype>

namespace monores {
namespace {

struct Lexer {
    const std::string& s;
    std::size_t pos = 0;
    int line = 1, col = 1;

    explicit Lexer(const std::string& text) : s(text) { skip_ws(); }

    void advance() {
        if (pos < s.size()) {
            if (s[pos] == '\n') { ++line; col = 1; }
            else ++col;
            ++pos;
        }
    }
    void skip_ws() {
        while (pos < s.size() && std::isspace(static_cast<unsigned char>(s[pos]))) advance();
    }
    bool eof() const { return pos >= s.size(); }
    char peek() const { return pos < s.size() ? s[pos] : '\0'; }
    bool accept(char c) {
        if (peek() == c) { advance(); skip_ws(); return true; }
        return false;
    }
};

bool is_ident_start(char c) { return std::isalpha(static_cast<unsigned char>(c)) || c == '_'; }
bool is_ident(char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_'; }

struct Parser {
    Lexer lx;
    const std::vector<std::string>& vars;
    std::size_t n;

    Parser(const std::string& text, const std::vector<std::string>& v)
        : lx(text), vars(v), n(v.size()) {}

    [[noreturn]] void fail(const std::string& msg) { throw SyntaxError(msg, lx.line, lx.col); }

    Int integer() {
        if (!std::isdigit(static_cast<unsigned char>(lx.peek()))) fail("expected digit");
        Int v(0);
        while (std::isdigit(static_cast<unsigned char>(lx.peek()))) {
            v = v * 10 + (lx.peek() - '0');
            lx.advance();
        }
        lx.skip_ws();
        return v;
    }

    Rat number() {
        Int num = integer();
        if (lx.accept('/')) {
            int ln = lx.line, cn = lx.col;
            if (!std::isdigit(static_cast<unsigned char>(lx.peek())))
                throw SyntaxError("expected denominator", ln, cn);
            Int den = integer();
            if (den == 0) throw SyntaxError("zero denominator", ln, cn);
            return Rat(num, den);
        }
        return Rat(num);
    }

    Jet primary() {
        if (lx.accept('(')) {
            Jet e = expr();
            if (!lx.accept(')')) fail("expected ')'");
            return e;
        }
        if (std::isdigit(static_cast<unsigned char>(lx.peek())))
            return Jet::constant(n, number());
        if (is_ident_start(lx.peek())) {
            int ln = lx.line, cn = lx.col;
            std::string name;
            while (is_ident(lx.peek())) { name += lx.peek(); lx.advance(); }
            lx.skip_ws();
            for (std::size_t i = 0; i < n; ++i)
                if (vars[i] == name) return Jet::variable(n, i + 1);
            throw UnknownVariable("unknown variable '" + name + "'", ln, cn);
        }
        fail("expected number, variable, or '('");
    }

    Jet power() {
        Jet base = primary();
        if (lx.accept('^')) {
            int ln = lx.line, cn = lx.col;
            bool neg = lx.accept('-');
            if (!std::isdigit(static_cast<unsigned char>(lx.peek())))
                throw SyntaxError("expected exponent", lx.line, lx.col);
            Int e = integer();
            if (neg) throw NegativeExponent("negative exponent", ln, cn);
            if (e > 4096) throw SyntaxError("exponent too large", ln, cn);
            return base.pow(static_cast<int>(e.convert_to<long long>()));
        }
        return base;
    }

    Jet factor() {
        if (lx.accept('-')) return -factor();
        if (lx.accept('+')) return factor();
        return power();
    }

    Jet term() {
        Jet t = factor();
        while (lx.accept('*')) t = t * factor();
        return t;
    }

    Jet expr() {
        Jet e = term();
        for (;;) {
            if (lx.accept('+')) e = e + term();
            else if (lx.accept('-')) e = e - term();
            else return e;
        }
    }

    Jet run() {
        Jet e = expr();
        if (!lx.eof()) fail("unexpected trailing input");
        return e;
    }
};

}  // namespace

Jet parse_polynomial(const std::string& text, const std::vector<std::string>& vars) {
    return Parser(text, vars).run();
}

std::vector<std::string> scan_variables(const std::string& text) {
    std::vector<std::string> out;
    for (std::size_t i = 0; i < text.size();) {
        if (is_ident_start(text[i])) {
            std::string name;
            while (i < text.size() && is_ident(text[i])) name += text[i++];
            bool seen = false;
            for (auto& v : out)
                if (v == name) seen = true;
            if (!seen) out.push_back(name);
        } else {
            ++i;
        }
    }
    return out;
}

}  // namespace monores
