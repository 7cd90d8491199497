#include "trip/parser.hpp"

#include <cctype>
#include <sstream>
#include <vector>

#include "trip/error.hpp"

namespace trip {

namespace {

enum class Tok { Number, Ident, Plus, Minus, Star, Caret, LParen, RParen, End };

struct Token {
    Tok kind;
    std::string text;
    size_t pos;  // 1-based position in the input
};

class Lexer {
  public:
    explicit Lexer(const std::string& text) : text_(text) { advance(); }

    const Token& peek() const { return current_; }

    Token take() {
        Token t = current_;
        advance();
        return t;
    }

    [[noreturn]] void fail(const std::string& what) const {
        std::ostringstream os;
        os << what << " at position " << current_.pos;
        throw Error("SyntaxError", os.str());
    }

  private:
    void advance() {
        while (i_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[i_]))) ++i_;
        size_t pos = i_ + 1;
        if (i_ >= text_.size()) {
            current_ = {Tok::End, "", pos};
            return;
        }
        char c = text_[i_];
        if (std::isdigit(static_cast<unsigned char>(c))) {
            size_t j = i_;
            while (j < text_.size() && std::isdigit(static_cast<unsigned char>(text_[j]))) ++j;
            if (j < text_.size() && text_[j] == '/' && j + 1 < text_.size() &&
                std::isdigit(static_cast<unsigned char>(text_[j + 1]))) {
                ++j;
                while (j < text_.size() && std::isdigit(static_cast<unsigned char>(text_[j]))) ++j;
            }
            current_ = {Tok::Number, text_.substr(i_, j - i_), pos};
            i_ = j;
            return;
        }
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
            size_t j = i_;
            while (j < text_.size() && (std::isalnum(static_cast<unsigned char>(text_[j])) ||
                                        text_[j] == '_'))
                ++j;
            current_ = {Tok::Ident, text_.substr(i_, j - i_), pos};
            i_ = j;
            return;
        }
        Tok k;
        switch (c) {
            case '+': k = Tok::Plus; break;
            case '-': k = Tok::Minus; break;
            case '*': k = Tok::Star; break;
            case '^': k = Tok::Caret; break;
            case '(': k = Tok::LParen; break;
            case ')': k = Tok::RParen; break;
            default: {
                std::ostringstream os;
                os << "unexpected character '" << c << "' at position " << pos;
                throw Error("SyntaxError", os.str());
            }
        }
        current_ = {k, std::string(1, c), pos};
        ++i_;
    }

    const std::string& text_;
    size_t i_ = 0;
    Token current_{Tok::End, "", 0};
};

class Parser {
  public:
    Parser(const std::string& text, TablePtr table, std::optional<int> trunc)
        : lex_(text), table_(std::move(table)), trunc_(trunc) {}

    SuperPoly run() {
        SuperPoly p = expr();
        if (lex_.peek().kind != Tok::End) lex_.fail("trailing input");
        return p;
    }

  private:
    SuperPoly expr() {
        SuperPoly acc = term();
        while (lex_.peek().kind == Tok::Plus || lex_.peek().kind == Tok::Minus) {
            bool plus = lex_.take().kind == Tok::Plus;
            SuperPoly rhs = term();
            acc = plus ? acc + rhs : acc - rhs;
        }
        return acc;
    }

    SuperPoly term() {
        SuperPoly acc = factor();
        while (lex_.peek().kind == Tok::Star) {
            lex_.take();
            acc = acc * factor();
        }
        return acc;
    }

    SuperPoly factor() {
        if (lex_.peek().kind == Tok::Minus) {
            lex_.take();
            return -factor();
        }
        SuperPoly base = atom();
        if (lex_.peek().kind == Tok::Caret) {
            Token caret = lex_.take();
            if (lex_.peek().kind != Tok::Number) lex_.fail("exponent must be an integer");
            Token e = lex_.take();
            if (e.text.find('/') != std::string::npos) lex_.fail("exponent must be an integer");
            int k = std::stoi(e.text);
            auto sp = base.grassmannParity();
            auto fp = base.formParity();
            bool oddBase = !sp || !fp || ((*sp + *fp) & 1);
            if (oddBase && k > 1) {
                std::ostringstream os;
                os << "odd generator raised to power " << k << " at position " << caret.pos;
                throw Error("OddPower", os.str());
            }
            return base.pow(k);
        }
        return base;
    }

    SuperPoly atom() {
        const Token& t = lex_.peek();
        switch (t.kind) {
            case Tok::Number: {
                Token n = lex_.take();
                return SuperPoly::constant(table_, parseRational(n.text), trunc_);
            }
            case Tok::Ident: {
                Token id = lex_.take();
                if (!table_->has(id.text)) {
                    std::ostringstream os;
                    os << "unknown identifier '" << id.text << "' at position " << id.pos;
                    throw Error("UnknownIdentifier", os.str());
                }
                return SuperPoly::variable(table_, table_->idOf(id.text), trunc_);
            }
            case Tok::LParen: {
                lex_.take();
                SuperPoly p = expr();
                if (lex_.peek().kind != Tok::RParen) lex_.fail("expected ')'");
                lex_.take();
                return p;
            }
            default:
                lex_.fail("expected a number, identifier or '('");
        }
    }

    Lexer lex_;
    TablePtr table_;
    std::optional<int> trunc_;
};

}  // namespace

SuperPoly parseExpression(const std::string& text, TablePtr table, std::optional<int> trunc) {
    return Parser(text, std::move(table), trunc).run();
}

std::string printExpression(const SuperPoly& poly) {
    if (poly.isZero()) return "0";
    std::ostringstream os;
    bool first = true;
    for (const auto& [m, c] : poly.terms()) {
        Rational a = c;
        if (first) {
            if (a < 0) {
                os << "-";
                a = -a;
            }
        } else {
            os << (a < 0 ? " - " : " + ");
            if (a < 0) a = -a;
        }
        bool needCoef = (a != 1) || m.isConstant();
        if (needCoef) os << toString(a);
        bool needStar = needCoef;
        for (const auto& [v, k] : m.entries()) {
            if (needStar) os << "*";
            os << poly.table()->at(v).name;
            if (k > 1) os << "^" << k;
            needStar = true;
        }
        first = false;
    }
    return os.str();
}

}  // namespace trip

namespace trip {
std::string SuperPoly::str() const { return printExpression(*this); }
}  // namespace trip
