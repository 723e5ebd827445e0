#include <cctype>
#include <sstream>

#include "cllr/syntax.hpp"

namespace cllr {

namespace {

std::string describe(const std::vector<std::string>& expected, const std::string& found) {
    std::ostringstream out;
    out << "expected ";
    for (std::size_t i = 0; i < expected.size(); ++i) {
        if (i) out << (i + 1 == expected.size() ? " or " : ", ");
        out << expected[i];
    }
    out << " but found " << found;
    return out.str();
}

enum class Tok { Disj, Conj, Choice, ParOpen, ParClose, Comma, Dot, LParen, RParen, Zero, Ident, End };

struct Token {
    Tok kind;
    std::string text;
    std::size_t line;
    std::size_t column;
};

class Lexer {
public:
    explicit Lexer(std::string_view src) : src_(src) {}

    std::vector<Token> run() {
        std::vector<Token> out;
        for (;;) {
            skip_space();
            const std::size_t l = line_, c = col_;
            if (pos_ >= src_.size()) {
                out.push_back({Tok::End, "end of input", l, c});
                return out;
            }
            const char ch = src_[pos_];
            auto two = [&](char a, char b) { return ch == a && pos_ + 1 < src_.size() && src_[pos_ + 1] == b; };
            if (two('\\', '/')) {
                out.push_back({Tok::Disj, "\\/", l, c}), advance(2);
            } else if (two('/', '\\')) {
                out.push_back({Tok::Conj, "/\\", l, c}), advance(2);
            } else if (two('|', '[')) {
                out.push_back({Tok::ParOpen, "|[", l, c}), advance(2);
            } else if (two(']', '|')) {
                out.push_back({Tok::ParClose, "]|", l, c}), advance(2);
            } else if (two('[', ']')) {
                out.push_back({Tok::Choice, "[]", l, c}), advance(2);
            } else if (ch == ',') {
                out.push_back({Tok::Comma, ",", l, c}), advance(1);
            } else if (ch == '.') {
                out.push_back({Tok::Dot, ".", l, c}), advance(1);
            } else if (ch == '(') {
                out.push_back({Tok::LParen, "(", l, c}), advance(1);
            } else if (ch == ')') {
                out.push_back({Tok::RParen, ")", l, c}), advance(1);
            } else if (ch == '0') {
                out.push_back({Tok::Zero, "0", l, c}), advance(1);
            } else if (ch >= 'a' && ch <= 'z') {
                std::size_t end = pos_ + 1;
                while (end < src_.size() &&
                       (std::isalnum(static_cast<unsigned char>(src_[end])) || src_[end] == '_'))
                    ++end;
                out.push_back({Tok::Ident, std::string(src_.substr(pos_, end - pos_)), l, c});
                advance(end - pos_);
            } else {
                throw ParseError(l, c, {"a term"}, std::string("'") + ch + "'");
            }
        }
    }

private:
    void skip_space() {
        while (pos_ < src_.size() && std::isspace(static_cast<unsigned char>(src_[pos_]))) advance(1);
    }
    void advance(std::size_t n) {
        for (std::size_t i = 0; i < n; ++i, ++pos_) {
            if (src_[pos_] == '\n') {
                ++line_;
                col_ = 1;
            } else {
                ++col_;
            }
        }
    }

    std::string_view src_;
    std::size_t pos_ = 0;
    std::size_t line_ = 1;
    std::size_t col_ = 1;
};

class Parser {
public:
    explicit Parser(std::vector<Token> toks) : toks_(std::move(toks)) {}

    Term run() {
        Term t = disj();
        expect(Tok::End, {"'\\/'", "'/\\'", "'[]'", "'|['", "end of input"});
        return t;
    }

private:
    const Token& peek() const { return toks_[pos_]; }
    bool accept(Tok k) {
        if (peek().kind != k) return false;
        ++pos_;
        return true;
    }
    [[noreturn]] void fail(std::vector<std::string> expected) const {
        const Token& t = peek();
        throw ParseError(t.line, t.column, std::move(expected),
                         t.kind == Tok::End ? t.text : "'" + t.text + "'");
    }
    void expect(Tok k, std::vector<std::string> expected) {
        if (!accept(k)) fail(std::move(expected));
    }

    Term disj() {
        Term t = conj();
        while (accept(Tok::Disj)) t = Term::disj(std::move(t), conj());
        return t;
    }
    Term conj() {
        Term t = choice();
        while (accept(Tok::Conj)) t = Term::conj(std::move(t), choice());
        return t;
    }
    Term choice() {
        Term t = par();
        while (accept(Tok::Choice)) t = Term::choice(std::move(t), par());
        return t;
    }
    Term par() {
        Term t = pre();
        while (accept(Tok::ParOpen)) {
            std::vector<std::string> names;
            if (peek().kind == Tok::Ident) {
                names.push_back(sync_action());
                while (accept(Tok::Comma)) names.push_back(sync_action());
            }
            expect(Tok::ParClose, {"','", "']|'"});
            t = Term::par(std::move(t), pre(), SyncSet(std::move(names)));
        }
        return t;
    }
    std::string sync_action() {
        const Token& t = peek();
        if (t.kind != Tok::Ident || t.text == "tau" || t.text == "bot") fail({"visible action"});
        ++pos_;
        return t.text;
    }
    Term pre() {
        const Token& t = peek();
        if (t.kind == Tok::Ident && t.text != "bot") {
            ++pos_;
            Action a = t.text == "tau" ? Action::tau() : Action::visible(t.text);
            expect(Tok::Dot, {"'.'"});
            return Term::prefix(std::move(a), pre());
        }
        return atom();
    }
    Term atom() {
        const Token& t = peek();
        if (accept(Tok::Zero)) return Term::nil();
        if (t.kind == Tok::Ident && t.text == "bot") {
            ++pos_;
            return Term::bottom();
        }
        if (accept(Tok::LParen)) {
            Term inner = disj();
            expect(Tok::RParen, {"')'", "'\\/'", "'/\\'", "'[]'", "'|['"});
            return inner;
        }
        fail({"'0'", "'bot'", "'('", "action"});
    }

    std::vector<Token> toks_;
    std::size_t pos_ = 0;
};

}  // namespace

ParseError::ParseError(std::size_t line, std::size_t column, std::vector<std::string> expected, std::string found)
    : std::runtime_error(std::to_string(line) + ":" + std::to_string(column) + ": " + describe(expected, found)),
      line_(line),
      column_(column),
      expected_(std::move(expected)),
      found_(std::move(found)) {}

Term parse(std::string_view text) { return Parser(Lexer(text).run()).run(); }

}  // namespace cllr
