#pragma once

#include <cctype>
#include <string>
#include <string_view>

#include "hexufs/core.hpp"

namespace hexufs {

enum class TokenKind {
    end,
    identifier,  // lowercase-initial name
    variable,    // uppercase- or underscore-initial name
    integer,
    string,      // double-quoted, quotes kept
    lparen,
    rparen,
    lbracket,
    rbracket,
    comma,
    dot,
    bar,
    amp,
    minus,
    semicolon,
    if_,         // ":-"
};

struct Token {
    TokenKind kind = TokenKind::end;
    std::string text;
    std::size_t line = 1;
    std::size_t column = 1;
};

inline const char* token_name(TokenKind k) {
    switch (k) {
        case TokenKind::end: return "end of input";
        case TokenKind::identifier: return "identifier";
        case TokenKind::variable: return "variable";
        case TokenKind::integer: return "integer";
        case TokenKind::string: return "string";
        case TokenKind::lparen: return "'('";
        case TokenKind::rparen: return "')'";
        case TokenKind::lbracket: return "'['";
        case TokenKind::rbracket: return "']'";
        case TokenKind::comma: return "','";
        case TokenKind::dot: return "'.'";
        case TokenKind::bar: return "'|'";
        case TokenKind::amp: return "'&'";
        case TokenKind::minus: return "'-'";
        case TokenKind::semicolon: return "';'";
        case TokenKind::if_: return "':-'";
    }
    return "?";
}

// Tokenizer with one token of lookahead. '%' starts a line comment.
class Lexer {
public:
    explicit Lexer(std::string_view text, std::size_t first_line = 1) : text_(text), line_(first_line) { advance(); }

    const Token& peek() const { return current_; }

    Token next() {
        Token t = current_;
        advance();
        return t;
    }

    bool accept(TokenKind k) {
        if (current_.kind != k) return false;
        advance();
        return true;
    }

    Token expect(TokenKind k, const char* what = nullptr) {
        if (current_.kind != k) fail(std::string("expected ") + (what ? what : token_name(k)) + ", found " + describe(current_));
        return next();
    }

    [[noreturn]] void fail(const std::string& msg) const { throw ParseError(msg, current_.line, current_.column); }

    static std::string describe(const Token& t) {
        if (t.kind == TokenKind::end) return token_name(t.kind);
        return "'" + t.text + "'";
    }

private:
    void skip_space() {
        while (pos_ < text_.size()) {
            char c = text_[pos_];
            if (c == '%') {
                while (pos_ < text_.size() && text_[pos_] != '\n') bump();
            } else if (std::isspace(static_cast<unsigned char>(c))) {
                bump();
            } else {
                break;
            }
        }
    }

    void bump() {
        if (text_[pos_] == '\n') {
            ++line_;
            column_ = 1;
        } else {
            ++column_;
        }
        ++pos_;
    }

    void advance() {
        skip_space();
        current_ = Token{};
        current_.line = line_;
        current_.column = column_;
        if (pos_ >= text_.size()) return;

        std::size_t start = pos_;
        char c = text_[pos_];
        auto single = [&](TokenKind k) {
            bump();
            current_.kind = k;
        };
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
            while (pos_ < text_.size() && (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_')) bump();
            current_.kind = (std::isupper(static_cast<unsigned char>(c)) || c == '_') ? TokenKind::variable : TokenKind::identifier;
        } else if (std::isdigit(static_cast<unsigned char>(c))) {
            while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) bump();
            current_.kind = TokenKind::integer;
        } else if (c == '"') {
            bump();
            while (pos_ < text_.size() && text_[pos_] != '"') {
                if (text_[pos_] == '\\' && pos_ + 1 < text_.size()) bump();
                if (text_[pos_] == '\n') throw ParseError("unterminated string", current_.line, current_.column);
                bump();
            }
            if (pos_ >= text_.size()) throw ParseError("unterminated string", current_.line, current_.column);
            bump();
            current_.kind = TokenKind::string;
        } else if (c == ':' && pos_ + 1 < text_.size() && text_[pos_ + 1] == '-') {
            bump();
            bump();
            current_.kind = TokenKind::if_;
        } else {
            switch (c) {
                case '(': single(TokenKind::lparen); break;
                case ')': single(TokenKind::rparen); break;
                case '[': single(TokenKind::lbracket); break;
                case ']': single(TokenKind::rbracket); break;
                case ',': single(TokenKind::comma); break;
                case '.': single(TokenKind::dot); break;
                case '|': single(TokenKind::bar); break;
                case '&': single(TokenKind::amp); break;
                case '-': single(TokenKind::minus); break;
                case ';': single(TokenKind::semicolon); break;
                default:
                    throw ParseError(std::string("unexpected character '") + c + "'", line_, column_);
            }
        }
        current_.text = std::string(text_.substr(start, pos_ - start));
    }

    std::string_view text_;
    std::size_t pos_ = 0;
    std::size_t line_ = 1;
    std::size_t column_ = 1;
    Token current_;
};

inline bool is_term_token(TokenKind k) {
    return k == TokenKind::identifier || k == TokenKind::variable || k == TokenKind::integer || k == TokenKind::string;
}

// ident ["(" term ("," term)* ")"], optionally preceded by '-' when allowed.
inline Atom parse_atom(Lexer& lex, bool allow_classical = true) {
    Atom atom;
    if (lex.peek().kind == TokenKind::minus) {
        if (!allow_classical) lex.fail("classical negation is not allowed here");
        lex.next();
        atom.classical = true;
    }
    atom.predicate = lex.expect(TokenKind::identifier, "predicate name").text;
    if (lex.accept(TokenKind::lparen)) {
        do {
            if (!is_term_token(lex.peek().kind)) lex.fail("expected term, found " + Lexer::describe(lex.peek()));
            atom.args.push_back(lex.next().text);
        } while (lex.accept(TokenKind::comma));
        lex.expect(TokenKind::rparen);
    }
    return atom;
}

}  // namespace hexufs
