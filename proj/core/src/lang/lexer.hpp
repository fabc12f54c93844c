#pragma once

// Small hand-written tokenizer shared by the language front ends.

#include "sosw/errors.hpp"

#include <algorithm>
#include <cctype>
#include <set>
#include <string>
#include <string_view>
#include <vector>

namespace sosw::detail {

struct Token {
    enum class Kind { ident, number, symbol, keyword, end };

    Kind kind = Kind::end;
    std::string text;
    std::size_t line = 1;
    std::size_t col = 1;
};

inline std::string describe(const Token& t)
{
    switch (t.kind) {
    case Token::Kind::end:
        return "end of input";
    case Token::Kind::number:
        return "number " + t.text;
    case Token::Kind::ident:
        return "identifier '" + t.text + "'";
    default:
        return "'" + t.text + "'";
    }
}

/// Splits `text` into identifiers, unsigned integers, keywords and the given symbols (longest
/// match first). `//` starts a comment running to the end of the line.
inline std::vector<Token> tokenize(std::string_view text, std::vector<std::string> symbols,
                                   const std::set<std::string>& keywords)
{
    std::sort(symbols.begin(), symbols.end(), [](const auto& a, const auto& b) { return a.size() > b.size(); });
    std::vector<Token> tokens;
    std::size_t line = 1;
    std::size_t col = 1;
    std::size_t i = 0;
    auto advance = [&](std::size_t n) {
        for (std::size_t k = 0; k < n; ++k, ++i) {
            if (text[i] == '\n') {
                ++line;
                col = 1;
            } else if ((static_cast<unsigned char>(text[i]) & 0xC0) != 0x80) {
                ++col;
            }
        }
    };
    while (i < text.size()) {
        unsigned char c = static_cast<unsigned char>(text[i]);
        if (std::isspace(c)) {
            advance(1);
            continue;
        }
        if (text.substr(i, 2) == "//") {
            while (i < text.size() && text[i] != '\n')
                advance(1);
            continue;
        }
        Token tok;
        tok.line = line;
        tok.col = col;
        if (std::isalpha(c) || c == '_') {
            std::size_t j = i;
            while (j < text.size() && (std::isalnum(static_cast<unsigned char>(text[j])) || text[j] == '_'))
                ++j;
            tok.text = std::string(text.substr(i, j - i));
            tok.kind = keywords.count(tok.text) ? Token::Kind::keyword : Token::Kind::ident;
            advance(j - i);
        } else if (std::isdigit(c)) {
            std::size_t j = i;
            while (j < text.size() && std::isdigit(static_cast<unsigned char>(text[j])))
                ++j;
            tok.text = std::string(text.substr(i, j - i));
            tok.kind = Token::Kind::number;
            advance(j - i);
        } else {
            bool matched = false;
            for (const auto& sym : symbols) {
                if (text.substr(i, sym.size()) == sym) {
                    tok.text = sym;
                    tok.kind = Token::Kind::symbol;
                    advance(sym.size());
                    matched = true;
                    break;
                }
            }
            if (!matched) {
                std::size_t len = 1;
                while (i + len < text.size() && (static_cast<unsigned char>(text[i + len]) & 0xC0) == 0x80)
                    ++len;
                throw ParseError("unexpected character '" + std::string(text.substr(i, len)) + "'", line, col);
            }
        }
        tokens.push_back(std::move(tok));
    }
    Token end;
    end.line = line;
    end.col = col;
    tokens.push_back(end);
    return tokens;
}

/// Cursor over a token vector with the usual peek/accept/expect helpers.
class TokenStream {
public:
    explicit TokenStream(std::vector<Token> tokens) : tokens_(std::move(tokens)) {}

    [[nodiscard]] const Token& peek(std::size_t ahead = 0) const
    {
        return tokens_[std::min(pos_ + ahead, tokens_.size() - 1)];
    }
    [[nodiscard]] bool at_end() const { return peek().kind == Token::Kind::end; }
    [[nodiscard]] std::size_t position() const { return pos_; }
    void rewind(std::size_t pos) { pos_ = pos; }

    [[nodiscard]] bool is(std::string_view text) const
    {
        const Token& t = peek();
        return (t.kind == Token::Kind::symbol || t.kind == Token::Kind::keyword) && t.text == text;
    }

    bool accept(std::string_view text)
    {
        if (!is(text))
            return false;
        ++pos_;
        return true;
    }

    Token next()
    {
        Token t = peek();
        if (pos_ < tokens_.size() - 1)
            ++pos_;
        return t;
    }

    Token expect(std::string_view text)
    {
        if (!is(text))
            fail({"'" + std::string(text) + "'"});
        return next();
    }

    Token expect_ident(const std::string& what = "identifier")
    {
        if (peek().kind != Token::Kind::ident)
            fail({what});
        return next();
    }

    [[noreturn]] void fail(std::vector<std::string> expected) const
    {
        const Token& t = peek();
        throw ParseError("unexpected " + describe(t), t.line, t.col, std::move(expected));
    }

    [[noreturn]] void fail_at(const Token& t, const std::string& message) const
    {
        throw ParseError(message, t.line, t.col);
    }

private:
    std::vector<Token> tokens_;
    std::size_t pos_ = 0;
};

} // namespace sosw::detail
