#pragma once

#include "lax/dsl/diagnostic.hpp"

#include <cctype>
#include <string>
#include <string_view>
#include <vector>

namespace lax::dsl {

enum class TokenKind {
  identifier,
  number,      ///< "12" or "3/4"
  derivative,  ///< "d/dx"; text holds the coordinate name
  lbrace,
  rbrace,
  lbracket,
  rbracket,
  comma,
  semicolon,
  colon,
  equals,
  plus,
  minus,
  star,
  caret,
  arrow,
  end,
};

inline const char* token_kind_name(TokenKind k) {
  switch (k) {
    case TokenKind::identifier: return "identifier";
    case TokenKind::number: return "number";
    case TokenKind::derivative: return "'d/d...'";
    case TokenKind::lbrace: return "'{'";
    case TokenKind::rbrace: return "'}'";
    case TokenKind::lbracket: return "'['";
    case TokenKind::rbracket: return "']'";
    case TokenKind::comma: return "','";
    case TokenKind::semicolon: return "';'";
    case TokenKind::colon: return "':'";
    case TokenKind::equals: return "'='";
    case TokenKind::plus: return "'+'";
    case TokenKind::minus: return "'-'";
    case TokenKind::star: return "'*'";
    case TokenKind::caret: return "'^'";
    case TokenKind::arrow: return "'->'";
    case TokenKind::end: return "end of input";
  }
  return "token";
}

struct Token {
  TokenKind kind = TokenKind::end;
  std::string text;
  Span span;
};

struct LexResult {
  std::vector<Token> tokens;  ///< always terminated by an end token
  std::vector<Diagnostic> diagnostics;
};

/// Splits source text into tokens. Comments run from '#' or "//" to the end
/// of the line. Bad characters are reported and skipped.
inline LexResult tokenize(std::string_view src) {
  LexResult out;
  std::size_t i = 0, line = 1, col = 1;
  auto span_from = [&](std::size_t start, std::size_t start_line, std::size_t start_col) {
    return Span{start, start_line, start_col, i - start};
  };
  auto advance = [&](std::size_t n) {
    for (std::size_t k = 0; k < n && i < src.size(); ++k, ++i) {
      if (src[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
  };
  auto ident_start = [](char c) { return std::isalpha(static_cast<unsigned char>(c)) || c == '_'; };
  auto ident_char = [](char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_'; };
  auto digit = [](char c) { return std::isdigit(static_cast<unsigned char>(c)) != 0; };

  while (i < src.size()) {
    const char c = src[i];
    if (c == ' ' || c == '\t' || c == '\r' || c == '\n') {
      advance(1);
      continue;
    }
    if (c == '#' || (c == '/' && i + 1 < src.size() && src[i + 1] == '/')) {
      while (i < src.size() && src[i] != '\n')
        advance(1);
      continue;
    }
    const std::size_t start = i, sl = line, sc = col;
    auto push = [&](TokenKind k, std::string text) { out.tokens.push_back({k, std::move(text), span_from(start, sl, sc)}); };

    // "d/d<name>": the derivative with respect to <name>.
    if (c == 'd' && i + 3 < src.size() && src[i + 1] == '/' && src[i + 2] == 'd' && ident_start(src[i + 3]) &&
        (i == 0 || !ident_char(src[i - 1]))) {
      advance(3);
      const std::size_t name_start = i;
      while (i < src.size() && ident_char(src[i]))
        advance(1);
      push(TokenKind::derivative, std::string(src.substr(name_start, i - name_start)));
      continue;
    }
    if (ident_start(c)) {
      while (i < src.size() && ident_char(src[i]))
        advance(1);
      push(TokenKind::identifier, std::string(src.substr(start, i - start)));
      continue;
    }
    if (digit(c)) {
      while (i < src.size() && digit(src[i]))
        advance(1);
      if (i + 1 < src.size() && src[i] == '/' && digit(src[i + 1])) {
        advance(1);
        while (i < src.size() && digit(src[i]))
          advance(1);
      }
      push(TokenKind::number, std::string(src.substr(start, i - start)));
      continue;
    }
    if (c == '-' && i + 1 < src.size() && src[i + 1] == '>') {
      advance(2);
      push(TokenKind::arrow, "->");
      continue;
    }
    TokenKind k = TokenKind::end;
    switch (c) {
      case '{': k = TokenKind::lbrace; break;
      case '}': k = TokenKind::rbrace; break;
      case '[': k = TokenKind::lbracket; break;
      case ']': k = TokenKind::rbracket; break;
      case ',': k = TokenKind::comma; break;
      case ';': k = TokenKind::semicolon; break;
      case ':': k = TokenKind::colon; break;
      case '=': k = TokenKind::equals; break;
      case '+': k = TokenKind::plus; break;
      case '-': k = TokenKind::minus; break;
      case '*': k = TokenKind::star; break;
      case '^': k = TokenKind::caret; break;
      default: break;
    }
    advance(1);
    if (k == TokenKind::end) {
      const unsigned char u = static_cast<unsigned char>(c);
      std::string shown = u >= 0x20 && u < 0x7f ? std::string(1, c) : "byte " + std::to_string(u);
      out.diagnostics.push_back({Severity::error, span_from(start, sl, sc), "unexpected character '" + shown + "'",
                                 "lex"});
      continue;
    }
    push(k, std::string(1, c));
  }
  out.tokens.push_back({TokenKind::end, "", Span{i, line, col, 0}});
  return out;
}

}  // namespace lax::dsl
