#include <cctype>
#include <cstdlib>

#include "ast.hpp"

namespace qfc::expspec::detail {
namespace {

bool ident_start(char c) {
  return std::isalpha(static_cast<unsigned char>(c)) || c == '_';
}

bool ident_char(char c) {
  return std::isalnum(static_cast<unsigned char>(c)) || c == '_';
}

}  // namespace

std::vector<Token> lex(std::string_view text, std::vector<Diagnostic>& diags) {
  std::vector<Token> out;
  int line = 1;
  int column = 1;
  size_t i = 0;
  const size_t n = text.size();

  auto advance = [&](size_t count) {
    for (size_t k = 0; k < count && i < n; ++k, ++i) {
      if (text[i] == '\n') {
        ++line;
        column = 1;
      } else {
        ++column;
      }
    }
  };
  auto push = [&](TokenKind kind, int l, int c) {
    Token t;
    t.kind = kind;
    t.line = l;
    t.column = c;
    out.push_back(t);
    return &out.back();
  };

  while (i < n) {
    const char c = text[i];
    if (c == ' ' || c == '\t' || c == '\r' || c == '\n') {
      advance(1);
      continue;
    }
    if (c == '#') {
      while (i < n && text[i] != '\n') advance(1);
      continue;
    }
    const int l = line, col = column;
    switch (c) {
      case '{': push(TokenKind::LBrace, l, col); advance(1); continue;
      case '}': push(TokenKind::RBrace, l, col); advance(1); continue;
      case '[': push(TokenKind::LBracket, l, col); advance(1); continue;
      case ']': push(TokenKind::RBracket, l, col); advance(1); continue;
      case '=': push(TokenKind::Equals, l, col); advance(1); continue;
      case ';': push(TokenKind::Semicolon, l, col); advance(1); continue;
      case ',': push(TokenKind::Comma, l, col); advance(1); continue;
      default: break;
    }
    if (c == '"') {
      std::string s;
      size_t j = i + 1;
      bool closed = false;
      while (j < n) {
        if (text[j] == '"') {
          closed = true;
          break;
        }
        if (text[j] == '\n') break;
        if (text[j] == '\\' && j + 1 < n &&
            (text[j + 1] == '"' || text[j + 1] == '\\')) {
          s.push_back(text[j + 1]);
          j += 2;
          continue;
        }
        s.push_back(text[j]);
        ++j;
      }
      if (!closed) {
        diags.push_back({Severity::Error, l, col, "lexical",
                         "unterminated string literal"});
        advance(j - i);
        continue;
      }
      Token* t = push(TokenKind::String, l, col);
      t->text = s;
      advance(j + 1 - i);
      continue;
    }
    if (ident_start(c)) {
      size_t j = i;
      while (j < n && ident_char(text[j])) ++j;
      Token* t = push(TokenKind::Ident, l, col);
      t->text.assign(text.substr(i, j - i));
      advance(j - i);
      continue;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '-' || c == '+' ||
        c == '.') {
      size_t j = i;
      if (text[j] == '-' || text[j] == '+') ++j;
      size_t digits = j;
      while (j < n && (std::isdigit(static_cast<unsigned char>(text[j])) ||
                       text[j] == '.')) {
        ++j;
      }
      if (j < n && (text[j] == 'e' || text[j] == 'E')) {
        size_t k = j + 1;
        if (k < n && (text[k] == '-' || text[k] == '+')) ++k;
        if (k < n && std::isdigit(static_cast<unsigned char>(text[k]))) {
          ++k;
          while (k < n && std::isdigit(static_cast<unsigned char>(text[k]))) {
            ++k;
          }
          j = k;
        }
      }
      const std::string lit(text.substr(i, j - i));
      char* end = nullptr;
      const double v = std::strtod(lit.c_str(), &end);
      if (j == digits || end != lit.c_str() + lit.size()) {
        diags.push_back({Severity::Error, l, col, "lexical",
                         "malformed number '" + lit + "'"});
        advance(j - i);
        continue;
      }
      Token* t = push(TokenKind::Number, l, col);
      t->number = v;
      advance(j - i);
      continue;
    }
    diags.push_back({Severity::Error, l, col, "lexical",
                     std::string("unexpected character '") + c + "'"});
    advance(1);
  }
  Token* end_tok = push(TokenKind::End, line, column);
  (void)end_tok;
  return out;
}

}  // namespace qfc::expspec::detail
