#pragma once

// Internal lexer/parser plumbing for the experiment DSL; not installed.

#include <string>
#include <string_view>
#include <vector>

#include "qfc/expspec.hpp"

namespace qfc::expspec::detail {

enum class TokenKind {
  Ident,
  Number,
  String,
  LBrace,
  RBrace,
  LBracket,
  RBracket,
  Equals,
  Semicolon,
  Comma,
  End,
};

struct Token {
  TokenKind kind = TokenKind::End;
  std::string text;    // identifier or string payload
  double number = 0.0;
  int line = 1;
  int column = 1;
};

// Tokenizes the whole input. Lexical problems become diagnostics; the
// offending characters are skipped so parsing can keep going.
std::vector<Token> lex(std::string_view text, std::vector<Diagnostic>& diags);

struct Value {
  enum class Kind { Number, String, Ident, List };
  Kind kind = Kind::Number;
  double number = 0.0;
  std::string unit;  // unit word following a number, if any
  std::string text;  // string or identifier payload
  std::vector<Value> items;
  SourceLoc loc;
};

struct Stmt {
  std::string key;
  Value value;
  SourceLoc loc;
};

struct Block {
  std::string name;
  std::vector<Stmt> stmts;
  SourceLoc loc;
};

// Token stream to block list; malformed statements are skipped with
// diagnostics and recovery at the next ';' or '}'.
std::vector<Block> parse_blocks(const std::vector<Token>& tokens,
                                std::vector<Diagnostic>& diags);

}  // namespace qfc::expspec::detail
