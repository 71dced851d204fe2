#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace rybu::lang {

struct SourcePos {
  int line = 0;
  int column = 0;

  // Positions never take part in structural comparison of syntax trees.
  friend constexpr bool operator==(SourcePos, SourcePos) { return true; }
};

std::string to_string(SourcePos pos);

enum class TokenKind {
  Ident,
  Int,
  Atom,  // `:name`, text holds the name without the colon
  // keywords
  KwServer,
  KwVar,
  KwThread,
  KwLoop,
  KwMatch,
  KwReturn,
  KwConst,
  // punctuation
  LBrace,
  RBrace,
  LParen,
  RParen,
  LBracket,
  RBracket,
  Semicolon,
  Comma,
  Colon,
  Dot,
  DotDot,
  Pipe,
  Arrow,     // ->
  FatArrow,  // =>
  Assign,
  Eq,
  Ne,
  Lt,
  Gt,
  Le,
  Ge,
  Plus,
  Minus,
  Star,
  Slash,
  End,
};

std::string_view spelling(TokenKind kind);

struct Token {
  TokenKind kind = TokenKind::End;
  std::string text;
  SourcePos pos;
  friend bool operator==(const Token& a, const Token& b) { return a.kind == b.kind && a.text == b.text; }
};

class SyntaxError : public std::runtime_error {
 public:
  SyntaxError(const std::string& message, SourcePos pos);
  SourcePos pos() const { return pos_; }

 private:
  SourcePos pos_;
};

/// Splits Rybu source into tokens. The trailing End token is not included.
/// `//` starts a comment running to the end of the line.
std::vector<Token> tokenize(std::string_view text);

/// Renders tokens back to source text, space separated.
std::string detokenize(const std::vector<Token>& tokens);

}  // namespace rybu::lang
