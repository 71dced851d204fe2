#include "rybu/lang/lexer.hpp"

#include <array>
#include <cctype>
#include <utility>

namespace rybu::lang {

std::string to_string(SourcePos pos) { return std::to_string(pos.line) + ":" + std::to_string(pos.column); }

SyntaxError::SyntaxError(const std::string& message, SourcePos pos)
    : std::runtime_error(to_string(pos) + ": " + message), pos_(pos) {}

namespace {

constexpr std::array<std::pair<std::string_view, TokenKind>, 7> kKeywords{{
    {"server", TokenKind::KwServer},
    {"var", TokenKind::KwVar},
    {"thread", TokenKind::KwThread},
    {"loop", TokenKind::KwLoop},
    {"match", TokenKind::KwMatch},
    {"return", TokenKind::KwReturn},
    {"const", TokenKind::KwConst},
}};

// Longest match first.
constexpr std::array<std::pair<std::string_view, TokenKind>, 25> kPunct{{
    {"..", TokenKind::DotDot}, {"->", TokenKind::Arrow},   {"=>", TokenKind::FatArrow},
    {"==", TokenKind::Eq},     {"!=", TokenKind::Ne},      {"<=", TokenKind::Le},
    {">=", TokenKind::Ge},     {"{", TokenKind::LBrace},   {"}", TokenKind::RBrace},
    {"(", TokenKind::LParen},  {")", TokenKind::RParen},   {"[", TokenKind::LBracket},
    {"]", TokenKind::RBracket}, {";", TokenKind::Semicolon}, {",", TokenKind::Comma},
    {":", TokenKind::Colon},   {".", TokenKind::Dot},      {"|", TokenKind::Pipe},
    {"=", TokenKind::Assign},  {"<", TokenKind::Lt},       {">", TokenKind::Gt},
    {"+", TokenKind::Plus},    {"-", TokenKind::Minus},    {"*", TokenKind::Star},
    {"/", TokenKind::Slash},
}};

bool ident_start(char c) { return std::isalpha(static_cast<unsigned char>(c)) != 0; }
bool ident_char(char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_'; }

}  // namespace

std::string_view spelling(TokenKind kind) {
  switch (kind) {
    case TokenKind::Ident: return "identifier";
    case TokenKind::Int: return "integer";
    case TokenKind::Atom: return "atom";
    case TokenKind::End: return "end of input";
    default: break;
  }
  for (const auto& [text, k] : kKeywords)
    if (k == kind) return text;
  for (const auto& [text, k] : kPunct)
    if (k == kind) return text;
  return "?";
}

std::vector<Token> tokenize(std::string_view src) {
  std::vector<Token> out;
  int line = 1;
  int col = 1;
  std::size_t i = 0;
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

  while (i < src.size()) {
    char c = src[i];
    if (std::isspace(static_cast<unsigned char>(c))) {
      advance(1);
      continue;
    }
    if (src.substr(i, 2) == "//") {
      while (i < src.size() && src[i] != '\n') advance(1);
      continue;
    }
    Token t;
    t.pos = SourcePos{line, col};
    if (ident_start(c)) {
      std::size_t j = i;
      while (j < src.size() && ident_char(src[j])) ++j;
      t.text = std::string(src.substr(i, j - i));
      t.kind = TokenKind::Ident;
      for (const auto& [kw, k] : kKeywords)
        if (kw == t.text) t.kind = k;
      advance(j - i);
    } else if (std::isdigit(static_cast<unsigned char>(c))) {
      std::size_t j = i;
      while (j < src.size() && std::isdigit(static_cast<unsigned char>(src[j]))) ++j;
      t.kind = TokenKind::Int;
      t.text = std::string(src.substr(i, j - i));
      advance(j - i);
    } else if (c == ':' && i + 1 < src.size() && ident_start(src[i + 1])) {
      std::size_t j = i + 1;
      while (j < src.size() && ident_char(src[j])) ++j;
      t.kind = TokenKind::Atom;
      t.text = std::string(src.substr(i + 1, j - i - 1));
      advance(j - i);
    } else {
      bool matched = false;
      for (const auto& [p, k] : kPunct) {
        if (src.substr(i, p.size()) == p) {
          t.kind = k;
          t.text = std::string(p);
          advance(p.size());
          matched = true;
          break;
        }
      }
      if (!matched) throw SyntaxError(std::string("illegal character '") + c + "'", t.pos);
    }
    out.push_back(std::move(t));
  }
  return out;
}

std::string detokenize(const std::vector<Token>& tokens) {
  std::string out;
  for (const Token& t : tokens) {
    if (!out.empty()) out += ' ';
    out += t.kind == TokenKind::Atom ? ":" + t.text : t.text;
  }
  return out;
}

}  // namespace rybu::lang
