#include "dot_reader.hpp"

#include <algorithm>
#include <cctype>

namespace dot {

namespace {

struct Token {
  enum Kind { Id, Punct, End } kind;
  std::string text;
};

std::vector<Token> lex(const std::string& s) {
  std::vector<Token> out;
  std::size_t i = 0;
  while (i < s.size()) {
    const char c = s[i];
    if (std::isspace(static_cast<unsigned char>(c))) {
      ++i;
    } else if (c == '"') {
      std::string text;
      ++i;
      while (i < s.size() && s[i] != '"') {
        if (s[i] == '\\' && i + 1 < s.size()) {
          const char e = s[i + 1];
          text += e == 'n' ? '\n' : e;
          i += 2;
        } else {
          text += s[i++];
        }
      }
      if (i >= s.size()) throw ParseError("unterminated string");
      ++i;
      out.push_back({Token::Id, text});
    } else if (std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '.' || c == '-') {
      if (c == '-' && i + 1 < s.size() && s[i + 1] == '>') {
        out.push_back({Token::Punct, "->"});
        i += 2;
        continue;
      }
      std::size_t j = i;
      while (j < s.size() && (std::isalnum(static_cast<unsigned char>(s[j])) || s[j] == '_' || s[j] == '.')) ++j;
      if (j == i) throw ParseError(std::string("unexpected '") + c + "'");
      out.push_back({Token::Id, s.substr(i, j - i)});
      i = j;
    } else if (std::string("{}[];,=").find(c) != std::string::npos) {
      out.push_back({Token::Punct, std::string(1, c)});
      ++i;
    } else {
      throw ParseError(std::string("unexpected '") + c + "'");
    }
  }
  out.push_back({Token::End, ""});
  return out;
}

class Parser {
 public:
  explicit Parser(std::vector<Token> t) : t_(std::move(t)) {}

  Graph run() {
    Graph g;
    expect_word("digraph");
    if (peek().kind == Token::Id) g.name = next().text;
    expect("{");
    while (!is("}")) statement(g);
    expect("}");
    if (peek().kind != Token::End) throw ParseError("trailing input after graph");
    return g;
  }

 private:
  const Token& peek() const { return t_[pos_]; }
  const Token& next() { return t_[pos_++]; }
  bool is(const char* p) const { return peek().kind == Token::Punct && peek().text == p; }
  void expect(const char* p) {
    if (!is(p)) throw ParseError(std::string("expected '") + p + "' near '" + peek().text + "'");
    ++pos_;
  }
  void expect_word(const char* w) {
    if (peek().kind != Token::Id || peek().text != w) throw ParseError(std::string("expected ") + w);
    ++pos_;
  }
  std::string id() {
    if (peek().kind != Token::Id) throw ParseError("expected identifier near '" + peek().text + "'");
    return next().text;
  }

  std::map<std::string, std::string> attrs() {
    std::map<std::string, std::string> out;
    while (is("[")) {
      ++pos_;
      while (!is("]")) {
        std::string k = id();
        expect("=");
        out[k] = id();
        if (is(",") || is(";")) ++pos_;
      }
      expect("]");
    }
    return out;
  }

  void mention(Graph& g, const std::string& n) {
    if (std::find(g.nodes.begin(), g.nodes.end(), n) == g.nodes.end()) g.nodes.push_back(n);
  }

  void statement(Graph& g) {
    std::string first = id();
    if ((first == "node" || first == "edge" || first == "graph") && is("[")) {
      attrs();
    } else if (is("=")) {
      ++pos_;
      id();
    } else if (is("->")) {
      std::vector<std::string> chain{first};
      while (is("->")) {
        ++pos_;
        chain.push_back(id());
      }
      auto a = attrs();
      for (const auto& n : chain) mention(g, n);
      for (std::size_t k = 0; k + 1 < chain.size(); ++k) g.edges.push_back({chain[k], chain[k + 1], a});
    } else {
      mention(g, first);
      auto a = attrs();
      g.node_attrs[first].insert(a.begin(), a.end());
    }
    if (is(";")) ++pos_;
  }

  std::vector<Token> t_;
  std::size_t pos_ = 0;
};

}  // namespace

Graph parse(const std::string& text) { return Parser(lex(text)).run(); }

}  // namespace dot
