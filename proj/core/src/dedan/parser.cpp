#include <cctype>
#include <vector>

#include "rybu/dedan/text.hpp"

namespace rybu::dedan {

namespace {

enum class Tok { Ident, Int, Punct, End };

struct Token {
  Tok kind = Tok::End;
  std::string text;
  int line = 1;
  int column = 1;
};

std::vector<Token> lex(std::string_view src) {
  std::vector<Token> out;
  int line = 1;
  int col = 1;
  std::size_t i = 0;
  auto advance = [&](std::size_t n) {
    for (std::size_t k = 0; k < n; ++k, ++i) {
      if (src[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
  };
  while (i < src.size()) {
    unsigned char c = static_cast<unsigned char>(src[i]);
    if (std::isspace(c)) {
      advance(1);
      continue;
    }
    Token t;
    t.line = line;
    t.column = col;
    if (std::isalpha(c)) {
      std::size_t j = i;
      while (j < src.size() && (std::isalnum(static_cast<unsigned char>(src[j])) || src[j] == '_')) ++j;
      t.kind = Tok::Ident;
      t.text = std::string(src.substr(i, j - i));
      advance(j - i);
    } else if (std::isdigit(c)) {
      std::size_t j = i;
      while (j < src.size() && std::isdigit(static_cast<unsigned char>(src[j]))) ++j;
      t.kind = Tok::Int;
      t.text = std::string(src.substr(i, j - i));
      advance(j - i);
    } else {
      static constexpr std::string_view two[] = {"->", ".."};
      t.kind = Tok::Punct;
      for (std::string_view p : two) {
        if (src.substr(i, 2) == p) t.text = std::string(p);
      }
      if (t.text.empty()) {
        static constexpr std::string_view one = "{}()[]<>=.,;:+-";
        if (one.find(static_cast<char>(c)) == std::string_view::npos)
          throw DedanError(std::string("illegal character '") + static_cast<char>(c) + "'", line, col);
        t.text = std::string(1, static_cast<char>(c));
      }
      advance(t.text.size());
    }
    out.push_back(std::move(t));
  }
  Token end;
  end.line = line;
  end.column = col;
  out.push_back(end);
  return out;
}

class Parser {
 public:
  explicit Parser(std::vector<Token> tokens) : toks_(std::move(tokens)) {}

  DedanUnit unit() {
    DedanUnit u;
    keyword("system");
    u.system_name = ident();
    expect(";");
    for (;;) {
      if (at_word("server") && peek(1).text == ":") {
        u.server_types.push_back(server_type());
      } else if (at_word("agents")) {
        next();
        instances(u.agents, false);
      } else if (at_word("servers")) {
        next();
        instances(u.servers, true);
      } else if (at_word("init")) {
        break;
      } else {
        error("expected 'server:', 'agents:', 'servers:' or 'init'");
      }
    }
    keyword("init");
    expect("->");
    expect("{");
    while (!at("}")) {
      InitItem item;
      item.repeaters = repeaters();
      init_item(item);
      u.init.push_back(std::move(item));
      if (!accept(",") && !accept(";")) break;
    }
    expect("}");
    expect(".");
    if (peek().kind != Tok::End) error("unexpected text after the init block");
    return u;
  }

 private:
  const Token& peek(std::size_t k = 0) const {
    return toks_[std::min(pos_ + k, toks_.size() - 1)];
  }
  const Token& next() {
    const Token& t = toks_[pos_];
    if (pos_ + 1 < toks_.size()) ++pos_;
    return t;
  }
  bool at(std::string_view p) const { return peek().kind == Tok::Punct && peek().text == p; }
  bool at_word(std::string_view w) const { return peek().kind == Tok::Ident && peek().text == w; }
  bool accept(std::string_view p) {
    if (!at(p)) return false;
    next();
    return true;
  }

  [[noreturn]] void error(const std::string& what) const {
    const Token& t = peek();
    std::string found = t.kind == Tok::End ? "end of input" : "'" + t.text + "'";
    throw DedanError(what + ", found " + found, t.line, t.column);
  }

  void expect(std::string_view p) {
    if (!accept(p)) error("expected '" + std::string(p) + "'");
  }
  void keyword(std::string_view w) {
    if (!at_word(w)) error("expected '" + std::string(w) + "'");
    next();
  }
  std::string ident() {
    if (peek().kind != Tok::Ident) error("expected identifier");
    return next().text;
  }
  int integer() {
    bool negative = accept("-");
    if (peek().kind != Tok::Int) error("expected integer");
    int v = std::stoi(next().text);
    return negative ? -v : v;
  }

  DeclName decl_name() {
    DeclName d;
    d.name = ident();
    if (accept("[")) {
      d.size = integer();
      if (*d.size < 1) error("vector size must be positive");
      expect("]");
    }
    return d;
  }

  Ref ref() {
    Ref r;
    r.name = ident();
    if (accept("[")) {
      IndexExpr e;
      if (peek().kind == Tok::Int) {
        e.offset = integer();
      } else {
        e.var = ident();
        if (at("+") || at("-")) {
          bool minus = next().text == "-";
          if (peek().kind != Tok::Int) error("expected integer offset");
          int k = std::stoi(next().text);
          e.offset = minus ? -k : k;
        }
      }
      expect("]");
      r.index = e;
    }
    return r;
  }

  std::vector<Repeater> repeaters() {
    std::vector<Repeater> out;
    while (accept("<")) {
      Repeater r;
      r.var = ident();
      expect("=");
      r.low = integer();
      expect("..");
      r.high = integer();
      expect(">");
      if (r.low > r.high) error("empty repeater range");
      out.push_back(r);
    }
    return out;
  }

  void decl_list(std::vector<DeclName>& out) {
    expect("{");
    while (!at("}")) {
      out.push_back(decl_name());
      if (!accept(",")) break;
    }
    expect("}");
  }

  ServerTypeDecl server_type() {
    ServerTypeDecl t;
    keyword("server");
    expect(":");
    t.name = ident();
    if (accept("(")) {
      while (!at(")")) {
        ParamKind kind;
        if (at_word("agents")) {
          kind = ParamKind::Agent;
        } else if (at_word("servers")) {
          kind = ParamKind::Server;
        } else {
          error("expected 'agents' or 'servers'");
        }
        next();
        do {
          t.formals.push_back(FormalParam{kind, decl_name()});
        } while (accept(","));
        if (!accept(";")) break;
      }
      expect(")");
    }
    accept(",");
    keyword("services");
    decl_list(t.services);
    accept(",");
    keyword("states");
    decl_list(t.states);
    accept(",");
    keyword("actions");
    expect("{");
    while (!at("}")) {
      t.actions.push_back(action());
      if (!accept(",")) break;
    }
    expect("}");
    expect(";");
    return t;
  }

  MessageRef message_tail(Ref first) {
    MessageRef m;
    m.agent = std::move(first);
    m.server = ref();
    expect(".");
    m.service = ref();
    return m;
  }

  ActionTemplate action() {
    ActionTemplate a;
    a.repeaters = repeaters();
    expect("{");
    Ref agent = ref();
    expect(".");
    a.input = message_tail(std::move(agent));
    expect(",");
    a.in_state.server = ref();
    expect(".");
    a.in_state.value = ref();
    expect("}");
    expect("->");
    expect("{");
    Ref first = ref();
    expect(".");
    Ref second = ref();
    if (accept(".")) {
      MessageRef out;
      out.agent = std::move(first);
      out.server = std::move(second);
      out.service = ref();
      a.output = std::move(out);
      expect(",");
      a.out_state.server = ref();
      expect(".");
      a.out_state.value = ref();
    } else {
      a.out_state.server = std::move(first);
      a.out_state.value = std::move(second);
    }
    expect("}");
    return a;
  }

  void instances(std::vector<InstanceDecl>& out, bool servers) {
    expect(":");
    do {
      InstanceDecl d;
      d.decl = decl_name();
      if (accept(":")) {
        if (!servers) error("agent declarations take no type");
        d.type = ident();
      }
      out.push_back(std::move(d));
    } while (accept(","));
    expect(";");
  }

  void init_item(InitItem& item) {
    Ref first = ref();
    if (accept("(")) {
      ServerInit s;
      s.server = std::move(first);
      while (!at(")")) {
        s.actuals.push_back(ref());
        if (!accept(",")) break;
      }
      expect(")");
      expect(".");
      s.state = ref();
      item.server = std::move(s);
      return;
    }
    expect(".");
    Ref second = ref();
    if (accept(".")) {
      MessageRef m;
      m.agent = std::move(first);
      m.server = std::move(second);
      m.service = ref();
      item.message = std::move(m);
    } else {
      item.server = ServerInit{std::move(first), {}, std::move(second)};
    }
  }

  std::vector<Token> toks_;
  std::size_t pos_ = 0;
};

}  // namespace

DedanUnit parse_dedan(std::string_view text) {
  Parser p(lex(text));
  DedanUnit unit = p.unit();
  check_unit(unit);
  return unit;
}

}  // namespace rybu::dedan
