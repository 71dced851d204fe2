#include "rybu/lang/parser.hpp"

namespace rybu::lang {

namespace {

class Parser {
 public:
  explicit Parser(const std::vector<Token>& tokens) : toks_(tokens) {
    end_.kind = TokenKind::End;
    if (!toks_.empty()) end_.pos = toks_.back().pos;
  }

  RybuProgram program() {
    RybuProgram p;
    while (!at(TokenKind::End)) {
      switch (peek().kind) {
        case TokenKind::KwConst: p.consts.push_back(const_decl()); break;
        case TokenKind::KwServer: p.servers.push_back(server_decl()); break;
        case TokenKind::KwVar: p.instances.push_back(instance_decl()); break;
        case TokenKind::KwThread: p.threads.push_back(thread_decl()); break;
        default: fail("expected 'const', 'server', 'var' or 'thread'");
      }
    }
    return p;
  }

 private:
  const Token& peek(std::size_t k = 0) const { return pos_ + k < toks_.size() ? toks_[pos_ + k] : end_; }
  bool at(TokenKind k) const { return peek().kind == k; }
  const Token& next() {
    const Token& t = peek();
    if (pos_ < toks_.size()) ++pos_;
    return t;
  }
  bool accept(TokenKind k) {
    if (!at(k)) return false;
    next();
    return true;
  }

  [[noreturn]] void fail(const std::string& expected) const {
    const Token& t = peek();
    std::string found = t.kind == TokenKind::End ? "end of input"
                                                  : "'" + (t.kind == TokenKind::Atom ? ":" + t.text : t.text) + "'";
    throw SyntaxError(expected + ", found " + found, t.pos);
  }

  const Token& expect(TokenKind k) {
    if (!at(k)) fail("expected '" + std::string(spelling(k)) + "'");
    return next();
  }

  std::string ident() {
    if (!at(TokenKind::Ident)) fail("expected identifier");
    return next().text;
  }

  ConstDecl const_decl() {
    ConstDecl c;
    c.pos = expect(TokenKind::KwConst).pos;
    c.name = ident();
    expect(TokenKind::Assign);
    c.value = expr();
    expect(TokenKind::Semicolon);
    return c;
  }

  VarTypePtr type() {
    SourcePos pos = peek().pos;
    VarTypePtr base;
    if (accept(TokenKind::LParen)) {
      base = type();
      expect(TokenKind::RParen);
    } else if (accept(TokenKind::LBrace)) {
      auto t = std::make_shared<VarType>();
      t->kind = VarType::Kind::Enum;
      t->pos = pos;
      do {
        if (at(TokenKind::Ident) || at(TokenKind::Atom)) {
          t->atoms.push_back(next().text);
        } else {
          fail("expected enumeration atom");
        }
      } while (accept(TokenKind::Comma));
      expect(TokenKind::RBrace);
      base = t;
    } else {
      auto t = std::make_shared<VarType>();
      t->kind = VarType::Kind::IntRange;
      t->pos = pos;
      t->min = additive();
      expect(TokenKind::DotDot);
      t->max = additive();
      base = t;
    }
    while (at(TokenKind::LBracket)) {
      SourcePos vpos = next().pos;
      auto v = std::make_shared<VarType>();
      v->kind = VarType::Kind::Vector;
      v->element = base;
      v->length = expr();
      v->pos = vpos;
      expect(TokenKind::RBracket);
      base = v;
    }
    return base;
  }

  ServerDecl server_decl() {
    ServerDecl s;
    s.pos = expect(TokenKind::KwServer).pos;
    s.name = ident();
    expect(TokenKind::LBrace);
    while (!accept(TokenKind::RBrace)) {
      if (at(TokenKind::KwVar)) {
        VarDecl v;
        v.pos = next().pos;
        v.name = ident();
        expect(TokenKind::Colon);
        v.type = type();
        expect(TokenKind::Semicolon);
        s.vars.push_back(std::move(v));
      } else if (at(TokenKind::LBrace)) {
        s.actions.push_back(action());
      } else {
        fail("expected 'var', '{' or '}'");
      }
    }
    return s;
  }

  RybuAction action() {
    RybuAction a;
    a.pos = expect(TokenKind::LBrace).pos;
    a.service = ident();
    if (accept(TokenKind::Pipe)) a.predicate = expr();
    expect(TokenKind::RBrace);
    expect(TokenKind::Arrow);
    expect(TokenKind::LBrace);
    while (!at(TokenKind::KwReturn)) {
      Update u;
      u.pos = peek().pos;
      u.var = ident();
      if (accept(TokenKind::LBracket)) {
        u.index = expr();
        expect(TokenKind::RBracket);
      }
      expect(TokenKind::Assign);
      u.value = expr();
      expect(TokenKind::Semicolon);
      a.updates.push_back(std::move(u));
    }
    expect(TokenKind::KwReturn);
    if (!at(TokenKind::Atom)) fail("expected return atom");
    a.return_value = next().text;
    accept(TokenKind::Semicolon);
    expect(TokenKind::RBrace);
    return a;
  }

  InstanceDecl instance_decl() {
    InstanceDecl d;
    d.pos = expect(TokenKind::KwVar).pos;
    d.name = ident();
    expect(TokenKind::Assign);
    d.server = ident();
    expect(TokenKind::LParen);
    expect(TokenKind::RParen);
    if (accept(TokenKind::LBrace)) {
      while (!at(TokenKind::RBrace)) {
        Initializer init;
        init.pos = peek().pos;
        init.var = ident();
        expect(TokenKind::Assign);
        init.value = init_value();
        d.init.push_back(std::move(init));
        if (!accept(TokenKind::Comma) && !accept(TokenKind::Semicolon)) break;
      }
      expect(TokenKind::RBrace);
    }
    expect(TokenKind::Semicolon);
    return d;
  }

  ExprPtr init_value() {
    if (at(TokenKind::LBracket)) {
      SourcePos pos = next().pos;
      std::vector<ExprPtr> elems;
      if (!at(TokenKind::RBracket)) {
        do {
          elems.push_back(init_value());
        } while (accept(TokenKind::Comma));
      }
      expect(TokenKind::RBracket);
      return Expr::vector(std::move(elems), pos);
    }
    return expr();
  }

  ThreadDecl thread_decl() {
    ThreadDecl t;
    t.pos = expect(TokenKind::KwThread).pos;
    t.name = ident();
    expect(TokenKind::LParen);
    if (!at(TokenKind::RParen)) {
      do {
        t.params.push_back(ident());
      } while (accept(TokenKind::Comma));
    }
    expect(TokenKind::RParen);
    t.body = block();
    return t;
  }

  std::vector<Stmt> block() {
    expect(TokenKind::LBrace);
    std::vector<Stmt> out;
    while (!accept(TokenKind::RBrace)) out.push_back(stmt());
    return out;
  }

  void call_target(std::string& instance, std::string& service) {
    instance = ident();
    expect(TokenKind::Dot);
    service = ident();
    expect(TokenKind::LParen);
    expect(TokenKind::RParen);
  }

  Stmt stmt() {
    SourcePos pos = peek().pos;
    if (accept(TokenKind::KwLoop)) return Stmt::loop(block(), pos);
    if (accept(TokenKind::KwMatch)) {
      Stmt s = Stmt::match({}, {}, {}, pos);
      call_target(s.instance, s.service);
      expect(TokenKind::LBrace);
      while (!accept(TokenKind::RBrace)) {
        MatchArm arm;
        arm.pos = peek().pos;
        if (!at(TokenKind::Atom)) fail("expected match arm atom");
        arm.atom = next().text;
        expect(TokenKind::FatArrow);
        if (at(TokenKind::LBrace)) {
          arm.body = block();
        } else {
          arm.body.push_back(stmt());
        }
        accept(TokenKind::Comma);
        s.arms.push_back(std::move(arm));
      }
      return s;
    }
    if (at(TokenKind::Ident)) {
      Stmt s = Stmt::call({}, {}, pos);
      call_target(s.instance, s.service);
      expect(TokenKind::Semicolon);
      return s;
    }
    fail("expected statement ('loop', 'match' or a call)");
  }

  static bool comparison(TokenKind k, BinaryOp& op) {
    switch (k) {
      case TokenKind::Eq: op = BinaryOp::Eq; return true;
      case TokenKind::Ne: op = BinaryOp::Ne; return true;
      case TokenKind::Lt: op = BinaryOp::Lt; return true;
      case TokenKind::Gt: op = BinaryOp::Gt; return true;
      case TokenKind::Le: op = BinaryOp::Le; return true;
      case TokenKind::Ge: op = BinaryOp::Ge; return true;
      default: return false;
    }
  }

  ExprPtr expr() {
    ExprPtr lhs = additive();
    BinaryOp op;
    if (comparison(peek().kind, op)) {
      SourcePos pos = next().pos;
      ExprPtr rhs = additive();
      BinaryOp again;
      if (comparison(peek().kind, again)) fail("comparisons do not chain; expected end of expression");
      return Expr::binary(op, std::move(lhs), std::move(rhs), pos);
    }
    return lhs;
  }

  ExprPtr additive() {
    ExprPtr lhs = unary();
    for (;;) {
      reject_multiplicative();
      if (at(TokenKind::Plus) || at(TokenKind::Minus)) {
        const Token& t = next();
        BinaryOp op = t.kind == TokenKind::Plus ? BinaryOp::Add : BinaryOp::Sub;
        lhs = Expr::binary(op, std::move(lhs), unary(), t.pos);
      } else {
        return lhs;
      }
    }
  }

  void reject_multiplicative() const {
    if (at(TokenKind::Star) || at(TokenKind::Slash))
      throw SyntaxError("operator '" + peek().text + "' is not supported; only '+' and '-' are available",
                        peek().pos);
  }

  ExprPtr unary() {
    if (at(TokenKind::Minus)) {
      SourcePos pos = next().pos;
      return Expr::negate(unary(), pos);
    }
    return primary();
  }

  ExprPtr primary() {
    const Token& t = peek();
    switch (t.kind) {
      case TokenKind::Int: {
        next();
        try {
          return Expr::integer(std::stoll(t.text), t.pos);
        } catch (const std::out_of_range&) {
          throw SyntaxError("integer literal out of range", t.pos);
        }
      }
      case TokenKind::Atom: next(); return Expr::atom(t.text, t.pos);
      case TokenKind::Ident: {
        next();
        if (accept(TokenKind::LBracket)) {
          ExprPtr i = expr();
          expect(TokenKind::RBracket);
          return Expr::index(t.text, std::move(i), t.pos);
        }
        return Expr::ref(t.text, t.pos);
      }
      case TokenKind::LParen: {
        next();
        ExprPtr e = expr();
        expect(TokenKind::RParen);
        return e;
      }
      default: fail("expected expression");
    }
  }

  const std::vector<Token>& toks_;
  std::size_t pos_ = 0;
  Token end_;
};

}  // namespace

RybuProgram parse_program(const std::vector<Token>& tokens) { return Parser(tokens).program(); }

RybuProgram parse_program(std::string_view source) { return parse_program(tokenize(source)); }

}  // namespace rybu::lang
