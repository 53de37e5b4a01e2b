#include "wittdiff/poly.hpp"

namespace wittdiff {

namespace {

struct Lexer {
  const std::string& s;
  size_t pos = 0;
  int line = 1, col = 1;

  struct Tok {
    enum Kind { End, Int, Ident, Plus, Minus, Star, Caret, LParen, RParen } kind;
    long long ival = 0;
    std::string name;
    int line = 1, col = 1;
  };

  explicit Lexer(const std::string& str) : s(str) {}

  void bump() {
    if (s[pos] == '\n') {
      ++line;
      col = 1;
    } else {
      ++col;
    }
    ++pos;
  }

  Tok next() {
    while (pos < s.size() && (s[pos] == ' ' || s[pos] == '\t' || s[pos] == '\n' || s[pos] == '\r'))
      bump();
    Tok t;
    t.line = line;
    t.col = col;
    if (pos >= s.size()) {
      t.kind = Tok::End;
      return t;
    }
    char c = s[pos];
    if (c >= '0' && c <= '9') {
      long long v = 0;
      while (pos < s.size() && s[pos] >= '0' && s[pos] <= '9') {
        v = v * 10 + (s[pos] - '0');
        if (v > (1ll << 40)) throw ParseError("integer literal too large", t.line, t.col);
        bump();
      }
      t.kind = Tok::Int;
      t.ival = v;
      return t;
    }
    if ((c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || c == '_') {
      std::string name;
      while (pos < s.size() &&
             ((s[pos] >= 'a' && s[pos] <= 'z') || (s[pos] >= 'A' && s[pos] <= 'Z') ||
              (s[pos] >= '0' && s[pos] <= '9') || s[pos] == '_')) {
        name.push_back(s[pos]);
        bump();
      }
      t.kind = Tok::Ident;
      t.name = std::move(name);
      return t;
    }
    switch (c) {
      case '+': t.kind = Tok::Plus; break;
      case '-': t.kind = Tok::Minus; break;
      case '*': t.kind = Tok::Star; break;
      case '^': t.kind = Tok::Caret; break;
      case '(': t.kind = Tok::LParen; break;
      case ')': t.kind = Tok::RParen; break;
      default:
        throw ParseError(std::string("unexpected character '") + c + "'", t.line, t.col);
    }
    bump();
    return t;
  }
};

using Ast = std::unique_ptr<PolyAst>;

Ast mk(PolyAst::Kind k) {
  auto n = std::make_unique<PolyAst>();
  n->kind = k;
  return n;
}

struct Parser {
  Lexer lex;
  Lexer::Tok cur;
  const std::vector<std::string>& vars;

  Parser(const std::string& s, const std::vector<std::string>& v) : lex(s), vars(v) { cur = lex.next(); }

  void advance() { cur = lex.next(); }

  [[noreturn]] void fail(const std::string& msg) { throw ParseError(msg, cur.line, cur.col); }

  Ast parse_expr() {
    Ast left = parse_term();
    while (cur.kind == Lexer::Tok::Plus || cur.kind == Lexer::Tok::Minus) {
      auto k = cur.kind == Lexer::Tok::Plus ? PolyAst::Add : PolyAst::Sub;
      advance();
      Ast right = parse_term();
      Ast n = mk(k);
      n->a = std::move(left);
      n->b = std::move(right);
      left = std::move(n);
    }
    return left;
  }

  Ast parse_term() {
    Ast left = parse_factor();
    while (cur.kind == Lexer::Tok::Star) {
      advance();
      Ast right = parse_factor();
      Ast n = mk(PolyAst::Mul);
      n->a = std::move(left);
      n->b = std::move(right);
      left = std::move(n);
    }
    return left;
  }

  Ast parse_factor() {
    if (cur.kind == Lexer::Tok::Minus) {
      advance();
      Ast inner = parse_factor();
      Ast n = mk(PolyAst::Neg);
      n->a = std::move(inner);
      return n;
    }
    Ast base = parse_base();
    if (cur.kind == Lexer::Tok::Caret) {
      advance();
      if (cur.kind != Lexer::Tok::Int) fail("expected a nonnegative integer exponent after '^'");
      Ast n = mk(PolyAst::Pow);
      n->exp = cur.ival;
      advance();
      n->a = std::move(base);
      return n;
    }
    return base;
  }

  Ast parse_base() {
    switch (cur.kind) {
      case Lexer::Tok::Int: {
        Ast n = mk(PolyAst::Int);
        n->ival = cur.ival;
        advance();
        return n;
      }
      case Lexer::Tok::Ident: {
        if (cur.name == "p") {
          // reserved prime constant: encoded as Int with sentinel -1, resolved by eval wrapper
          Ast n = mk(PolyAst::Var);
          n->var = -1;
          advance();
          return n;
        }
        for (size_t i = 0; i < vars.size(); ++i)
          if (vars[i] == cur.name) {
            Ast n = mk(PolyAst::Var);
            n->var = static_cast<int>(i);
            advance();
            return n;
          }
        fail("unknown variable '" + cur.name + "'");
      }
      case Lexer::Tok::LParen: {
        advance();
        Ast inner = parse_expr();
        if (cur.kind != Lexer::Tok::RParen) fail("expected ')'");
        advance();
        return inner;
      }
      default:
        fail("expected a number, variable, or '('");
    }
  }
};

// Replaces the `p` sentinel (Var with index -1) by Int(p).
void resolve_prime(PolyAst& n, long p) {
  if (n.kind == PolyAst::Var && n.var == -1) {
    n.kind = PolyAst::Int;
    n.ival = p;
    n.var = 0;
    return;
  }
  if (n.a) resolve_prime(*n.a, p);
  if (n.b) resolve_prime(*n.b, p);
}

}  // namespace

std::unique_ptr<PolyAst> parse_poly_ast(const std::string& text, const std::vector<std::string>& vars) {
  for (const auto& v : vars)
    if (v == "p") throw StructuralError("variable name 'p' is reserved for the prime constant");
  Parser parser(text, vars);
  Ast root = parser.parse_expr();
  if (parser.cur.kind != Lexer::Tok::End)
    throw ParseError("trailing input after polynomial (hint: multiplication needs '*')",
                     parser.cur.line, parser.cur.col);
  return root;
}

void resolve_prime_constant(PolyAst& root, long p) { resolve_prime(root, p); }

}  // namespace wittdiff
