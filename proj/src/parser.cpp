// Recursive-descent parser and precedence-aware printer for the ASCII syntax.
//
//   iff   := imp ('<->' imp)*
//   imp   := or ('->' imp)?
//   or    := and ('|' and)*
//   and   := unary ('&' unary)*
//   unary := '~' unary | '[' term ']' unary | '<' term '>' unary
//          | 'box' unary | 'dia' unary | atom
//   atom  := 'true' | 'false' | 'k' '(' name ',' term ')' | ident | '(' iff ')'
//   term  := ident | '"' chars '"' | '(' term ',' term ')'

#include <cctype>
#include <regex>

#include "liip/syntax.hpp"

namespace liip {

namespace {

enum class Tok {
  End, Ident, String, LParen, RParen, LBrack, RBrack, Lt, Gt, Comma,
  Not, And, Or, Imp, Iff,
};

struct Token {
  Tok kind;
  std::string text;
  std::size_t pos;
};

bool ident_start(char c) { return std::isalpha(static_cast<unsigned char>(c)) || c == '_'; }
bool ident_char(char c) {
  return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '\'';
}

std::vector<Token> lex(const std::string& s) {
  std::vector<Token> out;
  std::size_t i = 0;
  auto starts = [&](const char* lit) { return s.compare(i, std::char_traits<char>::length(lit), lit) == 0; };
  while (i < s.size()) {
    char c = s[i];
    if (std::isspace(static_cast<unsigned char>(c))) {
      ++i;
      continue;
    }
    std::size_t start = i;
    auto push = [&](Tok k, std::size_t len) {
      out.push_back({k, s.substr(start, len), start});
      i += len;
    };
    if (starts("<->")) push(Tok::Iff, 3);
    else if (starts("->")) push(Tok::Imp, 2);
    else if (starts("\xE2\x86\x94")) push(Tok::Iff, 3);   // ↔
    else if (starts("\xE2\x86\x92")) push(Tok::Imp, 3);   // →
    else if (starts("\xC2\xAC")) push(Tok::Not, 2);       // ¬
    else if (starts("\xE2\x88\xA7")) push(Tok::And, 3);   // ∧
    else if (starts("\xE2\x88\xA8")) push(Tok::Or, 3);    // ∨
    else if (starts("\xE2\x96\xA0")) {                    // ■
      out.push_back({Tok::Ident, "box", start});
      i += 3;
    } else if (starts("\xE2\x97\x87")) {                  // ◇
      out.push_back({Tok::Ident, "dia", start});
      i += 3;
    }
    else if (c == '(') push(Tok::LParen, 1);
    else if (c == ')') push(Tok::RParen, 1);
    else if (c == '[') push(Tok::LBrack, 1);
    else if (c == ']') push(Tok::RBrack, 1);
    else if (c == '<') push(Tok::Lt, 1);
    else if (c == '>') push(Tok::Gt, 1);
    else if (c == ',') push(Tok::Comma, 1);
    else if (c == '~' || c == '!') push(Tok::Not, 1);
    else if (c == '&') push(Tok::And, 1);
    else if (c == '|') push(Tok::Or, 1);
    else if (c == '"') {
      std::size_t j = i + 1;
      while (j < s.size() && s[j] != '"') ++j;
      if (j >= s.size()) throw ParseError("unterminated data literal", start);
      out.push_back({Tok::String, s.substr(i + 1, j - i - 1), start});
      i = j + 1;
    } else if (ident_start(c)) {
      std::size_t j = i;
      while (j < s.size() && ident_char(s[j])) ++j;
      push(Tok::Ident, j - i);
    } else {
      throw ParseError(std::string("unexpected character '") + c + "'", start);
    }
  }
  out.push_back({Tok::End, "", s.size()});
  return out;
}

const std::regex& formula_meta_re() {
  static const std::regex re("(phi|psi|chi)[0-9']*");
  return re;
}

class Parser {
 public:
  Parser(const std::string& text, const ParseOptions& opts) : toks_(lex(text)), opts_(opts) {}

  Formula formula() {
    Formula f = parse_iff();
    expect_end();
    return f;
  }

  Term term_only() {
    Term t = parse_term();
    expect_end();
    return t;
  }

 private:
  const Token& peek() const { return toks_[pos_]; }
  Token next() { return toks_[pos_++]; }
  bool accept(Tok k) {
    if (peek().kind != k) return false;
    ++pos_;
    return true;
  }
  Token expect(Tok k, const char* what) {
    if (peek().kind != k) throw ParseError(std::string("expected ") + what, peek().pos);
    return next();
  }
  void expect_end() {
    if (peek().kind != Tok::End) throw ParseError("unexpected trailing input '" + peek().text + "'", peek().pos);
  }

  Formula parse_iff() {
    Formula f = parse_imp();
    while (accept(Tok::Iff)) f = Formula::iff(f, parse_imp());
    return f;
  }

  Formula parse_imp() {
    Formula f = parse_or();
    if (accept(Tok::Imp)) return Formula::implies(f, parse_imp());
    return f;
  }

  Formula parse_or() {
    Formula f = parse_and();
    while (accept(Tok::Or)) f = Formula::disj(f, parse_and());
    return f;
  }

  Formula parse_and() {
    Formula f = parse_unary();
    while (accept(Tok::And)) f = Formula::conj(f, parse_unary());
    return f;
  }

  Formula parse_unary() {
    const Token& t = peek();
    if (accept(Tok::Not)) return Formula::neg(parse_unary());
    if (accept(Tok::LBrack)) {
      Term m = parse_term();
      expect(Tok::RBrack, "']'");
      return Formula::proves(m, parse_unary());
    }
    if (accept(Tok::Lt)) {
      Term m = parse_term();
      expect(Tok::Gt, "'>'");
      return Formula::diamond(m, parse_unary());
    }
    if (t.kind == Tok::Ident && t.text == "box") {
      next();
      return Formula::box(parse_unary());
    }
    if (t.kind == Tok::Ident && t.text == "dia") {
      next();
      return Formula::dia(parse_unary());
    }
    return parse_atom();
  }

  Formula parse_atom() {
    Token t = next();
    switch (t.kind) {
      case Tok::LParen: {
        Formula f = parse_iff();
        expect(Tok::RParen, "')'");
        return f;
      }
      case Tok::Ident:
        if (t.text == "true") return Formula::top();
        if (t.text == "false") return Formula::bottom();
        if (t.text == "k" && peek().kind == Tok::LParen) {
          next();
          Term a = parse_agent();
          expect(Tok::Comma, "','");
          Term m = parse_term();
          expect(Tok::RParen, "')'");
          return Formula::knows(a, m);
        }
        if (t.text == kCM) throw ParseError("CM is an agent and cannot be used as a proposition", t.pos);
        if (opts_.schema && std::regex_match(t.text, formula_meta_re())) return Formula::meta(t.text);
        return Formula::var(t.text);
      default:
        throw ParseError(t.kind == Tok::End ? "unexpected end of input" : "unexpected token '" + t.text + "'",
                         t.pos);
    }
  }

  Term name_term(const Token& t) const {
    if (t.text == kCM) return Term::cm();
    if (opts_.schema && std::isupper(static_cast<unsigned char>(t.text[0]))) return Term::meta(t.text);
    return Term::agent(t.text);
  }

  Term parse_agent() {
    Token t = expect(Tok::Ident, "agent name");
    Term a = name_term(t);
    if (a.is_agent() && opts_.agents && !opts_.agents->count(a.name()))
      throw ParseError("unknown agent '" + a.name() + "'", t.pos);
    return a;
  }

  Term parse_term() {
    Token t = next();
    switch (t.kind) {
      case Tok::Ident:
        return name_term(t);
      case Tok::String:
        return Term::data(t.text);
      case Tok::LParen: {
        Term l = parse_term();
        expect(Tok::Comma, "',' in pair");
        Term r = parse_term();
        expect(Tok::RParen, "')'");
        return Term::pair(l, r);
      }
      default:
        throw ParseError("expected a message term", t.pos);
    }
  }

  std::vector<Token> toks_;
  std::size_t pos_ = 0;
  const ParseOptions& opts_;
};

// ---------------------------------------------------------------- printer

// Binding strength of the printed top-level operator; lower binds tighter.
enum Level { kUnary = 0, kAnd = 1, kOr = 2, kImp = 3, kIff = 4 };

struct Printer {
  bool sugar;

  static bool is_top(const Formula& f) {
    return f.kind() == Formula::Kind::Knows && f.agent().is_cm() && f.term().is_cm();
  }

  // Matches ~~(k(CM,M) & phi).
  static bool as_diamond(const Formula& f, Term& m, Formula& body) {
    if (f.kind() != Formula::Kind::Not || f.sub().kind() != Formula::Kind::Not) return false;
    const Formula& c = f.sub().sub();
    if (c.kind() != Formula::Kind::And) return false;
    const Formula& k = c.lhs();
    if (k.kind() != Formula::Kind::Knows || !k.agent().is_cm()) return false;
    m = k.term();
    body = c.rhs();
    return true;
  }

  static bool as_iff(const Formula& f, Formula& a, Formula& b) {
    if (f.kind() != Formula::Kind::And) return false;
    const Formula& l = f.lhs();
    const Formula& r = f.rhs();
    if (l.kind() != Formula::Kind::Implies || r.kind() != Formula::Kind::Implies) return false;
    if (l.lhs() != r.rhs() || l.rhs() != r.lhs()) return false;
    a = l.lhs();
    b = l.rhs();
    return true;
  }

  std::string wrap(const Formula& f, int max_level) const {
    int lvl;
    std::string s = print(f, lvl);
    return lvl > max_level ? "(" + s + ")" : s;
  }

  std::string print(const Formula& f, int& lvl) const {
    using K = Formula::Kind;
    lvl = kUnary;
    if (sugar) {
      Term m;
      Formula a, b;
      if (is_top(f)) return "true";
      if (f.kind() == K::Not && is_top(f.sub())) return "false";
      if (as_diamond(f, m, a)) return "<" + render(m) + ">" + wrap(a, kUnary);
      if (as_iff(f, a, b)) {
        lvl = kIff;
        return wrap(a, kImp) + " <-> " + wrap(b, kImp);
      }
      if (f.kind() == K::Not && f.sub().kind() == K::Not) return "dia " + wrap(f.sub().sub(), kUnary);
      if (f.kind() == K::Proves && f.term().is_cm()) return "box " + wrap(f.sub(), kUnary);
    }
    switch (f.kind()) {
      case K::Var:
      case K::Meta:
        return f.name();
      case K::Knows:
        return "k(" + render(f.agent()) + "," + render(f.term()) + ")";
      case K::Not:
        return "~" + wrap(f.sub(), kUnary);
      case K::Proves:
        return "[" + render(f.term()) + "]" + wrap(f.sub(), kUnary);
      case K::And:
        lvl = kAnd;
        return wrap(f.lhs(), kAnd) + " & " + wrap(f.rhs(), kUnary);
      case K::Or:
        lvl = kOr;
        return wrap(f.lhs(), kOr) + " | " + wrap(f.rhs(), kAnd);
      case K::Implies:
        lvl = kImp;
        return wrap(f.lhs(), kOr) + " -> " + wrap(f.rhs(), kImp);
    }
    return {};
  }
};

}  // namespace

Formula parse_formula(const std::string& text, const ParseOptions& opts) {
  return Parser(text, opts).formula();
}

Term parse_term(const std::string& text, const ParseOptions& opts) {
  return Parser(text, opts).term_only();
}

std::string render(const Term& t) {
  switch (t.kind()) {
    case Term::Kind::Agent:
    case Term::Kind::Meta:
      return t.name();
    case Term::Kind::Data:
      return "\"" + t.name() + "\"";
    case Term::Kind::Pair:
      return "(" + render(t.left()) + "," + render(t.right()) + ")";
  }
  return {};
}

std::string render(const Formula& f, bool sugar) {
  int lvl;
  return Printer{sugar}.print(f, lvl);
}

}  // namespace liip
