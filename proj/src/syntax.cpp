#include "liip/syntax.hpp"

#include <functional>

namespace liip {

namespace {

std::size_t mix(std::size_t h, std::size_t v) {
  return h ^ (v + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2));
}

}  // namespace

// ------------------------------------------------------------------ Term

Term::Term() : Term(agent(kCM)) {}

Term Term::agent(const std::string& name) {
  return Term(std::make_shared<const Node>(
      Node{Kind::Agent, name, {}, mix(11, std::hash<std::string>{}(name)), 1}));
}

Term Term::data(const std::string& name) {
  return Term(std::make_shared<const Node>(
      Node{Kind::Data, name, {}, mix(13, std::hash<std::string>{}(name)), 1}));
}

Term Term::meta(const std::string& name) {
  return Term(std::make_shared<const Node>(
      Node{Kind::Meta, name, {}, mix(17, std::hash<std::string>{}(name)), 1}));
}

Term Term::pair(const Term& l, const Term& r) {
  return Term(std::make_shared<const Node>(
      Node{Kind::Pair, {}, {l, r}, mix(mix(19, l.hash()), r.hash()), 1 + l.size() + r.size()}));
}

bool operator==(const Term& a, const Term& b) {
  if (a.n_ == b.n_) return true;
  if (a.hash() != b.hash() || a.kind() != b.kind()) return false;
  if (a.kind() == Term::Kind::Pair) return a.left() == b.left() && a.right() == b.right();
  return a.name() == b.name();
}

int Term::compare(const Term& a, const Term& b) {
  if (a.n_ == b.n_) return 0;
  if (a.kind() != b.kind()) return a.kind() < b.kind() ? -1 : 1;
  if (a.kind() == Kind::Pair) {
    int c = compare(a.left(), b.left());
    return c != 0 ? c : compare(a.right(), b.right());
  }
  int c = a.name().compare(b.name());
  return c < 0 ? -1 : (c > 0 ? 1 : 0);
}

// --------------------------------------------------------------- Formula

Formula Formula::make(Kind k, std::string name, std::vector<Term> t, std::vector<Formula> f) {
  std::size_t h = mix(static_cast<std::size_t>(k) * 31 + 7, std::hash<std::string>{}(name));
  std::size_t size = 1;
  for (const auto& x : t) h = mix(h, x.hash());
  for (const auto& x : f) {
    h = mix(h, x.hash());
    size += x.size();
  }
  return Formula(std::make_shared<const Node>(
      Node{k, std::move(name), std::move(t), std::move(f), h, size}));
}

Formula::Formula() : Formula(top()) {}

Formula Formula::var(const std::string& name) { return make(Kind::Var, name, {}, {}); }
Formula Formula::meta(const std::string& name) { return make(Kind::Meta, name, {}, {}); }
Formula Formula::knows(const Term& agent, const Term& msg) {
  return make(Kind::Knows, {}, {agent, msg}, {});
}
Formula Formula::conj(const Formula& a, const Formula& b) { return make(Kind::And, {}, {}, {a, b}); }
Formula Formula::disj(const Formula& a, const Formula& b) { return make(Kind::Or, {}, {}, {a, b}); }
Formula Formula::neg(const Formula& a) { return make(Kind::Not, {}, {}, {a}); }
Formula Formula::implies(const Formula& a, const Formula& b) {
  return make(Kind::Implies, {}, {}, {a, b});
}
Formula Formula::proves(const Term& m, const Formula& a) { return make(Kind::Proves, {}, {m}, {a}); }

Formula Formula::top() { return knows(Term::cm(), Term::cm()); }
Formula Formula::bottom() { return neg(top()); }
Formula Formula::iff(const Formula& a, const Formula& b) {
  return conj(implies(a, b), implies(b, a));
}
Formula Formula::box(const Formula& a) { return proves(Term::cm(), a); }
Formula Formula::dia(const Formula& a) { return neg(neg(a)); }
Formula Formula::diamond(const Term& m, const Formula& a) {
  return neg(neg(conj(knows(Term::cm(), m), a)));
}

bool operator==(const Formula& a, const Formula& b) {
  if (a.n_ == b.n_) return true;
  if (a.hash() != b.hash() || a.kind() != b.kind() || a.size() != b.size()) return false;
  if (a.n_->name != b.n_->name) return false;
  for (std::size_t i = 0; i < a.n_->t.size(); ++i)
    if (a.n_->t[i] != b.n_->t[i]) return false;
  for (std::size_t i = 0; i < a.n_->f.size(); ++i)
    if (a.n_->f[i] != b.n_->f[i]) return false;
  return true;
}

int Formula::compare(const Formula& a, const Formula& b) {
  if (a.n_ == b.n_) return 0;
  if (a.kind() != b.kind()) return a.kind() < b.kind() ? -1 : 1;
  if (int c = a.n_->name.compare(b.n_->name); c != 0) return c < 0 ? -1 : 1;
  for (std::size_t i = 0; i < a.n_->t.size(); ++i)
    if (int c = Term::compare(a.n_->t[i], b.n_->t[i]); c != 0) return c;
  for (std::size_t i = 0; i < a.n_->f.size(); ++i)
    if (int c = compare(a.n_->f[i], b.n_->f[i]); c != 0) return c;
  return 0;
}

// ------------------------------------------------------------- structure

namespace {

void close_into(const Formula& f, std::set<Formula>& out) {
  if (!out.insert(f).second) return;
  switch (f.kind()) {
    case Formula::Kind::Var:
    case Formula::Kind::Meta:
      break;
    case Formula::Kind::Knows:
      // A knowledge atom on a pair is equivalent to the conjunction of its
      // components, so those components count as subformulas too.
      if (f.term().is_pair()) {
        close_into(Formula::knows(f.agent(), f.term().left()), out);
        close_into(Formula::knows(f.agent(), f.term().right()), out);
      }
      if (!f.agent().is_cm()) close_into(Formula::knows(Term::cm(), f.term()), out);
      break;
    case Formula::Kind::Not:
      close_into(f.sub(), out);
      break;
    case Formula::Kind::And:
    case Formula::Kind::Or:
    case Formula::Kind::Implies:
      close_into(f.lhs(), out);
      close_into(f.rhs(), out);
      break;
    case Formula::Kind::Proves:
      close_into(f.sub(), out);
      close_into(Formula::knows(Term::cm(), f.term()), out);
      break;
  }
}

template <class Fn>
void walk(const Formula& f, Fn&& fn) {
  fn(f);
  switch (f.kind()) {
    case Formula::Kind::Not:
    case Formula::Kind::Proves:
      walk(f.sub(), fn);
      break;
    case Formula::Kind::And:
    case Formula::Kind::Or:
    case Formula::Kind::Implies:
      walk(f.lhs(), fn);
      walk(f.rhs(), fn);
      break;
    default:
      break;
  }
}

}  // namespace

std::set<Formula> subformula_closure(const Formula& f) {
  std::set<Formula> out;
  close_into(f, out);
  return out;
}

std::set<Formula> subformula_closure(const std::set<Formula>& fs) {
  std::set<Formula> out;
  for (const auto& f : fs) close_into(f, out);
  return out;
}

bool is_subformula_closed(const std::set<Formula>& fs) {
  for (const auto& f : fs)
    for (const auto& g : subformula_closure(f))
      if (!fs.count(g)) return false;
  return true;
}

void subterms(const Term& t, std::set<Term>& out) {
  if (!out.insert(t).second) return;
  if (t.is_pair()) {
    subterms(t.left(), out);
    subterms(t.right(), out);
  }
}

std::set<Term> proof_terms_of(const Formula& f) {
  std::set<Term> out;
  walk(f, [&](const Formula& g) {
    if (g.kind() == Formula::Kind::Knows || g.kind() == Formula::Kind::Proves) subterms(g.term(), out);
  });
  return out;
}

std::set<Term> modal_terms_of(const Formula& f) {
  std::set<Term> out;
  walk(f, [&](const Formula& g) {
    if (g.kind() == Formula::Kind::Proves) out.insert(g.term());
  });
  return out;
}

std::set<std::string> atoms_of(const Formula& f) {
  std::set<std::string> out;
  walk(f, [&](const Formula& g) {
    if (g.kind() == Formula::Kind::Var) out.insert(g.name());
  });
  return out;
}

std::set<AgentName> agents_of(const Formula& f) {
  std::set<AgentName> out;
  walk(f, [&](const Formula& g) {
    if (g.kind() == Formula::Kind::Knows && g.agent().is_agent()) out.insert(g.agent().name());
  });
  return out;
}

bool has_meta(const Formula& f) {
  bool found = false;
  std::function<bool(const Term&)> term_meta = [&](const Term& t) {
    if (t.is_meta()) return true;
    return t.is_pair() && (term_meta(t.left()) || term_meta(t.right()));
  };
  walk(f, [&](const Formula& g) {
    if (g.kind() == Formula::Kind::Meta) found = true;
    if (g.kind() == Formula::Kind::Knows && (term_meta(g.agent()) || term_meta(g.term()))) found = true;
    if (g.kind() == Formula::Kind::Proves && term_meta(g.term())) found = true;
  });
  return found;
}

int modal_depth(const Formula& f) {
  switch (f.kind()) {
    case Formula::Kind::Not:
      return modal_depth(f.sub());
    case Formula::Kind::Proves:
      return 1 + modal_depth(f.sub());
    case Formula::Kind::And:
    case Formula::Kind::Or:
    case Formula::Kind::Implies:
      return std::max(modal_depth(f.lhs()), modal_depth(f.rhs()));
    default:
      return 0;
  }
}

// -------------------------------------------------------- schema matching

const Term* SchemaInstantiation::lookup_term(const std::string& name) const {
  if (auto it = term_metavars.find(name); it != term_metavars.end()) return &it->second;
  if (auto it = agent_metavars.find(name); it != agent_metavars.end()) return &it->second;
  return nullptr;
}

namespace {

bool match_term(const Term& schema, const Term& target, bool agent_pos, SchemaInstantiation& inst) {
  switch (schema.kind()) {
    case Term::Kind::Meta: {
      if (agent_pos && !(target.is_agent() || target.is_meta())) return false;
      if (const Term* bound = inst.lookup_term(schema.name())) {
        if (*bound != target) return false;
        if (agent_pos && !inst.agent_metavars.count(schema.name())) {
          inst.term_metavars.erase(schema.name());
          inst.agent_metavars.emplace(schema.name(), target);
        }
        return true;
      }
      (agent_pos ? inst.agent_metavars : inst.term_metavars).emplace(schema.name(), target);
      return true;
    }
    case Term::Kind::Pair:
      return target.is_pair() && match_term(schema.left(), target.left(), false, inst) &&
             match_term(schema.right(), target.right(), false, inst);
    default:
      return schema == target;
  }
}

}  // namespace

bool match_into(const Formula& schema, const Formula& target, SchemaInstantiation& inst) {
  using K = Formula::Kind;
  if (schema.kind() == K::Meta) {
    auto it = inst.formula_metavars.find(schema.name());
    if (it != inst.formula_metavars.end()) return it->second == target;
    inst.formula_metavars.emplace(schema.name(), target);
    return true;
  }
  if (schema.kind() != target.kind()) return false;
  switch (schema.kind()) {
    case K::Var:
      return schema.name() == target.name();
    case K::Knows:
      return match_term(schema.agent(), target.agent(), true, inst) &&
             match_term(schema.term(), target.term(), false, inst);
    case K::Not:
      return match_into(schema.sub(), target.sub(), inst);
    case K::Proves:
      return match_term(schema.term(), target.term(), false, inst) &&
             match_into(schema.sub(), target.sub(), inst);
    case K::And:
    case K::Or:
    case K::Implies:
      return match_into(schema.lhs(), target.lhs(), inst) && match_into(schema.rhs(), target.rhs(), inst);
    case K::Meta:
      break;
  }
  return false;
}

std::optional<SchemaInstantiation> match_schema(const Formula& schema, const Formula& target) {
  SchemaInstantiation inst;
  if (!match_into(schema, target, inst)) return std::nullopt;
  return inst;
}

Term substitute(const Term& t, const SchemaInstantiation& inst) {
  switch (t.kind()) {
    case Term::Kind::Meta:
      if (const Term* b = inst.lookup_term(t.name())) return *b;
      return t;
    case Term::Kind::Pair: {
      Term l = substitute(t.left(), inst);
      Term r = substitute(t.right(), inst);
      if (l == t.left() && r == t.right()) return t;
      return Term::pair(l, r);
    }
    default:
      return t;
  }
}

Formula substitute(const Formula& f, const SchemaInstantiation& inst) {
  using K = Formula::Kind;
  switch (f.kind()) {
    case K::Var:
      return f;
    case K::Meta: {
      auto it = inst.formula_metavars.find(f.name());
      return it == inst.formula_metavars.end() ? f : it->second;
    }
    case K::Knows:
      return Formula::knows(substitute(f.agent(), inst), substitute(f.term(), inst));
    case K::Not:
      return Formula::neg(substitute(f.sub(), inst));
    case K::Proves:
      return Formula::proves(substitute(f.term(), inst), substitute(f.sub(), inst));
    case K::And:
      return Formula::conj(substitute(f.lhs(), inst), substitute(f.rhs(), inst));
    case K::Or:
      return Formula::disj(substitute(f.lhs(), inst), substitute(f.rhs(), inst));
    case K::Implies:
      return Formula::implies(substitute(f.lhs(), inst), substitute(f.rhs(), inst));
  }
  return f;
}

}  // namespace liip
