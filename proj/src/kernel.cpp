#include "liip/kernel.hpp"

#include <functional>
#include <optional>
#include <stdexcept>

#include "liip/ipl.hpp"

namespace liip {

void LemmaDatabase::add(Lemma lemma) {
  if (index_.count(lemma.name)) throw std::invalid_argument("lemma " + lemma.name + " is already registered");
  index_.emplace(lemma.name, order_.size());
  order_.push_back(std::move(lemma));
}

const Lemma* LemmaDatabase::find(const std::string& name) const {
  auto it = index_.find(name);
  return it == index_.end() ? nullptr : &order_[it->second];
}

namespace {

const char* const kLiipAxioms[][2] = {
    {"own-name", "k(A,A)"},
    {"pairing", "k(A,M) & k(A,N) <-> k(A,(M,N))"},
    {"self-knowledge", "[M]k(CM,M)"},
    {"K", "[M](phi -> psi) -> [M]phi -> [M]psi"},
    {"ET", "[M]phi -> k(CM,M) -> phi"},
    {"ID", "[M]phi -> <M>phi"},
    {"MM", "phi -> [M]phi"},
};

const char* const kIplAxioms[][2] = {
    {"IL1", "phi -> psi -> phi"},
    {"IL2", "(phi -> psi -> chi) -> (phi -> psi) -> phi -> chi"},
    {"IL3", "phi & psi -> phi"},
    {"IL4", "phi & psi -> psi"},
    {"IL5", "phi -> psi -> phi & psi"},
    {"IL6", "phi -> phi | psi"},
    {"IL7", "psi -> phi | psi"},
    {"IL8", "(phi -> chi) -> (psi -> chi) -> phi | psi -> chi"},
    {"IL9", "~phi -> phi -> psi"},
    {"IL10", "(phi -> psi) -> (phi -> ~psi) -> ~phi"},
};

std::string line_prefix(const ProofLine& l) { return "line " + std::to_string(l.label) + ": "; }

LineCheck fail(const ProofLine& l, const std::string& rule, const std::string& msg) {
  return {false, line_prefix(l) + rule + ": " + msg};
}

// Own-name instances k(A,A) occurring in f; IL steps may use them freely.
void own_name_facts(const Formula& f, std::vector<Formula>& out) {
  using K = Formula::Kind;
  switch (f.kind()) {
    case K::Knows:
      if (f.agent() == f.term()) out.push_back(f);
      break;
    case K::Not:
    case K::Proves:
      own_name_facts(f.sub(), out);
      break;
    case K::And:
    case K::Or:
    case K::Implies:
      own_name_facts(f.lhs(), out);
      own_name_facts(f.rhs(), out);
      break;
    default:
      break;
  }
}

bool binding_names_occur(const Formula& schema, const std::vector<std::string>& names, std::string& missing) {
  SchemaInstantiation probe;
  std::function<void(const Term&)> terms = [&](const Term& t) {
    if (t.is_meta()) probe.term_metavars.emplace(t.name(), t);
    if (t.is_pair()) {
      terms(t.left());
      terms(t.right());
    }
  };
  std::function<void(const Formula&)> walk = [&](const Formula& f) {
    using K = Formula::Kind;
    switch (f.kind()) {
      case K::Meta:
        probe.formula_metavars.emplace(f.name(), f);
        break;
      case K::Knows:
        terms(f.agent());
        terms(f.term());
        break;
      case K::Proves:
        terms(f.term());
        walk(f.sub());
        break;
      case K::Not:
        walk(f.sub());
        break;
      case K::And:
      case K::Or:
      case K::Implies:
        walk(f.lhs());
        walk(f.rhs());
        break;
      default:
        break;
    }
  };
  walk(schema);
  for (const auto& n : names)
    if (!probe.formula_metavars.count(n) && !probe.term_metavars.count(n)) {
      missing = n;
      return false;
    }
  return true;
}

const ProofLine* cited(const ProofScript& s, std::size_t index, int label, std::string& err) {
  if (label >= s.lines[index].label) {
    err = "cited line " + std::to_string(label) + " does not precede the current line";
    return nullptr;
  }
  for (std::size_t i = 0; i < index; ++i)
    if (s.lines[i].label == label) return &s.lines[i];
  err = "cited line " + std::to_string(label) + " does not exist";
  return nullptr;
}

}  // namespace

const std::map<std::string, Formula>& axiom_schemas() {
  static const std::map<std::string, Formula> schemas = [] {
    std::map<std::string, Formula> m;
    ParseOptions o;
    o.schema = true;
    for (const auto& a : kLiipAxioms) m.emplace(a[0], parse_formula(a[1], o));
    for (const auto& a : kIplAxioms) m.emplace(a[0], parse_formula(a[1], o));
    return m;
  }();
  return schemas;
}

bool is_liip_axiom(const std::string& name) {
  for (const auto& a : kLiipAxioms)
    if (name == a[0]) return true;
  return false;
}

LineCheck check_line(const ProofScript& s, std::size_t index, const LemmaDatabase& db) {
  const ProofLine& l = s.lines.at(index);
  const Justification& j = l.just;
  const Formula& cur = l.formula;
  std::string err;

  std::vector<const ProofLine*> refs;
  if (j.kind != Justification::Kind::Premise) {
    for (int c : j.cites) {
      const ProofLine* r = cited(s, index, c, err);
      if (!r) return fail(l, "citation", err);
      refs.push_back(r);
    }
  }

  switch (j.kind) {
    case Justification::Kind::Axiom: {
      auto it = axiom_schemas().find(j.name);
      if (it == axiom_schemas().end()) return fail(l, "axiom", "unknown axiom schema '" + j.name + "'");
      std::string missing;
      if (!binding_names_occur(it->second, j.bound, missing))
        return fail(l, "axiom " + j.name, "metavariable '" + missing + "' does not occur in the schema");
      SchemaInstantiation inst = j.bindings;
      if (!match_into(it->second, cur, inst))
        return fail(l, "axiom " + j.name, "formula is not an instance of " + render(it->second));
      return {};
    }
    case Justification::Kind::Premise: {
      if (j.cites.empty()) {
        for (const auto& p : s.premises)
          if (p == cur) return {};
        return fail(l, "premise", "formula is not among the premises");
      }
      int i = j.cites.front();
      if (i < 1 || static_cast<std::size_t>(i) > s.premises.size())
        return fail(l, "premise", "no premise number " + std::to_string(i));
      if (s.premises[static_cast<std::size_t>(i - 1)] != cur) return fail(l, "premise", "formula differs from premise " + std::to_string(i));
      return {};
    }
    case Justification::Kind::MP: {
      if (refs.size() != 2) return fail(l, "mp", "expects two cited lines");
      const Formula& imp = refs[1]->formula;
      if (imp.kind() != Formula::Kind::Implies || imp.lhs() != refs[0]->formula || imp.rhs() != cur)
        return fail(l, "mp", "cited line is not an implication with matching antecedent");
      return {};
    }
    case Justification::Kind::EA: {
      if (refs.size() != 1) return fail(l, "ea", "expects one cited line");
      const Formula& p = refs[0]->formula;
      bool shape = p.kind() == Formula::Kind::Implies && p.lhs().kind() == Formula::Kind::Knows &&
                   p.rhs().kind() == Formula::Kind::Knows && p.lhs().agent().is_cm() && p.rhs().agent().is_cm();
      if (!shape) return fail(l, "ea", "cited line is not of the form k(CM,M) -> k(CM,M')");
      const Term& m = p.lhs().term();
      const Term& m2 = p.rhs().term();
      bool ok = cur.kind() == Formula::Kind::Implies && cur.lhs().kind() == Formula::Kind::Proves &&
                cur.rhs().kind() == Formula::Kind::Proves && cur.lhs().term() == m2 && cur.rhs().term() == m &&
                cur.lhs().sub() == cur.rhs().sub();
      if (!ok)
        return fail(l, "ea", "conclusion must be [" + render(m2) + "]phi -> [" + render(m) + "]phi for one phi");
      return {};
    }
    case Justification::Kind::Lemma: {
      const Lemma* lem = db.find(j.name);
      if (!lem) return fail(l, "lemma", "unknown lemma '" + j.name + "'");
      if (!lem->verified) return fail(l, "lemma", "lemma '" + j.name + "' is not verified");
      if (refs.size() != lem->premises.size())
        return fail(l, "lemma " + j.name,
                    "expects " + std::to_string(lem->premises.size()) + " cited lines, got " + std::to_string(refs.size()));
      std::string missing;
      Formula all = lem->statement;
      for (const auto& p : lem->premises) all = Formula::conj(all, p);
      if (!binding_names_occur(all, j.bound, missing))
        return fail(l, "lemma " + j.name, "metavariable '" + missing + "' does not occur in the lemma");
      SchemaInstantiation inst = j.bindings;
      if (!match_into(lem->statement, cur, inst))
        return fail(l, "lemma " + j.name, "formula is not an instance of " + render(lem->statement));
      for (std::size_t i = 0; i < refs.size(); ++i)
        if (!match_into(lem->premises[i], refs[i]->formula, inst))
          return fail(l, "lemma " + j.name,
                      "cited line " + std::to_string(refs[i]->label) + " is not an instance of premise " + render(lem->premises[i]));
      return {};
    }
    case Justification::Kind::IL: {
      Skeletonizer sk;
      std::vector<Formula> hyps;
      std::vector<Formula> facts;
      own_name_facts(cur, facts);
      for (const auto* r : refs) {
        hyps.push_back(sk.apply(r->formula));
        own_name_facts(r->formula, facts);
      }
      for (const auto& u : j.uses) {
        std::optional<Formula> schema;
        if (u.kind == Justification::Kind::Axiom) {
          auto it = axiom_schemas().find(u.name);
          if (it == axiom_schemas().end()) return fail(l, "il", "unknown axiom schema '" + u.name + "'");
          schema = it->second;
        } else {
          const Lemma* lem = db.find(u.name);
          if (!lem) return fail(l, "il", "unknown lemma '" + u.name + "'");
          if (!lem->verified) return fail(l, "il", "lemma '" + u.name + "' is not verified");
          if (!lem->premises.empty()) return fail(l, "il", "lemma '" + u.name + "' has premises and cannot be used inline");
          schema = lem->statement;
        }
        std::string missing;
        if (!binding_names_occur(*schema, u.bound, missing))
          return fail(l, "il", "metavariable '" + missing + "' does not occur in " + u.name);
        Formula inst = substitute(*schema, u.bindings);
        hyps.push_back(sk.apply(inst));
        own_name_facts(inst, facts);
      }
      for (const auto& f : facts) hyps.push_back(sk.apply(f));
      if (!ipl_entails(hyps, sk.apply(cur))) return fail(l, "il", "not an intuitionistic consequence of the cited lines");
      return {};
    }
    case Justification::Kind::Defn: {
      if (refs.empty()) {
        // A bare definition line is a biconditional whose sides unfold to the same formula.
        bool iff = cur.kind() == Formula::Kind::And && cur.lhs().kind() == Formula::Kind::Implies &&
                   cur.rhs().kind() == Formula::Kind::Implies && cur.lhs().lhs() == cur.lhs().rhs() &&
                   cur.rhs() == cur.lhs();
        if (!iff) return fail(l, "defn", "sides of the biconditional do not unfold to the same formula");
        return {};
      }
      if (refs.size() != 1) return fail(l, "defn", "expects at most one cited line");
      if (refs[0]->formula != cur) return fail(l, "defn", "formula does not unfold to the cited line");
      return {};
    }
  }
  return {};
}

ProofReport check_proof(const ProofScript& s, LemmaDatabase& db, bool register_lemma) {
  ProofReport rep;
  for (std::size_t i = 0; i < s.lines.size(); ++i) {
    for (std::size_t k = 0; k < i; ++k)
      if (s.lines[k].label == s.lines[i].label) {
        rep.ok = false;
        rep.violations.push_back(line_prefix(s.lines[i]) + "duplicate line number");
      }
    LineCheck c = check_line(s, i, db);
    if (!c.ok) {
      rep.ok = false;
      rep.violations.push_back(c.message);
    }
  }
  if (s.lines.empty()) {
    rep.ok = false;
    rep.violations.push_back("proof has no lines");
  } else if (s.lines.back().formula != s.goal) {
    rep.ok = false;
    rep.violations.push_back("qed formula differs from the last line");
  }
  if (rep.ok && register_lemma) {
    if (db.find(s.name)) {
      rep.ok = false;
      rep.violations.push_back("a lemma named " + s.name + " already exists");
    } else {
      db.add({s.name, s.premises, s.goal, true});
    }
  }
  return rep;
}

ProofScript substitute_script(const ProofScript& s, const SchemaInstantiation& inst) {
  ProofScript out = s;
  for (auto& p : out.premises) p = substitute(p, inst);
  out.goal = substitute(out.goal, inst);
  for (auto& l : out.lines) {
    l.formula = substitute(l.formula, inst);
    for (auto& [k, v] : l.just.bindings.formula_metavars) v = substitute(v, inst);
    for (auto& [k, v] : l.just.bindings.term_metavars) v = substitute(v, inst);
    for (auto& [k, v] : l.just.bindings.agent_metavars) v = substitute(v, inst);
    for (auto& u : l.just.uses) {
      // Unbound metavariables of an inline use stand for themselves, so the
      // substitution has to be recorded for them explicitly.
      for (auto& [k, v] : u.bindings.formula_metavars) v = substitute(v, inst);
      for (auto& [k, v] : u.bindings.term_metavars) v = substitute(v, inst);
      for (auto& [k, v] : u.bindings.agent_metavars) v = substitute(v, inst);
      for (const auto& [k, v] : inst.formula_metavars) u.bindings.formula_metavars.emplace(k, v);
      for (const auto* src : {&inst.term_metavars, &inst.agent_metavars})
        for (const auto& [k, v] : *src)
          if (!u.bindings.lookup_term(k)) u.bindings.term_metavars.emplace(k, v);
    }
  }
  return out;
}

}  // namespace liip
