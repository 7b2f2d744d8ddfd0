// Shared fixtures for the test suites and the acceptance runner: seeded random
// formulas, random models built to satisfy the semantic interface, random
// histories, and two brute-force oracles that share no code with the library's
// evaluator or search.
#pragma once

#include <algorithm>
#include <array>
#include <cstdint>
#include <functional>
#include <map>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "liip/histories.hpp"
#include "liip/kernel.hpp"
#include "liip/model.hpp"
#include "liip/syntax.hpp"

namespace liip::test {

using Rng = std::mt19937_64;

inline int pick(Rng& rng, int n) { return std::uniform_int_distribution<int>(0, n - 1)(rng); }
inline bool coin(Rng& rng, double p = 0.5) { return std::bernoulli_distribution(p)(rng); }

template <class T>
const T& pick(Rng& rng, const std::vector<T>& v) {
  return v[pick(rng, static_cast<int>(v.size()))];
}

inline Formula parse(const std::string& s) { return parse_formula(s); }
inline Formula schema(const std::string& s) {
  ParseOptions o;
  o.schema = true;
  return parse_formula(s, o);
}

// ------------------------------------------------------------ vocabulary

struct Vocab {
  std::vector<std::string> atoms{"p", "q", "r"};
  std::vector<Term> terms;   // proof terms that carry relations in random models
  std::vector<Term> agents;  // agents that may appear in k(.,.)
  bool modal = true;
  bool knowledge = true;

  static Vocab standard() {
    Vocab v;
    Term m = Term::agent("m"), n = Term::agent("n");
    v.terms = {Term::cm(), m, n, Term::pair(m, n), Term::pair(n, m)};
    v.agents = {Term::cm(), Term::agent("a")};
    return v;
  }
  static Vocab propositional(int atoms) {
    Vocab v;
    v.atoms.resize(atoms);
    v.modal = false;
    v.knowledge = false;
    return v;
  }
};

inline Formula random_leaf(Rng& rng, const Vocab& v) {
  int choice = pick(rng, 8);
  if (v.knowledge && !v.terms.empty() && choice == 0) return Formula::top();
  if (v.knowledge && !v.terms.empty() && choice <= 2)
    return Formula::knows(pick(rng, v.agents), pick(rng, v.terms));
  return Formula::var(pick(rng, v.atoms));
}

// A random formula of modal/connective depth at most `depth`.
inline Formula random_formula(Rng& rng, const Vocab& v, int depth) {
  if (depth <= 0 || coin(rng, 0.25)) return random_leaf(rng, v);
  int ops = v.modal ? 6 : 4;
  switch (pick(rng, ops)) {
    case 0: return Formula::conj(random_formula(rng, v, depth - 1), random_formula(rng, v, depth - 1));
    case 1: return Formula::disj(random_formula(rng, v, depth - 1), random_formula(rng, v, depth - 1));
    case 2: return Formula::implies(random_formula(rng, v, depth - 1), random_formula(rng, v, depth - 1));
    case 3: return Formula::neg(random_formula(rng, v, depth - 1));
    case 4: return Formula::proves(pick(rng, v.terms), random_formula(rng, v, depth - 1));
    default: return Formula::diamond(pick(rng, v.terms), random_formula(rng, v, depth - 1));
  }
}

// ---------------------------------------------------------- random models

inline StateSet up_closure(const Relation& order, const StateSet& seed) {
  StateSet out(order.size());
  for (std::size_t s = seed.find_first(); s != StateSet::npos; s = seed.find_next(s)) out |= order[s];
  return out;
}

inline StateSet random_upset(Rng& rng, const Relation& order, double density = 0.4) {
  StateSet seed(order.size());
  for (std::size_t s = 0; s < order.size(); ++s)
    if (coin(rng, density)) seed.set(s);
  return up_closure(order, seed);
}

// An upset that contains every maximal state, so a relation into it can be serial.
inline StateSet random_cofinal_upset(Rng& rng, const Relation& order) {
  StateSet k = random_upset(rng, order);
  for (std::size_t s = 0; s < order.size(); ++s)
    if (order[s].count() == 1) k.set(s);
  return k;
}

// Random order on n states whose numbering is a linear extension.
inline Relation random_order(Rng& rng, int n, double edge = 0.45) {
  Relation order(n, StateSet(n));
  for (int s = 0; s < n; ++s) order[s].set(s);
  for (int s = n - 1; s >= 0; --s)
    for (int t = s + 1; t < n; ++t)
      if (coin(rng, edge)) order[s] |= order[t];
  return order;
}

// A random model over the standard vocabulary (at most two proof terms m and
// n, their pairs, agent a) that satisfies every interface clause by
// construction. Relations are built per term in order of growing CM-knowledge
// and per state from the top of the order down, each row squeezed between the
// rows forced by conditional reflexivity, special transitivity and proof
// monotonicity and the row allowed by MIAR-inclusion and epistemic image.
inline KripkeModel random_model(Rng& rng, int max_states, int atoms = 3) {
  int n = 1 + pick(rng, max_states);
  Relation order = random_order(rng, n);
  KripkeModel m = make_model(n, order);
  Term cm = Term::cm(), tm = Term::agent("m"), tn = Term::agent("n");
  Term mn = Term::pair(tm, tn), nm = Term::pair(tn, tm);

  StateSet km = random_cofinal_upset(rng, order), kn = random_cofinal_upset(rng, order);
  m.knows[{kCM, tm}] = km;
  m.knows[{kCM, tn}] = kn;
  m.knows[{"a", tm}] = random_upset(rng, order);
  m.knows[{"a", tn}] = random_upset(rng, order);
  m.knows[{"a", cm}] = random_upset(rng, order);
  static const char* names[] = {"p", "q", "r"};
  for (int i = 0; i < atoms && i < 3; ++i) m.val[names[i]] = random_upset(rng, order);

  std::vector<std::pair<Term, StateSet>> terms{{tm, km}, {tn, kn}, {mn, km & kn}, {nm, km & kn}};
  std::stable_sort(terms.begin(), terms.end(),
                   [](const auto& x, const auto& y) { return x.second.count() < y.second.count(); });
  std::map<Term, Relation> built;
  built[cm] = order;
  for (const auto& [t, k] : terms) {
    const Relation* same = nullptr;
    for (const auto& [u, ku] : terms)
      if (ku == k && built.count(u)) same = &built.at(u);
    if (same) {
      built[t] = *same;
      continue;
    }
    Relation rel(n, StateSet(n));
    for (int s = n - 1; s >= 0; --s) {
      StateSet lower(n), upper = order[s] & k;
      if (k.test(s)) lower.set(s);
      for (int u = s + 1; u < n; ++u)
        if (order[s].test(u)) lower |= rel[u];
      for (const auto& [u, ku] : terms)
        if (built.count(u) && ku.is_subset_of(k)) lower |= built.at(u)[s];
      StateSet row = lower;
      for (int u = 0; u < n; ++u)
        if (upper.test(u) && coin(rng, 0.3)) row.set(u);
      if (row.none()) {
        std::vector<int> choices;
        for (int u = 0; u < n; ++u)
          if (upper.test(u)) choices.push_back(u);
        row.set(pick(rng, choices));
      }
      rel[s] = row;
    }
    built[t] = rel;
  }
  for (auto& [t, rel] : built) m.access[t] = rel;
  return m;
}

// ------------------------------------------------------- random instances

inline SchemaInstantiation random_instantiation(Rng& rng, const Formula& schema_formula, const Vocab& v,
                                                int depth) {
  SchemaInstantiation inst;
  // Agent slots are bound first, so a metavariable that also occurs as a
  // message keeps its agent value there.
  bool agents_pass = true;
  std::function<void(const Term&, bool)> term_walk = [&](const Term& t, bool agent_slot) {
    if (t.is_meta()) {
      if (inst.lookup_term(t.name())) return;
      if (agent_slot && agents_pass)
        inst.agent_metavars.emplace(t.name(), pick(rng, v.agents));
      else if (!agents_pass)
        inst.term_metavars.emplace(t.name(), pick(rng, v.terms));
    } else if (t.is_pair()) {
      term_walk(t.left(), false);
      term_walk(t.right(), false);
    }
  };
  std::function<void(const Formula&)> walk = [&](const Formula& f) {
    switch (f.kind()) {
      case Formula::Kind::Meta:
        if (!agents_pass && !inst.formula_metavars.count(f.name()))
          inst.formula_metavars.emplace(f.name(), random_formula(rng, v, depth));
        break;
      case Formula::Kind::Knows:
        term_walk(f.agent(), true);
        term_walk(f.term(), false);
        break;
      case Formula::Kind::Proves:
        term_walk(f.term(), false);
        walk(f.sub());
        break;
      case Formula::Kind::Not: walk(f.sub()); break;
      case Formula::Kind::And:
      case Formula::Kind::Or:
      case Formula::Kind::Implies:
        walk(f.lhs());
        walk(f.rhs());
        break;
      default: break;
    }
  };
  walk(schema_formula);
  agents_pass = false;
  walk(schema_formula);
  return inst;
}

// The statement of a lemma as one formula: premises imply the conclusion.
inline Formula lemma_formula(const Lemma& l) {
  Formula f = l.statement;
  for (auto it = l.premises.rbegin(); it != l.premises.rend(); ++it) f = Formula::implies(*it, f);
  return f;
}

// Adds relations for the modal terms of f. Every pair over m, n and CM has the
// CM-knowledge of a term the random models already carry, and proof
// monotonicity then fixes its relation, so the model stays valid.
inline void cover_terms(KripkeModel& m, const Formula& f) { extend_access(m, modal_terms_of(f)); }

// Premises are rules, not implications: an instance is sound when global
// truth of the premises gives global truth of the conclusion.
inline bool lemma_instance_holds(KripkeModel& m, const Lemma& l, const SchemaInstantiation& inst) {
  for (const auto& p : l.premises) {
    Formula ps = substitute(p, inst);
    cover_terms(m, ps);
    if (!globally_true(m, ps)) return true;
  }
  Formula goal = substitute(l.statement, inst);
  cover_terms(m, goal);
  return globally_true(m, goal);
}

// ---------------------------------------------------------- random histories

struct HistoryVocab {
  std::vector<AgentName> agents{"a", "b", kCM};
  std::vector<Term> pool{Term::data("m1"), Term::data("m2"), Term::data("m3")};

  std::vector<Term> payloads() const {
    std::vector<Term> out = pool;
    for (const auto& x : pool)
      for (const auto& y : pool) out.push_back(Term::pair(x, y));
    return out;
  }
};

inline InputHistory random_history(Rng& rng, const HistoryVocab& v, int max_len) {
  InputHistory h;
  auto payloads = v.payloads();
  int len = pick(rng, max_len + 1);
  for (int i = 0; i < len; ++i) h.events.push_back({pick(rng, v.agents), pick(rng, payloads)});
  return h;
}

// A random extension of h, sometimes with a prefix removed instead, so that
// both related and unrelated pairs occur.
inline InputHistory random_relative(Rng& rng, const HistoryVocab& v, const InputHistory& h, int max_len) {
  if (coin(rng, 0.2)) return random_history(rng, v, max_len);
  InputHistory out = h;
  int extra = pick(rng, std::max(1, max_len - static_cast<int>(h.events.size()) + 1));
  auto payloads = v.payloads();
  for (int i = 0; i < extra; ++i) out.events.push_back({pick(rng, v.agents), pick(rng, payloads)});
  return out;
}

// ---------------------------------------------------------------- oracles

// Propositional Kripke oracle: every partial order on at most four points,
// every monotone valuation. Formulas use only atoms and the four connectives.
class PosetOracle {
 public:
  explicit PosetOracle(int max_points = 4) {
    for (int n = 1; n <= max_points; ++n) {
      int pairs = n * (n - 1);
      for (std::uint32_t bits = 0; bits < (1u << pairs); ++bits) {
        std::vector<std::uint8_t> up(n);
        for (int s = 0; s < n; ++s) up[s] = static_cast<std::uint8_t>(1u << s);
        int b = 0;
        for (int s = 0; s < n; ++s)
          for (int t = 0; t < n; ++t)
            if (s != t) {
              if (bits >> b & 1u) up[s] |= static_cast<std::uint8_t>(1u << t);
              ++b;
            }
        if (is_partial_order(up)) posets_.push_back(up);
      }
    }
  }

  std::size_t posets() const { return posets_.size(); }

  bool valid(const Formula& f) const {
    std::vector<std::string> atoms;
    collect(f, atoms);
    for (const auto& up : posets_) {
      int n = static_cast<int>(up.size());
      std::vector<std::uint8_t> ups;
      for (std::uint32_t s = 0; s < (1u << n); ++s)
        if (is_upset(up, static_cast<std::uint8_t>(s))) ups.push_back(static_cast<std::uint8_t>(s));
      std::vector<std::size_t> idx(atoms.size(), 0);
      while (true) {
        std::vector<std::uint8_t> val(atoms.size());
        for (std::size_t i = 0; i < atoms.size(); ++i) val[i] = ups[idx[i]];
        if (eval(f, up, atoms, val) != static_cast<std::uint8_t>((1u << n) - 1)) return false;
        std::size_t i = 0;
        while (i < idx.size() && ++idx[i] == ups.size()) idx[i++] = 0;
        if (i == idx.size()) break;
      }
    }
    return true;
  }

 private:
  static bool is_partial_order(const std::vector<std::uint8_t>& up) {
    int n = static_cast<int>(up.size());
    for (int s = 0; s < n; ++s)
      for (int t = 0; t < n; ++t) {
        if (s != t && (up[s] >> t & 1) && (up[t] >> s & 1)) return false;
        if ((up[s] >> t & 1) && (up[t] & ~up[s])) return false;
      }
    return true;
  }
  static bool is_upset(const std::vector<std::uint8_t>& up, std::uint8_t v) {
    for (std::size_t s = 0; s < up.size(); ++s)
      if ((v >> s & 1) && (up[s] & ~v)) return false;
    return true;
  }
  static void collect(const Formula& f, std::vector<std::string>& out) {
    if (f.kind() == Formula::Kind::Var) {
      if (std::find(out.begin(), out.end(), f.name()) == out.end()) out.push_back(f.name());
      return;
    }
    if (f.kind() == Formula::Kind::Not) return collect(f.sub(), out);
    collect(f.lhs(), out);
    collect(f.rhs(), out);
  }
  static std::uint8_t eval(const Formula& f, const std::vector<std::uint8_t>& up,
                           const std::vector<std::string>& names, const std::vector<std::uint8_t>& val) {
    int n = static_cast<int>(up.size());
    auto forall_up = [&](std::uint8_t good) {
      std::uint8_t out = 0;
      for (int s = 0; s < n; ++s)
        if ((up[s] & ~good) == 0) out |= static_cast<std::uint8_t>(1u << s);
      return out;
    };
    std::uint8_t all = static_cast<std::uint8_t>((1u << n) - 1);
    switch (f.kind()) {
      case Formula::Kind::Var:
        return val[std::find(names.begin(), names.end(), f.name()) - names.begin()];
      case Formula::Kind::And: return eval(f.lhs(), up, names, val) & eval(f.rhs(), up, names, val);
      case Formula::Kind::Or: return eval(f.lhs(), up, names, val) | eval(f.rhs(), up, names, val);
      case Formula::Kind::Not:
        return forall_up(static_cast<std::uint8_t>(all & ~eval(f.sub(), up, names, val)));
      case Formula::Kind::Implies:
        return forall_up(
            static_cast<std::uint8_t>((all & ~eval(f.lhs(), up, names, val)) | eval(f.rhs(), up, names, val)));
      default: throw std::logic_error("poset oracle: not propositional");
    }
  }
  std::vector<std::vector<std::uint8_t>> posets_;
};

// Raw model oracle for one atom p and one proof term m: enumerates every
// relation on at most three states, every valuation of p and k(CM,m) and
// every R^m, keeps what validate_model accepts, and evaluates formulas with its
// own truth tables.
class TinyModelOracle {
 public:
  struct Raw {
    int n;
    std::array<std::uint8_t, 3> up;  // order rows
    std::array<std::uint8_t, 3> rm;  // R^m rows
    std::uint8_t p, k;
  };

  explicit TinyModelOracle(int max_states = 3) {
    Term tm = Term::agent("m");
    for (int n = 1; n <= max_states; ++n) {
      int cells = n * n;
      for (std::uint32_t ob = 0; ob < (1u << cells); ++ob) {
        Raw r{n, {0, 0, 0}, {0, 0, 0}, 0, 0};
        for (int s = 0; s < n; ++s) r.up[s] = static_cast<std::uint8_t>(ob >> (s * n) & ((1u << n) - 1));
        if (!plausible_order(r)) continue;
        for (std::uint32_t rb = 0; rb < (1u << cells); ++rb) {
          bool inside = true;
          for (int s = 0; s < n; ++s) {
            r.rm[s] = static_cast<std::uint8_t>(rb >> (s * n) & ((1u << n) - 1));
            inside = inside && (r.rm[s] & ~r.up[s]) == 0;
          }
          if (!inside) continue;
          for (std::uint32_t p = 0; p < (1u << n); ++p)
            for (std::uint32_t k = 0; k < (1u << n); ++k) {
              r.p = static_cast<std::uint8_t>(p);
              r.k = static_cast<std::uint8_t>(k);
              if (validate_model(to_model(r)).passed) models_.push_back(r);
            }
        }
      }
    }
  }

  const std::vector<Raw>& models() const { return models_; }

  static KripkeModel to_model(const Raw& r) {
    Relation order(r.n, StateSet(r.n)), rm(r.n, StateSet(r.n));
    for (int s = 0; s < r.n; ++s)
      for (int t = 0; t < r.n; ++t) {
        if (r.up[s] >> t & 1) order[s].set(t);
        if (r.rm[s] >> t & 1) rm[s].set(t);
      }
    KripkeModel m = make_model(r.n, order);
    m.access[Term::agent("m")] = rm;
    StateSet p(r.n), k(r.n);
    for (int s = 0; s < r.n; ++s) {
      if (r.p >> s & 1) p.set(s);
      if (r.k >> s & 1) k.set(s);
    }
    m.val["p"] = p;
    m.knows[{kCM, Term::agent("m")}] = k;
    return m;
  }

  // A state of some validated model where f fails, if any.
  std::optional<std::pair<Raw, int>> countermodel(const Formula& f) const {
    for (const auto& r : models_) {
      std::uint8_t all = static_cast<std::uint8_t>((1u << r.n) - 1);
      std::uint8_t v = eval(f, r);
      if (v != all)
        for (int s = 0; s < r.n; ++s)
          if (!(v >> s & 1)) return std::make_pair(r, s);
    }
    return std::nullopt;
  }

  static std::uint8_t eval(const Formula& f, const Raw& r) {
    std::uint8_t all = static_cast<std::uint8_t>((1u << r.n) - 1);
    auto forall = [&](const std::array<std::uint8_t, 3>& rel, std::uint8_t good) {
      std::uint8_t out = 0;
      for (int s = 0; s < r.n; ++s)
        if ((rel[s] & ~good) == 0) out |= static_cast<std::uint8_t>(1u << s);
      return out;
    };
    switch (f.kind()) {
      case Formula::Kind::Var:
        if (f.name() != "p") throw std::logic_error("tiny oracle: only atom p");
        return r.p;
      case Formula::Kind::Knows:
        if (!f.agent().is_cm()) throw std::logic_error("tiny oracle: only CM knowledge");
        if (f.term().is_cm()) return all;
        if (f.term() != Term::agent("m")) throw std::logic_error("tiny oracle: only term m");
        return r.k;
      case Formula::Kind::And: return eval(f.lhs(), r) & eval(f.rhs(), r);
      case Formula::Kind::Or: return eval(f.lhs(), r) | eval(f.rhs(), r);
      case Formula::Kind::Not: return forall(r.up, static_cast<std::uint8_t>(all & ~eval(f.sub(), r)));
      case Formula::Kind::Implies:
        return forall(r.up, static_cast<std::uint8_t>((all & ~eval(f.lhs(), r)) | eval(f.rhs(), r)));
      case Formula::Kind::Proves:
        if (f.term().is_cm()) return forall(r.up, eval(f.sub(), r));
        if (f.term() != Term::agent("m")) throw std::logic_error("tiny oracle: only term m");
        return forall(r.rm, eval(f.sub(), r));
      default: throw std::logic_error("tiny oracle: metavariable");
    }
  }

 private:
  // Cheap necessary conditions before calling the validator: reflexive,
  // antisymmetric, transitive. R^m rows are also kept inside the order.
  static bool plausible_order(const Raw& r) {
    for (int s = 0; s < r.n; ++s) {
      if (!(r.up[s] >> s & 1)) return false;
      for (int t = 0; t < r.n; ++t) {
        if (s != t && (r.up[s] >> t & 1) && (r.up[t] >> s & 1)) return false;
        if ((r.up[s] >> t & 1) && (r.up[t] & ~r.up[s])) return false;
      }
    }
    return true;
  }
  std::vector<Raw> models_;
};

// All formulas over the given leaves with exactly `connectives` connectives
// among ~, &, |, -> and [m].
inline std::vector<Formula> formulas_with(const std::vector<Formula>& leaves, const Term& term, int connectives,
                                          std::vector<std::vector<Formula>>& memo) {
  if (memo.size() > static_cast<std::size_t>(connectives) && !memo[connectives].empty()) return memo[connectives];
  std::vector<Formula> out;
  if (connectives == 0) {
    out = leaves;
  } else {
    for (const auto& f : formulas_with(leaves, term, connectives - 1, memo)) {
      out.push_back(Formula::neg(f));
      out.push_back(Formula::proves(term, f));
    }
    for (int i = 0; i < connectives; ++i) {
      auto ls = formulas_with(leaves, term, i, memo);
      auto rs = formulas_with(leaves, term, connectives - 1 - i, memo);
      for (const auto& l : ls)
        for (const auto& r : rs) {
          out.push_back(Formula::conj(l, r));
          out.push_back(Formula::disj(l, r));
          out.push_back(Formula::implies(l, r));
        }
    }
  }
  if (memo.size() <= static_cast<std::size_t>(connectives)) memo.resize(connectives + 1);
  memo[connectives] = out;
  return out;
}

// A random formula with exactly `connectives` connectives over the same leaves.
inline Formula random_sized(Rng& rng, const std::vector<Formula>& leaves, const Term& term, int connectives) {
  if (connectives == 0) return pick(rng, leaves);
  int op = pick(rng, 5);
  if (op == 0) return Formula::neg(random_sized(rng, leaves, term, connectives - 1));
  if (op == 1) return Formula::proves(term, random_sized(rng, leaves, term, connectives - 1));
  int left = pick(rng, connectives);
  Formula l = random_sized(rng, leaves, term, left), r = random_sized(rng, leaves, term, connectives - 1 - left);
  if (op == 2) return Formula::conj(l, r);
  if (op == 3) return Formula::disj(l, r);
  return Formula::implies(l, r);
}

// Random propositional formula with at most `connectives` connectives.
inline Formula random_prop(Rng& rng, int atoms, int connectives) {
  static const char* names[] = {"p", "q", "r"};
  if (connectives == 0) return Formula::var(names[pick(rng, atoms)]);
  int op = pick(rng, 4);
  if (op == 0) return Formula::neg(random_prop(rng, atoms, connectives - 1));
  int left = pick(rng, connectives);
  Formula l = random_prop(rng, atoms, left), r = random_prop(rng, atoms, connectives - 1 - left);
  if (op == 1) return Formula::conj(l, r);
  if (op == 2) return Formula::disj(l, r);
  return Formula::implies(l, r);
}

}  // namespace liip::test
