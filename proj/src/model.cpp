#include <unordered_map>

#include "liip/model.hpp"

namespace liip {

// ----------------------------------------------------------- construction

Relation identity_relation(std::size_t n) {
  Relation r(n, StateSet(n));
  for (std::size_t i = 0; i < n; ++i) r[i].set(i);
  return r;
}

KripkeModel make_model(std::size_t n, const Relation& order) {
  KripkeModel m;
  for (std::size_t i = 0; i < n; ++i) m.state_names.push_back(std::to_string(i));
  m.order = order;
  m.access[Term::cm()] = order;
  return m;
}

std::optional<StateSet> KripkeModel::knowledge(const AgentName& a, const Term& t) const {
  if (auto it = knows.find({a, t}); it != knows.end()) return it->second;
  if (t.is_agent() && t.name() == a) return full_set();
  if (t.is_pair()) {
    auto l = knowledge(a, t.left());
    if (!l) return std::nullopt;
    auto r = knowledge(a, t.right());
    if (!r) return std::nullopt;
    return *l & *r;
  }
  return std::nullopt;
}

std::optional<int> KripkeModel::state_index(const std::string& name) const {
  for (std::size_t i = 0; i < state_names.size(); ++i)
    if (state_names[i] == name) return static_cast<int>(i);
  return std::nullopt;
}

const Relation& KripkeModel::access_for(const Term& t) const {
  auto it = access.find(t);
  if (it == access.end()) throw EvaluationError("proof term " + render(t) + " is outside the model's term universe");
  return it->second;
}

void extend_access(KripkeModel& m, const std::set<Term>& terms) {
  for (const auto& t : terms) {
    if (m.access.count(t)) continue;
    auto k = m.knowledge(kCM, t);
    if (!k) throw EvaluationError("CM knowledge of " + render(t) + " is undetermined in this model");
    const Relation* found = nullptr;
    for (const auto& [u, rel] : m.access) {
      auto ku = m.knowledge(kCM, u);
      if (ku && *ku == *k) {
        found = &rel;
        break;
      }
    }
    if (!found) throw EvaluationError("no relation in the model determines R^" + render(t));
    Relation copy = *found;
    m.access.emplace(t, std::move(copy));
  }
}

// ------------------------------------------------------------- validation

namespace {

struct Checker {
  const KripkeModel& m;
  ValidationReport rep;

  void fail(const std::string& clause, const std::string& witness) {
    rep.passed = false;
    rep.violations.push_back({clause, witness});
  }
  const std::string& nm(std::size_t i) const { return m.state_names[i]; }

  bool shapes_ok() {
    std::size_t n = m.size();
    bool ok = m.order.size() == n;
    for (const auto& row : m.order) ok = ok && row.size() == n;
    for (const auto& [t, rel] : m.access) {
      bool good = rel.size() == n;
      for (const auto& row : rel) good = good && row.size() == n;
      if (!good) fail("shape", "relation R^" + render(t) + " has the wrong dimensions");
      ok = ok && good;
    }
    for (const auto& [p, s] : m.val)
      if (s.size() != n) { fail("shape", "valuation of " + p + " has the wrong size"); ok = false; }
    for (const auto& [k, s] : m.knows)
      if (s.size() != n) { fail("shape", "valuation of k(" + k.first + "," + render(k.second) + ") has the wrong size"); ok = false; }
    if (m.order.size() != n) fail("shape", "order has the wrong dimensions");
    return ok;
  }

  void order_axioms() {
    std::size_t n = m.size();
    for (std::size_t s = 0; s < n; ++s) {
      if (!m.order[s].test(s)) fail("order reflexivity", nm(s));
      for (std::size_t t = m.order[s].find_first(); t != StateSet::npos; t = m.order[s].find_next(t)) {
        if (t != s && m.order[t].test(s)) {
          if (s < t) fail("order antisymmetry", nm(s) + " and " + nm(t));
        }
        if (!m.order[t].is_subset_of(m.order[s])) {
          auto u = (m.order[t] - m.order[s]).find_first();
          fail("order transitivity", nm(s) + " <= " + nm(t) + " <= " + nm(u));
        }
      }
    }
  }

  void monotone(const std::string& what, const StateSet& v) {
    for (std::size_t s = v.find_first(); s != StateSet::npos; s = v.find_next(s))
      if (!m.order[s].is_subset_of(v)) {
        auto t = (m.order[s] - v).find_first();
        fail("valuation monotonicity", what + " holds at " + nm(s) + " but not at " + nm(t));
      }
  }

  void valuation() {
    for (const auto& [p, v] : m.val) monotone(p, v);
    for (const auto& [key, v] : m.knows) {
      std::string what = "k(" + key.first + "," + render(key.second) + ")";
      monotone(what, v);
      if (key.second.is_agent() && key.second.name() == key.first && !v.all())
        fail("knowledge coherence", what + " must hold everywhere (own name)");
      if (key.second.is_pair()) {
        auto l = m.knowledge(key.first, key.second.left());
        auto r = m.knowledge(key.first, key.second.right());
        if (l && r && (*l & *r) != v) fail("knowledge coherence", what + " differs from the conjunction of its components");
      }
    }
  }

  void interface() {
    std::size_t n = m.size();
    auto cm = m.access.find(Term::cm());
    if (cm == m.access.end()) {
      fail("MIAR-inclusion", "no relation for CM");
    } else if (cm->second != m.order) {
      fail("MIAR-inclusion", "R^CM differs from the state order");
    }
    // The term universe is every term with a relation or a knowledge entry;
    // the clauses quantify over all of it, so each needs a relation.
    for (const auto& [key, v] : m.knows)
      if (!m.access.count(key.second))
        fail("seriality", "term " + render(key.second) + " has knowledge entries but no access relation");
    std::map<Term, StateSet> ks;
    for (const auto& [t, rel] : m.access) {
      std::string r = "R^" + render(t);
      auto k = m.knowledge(kCM, t);
      if (!k) {
        fail("epistemic image", "k(CM," + render(t) + ") is undetermined");
        continue;
      }
      ks.emplace(t, *k);
      for (std::size_t s = 0; s < n; ++s) {
        const StateSet& succ = rel[s];
        if (!succ.is_subset_of(*k)) {
          auto u = (succ - *k).find_first();
          fail("epistemic image", nm(s) + " " + r + " " + nm(u) + " but k(CM," + render(t) + ") fails at " + nm(u));
        }
        if (k->test(s) && !succ.test(s)) fail("conditional reflexivity", nm(s) + " knows " + render(t) + " but is not " + r + "-reflexive");
        if (succ.none()) fail("seriality", nm(s) + " has no " + r + "-successor");
        if (!succ.is_subset_of(m.order[s])) {
          auto u = (succ - m.order[s]).find_first();
          fail("MIAR-inclusion", nm(s) + " " + r + " " + nm(u) + " but not " + nm(s) + " <= " + nm(u));
        }
        for (std::size_t u = m.order[s].find_first(); u != StateSet::npos; u = m.order[s].find_next(u)) {
          if (!rel[u].is_subset_of(succ)) {
            auto w = (rel[u] - succ).find_first();
            fail("special transitivity", nm(s) + " <= " + nm(u) + " " + r + " " + nm(w) + " but not " + nm(s) + " " + r + " " + nm(w));
          }
        }
      }
    }
    for (const auto& [t1, k1] : ks)
      for (const auto& [t2, k2] : ks) {
        if (t1 == t2 || !k1.is_subset_of(k2)) continue;
        const Relation& r1 = m.access.at(t1);
        const Relation& r2 = m.access.at(t2);
        for (std::size_t s = 0; s < n; ++s)
          if (!r1[s].is_subset_of(r2[s])) {
            auto u = (r1[s] - r2[s]).find_first();
            fail("proof monotonicity", render(t1) + " <=_CM " + render(t2) + " locally but " + nm(s) + " R^" + render(t1) +
                                           " " + nm(u) + " without R^" + render(t2));
          }
      }
  }
};

}  // namespace

ValidationReport validate_model(const KripkeModel& m) {
  Checker c{m, {}};
  if (!c.shapes_ok()) return c.rep;
  c.order_axioms();
  c.valuation();
  c.interface();
  return c.rep;
}

// ----------------------------------------------------------- satisfaction

namespace {

class Evaluator {
 public:
  explicit Evaluator(const KripkeModel& m) : m_(m) {}

  StateSet eval(const Formula& f) {
    if (auto it = memo_.find(f.id()); it != memo_.end()) return it->second;
    StateSet r = compute(f);
    memo_.emplace(f.id(), r);
    return r;
  }

 private:
  // States all of whose rel-successors lie in target.
  StateSet box(const Relation& rel, const StateSet& target) const {
    StateSet out(m_.size());
    for (std::size_t s = 0; s < m_.size(); ++s)
      if (rel[s].is_subset_of(target)) out.set(s);
    return out;
  }

  StateSet compute(const Formula& f) {
    using K = Formula::Kind;
    switch (f.kind()) {
      case K::Var: {
        auto it = m_.val.find(f.name());
        if (it == m_.val.end()) throw EvaluationError("atom " + f.name() + " is not interpreted by the model");
        return it->second;
      }
      case K::Meta:
        throw EvaluationError("cannot evaluate metavariable " + f.name());
      case K::Knows: {
        if (!f.agent().is_agent()) throw EvaluationError("cannot evaluate knowledge of metavariable agent");
        auto k = m_.knowledge(f.agent().name(), f.term());
        if (!k) throw EvaluationError("knowledge atom " + render(f) + " is outside the model's universe");
        return *k;
      }
      case K::And:
        return eval(f.lhs()) & eval(f.rhs());
      case K::Or:
        return eval(f.lhs()) | eval(f.rhs());
      case K::Not:
        return box(m_.order, ~eval(f.sub()));
      case K::Implies:
        return box(m_.order, ~eval(f.lhs()) | eval(f.rhs()));
      case K::Proves:
        return box(m_.access_for(f.term()), eval(f.sub()));
    }
    return m_.empty_set();
  }

  const KripkeModel& m_;
  std::unordered_map<const void*, StateSet> memo_;
};

}  // namespace

StateSet truth_set(const KripkeModel& m, const Formula& f) { return Evaluator(m).eval(f); }

bool satisfies(const KripkeModel& m, int state, const Formula& f) {
  if (state < 0 || static_cast<std::size_t>(state) >= m.size()) throw EvaluationError("state out of range");
  return truth_set(m, f).test(static_cast<std::size_t>(state));
}

bool globally_true(const KripkeModel& m, const Formula& f) { return truth_set(m, f).all(); }

}  // namespace liip
