#include "liip/histories.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "liip/derivation.hpp"

namespace liip {

InputHistory InputHistory::then(const Event& e) const {
  InputHistory out = *this;
  out.events.push_back(e);
  return out;
}

InputHistory operator*(const InputHistory& a, const InputHistory& b) {
  InputHistory out = a;
  out.events.insert(out.events.end(), b.events.begin(), b.events.end());
  return out;
}

bool operator<(const InputHistory& a, const InputHistory& b) {
  if (a.events.size() != b.events.size()) return a.events.size() < b.events.size();
  return a.events < b.events;
}

std::string render(const InputHistory& s) {
  if (s.events.empty()) return "0";
  std::string out;
  for (const auto& e : s.events) {
    if (!out.empty()) out += ".";
    out += e.receiver + "<" + render(e.payload) + ">";
  }
  return out;
}

InputHistory project(const AgentName& viewer, const InputHistory& s) {
  if (viewer == kCM) return s;
  InputHistory out;
  for (const auto& e : s.events)
    if (e.receiver == viewer) out.events.push_back(e);
  return out;
}

std::set<Term> msgs(const InputHistory& s) {
  std::set<Term> out;
  for (const auto& e : s.events) out.insert(e.payload);
  return out;
}

bool knows_at(const AgentName& viewer, const InputHistory& s, const Term& m) {
  return derives(viewer, msgs(project(viewer, s)), m);
}

bool history_leq(const AgentName& viewer, const InputHistory& s, const InputHistory& s2) {
  InputHistory a = project(viewer, s);
  InputHistory b = project(viewer, s2);
  return a.events.size() <= b.events.size() && std::equal(a.events.begin(), a.events.end(), b.events.begin());
}

bool history_equiv(const AgentName& viewer, const InputHistory& s, const InputHistory& s2) {
  return project(viewer, s) == project(viewer, s2);
}

bool concrete_access(const Term& m, const InputHistory& s, const InputHistory& s2) {
  return history_leq(kCM, s, s2) && knows_at(kCM, s2, m);
}

Term bundle(const std::vector<Term>& terms) {
  if (terms.empty()) throw std::invalid_argument("cannot bundle an empty pool");
  Term acc = terms.back();
  for (auto it = terms.rbegin() + 1; it != terms.rend(); ++it) acc = Term::pair(*it, acc);
  return acc;
}

int ConcreteModel::state_of(const InputHistory& s) const {
  auto it = std::lower_bound(histories.begin(), histories.end(), s);
  if (it == histories.end() || !(*it == s)) return -1;
  return static_cast<int>(it - histories.begin());
}

ConcreteModel generate_model(const std::set<AgentName>& agents_in, const std::set<Term>& pool, int depth,
                             const std::map<std::string, AtomPredicate>& atom_valuation,
                             const std::set<Term>& extra_terms) {
  if (depth < 0) throw std::invalid_argument("depth must be non-negative");
  if (pool.empty() && depth > 0) throw std::invalid_argument("empty pool with positive depth");
  std::set<AgentName> agents = agents_in;
  agents.insert(kCM);

  std::vector<Event> alphabet;
  for (const auto& a : agents)
    for (const auto& t : pool) alphabet.push_back({a, t});

  std::set<InputHistory> states;
  std::vector<InputHistory> layer{InputHistory{}};
  states.insert(InputHistory{});
  for (int d = 0; d < depth; ++d) {
    std::vector<InputHistory> next;
    for (const auto& s : layer)
      for (const auto& e : alphabet) {
        next.push_back(s.then(e));
        states.insert(next.back());
      }
    layer = std::move(next);
  }
  std::vector<Term> pool_vec(pool.begin(), pool.end());
  Term sink_payload = pool.empty() ? Term::cm() : bundle(pool_vec);
  std::vector<InputHistory> base(states.begin(), states.end());
  for (const auto& s : base) states.insert(s.then({kCM, sink_payload}));

  ConcreteModel cm;
  cm.histories.assign(states.begin(), states.end());
  std::sort(cm.histories.begin(), cm.histories.end());
  std::size_t n = cm.histories.size();
  KripkeModel& m = cm.model;
  for (const auto& h : cm.histories) m.state_names.push_back(render(h));

  m.order.assign(n, StateSet(n));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      if (history_leq(kCM, cm.histories[i], cm.histories[j])) m.order[i].set(j);

  std::set<Term> universe{Term::cm()};
  for (const auto& t : pool) subterms(t, universe);
  for (const auto& t : extra_terms) {
    if (!derives(kCM, pool, t) && !t.is_cm())
      throw std::invalid_argument("term " + render(t) + " is not derivable from the pool");
    subterms(t, universe);
  }

  for (const auto& t : universe) {
    Relation r(n, StateSet(n));
    StateSet k(n);
    for (std::size_t j = 0; j < n; ++j)
      if (knows_at(kCM, cm.histories[j], t)) k.set(j);
    for (std::size_t i = 0; i < n; ++i) r[i] = m.order[i] & k;
    m.access.emplace(t, std::move(r));
  }

  for (const auto& a : agents)
    for (const auto& t : universe) {
      if (t.is_pair() || (t.is_agent() && t.name() == a)) continue;
      StateSet k(n);
      for (std::size_t j = 0; j < n; ++j)
        if (knows_at(a, cm.histories[j], t)) k.set(j);
      m.knows.emplace(std::make_pair(a, t), std::move(k));
    }

  for (const auto& [p, pred] : atom_valuation) {
    StateSet v(n);
    for (std::size_t i = 0; i < n; ++i)
      if (pred(cm.histories[i])) v |= m.order[i];
    m.val.emplace(p, std::move(v));
  }
  return cm;
}

InputHistory parse_trace(const std::string& text) {
  InputHistory s;
  std::istringstream in(text);
  std::size_t lineno = 0;
  for (std::string line; std::getline(in, line);) {
    ++lineno;
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    std::istringstream ls(line);
    std::string kw, agent;
    if (!(ls >> kw)) continue;
    if (kw != "recv" || !(ls >> agent))
      throw std::runtime_error("trace line " + std::to_string(lineno) + ": expected 'recv <agent> <term>'");
    std::string rest;
    std::getline(ls, rest);
    try {
      s.events.push_back({agent, parse_term(rest)});
    } catch (const ParseError& e) {
      throw std::runtime_error("trace line " + std::to_string(lineno) + ": " + e.what());
    }
  }
  return s;
}

InputHistory load_trace(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open trace file " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_trace(ss.str());
}

}  // namespace liip
