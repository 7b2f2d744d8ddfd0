// Concrete semantics: input histories and the finite LIiP-models they generate.
#pragma once

#include <functional>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "liip/model.hpp"
#include "liip/syntax.hpp"

namespace liip {

struct Event {
  AgentName receiver;
  Term payload;
  friend bool operator==(const Event& a, const Event& b) {
    return a.receiver == b.receiver && a.payload == b.payload;
  }
  friend bool operator<(const Event& a, const Event& b) {
    if (a.receiver != b.receiver) return a.receiver < b.receiver;
    return a.payload < b.payload;
  }
};

// A finite word of receive events; the empty word is the initial state.
struct InputHistory {
  std::vector<Event> events;

  InputHistory then(const Event& e) const;
  friend InputHistory operator*(const InputHistory& a, const InputHistory& b);
  friend bool operator==(const InputHistory& a, const InputHistory& b) { return a.events == b.events; }
  friend bool operator<(const InputHistory& a, const InputHistory& b);  // by length, then lexicographic
};

std::string render(const InputHistory& s);

InputHistory project(const AgentName& viewer, const InputHistory& s);
std::set<Term> msgs(const InputHistory& s);
bool knows_at(const AgentName& viewer, const InputHistory& s, const Term& m);
bool history_leq(const AgentName& viewer, const InputHistory& s, const InputHistory& s2);
bool history_equiv(const AgentName& viewer, const InputHistory& s, const InputHistory& s2);
bool concrete_access(const Term& m, const InputHistory& s, const InputHistory& s2);

// Right-nested pair of the given terms, e.g. (m1,(m2,m3)).
Term bundle(const std::vector<Term>& terms);

using AtomPredicate = std::function<bool(const InputHistory&)>;

struct ConcreteModel {
  KripkeModel model;
  std::vector<InputHistory> histories;  // state i is histories[i]

  int state_of(const InputHistory& s) const;  // -1 if absent
};

// All histories over agents x pool of length at most depth, each completed by
// an omniscient sink where CM receives the bundle of the pool. The term
// universe is every subterm of a pool term plus CM and the extra terms given.
// Throws std::invalid_argument for an empty pool with depth > 0.
ConcreteModel generate_model(const std::set<AgentName>& agents, const std::set<Term>& pool, int depth,
                             const std::map<std::string, AtomPredicate>& atom_valuation,
                             const std::set<Term>& extra_terms = {});

// Trace file: one `recv <agent> <term>` per line, '#' comments.
InputHistory parse_trace(const std::string& text);
InputHistory load_trace(const std::string& path);

}  // namespace liip
