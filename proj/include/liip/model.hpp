// Finite Kripke models for LIiP: validation against the semantic interface,
// satisfaction, minimal filtration, and a plain-text model format.
#pragma once

#include <boost/dynamic_bitset.hpp>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "liip/syntax.hpp"

namespace liip {

using StateSet = boost::dynamic_bitset<>;
// relation[s] is the successor set of state s.
using Relation = std::vector<StateSet>;

struct EvaluationError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct KripkeModel {
  std::vector<std::string> state_names;
  Relation order;                                      // order[s] = upset of s
  std::map<Term, Relation> access;                     // R^M; contains CM
  std::map<std::string, StateSet> val;                 // propositional atoms
  std::map<std::pair<AgentName, Term>, StateSet> knows;  // knowledge of non-pair terms

  std::size_t size() const { return state_names.size(); }
  StateSet empty_set() const { return StateSet(size()); }
  StateSet full_set() const { return ~StateSet(size()); }

  // Extension of k_a M. Own names are known everywhere unless stored; pairs
  // follow their components. Returns nothing for unstored atomic terms.
  std::optional<StateSet> knowledge(const AgentName& a, const Term& m) const;
  std::optional<int> state_index(const std::string& name) const;
  const Relation& access_for(const Term& m) const;  // throws EvaluationError
};

// A model with `n` states named 0..n-1, the given order (rows are upsets),
// R^CM = order and no atoms.
KripkeModel make_model(std::size_t n, const Relation& order);
Relation identity_relation(std::size_t n);

struct Violation {
  std::string clause;
  std::string witness;
};

struct ValidationReport {
  bool passed = true;
  std::vector<Violation> violations;
};

ValidationReport validate_model(const KripkeModel& m);

StateSet truth_set(const KripkeModel& m, const Formula& f);
bool satisfies(const KripkeModel& m, int state, const Formula& f);
bool globally_true(const KripkeModel& m, const Formula& f);

// Adds R^T for each listed term T that is missing but whose CM-knowledge
// extension coincides with that of a term already present. Model-local proof
// monotonicity forces R^T to equal that term's relation. Throws
// EvaluationError when no such term exists.
void extend_access(KripkeModel& m, const std::set<Term>& terms);

struct Filtration {
  KripkeModel model;
  std::vector<int> class_of;  // original state -> class index
};

// Quotient by agreement on gamma. Throws std::invalid_argument if gamma is
// not subformula-closed.
Filtration minimal_filtration(const KripkeModel& m, const std::set<Formula>& gamma);

// Plain-text model format, see README.
KripkeModel parse_model(const std::string& text);
KripkeModel load_model(const std::string& path);
std::string serialize_model(const KripkeModel& m);

}  // namespace liip
