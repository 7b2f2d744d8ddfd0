// Bounded countermodel search and the validity verdict built on it.
#pragma once

#include <cstdint>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "liip/model.hpp"
#include "liip/syntax.hpp"

namespace liip {

// The finite vocabulary a search ranges over.
struct Universe {
  std::set<std::string> atoms;
  std::set<Term> access_terms;                           // always contains CM
  std::set<std::pair<AgentName, Term>> knowledge_atoms;  // non-pair terms, own names excluded
};

Universe universe_of(const Formula& f);

// Replaces metavariables by fresh atoms (formulas), data (terms) or agents
// (agent positions) so that schematic formulas can be searched.
Formula ground_metas(const Formula& f);

struct Countermodel {
  KripkeModel model;
  int state = 0;
};

struct SearchStats {
  std::uint64_t models = 0;
};

// First countermodel with at most max_states states in the canonical order:
// size, then order skeleton, then knowledge valuations, then relations, then
// atom valuations. `jobs` only changes speed, never the result.
std::optional<Countermodel> find_countermodel(const Formula& f, int max_states, int jobs = 1,
                                              SearchStats* stats = nullptr);

struct Verdict {
  enum class Kind { Valid, Invalid, Unknown };
  Kind kind = Kind::Unknown;
  std::optional<Countermodel> countermodel;
  std::size_t closure_size = 0;
  std::uint64_t bound = 0;  // states needed for an exhaustive search; 0 if astronomically large
  int searched = 0;         // largest model size examined
};

Verdict decide(const Formula& f, int max_states, int jobs = 1);

const char* to_string(Verdict::Kind k);

// Partial orders on n states whose numbering is a linear extension, each
// given as the rows of its upsets, in the canonical order used by the search.
std::vector<Relation> canonical_orders(int n);

}  // namespace liip
