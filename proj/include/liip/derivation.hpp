// Message derivation: the data-mining closure clo_a and the term preorder.
#pragma once

#include <set>

#include "liip/syntax.hpp"

namespace liip {

// Unpair-saturated knowledge of one agent. The full closure clo_a(D) also
// contains every pair buildable from these atoms; membership in it is
// answered on demand by `KnowledgeBase::contains`.
struct KnowledgeBase {
  AgentName owner;
  std::set<Term> atoms;

  bool contains(const Term& goal) const;
};

KnowledgeBase analyze(const AgentName& owner, const std::set<Term>& seed);
bool derives(const AgentName& owner, const std::set<Term>& seed, const Term& goal);
bool term_leq(const AgentName& owner, const Term& m, const Term& m2);

}  // namespace liip
