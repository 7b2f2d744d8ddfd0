#include "liip/derivation.hpp"

#include <vector>

namespace liip {

KnowledgeBase analyze(const AgentName& owner, const std::set<Term>& seed) {
  KnowledgeBase kb{owner, {}};
  std::vector<Term> work(seed.begin(), seed.end());
  work.push_back(Term::agent(owner));
  while (!work.empty()) {
    Term t = std::move(work.back());
    work.pop_back();
    if (!kb.atoms.insert(t).second) continue;
    if (t.is_pair()) {
      work.push_back(t.left());
      work.push_back(t.right());
    }
  }
  return kb;
}

bool KnowledgeBase::contains(const Term& goal) const {
  if (atoms.count(goal)) return true;
  return goal.is_pair() && contains(goal.left()) && contains(goal.right());
}

bool derives(const AgentName& owner, const std::set<Term>& seed, const Term& goal) {
  return analyze(owner, seed).contains(goal);
}

bool term_leq(const AgentName& owner, const Term& m, const Term& m2) {
  return derives(owner, {m}, m2);
}

}  // namespace liip
