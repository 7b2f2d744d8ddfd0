// Intuitionistic propositional logic: skeletons and a G4ip decision procedure.
#pragma once

#include <map>
#include <string>
#include <vector>

#include "liip/syntax.hpp"

namespace liip {

// A propositional formula over fresh atoms standing for the maximal
// knowledge and proof subformulas of the original.
struct PropSkeleton {
  Formula skeleton;
  std::map<std::string, Formula> abstraction;  // fresh atom -> original subformula

  Formula restore() const;
};

// Shares fresh atoms across several formulas, so that one subformula gets one
// atom wherever it occurs.
class Skeletonizer {
 public:
  Formula apply(const Formula& f);
  const std::map<std::string, Formula>& abstraction() const { return names_; }

 private:
  std::map<Formula, std::string> atoms_;
  std::map<std::string, Formula> names_;
};

PropSkeleton skeletonize(const Formula& f);

bool is_propositional(const Formula& f);

// Decides whether (hyps[0] & ... ) -> goal is an IPL theorem. Knowledge and
// proof subformulas that remain are treated as opaque atoms.
bool ipl_entails(const std::vector<Formula>& hyps, const Formula& goal);
bool ipl_valid(const Formula& f);

}  // namespace liip
