#include <stdexcept>

#include "liip/model.hpp"

namespace liip {

namespace {

Relation transitive_closure(Relation r) {
  std::size_t n = r.size();
  for (std::size_t k = 0; k < n; ++k)
    for (std::size_t i = 0; i < n; ++i)
      if (r[i].test(k)) r[i] |= r[k];
  return r;
}

Relation compose(const Relation& first, const Relation& second) {
  std::size_t n = first.size();
  Relation out(n, StateSet(n));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t k = first[i].find_first(); k != StateSet::npos; k = first[i].find_next(k)) out[i] |= second[k];
  return out;
}

}  // namespace

Filtration minimal_filtration(const KripkeModel& m, const std::set<Formula>& gamma) {
  if (!is_subformula_closed(gamma)) throw std::invalid_argument("filtration set is not subformula-closed");

  std::vector<Formula> gs(gamma.begin(), gamma.end());
  std::vector<StateSet> truth;
  truth.reserve(gs.size());
  for (const auto& g : gs) truth.push_back(truth_set(m, g));

  // Signature of a state: which members of gamma it satisfies.
  std::size_t n = m.size();
  std::vector<std::vector<bool>> sig(n, std::vector<bool>(gs.size()));
  for (std::size_t s = 0; s < n; ++s)
    for (std::size_t i = 0; i < gs.size(); ++i) sig[s][i] = truth[i].test(s);

  Filtration out;
  std::map<std::vector<bool>, int> class_index;
  out.class_of.resize(n);
  std::vector<std::string> names;
  for (std::size_t s = 0; s < n; ++s) {
    auto [it, fresh] = class_index.emplace(sig[s], static_cast<int>(names.size()));
    if (fresh) names.push_back("[" + m.state_names[s] + "]");
    out.class_of[s] = it->second;
  }
  std::size_t c = names.size();

  auto image_rel = [&](const Relation& r) {
    Relation img(c, StateSet(c));
    for (std::size_t s = 0; s < n; ++s)
      for (std::size_t t = r[s].find_first(); t != StateSet::npos; t = r[s].find_next(t))
        img[out.class_of[s]].set(out.class_of[t]);
    return img;
  };
  auto image_set = [&](const StateSet& v) {
    StateSet img(c);
    for (std::size_t s = v.find_first(); s != StateSet::npos; s = v.find_next(s)) img.set(out.class_of[s]);
    return img;
  };

  KripkeModel& f = out.model;
  f.state_names = names;
  // The image of the order is reflexive and antisymmetric (states in one
  // class agree on gamma, and the order preserves truth), but it need not be
  // transitive, so it is closed here and the modal images are composed with
  // the closed order.
  f.order = transitive_closure(image_rel(m.order));
  f.access[Term::cm()] = f.order;
  // Every term that keeps a knowledge entry needs a relation of its own.
  for (const auto& g : gs) {
    bool modal = g.kind() == Formula::Kind::Proves;
    bool stored = g.kind() == Formula::Kind::Knows && !g.term().is_pair();
    if ((modal || stored) && !g.term().is_cm() && !f.access.count(g.term()))
      f.access.emplace(g.term(), compose(f.order, image_rel(m.access_for(g.term()))));
  }

  for (std::size_t i = 0; i < gs.size(); ++i) {
    const Formula& g = gs[i];
    if (g.kind() == Formula::Kind::Var) {
      f.val[g.name()] = image_set(truth[i]);
    } else if (g.kind() == Formula::Kind::Knows && !g.term().is_pair()) {
      if (!g.agent().is_agent()) throw EvaluationError("cannot filter a knowledge atom with a metavariable agent");
      f.knows[{g.agent().name(), g.term()}] = image_set(truth[i]);
    }
  }
  return out;
}

}  // namespace liip
