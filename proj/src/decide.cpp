#include "liip/decide.hpp"

#include <atomic>
#include <functional>
#include <map>
#include <mutex>
#include <stdexcept>
#include <thread>

namespace liip {

namespace {

using Mask = std::uint64_t;
constexpr int kMaxStates = 16;

void leaves(const Term& t, std::vector<Term>& out) {
  if (t.is_pair()) {
    leaves(t.left(), out);
    leaves(t.right(), out);
  } else {
    out.push_back(t);
  }
}

// Metavariables that occur in an agent slot become agents everywhere, the
// rest become data.
Term ground_term(const Term& t, const std::set<std::string>& agents) {
  switch (t.kind()) {
    case Term::Kind::Meta:
      return agents.count(t.name()) ? Term::agent(t.name()) : Term::data(t.name());
    case Term::Kind::Pair:
      return Term::pair(ground_term(t.left(), agents), ground_term(t.right(), agents));
    default:
      return t;
  }
}

void agent_metas(const Formula& f, std::set<std::string>& out) {
  using K = Formula::Kind;
  switch (f.kind()) {
    case K::Knows:
      if (f.agent().is_meta()) out.insert(f.agent().name());
      break;
    case K::Not:
    case K::Proves:
      agent_metas(f.sub(), out);
      break;
    case K::And:
    case K::Or:
    case K::Implies:
      agent_metas(f.lhs(), out);
      agent_metas(f.rhs(), out);
      break;
    default:
      break;
  }
}

Formula ground_with(const Formula& f, const std::set<std::string>& agents) {
  using K = Formula::Kind;
  switch (f.kind()) {
    case K::Meta:
      return Formula::var(f.name());
    case K::Var:
      return f;
    case K::Knows:
      return Formula::knows(ground_term(f.agent(), agents), ground_term(f.term(), agents));
    case K::Not:
      return Formula::neg(ground_with(f.sub(), agents));
    case K::Proves:
      return Formula::proves(ground_term(f.term(), agents), ground_with(f.sub(), agents));
    case K::And:
      return Formula::conj(ground_with(f.lhs(), agents), ground_with(f.rhs(), agents));
    case K::Or:
      return Formula::disj(ground_with(f.lhs(), agents), ground_with(f.rhs(), agents));
    case K::Implies:
      return Formula::implies(ground_with(f.lhs(), agents), ground_with(f.rhs(), agents));
  }
  return f;
}

bool subset(Mask a, Mask b) { return (a & ~b) == 0; }

// ------------------------------------------------------- compiled formula

struct Op {
  enum Kind { Var, Know, And, Or, Not, Imp, Box } kind;
  int a = -1, b = -1;   // operand op indices
  int idx = -1;         // atom or access-term index
  std::vector<int> kn;  // knowledge-atom indices for Know
};

struct Compiled {
  std::vector<Op> ops;
  std::vector<std::string> atoms;
  std::vector<Term> terms;  // access terms; index 0 is CM
  std::vector<std::pair<AgentName, Term>> katoms;
  std::vector<std::vector<int>> term_leaves;  // knowledge-atom indices of CM's knowledge of each term
  int root = -1;
};

Compiled compile(const Formula& f, const Universe& u) {
  Compiled c;
  c.atoms.assign(u.atoms.begin(), u.atoms.end());
  c.terms.push_back(Term::cm());
  for (const auto& t : u.access_terms)
    if (!t.is_cm()) c.terms.push_back(t);
  c.katoms.assign(u.knowledge_atoms.begin(), u.knowledge_atoms.end());
  auto katom = [&](const AgentName& a, const Term& t) {
    for (std::size_t i = 0; i < c.katoms.size(); ++i)
      if (c.katoms[i].first == a && c.katoms[i].second == t) return static_cast<int>(i);
    throw std::logic_error("knowledge atom missing from universe");
  };
  auto knows_leaves = [&](const AgentName& a, const Term& t) {
    std::vector<Term> ls;
    leaves(t, ls);
    std::vector<int> out;
    for (const auto& l : ls)
      if (!(l.is_agent() && l.name() == a)) out.push_back(katom(a, l));
    return out;
  };
  for (const auto& t : c.terms) c.term_leaves.push_back(knows_leaves(kCM, t));

  std::map<const void*, int> memo;
  std::function<int(const Formula&)> go = [&](const Formula& g) -> int {
    if (auto it = memo.find(g.id()); it != memo.end()) return it->second;
    Op op;
    op.kind = Op::Var;
    using K = Formula::Kind;
    switch (g.kind()) {
      case K::Var:
        op.kind = Op::Var;
        for (std::size_t i = 0; i < c.atoms.size(); ++i)
          if (c.atoms[i] == g.name()) op.idx = static_cast<int>(i);
        break;
      case K::Knows:
        op.kind = Op::Know;
        op.kn = knows_leaves(g.agent().name(), g.term());
        break;
      case K::And:
      case K::Or:
      case K::Implies:
        op.kind = g.kind() == K::And ? Op::And : g.kind() == K::Or ? Op::Or : Op::Imp;
        op.a = go(g.lhs());
        op.b = go(g.rhs());
        break;
      case K::Not:
        op.kind = Op::Not;
        op.a = go(g.sub());
        break;
      case K::Proves:
        op.kind = Op::Box;
        op.a = go(g.sub());
        for (std::size_t i = 0; i < c.terms.size(); ++i)
          if (c.terms[i] == g.term()) op.idx = static_cast<int>(i);
        break;
      case K::Meta:
        throw std::invalid_argument("metavariables must be grounded before search");
    }
    c.ops.push_back(op);
    int id = static_cast<int>(c.ops.size()) - 1;
    memo.emplace(g.id(), id);
    return id;
  };
  c.root = go(f);
  return c;
}

// ------------------------------------------------------------ enumeration

struct Frame {
  int n;
  Mask full;
  std::vector<Mask> up;
  std::vector<Mask> upsets;
};

std::vector<Mask> all_upsets(int n, const std::vector<Mask>& up) {
  std::vector<Mask> out;
  Mask limit = Mask{1} << n;
  for (Mask s = 0; s < limit; ++s) {
    bool closed = true;
    for (int i = 0; i < n && closed; ++i)
      if ((s >> i & 1) && !subset(up[static_cast<std::size_t>(i)], s)) closed = false;
    if (closed) out.push_back(s);
  }
  return out;
}

std::vector<std::vector<Mask>> orders_as_masks(int n) {
  // Pairs (i,j) with i<j in lexicographic order; a Hasse edge set is kept if
  // it equals the transitive reduction of its closure.
  std::vector<std::pair<int, int>> pairs;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) pairs.emplace_back(i, j);
  std::vector<std::vector<Mask>> out;
  std::size_t p = pairs.size();
  for (Mask e = 0; e < (Mask{1} << p); ++e) {
    std::vector<Mask> up(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) up[static_cast<std::size_t>(i)] = Mask{1} << i;
    for (std::size_t k = 0; k < p; ++k)
      if (e >> k & 1) up[static_cast<std::size_t>(pairs[k].first)] |= Mask{1} << pairs[k].second;
    // Close; higher-numbered states are finished first since edges go upward.
    for (int i = n - 1; i >= 0; --i) {
      Mask m = up[static_cast<std::size_t>(i)];
      for (int j = i + 1; j < n; ++j)
        if (m >> j & 1) up[static_cast<std::size_t>(i)] |= up[static_cast<std::size_t>(j)];
    }
    bool reduced = true;
    for (std::size_t k = 0; k < p && reduced; ++k) {
      if (!(e >> k & 1)) continue;
      auto [i, j] = pairs[k];
      for (int m = i + 1; m < j; ++m)
        if ((up[static_cast<std::size_t>(i)] >> m & 1) && (up[static_cast<std::size_t>(m)] >> j & 1)) reduced = false;
    }
    if (reduced) out.push_back(up);
  }
  return out;
}

struct Found {
  std::vector<Mask> up;
  std::vector<Mask> katoms;
  std::vector<std::vector<Mask>> rel;  // per access term
  std::vector<Mask> atoms;
  int state;
};

class Search {
 public:
  Search(const Compiled& c, const Frame& fr, std::atomic<bool>& stop) : c_(c), fr_(fr), stop_(stop) {
    kval_.resize(c.katoms.size());
    rel_.assign(c.terms.size(), std::vector<Mask>(static_cast<std::size_t>(fr.n)));
    rel_[0] = fr.up;
    kterm_.resize(c.terms.size());
    aval_.resize(c.atoms.size());
    vals_.resize(c.ops.size());
  }

  std::optional<Found> run() {
    if (knowledge(0)) return found_;
    return std::nullopt;
  }

  std::uint64_t models = 0;

 private:
  bool knowledge(std::size_t i) {
    if (stop_.load(std::memory_order_relaxed)) return false;
    if (i == kval_.size()) {
      for (std::size_t t = 0; t < c_.terms.size(); ++t) {
        Mask k = fr_.full;
        for (int l : c_.term_leaves[t]) k &= kval_[static_cast<std::size_t>(l)];
        kterm_[t] = k;
      }
      return relation(1);
    }
    for (Mask u : fr_.upsets) {
      kval_[i] = u;
      if (knowledge(i + 1)) return true;
    }
    return false;
  }

  bool monotone_with_earlier(std::size_t t) const {
    for (std::size_t o = 0; o < t; ++o) {
      if (subset(kterm_[t], kterm_[o])) {
        for (int s = 0; s < fr_.n; ++s)
          if (!subset(rel_[t][static_cast<std::size_t>(s)], rel_[o][static_cast<std::size_t>(s)])) return false;
      }
      if (subset(kterm_[o], kterm_[t])) {
        for (int s = 0; s < fr_.n; ++s)
          if (!subset(rel_[o][static_cast<std::size_t>(s)], rel_[t][static_cast<std::size_t>(s)])) return false;
      }
    }
    return true;
  }

  bool relation(std::size_t t) {
    if (t == c_.terms.size()) return atoms(0);
    return successors(t, fr_.n - 1);
  }

  // Chooses successor sets from the top state down, so special transitivity
  // is a lower bound for each choice.
  bool successors(std::size_t t, int s) {
    if (s < 0) {
      if (!monotone_with_earlier(t)) return false;
      return relation(t + 1);
    }
    auto su = static_cast<std::size_t>(s);
    Mask k = kterm_[t];
    Mask cand = fr_.up[su] & k;
    Mask req = (k >> s & 1) ? Mask{1} << s : 0;
    for (int u = s + 1; u < fr_.n; ++u)
      if (fr_.up[su] >> u & 1) req |= rel_[t][static_cast<std::size_t>(u)];
    Mask free = cand & ~req;
    // Enumerate subsets of `free` in increasing order.
    Mask sub = 0;
    while (true) {
      Mask succ = req | sub;
      if (succ != 0) {
        rel_[t][su] = succ;
        if (successors(t, s - 1)) return true;
      }
      if (sub == free) break;
      sub = (sub - free) & free;
      if (stop_.load(std::memory_order_relaxed)) return false;
    }
    return false;
  }

  bool atoms(std::size_t i) {
    if (i == aval_.size()) return evaluate();
    for (Mask u : fr_.upsets) {
      aval_[i] = u;
      if (atoms(i + 1)) return true;
    }
    return false;
  }

  Mask box(const std::vector<Mask>& rel, Mask target) const {
    Mask out = 0;
    for (int s = 0; s < fr_.n; ++s)
      if (subset(rel[static_cast<std::size_t>(s)], target)) out |= Mask{1} << s;
    return out;
  }

  bool evaluate() {
    ++models;
    for (std::size_t i = 0; i < c_.ops.size(); ++i) {
      const Op& op = c_.ops[i];
      Mask v = 0;
      switch (op.kind) {
        case Op::Var:
          v = aval_[static_cast<std::size_t>(op.idx)];
          break;
        case Op::Know:
          v = fr_.full;
          for (int k : op.kn) v &= kval_[static_cast<std::size_t>(k)];
          break;
        case Op::And:
          v = vals_[static_cast<std::size_t>(op.a)] & vals_[static_cast<std::size_t>(op.b)];
          break;
        case Op::Or:
          v = vals_[static_cast<std::size_t>(op.a)] | vals_[static_cast<std::size_t>(op.b)];
          break;
        case Op::Not:
          v = box(fr_.up, fr_.full & ~vals_[static_cast<std::size_t>(op.a)]);
          break;
        case Op::Imp:
          v = box(fr_.up, (fr_.full & ~vals_[static_cast<std::size_t>(op.a)]) | vals_[static_cast<std::size_t>(op.b)]);
          break;
        case Op::Box:
          v = box(rel_[static_cast<std::size_t>(op.idx)], vals_[static_cast<std::size_t>(op.a)]);
          break;
      }
      vals_[i] = v;
    }
    Mask root = vals_[static_cast<std::size_t>(c_.root)];
    if (root == fr_.full) return false;
    int state = 0;
    while (root >> state & 1) ++state;
    found_ = Found{fr_.up, kval_, rel_, aval_, state};
    return true;
  }

  const Compiled& c_;
  const Frame& fr_;
  std::atomic<bool>& stop_;
  std::vector<Mask> kval_;
  std::vector<Mask> kterm_;
  std::vector<std::vector<Mask>> rel_;
  std::vector<Mask> aval_;
  std::vector<Mask> vals_;
  Found found_;
};

Relation to_relation(const std::vector<Mask>& rows, int n) {
  Relation r(static_cast<std::size_t>(n), StateSet(static_cast<std::size_t>(n)));
  for (int s = 0; s < n; ++s)
    for (int t = 0; t < n; ++t)
      if (rows[static_cast<std::size_t>(s)] >> t & 1) r[static_cast<std::size_t>(s)].set(static_cast<std::size_t>(t));
  return r;
}

StateSet to_set(Mask m, int n) {
  StateSet s(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i)
    if (m >> i & 1) s.set(static_cast<std::size_t>(i));
  return s;
}

Countermodel build(const Compiled& c, const Found& f, int n) {
  Countermodel cm;
  cm.model = make_model(static_cast<std::size_t>(n), to_relation(f.up, n));
  for (std::size_t t = 1; t < c.terms.size(); ++t) cm.model.access[c.terms[t]] = to_relation(f.rel[t], n);
  for (std::size_t i = 0; i < c.atoms.size(); ++i) cm.model.val[c.atoms[i]] = to_set(f.atoms[i], n);
  for (std::size_t i = 0; i < c.katoms.size(); ++i) cm.model.knows[c.katoms[i]] = to_set(f.katoms[i], n);
  cm.state = f.state;
  return cm;
}

}  // namespace

namespace {

void add_leaves(const AgentName& a, const Term& t, Universe& u) {
  std::vector<Term> ls;
  leaves(t, ls);
  for (const auto& l : ls)
    if (!(l.is_agent() && l.name() == a)) u.knowledge_atoms.insert({a, l});
}

}  // namespace

Universe universe_of(const Formula& f) {
  Universe u;
  u.atoms = atoms_of(f);
  // Every term of the formula carries an access relation. A term mentioned
  // only under k(CM,.) still needs one, as seriality is what makes its CM
  // knowledge cofinal.
  u.access_terms = proof_terms_of(f);
  u.access_terms.insert(Term::cm());
  for (const auto& t : u.access_terms) add_leaves(kCM, t, u);
  auto add = [&](const AgentName& a, const Term& t) { add_leaves(a, t, u); };
  std::function<void(const Formula&)> walk = [&](const Formula& g) {
    using K = Formula::Kind;
    switch (g.kind()) {
      case K::Knows:
        add(g.agent().name(), g.term());
        break;
      case K::Proves:
        add(kCM, g.term());
        walk(g.sub());
        break;
      case K::Not:
        walk(g.sub());
        break;
      case K::And:
      case K::Or:
      case K::Implies:
        walk(g.lhs());
        walk(g.rhs());
        break;
      default:
        break;
    }
  };
  walk(f);
  return u;
}

Formula ground_metas(const Formula& f) {
  std::set<std::string> agents;
  agent_metas(f, agents);
  return ground_with(f, agents);
}

std::vector<Relation> canonical_orders(int n) {
  std::vector<Relation> out;
  for (const auto& up : orders_as_masks(n)) out.push_back(to_relation(up, n));
  return out;
}

std::optional<Countermodel> find_countermodel(const Formula& input, int max_states, int jobs, SearchStats* stats) {
  if (max_states < 1) throw std::invalid_argument("max_states must be at least 1");
  if (max_states > kMaxStates) throw std::invalid_argument("max_states above " + std::to_string(kMaxStates) + " is not supported");
  Formula f = ground_metas(input);
  Compiled c = compile(f, universe_of(f));
  jobs = std::max(1, jobs);

  for (int n = 1; n <= max_states; ++n) {
    auto orders = orders_as_masks(n);
    std::vector<Frame> frames;
    for (auto& up : orders) {
      Frame fr{n, n == 64 ? ~Mask{0} : (Mask{1} << n) - 1, up, {}};
      fr.upsets = all_upsets(n, fr.up);
      frames.push_back(std::move(fr));
    }
    std::vector<std::optional<Found>> results(frames.size());
    std::vector<std::atomic<bool>> stops(frames.size());
    for (auto& s : stops) s.store(false);
    std::atomic<std::size_t> next{0};
    std::atomic<std::size_t> best{frames.size()};
    std::atomic<std::uint64_t> models{0};

    auto worker = [&] {
      while (true) {
        std::size_t i = next.fetch_add(1);
        if (i >= frames.size() || i > best.load()) return;
        Search s(c, frames[i], stops[i]);
        results[i] = s.run();
        models += s.models;
        if (results[i]) {
          std::size_t cur = best.load();
          while (i < cur && !best.compare_exchange_weak(cur, i)) {
          }
          for (std::size_t k = i + 1; k < frames.size(); ++k) stops[k].store(true);
        }
      }
    };
    if (jobs == 1) {
      worker();
    } else {
      std::vector<std::thread> pool;
      for (int j = 0; j < jobs; ++j) pool.emplace_back(worker);
      for (auto& t : pool) t.join();
    }
    if (stats) stats->models += models.load();
    for (std::size_t i = 0; i < frames.size(); ++i)
      if (results[i]) return build(c, *results[i], n);
  }
  return std::nullopt;
}

Verdict decide(const Formula& f, int max_states, int jobs) {
  Verdict v;
  v.closure_size = subformula_closure(Formula::neg(ground_metas(f))).size();
  v.bound = v.closure_size < 63 ? (std::uint64_t{1} << v.closure_size) : 0;
  int limit = max_states;
  bool exhaustive = v.bound != 0 && static_cast<std::uint64_t>(max_states) >= v.bound;
  if (exhaustive) limit = static_cast<int>(v.bound);
  v.countermodel = find_countermodel(f, limit, jobs);
  v.searched = limit;
  if (v.countermodel) v.kind = Verdict::Kind::Invalid;
  else v.kind = exhaustive ? Verdict::Kind::Valid : Verdict::Kind::Unknown;
  return v;
}

const char* to_string(Verdict::Kind k) {
  switch (k) {
    case Verdict::Kind::Valid:
      return "Valid";
    case Verdict::Kind::Invalid:
      return "Invalid";
    case Verdict::Kind::Unknown:
      return "Unknown";
  }
  return "?";
}

}  // namespace liip
