// Contraction-free sequent search (Dyckhoff's G4ip). Invertible rules are
// applied eagerly; the only backtracking points are right disjunction and the
// left rule for nested implications.

#include "liip/ipl.hpp"

#include <algorithm>
#include <functional>
#include <unordered_map>

namespace liip {

Formula PropSkeleton::restore() const {
  std::function<Formula(const Formula&)> go = [&](const Formula& g) -> Formula {
    using K = Formula::Kind;
    switch (g.kind()) {
      case K::Var: {
        auto it = abstraction.find(g.name());
        return it == abstraction.end() ? g : it->second;
      }
      case K::Not:
        return Formula::neg(go(g.sub()));
      case K::And:
        return Formula::conj(go(g.lhs()), go(g.rhs()));
      case K::Or:
        return Formula::disj(go(g.lhs()), go(g.rhs()));
      case K::Implies:
        return Formula::implies(go(g.lhs()), go(g.rhs()));
      default:
        return g;
    }
  };
  return go(skeleton);
}

Formula Skeletonizer::apply(const Formula& f) {
  using K = Formula::Kind;
  switch (f.kind()) {
    case K::Var:
    case K::Meta:
      return f;
    case K::Knows:
    case K::Proves: {
      auto it = atoms_.find(f);
      if (it == atoms_.end()) {
        std::string name = "#" + std::to_string(atoms_.size() + 1);
        it = atoms_.emplace(f, name).first;
        names_.emplace(name, f);
      }
      return Formula::var(it->second);
    }
    case K::Not:
      return Formula::neg(apply(f.sub()));
    case K::And:
      return Formula::conj(apply(f.lhs()), apply(f.rhs()));
    case K::Or:
      return Formula::disj(apply(f.lhs()), apply(f.rhs()));
    case K::Implies:
      return Formula::implies(apply(f.lhs()), apply(f.rhs()));
  }
  return f;
}

PropSkeleton skeletonize(const Formula& f) {
  Skeletonizer s;
  Formula sk = s.apply(f);
  return {sk, s.abstraction()};
}

bool is_propositional(const Formula& f) {
  using K = Formula::Kind;
  switch (f.kind()) {
    case K::Var:
    case K::Meta:
      return true;
    case K::Knows:
    case K::Proves:
      return false;
    case K::Not:
      return is_propositional(f.sub());
    default:
      return is_propositional(f.lhs()) && is_propositional(f.rhs());
  }
}

namespace {

class G4ip {
 public:
  enum Kind : unsigned char { Atom, Bot, And, Or, Imp };

  int convert(const Formula& f) {
    using K = Formula::Kind;
    switch (f.kind()) {
      case K::Var:
        return atom("v" + f.name());
      case K::Meta:
        return atom("m" + f.name());
      case K::Knows:
      case K::Proves:
        return atom("x" + render(f, false));
      case K::Not:
        return node(Imp, convert(f.sub()), bot());
      case K::And:
        return node(And, convert(f.lhs()), convert(f.rhs()));
      case K::Or:
        return node(Or, convert(f.lhs()), convert(f.rhs()));
      case K::Implies:
        return node(Imp, convert(f.lhs()), convert(f.rhs()));
    }
    return bot();
  }

  bool prove(std::vector<int> ctx, int goal) {
    std::sort(ctx.begin(), ctx.end());
    ctx.erase(std::unique(ctx.begin(), ctx.end()), ctx.end());
    Key key{ctx, goal};
    if (auto it = memo_.find(key); it != memo_.end()) return it->second;
    bool r = search(ctx, goal);
    memo_.emplace(std::move(key), r);
    return r;
  }

 private:
  struct Node {
    Kind kind;
    int a, b;
    bool operator==(const Node& o) const { return kind == o.kind && a == o.a && b == o.b; }
  };
  struct NodeHash {
    std::size_t operator()(const Node& n) const {
      return (static_cast<std::size_t>(n.kind) * 1000003u) ^ (static_cast<std::size_t>(n.a) * 7919u) ^
             static_cast<std::size_t>(n.b);
    }
  };
  struct Key {
    std::vector<int> ctx;
    int goal;
    bool operator==(const Key& o) const { return goal == o.goal && ctx == o.ctx; }
  };
  struct KeyHash {
    std::size_t operator()(const Key& k) const {
      std::size_t h = static_cast<std::size_t>(k.goal);
      for (int x : k.ctx) h = h * 31 + static_cast<std::size_t>(x);
      return h;
    }
  };

  int node(Kind k, int a, int b) {
    Node n{k, a, b};
    auto it = index_.find(n);
    if (it != index_.end()) return it->second;
    int id = static_cast<int>(nodes_.size());
    nodes_.push_back(n);
    index_.emplace(n, id);
    return id;
  }
  int bot() { return node(Bot, -1, -1); }
  int atom(const std::string& name) {
    auto it = atom_ids_.find(name);
    int aid = it != atom_ids_.end() ? it->second : (atom_ids_[name] = static_cast<int>(atom_ids_.size()));
    return node(Atom, aid, -1);
  }
  const Node& at(int id) const { return nodes_[static_cast<std::size_t>(id)]; }

  static std::vector<int> without(const std::vector<int>& ctx, std::size_t i) {
    std::vector<int> out = ctx;
    out.erase(out.begin() + static_cast<long>(i));
    return out;
  }
  static bool has(const std::vector<int>& ctx, int x) { return std::binary_search(ctx.begin(), ctx.end(), x); }

  bool search(const std::vector<int>& ctx, int goal) {
    // Axioms.
    if (has(ctx, bot())) return true;
    if (at(goal).kind == Atom && has(ctx, goal)) return true;

    // Invertible left rules.
    for (std::size_t i = 0; i < ctx.size(); ++i) {
      const Node n = at(ctx[i]);
      if (n.kind == And) {
        auto c = without(ctx, i);
        c.push_back(n.a);
        c.push_back(n.b);
        return prove(c, goal);
      }
      if (n.kind == Or) {
        auto c = without(ctx, i);
        auto c2 = c;
        c.push_back(n.a);
        c2.push_back(n.b);
        return prove(c, goal) && prove(c2, goal);
      }
      if (n.kind == Imp) {
        const Node ante = at(n.a);
        if (ante.kind == Bot) return prove(without(ctx, i), goal);
        if (ante.kind == Atom && has(ctx, n.a)) {
          auto c = without(ctx, i);
          c.push_back(n.b);
          return prove(c, goal);
        }
        if (ante.kind == And) {
          auto c = without(ctx, i);
          c.push_back(node(Imp, ante.a, node(Imp, ante.b, n.b)));
          return prove(c, goal);
        }
        if (ante.kind == Or) {
          auto c = without(ctx, i);
          c.push_back(node(Imp, ante.a, n.b));
          c.push_back(node(Imp, ante.b, n.b));
          return prove(c, goal);
        }
      }
    }

    // Invertible right rules.
    const Node g = at(goal);
    if (g.kind == And) return prove(ctx, g.a) && prove(ctx, g.b);
    if (g.kind == Imp) {
      auto c = ctx;
      c.push_back(g.a);
      return prove(c, g.b);
    }

    // Non-invertible choices.
    if (g.kind == Or && (prove(ctx, g.a) || prove(ctx, g.b))) return true;
    for (std::size_t i = 0; i < ctx.size(); ++i) {
      const Node n = at(ctx[i]);
      if (n.kind != Imp || at(n.a).kind != Imp) continue;
      const Node inner = at(n.a);  // (C -> D) -> B
      auto c = without(ctx, i);
      auto left = c;
      left.push_back(node(Imp, inner.b, n.b));
      if (!prove(left, n.a)) continue;
      c.push_back(n.b);
      if (prove(c, goal)) return true;
    }
    return false;
  }

  std::vector<Node> nodes_;
  std::unordered_map<Node, int, NodeHash> index_;
  std::unordered_map<std::string, int> atom_ids_;
  std::unordered_map<Key, bool, KeyHash> memo_;
};

}  // namespace

bool ipl_entails(const std::vector<Formula>& hyps, const Formula& goal) {
  G4ip g;
  std::vector<int> ctx;
  for (const auto& h : hyps) ctx.push_back(g.convert(h));
  return g.prove(ctx, g.convert(goal));
}

bool ipl_valid(const Formula& f) { return ipl_entails({}, f); }

}  // namespace liip
