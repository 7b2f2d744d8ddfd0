// Message terms, formulas, surface syntax and schema matching for LIiP.
#pragma once

#include <cstddef>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

namespace liip {

using AgentName = std::string;

inline constexpr const char* kCM = "CM";

// Message term. Agent | Data | Pair, plus Meta for schema metavariables.
class Term {
 public:
  enum class Kind : unsigned char { Agent, Data, Pair, Meta };

  Term();  // the agent CM
  static Term agent(const std::string& name);
  static Term data(const std::string& name);
  static Term pair(const Term& l, const Term& r);
  static Term meta(const std::string& name);
  static Term cm() { return agent(kCM); }

  Kind kind() const { return n_->kind; }
  bool is_agent() const { return kind() == Kind::Agent; }
  bool is_pair() const { return kind() == Kind::Pair; }
  bool is_meta() const { return kind() == Kind::Meta; }
  bool is_cm() const { return is_agent() && n_->name == kCM; }
  const std::string& name() const { return n_->name; }
  const Term& left() const { return n_->l[0]; }
  const Term& right() const { return n_->l[1]; }
  std::size_t hash() const { return n_->hash; }
  std::size_t size() const { return n_->size; }

  friend bool operator==(const Term& a, const Term& b);
  friend bool operator!=(const Term& a, const Term& b) { return !(a == b); }
  friend bool operator<(const Term& a, const Term& b) { return compare(a, b) < 0; }
  static int compare(const Term& a, const Term& b);

 private:
  struct Node {
    Kind kind;
    std::string name;
    std::vector<Term> l;  // empty or exactly two children
    std::size_t hash;
    std::size_t size;
  };
  explicit Term(std::shared_ptr<const Node> n) : n_(std::move(n)) {}
  std::shared_ptr<const Node> n_;
};

class Formula {
 public:
  enum class Kind : unsigned char { Var, Meta, Knows, And, Or, Not, Implies, Proves };

  Formula();  // the formula `true`, i.e. k(CM,CM)
  static Formula var(const std::string& name);
  static Formula meta(const std::string& name);
  static Formula knows(const Term& agent, const Term& msg);
  static Formula conj(const Formula& a, const Formula& b);
  static Formula disj(const Formula& a, const Formula& b);
  static Formula neg(const Formula& a);
  static Formula implies(const Formula& a, const Formula& b);
  static Formula proves(const Term& m, const Formula& a);

  // Macros; these only ever build core formulas.
  static Formula top();
  static Formula bottom();
  static Formula iff(const Formula& a, const Formula& b);
  static Formula box(const Formula& a);
  static Formula dia(const Formula& a);
  static Formula diamond(const Term& m, const Formula& a);

  Kind kind() const { return n_->kind; }
  const std::string& name() const { return n_->name; }
  // Knows: agent() and term(); Proves: term() is the proof term.
  const Term& agent() const { return n_->t[0]; }
  const Term& term() const { return n_->t.back(); }
  const Formula& lhs() const { return n_->f[0]; }
  const Formula& rhs() const { return n_->f[1]; }
  const Formula& sub() const { return n_->f[0]; }
  std::size_t hash() const { return n_->hash; }
  std::size_t size() const { return n_->size; }
  const void* id() const { return n_.get(); }

  bool is_binary() const {
    return kind() == Kind::And || kind() == Kind::Or || kind() == Kind::Implies;
  }

  friend bool operator==(const Formula& a, const Formula& b);
  friend bool operator!=(const Formula& a, const Formula& b) { return !(a == b); }
  friend bool operator<(const Formula& a, const Formula& b) { return compare(a, b) < 0; }
  static int compare(const Formula& a, const Formula& b);

 private:
  struct Node {
    Kind kind;
    std::string name;
    std::vector<Term> t;
    std::vector<Formula> f;
    std::size_t hash;
    std::size_t size;
  };
  explicit Formula(std::shared_ptr<const Node> n) : n_(std::move(n)) {}
  static Formula make(Kind k, std::string name, std::vector<Term> t, std::vector<Formula> f);
  std::shared_ptr<const Node> n_;
};

struct TermHash {
  std::size_t operator()(const Term& t) const { return t.hash(); }
};
struct FormulaHash {
  std::size_t operator()(const Formula& f) const { return f.hash(); }
};

// ---------------------------------------------------------------- parsing

struct ParseError : std::runtime_error {
  ParseError(const std::string& msg, std::size_t pos)
      : std::runtime_error(msg + " at position " + std::to_string(pos)), position(pos) {}
  std::size_t position;
};

struct ParseOptions {
  // In schema mode, identifiers phi/psi/chi (with digits or primes) in formula
  // position and capitalised identifiers other than CM in term position are
  // metavariables.
  bool schema = false;
  // When set, k(A,T) must name an agent from this set.
  std::optional<std::set<AgentName>> agents;
};

Formula parse_formula(const std::string& text, const ParseOptions& opts = {});
Term parse_term(const std::string& text, const ParseOptions& opts = {});

std::string render(const Term& t);
std::string render(const Formula& f, bool sugar = true);

// ------------------------------------------------------------ structure

std::set<Formula> subformula_closure(const Formula& f);
std::set<Formula> subformula_closure(const std::set<Formula>& fs);
bool is_subformula_closed(const std::set<Formula>& fs);

// Terms under Knows or Proves, closed under subterms (agent positions excluded).
std::set<Term> proof_terms_of(const Formula& f);
// Terms that index a Proves operator somewhere in f.
std::set<Term> modal_terms_of(const Formula& f);
std::set<std::string> atoms_of(const Formula& f);
std::set<AgentName> agents_of(const Formula& f);
void subterms(const Term& t, std::set<Term>& out);
bool has_meta(const Formula& f);
int modal_depth(const Formula& f);

// ------------------------------------------------------- schema matching

struct SchemaInstantiation {
  std::map<std::string, Formula> formula_metavars;
  std::map<std::string, Term> term_metavars;
  std::map<std::string, Term> agent_metavars;  // bound values are Agent (or Meta) terms

  const Term* lookup_term(const std::string& name) const;
};

std::optional<SchemaInstantiation> match_schema(const Formula& schema, const Formula& target);
// Extends `inst` in place; returns false (leaving inst in an unspecified
// state) on mismatch.
bool match_into(const Formula& schema, const Formula& target, SchemaInstantiation& inst);

Formula substitute(const Formula& f, const SchemaInstantiation& inst);
Term substitute(const Term& t, const SchemaInstantiation& inst);

}  // namespace liip
