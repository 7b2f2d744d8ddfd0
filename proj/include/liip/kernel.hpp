// Hilbert-style proof checking for LIiP and the bundled law corpus.
#pragma once

#include <map>
#include <string>
#include <vector>

#include "liip/syntax.hpp"

namespace liip {

struct Justification {
  enum class Kind { Axiom, Premise, MP, EA, Lemma, IL, Defn };
  Kind kind = Kind::IL;
  std::string name;                   // axiom schema or lemma name
  std::vector<int> cites;             // cited line labels (premise index for Premise)
  SchemaInstantiation bindings;       // explicit metavariable bindings, may be partial
  std::vector<std::string> bound;     // names of the explicit bindings, in order
  // IL only: axiom or premise-free lemma instances added as hypotheses.
  // Metavariables without a binding stand for themselves.
  std::vector<Justification> uses;
};

struct ProofLine {
  int label = 0;
  Formula formula;
  Justification just;
  std::size_t source_line = 0;
};

struct ProofScript {
  std::string name;
  std::string title;
  std::vector<Formula> premises;
  std::vector<ProofLine> lines;
  Formula goal;
  std::size_t source_line = 0;
};

struct Lemma {
  std::string name;
  std::vector<Formula> premises;
  Formula statement;
  bool verified = false;
};

class LemmaDatabase {
 public:
  // Adds a verified lemma; throws std::invalid_argument on a duplicate name.
  void add(Lemma lemma);
  const Lemma* find(const std::string& name) const;
  const std::vector<Lemma>& lemmas() const { return order_; }

 private:
  std::vector<Lemma> order_;
  std::map<std::string, std::size_t> index_;
};

// The axiom schemas: the LIiP-specific ones and an IPL Hilbert basis.
const std::map<std::string, Formula>& axiom_schemas();
// True for the seven LIiP-specific schema names.
bool is_liip_axiom(const std::string& name);

struct LineCheck {
  bool ok = true;
  std::string message;
};

LineCheck check_line(const ProofScript& script, std::size_t index, const LemmaDatabase& db);

struct ProofReport {
  bool ok = true;
  std::vector<std::string> violations;
};

// Checks every line and the goal. On success and with `register_lemma`, the
// script's premises and goal become the lemma `script.name`.
ProofReport check_proof(const ProofScript& script, LemmaDatabase& db, bool register_lemma = true);

std::vector<ProofScript> parse_scripts(const std::string& text);
std::vector<ProofScript> load_scripts(const std::string& path);

// Uniform substitution applied to every formula of a script, including the
// explicit bindings of its justifications.
ProofScript substitute_script(const ProofScript& s, const SchemaInstantiation& inst);

struct CorpusEntry {
  std::string name;
  std::string title;
  std::string file;
  std::size_t steps = 0;
  bool ok = false;
  std::vector<std::string> violations;
};

struct CorpusReport {
  bool ok = true;
  std::vector<CorpusEntry> entries;
  double seconds = 0;
};

// Directory holding the bundled corpus (index.txt lists files in order).
std::string default_corpus_dir();

// Checks all scripts listed in <dir>/index.txt in order, registering each
// verified script as a lemma. Stops at the first failure unless `keep_going`,
// in which case failed scripts are reported and simply not registered.
CorpusReport run_corpus(LemmaDatabase& db, const std::string& dir = default_corpus_dir(), bool keep_going = false);

}  // namespace liip
