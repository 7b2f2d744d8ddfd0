// Command-line front end. Exit codes: 0 success/Valid/true, 1 violation/
// Invalid/false, 2 Unknown, 3 usage error.

#include <CLI11.hpp>
#include <iostream>
#include <json.hpp>
#include <sstream>

#include "liip/decide.hpp"
#include "liip/derivation.hpp"
#include "liip/histories.hpp"
#include "liip/kernel.hpp"
#include "liip/model.hpp"
#include "liip/syntax.hpp"

using json = nlohmann::ordered_json;
using namespace liip;

namespace {

constexpr int kOk = 0, kFail = 1, kUnknown = 2, kUsage = 3;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Options {
  int max_states = 4;
  int depth = -1;
  int jobs = 1;
  bool as_json = false;
  bool keep_going = false;
  std::string corpus_dir = default_corpus_dir();
};

Formula read_formula(const std::string& text) {
  try {
    return parse_formula(text);
  } catch (const ParseError& e) {
    throw UsageError(std::string("formula: ") + e.what());
  }
}

json report_json(const ValidationReport& r) {
  json v = json::array();
  for (const auto& x : r.violations) v.push_back({{"clause", x.clause}, {"witness", x.witness}});
  return {{"passed", r.passed}, {"violations", v}};
}

void print_report(const ValidationReport& r) {
  std::cout << (r.passed ? "model: valid LIiP-model\n" : "model: INVALID\n");
  for (const auto& x : r.violations) std::cout << "  violation [" << x.clause << "] " << x.witness << "\n";
}

KripkeModel load_checked(const std::string& path, const Options& o, bool& valid) {
  KripkeModel m = load_model(path);
  ValidationReport r = validate_model(m);
  valid = r.passed;
  if (!r.passed) {
    if (o.as_json) std::cout << json{{"validation", report_json(r)}}.dump(2) << "\n";
    else print_report(r);
  }
  return m;
}

int cmd_parse(const std::string& text, const Options& o) {
  Formula f = read_formula(text);
  if (o.as_json) {
    std::cout << json{{"core", render(f, false)}, {"sugar", render(f, true)}}.dump(2) << "\n";
  } else {
    std::cout << "core:  " << render(f, false) << "\n";
    std::cout << "sugar: " << render(f, true) << "\n";
  }
  return kOk;
}

LemmaDatabase corpus_db(const Options& o, bool keep_going, CorpusReport* out = nullptr) {
  LemmaDatabase db;
  CorpusReport r = run_corpus(db, o.corpus_dir, keep_going);
  if (out) *out = r;
  return db;
}

int cmd_check(const std::string& path, const Options& o) {
  // Every verifiable corpus lemma is made citable, even past a failing one.
  LemmaDatabase db = corpus_db(o, true);
  auto scripts = load_scripts(path);
  bool ok = true;
  json arr = json::array();
  for (const auto& s : scripts) {
    // A script named like a corpus lemma is checked but not registered again,
    // so later scripts in the file cite the corpus version.
    ProofReport r = check_proof(s, db, false);
    if (r.ok && !db.find(s.name)) db.add({s.name, s.premises, s.goal, true});
    ok = ok && r.ok;
    if (o.as_json) {
      arr.push_back({{"name", s.name}, {"ok", r.ok}, {"steps", s.lines.size()}, {"violations", r.violations}});
    } else {
      std::cout << s.name << ": " << (r.ok ? "verified" : "REJECTED") << " (" << s.lines.size() << " lines)\n";
      for (const auto& v : r.violations) std::cout << "  " << v << "\n";
    }
  }
  if (o.as_json) std::cout << json{{"ok", ok}, {"proofs", arr}}.dump(2) << "\n";
  return ok ? kOk : kFail;
}

int cmd_corpus(const Options& o) {
  CorpusReport r;
  corpus_db(o, o.keep_going, &r);
  std::size_t verified = 0;
  for (const auto& e : r.entries) verified += e.ok ? 1 : 0;
  if (o.as_json) {
    json arr = json::array();
    for (const auto& e : r.entries)
      arr.push_back({{"name", e.name}, {"title", e.title}, {"file", e.file}, {"steps", e.steps}, {"ok", e.ok},
                     {"violations", e.violations}});
    std::cout << json{{"ok", r.ok}, {"verified", verified}, {"laws", arr}}.dump(2)
              << "\n";
  } else {
    for (const auto& e : r.entries) {
      std::cout << (e.ok ? "ok   " : "FAIL ") << e.name;
      for (std::size_t i = e.name.size(); i < 8; ++i) std::cout << ' ';
      std::cout << (e.steps < 10 ? " " : "") << e.steps << " lines  " << e.title << "\n";
      for (const auto& v : e.violations) std::cout << "     " << v << "\n";
    }
    std::cout << verified << " of " << r.entries.size() << " scripts verified\n";
  }
  return r.ok ? kOk : kFail;
}

int cmd_decide(const std::string& text, const Options& o) {
  Formula f = read_formula(text);
  Verdict v = decide(f, o.max_states, o.jobs);
  if (o.as_json) {
    json j{{"formula", render(f, true)},
           {"verdict", to_string(v.kind)},
           {"closure_size", v.closure_size},
           {"exhaustive_bound", v.bound},
           {"searched_up_to", v.searched}};
    if (v.countermodel) {
      j["state"] = v.countermodel->model.state_names[static_cast<std::size_t>(v.countermodel->state)];
      j["model"] = serialize_model(v.countermodel->model);
    }
    std::cout << j.dump(2) << "\n";
  } else {
    std::cout << "verdict: " << to_string(v.kind) << "\n";
    std::cout << "closure size " << v.closure_size << ", exhaustive bound ";
    if (v.bound) std::cout << v.bound;
    else std::cout << "unbounded";
    std::cout << " states, searched up to " << v.searched << " states\n";
    if (v.countermodel) {
      std::cout << "fails at state " << v.countermodel->model.state_names[static_cast<std::size_t>(v.countermodel->state)]
                << " of\n"
                << serialize_model(v.countermodel->model);
    }
  }
  switch (v.kind) {
    case Verdict::Kind::Valid:
      return kOk;
    case Verdict::Kind::Invalid:
      return kFail;
    default:
      return kUnknown;
  }
}

int print_bool(bool b, const Options& o, const std::string& what) {
  if (o.as_json) std::cout << json{{"query", what}, {"result", b}}.dump(2) << "\n";
  else std::cout << (b ? "true" : "false") << "\n";
  return b ? kOk : kFail;
}

int cmd_eval(const std::string& path, const std::string& state, const std::string& text, const Options& o) {
  bool valid = true;
  KripkeModel m = load_checked(path, o, valid);
  if (!valid) return kFail;
  auto s = m.state_index(state);
  if (!s) throw UsageError("unknown state " + state);
  Formula f = read_formula(text);
  return print_bool(satisfies(m, *s, f), o, render(f, true) + " at " + state);
}

int cmd_validate(const std::string& path, const Options& o) {
  KripkeModel m = load_model(path);
  ValidationReport r = validate_model(m);
  if (o.as_json) std::cout << report_json(r).dump(2) << "\n";
  else print_report(r);
  return r.passed ? kOk : kFail;
}

int cmd_filter(const std::string& path, const std::string& text, const Options& o) {
  bool valid = true;
  KripkeModel m = load_checked(path, o, valid);
  if (!valid) return kFail;
  Formula f = read_formula(text);
  Filtration flt = minimal_filtration(m, subformula_closure(f));
  ValidationReport r = validate_model(flt.model);
  if (o.as_json) {
    json classes = json::object();
    for (std::size_t s = 0; s < m.size(); ++s)
      classes[m.state_names[s]] = flt.model.state_names[static_cast<std::size_t>(flt.class_of[s])];
    std::cout << json{{"model", serialize_model(flt.model)}, {"classes", classes}, {"validation", report_json(r)}}.dump(2)
              << "\n";
  } else {
    std::cout << serialize_model(flt.model);
    for (std::size_t s = 0; s < m.size(); ++s)
      std::cout << "# " << m.state_names[s] << " -> " << flt.model.state_names[static_cast<std::size_t>(flt.class_of[s])]
                << "\n";
    print_report(r);
  }
  return r.passed ? kOk : kFail;
}

void collect_leaves(const Term& t, std::set<Term>& out) {
  if (t.is_pair()) {
    collect_leaves(t.left(), out);
    collect_leaves(t.right(), out);
  } else {
    out.insert(t);
  }
}

InputHistory prefix(const InputHistory& s, const std::string& len) {
  std::size_t n = 0;
  try {
    n = std::stoul(len);
  } catch (const std::exception&) {
    throw UsageError("expected a prefix length, got " + len);
  }
  if (n > s.events.size()) throw UsageError("prefix length " + len + " exceeds the trace");
  InputHistory out;
  out.events.assign(s.events.begin(), s.events.begin() + static_cast<long>(n));
  return out;
}

int cmd_trace(const std::string& path, const std::vector<std::string>& q, const std::vector<std::string>& atoms,
              const Options& o) {
  InputHistory s = load_trace(path);
  if (q.empty()) throw UsageError("trace needs a query: knows A M | access M i j | sat FORMULA");
  if (q[0] == "knows") {
    if (q.size() != 3) throw UsageError("usage: knows <agent> <term>");
    Term m = parse_term(q[2]);
    return print_bool(knows_at(q[1], s, m), o, "knows " + q[1] + " " + render(m));
  }
  if (q[0] == "access") {
    if (q.size() != 4) throw UsageError("usage: access <term> <prefix> <prefix>");
    Term m = parse_term(q[1]);
    return print_bool(concrete_access(m, prefix(s, q[2]), prefix(s, q[3])), o,
                      "access " + render(m) + " " + q[2] + " " + q[3]);
  }
  if (q[0] == "sat") {
    if (q.size() != 2) throw UsageError("usage: sat <formula>");
    Formula f = read_formula(q[1]);
    std::set<AgentName> agents = agents_of(f);
    std::set<Term> pool;
    for (const auto& e : s.events) {
      agents.insert(e.receiver);
      pool.insert(e.payload);
    }
    for (const auto& t : proof_terms_of(f)) collect_leaves(t, pool);
    pool.erase(Term::cm());
    int depth = o.depth >= 0 ? o.depth : static_cast<int>(s.events.size());
    if (static_cast<std::size_t>(depth) < s.events.size()) throw UsageError("--depth is shorter than the trace");
    std::map<std::string, AtomPredicate> val;
    for (const auto& p : atoms_of(f)) val[p] = [](const InputHistory&) { return false; };
    for (const auto& spec : atoms) {
      auto eq = spec.find('=');
      if (eq == std::string::npos) throw UsageError("--atom expects NAME=PREFIX");
      InputHistory from = prefix(s, spec.substr(eq + 1));
      val[spec.substr(0, eq)] = [from](const InputHistory& h) { return history_leq(kCM, from, h); };
    }
    ConcreteModel cm = generate_model(agents, pool, depth, val, modal_terms_of(f));
    int st = cm.state_of(s);
    bool b = satisfies(cm.model, st, f);
    if (!o.as_json)
      std::cout << "# evaluated in the generated model of depth " << depth << " (" << cm.model.size()
                << " states), an approximation of the infinite concrete model\n";
    return print_bool(b, o, "sat " + render(f, true));
  }
  throw UsageError("unknown trace query " + q[0]);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"LIiP toolkit: parsing, proof checking, model checking and countermodel search"};
  app.require_subcommand(1);
  Options o;
  app.add_option("--max-states", o.max_states, "largest model size searched by decide")->check(CLI::Range(1, 16));
  app.add_option("--depth", o.depth, "history length for generated models (trace sat)");
  app.add_option("--jobs", o.jobs, "worker threads for decide")->check(CLI::Range(1, 256));
  app.add_flag("--json", o.as_json, "machine-readable output");
  app.add_option("--corpus-dir", o.corpus_dir, "directory of the bundled law corpus");

  std::string formula, file, state;
  std::vector<std::string> query, atoms;
  auto* parse = app.add_subcommand("parse", "print the core and sugared forms of a formula");
  parse->add_option("formula", formula)->required();
  auto* check = app.add_subcommand("check", "check a proof script against the corpus lemmas");
  check->add_option("script", file)->required();
  auto* corpus = app.add_subcommand("corpus", "check the bundled law corpus");
  corpus->add_flag("--keep-going", o.keep_going, "report every script instead of halting at the first failure");
  auto* dec = app.add_subcommand("decide", "bounded validity check with countermodel search");
  dec->add_option("formula", formula)->required();
  auto* eval = app.add_subcommand("eval", "evaluate a formula at a state of a model file");
  eval->add_option("model", file)->required();
  eval->add_option("state", state)->required();
  eval->add_option("formula", formula)->required();
  auto* trace = app.add_subcommand("trace", "query a trace: knows A M | access M i j | sat FORMULA");
  trace->add_option("trace", file)->required();
  trace->add_option("query", query)->required();
  trace->add_option("--atom", atoms, "NAME=PREFIX makes an atom true from that trace prefix on");
  auto* filter = app.add_subcommand("filter", "minimal filtration through the closure of a formula");
  filter->add_option("model", file)->required();
  filter->add_option("formula", formula)->required();
  auto* validate = app.add_subcommand("validate", "check a model file against the semantic interface");
  validate->add_option("model", file)->required();
  for (auto* sub : app.get_subcommands({})) sub->fallthrough();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kUsage;
  }

  try {
    if (*parse) return cmd_parse(formula, o);
    if (*check) return cmd_check(file, o);
    if (*corpus) return cmd_corpus(o);
    if (*dec) return cmd_decide(formula, o);
    if (*eval) return cmd_eval(file, state, formula, o);
    if (*trace) return cmd_trace(file, query, atoms, o);
    if (*filter) return cmd_filter(file, formula, o);
    if (*validate) return cmd_validate(file, o);
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  }
  return kUsage;
}
