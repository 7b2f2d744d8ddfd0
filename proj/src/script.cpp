// Proof-script files and the corpus runner.
//
//   proof <name> [title...]
//   premise <formula>
//   <n>. <formula> ; <justification>
//   qed <formula>
//
// Justifications: axiom NAME {bindings} | premise [i] | mp i j | ea i |
// lemma NAME [i,j,...] {bindings} | il [i,j,...] [+ axiom|lemma NAME {bindings}]... |
// defn [i].
// Bindings are `name=value` pairs separated by top-level commas.

#include <chrono>
#include <cctype>
#include <fstream>
#include <sstream>

#include "liip/kernel.hpp"

#ifndef LIIP_CORPUS_DIR
#define LIIP_CORPUS_DIR "corpus"
#endif

namespace liip {

namespace {

std::string trim(const std::string& s) {
  auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

struct ScriptError : std::runtime_error {
  ScriptError(std::size_t line, const std::string& msg)
      : std::runtime_error("script line " + std::to_string(line) + ": " + msg) {}
};

ParseOptions schema_opts() {
  ParseOptions o;
  o.schema = true;
  return o;
}

Formula formula_at(const std::string& text, std::size_t line) {
  try {
    return parse_formula(text, schema_opts());
  } catch (const ParseError& e) {
    throw ScriptError(line, e.what());
  }
}

// Splits on commas that are not nested inside brackets.
std::vector<std::string> split_top(const std::string& s) {
  std::vector<std::string> out;
  int depth = 0;
  std::string cur;
  for (char c : s) {
    if (c == '(' || c == '[' || c == '{') ++depth;
    if (c == ')' || c == ']' || c == '}') --depth;
    if (c == ',' && depth == 0) {
      out.push_back(cur);
      cur.clear();
    } else {
      cur += c;
    }
  }
  if (!trim(cur).empty() || !out.empty()) out.push_back(cur);
  return out;
}

void parse_bindings(const std::string& body, Justification& j, std::size_t line) {
  for (const auto& item : split_top(body)) {
    auto eq = item.find('=');
    if (eq == std::string::npos) throw ScriptError(line, "binding without '=': " + trim(item));
    std::string key = trim(item.substr(0, eq));
    std::string val = trim(item.substr(eq + 1));
    if (key.empty()) throw ScriptError(line, "empty binding name");
    try {
      if (std::isupper(static_cast<unsigned char>(key[0])))
        j.bindings.term_metavars[key] = parse_term(val, schema_opts());
      else
        j.bindings.formula_metavars[key] = parse_formula(val, schema_opts());
    } catch (const ParseError& e) {
      throw ScriptError(line, "binding " + key + ": " + e.what());
    }
    j.bound.push_back(key);
  }
}

std::vector<int> parse_numbers(const std::string& s, std::size_t line) {
  std::vector<int> out;
  std::string cleaned = s;
  for (char& c : cleaned)
    if (c == ',') c = ' ';
  std::istringstream in(cleaned);
  for (std::string w; in >> w;) {
    try {
      std::size_t used = 0;
      int v = std::stoi(w, &used);
      if (used != w.size()) throw std::invalid_argument(w);
      out.push_back(v);
    } catch (const std::exception&) {
      throw ScriptError(line, "expected a line number, got '" + w + "'");
    }
  }
  return out;
}

Justification parse_single(const std::string& text, std::size_t line);

// `il i,j + lemma NAME {..} + axiom NAME {..}` adds inline instances to an IL step.
Justification parse_justification(const std::string& text, std::size_t line) {
  std::vector<std::string> parts;
  int depth = 0;
  std::string cur;
  for (char c : text) {
    if (c == '{') ++depth;
    if (c == '}') --depth;
    if (c == '+' && depth == 0) {
      parts.push_back(cur);
      cur.clear();
    } else {
      cur += c;
    }
  }
  parts.push_back(cur);
  Justification j = parse_single(parts[0], line);
  if (parts.size() > 1 && j.kind != Justification::Kind::IL) throw ScriptError(line, "only il steps take '+' uses");
  for (std::size_t i = 1; i < parts.size(); ++i) {
    Justification u = parse_single(parts[i], line);
    if (u.kind != Justification::Kind::Axiom && u.kind != Justification::Kind::Lemma)
      throw ScriptError(line, "an il use must be an axiom or a lemma");
    if (!u.cites.empty()) throw ScriptError(line, "an il use cites no lines");
    j.uses.push_back(std::move(u));
  }
  return j;
}

Justification parse_single(const std::string& text, std::size_t line) {
  Justification j;
  std::string s = trim(text);
  std::string bindings;
  if (auto brace = s.find('{'); brace != std::string::npos) {
    auto close = s.rfind('}');
    if (close == std::string::npos || close < brace) throw ScriptError(line, "unbalanced '{'");
    bindings = s.substr(brace + 1, close - brace - 1);
    s = trim(s.substr(0, brace));
  }
  std::istringstream in(s);
  std::string kw;
  in >> kw;
  std::string rest;
  std::getline(in, rest);
  using K = Justification::Kind;
  if (kw == "axiom" || kw == "lemma") {
    std::istringstream r(rest);
    r >> j.name;
    if (j.name.empty()) throw ScriptError(line, kw + " needs a name");
    std::string nums;
    std::getline(r, nums);
    j.kind = kw == "axiom" ? K::Axiom : K::Lemma;
    j.cites = parse_numbers(nums, line);
    if (j.kind == K::Axiom && !j.cites.empty()) throw ScriptError(line, "axioms cite no lines");
  } else if (kw == "premise") {
    j.kind = K::Premise;
    j.cites = parse_numbers(rest, line);
  } else if (kw == "mp") {
    j.kind = K::MP;
    j.cites = parse_numbers(rest, line);
    if (j.cites.size() != 2) throw ScriptError(line, "mp takes two line numbers");
  } else if (kw == "ea") {
    j.kind = K::EA;
    j.cites = parse_numbers(rest, line);
    if (j.cites.size() != 1) throw ScriptError(line, "ea takes one line number");
  } else if (kw == "il") {
    j.kind = K::IL;
    j.cites = parse_numbers(rest, line);
  } else if (kw == "defn") {
    j.kind = K::Defn;
    j.cites = parse_numbers(rest, line);
    if (j.cites.size() > 1) throw ScriptError(line, "defn takes at most one line number");
  } else {
    throw ScriptError(line, "unknown justification '" + kw + "'");
  }
  if (!bindings.empty()) {
    if (j.kind != K::Axiom && j.kind != K::Lemma) throw ScriptError(line, "only axiom and lemma take bindings");
    parse_bindings(bindings, j, line);
  }
  return j;
}

}  // namespace

std::vector<ProofScript> parse_scripts(const std::string& text) {
  std::vector<ProofScript> out;
  std::istringstream in(text);
  std::size_t lineno = 0;
  ProofScript cur;
  bool open = false;
  for (std::string raw; std::getline(in, raw);) {
    ++lineno;
    if (auto hash = raw.find('#'); hash != std::string::npos) raw.erase(hash);
    std::string s = trim(raw);
    if (s.empty()) continue;
    auto sp = s.find_first_of(" \t");
    std::string kw = s.substr(0, sp);
    std::string rest = sp == std::string::npos ? "" : trim(s.substr(sp + 1));
    if (kw == "proof") {
      if (open) throw ScriptError(lineno, "proof " + cur.name + " is missing its qed");
      cur = ProofScript{};
      std::istringstream r(rest);
      r >> cur.name;
      if (cur.name.empty()) throw ScriptError(lineno, "proof needs a name");
      std::getline(r, cur.title);
      cur.title = trim(cur.title);
      cur.source_line = lineno;
      open = true;
      continue;
    }
    if (!open) throw ScriptError(lineno, "expected 'proof <name>'");
    if (kw == "premise") {
      if (!cur.lines.empty()) throw ScriptError(lineno, "premises must precede the numbered lines");
      cur.premises.push_back(formula_at(rest, lineno));
    } else if (kw == "qed") {
      cur.goal = formula_at(rest, lineno);
      out.push_back(std::move(cur));
      open = false;
    } else {
      auto dot = s.find('.');
      auto semi = s.find(';');
      if (dot == std::string::npos || semi == std::string::npos || semi < dot)
        throw ScriptError(lineno, "expected '<n>. <formula> ; <justification>'");
      ProofLine l;
      auto label = parse_numbers(s.substr(0, dot), lineno);
      if (label.size() != 1) throw ScriptError(lineno, "bad line number");
      l.label = label[0];
      l.formula = formula_at(s.substr(dot + 1, semi - dot - 1), lineno);
      l.just = parse_justification(s.substr(semi + 1), lineno);
      l.source_line = lineno;
      cur.lines.push_back(std::move(l));
    }
  }
  if (open) throw ScriptError(lineno, "proof " + cur.name + " is missing its qed");
  return out;
}

std::vector<ProofScript> load_scripts(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open script file " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  try {
    return parse_scripts(ss.str());
  } catch (const std::runtime_error& e) {
    throw std::runtime_error(path + ": " + e.what());
  }
}

std::string default_corpus_dir() { return LIIP_CORPUS_DIR; }

CorpusReport run_corpus(LemmaDatabase& db, const std::string& dir, bool keep_going) {
  auto start = std::chrono::steady_clock::now();
  CorpusReport rep;
  std::ifstream index(dir + "/index.txt");
  if (!index) throw std::runtime_error("corpus index not found in " + dir);
  for (std::string raw; std::getline(index, raw);) {
    std::string file = trim(raw.substr(0, raw.find('#')));
    if (file.empty()) continue;
    for (const auto& script : load_scripts(dir + "/" + file)) {
      CorpusEntry e{script.name, script.title, file, script.lines.size(), false, {}};
      ProofReport pr = check_proof(script, db);
      e.ok = pr.ok;
      e.violations = pr.violations;
      rep.entries.push_back(e);
      if (!pr.ok) rep.ok = false;
      if (!pr.ok && !keep_going) {
        rep.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        return rep;
      }
    }
  }
  rep.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return rep;
}

}  // namespace liip
