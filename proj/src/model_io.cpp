// Text format, one model per document:
//
//   states s0 s1 s2
//   order s0 s1, s1 s2, s0 s2      reflexive pairs are implied
//   access m: s0 s1, s1 s1         R^CM defaults to the order
//   val p: s1 s2
//   val k(CM,m): s1 s2
//
// Lines starting with '#' are comments.

#include <fstream>
#include <sstream>

#include "liip/model.hpp"

namespace liip {

namespace {

std::string trim(const std::string& s) {
  auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> words(const std::string& s) {
  std::istringstream in(s);
  std::vector<std::string> out;
  for (std::string w; in >> w;) out.push_back(w);
  return out;
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : s) {
    if (c == sep) {
      out.push_back(cur);
      cur.clear();
    } else {
      cur += c;
    }
  }
  out.push_back(cur);
  return out;
}

struct Loader {
  KripkeModel m;
  std::size_t lineno = 0;
  bool have_states = false;

  [[noreturn]] void error(const std::string& msg) const {
    throw std::runtime_error("model line " + std::to_string(lineno) + ": " + msg);
  }

  std::size_t state(const std::string& name) const {
    auto i = m.state_index(name);
    if (!i) error("unknown state '" + name + "'");
    return static_cast<std::size_t>(*i);
  }

  Relation pairs(const std::string& body) {
    Relation r(m.size(), StateSet(m.size()));
    if (trim(body).empty()) return r;
    for (const auto& chunk : split(body, ',')) {
      auto w = words(chunk);
      if (w.size() != 2) error("expected a pair of states, got '" + trim(chunk) + "'");
      r[state(w[0])].set(state(w[1]));
    }
    return r;
  }

  StateSet states_of(const std::string& body) {
    StateSet v(m.size());
    for (const auto& w : words(body)) v.set(state(w));
    return v;
  }

  // Splits "<head>: <body>" where head may itself contain parentheses.
  std::pair<std::string, std::string> head_body(const std::string& rest) {
    auto colon = rest.rfind(':');
    if (colon == std::string::npos) error("expected ':'");
    return {trim(rest.substr(0, colon)), rest.substr(colon + 1)};
  }

  void line(const std::string& raw) {
    std::string s = trim(raw);
    if (s.empty() || s[0] == '#') return;
    auto sp = s.find_first_of(" \t");
    std::string kw = s.substr(0, sp);
    std::string rest = sp == std::string::npos ? "" : s.substr(sp + 1);
    if (kw == "states") {
      if (have_states) error("duplicate states line");
      for (const auto& w : words(rest)) {
        if (m.state_index(w)) error("duplicate state '" + w + "'");
        m.state_names.push_back(w);
      }
      if (m.state_names.empty()) error("a model needs at least one state");
      m.order = identity_relation(m.size());
      have_states = true;
      return;
    }
    if (!have_states) error("'states' must come first");
    if (kw == "order") {
      Relation r = pairs(rest);
      for (std::size_t i = 0; i < m.size(); ++i) m.order[i] |= r[i];
    } else if (kw == "access") {
      auto [head, body] = head_body(rest);
      Term t = parse_term(head);
      if (m.access.count(t)) error("duplicate access relation for " + head);
      m.access[t] = pairs(body);
    } else if (kw == "val") {
      auto [head, body] = head_body(rest);
      Formula a = parse_formula(head);
      if (a.kind() == Formula::Kind::Var) {
        m.val[a.name()] = states_of(body);
      } else if (a.kind() == Formula::Kind::Knows) {
        m.knows[{a.agent().name(), a.term()}] = states_of(body);
      } else {
        error("val expects an atom or a knowledge atom");
      }
    } else {
      error("unknown keyword '" + kw + "'");
    }
  }
};

}  // namespace

KripkeModel parse_model(const std::string& text) {
  Loader l;
  std::istringstream in(text);
  for (std::string raw; std::getline(in, raw);) {
    ++l.lineno;
    l.line(raw);
  }
  if (!l.have_states) throw std::runtime_error("model has no 'states' line");
  if (!l.m.access.count(Term::cm())) l.m.access[Term::cm()] = l.m.order;
  return l.m;
}

KripkeModel load_model(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open model file " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_model(ss.str());
}

std::string serialize_model(const KripkeModel& m) {
  std::ostringstream out;
  auto pair_list = [&](const Relation& r, bool skip_reflexive) {
    std::vector<std::string> items;
    for (std::size_t s = 0; s < r.size(); ++s)
      for (std::size_t t = r[s].find_first(); t != StateSet::npos; t = r[s].find_next(t))
        if (!(skip_reflexive && s == t)) items.push_back(m.state_names[s] + " " + m.state_names[t]);
    std::string joined;
    for (std::size_t i = 0; i < items.size(); ++i) joined += (i ? ", " : " ") + items[i];
    return joined;
  };
  auto state_list = [&](const StateSet& v) {
    std::string s;
    for (std::size_t i = v.find_first(); i != StateSet::npos; i = v.find_next(i)) s += " " + m.state_names[i];
    return s;
  };
  out << "states";
  for (const auto& n : m.state_names) out << " " << n;
  out << "\norder" << pair_list(m.order, true) << "\n";
  for (const auto& [t, r] : m.access) {
    if (t.is_cm() && r == m.order) continue;
    out << "access " << render(t) << ":" << pair_list(r, false) << "\n";
  }
  for (const auto& [p, v] : m.val) out << "val " << p << ":" << state_list(v) << "\n";
  for (const auto& [k, v] : m.knows) out << "val k(" << k.first << "," << render(k.second) << "):" << state_list(v) << "\n";
  return out.str();
}

}  // namespace liip
