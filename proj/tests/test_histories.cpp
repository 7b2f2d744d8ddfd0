#include <doctest.h>

#include "criteria.hpp"

using namespace liip;
using namespace liip::test;

namespace {

Term d(const std::string& s) { return Term::data(s); }
InputHistory h(std::initializer_list<Event> es) { return InputHistory{std::vector<Event>(es)}; }

}  // namespace

TEST_CASE("projection") {
  InputHistory s = h({{"b", d("m")}, {"a", d("n")}, {kCM, d("o")}});
  CHECK(project(kCM, s) == s);
  CHECK(project("a", InputHistory{}) == InputHistory{});
  CHECK(project("a", h({{"b", d("m")}, {"a", d("n")}})) == h({{"a", d("n")}}));
  // CM's own receipts are not visible to other agents
  CHECK(project("a", s) == h({{"a", d("n")}}));
}

TEST_CASE("knowledge at a history") {
  CHECK(knows_at("a", InputHistory{}, Term::agent("a")));
  CHECK(knows_at(kCM, h({{"a", d("m")}}), d("m")));
  CHECK_FALSE(knows_at("b", h({{"a", d("m")}}), d("m")));
  CHECK(knows_at("b", h({{"b", Term::pair(d("m"), d("n"))}}), d("n")));
  CHECK(msgs(h({{"a", d("m")}, {"b", d("n")}})) == std::set<Term>{d("m"), d("n")});
}

TEST_CASE("history order and equivalence") {
  InputHistory am = h({{"a", d("m")}}), bn = h({{"b", d("n")}});
  CHECK(history_leq(kCM, InputHistory{}, am));
  CHECK(history_leq(kCM, am, h({{"a", d("m")}, {"b", d("n")}})));
  CHECK_FALSE(history_leq(kCM, am, bn));
  CHECK(history_equiv(kCM, am, am));
  CHECK_FALSE(history_equiv(kCM, am, h({{"b", d("m")}})));
  CHECK(history_equiv("a", bn, InputHistory{}));
  // a's order only sees a's events
  CHECK(history_leq("a", h({{"b", d("n")}, {"a", d("m")}}), am));
}

TEST_CASE("concatenation is associative with the empty history as unit") {
  Rng rng(31);
  HistoryVocab hv;
  for (int i = 0; i < 100; ++i) {
    InputHistory x = random_history(rng, hv, 3), y = random_history(rng, hv, 3), z = random_history(rng, hv, 3);
    CHECK((x * y) * z == x * (y * z));
    CHECK(x * InputHistory{} == x);
    CHECK(InputHistory{} * x == x);
  }
}

TEST_CASE("concrete accessibility examples") {
  InputHistory zero;
  CHECK(concrete_access(d("m"), zero, h({{"a", d("m")}})));
  CHECK(concrete_access(d("m2"), zero, h({{"a", d("m")}, {"b", Term::pair(d("m"), d("m2"))}})));
  CHECK_FALSE(concrete_access(d("m"), h({{"a", d("m")}}), zero));
  CHECK(worked_examples().ok());
}

TEST_CASE("interface clauses hold on random histories") {
  Outcome o = concrete_accessibility(32, 150);
  INFO(o.summary());
  CHECK(o.ok());
}

TEST_CASE("generated model with depth zero") {
  ConcreteModel cm = generate_model({"a", kCM}, {d("m")}, 0, {});
  REQUIRE(cm.model.size() == 2);
  int zero = cm.state_of(InputHistory{});
  int sink = cm.state_of(h({{kCM, d("m")}}));
  REQUIRE(zero >= 0);
  REQUIRE(sink >= 0);
  CHECK(cm.model.access_for(d("m"))[zero].test(sink));
  CHECK(validate_model(cm.model).passed);
}

TEST_CASE("generated model with depth one") {
  ConcreteModel cm = generate_model({"a", kCM}, {d("m")}, 1, {});
  // the empty history, (a,m) and (CM,m), each with its sink; the sink of the
  // empty history is (CM,m) itself
  std::set<InputHistory> expected{InputHistory{}, h({{"a", d("m")}}), h({{kCM, d("m")}}),
                                  h({{"a", d("m")}, {kCM, d("m")}}), h({{kCM, d("m")}, {kCM, d("m")}})};
  CHECK(std::set<InputHistory>(cm.histories.begin(), cm.histories.end()) == expected);
  auto rep = validate_model(cm.model);
  INFO((rep.violations.empty() ? std::string() : rep.violations.front().clause));
  CHECK(rep.passed);
}

TEST_CASE("generated models validate and R^CM is the order") {
  Rng rng(33);
  for (int i = 0; i < 15; ++i) {
    std::set<AgentName> agents{kCM, "a"};
    if (coin(rng)) agents.insert("b");
    std::set<Term> pool{d("m1")};
    if (coin(rng)) pool.insert(d("m2"));
    if (coin(rng)) pool.insert(Term::pair(d("m1"), d("m3")));
    int depth = pick(rng, 3);
    ConcreteModel cm = generate_model(agents, pool, depth, {{"p", [](const InputHistory& s) {
                                                               return !s.events.empty() && s.events[0].receiver == "a";
                                                             }}});
    auto rep = validate_model(cm.model);
    INFO(depth << " " << (rep.violations.empty() ? std::string() : rep.violations.front().witness));
    CHECK(rep.passed);
    CHECK(cm.model.access_for(Term::cm()) == cm.model.order);
    // the atom valuation is the upward closure of the predicate
    for (std::size_t s = 0; s < cm.histories.size(); ++s) {
      bool pred = !cm.histories[s].events.empty() && cm.histories[s].events[0].receiver == "a";
      if (pred) CHECK(cm.model.val.at("p").test(s));
    }
  }
}

TEST_CASE("generated models reject an empty pool") {
  CHECK_THROWS_AS(generate_model({"a"}, {}, 1, {}), std::invalid_argument);
  CHECK_NOTHROW(generate_model({"a"}, {}, 0, {}));
}

TEST_CASE("truth at the empty history is global truth") {
  Outcome o = concrete_models(34, 6, 30);
  INFO(o.summary());
  CHECK(o.ok());
}

TEST_CASE("trace files") {
  InputHistory s = parse_trace("# comment\nrecv a m\n\nrecv b (m,n)  # trailing\n");
  REQUIRE(s.events.size() == 2);
  CHECK(s.events[0] == Event{"a", Term::agent("m")});
  CHECK(s.events[1].payload == Term::pair(Term::agent("m"), Term::agent("n")));
  CHECK_THROWS(parse_trace("send a m\n"));
  CHECK_THROWS(parse_trace("recv a (m,\n"));
}
