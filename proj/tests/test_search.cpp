#include <doctest.h>

#include "mrv/analysis.hpp"
#include "mrv/ccs.hpp"
#include "mrv/parse.hpp"
#include "mrv/search.hpp"
#include "mrv/semantics.hpp"

using namespace mrv;

namespace {
History hist(std::initializer_list<const char*> ts) {
  History h;
  for (auto* t : ts) h.insert(parse_trace(t));
  return h;
}
}  // namespace

TEST_CASE("maximal traces drop proper prefixes") {
  auto pool = hist({"eps", "a", "a b", "c"}).traces();
  auto max = maximal_traces(pool);
  CHECK(History(max) == hist({"a b", "c"}));
}

TEST_CASE("smallest violating history of the allocation server") {
  const Determinacy det = Determinacy::parse("r,s");
  auto p11 = ccs_ilts(parse_ccs("a.nil + r.s.(a.nil + c.nil)"));
  Formula phi8 = parse_formula("max X.([a]ff | ([c]ff & [r][s]X))");
  CHECK_FALSE(satisfies(*p11, p11->initial(), phi8));
  auto pool = maximal_traces(traces(*p11, p11->initial(), 5).traces());
  auto found = smallest_history(pool, 4, [&](const History& h) { return violates(h, phi8, det); });
  REQUIRE(found.history);
  CHECK(*found.history == hist({"a", "r s a", "r s c"}));
  CHECK(found.exhausted);
  auto none = smallest_history(pool, 2, [&](const History& h) { return violates(h, phi8, det); });
  CHECK_FALSE(none.history);
}

TEST_CASE("budget stops the search early") {
  std::vector<Trace> pool = hist({"a", "b", "c", "d"}).traces();
  auto r = smallest_history(pool, 4, [](const History& h) { return h.size() == 4; }, 3);
  CHECK_FALSE(r.history);
  CHECK_FALSE(r.exhausted);
  CHECK(r.candidates == 3);
}

TEST_CASE("shrinking keeps a minimal accepted subset") {
  auto accept = [](const History& h) { return h.contains(parse_trace("a")) && h.contains(parse_trace("c")); };
  CHECK(shrink_history(hist({"a", "b", "c", "d"}), accept) == hist({"a", "c"}));
}
