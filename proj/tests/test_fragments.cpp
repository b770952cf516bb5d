#include <doctest.h>

#include "mrv/fragments.hpp"
#include "mrv/parse.hpp"

using namespace mrv;

namespace {
const char* kPhi0 = "[s]ff & [a]ff & [c]ff";
const char* kPhi1 = "[r]ff | [c]ff";
const char* kPhi2 = "[r]([s]ff | [a]ff)";
const char* kPhi4 = "max X.([r][s]X & ([c]ff | [a]ff))";
const char* kPhi5 = "[r]([s]ff | [a]ff) | [a]ff";
const char* kPhi8 = "max X.([a]ff | ([c]ff & [r][s]X))";
const char* kPhi9 = "[r]ff | [r][s]ff";
Formula f(const char* t) { return parse_formula(t); }
const Determinacy kRS = Determinacy::parse("r,s");
}  // namespace

TEST_CASE("safety fragment membership") {
  CHECK(is_shml(f(kPhi0)));
  CHECK_FALSE(is_shml(f(kPhi1)));
  CHECK(is_shml(f("tt")));
  CHECK_FALSE(is_shml(f("<a>tt")));
  CHECK(is_shml(f("max X.[a]X")));
}

TEST_CASE("disjunctions need deterministic guards") {
  CHECK(in_shml_det(f(kPhi2), kRS));
  Membership m = in_shml_det(f(kPhi2), Determinacy::parse("s"));
  CHECK_FALSE(m.member);
  CHECK_FALSE(m.reason.empty());
  CHECK(in_shml_det(f("ff"), Determinacy{}));
  CHECK(in_shml_det(f(kPhi4), kRS));
  CHECK_FALSE(in_shml_det(f(kPhi4), Determinacy::parse("s")));
  CHECK_FALSE(in_shml_det(f(kPhi4), Determinacy::parse("r")));
  // A top-level disjunction sits under no modality.
  CHECK(in_shml_det(f(kPhi1), Determinacy{}));
  CHECK_FALSE(in_shml_det(f("<a>tt"), Determinacy::all()));
}

TEST_CASE("normal form requires distinct actions in each disjunction") {
  CHECK_FALSE(in_shml_nf(f(kPhi9)));
  CHECK(in_shml_nf(f(kPhi2)));
  CHECK(in_shml_nf(f(kPhi4)));
  CHECK(in_shml_nf(f(kPhi8)));
  CHECK(in_shml_nf(f("ff")));
  CHECK_FALSE(in_shml_nf(f("[a]ff | tt")));
  // A conjunction of boxes may stand as a disjunct when its actions are
  // disjoint from the other disjuncts.
  CHECK(in_shml_nf(f("[a]ff | ([c]ff & [r]ff)")));
  CHECK_FALSE(in_shml_nf(f("[a]ff | ([a]ff & [r]ff)")));
  CHECK_FALSE(in_shml_nf(f("[a]ff | ([c]ff & ff)")));
}

TEST_CASE("history lower bounds") {
  CHECK(lb(f(kPhi2)) == BoundValue(1));
  CHECK(lb(f(kPhi4)) == BoundValue(1));
  CHECK(lb(f(kPhi8)) == BoundValue(1));
  CHECK(lb(f("ff")) == BoundValue(0));
  CHECK(lb(f(kPhi5)) == BoundValue(2));
  CHECK(lb(f("tt")).infinite());
  CHECK(lb(f("tt")).to_string() == "inf");
  CHECK_THROWS(lb(f("<a>ff")));
}

TEST_CASE("bound arithmetic saturates at infinity") {
  CHECK((BoundValue(2) + BoundValue(3)) == BoundValue(5));
  CHECK((BoundValue(2) + BoundValue::infinity()).infinite());
  CHECK(BoundValue(7) < BoundValue::infinity());
}

TEST_CASE("monitors with parallel disjunctions below deterministic prefixes") {
  Monitor m5 = parse_monitor("r.(s.no (+) a.no)");
  CHECK(in_mon_det(m5, kRS));
  CHECK_FALSE(in_mon_det(m5, Determinacy::parse("s")));
  CHECK(in_mon_det(parse_monitor("end"), Determinacy{}));
  CHECK(in_mon_det(parse_monitor("rec X.(r.s.X (*) (a.no (+) c.no))"), kRS));
  CHECK_FALSE(in_mon_det(parse_monitor("rec X.(r.s.X (*) (a.no (+) c.no))"), Determinacy::parse("s")));
}
