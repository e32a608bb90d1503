#include <doctest.h>

#include "fh/audit.hpp"
#include "fh/io.hpp"

using namespace fh;

namespace {

ThreePartitionInstance uniform(unsigned m, long B) {
  Rational third(B, 3);
  third.canonicalize();
  return {m, Rational(B), std::vector<Rational>(3 * m, third)};
}

const Variant kFlow2 = Variant::make(Variant::Kind::Flow2, NormExponent::integer(2));
const Variant kFlow3 = Variant::make(Variant::Kind::FlowInt, NormExponent::integer(3));

}  // namespace

TEST_CASE("Taylor bounds on the documented samples") {
  AuditReport r = check_taylor_bounds({{1, 4, Rational(1, 2)}, {0, 1, Rational(1, 2)}});
  CHECK(r.count(Verdict::Pass) == 4);
  CHECK_THROWS_AS(check_taylor_bounds({{2, 4, Rational(1, 2)}}), Error);
  CHECK_THROWS_AS(check_taylor_bounds({{1, 4, Rational(3, 2)}}), Error);
  CHECK(default_taylor_grid().size() >= 200);
}

TEST_CASE("flow2 sound parameters pass every check") {
  auto tp = uniform(2, 12);
  AuditReport r = audit_all(tp, reduction_params(tp, kFlow2));
  CHECK_FALSE(r.any_fail());
  CHECK(r.count(Verdict::Inconclusive) == 0);
  CHECK(r.find("dominance.alpha_beta_open"));
  CHECK(r.find("blackout.sixteen"));
}

TEST_CASE("a weakened beta breaks the open-window dominance") {
  auto tp = uniform(2, 12);
  AuditReport r = check_parameter_dominance(tp, reduction_params(tp, kFlow2, ToyOverrides::parse("beta=64")));
  const CheckRecord* c = r.find("dominance.alpha_beta_open");
  REQUIRE(c);
  CHECK(c->verdict == Verdict::Fail);
}

TEST_CASE("m = 2, B = 3 is a counterexample to the open-window dominance") {
  auto tp = uniform(2, 3);
  AuditReport r = check_parameter_dominance(tp, reduction_params(tp, kFlow2));
  const CheckRecord* c = r.find("dominance.alpha_beta_open");
  REQUIRE(c);
  CHECK(c->verdict == Verdict::Fail);
  // alpha * beta = m^2 B^3 * m^5 B^4 = 6^7
  CHECK(c->left == "279936");
  CHECK(parse_rational(c->left) < parse_rational(c->right));
}

TEST_CASE("closed-interval lower bounds carry their slack") {
  auto tp = uniform(2, 12);
  ReductionParams p = reduction_params(tp, kFlow2);
  CHECK(check_closed_interval_lower_bound(tp, p, 1, Hypothesis::TooFewCompleted).verdict == Verdict::Pass);
  CHECK(check_closed_interval_lower_bound(tp, p, 1, Hypothesis::TooMuchVolume).verdict == Verdict::Pass);
  CHECK(check_closed_interval_lower_bound(tp, p, 1, Hypothesis::TooMuchVolume).name == "slack.too_much[1]");
  CHECK_THROWS_AS(check_closed_interval_lower_bound(tp, p, 0, Hypothesis::TooFewCompleted), Error);
  ReductionParams q = reduction_params(tp, kFlow3);
  CHECK(check_closed_interval_lower_bound(tp, q, 1, Hypothesis::TooFewCompleted).verdict == Verdict::Pass);
}

TEST_CASE("binomial tail for k = 3") {
  auto tp = uniform(2, 12);
  auto recs = check_binomial_tail(reduction_params(tp, kFlow3), tp, 1);
  REQUIRE(recs.size() >= 3);
  for (const auto& c : recs) CHECK(c.verdict == Verdict::Pass);
  CHECK_THROWS_AS(check_binomial_tail(reduction_params(tp, kFlow2), tp, 1), Error);
}

TEST_CASE("forward cost stays within the recomputed threshold") {
  auto tp = uniform(2, 12);
  Partition p = enumerate_partitions(tp, 1).front();
  CHECK(check_forward_cost(tp, p, reduction_params(tp, kFlow2)).verdict == Verdict::Pass);
  auto s3 = Variant::make(Variant::Kind::StretchInt, NormExponent::integer(3));
  CHECK(check_forward_cost(tp, p, reduction_params(tp, s3)).verdict == Verdict::Pass);
  auto fh = Variant::make(Variant::Kind::FlowFrac, NormExponent::fractional(Rational(1, 2)));
  CHECK(check_forward_cost(tp, p, reduction_params(tp, fh)).verdict == Verdict::Pass);
}

TEST_CASE("round trip with the brute-force oracle on a toy instance") {
  auto tp = uniform(1, 3);
  ReductionParams p = reduction_params(tp, kFlow2, ToyOverrides::parse("beta=1/4,rho=1"));
  AuditReport r = roundtrip(tp, enumerate_partitions(tp).front(), p, true);
  CHECK_FALSE(r.any_fail());
  CHECK(r.find("oracle.partition"));
  ReductionParams big = reduction_params(uniform(2, 3), kFlow2, ToyOverrides::parse("beta=1/4,rho=1"));
  CHECK_THROWS_AS(roundtrip(uniform(2, 3), enumerate_partitions(uniform(2, 3)).front(), big, true), Error);
}

TEST_CASE("NO instances have no threshold to audit") {
  ThreePartitionInstance no{2, Rational(13), {6, 4, 4, 4, 4, 4}};
  CHECK_THROWS_AS(check_parameter_dominance(no, reduction_params(no, kFlow2)), Error);
}

TEST_CASE("errata are notes, not failures") {
  auto tp = uniform(2, 12);
  AuditReport r = check_parameter_dominance(tp, reduction_params(tp, kFlow2));
  CHECK(r.has_note("f1-factor"));
  CHECK(r.has_note("fo-variants"));
  CHECK(r.has_note("upper-volume-direction"));
  CHECK_FALSE(r.any_fail());
}

TEST_CASE("reports are reproducible and sorted") {
  auto tp = uniform(2, 12);
  ReductionParams p = reduction_params(tp, kFlow3);
  auto a = io::to_json(audit_all(tp, p)).dump();
  auto b = io::to_json(audit_all(tp, p)).dump();
  CHECK(a == b);
  AuditReport r = audit_all(tp, p);
  for (size_t i = 1; i < r.checks.size(); ++i) CHECK_FALSE(id_less(r.checks[i].name, r.checks[i - 1].name));
}
