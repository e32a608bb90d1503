#include <doctest.h>

#include "fh/reduction.hpp"

using namespace fh;

namespace {

ThreePartitionInstance tp_of(unsigned m, long B, std::vector<long> xs) {
  ThreePartitionInstance tp;
  tp.m = m;
  tp.B = B;
  for (long x : xs) tp.elements.push_back(x);
  return tp;
}

const Variant kFlow2 = Variant::make(Variant::Kind::Flow2, NormExponent::integer(2));

}  // namespace

TEST_CASE("variant names") {
  CHECK(Variant::parse("flow2", "").name() == "flow2");
  CHECK(Variant::parse("stretch-k", "3").is_int());
  CHECK(Variant::parse("flow-frac", "1/2").is_frac());
  CHECK_THROWS_AS(Variant::parse("flow-k", ""), Error);
  CHECK_THROWS_AS(Variant::parse("flow-k", "2"), Error);
  CHECK_THROWS_AS(Variant::parse("flow-frac", "3/2"), Error);
  CHECK_THROWS_AS(Variant::parse("flow3", ""), Error);
}

TEST_CASE("flow2 parameters for m = 2, B = 12") {
  ReductionParams p = reduction_params(tp_of(2, 12, {4, 4, 4, 4, 4, 4}), kFlow2);
  CHECK(p.alpha == 4 * 1728);
  CHECK(p.beta == 32 * 20736);
  CHECK(p.rho == 1 / pow_int(2 * p.beta, 3));
  CHECK_FALSE(p.toy);
}

TEST_CASE("flow-k parameters use exact square roots") {
  auto v = Variant::make(Variant::Kind::FlowInt, NormExponent::integer(3));
  ReductionParams p = reduction_params(tp_of(2, 12, {4, 4, 4, 4, 4, 4}), v);
  CHECK(p.alpha == pow_int(2, 18) * pow_int(2, 6) * pow_int(12, 6));
  CHECK(p.lambda * p.lambda == 144 * p.alpha);
}

TEST_CASE("flow2 instance geometry") {
  auto tp = tp_of(2, 13, {5, 4, 4, 5, 4, 4});
  ReductionParams p = reduction_params(tp, kFlow2);
  Instance inst = build_instance(tp, p);
  REQUIRE(inst.jobs.size() == 6);
  CHECK(inst.jobs[0].proc == 5);
  CHECK(inst.jobs[0].release == -p.beta * 6);
  CHECK(p.i0_start() == -p.beta * 14);
  CHECK(validate_instance(inst).empty());
}

TEST_CASE("normalization shifts into the tight range") {
  Normalized n = normalize_3partition(tp_of(2, 20, {6, 7, 7, 6, 7, 7}));
  CHECK(n.shift == 2);
  CHECK(n.tp.B == 26);
  CHECK(n.tp.elements[0] == 8);
  CHECK(in_tight_range(n.tp));
  CHECK(normalize_3partition(tp_of(2, 13, {5, 4, 4, 5, 4, 4})).shift == 0);
  CHECK_FALSE(in_tight_range(tp_of(2, 20, {6, 7, 7, 6, 7, 7})));
  CHECK_THROWS_AS(reduction_params(tp_of(2, 20, {6, 7, 7, 6, 7, 7}), kFlow2), Error);
}

TEST_CASE("stretch tightening keeps the partitions") {
  auto v = Variant::make(Variant::Kind::Stretch2, NormExponent::integer(2));
  auto raw = tp_of(2, 13, {5, 4, 4, 5, 4, 4});
  auto t = tighten_for_stretch(raw, v);
  Rational eps = default_epsilon(v, 2, 13);
  for (const auto& b : t.elements) CHECK(abs(b - Rational(13, 3)) <= eps);
  CHECK(enumerate_partitions(t).size() == enumerate_partitions(raw).size());
  CHECK_NOTHROW(reduction_params(t, v));
  CHECK_THROWS_AS(tighten_for_stretch(raw, v, TightenScheme::Shift), Error);
  CHECK_THROWS_AS(tighten_for_stretch(raw, kFlow2), Error);
}

TEST_CASE("partition schedule round trips through extraction") {
  for (auto v : {kFlow2, Variant::make(Variant::Kind::FlowInt, NormExponent::integer(3))}) {
    auto tp = tp_of(2, 13, {5, 4, 4, 5, 4, 4});
    ReductionParams p = reduction_params(tp, v);
    Instance inst = build_instance(tp, p);
    for (const auto& part : enumerate_partitions(tp)) {
      Schedule s = build_partition_schedule(tp, part, p);
      CHECK(validate_schedule(inst, s).empty());
      Extraction e = extract_partition(inst, p, s);
      REQUIRE(e.partition);
      CHECK(canonical(*e.partition).groups == canonical(part).groups);
    }
  }
}

TEST_CASE("partition schedules need a valid partition") {
  auto tp = tp_of(2, 13, {5, 4, 4, 5, 4, 4});
  ReductionParams p = reduction_params(tp, kFlow2);
  CHECK_THROWS_AS(build_partition_schedule(tp, Partition{{{1, 4, 2}, {3, 5, 6}}}, p), Error);
}

TEST_CASE("threshold reports printed and recomputed totals") {
  auto tp = tp_of(2, 12, {4, 4, 4, 4, 4, 4});
  Threshold t = threshold_f(tp, reduction_params(tp, kFlow2));
  REQUIRE(t.recomputed);
  CHECK(t.printed_total.is_exact());
  CHECK(t.recomputed->total.is_exact());
  CHECK(t.recomputed->closed.size() == 2);
  CHECK(t.recomputed->open.size() == 2);

  auto no = tp_of(2, 13, {6, 4, 4, 4, 4, 4});
  Threshold tn = threshold_f(no, reduction_params(no, kFlow2));
  CHECK_FALSE(tn.recomputed);
  CHECK_FALSE(tn.notes.empty());
}

TEST_CASE("toy overrides") {
  auto tp = tp_of(1, 3, {1, 1, 1});
  ReductionParams p = reduction_params(tp, kFlow2, ToyOverrides::parse("beta=1/4,rho=1"));
  CHECK(p.toy);
  CHECK(p.beta == Rational(1, 4));
  CHECK(p.alpha == 27);
  CHECK_THROWS_AS(reduction_params(tp, kFlow2, ToyOverrides::parse("beta=1/8")), Error);
  CHECK_THROWS_AS(ToyOverrides::parse("gamma=1"), Error);
  CHECK_THROWS_AS(ToyOverrides::parse("beta=-1"), Error);
}

TEST_CASE("fractional beta is a fourth power at least the printed base") {
  auto v = Variant::make(Variant::Kind::FlowFrac, NormExponent::fractional(Rational(1, 2)));
  ReductionParams p = reduction_params(tp_of(2, 12, {4, 4, 4, 4, 4, 4}), v);
  // q = ceil((30mkB)^((5/k^2+2)/4)) = ceil(360^(11/2))
  Rational q = p.lambda;
  CHECK(pow_int(q, 4) == p.beta);
  CHECK(pow_int(q, 2) >= pow_int(Rational(360), 11));
  CHECK(pow_int(q - 1, 2) < pow_int(Rational(360), 11));
  CHECK_FALSE(p.deviations.empty());
}
