#include <doctest.h>

#include "fh/schedule.hpp"

using namespace fh;

namespace {

Instance two_jobs() {
  Instance inst;
  inst.jobs.push_back({"a", 0, 2});
  inst.jobs.push_back({"b", 1, 1});
  return inst;
}

}  // namespace

TEST_CASE("priority schedule preempts on release") {
  Instance inst = two_jobs();
  Schedule s = build_priority_schedule(inst, {"b", "a"});
  CHECK(validate_schedule(inst, s).empty());
  auto c = completion_times(inst, s);
  CHECK(c.at("a") == 3);
  CHECK(c.at("b") == 2);
  REQUIRE(s.slices.size() == 3);
  CHECK(s.slices[0].to == 1);
  CHECK(s.slices[1].job == "b");
}

TEST_CASE("priority schedule without preemption") {
  Instance inst = two_jobs();
  auto c = completion_times(inst, build_priority_schedule(inst, {"a", "b"}));
  CHECK(c.at("a") == 2);
  CHECK(c.at("b") == 3);
}

TEST_CASE("orders must list each explicit job once") {
  Instance inst = two_jobs();
  CHECK_THROWS_AS(build_priority_schedule(inst, {"a"}), Error);
  CHECK_THROWS_AS(build_priority_schedule(inst, {"a", "a", "b"}), Error);
}

TEST_CASE("schedule validation names the broken rule") {
  Instance inst = two_jobs();
  auto rule_of = [&](const Schedule& s) { return validate_schedule(inst, s).front().rule; };
  CHECK(rule_of(Schedule{{{0, 1, "b"}, {1, 3, "a"}}, {}}) == "from >= release");
  CHECK(rule_of(Schedule{{{0, 2, "a"}, {1, 2, "b"}}, {}}) == "disjoint slices");
  CHECK(rule_of(Schedule{{{0, 2, "zz"}}, {}}) == "known job");
  CHECK(rule_of(Schedule{{{2, 2, "a"}}, {}}) == "from < to");
}

TEST_CASE("unfinished jobs have no completion") {
  Instance inst = two_jobs();
  Schedule s{{{0, 1, "a"}, {1, 2, "b"}}, {}};
  CHECK_THROWS_AS(completion_times(inst, s), Error);
}

TEST_CASE("stream policies round trip by name") {
  CHECK(parse_policy(policy_name(StreamPolicy::FifoAsReleased)) == StreamPolicy::FifoAsReleased);
  CHECK(parse_policy(policy_name(StreamPolicy::Materialized)) == StreamPolicy::Materialized);
  CHECK_THROWS_AS(parse_policy("lifo"), Error);
}
