#include <doctest.h>

#include <algorithm>
#include <functional>

#include "fh/model.hpp"

using namespace fh;

namespace {

ThreePartitionInstance tp_of(unsigned m, long B, std::vector<long> xs) {
  ThreePartitionInstance tp;
  tp.m = m;
  tp.B = B;
  for (long x : xs) tp.elements.push_back(x);
  return tp;
}

// Counts partitions by pairing the lowest unused index with every pair
// after it.
size_t count_partitions(const ThreePartitionInstance& tp) {
  std::vector<bool> used(tp.elements.size(), false);
  std::function<size_t()> rec = [&]() -> size_t {
    auto it = std::find(used.begin(), used.end(), false);
    if (it == used.end()) return 1;
    size_t a = it - used.begin(), n = 0;
    used[a] = true;
    for (size_t b = a + 1; b < used.size(); ++b)
      for (size_t c = b + 1; c < used.size(); ++c) {
        if (used[b] || used[c] || tp.elements[a] + tp.elements[b] + tp.elements[c] != tp.B) continue;
        used[b] = used[c] = true;
        n += rec();
        used[b] = used[c] = false;
      }
    used[a] = false;
    return n;
  };
  return rec();
}

}  // namespace

TEST_CASE("job ids order numerically") {
  CHECK(id_less("j2", "j10"));
  CHECK_FALSE(id_less("j10", "j2"));
  CHECK(id_less("2", "10"));
  CHECK(id_less("a", "b"));
}

TEST_CASE("3-partition validation") {
  CHECK(validate_3partition(tp_of(2, 12, {4, 4, 4, 4, 4, 4})).empty());
  CHECK_FALSE(validate_3partition(tp_of(2, 12, {4, 4, 4, 4, 4, 5})).empty());
  CHECK_FALSE(validate_3partition(tp_of(1, 12, {7, 3, 2})).empty());
  CHECK_FALSE(validate_3partition(tp_of(2, 12, {4, 4, 4})).empty());
}

TEST_CASE("partition enumeration matches a direct count") {
  for (auto tp : {tp_of(2, 12, {4, 4, 4, 4, 4, 4}), tp_of(3, 12, {4, 4, 4, 4, 4, 4, 4, 4, 4}),
                  tp_of(2, 13, {5, 4, 4, 5, 4, 4}), tp_of(2, 13, {6, 4, 4, 4, 4, 4})}) {
    auto all = enumerate_partitions(tp);
    CHECK(all.size() == count_partitions(tp));
    for (const auto& p : all) CHECK(is_partition_valid(tp, p));
  }
  CHECK(count_partitions(tp_of(2, 12, {4, 4, 4, 4, 4, 4})) == 10);
  CHECK(count_partitions(tp_of(3, 12, {4, 4, 4, 4, 4, 4, 4, 4, 4})) == 280);
  CHECK(enumerate_partitions(tp_of(3, 12, {4, 4, 4, 4, 4, 4, 4, 4, 4}), 3).size() == 3);
}

TEST_CASE("partition validity and canonical form") {
  auto tp = tp_of(2, 13, {5, 4, 4, 5, 4, 4});
  Partition p{{{6, 5, 4}, {3, 1, 2}}};
  CHECK(is_partition_valid(tp, p));
  Partition c = canonical(p);
  CHECK(c.groups[0] == std::array<unsigned, 3>{1, 2, 3});
  CHECK(c.groups[1] == std::array<unsigned, 3>{4, 5, 6});
  CHECK_FALSE(is_partition_valid(tp, Partition{{{1, 2, 3}, {3, 5, 6}}}));
  CHECK_FALSE(is_partition_valid(tp, Partition{{{1, 2, 3}}}));
  CHECK_FALSE(is_partition_valid(tp, Partition{{{1, 2, 4}, {3, 5, 6}}}));
}

TEST_CASE("streams materialize into evenly spaced jobs") {
  StreamDescriptor s{"S", 0, 3, Rational(1, 2), Rational(1, 2)};
  auto jobs = materialize_stream(s, 100);
  REQUIRE(jobs.size() == 6);
  CHECK(jobs[0].release == 0);
  CHECK(jobs[5].release == Rational(5, 2));
  CHECK(jobs[3].proc == Rational(1, 2));
  CHECK_THROWS_AS(materialize_stream(s, 5), Error);
  Instance inst;
  inst.jobs.push_back({"a", 0, 1});
  inst.streams.push_back(s);
  CHECK(materialize_all(inst).jobs.size() == 7);
}
