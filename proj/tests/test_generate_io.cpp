#include <doctest.h>

#include <filesystem>
#include <fstream>

#include "fh/generate.hpp"
#include "fh/io.hpp"

using namespace fh;

namespace {

// Multisets over [lo, hi] of size n summing to s, counted by occurrence vectors.
size_t count_multisets(unsigned long lo, unsigned long hi, size_t n, unsigned long s) {
  if (lo > hi) return n == 0 && s == 0;
  size_t total = 0;
  for (size_t c = 0; c <= n && c * lo <= s; ++c) total += count_multisets(lo + 1, hi, n - c, s - c * lo);
  return total;
}

}  // namespace

TEST_CASE("tight instance enumeration matches a direct count") {
  // m = 2, B = 13: range [4, 6]
  CHECK(enumerate_tight_instances(2, 13).size() == count_multisets(4, 6, 6, 26));
  CHECK(count_multisets(4, 6, 6, 26) == 2);
  // m = 3, B = 20: range [ceil(60/9.5), 10] = [7, 10]
  CHECK(enumerate_tight_instances(3, 20).size() == count_multisets(7, 10, 9, 60));
  CHECK(enumerate_tight_instances(2, 4).empty());
  for (const auto& tp : tight_yes_instances(2, 13)) CHECK_FALSE(enumerate_partitions(tp, 1).empty());
}

TEST_CASE("YES generation hides a partition and is seeded") {
  // m = 3, B = 22: range [ceil(66/9.5), 11] = [7, 11]
  ThreePartitionInstance a = generate_yes(3, 22, 7), b = generate_yes(3, 22, 7);
  CHECK(a.elements == b.elements);
  CHECK(validate_3partition(a).empty());
  CHECK_FALSE(enumerate_partitions(a, 1).empty());
  for (const auto& e : a.elements) {
    CHECK(e * Rational(19, 2) >= 66);
    CHECK(e <= 11);
  }
  CHECK_THROWS_AS(generate_yes(3, 20, 1), Error);
}

TEST_CASE("NO generation is verified exhaustively") {
  ThreePartitionInstance tp = generate_no(2, 13, 3);
  CHECK(validate_3partition(tp).empty());
  CHECK(enumerate_partitions(tp).empty());
  CHECK_THROWS_AS(generate_no(2, 12, 1), Error);
  CHECK_THROWS_AS(generate_no(5, 30, 1), Error);
  CHECK_THROWS_AS(generate_no(1, 3, 1), Error);
}

TEST_CASE("JSON round trips keep rationals exact") {
  Instance inst;
  inst.jobs.push_back({"a", Rational(-7, 3), Rational(1, 2)});
  inst.streams.push_back({"S", 0, 4, Rational(1, 3), Rational(1, 3)});
  Instance back = io::instance_from(io::to_json(inst));
  CHECK(back.jobs[0].release == Rational(-7, 3));
  CHECK(back.streams[0].period == Rational(1, 3));
  CHECK(io::to_json(back) == io::to_json(inst));

  Schedule s{{{0, Rational(1, 2), "a"}}, {{"S", StreamPolicy::FifoAsReleased}}};
  CHECK(io::to_json(io::schedule_from(io::to_json(s))) == io::to_json(s));

  Partition p{{{1, 2, 3}, {4, 5, 6}}};
  CHECK(io::partition_from(io::to_json(p)).groups == p.groups);

  ThreePartitionInstance tp = generate_yes(2, 13, 1);
  CHECK(io::partition_instance_from(io::to_json(tp)).elements == tp.elements);
}

TEST_CASE("JSON input errors") {
  CHECK(io::rational_from(io::Json(7)) == 7);
  CHECK_THROWS_AS(io::rational_from(io::Json(1.5)), Error);
  CHECK_THROWS_AS(io::instance_from(io::Json::object()), Error);
  CHECK_THROWS_AS(io::partition_from(io::Json::parse(R"({"groups": [[1, 2]]})")), Error);
}

TEST_CASE("atomic writes replace the file and leave no temporary") {
  namespace fs = std::filesystem;
  fs::path dir = fs::temp_directory_path() / "flowhard_io_test";
  fs::create_directories(dir);
  std::string path = (dir / "out.json").string();
  io::write_atomic(path, "first\n");
  io::write_json(path, io::Json{{"x", "1/2"}});
  CHECK(io::read_json(path).at("x") == "1/2");
  size_t files = 0;
  for (const auto& e : fs::directory_iterator(dir)) files += e.is_regular_file();
  CHECK(files == 1);
  fs::remove_all(dir);
}
