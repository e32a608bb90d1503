#include "fh/generate.hpp"

#include <algorithm>
#include <random>

#include "fh/error.hpp"

namespace fh {

namespace {

struct Range {
  unsigned long lo;
  unsigned long hi;
};

Range tight_range(unsigned m, unsigned long B) {
  // ceil(mB / (3m + 1/2)) = ceil(2mB / (6m + 1))
  unsigned long num = 2ul * m * B, den = 6ul * m + 1;
  return {(num + den - 1) / den, B / 2};
}

ThreePartitionInstance make(unsigned m, unsigned long B, const std::vector<unsigned long>& xs) {
  ThreePartitionInstance tp;
  tp.m = m;
  tp.B = Rational(B);
  for (auto x : xs) tp.elements.push_back(Rational(x));
  return tp;
}

void extend(std::vector<unsigned long>& cur, size_t n, unsigned long rest, unsigned long lo, unsigned long hi,
            unsigned m, unsigned long B, std::vector<ThreePartitionInstance>& out) {
  if (cur.size() == n) {
    if (rest == 0) out.push_back(make(m, B, cur));
    return;
  }
  size_t left = n - cur.size();
  for (unsigned long x = lo; x <= hi; ++x) {
    if (x * left > rest) break;
    if (hi * left < rest) continue;
    cur.push_back(x);
    extend(cur, n, rest - x, x, hi, m, B, out);
    cur.pop_back();
  }
}

std::vector<std::array<unsigned long, 3>> triples(unsigned long B, Range r) {
  std::vector<std::array<unsigned long, 3>> out;
  for (unsigned long a = r.lo; a <= r.hi; ++a)
    for (unsigned long b = a; b <= r.hi; ++b) {
      if (a + b >= B) break;
      unsigned long c = B - a - b;
      if (c >= b && c <= r.hi) out.push_back({a, b, c});
    }
  return out;
}

}  // namespace

std::vector<ThreePartitionInstance> enumerate_tight_instances(unsigned m, unsigned long B) {
  std::vector<ThreePartitionInstance> out;
  if (m == 0) return out;
  Range r = tight_range(m, B);
  if (r.lo > r.hi) return out;
  std::vector<unsigned long> cur;
  extend(cur, 3ul * m, m * B, r.lo, r.hi, m, B, out);
  return out;
}

std::vector<ThreePartitionInstance> tight_yes_instances(unsigned m, unsigned long B) {
  std::vector<ThreePartitionInstance> out;
  for (auto& tp : enumerate_tight_instances(m, B))
    if (!enumerate_partitions(tp, 1).empty()) out.push_back(std::move(tp));
  return out;
}

ThreePartitionInstance generate_yes(unsigned m, unsigned long B, uint64_t seed) {
  if (m == 0) throw Error(ErrorKind::InvalidArgument, "m must be at least 1");
  auto ts = triples(B, tight_range(m, B));
  if (ts.empty())
    throw Error(ErrorKind::InvalidArgument,
                "no three integers in [mB/(3m+1/2), B/2] sum to B = " + std::to_string(B));
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<size_t> pick(0, ts.size() - 1);
  std::vector<unsigned long> xs;
  for (unsigned i = 0; i < m; ++i) {
    const auto& t = ts[pick(rng)];
    xs.insert(xs.end(), t.begin(), t.end());
  }
  std::shuffle(xs.begin(), xs.end(), rng);
  return make(m, B, xs);
}

ThreePartitionInstance generate_no(unsigned m, unsigned long B, uint64_t seed) {
  if (m < 2 || m > kNoVerifyMaxM)
    throw Error(ErrorKind::InvalidArgument,
                "NO instances need m in [2, " + std::to_string(kNoVerifyMaxM) + "] so they can be verified");
  Range r = tight_range(m, B);
  ThreePartitionInstance base = generate_yes(m, B, seed);
  std::vector<unsigned long> xs;
  for (const auto& b : base.elements) xs.push_back(b.get_num().get_ui());

  std::mt19937_64 rng(seed ^ 0x9e3779b97f4a7c15ull);
  std::uniform_int_distribution<size_t> idx(0, xs.size() - 1);
  const int kAttempts = 4096;
  for (int a = 0; a < kAttempts; ++a) {
    size_t i = idx(rng), j = idx(rng);
    if (i == j || xs[i] >= r.hi || xs[j] <= r.lo) continue;
    ++xs[i];
    --xs[j];
    ThreePartitionInstance tp = make(m, B, xs);
    if (enumerate_partitions(tp, 1).empty()) return tp;
  }
  // Random walks can miss rare NO multisets; fall back to the full list.
  auto all = enumerate_tight_instances(m, B);
  std::vector<ThreePartitionInstance> no;
  for (auto& tp : all)
    if (enumerate_partitions(tp, 1).empty()) no.push_back(std::move(tp));
  if (no.empty())
    throw Error(ErrorKind::InvalidArgument, "every in-range instance with m = " + std::to_string(m) +
                                                " and B = " + std::to_string(B) + " has a partition");
  auto tp = no[std::uniform_int_distribution<size_t>(0, no.size() - 1)(rng)];
  std::shuffle(tp.elements.begin(), tp.elements.end(), rng);
  return tp;
}

}  // namespace fh
