// Acceptance run: one PASS/FAIL line per criterion on stdout, details on
// stderr. Exit status is 0 when the failing criteria are exactly the ones
// named with --known-red (none by default), so a documented red criterion
// stays visible in the output without hiding new regressions.

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <functional>
#include <iostream>
#include <numeric>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "fh/audit.hpp"
#include "fh/generate.hpp"
#include "fh/solvers.hpp"

using namespace fh;

namespace {

struct Outcome {
  bool pass = true;
  std::string detail;
};

std::mt19937_64 rng(20240521);

Rational rand_rational(int num_lo, int num_hi, int den_hi) {
  int n = std::uniform_int_distribution<int>(num_lo, num_hi)(rng);
  int d = std::uniform_int_distribution<int>(1, den_hi)(rng);
  Rational q(n, d);
  q.canonicalize();
  return q;
}

Instance random_instance(unsigned n) {
  Instance inst;
  for (unsigned i = 0; i < n; ++i)
    inst.jobs.push_back({"j" + std::to_string(i + 1), rand_rational(0, 12, 3), rand_rational(1, 8, 3)});
  return inst;
}

// Preemptive priority simulation written independently of the library:
// at each step run the best released unfinished job until it finishes or
// the next release arrives.
std::vector<Rational> simulate(const Instance& inst, const std::vector<size_t>& order) {
  size_t n = inst.jobs.size();
  std::vector<Rational> left(n), done(n);
  std::vector<size_t> rank(n);
  for (size_t i = 0; i < n; ++i) {
    left[i] = inst.jobs[i].proc;
    rank[order[i]] = i;
  }
  Rational t = inst.jobs[0].release;
  for (const auto& j : inst.jobs) t = std::min(t, j.release);
  size_t finished = 0;
  while (finished < n) {
    size_t best = n;
    for (size_t i = 0; i < n; ++i)
      if (sgn(left[i]) > 0 && inst.jobs[i].release <= t && (best == n || rank[i] < rank[best])) best = i;
    bool have_next = false;
    Rational next;
    for (size_t i = 0; i < n; ++i)
      if (sgn(left[i]) > 0 && inst.jobs[i].release > t && (!have_next || inst.jobs[i].release < next)) {
        next = inst.jobs[i].release;
        have_next = true;
      }
    if (best == n) {
      t = next;
      continue;
    }
    Rational run = left[best];
    if (have_next && next - t < run) run = next - t;
    t += run;
    left[best] -= run;
    if (sgn(left[best]) == 0) {
      done[best] = t;
      ++finished;
    }
  }
  return done;
}

template <class F>
void for_each_order(size_t n, F&& f) {
  std::vector<size_t> ord(n);
  std::iota(ord.begin(), ord.end(), 0);
  do f(ord);
  while (std::next_permutation(ord.begin(), ord.end()));
}

Outcome srpt_optimality() {
  Outcome o;
  int cases = 0;
  for (; cases < 200; ++cases) {
    unsigned n = std::uniform_int_distribution<unsigned>(1, 7)(rng);
    Instance inst = random_instance(n);
    ObjectiveKind obj{Measure::Flow, NormExponent::integer(1)};
    SolveResult s = srpt(inst);
    Rational got = *knorm(inst, s.schedule, obj).exact;
    Rational brute = *brute_force_optimal(inst, obj).value.exact;
    Rational mine;
    bool first = true;
    for_each_order(n, [&](const std::vector<size_t>& ord) {
      auto c = simulate(inst, ord);
      Rational sum = 0;
      for (size_t i = 0; i < n; ++i) sum += c[i] - inst.jobs[i].release;
      if (first || sum < mine) mine = sum;
      first = false;
    });
    if (got != brute || brute != mine) {
      o.pass = false;
      o.detail = "case " + std::to_string(cases) + ": srpt " + to_string(got) + ", brute " + to_string(brute) +
                 ", oracle " + to_string(mine);
      return o;
    }
  }
  o.detail = std::to_string(cases) + " instances, n <= 7";
  return o;
}

Outcome minmax_edf() {
  Outcome o;
  int cases = 0;
  for (; cases < 100; ++cases) {
    unsigned n = std::uniform_int_distribution<unsigned>(1, 6)(rng);
    Instance inst = random_instance(n);
    for (Measure m : {Measure::Flow, Measure::Stretch}) {
      Rational got = *minimize_max(inst, m).value.exact;
      Rational best;
      bool first = true;
      for_each_order(n, [&](const std::vector<size_t>& ord) {
        auto c = simulate(inst, ord);
        Rational worst = 0;
        for (size_t i = 0; i < n; ++i) {
          Rational f = c[i] - inst.jobs[i].release;
          if (m == Measure::Stretch) f /= inst.jobs[i].proc;
          worst = std::max(worst, f);
        }
        if (first || worst < best) best = worst;
        first = false;
      });
      if (got != best) {
        o.pass = false;
        o.detail = "case " + std::to_string(cases) + " " + measure_name(m) + ": edf " + to_string(got) +
                   ", brute " + to_string(best);
        return o;
      }
    }
  }
  o.detail = std::to_string(cases) + " instances, flow and stretch, n <= 6";
  return o;
}

Outcome telescoping() {
  Outcome o;
  const std::vector<unsigned long> ints{1, 2, 3, 5};
  const std::vector<Rational> fracs{Rational(1, 4), Rational(1, 2), Rational(3, 4)};
  int exact_cases = 0, frac_cases = 0;
  mpfr_t w, cap;
  mpfr_inits2(256, w, cap, (mpfr_ptr)0);
  mpfr_set_ui_2exp(cap, 1, -100, MPFR_RNDN);
  for (int c = 0; c < 1000; ++c) {
    Job job{"j", rand_rational(0, 20, 4), rand_rational(1, 10, 4)};
    Rational C = job.release + rand_rational(1, 30, 5);
    unsigned cuts = std::uniform_int_distribution<unsigned>(0, 6)(rng);
    std::vector<Rational> pts{job.release, C};
    for (unsigned i = 0; i < cuts; ++i) {
      Rational u = rand_rational(1, 99, 1) / 100;
      pts.push_back(job.release + u * (C - job.release));
    }
    std::sort(pts.begin(), pts.end());
    pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
    Measure m = c % 2 ? Measure::Stretch : Measure::Flow;
    Rational whole = (C - job.release) / (m == Measure::Stretch ? job.proc : Rational(1));

    ObjectiveKind ik{m, NormExponent::integer(ints[c % ints.size()])};
    Rational sum = 0;
    for (size_t i = 0; i + 1 < pts.size(); ++i) sum += *increase_over_interval(job, pts[i], pts[i + 1], ik).exact;
    if (sum != pow_int(whole, ik.exponent.k_int)) {
      o.pass = false;
      o.detail = "integer case " + std::to_string(c) + " does not telescope";
      break;
    }
    ++exact_cases;

    ObjectiveKind fk{m, NormExponent::fractional(fracs[c % fracs.size()])};
    Enclosure total = Enclosure::exact(0);
    for (size_t i = 0; i + 1 < pts.size(); ++i)
      total += increase_over_interval(job, pts[i], pts[i + 1], fk).as_enclosure();
    Enclosure direct = pow_frac(whole, fk.exponent.k_frac);
    bool overlap = mpfr_lessequal_p(total.lo(), direct.hi()) && mpfr_lessequal_p(direct.lo(), total.hi());
    mpfr_sub(w, total.hi(), total.lo(), MPFR_RNDU);
    bool narrow = mpfr_lessequal_p(w, cap);
    mpfr_sub(w, direct.hi(), direct.lo(), MPFR_RNDU);
    narrow = narrow && mpfr_lessequal_p(w, cap);
    if (!overlap || !narrow) {
      o.pass = false;
      o.detail = "fractional case " + std::to_string(c) + (overlap ? ": too wide" : ": enclosures disjoint");
      break;
    }
    ++frac_cases;
  }
  mpfr_clears(w, cap, (mpfr_ptr)0);
  if (o.pass)
    o.detail = std::to_string(exact_cases) + " exact and " + std::to_string(frac_cases) + " enclosure cases";
  return o;
}

struct ForwardCase {
  std::string label;
  ThreePartitionInstance tp;
  ReductionParams params;
};

std::vector<ForwardCase> forward_cases() {
  std::vector<ForwardCase> out;
  auto add = [&](const Variant& v, const std::vector<unsigned>& ms) {
    for (unsigned m : ms)
      for (unsigned long B = 1; B <= 24; ++B)
        for (auto& raw : tight_yes_instances(m, B)) {
          ThreePartitionInstance tp = v.is_stretch() ? tighten_for_stretch(raw, v) : raw;
          out.push_back({v.label() + " m=" + std::to_string(m) + " B=" + std::to_string(B), tp, reduction_params(tp, v)});
        }
  };
  using K = Variant::Kind;
  add(Variant::make(K::Flow2, NormExponent::integer(2)), {2, 3});
  add(Variant::make(K::Stretch2, NormExponent::integer(2)), {2, 3});
  add(Variant::make(K::FlowInt, NormExponent::integer(3)), {2, 3});
  add(Variant::make(K::StretchInt, NormExponent::integer(3)), {2, 3});
  for (const Rational k : {Rational(1, 4), Rational(1, 2), Rational(3, 4)}) {
    add(Variant::make(K::FlowFrac, NormExponent::fractional(k)), {2});
    add(Variant::make(K::StretchFrac, NormExponent::fractional(k)), {2});
  }
  return out;
}

// Runs the forward and round-trip checks once; criteria 4 and 5 read them.
struct ForwardResults {
  size_t cases = 0;
  size_t partitions = 0;
  std::vector<std::string> cost_fail;
  std::vector<std::string> extract_fail;
};

ForwardResults run_forward() {
  ForwardResults r;
  for (const auto& fc : forward_cases()) {
    ++r.cases;
    for (const auto& p : enumerate_partitions(fc.tp)) {
      ++r.partitions;
      AuditReport rep = roundtrip(fc.tp, p, fc.params, false);
      const CheckRecord* cost = rep.find("forward.cost");
      const CheckRecord* ex = rep.find("roundtrip.extract");
      if (!cost || cost->verdict != Verdict::Pass)
        r.cost_fail.push_back(fc.label + (cost ? " " + std::string(verdict_name(cost->verdict)) : " missing"));
      if (!ex || ex->verdict != Verdict::Pass) r.extract_fail.push_back(fc.label);
    }
  }
  return r;
}

Outcome forward_direction(const ForwardResults& r) {
  Outcome o;
  o.pass = r.cost_fail.empty() && r.cases > 0;
  o.detail = std::to_string(r.cases) + " instances, " + std::to_string(r.partitions) + " partition schedules";
  if (!o.pass) o.detail += "; first miss: " + (r.cost_fail.empty() ? std::string("no cases") : r.cost_fail.front());
  return o;
}

struct ToyCase {
  unsigned m;
  unsigned long B;
  std::vector<unsigned long> elements;
  Variant::Kind kind;
  unsigned long k;
  const char* toy;
};

Outcome round_trip(const ForwardResults& r) {
  Outcome o;
  if (!r.extract_fail.empty()) {
    o.pass = false;
    o.detail = "extraction differs for " + r.extract_fail.front();
    return o;
  }
  using K = Variant::Kind;
  const std::vector<ToyCase> toys{
      {1, 3, {1, 1, 1}, K::Flow2, 2, "beta=1/4,rho=1"},
      {1, 3, {1, 1, 1}, K::Flow2, 2, "beta=1/4,rho=1/2"},
      {1, 7, {2, 2, 3}, K::Flow2, 2, "beta=1/8,rho=1"},
      {1, 6, {2, 2, 2}, K::Stretch2, 2, "beta=1/7,rho=1"},
      {1, 3, {1, 1, 1}, K::FlowInt, 3, "beta=1/4,rho=1,lambda=1"},
      {1, 10, {3, 3, 4}, K::FlowInt, 3, "beta=1/11,rho=1,lambda=1"},
      {1, 6, {2, 2, 2}, K::StretchInt, 3, "beta=1/7,rho=1,lambda=1"},
  };
  size_t within = 0;
  for (const auto& t : toys) {
    ThreePartitionInstance tp;
    tp.m = t.m;
    tp.B = Rational(t.B);
    for (auto e : t.elements) tp.elements.push_back(Rational(e));
    ReductionParams p = reduction_params(tp, Variant::make(t.kind, NormExponent::integer(t.k)), ToyOverrides::parse(t.toy));
    AuditReport rep = roundtrip(tp, enumerate_partitions(tp).front(), p, true);
    const CheckRecord* oc = rep.find("oracle.cost");
    const CheckRecord* op = rep.find("oracle.partition");
    if (!oc || !op || op->verdict != Verdict::Pass) {
      o.pass = false;
      o.detail = p.variant.label() + " B=" + std::to_string(t.B) + " " + t.toy + ": " + (op ? op->left : "no record");
      return o;
    }
    if (oc->verdict == Verdict::Pass) ++within;
  }
  o.detail = std::to_string(r.partitions) + " round trips; " + std::to_string(toys.size()) + " oracle toys, " +
             std::to_string(within) + " with optimum within f";
  return o;
}

Outcome taylor() {
  auto grid = default_taylor_grid();
  AuditReport rep = check_taylor_bounds(grid);
  Outcome o;
  o.pass = grid.size() >= 200 && !rep.any_fail() && rep.count(Verdict::Inconclusive) == 0;
  o.detail = std::to_string(grid.size()) + " samples, " + std::to_string(rep.count(Verdict::Pass)) + " checks pass";
  return o;
}

Outcome dominance() {
  Outcome o;
  using K = Variant::Kind;
  std::vector<std::string> failures;
  size_t checks = 0, instances = 0;
  for (const Variant& v : {Variant::make(K::Flow2, NormExponent::integer(2)),
                           Variant::make(K::Stretch2, NormExponent::integer(2)),
                           Variant::make(K::FlowInt, NormExponent::integer(3)),
                           Variant::make(K::StretchInt, NormExponent::integer(3))}) {
    for (const auto& c : audit_suite(v, {2, 3}, 24)) {
      ++instances;
      for (const auto& rec : c.report.checks) {
        ++checks;
        if (rec.verdict != Verdict::Pass) {
          std::ostringstream os;
          os << v.label() << " m=" << c.tp.m << " B=" << to_string(c.tp.B) << " " << rec.name << " ("
             << verdict_name(rec.verdict) << ": " << rec.left << " " << relation_symbol(rec.relation) << " "
             << rec.right << ")";
          failures.push_back(os.str());
        }
      }
    }
  }
  for (const auto& f : failures) std::cerr << "  criterion 7: " << f << "\n";

  ThreePartitionInstance tp{2, Rational(12), std::vector<Rational>(6, Rational(4))};
  ReductionParams weak = reduction_params(tp, Variant::make(K::Flow2, NormExponent::integer(2)), ToyOverrides::parse("beta=64"));
  AuditReport neg = check_parameter_dominance(tp, weak);
  const CheckRecord* named = neg.find("dominance.alpha_beta_open");
  bool control = named && named->verdict == Verdict::Fail;

  o.pass = failures.empty() && control;
  o.detail = std::to_string(instances) + " instances, " + std::to_string(checks) + " checks, " +
             std::to_string(failures.size()) + " not passing; weakened beta control " +
             (control ? "fails as expected" : "did not fail");
  if (!failures.empty()) o.detail += "; first: " + failures.front();
  return o;
}

Outcome errata() {
  using K = Variant::Kind;
  std::set<std::string> seen;
  auto collect = [&](const Variant& v, unsigned long B) {
    ThreePartitionInstance raw{2, Rational(B), std::vector<Rational>(6, Rational(B / 3))};
    ThreePartitionInstance tp = v.is_stretch() ? tighten_for_stretch(raw, v) : raw;
    AuditReport rep = check_parameter_dominance(tp, reduction_params(tp, v));
    for (const auto& n : rep.notes) seen.insert(n.cls);
  };
  collect(Variant::make(K::Flow2, NormExponent::integer(2)), 12);
  collect(Variant::make(K::Stretch2, NormExponent::integer(2)), 12);
  collect(Variant::make(K::FlowFrac, NormExponent::fractional(Rational(1, 2))), 12);
  const std::vector<std::string> want{"upper-volume-direction", "fo-variants", "f1-factor", "stretch-fact-prefactor",
                                      "frac-association"};
  Outcome o;
  std::string missing;
  for (const auto& w : want)
    if (!seen.count(w)) missing += (missing.empty() ? "" : ", ") + w;
  o.pass = missing.empty();
  o.detail = o.pass ? "all five note classes present" : "missing " + missing;
  return o;
}

}  // namespace

int main(int argc, char** argv) {
  std::set<int> known_red;
  for (int i = 1; i < argc; ++i) {
    std::string a = argv[i];
    if (a == "--known-red" && i + 1 < argc) {
      known_red.insert(std::stoi(argv[++i]));
    } else {
      std::cerr << "usage: acceptance [--known-red N]...\n";
      return 2;
    }
  }

  ForwardResults fwd;
  bool fwd_ready = false;
  auto forward = [&]() -> const ForwardResults& {
    if (!fwd_ready) fwd = run_forward();
    fwd_ready = true;
    return fwd;
  };

  struct Criterion {
    int id;
    const char* title;
    std::function<Outcome()> run;
  };
  const std::vector<Criterion> criteria{
      {1, "SRPT matches brute force for total flow", srpt_optimality},
      {2, "EDF binary search matches brute-force min-max", minmax_edf},
      {3, "increases telescope to the full power", telescoping},
      {4, "partition schedules cost at most the recomputed threshold", [&] { return forward_direction(forward()); }},
      {5, "round trip and brute-force oracle on toy instances", [&] { return round_trip(forward()); }},
      {6, "Taylor bounds on the default grid", taylor},
      {7, "parameter dominance on the sound grid, weakened beta fails", dominance},
      {8, "printed-formula discrepancies reported as notes", errata},
  };

  std::set<int> red;
  for (const auto& c : criteria) {
    auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o.pass = false;
      o.detail = std::string("threw ") + e.what();
    }
    double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (!o.pass) red.insert(c.id);
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.1fs", secs);
    std::cout << "criterion " << c.id << " " << (o.pass ? "PASS" : "FAIL") << "  " << c.title << " [" << o.detail
              << "] " << buf << std::endl;
  }
  return red == known_red ? 0 : 1;
}
