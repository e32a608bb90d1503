// flowhard: generate 3-partition instances, build the scheduling reductions,
// solve small instances and audit the inequalities behind the reductions.
//
// Exit status: 0 ok / all checks pass, 1 a check failed, 2 usage or input
// error, 3 resource limit (too many jobs to enumerate or materialize).

#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "fh/audit.hpp"
#include "fh/generate.hpp"
#include "fh/io.hpp"
#include "fh/solvers.hpp"

using namespace fh;
using io::Json;

namespace {

constexpr int kExitFail = 1;
constexpr int kExitUsage = 2;
constexpr int kExitLimit = 3;

void emit(const std::string& path, const Json& j) {
  if (path.empty() || path == "-") std::cout << j.dump(2) << "\n";
  else io::write_json(path, j);
}

ObjectiveKind objective_of(const std::string& measure, const std::string& k) {
  return {parse_measure(measure), NormExponent::parse(k)};
}

struct VariantFlags {
  std::string variant;
  std::string k;
  std::string in;
  std::string toy;
  bool normalize = false;

  void add(CLI::App* app) {
    app->add_option("--variant", variant, "flow2, flow-k, flow-frac, stretch2, stretch-k or stretch-frac")->required();
    app->add_option("--k", k, "norm exponent for flow-k, stretch-k (integer >= 3) and *-frac (in (0,1))");
    app->add_option("--in", in, "3-partition file")->required()->check(CLI::ExistingFile);
    app->add_option("--toy", toy, "parameter overrides, e.g. beta=64,rho=1/8");
    app->add_flag("--normalize", normalize, "shift elements into the tight range first");
  }

  struct Loaded {
    ThreePartitionInstance tp;
    ReductionParams params;
  };

  Loaded load() const {
    Variant v = Variant::parse(variant, k);
    ThreePartitionInstance tp = io::partition_instance_from(io::read_json(in));
    if (normalize) tp = normalize_3partition(tp).tp;
    return {tp, reduction_params(tp, v, ToyOverrides::parse(toy))};
  }
};

int cmd_gen3p(unsigned m, const std::string& B_text, bool yes, bool no, uint64_t seed, const std::string& tighten,
              const std::string& k, const std::string& out) {
  if (yes == no) throw Error(ErrorKind::InvalidArgument, "give exactly one of --yes and --no");
  Rational Bq = parse_rational(B_text);
  if (Bq.get_den() != 1 || sgn(Bq) <= 0) throw Error(ErrorKind::InvalidArgument, "--B must be a positive integer");
  unsigned long B = Bq.get_num().get_ui();
  ThreePartitionInstance tp = yes ? generate_yes(m, B, seed) : generate_no(m, B, seed);
  if (!tighten.empty()) tp = tighten_for_stretch(tp, Variant::parse(tighten, k));
  emit(out, io::to_json(tp));
  return 0;
}

int cmd_reduce(const VariantFlags& vf, const std::string& prefix) {
  auto [tp, params] = vf.load();
  Instance inst = build_instance(tp, params);
  Threshold t = threshold_f(tp, params);
  io::write_json(prefix + ".instance.json", io::to_json(inst));
  io::write_json(prefix + ".params.json", io::to_json(params));
  io::write_json(prefix + ".threshold.json", io::to_json(t));
  std::cout << prefix << ".instance.json\n" << prefix << ".params.json\n" << prefix << ".threshold.json\n";
  return 0;
}

int cmd_solve(const std::string& algo, const std::string& measure, const std::string& k, const std::string& in,
              const std::string& out, unsigned bound) {
  Instance inst = io::instance_from(io::read_json(in));
  ObjectiveKind obj = objective_of(measure, k);
  SolveResult r;
  if (algo == "srpt") {
    r = srpt(inst);
    r.value = knorm(inst, r.schedule, obj);
  } else if (algo == "minmax") {
    r = minimize_max(inst, obj.measure);
  } else {
    r = brute_force_optimal(inst, obj, bound);
  }
  if (!out.empty()) io::write_json(out, io::to_json(r.schedule));
  Json j{{"algorithm", r.algorithm}, {"value", io::to_json(r.value)}, {"optimal", r.optimal}};
  std::cout << j.dump(2) << "\n";
  return 0;
}

int cmd_eval(const std::string& in, const std::string& sched, const std::string& measure, const std::string& k) {
  Instance inst = io::instance_from(io::read_json(in));
  Schedule s = io::schedule_from(io::read_json(sched));
  if (auto v = validate_schedule(inst, s); !v.empty())
    throw Error(ErrorKind::InvalidArgument, "schedule violates '" + v.front().rule + "': " + v.front().detail);
  std::cout << Json{{"value", io::to_json(knorm(inst, s, objective_of(measure, k)))}}.dump(2) << "\n";
  return 0;
}

int cmd_extract(const VariantFlags& vf, const std::string& sched) {
  auto [tp, params] = vf.load();
  Instance inst = build_instance(tp, params);
  Schedule s = io::schedule_from(io::read_json(sched));
  Extraction e = extract_partition(inst, params, s);
  if (e.partition) {
    std::cout << io::to_json(*e.partition).dump(2) << "\n";
    return 0;
  }
  const auto& f = *e.failure;
  std::cout << Json{{"not_partition_like", {{"window", f.window}, {"count", f.count}, {"reason", f.reason}}}}.dump(2)
            << "\n";
  return kExitFail;
}

int report_exit(const AuditReport& r, const std::string& out) {
  if (!out.empty()) io::write_json(out, io::to_json(r));
  std::cout << io::summary(r);
  return r.any_fail() ? kExitFail : 0;
}

int cmd_audit(const VariantFlags& vf, const std::string& grid, unsigned long b_max, const std::string& out) {
  if (grid == "taylor") return report_exit(check_taylor_bounds(default_taylor_grid()), out);
  if (grid == "suite") {
    Variant v = Variant::parse(vf.variant, vf.k);
    AuditReport all;
    all.variant = v.label();
    for (auto& c : audit_suite(v, {2, 3}, b_max)) {
      std::string tag = "m=" + std::to_string(c.tp.m) + ",B=" + to_string(c.tp.B) + ":";
      for (auto& rec : c.report.checks) rec.name = tag + rec.name;
      all.merge(std::move(c.report));
    }
    return report_exit(all, out);
  }
  auto [tp, params] = vf.load();
  return report_exit(audit_all(tp, params), out);
}

int cmd_roundtrip(const VariantFlags& vf, const std::string& partition, bool oracle, const std::string& out) {
  auto [tp, params] = vf.load();
  std::optional<Partition> p;
  if (!partition.empty()) {
    p = io::partition_from(io::read_json(partition));
  } else {
    auto all = enumerate_partitions(tp, 1);
    if (all.empty()) throw Error(ErrorKind::InvalidPartition, "instance has no valid partition");
    p = all.front();
  }
  return report_exit(roundtrip(tp, *p, params, oracle), out);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"NP-hardness reductions for k-norm flow and stretch scheduling"};
  app.require_subcommand(1);

  auto* gen = app.add_subcommand("gen3p", "generate a 3-partition instance");
  unsigned m = 2;
  std::string B_text, tighten, gen_k, gen_out;
  bool yes = false, no = false;
  uint64_t seed = 1;
  gen->add_option("--m", m, "number of triples")->required()->check(CLI::PositiveNumber);
  gen->add_option("--B", B_text, "target triple sum")->required();
  gen->add_flag("--yes", yes, "instance with a hidden partition");
  gen->add_flag("--no", no, "instance without any partition (verified exhaustively)");
  gen->add_option("--seed", seed, "RNG seed");
  gen->add_option("--tighten", tighten, "stretch variant whose epsilon window the elements must fit");
  gen->add_option("--k", gen_k, "norm exponent for --tighten");
  gen->add_option("--out", gen_out, "output file (default stdout)");

  auto* red = app.add_subcommand("reduce", "build the scheduling instance, parameters and threshold");
  VariantFlags red_vf;
  std::string prefix = "reduced";
  red_vf.add(red);
  red->add_option("--out-prefix", prefix, "writes PREFIX.{instance,params,threshold}.json");

  auto* sol = app.add_subcommand("solve", "solve a scheduling instance");
  std::string algo = "srpt", measure = "flow", k_text = "1", sol_in, sol_out;
  unsigned bound = kDefaultBruteBound;
  sol->add_option("--algo", algo)->check(CLI::IsMember({"srpt", "minmax", "brute"}));
  sol->add_option("--objective", measure)->check(CLI::IsMember({"flow", "stretch"}));
  sol->add_option("--k", k_text, "norm exponent: integer, fraction in (0,1) or inf");
  sol->add_option("--in", sol_in, "instance file")->required()->check(CLI::ExistingFile);
  sol->add_option("--out", sol_out, "schedule file");
  sol->add_option("--bound", bound, "largest job count brute force accepts");

  auto* ev = app.add_subcommand("eval", "evaluate a schedule");
  std::string ev_in, ev_sched, ev_measure = "flow", ev_k = "1";
  ev->add_option("--in", ev_in, "instance file")->required()->check(CLI::ExistingFile);
  ev->add_option("--schedule", ev_sched, "schedule file")->required()->check(CLI::ExistingFile);
  ev->add_option("--objective", ev_measure)->check(CLI::IsMember({"flow", "stretch"}));
  ev->add_option("--k", ev_k);

  auto* ex = app.add_subcommand("extract", "recover a partition from a schedule of the reduced instance");
  VariantFlags ex_vf;
  std::string ex_sched;
  ex_vf.add(ex);
  ex->add_option("--schedule", ex_sched, "schedule file")->required()->check(CLI::ExistingFile);

  auto* au = app.add_subcommand("audit", "check the inequalities the reduction relies on");
  std::string variant, au_k, au_in, au_toy, grid, au_out;
  unsigned long b_max = 24;
  bool au_norm = false;
  au->add_option("--variant", variant);
  au->add_option("--k", au_k);
  au->add_option("--in", au_in, "3-partition file")->check(CLI::ExistingFile);
  au->add_option("--toy", au_toy);
  au->add_flag("--normalize", au_norm);
  au->add_option("--grid", grid, "taylor: the Taylor-bound grid; suite: all tight YES instances, m in {2,3}")
      ->check(CLI::IsMember({"taylor", "suite"}));
  au->add_option("--b-max", b_max, "largest B for --grid suite");
  au->add_option("--out", au_out, "report file");

  auto* rt = app.add_subcommand("roundtrip", "forward cost, extraction and optional brute-force oracle");
  VariantFlags rt_vf;
  std::string rt_part, rt_out;
  bool oracle = false;
  rt_vf.add(rt);
  rt->add_option("--partition", rt_part, "partition file (default: first valid partition)");
  rt->add_flag("--oracle", oracle, "also solve the materialized instance by brute force");
  rt->add_option("--out", rt_out, "report file");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? 0 : kExitUsage;
  }

  try {
    if (*gen) return cmd_gen3p(m, B_text, yes, no, seed, tighten, gen_k, gen_out);
    if (*red) return cmd_reduce(red_vf, prefix);
    if (*sol) return cmd_solve(algo, measure, k_text, sol_in, sol_out, bound);
    if (*ev) return cmd_eval(ev_in, ev_sched, ev_measure, ev_k);
    if (*ex) return cmd_extract(ex_vf, ex_sched);
    if (*au) {
      if (grid != "taylor" && variant.empty()) throw Error(ErrorKind::InvalidArgument, "audit needs --variant");
      if (grid.empty() && au_in.empty()) throw Error(ErrorKind::InvalidArgument, "audit needs --in or --grid");
      VariantFlags vf{variant, au_k, au_in, au_toy, au_norm};
      return cmd_audit(vf, grid, b_max, au_out);
    }
    if (*rt) return cmd_roundtrip(rt_vf, rt_part, oracle, rt_out);
  } catch (const Error& e) {
    std::cerr << "flowhard: " << e.what() << "\n";
    if (e.kind() == ErrorKind::TooMany || e.kind() == ErrorKind::TooLarge) return kExitLimit;
    if (e.kind() == ErrorKind::Inconclusive) return kExitFail;
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "flowhard: " << e.what() << "\n";
    return kExitUsage;
  }
  return kExitUsage;
}
