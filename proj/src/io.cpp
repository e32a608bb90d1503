#include "fh/io.hpp"

#include <filesystem>
#include <fstream>
#include <sstream>

#include <unistd.h>

namespace fh::io {

Json to_json(const Rational& q) { return to_string(q); }

Rational rational_from(const Json& j) {
  if (j.is_string()) return parse_rational(j.get<std::string>());
  if (j.is_number_integer()) return Rational(std::to_string(j.get<long long>()));
  throw Error(ErrorKind::ParseError, "expected a rational as text, got " + j.dump());
}

Json to_json(const ObjectiveValue& v) {
  if (v.exact) return to_json(*v.exact);
  return Json{{"lower", v.enclosure->lower_str()}, {"upper", v.enclosure->upper_str()}};
}

namespace {

const Json& field(const Json& j, const char* key) {
  if (!j.is_object() || !j.contains(key)) throw Error(ErrorKind::ParseError, std::string("missing field '") + key + "'");
  return j.at(key);
}

}  // namespace

Json to_json(const ThreePartitionInstance& tp) {
  Json e = Json::array();
  for (const auto& b : tp.elements) e.push_back(to_json(b));
  return Json{{"m", tp.m}, {"B", to_json(tp.B)}, {"elements", e}};
}

ThreePartitionInstance partition_instance_from(const Json& j) {
  ThreePartitionInstance tp;
  tp.m = field(j, "m").get<unsigned>();
  tp.B = rational_from(field(j, "B"));
  for (const auto& e : field(j, "elements")) tp.elements.push_back(rational_from(e));
  return tp;
}

Json to_json(const Partition& p) {
  Json g = Json::array();
  for (const auto& t : p.groups) g.push_back({t[0], t[1], t[2]});
  return Json{{"groups", g}};
}

Partition partition_from(const Json& j) {
  Partition p;
  for (const auto& g : field(j, "groups")) {
    if (!g.is_array() || g.size() != 3) throw Error(ErrorKind::ParseError, "each group needs three indices");
    p.groups.push_back({g[0].get<unsigned>(), g[1].get<unsigned>(), g[2].get<unsigned>()});
  }
  return p;
}

Json to_json(const Instance& inst) {
  Json jobs = Json::array(), streams = Json::array();
  for (const auto& j : inst.jobs)
    jobs.push_back({{"id", j.id}, {"release", to_json(j.release)}, {"proc", to_json(j.proc)}});
  for (const auto& s : inst.streams)
    streams.push_back({{"id", s.id},
                       {"start", to_json(s.start)},
                       {"end", to_json(s.end)},
                       {"period", to_json(s.period)},
                       {"size", to_json(s.size)}});
  return Json{{"jobs", jobs}, {"streams", streams}};
}

Instance instance_from(const Json& j) {
  Instance inst;
  for (const auto& x : field(j, "jobs"))
    inst.jobs.push_back({field(x, "id").get<std::string>(), rational_from(field(x, "release")),
                         rational_from(field(x, "proc"))});
  if (j.contains("streams"))
    for (const auto& x : j.at("streams"))
      inst.streams.push_back({field(x, "id").get<std::string>(), rational_from(field(x, "start")),
                              rational_from(field(x, "end")), rational_from(field(x, "period")),
                              rational_from(field(x, "size"))});
  return inst;
}

Json to_json(const Schedule& s) {
  Json slices = Json::array(), pol = Json::object();
  for (const auto& x : s.slices) slices.push_back({{"from", to_json(x.from)}, {"to", to_json(x.to)}, {"job", x.job}});
  for (const auto& [id, p] : s.stream_policy) pol[id] = policy_name(p);
  return Json{{"slices", slices}, {"stream_policy", pol}};
}

Schedule schedule_from(const Json& j) {
  Schedule s;
  for (const auto& x : field(j, "slices"))
    s.slices.push_back({rational_from(field(x, "from")), rational_from(field(x, "to")), field(x, "job").get<std::string>()});
  if (j.contains("stream_policy"))
    for (const auto& [id, p] : j.at("stream_policy").items()) s.stream_policy[id] = parse_policy(p.get<std::string>());
  return s;
}

Json to_json(const ReductionParams& p) {
  Json j{{"variant", p.variant.name()},
         {"k", p.variant.k.str()},
         {"m", p.m},
         {"B", to_json(p.B)},
         {"alpha", to_json(p.alpha)},
         {"beta", to_json(p.beta)},
         {"rho", to_json(p.rho)},
         {"lambda", to_json(p.lambda)}};
  if (p.variant.is_stretch()) {
    j["epsilon"] = to_json(p.epsilon);
    j["delta_s"] = to_json(p.delta_s);
    j["delta_b"] = to_json(p.delta_b);
  }
  j["toy"] = p.toy;
  if (p.toy) j["sound"] = false;
  Json ov = Json::object();
  auto put = [&](const char* k, const std::optional<Rational>& v) {
    if (v) ov[k] = to_json(*v);
  };
  put("alpha", p.overrides.alpha);
  put("beta", p.overrides.beta);
  put("rho", p.overrides.rho);
  put("lambda", p.overrides.lambda);
  put("epsilon", p.overrides.epsilon);
  j["overrides"] = ov;
  j["deviations"] = p.deviations;
  return j;
}

namespace {

Json components(const std::vector<Component>& cs) {
  Json a = Json::array();
  for (const auto& c : cs) a.push_back({{"name", c.name}, {"value", to_json(c.value)}});
  return a;
}

}  // namespace

Json to_json(const Threshold& t) {
  Json j{{"printed", {{"components", components(t.printed)}, {"total", to_json(t.printed_total)}}}};
  if (t.recomputed)
    j["recomputed"] = {{"partition", to_json(t.recomputed->partition)},
                       {"components", components(t.recomputed->components)},
                       {"total", to_json(t.recomputed->total)}};
  else
    j["recomputed"] = nullptr;
  j["notes"] = t.notes;
  return j;
}

Json to_json(const CheckRecord& c) {
  return Json{{"name", c.name},       {"ref", c.ref},
              {"left", c.left},       {"relation", relation_symbol(c.relation)},
              {"right", c.right},     {"verdict", verdict_name(c.verdict)},
              {"notes", c.notes}};
}

Json to_json(const AuditReport& r) {
  Json params = Json::object(), checks = Json::array(), notes = Json::array();
  Json deviations = Json::array();
  for (const auto& [k, v] : r.parameters) {
    if (k == "deviation") deviations.push_back(v);
    else params[k] = v;
  }
  if (!deviations.empty()) params["deviations"] = deviations;
  for (const auto& c : r.checks) checks.push_back(to_json(c));
  for (const auto& n : r.notes) {
    Json vals = Json::object();
    for (const auto& [k, v] : n.values) vals[k] = v;
    notes.push_back({{"class", n.cls}, {"text", n.text}, {"values", vals}});
  }
  return Json{{"variant", r.variant},
              {"parameters", params},
              {"checks", checks},
              {"notes", notes},
              {"summary",
               {{"pass", r.count(Verdict::Pass)},
                {"fail", r.count(Verdict::Fail)},
                {"inconclusive", r.count(Verdict::Inconclusive)}}}};
}

std::string summary(const AuditReport& r) {
  std::ostringstream os;
  os << r.variant << "\n";
  for (const auto& c : r.checks) os << "  " << verdict_name(c.verdict) << "  " << c.name << "\n";
  for (const auto& n : r.notes) os << "  note  " << n.cls << "\n";
  os << r.count(Verdict::Pass) << " pass, " << r.count(Verdict::Fail) << " fail, " << r.count(Verdict::Inconclusive)
     << " inconclusive\n";
  return os.str();
}

Json read_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::InvalidArgument, "cannot open " + path);
  try {
    return Json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorKind::ParseError, path + ": " + e.what());
  }
}

void write_atomic(const std::string& path, const std::string& content) {
  namespace fs = std::filesystem;
  fs::path target(path);
  fs::path tmp = target;
  tmp += ".tmp." + std::to_string(::getpid());
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(ErrorKind::InvalidArgument, "cannot write " + tmp.string());
    out << content;
    out.flush();
    if (!out) throw Error(ErrorKind::InvalidArgument, "short write to " + tmp.string());
  }
  fs::rename(tmp, target);
}

void write_json(const std::string& path, const Json& j) { write_atomic(path, j.dump(2) + "\n"); }

}  // namespace fh::io
