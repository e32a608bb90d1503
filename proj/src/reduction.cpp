#include "fh/reduction.hpp"

#include <algorithm>
#include <cctype>
#include <sstream>

namespace fh {

// ---- variants -------------------------------------------------------------

Variant Variant::make(Kind kind, const NormExponent& k) {
  Variant v;
  v.kind = kind;
  v.k = k;
  switch (kind) {
    case Kind::Flow2:
    case Kind::Stretch2: v.k = NormExponent::integer(2); break;
    case Kind::FlowInt:
    case Kind::StretchInt:
      if (!k.is_integer() || k.k_int < 3) throw Error(ErrorKind::InvalidArgument, "this variant needs an integer k >= 3");
      break;
    case Kind::FlowFrac:
    case Kind::StretchFrac:
      if (!k.is_fractional()) throw Error(ErrorKind::InvalidArgument, "this variant needs k in (0,1)");
      break;
  }
  return v;
}

Variant Variant::parse(const std::string& name, const std::string& k_text) {
  auto k = [&]() {
    if (k_text.empty()) throw Error(ErrorKind::InvalidArgument, "variant '" + name + "' needs --k");
    return NormExponent::parse(k_text);
  };
  if (name == "flow2") return make(Kind::Flow2, NormExponent::integer(2));
  if (name == "stretch2") return make(Kind::Stretch2, NormExponent::integer(2));
  if (name == "flow-k") return make(Kind::FlowInt, k());
  if (name == "stretch-k") return make(Kind::StretchInt, k());
  if (name == "flow-frac") return make(Kind::FlowFrac, k());
  if (name == "stretch-frac") return make(Kind::StretchFrac, k());
  throw Error(ErrorKind::InvalidArgument, "unknown variant '" + name + "'");
}

std::string Variant::name() const {
  switch (kind) {
    case Kind::Flow2: return "flow2";
    case Kind::FlowInt: return "flow-k";
    case Kind::FlowFrac: return "flow-frac";
    case Kind::Stretch2: return "stretch2";
    case Kind::StretchInt: return "stretch-k";
    case Kind::StretchFrac: return "stretch-frac";
  }
  return "?";
}

std::string Variant::label() const { return is_two() ? name() : name() + "(k=" + k.str() + ")"; }

Measure Variant::measure() const {
  return (kind == Kind::Stretch2 || kind == Kind::StretchInt || kind == Kind::StretchFrac) ? Measure::Stretch
                                                                                           : Measure::Flow;
}

ToyOverrides ToyOverrides::parse(const std::string& text) {
  ToyOverrides t;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.empty()) continue;
    auto eq = item.find('=');
    if (eq == std::string::npos) throw Error(ErrorKind::ParseError, "override must be name=value: '" + item + "'");
    std::string key = item.substr(0, eq);
    Rational v = parse_rational(item.substr(eq + 1));
    if (sgn(v) <= 0) throw Error(ErrorKind::InvalidArgument, "override '" + key + "' must be positive");
    if (key == "alpha") t.alpha = v;
    else if (key == "beta") t.beta = v;
    else if (key == "rho") t.rho = v;
    else if (key == "lambda") t.lambda = v;
    else if (key == "epsilon") t.epsilon = v;
    else throw Error(ErrorKind::ParseError, "unknown override '" + key + "'");
  }
  return t;
}

// ---- geometry -------------------------------------------------------------

Rational ReductionParams::i0_start() const {
  if (variant.is_frac()) return -beta;
  return -(lambda * beta + beta * B);
}

Rational ReductionParams::release_of(const Rational& b) const {
  if (variant.is_frac()) return -beta + lambda * b;
  return -(lambda * beta + beta * b);
}

Rational ReductionParams::closed_start(unsigned i) const { return Rational(i) * B + Rational(i - 1) * alpha; }

Rational ReductionParams::open_start(unsigned w) const { return Rational(w - 1) * (B + alpha); }

// ---- 3-partition preprocessing ------------------------------------------

Rational default_epsilon(const Variant& v, unsigned m, const Rational& B) {
  Rational mB = Rational(m) * B;
  switch (v.kind) {
    case Variant::Kind::Stretch2: return 1 / pow_int(mB, 9);
    case Variant::Kind::StretchInt: return 1 / pow_int(2 * mB, 20 * v.k.k_int);
    case Variant::Kind::StretchFrac: {
      Rational e = 20 / pow_int(v.k.k_frac, 3);
      return 1 / pow_int(2 * mB, ceil_of(e).get_ui());
    }
    default: return 0;
  }
}

bool in_tight_range(const ThreePartitionInstance& tp) {
  Rational lo = Rational(tp.m) * tp.B / (Rational(3 * tp.m) + Rational(1, 2));
  for (const auto& b : tp.elements)
    if (b < lo || b > tp.B / 2) return false;
  return true;
}

Normalized normalize_3partition(const ThreePartitionInstance& raw) {
  if (auto v = validate_3partition(raw); !v.empty())
    throw Error(ErrorKind::InvalidArgument, "invalid 3-partition instance: " + v.front().rule);
  for (const auto& b : raw.elements)
    if (!(b > raw.B / 4 && b < raw.B / 2) && !in_tight_range(raw))
      throw Error(ErrorKind::InvalidArgument, "elements must lie strictly between B/4 and B/2");
  Rational bmin = *std::min_element(raw.elements.begin(), raw.elements.end());
  // (3m+1/2)(b+K) >= m(B+3K)  <=>  K >= 2(mB - (3m+1/2)b)
  Rational need = 2 * (Rational(raw.m) * raw.B - (Rational(3 * raw.m) + Rational(1, 2)) * bmin);
  Integer K = sgn(need) > 0 ? ceil_of(need) : Integer(0);
  Normalized n;
  n.shift = K;
  n.tp = raw;
  n.tp.B = raw.B + 3 * Rational(K);
  for (auto& b : n.tp.elements) b += Rational(K);
  return n;
}

ThreePartitionInstance tighten_for_stretch(const ThreePartitionInstance& tp, const Variant& v, TightenScheme scheme,
                                           std::optional<Rational> epsilon) {
  if (!v.is_stretch()) throw Error(ErrorKind::InvalidArgument, "tightening applies to stretch variants only");
  Rational eps = epsilon ? *epsilon : default_epsilon(v, tp.m, tp.B);
  Rational third = tp.B / 3;
  Rational dev = 0;
  for (const auto& b : tp.elements) dev = std::max(dev, Rational(abs(b - third)));
  if (dev <= eps) return tp;
  if (scheme == TightenScheme::Shift)
    throw Error(ErrorKind::NotTightenable, "deviation " + to_string(dev) + " from B/3 exceeds epsilon " +
                                               to_string(eps) + " and a common shift cannot reduce it");
  Rational c = eps / dev;
  ThreePartitionInstance out = tp;
  for (auto& b : out.elements) b = third + c * (b - third);
  return out;
}

// ---- parameters -----------------------------------------------------------

namespace {

Rational exact_root_or_throw(const Rational& x, unsigned long n, const char* what) {
  Integer a, b;
  bool ok = mpz_root(a.get_mpz_t(), x.get_num_mpz_t(), n) != 0;
  ok = ok && mpz_root(b.get_mpz_t(), x.get_den_mpz_t(), n) != 0;
  if (!ok) throw Error(ErrorKind::NonRepresentable, std::string(what) + " of " + to_string(x) + " is irrational");
  return Rational(a, b);
}

// ceil((30mkB)^((5/k^2+2)/4)), settled by enclosure at rising precision.
Integer frac_beta_root(unsigned m, const Rational& B, const Rational& k, long bits) {
  Rational base = 30 * Rational(m) * k * B;
  Rational e = (5 / (k * k) + 2) / 4;
  for (long p = bits;; p *= 2) {
    Enclosure x = pow_rat(base, e, p);
    Integer lo, hi;
    mpfr_get_z(lo.get_mpz_t(), x.lo(), MPFR_RNDU);
    mpfr_get_z(hi.get_mpz_t(), x.hi(), MPFR_RNDU);
    if (lo == hi) return lo;
    // Some integer n lies in [lo, hi]; it is the answer iff base^e == n.
    Integer n = lo;
    if (x.contains(Rational(n)) &&
        pow_int(base, e.get_num().get_ui()) == pow_int(Rational(n), e.get_den().get_ui()))
      return n;
    if (p > kCeilingBits) throw Error(ErrorKind::Inconclusive, "could not settle the ceiling for beta");
  }
}

void check_counts(const ReductionParams& p) {
  auto integral = [&](const Rational& len, const std::string& what) {
    Rational c = len / p.rho;
    if (c.get_den() != 1)
      throw Error(ErrorKind::NonRepresentable, what + " length / rho = " + to_string(c) + " is not an integer");
  };
  integral(-p.i0_start(), "I0");
  if (p.m >= 2) integral(p.alpha, "closed interval");
}

}  // namespace

ReductionParams reduction_params(const ThreePartitionInstance& tp, const Variant& v, const ToyOverrides& toy,
                                 long bits) {
  if (auto viol = validate_3partition(tp); !viol.empty())
    throw Error(ErrorKind::InvalidArgument, "invalid 3-partition instance: " + viol.front().rule + " (" +
                                                viol.front().detail + ")");
  ReductionParams p;
  p.variant = v;
  p.m = tp.m;
  p.B = tp.B;
  p.toy = toy.any();
  p.overrides = toy;
  const Rational m = tp.m, B = tp.B;

  if (v.is_stretch()) {
    p.epsilon = toy.epsilon ? *toy.epsilon : default_epsilon(v, tp.m, B);
    p.delta_s = B / 3 - p.epsilon;
    p.delta_b = B / 3 + p.epsilon;
    if (v.kind == Variant::Kind::StretchFrac)
      p.deviations.push_back("epsilon uses the exponent ceil(20/k^3) so that it stays rational");
  }

  if (v.is_two()) {
    p.alpha = toy.alpha ? *toy.alpha : m * m * pow_int(B, 3);
    p.beta = toy.beta ? *toy.beta : pow_int(m, 5) * pow_int(B, 4);
    p.lambda = toy.lambda ? *toy.lambda : Rational(1);
    p.rho = toy.rho ? *toy.rho : 1 / pow_int(p.beta * m, 3);
  } else if (v.is_int()) {
    unsigned long k = v.k.k_int;
    p.alpha = toy.alpha ? *toy.alpha : pow_int(2, 6 * k) * pow_int(m, 6) * pow_int(B, 6);
    p.beta = toy.beta ? *toy.beta : pow_int(2, 10 * k) * pow_int(m, 7) * pow_int(B, 7);
    p.lambda = toy.lambda ? *toy.lambda : B * exact_root_or_throw(p.alpha, 2, "square root of alpha");
    p.rho = toy.rho ? *toy.rho : 1 / pow_int(2 * m * p.beta * p.alpha, 2 * k);
  } else {
    Rational q;
    if (toy.beta) {
      p.beta = *toy.beta;
      q = toy.lambda ? *toy.lambda : exact_root_or_throw(p.beta, 4, "fourth root of beta");
    } else {
      q = Rational(frac_beta_root(tp.m, B, v.k.k_frac, bits));
      p.beta = pow_int(q, 4);
      p.deviations.push_back("beta = q^4 with q = ceil((30mkB)^((5/k^2+2)/4)), at least the printed value");
    }
    p.lambda = toy.lambda ? *toy.lambda : q;
    p.alpha = toy.alpha ? *toy.alpha : 10 * pow_int(q, 3) * m * m * B * B;
    p.rho = toy.rho ? *toy.rho : 1 / (100 * pow_int(m, 4) * p.beta);
  }
  check_counts(p);

  if (v.is_stretch()) {
    for (const auto& b : tp.elements)
      if (b < p.delta_s || b > p.delta_b)
        throw Error(ErrorKind::InvalidArgument, "element " + to_string(b) + " outside [B/3 - eps, B/3 + eps]");
  } else if (!in_tight_range(tp)) {
    throw Error(ErrorKind::InvalidArgument, "elements must lie in [mB/(3m+1/2), B/2]; normalize first");
  }
  return p;
}

Instance build_instance(const ThreePartitionInstance& tp, const ReductionParams& p) {
  Instance inst;
  for (size_t i = 0; i < tp.elements.size(); ++i)
    inst.jobs.push_back({std::to_string(i + 1), p.release_of(tp.elements[i]), tp.elements[i]});
  inst.streams.push_back({"I0", p.i0_start(), 0, p.rho, p.rho});
  for (unsigned i = 1; i < p.m; ++i) {
    Rational s = p.closed_start(i);
    inst.streams.push_back({"I" + std::to_string(i), s, s + p.alpha, p.rho, p.rho});
  }
  return inst;
}

// ---- thresholds -----------------------------------------------------------

namespace {

ObjectiveValue zero_value(const Variant& v, long bits) {
  return v.is_frac() ? ObjectiveValue::of(Enclosure(bits)) : ObjectiveValue::of(0);
}

std::vector<unsigned> group_of(const ThreePartitionInstance& tp, const Partition& p) {
  std::vector<unsigned> g(tp.elements.size() + 1, 0);
  for (unsigned w = 0; w < p.groups.size(); ++w)
    for (unsigned idx : p.groups[w]) g[idx] = w + 1;
  return g;
}

}  // namespace

RecomputedThreshold recomputed_threshold(const ThreePartitionInstance& tp, const ReductionParams& params,
                                         const Partition& p, long bits) {
  if (!is_partition_valid(tp, p)) throw Error(ErrorKind::InvalidPartition, "partition does not solve the instance");
  const Variant& v = params.variant;
  ObjectiveKind obj = v.objective();
  Instance inst = build_instance(tp, params);
  std::vector<unsigned> g = group_of(tp, p);

  RecomputedThreshold r;
  r.partition = p;
  r.f23 = zero_value(v, bits);
  for (const auto& st : inst.streams) r.f23 = r.f23 + stream_cost_fifo(st, obj, bits);

  r.closed.assign(params.m, zero_value(v, bits));
  for (const auto& j : inst.jobs)
    r.closed[0] = r.closed[0] + increase_over_interval(j, params.i0_start(), 0, obj, bits);
  for (unsigned i = 1; i < params.m; ++i) {
    Rational s = params.closed_start(i);
    for (size_t l = 0; l < inst.jobs.size(); ++l)
      if (g[l + 1] > i) r.closed[i] = r.closed[i] + increase_over_interval(inst.jobs[l], s, s + params.alpha, obj, bits);
  }
  r.open.assign(params.m, zero_value(v, bits));
  for (unsigned w = 1; w <= params.m; ++w) {
    Rational o = params.open_start(w);
    for (size_t l = 0; l < inst.jobs.size(); ++l)
      if (g[l + 1] >= w) r.open[w - 1] = r.open[w - 1] + increase_over_interval(inst.jobs[l], o, o + params.B, obj, bits);
  }
  r.total = r.f23;
  r.components.push_back({"f23", r.f23});
  for (unsigned i = 0; i < params.m; ++i) {
    r.components.push_back({"closed[" + std::to_string(i) + "]", r.closed[i]});
    r.total = r.total + r.closed[i];
  }
  for (unsigned w = 1; w <= params.m; ++w) {
    r.components.push_back({"open[" + std::to_string(w) + "]", r.open[w - 1]});
    r.total = r.total + r.open[w - 1];
  }
  return r;
}

ObjectiveValue printed_threshold(const ThreePartitionInstance& tp, const ReductionParams& P,
                                 std::vector<Component>* parts, long bits) {
  const Variant& v = P.variant;
  const Rational m = P.m, B = P.B;
  const Rational &a = P.alpha, &be = P.beta, &rho = P.rho, &lam = P.lambda;
  std::vector<Component> c;
  auto s = [&](unsigned i) { return P.closed_start(i); };

  if (v.is_two()) {
    Rational f23 = v.is_stretch() ? Rational((be * B + be + (m - 1) * a) / rho) : Rational(rho * (be * B + be + (m - 1) * a));
    Rational ds2 = v.is_stretch() ? P.delta_s * P.delta_s : Rational(1);
    Rational f10 = 0;
    for (const auto& b : tp.elements) f10 += pow_int(be + be * b, 2);
    c.push_back({"f23", ObjectiveValue::of(f23)});
    c.push_back({"f1[0]", ObjectiveValue::of(f10 / ds2)});
    for (unsigned i = 1; i < P.m; ++i) {
      Rational f1 = (3 * m - 3 * Rational(i)) * ((s(i) + be) * a + a * a) + 2 * be * a * (m * B - Rational(i) * B);
      c.push_back({"f1[" + std::to_string(i) + "]", ObjectiveValue::of(f1 / ds2)});
    }
    Rational fo = v.is_stretch()
                      ? Rational((6 * m * m * B * (be * B + (m - 1) * B + (m - 1) * a) + 3 * m * B * B) / ds2)
                      : Rational(6 * m * m * B * (be * B + be + (m - 1) * B + (m - 1) * a) + B * B);
    c.push_back({"fo", ObjectiveValue::of(fo)});
  } else if (v.is_int()) {
    unsigned long k = v.k.k_int;
    Rational dsk = v.is_stretch() ? pow_int(P.delta_s, k) : Rational(1);
    Rational f23 = v.is_stretch() ? Rational((be * B + lam * be + (m - 1) * a) / rho)
                                  : Rational(pow_int(rho, k - 1) * (be * B + lam * be + (m - 1) * a));
    c.push_back({"f23", ObjectiveValue::of(f23)});
    Rational t1 = 0;
    for (const auto& b : tp.elements) t1 += pow_int(b * be + be * be, k);
    c.push_back({"type1_start", ObjectiveValue::of(t1)});
    for (unsigned i = 1; i < P.m; ++i) {
      Rational X = s(i) + lam * be;
      Rational term = (3 * m - 3 * Rational(i)) * (pow_int(X + a, k) - pow_int(X, k)) +
                      be * Rational(k) * (pow_int(X + a, k - 1) - pow_int(X, k - 1)) * (m * B - Rational(i) * B) +
                      m * pow_int(2, 2 * k) * pow_int(X, k - 1);
      c.push_back({"closed[" + std::to_string(i) + "]", ObjectiveValue::of(term / dsk)});
    }
    Rational tail = pow_int(be * B + lam * be + (m - 1) * (a + B), k - 1);
    Rational last = v.is_stretch() ? Rational(3 * m * pow_int(2, 2 * k) * B * tail / dsk)
                                 : Rational(3 * m * m * pow_int(2, k) * B * tail);
    c.push_back({"open", ObjectiveValue::of(last)});
  } else {
    const Rational& k = v.k.k_frac;
    Enclosure dsk = v.is_stretch() ? pow_frac(P.delta_s, k, bits) : Enclosure::exact(1, bits);
    Enclosure f23 = v.is_stretch() ? Enclosure::exact((be + (m - 1) * a) / rho, bits)
                                   : (be + (m - 1) * a) / pow_frac(rho, 1 - k, bits);
    c.push_back({"f23", ObjectiveValue::of(f23)});
    Enclosure open = (3 * m * m * k * B) / pow_frac(be - lam * B, 1 - k, bits) / dsk;
    c.push_back({"open", ObjectiveValue::of(open)});
    Enclosure start(bits);
    for (const auto& b : tp.elements) start = start + pow_frac(be - lam * b, k, bits);
    c.push_back({"type1_start", ObjectiveValue::of(start / dsk)});
    Enclosure bk2 = pow_frac(be, k / 2, bits);
    for (unsigned i = 1; i < P.m; ++i) {
      Enclosure y = s(i) + be - bk2;
      Enclosure y1 = pow_rat(y, 1 - k), y2 = pow_rat(y, 2 - k);
      Enclosure first = (k * a) / y1 - (k * (1 - k) * pow_frac(be, k, bits)) / (2 * y2);
      Enclosure second = (k * (1 - k) * bk2 * lam * (m * B - Rational(i) * B)) / y2;
      c.push_back({"closed[" + std::to_string(i) + "]", ObjectiveValue::of(((3 * m - 3 * Rational(i)) * first + second) / dsk)});
    }
  }
  ObjectiveValue total = zero_value(v, bits);
  for (const auto& x : c) total = total + x.value;
  if (parts) *parts = std::move(c);
  return total;
}

Threshold threshold_f(const ThreePartitionInstance& tp, const ReductionParams& params,
                      const std::optional<Partition>& p, long bits) {
  Threshold t;
  t.printed_total = printed_threshold(tp, params, &t.printed, bits);
  if (p) {
    t.recomputed = recomputed_threshold(tp, params, *p, bits);
    return t;
  }
  std::vector<Partition> all = enumerate_partitions(tp);
  if (all.empty()) {
    t.notes.push_back("no valid partition exists, so there is no partition schedule to price");
    return t;
  }
  for (const auto& q : all) {
    RecomputedThreshold r = recomputed_threshold(tp, params, q, bits);
    if (!t.recomputed) {
      t.recomputed = std::move(r);
      continue;
    }
    if (r.total.exact) {
      if (*r.total.exact > *t.recomputed->total.exact) t.recomputed = std::move(r);
      continue;
    }
    // Hull of the candidates' enclosures still encloses the maximum.
    Enclosure cur = *t.recomputed->total.enclosure, nxt = *r.total.enclosure;
    Enclosure hull(cur.bits());
    mpfr_max(hull.lo(), cur.lo(), nxt.lo(), MPFR_RNDD);
    mpfr_max(hull.hi(), cur.hi(), nxt.hi(), MPFR_RNDU);
    if (mpfr_greater_p(nxt.hi(), cur.hi())) t.recomputed = std::move(r);
    t.recomputed->total = ObjectiveValue::of(hull);
  }
  if (all.size() > 1)
    t.notes.push_back("recomputed total is the largest over " + std::to_string(all.size()) + " valid partitions");
  return t;
}

// ---- partition schedule and extraction -----------------------------------

Schedule build_partition_schedule(const ThreePartitionInstance& tp, const Partition& partition,
                                  const ReductionParams& params) {
  if (!is_partition_valid(tp, partition))
    throw Error(ErrorKind::InvalidPartition, "groups must be disjoint triples each summing to B");
  Schedule s;
  for (unsigned w = 1; w <= partition.groups.size(); ++w) {
    auto g = partition.groups[w - 1];
    std::sort(g.begin(), g.end());
    Rational t = params.open_start(w);
    for (unsigned idx : g) {
      Rational b = tp.elements[idx - 1];
      s.slices.push_back({t, t + b, std::to_string(idx)});
      t += b;
    }
  }
  s.stream_policy["I0"] = StreamPolicy::FifoAsReleased;
  for (unsigned i = 1; i < params.m; ++i) s.stream_policy["I" + std::to_string(i)] = StreamPolicy::FifoAsReleased;
  normalize_slices(s.slices);
  return s;
}

Extraction extract_partition(const Instance& inst, const ReductionParams& params, const Schedule& s) {
  CompletionMap c = completion_times(inst, s);
  const unsigned m = params.m;
  std::vector<std::vector<unsigned>> windows(m + 1);
  std::vector<Rational> window_sum(m + 1, 0);
  auto window_end = [&](unsigned w) { return w == 0 ? Rational(0) : params.closed_start(w) + params.alpha; };
  auto numeric = [](const JobId& id) {
    return !id.empty() && std::all_of(id.begin(), id.end(), [](unsigned char ch) { return std::isdigit(ch); });
  };
  for (const auto& j : inst.jobs) {
    if (!numeric(j.id)) continue;
    const Rational& C = c.at(j.id);
    unsigned w = 0;
    while (w < m && C > window_end(w)) ++w;
    windows[w].push_back(static_cast<unsigned>(std::stoul(j.id)));
    window_sum[w] += j.proc;
  }
  Extraction e;
  if (!windows[0].empty()) {
    e.failure = NotPartitionLike{0, static_cast<unsigned>(windows[0].size()), "Type 1 jobs completed by time 0"};
    return e;
  }
  Partition p;
  for (unsigned w = 1; w <= m; ++w) {
    if (windows[w].size() != 3) {
      e.failure = NotPartitionLike{w, static_cast<unsigned>(windows[w].size()), "window does not hold 3 completions"};
      return e;
    }
    if (window_sum[w] != params.B) {
      e.failure = NotPartitionLike{w, 3, "window total " + to_string(window_sum[w]) + " differs from B"};
      return e;
    }
    std::array<unsigned, 3> g{windows[w][0], windows[w][1], windows[w][2]};
    std::sort(g.begin(), g.end());
    p.groups.push_back(g);
  }
  e.partition = p;
  return e;
}

}  // namespace fh
