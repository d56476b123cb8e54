#include "recurlab/verify.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <random>

#include "recurlab/error.hpp"

namespace recur {

namespace {

using Status = CheckOutcome::Status;

std::string join_rationals(const std::vector<Rational>& v) {
  std::string s;
  for (std::size_t i = 0; i < v.size(); ++i) s += (i > 0 ? "," : "") + v[i].get_str();
  return s;
}

std::string join_naturals(const std::vector<std::uint64_t>& v) {
  std::string s;
  for (std::size_t i = 0; i < v.size(); ++i) s += (i > 0 ? "," : "") + std::to_string(v[i]);
  return s;
}

std::string settings_text(const SweepSettings& s) {
  return "eps=" + join_rationals(s.epsilons) + "; seminorms=" + join_naturals(s.seminorms) +
         "; N=" + std::to_string(s.horizon) + "; " + s.thresholds.to_string();
}

CheckOutcome start(const std::string& name, const std::string& witness, std::uint64_t seed) {
  CheckOutcome out;
  out.name = name;
  out.witness = witness;
  out.seed = seed;
  out.fingerprint = fnv1a_hex(name + "\n" + witness);
  return out;
}

void finish(CheckOutcome& out, bool pass, const std::string& reason = {}) {
  out.status = pass ? Status::Pass : Status::Fail;
  if (!pass) out.reason = reason;
}

void skip(CheckOutcome& out, const std::string& reason) {
  out.status = Status::Skipped;
  out.reason = reason;
}

bool unimodular(const Scalar& z, double tolerance) {
  if (const auto a2 = z.abs2_exact()) return *a2 == 1;
  return std::abs(z.abs() - 1.0) <= tolerance;
}

std::string label_list(const std::vector<RecurrenceVerdict>& v) {
  std::string s;
  for (std::size_t i = 0; i < v.size(); ++i) s += (i > 0 ? "," : "") + v[i].label_text();
  return s;
}

bool ip_falsified(const RecurrenceVerdict& v) {
  return std::any_of(v.evidence.begin(), v.evidence.end(), [](const EpsilonEvidence& e) {
    return e.evidence.ip.kind == IpProbeResult::Kind::FalsifiedByIpWitness;
  });
}

StateVector basis(const SpaceDescriptor& space, std::int64_t i) { return StateVector::sparse(space, {{i, Scalar(1)}}); }

}  // namespace

std::string to_string(CheckOutcome::Status s) {
  switch (s) {
    case Status::Pass:
      return "Pass";
    case Status::Fail:
      return "Fail";
    case Status::Skipped:
      return "Skipped";
  }
  return "?";
}

std::string fnv1a_hex(const std::string& text) {
  std::uint64_t h = 14695981039346656037ULL;
  for (unsigned char c : text) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

void CheckOutcome::metric(const std::string& key, double value) { metrics.emplace_back(key, format_double(value, 10)); }

std::optional<std::string> CheckOutcome::find_metric(const std::string& key) const {
  for (const auto& [k, v] : metrics) {
    if (k == key) return v;
  }
  return std::nullopt;
}

std::string CheckOutcome::to_record() const {
  std::string s = "check=" + name + "\nstatus=" + to_string(status) + "\n";
  s += "seed=" + std::to_string(seed) + "\nfingerprint=" + fingerprint + "\n";
  s += "witness=" + witness + "\n";
  if (!reason.empty()) s += "reason=" + reason + "\n";
  for (const auto& [k, v] : metrics) s += k + "=" + v + "\n";
  return s;
}

std::vector<ReturnSetRecord> sweep(const Operator& op, const StateVector& x, const SweepSettings& s) {
  return return_sets(op, x, s.epsilons, s.seminorms, s.horizon);
}

RecurrenceVerdict classify_orbit(const Operator& op, const StateVector& x, const SweepSettings& s) {
  return classify(sweep(op, x, s), s.thresholds);
}

bool same_class(Label a, Label b) { return a == b || (at_least(a, Label::Uniform) && at_least(b, Label::Uniform)); }

CheckOutcome matrix_recurrence_check(const MatrixOperator& m, const SweepSettings& s, const EigenOptions& eig) {
  auto out = start("matrix", "op=" + m.literal() + "; " + settings_text(s), s.thresholds.seed);
  EigenStructure e;
  try {
    e = eigen_structure(m, eig);
  } catch (const Error& err) {
    skip(out, err.what());
    return out;
  }
  const bool criterion = e.diagonalizable && e.unimodular;
  std::vector<RecurrenceVerdict> verdicts;
  bool simulation = true;
  std::size_t ip_certified = 0;
  for (std::size_t i = 1; i <= m.dimension(); ++i) {
    verdicts.push_back(classify_orbit(m, basis(m.space(), static_cast<std::int64_t>(i)), s));
    simulation = simulation && at_least(verdicts.back().label, Label::Recurrent);
    if (at_least(verdicts.back().label, Label::IpStar)) ++ip_certified;
  }
  std::string values;
  for (const auto& c : e.eigenvalues) {
    values += (values.empty() ? "" : ",") + Scalar::inexact(c.value).to_string(8) + "^" + std::to_string(c.algebraic) +
              "/" + std::to_string(c.geometric);
  }
  out.metric("eigenvalues", values);
  out.metric("diagonalizable", e.diagonalizable ? "1" : "0");
  out.metric("unimodular", e.unimodular ? "1" : "0");
  out.metric("condition", e.condition);
  out.metric("criterion", criterion ? "recurrent" : "not-recurrent");
  out.metric("simulation", simulation ? "recurrent" : "not-recurrent");
  out.metric("basis_labels", label_list(verdicts));
  out.metric("ip_certified", std::to_string(ip_certified));
  finish(out, criterion == simulation, "criterion and simulation disagree");
  return out;
}

CheckOutcome diagonal_recurrence_check(const DiagonalOperator& d, std::uint64_t sample_size, const SweepSettings& s,
                                       double tolerance) {
  if (d.is_finite()) sample_size = std::min<std::uint64_t>(sample_size, d.values().size());
  auto out = start("diagonal", "op=" + d.literal() + "; sample=" + std::to_string(sample_size) + "; " + settings_text(s),
                   s.thresholds.seed);
  if (sample_size == 0) {
    skip(out, "empty sample");
    return out;
  }
  bool criterion = true;
  for (std::uint64_t n = 1; n <= sample_size; ++n) {
    criterion = criterion && unimodular(d.eigenvalue(static_cast<std::int64_t>(n)), tolerance);
  }
  std::vector<StateVector> sample;
  StateVector::Sparse sum;
  for (std::uint64_t n = 1; n <= sample_size; ++n) {
    sample.push_back(basis(d.space(), static_cast<std::int64_t>(n)));
    if (n <= 3) sum[static_cast<std::int64_t>(n)] = Scalar(1);
  }
  if (sample_size > 1) sample.push_back(StateVector::sparse(d.space(), sum));
  std::vector<RecurrenceVerdict> verdicts;
  bool simulation = true;
  bool falsified = false;
  for (const auto& x : sample) {
    verdicts.push_back(classify_orbit(d, x, s));
    simulation = simulation && at_least(verdicts.back().label, Label::Uniform);
    falsified = falsified || ip_falsified(verdicts.back());
  }
  simulation = simulation && !falsified;
  out.metric("criterion", criterion ? "recurrent" : "not-recurrent");
  out.metric("simulation", simulation ? "recurrent" : "not-recurrent");
  out.metric("labels", label_list(verdicts));
  out.metric("ip_falsified", falsified ? "1" : "0");
  finish(out, criterion == simulation, "criterion and simulation disagree");
  return out;
}

KroneckerWindow kronecker_window(const std::vector<Scalar>& lambdas, double epsilon, std::uint64_t horizon) {
  KroneckerWindow k;
  k.distances.assign(horizon + 1, 0.0);
  for (const auto& l : lambdas) {
    const auto* e = l.exact();
    const bool root = e != nullptr && ((abs(e->re) == 1 && e->im == 0) || (e->re == 0 && abs(e->im) == 1));
    if (root) {
      Scalar cur(1);
      for (std::uint64_t n = 0; n <= horizon; ++n) {
        if (!(cur == Scalar(1))) k.distances[n] = std::max(k.distances[n], std::abs(cur.to_complex() - 1.0));
        cur *= l;
      }
    } else {
      const std::complex<double> z = l.to_complex();
      const double r = std::abs(z);
      const double theta = std::arg(z);
      for (std::uint64_t n = 0; n <= horizon; ++n) {
        const double nd = static_cast<double>(n);
        const std::complex<double> zn = std::polar(std::pow(r, nd), nd * theta);
        k.distances[n] = std::max(k.distances[n], std::abs(zn - 1.0));
      }
    }
  }
  std::vector<std::uint64_t> e;
  for (std::uint64_t n = 0; n <= horizon; ++n) {
    if (k.distances[n] < epsilon) e.push_back(n);
  }
  k.window = IndexWindow(std::move(e), horizon);
  return k;
}

CheckOutcome kronecker_check(const std::vector<Scalar>& lambdas, double epsilon, std::uint64_t horizon,
                             const IpProbeOptions& ip, double tolerance) {
  std::string lam;
  for (const auto& l : lambdas) lam += (lam.empty() ? "" : ",") + l.to_string();
  auto out = start("kronecker",
                   "lambdas=" + lam + "; eps=" + format_double(epsilon, 17) + "; N=" + std::to_string(horizon) +
                       "; ip_budget=" + std::to_string(ip.budget),
                   ip.seed);
  if (lambdas.empty() || horizon == 0 || !(epsilon > 0)) {
    skip(out, "needs at least one lambda, N >= 1 and eps > 0");
    return out;
  }
  for (const auto& l : lambdas) {
    if (!unimodular(l, tolerance)) {
      skip(out, "lambda " + l.to_string() + " is not unimodular");
      return out;
    }
  }
  const auto k = kronecker_window(lambdas, epsilon, horizon);
  const auto cert = syndetic_certificate(k.window);
  const auto probe = ip_star_probe(k.window, ip);
  out.metric("returns", std::to_string(k.window.size()));
  out.metric("max_gap", std::to_string(cert.max_gap));
  out.metric("trailing_gap", std::to_string(cert.trailing_gap));
  out.metric("gap_cap", std::to_string(cert.cap));
  out.metric("syndetic", cert.certified ? "1" : "0");
  out.metric("ip", to_string(probe));
  const auto& el = k.window.elements();
  bool progression = el.size() >= 2;
  for (std::size_t i = 0; progression && i < el.size(); ++i) progression = el[i] == i * el[1];
  if (progression && el.size() == horizon / el[1] + 1) out.metric("progression", std::to_string(el[1]));
  if (!cert.certified) {
    finish(out, false, "return set not certified syndetic (max gap " + std::to_string(cert.max_gap) + ", cap " +
                           std::to_string(cert.cap) + ")");
  } else {
    finish(out, probe.kind != IpProbeResult::Kind::FalsifiedByIpWitness, "IP set avoiding the return set found");
  }
  return out;
}

CheckOutcome span_eigenvector_check(const Operator& op, const std::vector<Eigenpair>& pairs,
                                    const std::vector<Scalar>& coefficients, const SweepSettings& s) {
  std::string w = "op=" + op.literal() + "; pairs=";
  for (std::size_t i = 0; i < pairs.size(); ++i) {
    w += (i > 0 ? " | " : "") + pairs[i].lambda.to_string() + " -> " + pairs[i].vector.to_string();
  }
  w += "; coefficients=";
  for (std::size_t i = 0; i < coefficients.size(); ++i) w += (i > 0 ? "," : "") + coefficients[i].to_string();
  auto out = start("span_eigen", w + "; " + settings_text(s), s.thresholds.seed);
  if (pairs.empty() || pairs.size() != coefficients.size()) {
    skip(out, "need one coefficient per eigenpair");
    return out;
  }
  double scale = 0;
  StateVector x = StateVector::zero(op.space());
  std::vector<Scalar> lambdas;
  for (std::size_t i = 0; i < pairs.size(); ++i) {
    const auto& [lambda, v] = pairs[i];
    const double norm = seminorm_max(op.space(), s.seminorms, v).approx;
    const double defect = seminorm_max(op.space(), s.seminorms, op.apply(v) - v.scaled(lambda)).approx;
    if (!(defect <= 1e-9 * std::max(1.0, norm))) {
      skip(out, "pair " + std::to_string(i) + " is not an eigenpair (defect " + format_double(defect, 6) + ")");
      return out;
    }
    if (!unimodular(lambda, 1e-10)) {
      skip(out, "eigenvalue " + lambda.to_string() + " is not unimodular");
      return out;
    }
    scale += coefficients[i].abs() * norm;
    x = x + v.scaled(coefficients[i]);
    lambdas.push_back(lambda);
  }
  const auto records = sweep(op, x, s);
  const auto verdict = classify(records, s.thresholds);
  bool contained = true;
  std::string missing;
  for (const auto& r : records) {
    if (scale == 0) break;
    // Shrunk by a rounding margin: the bound is exact, the evaluation is not.
    const double eps = to_double(r.epsilon) / scale * (1 - 1e-9);
    const auto k = kronecker_window(lambdas, eps, s.horizon);
    if (!k.window.subset_of(r.window)) {
      contained = false;
      missing = r.epsilon.get_str();
    }
  }
  out.metric("label", verdict.label_text());
  out.metric("coefficient_scale", scale);
  out.metric("kronecker_contained", contained ? "1" : "0");
  out.metric("span_note", "the span of unimodular eigenvectors can be a strict subset of the IP*-recurrent vectors");
  if (!at_least(verdict.label, Label::Uniform)) {
    finish(out, false, "label " + verdict.label_text() + " below Uniform");
  } else {
    finish(out, contained, "Kronecker window not contained in the return window at eps=" + missing);
  }
  return out;
}

CheckOutcome ansari_check(const OperatorPtr& op, const StateVector& x, std::uint64_t p, const SweepSettings& s) {
  auto out = start("ansari",
                   "op=" + op->literal() + "; x=" + x.to_string() + "; p=" + std::to_string(p) + "; " + settings_text(s),
                   s.thresholds.seed);
  if (p == 0 || s.horizon / p == 0) {
    skip(out, "needs 1 <= p <= N");
    return out;
  }
  SweepSettings sp = s;
  sp.horizon = s.horizon / p;
  const auto tp = power(p, op);
  const auto base = sweep(*op, x, s);
  const auto stepped = sweep(*tp, x, sp);
  std::uint64_t mismatches = 0;
  std::string first;
  for (std::size_t i = 0; i < base.size(); ++i) {
    const auto expected = contract(base[i].window, p);
    if (!(expected == stepped[i].window)) {
      ++mismatches;
      if (first.empty()) first = base[i].epsilon.get_str();
    }
  }
  // Labels are compared at the same horizon, so every threshold (burn-in,
  // syndetic cap, tail margin) is the same for both operators.
  const auto lt = classify(base, s.thresholds);
  const auto lp = classify(sweep(*tp, x, s), s.thresholds);
  const bool labels = same_class(lt.label, lp.label);
  out.metric("identity_mismatches", std::to_string(mismatches));
  out.metric("label_T", lt.label_text());
  out.metric("label_Tp", lp.label_text());
  out.metric("labels_agree", labels ? "1" : "0");
  if (mismatches > 0) {
    finish(out, false, "window of T^p differs from contract(window of T, p) at eps=" + first);
  } else {
    finish(out, labels, "labels " + lt.label_text() + " and " + lp.label_text() + " are in different classes");
  }
  return out;
}

CheckOutcome leon_muller_check(const OperatorPtr& op, const StateVector& x, const Scalar& lambda,
                               const SweepSettings& s, double tolerance) {
  auto out = start("leon_muller",
                   "op=" + op->literal() + "; x=" + x.to_string() + "; lambda=" + lambda.to_string() + "; " +
                       settings_text(s),
                   s.thresholds.seed);
  if (!unimodular(lambda, tolerance)) {
    skip(out, "lambda is not unimodular");
    return out;
  }
  const auto lt = classify_orbit(*op, x, s);
  const auto ll = classify_orbit(*scaled(lambda, op), x, s);
  out.metric("label_T", lt.label_text());
  out.metric("label_lambdaT", ll.label_text());
  finish(out, same_class(lt.label, ll.label),
         "labels " + lt.label_text() + " and " + ll.label_text() + " are in different classes");
  return out;
}

std::string to_string(SeriesVerdict v) {
  switch (v) {
    case SeriesVerdict::Converging:
      return "Converging";
    case SeriesVerdict::Diverging:
      return "Diverging";
    case SeriesVerdict::Inconclusive:
      return "Inconclusive";
  }
  return "?";
}

namespace {

double log_add(double a, double b) {
  if (a == -INFINITY) return b;
  if (b == -INFINITY) return a;
  const double m = std::max(a, b);
  return m + std::log1p(std::exp(std::min(a, b) - m));
}

/// Least-squares slope and intercept of y against log(n).
std::pair<double, double> log_fit(const std::vector<std::pair<std::uint64_t, double>>& pts) {
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  const double k = static_cast<double>(pts.size());
  for (const auto& [n, y] : pts) {
    const double x = std::log(static_cast<double>(n));
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  const double den = k * sxx - sx * sx;
  if (den <= 0) return {0, 0};
  const double a = (k * sxy - sx * sy) / den;
  return {a, (sy - a * sx) / k};
}

}  // namespace

SeriesCurve shift_series(const Expr& weights, const IndexWindow& a, const SeriesOptions& o) {
  if (o.space.kind != SpaceDescriptor::Kind::SequenceLp || o.space.over_integers) {
    throw ConfigError("the series criterion is implemented for l^p(N)");
  }
  const std::uint64_t h = a.horizon();
  if (h == 0) throw DegenerateWindow("series window needs a positive horizon");
  const double p = to_double(o.space.p);
  SeriesCurve c;
  double log_prod = 0;
  double log_sum = -INFINITY;
  // Largest |w_n|^{-p} over the second half of the horizon.
  double ratio = 0;
  double next_sample = 1;
  for (std::uint64_t n = 1; n <= h; ++n) {
    const double w = weights.eval(static_cast<std::int64_t>(n)).abs();
    if (!(w > 0) || !std::isfinite(w)) throw ConfigError("weight w_" + std::to_string(n) + " is zero or not finite");
    log_prod += std::log(w);
    if (2 * n > h) ratio = std::max(ratio, std::exp(-p * std::log(w)));
    if (a.contains(n)) {
      log_sum = log_add(log_sum, -p * log_prod);
      const double sum = std::exp(log_sum);
      if (!c.crossing && sum > o.divergence_threshold) c.crossing = static_cast<double>(n);
    }
    if (static_cast<double>(n) >= next_sample || n == h) {
      c.partial_sums.emplace_back(n, std::exp(log_sum));
      next_sample = std::max(next_sample + 1, next_sample * 1.05);
    }
  }
  c.total = std::exp(log_sum);
  if (c.crossing) {
    c.verdict = SeriesVerdict::Diverging;
    return c;
  }
  if (ratio < 1 && c.total > 0) {
    c.tail_estimate = std::exp(-p * log_prod) * ratio / (1 - ratio);
    if (c.tail_estimate < o.tail_tolerance * c.total) {
      c.verdict = SeriesVerdict::Converging;
      return c;
    }
  }
  // Logarithmic growth that persists over the last half and last quarter of the
  // schedule is extrapolated to the threshold.
  std::vector<std::pair<std::uint64_t, double>> half, quarter;
  for (const auto& pt : c.partial_sums) {
    if (pt.first * 2 >= h) half.push_back(pt);
    if (pt.first * 4 >= 3 * h) quarter.push_back(pt);
  }
  if (half.size() >= 4 && quarter.size() >= 3) {
    const auto [a2, b2] = log_fit(half);
    const auto [a4, b4] = log_fit(quarter);
    (void)b4;
    if (a2 > 1e-3 && std::abs(a4 - a2) <= 0.1 * a2) {
      const double log_n = (o.divergence_threshold - b2) / a2;
      if (log_n < 700) {
        c.crossing = std::exp(log_n);
        c.extrapolated = true;
        c.verdict = SeriesVerdict::Diverging;
      }
    }
  }
  return c;
}

CheckOutcome shift_series_check(const Expr& weights, const IndexWindow& a, const SeriesOptions& o,
                                std::optional<SeriesVerdict> expect) {
  const std::string set = a.size() <= 20 ? a.serialize() : "horizon=" + std::to_string(a.horizon()) + " size=" +
                                                               std::to_string(a.size()) + " fnv=" + fnv1a_hex(a.serialize());
  auto out = start("shift_series",
                   "weights=" + weights.text() + "; A=" + set + "; threshold=" + format_double(o.divergence_threshold, 17) +
                       "; space=" + o.space.to_string(),
                   0);
  SeriesCurve c;
  try {
    c = shift_series(weights, a, o);
  } catch (const Error& e) {
    skip(out, e.what());
    return out;
  }
  out.metric("verdict", to_string(c.verdict));
  out.metric("partial_sum", c.total);
  out.metric("tail_estimate", c.tail_estimate);
  if (c.crossing) {
    out.metric("crossing", *c.crossing);
    out.metric("crossing_extrapolated", c.extrapolated ? "1" : "0");
  }
  if (expect && c.verdict != *expect) {
    finish(out, false, "expected " + to_string(*expect) + ", got " + to_string(c.verdict));
    return out;
  }
  if (!expect && c.verdict == SeriesVerdict::Inconclusive) {
    finish(out, false, "series verdict inconclusive within the horizon");
    return out;
  }
  const std::uint64_t h = a.horizon();
  const bool all = a.size() >= h && a.count_in(1, h) == h;
  if (c.verdict != SeriesVerdict::Converging || !all) {
    finish(out, true);
    return out;
  }
  // Fixed-point witness: x = sum_{n <= M} (w_1...w_n)^{-1} e_n has
  // B_w x - x = -x_M e_M.
  const std::uint64_t m = std::min(h, o.construction_cap);
  StateVector::Sparse coords;
  Scalar prod(1);
  double ratio = 0;
  for (std::uint64_t n = 1; n <= m; ++n) {
    const Scalar w = weights.eval(static_cast<std::int64_t>(n));
    prod *= w;
    if (2 * n > m) ratio = std::max(ratio, std::pow(w.abs(), -to_double(o.space.p)));
    coords[static_cast<std::int64_t>(n)] = Scalar(1) / prod;
  }
  const StateVector x = StateVector::sparse(o.space, coords);
  const ShiftOperator b(weights, false, o.space);
  const StateVector defect = b.apply(x) - x;
  const NormValue norm = seminorm(o.space, 0, defect);
  const double p = to_double(o.space.p);
  const double last = coords.at(static_cast<std::int64_t>(m)).abs();
  const double tail = ratio < 1 ? std::pow(std::pow(last, p) / (1 - ratio), 1 / p) : INFINITY;
  const bool support = defect.coords().size() <= 1 &&
                       (defect.coords().empty() || defect.coords().begin()->first == static_cast<std::int64_t>(m));
  out.metric("fixed_point_M", std::to_string(m));
  out.metric("fixed_point_defect", norm.approx);
  out.metric("fixed_point_tail", tail);
  out.metric("fixed_point_exact", norm.exact_pow ? "1" : "0");
  finish(out, support && norm.approx <= tail, "B_w x_A - x_A is not confined to the truncation point");
  return out;
}

namespace {

using Rng = std::mt19937_64;

std::uint64_t uniform(Rng& rng, std::uint64_t lo, std::uint64_t hi) {
  return std::uniform_int_distribution<std::uint64_t>(lo, hi)(rng);
}

IndexWindow random_gaps(Rng& rng, std::uint64_t lo, std::uint64_t hi, std::uint64_t h) {
  std::vector<std::uint64_t> e;
  for (std::uint64_t n = uniform(rng, 0, hi - 1); n <= h; n += uniform(rng, lo, hi)) e.push_back(n);
  return IndexWindow(std::move(e), h);
}

IndexWindow bernoulli(Rng& rng, double p, std::uint64_t h) {
  std::bernoulli_distribution coin(p);
  std::vector<std::uint64_t> e;
  for (std::uint64_t n = 0; n <= h; ++n) {
    if (coin(rng)) e.push_back(n);
  }
  return IndexWindow(std::move(e), h);
}

IndexWindow blocks(Rng& rng, std::uint64_t len_lo, std::uint64_t len_hi, std::uint64_t gap_lo, std::uint64_t gap_hi,
                   std::uint64_t h) {
  std::vector<std::uint64_t> e;
  std::uint64_t n = uniform(rng, 0, gap_hi);
  while (n <= h) {
    const std::uint64_t len = uniform(rng, len_lo, len_hi);
    for (std::uint64_t k = n; k <= std::min(h, n + len); ++k) e.push_back(k);
    n += len + uniform(rng, gap_lo, gap_hi);
  }
  return IndexWindow(std::move(e), h);
}

IndexWindow residue_member(Rng& rng, std::uint64_t kmax, std::uint64_t h) {
  const std::uint64_t k = uniform(rng, 1, kmax);
  return IndexWindow::residue(k, uniform(rng, 0, k - 1), h);
}

IndexWindow sample_member(const std::string& family, Rng& rng, std::uint64_t h) {
  const std::uint64_t kind = uniform(rng, 0, 2);
  if (family == "infinite") {
    if (kind == 0) return window_from_expression("squares", h);
    if (kind == 1) {
      std::vector<std::uint64_t> g;
      for (int i = 0; i < 8; ++i) g.push_back(uniform(rng, 1, h / 4));
      std::sort(g.begin(), g.end());
      g.erase(std::unique(g.begin(), g.end()), g.end());
      return ip_generate(g, g.size(), h);
    }
    return random_gaps(rng, 1, uniform(rng, 20, 300), h);
  }
  if (family == "syndetic") {
    if (kind == 0) return residue_member(rng, 20, h);
    if (kind == 1) return random_gaps(rng, 1, uniform(rng, 2, 30), h);
    return bernoulli(rng, 0.3 + 0.4 * std::uniform_real_distribution<double>()(rng), h);
  }
  if (family == "lower-density") {
    if (kind == 0) return residue_member(rng, 5, h);
    if (kind == 1) return random_gaps(rng, 1, uniform(rng, 2, 8), h);
    return bernoulli(rng, 0.2 + 0.4 * std::uniform_real_distribution<double>()(rng), h);
  }
  if (family == "upper-density") {
    if (kind == 0) return residue_member(rng, 10, h);
    if (kind == 1) return blocks(rng, 100, 400, 200, 1500, h);
    return bernoulli(rng, 0.1 + 0.4 * std::uniform_real_distribution<double>()(rng), h);
  }
  if (kind == 0) return residue_member(rng, 3, h);
  if (kind == 1) return blocks(rng, 600, 1000, 1500, 3000, h);
  return bernoulli(rng, 0.35 + 0.35 * std::uniform_real_distribution<double>()(rng), h);
}

CuspInstance random_instance(Rng& rng, std::uint64_t max_pieces, std::uint64_t max_shift, std::uint64_t h) {
  CuspInstance inst;
  if (uniform(rng, 0, 9) == 0) {
    inst.partition.push_back(ResiduePredicate{1, {0}});
    inst.shifts.push_back(0);
    return inst;
  }
  const std::uint64_t q = uniform(rng, 1, max_pieces);
  const std::uint64_t style = uniform(rng, 0, 2);
  if (style == 0) {
    for (std::uint64_t r = 0; r < q; ++r) inst.partition.push_back(ResiduePredicate{q, {r}});
  } else if (style == 1) {
    std::vector<std::uint64_t> cuts;
    for (std::uint64_t i = 1; i < q; ++i) cuts.push_back(uniform(rng, 1, h));
    std::sort(cuts.begin(), cuts.end());
    cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());
    std::uint64_t lo = 0;
    for (auto c : cuts) {
      inst.partition.push_back(IntervalPredicate{{{lo, c - 1}}});
      lo = c;
    }
    inst.partition.push_back(IntervalPredicate{{{lo, UINT64_MAX}}});
  } else {
    // Residues mod m dealt into q pieces.
    const std::uint64_t m = uniform(rng, q, 3 * q);
    std::vector<ResiduePredicate> pieces(q, ResiduePredicate{m, {}});
    for (std::uint64_t r = 0; r < m; ++r) pieces[r < q ? r : uniform(rng, 0, q - 1)].residues.push_back(r);
    for (auto& piece : pieces) {
      std::sort(piece.residues.begin(), piece.residues.end());
      inst.partition.emplace_back(piece);
    }
  }
  for (std::size_t i = 0; i < inst.partition.size(); ++i) inst.shifts.push_back(uniform(rng, 0, max_shift));
  return inst;
}

}  // namespace

CheckOutcome cusp_family_check(const std::string& family, const CuspFamilyOptions& o) {
  auto out = start("cusp_family",
                   "family=" + family + "; trials=" + std::to_string(o.trials) + "; N=" + std::to_string(o.horizon) +
                       "; max_pieces=" + std::to_string(o.max_pieces) + "; max_shift=" + std::to_string(o.max_shift) +
                       "; delta=" + format_double(o.delta, 17) + "; " + o.thresholds.to_string(),
                   o.seed);
  if (family != "infinite" && family != "syndetic" && family != "lower-density" && family != "upper-density" &&
      family != "banach-density") {
    skip(out, "family '" + family + "' is not one of the CuSP families");
    return out;
  }
  const auto eval = FamilyEvaluator::by_name(family);
  const std::uint64_t h = o.horizon;
  Rng rng(o.seed);
  std::uint64_t accepted = 0;
  std::uint64_t rejected = 0;
  std::uint64_t violations = 0;
  std::uint64_t identity_trials = 0;
  double min_banach_margin = INFINITY;
  std::int64_t worst_gap_slack = std::numeric_limits<std::int64_t>::max();
  std::string first_violation;
  for (std::uint64_t t = 0; t < o.trials; ++t) {
    IndexWindow member;
    bool ok = false;
    for (int attempt = 0; attempt < 50 && !ok; ++attempt) {
      member = sample_member(family, rng, h);
      // Shifts push the last max_shift positions out of [0, N], so the
      // evidence must already be carried by the interior.
      const IndexWindow interior(member.truncated(h - std::min(h, o.max_shift)).elements(), h);
      ok = eval.predicate(interior, o.thresholds);
      if (ok && family == "banach-density") {
        ok = density_report(interior, o.thresholds.burn_in_for(h)).banach_upper_est >= o.delta;
      }
      if (!ok) ++rejected;
    }
    if (!ok) continue;
    ++accepted;
    const auto inst = random_instance(rng, o.max_pieces, o.max_shift, h);
    const auto image = cusp_transform(member, inst).truncated(h);
    bool good = eval.predicate(image, o.thresholds);
    const bool identity = inst.partition.size() == 1 && inst.shifts[0] == 0;
    if (identity) {
      ++identity_trials;
      good = good && image == member;
    }
    if (family == "syndetic") {
      const auto before = syndetic_certificate(member);
      const auto after = syndetic_certificate(image);
      const auto slack = static_cast<std::int64_t>(before.max_gap + inst.max_shift()) -
                         static_cast<std::int64_t>(after.max_gap);
      worst_gap_slack = std::min(worst_gap_slack, slack);
      good = good && slack >= 0;
    }
    if (family == "banach-density") {
      const double q = static_cast<double>(inst.partition.size());
      const double est = density_report(image, o.thresholds.burn_in_for(h)).banach_upper_est;
      const double margin = est - (o.delta / (2 * q) - o.slack);
      min_banach_margin = std::min(min_banach_margin, margin);
      good = good && margin >= 0;
    }
    if (!good) {
      ++violations;
      if (first_violation.empty()) first_violation = "trial " + std::to_string(t) + ": " + inst.to_string();
    }
  }
  out.metric("accepted", std::to_string(accepted));
  out.metric("rejected_samples", std::to_string(rejected));
  out.metric("identity_trials", std::to_string(identity_trials));
  out.metric("violations", std::to_string(violations));
  if (family == "syndetic" && accepted > 0) out.metric("min_gap_slack", std::to_string(worst_gap_slack));
  if (family == "banach-density" && accepted > 0) out.metric("min_banach_margin", min_banach_margin);
  if (accepted == 0) {
    finish(out, false, "no sampled member passed the family's evidence predicate");
  } else {
    finish(out, violations == 0, "evidence lost after transform, first at " + first_violation);
  }
  return out;
}

CheckOutcome urec_avoids_periodic_check(const Operator& op, const StateVector& x, const StateVector& y,
                                        const SweepSettings& s) {
  auto out = start("urec_avoids_periodic",
                   "op=" + op.literal() + "; x=" + x.to_string() + "; y=" + y.to_string() + "; " + settings_text(s),
                   s.thresholds.seed);
  if (!y.is_exact()) {
    skip(out, "periodicity of y needs exact arithmetic");
    return out;
  }
  std::vector<StateVector> orbit;
  std::optional<std::uint64_t> period;
  {
    StateVector cur = y;
    for (std::uint64_t n = 0; n < s.horizon && !period; ++n) {
      orbit.push_back(cur);
      cur = op.apply(cur);
      if (cur == y) period = n + 1;
    }
  }
  if (!period) {
    skip(out, "y is not periodic within N");
    return out;
  }
  for (const auto& z : orbit) {
    if (z == x) {
      skip(out, "x lies on the orbit of y");
      return out;
    }
  }
  const auto verdict = classify_orbit(op, x, s);
  if (!at_least(verdict.label, Label::Uniform)) {
    skip(out, "x is labelled " + verdict.label_text() + ", not uniformly recurrent");
    return out;
  }
  std::optional<NormValue> floor;
  std::vector<NormValue> per_state;
  walk_orbit(op, x, s.horizon, [&](std::uint64_t, const StateVector& state, std::optional<std::uint64_t> same) {
    NormValue best;
    if (same) {
      best = per_state[*same];
    } else {
      bool first = true;
      for (const auto& z : orbit) {
        const NormValue d = seminorm_max(op.space(), s.seminorms, state - z);
        if (first || d.less_equal(best)) best = d;
        first = false;
      }
    }
    per_state.push_back(best);
    if (!floor || best.less_equal(*floor)) floor = best;
  });
  const bool positive = floor && floor->approx > 0 && !(floor->exact_pow && *floor->exact_pow == 0);
  out.metric("period_of_y", std::to_string(*period));
  out.metric("label_x", verdict.label_text());
  out.metric("floor", floor ? floor->approx : 0.0);
  finish(out, positive, "the orbit of x touches the periodic orbit of y");
  return out;
}

CheckOutcome translation_check(const IndexWindow& w, std::uint64_t m, std::optional<std::uint64_t> burn_in) {
  const std::string set = w.size() <= 20 ? w.serialize() : "horizon=" + std::to_string(w.horizon()) + " size=" +
                                                               std::to_string(w.size()) + " fnv=" + fnv1a_hex(w.serialize());
  auto out = start("translation", "W=" + set + "; m=" + std::to_string(m), 0);
  if (w.horizon() == 0) {
    skip(out, "degenerate window");
    return out;
  }
  const std::uint64_t b = burn_in.value_or(w.horizon() / 10);
  const auto schedule = default_window_schedule(w.horizon());
  const auto before = density_report(w, b, schedule);
  const auto after = density_report(w.translated(m), b + m, schedule);
  const double slack = static_cast<double>(m) / static_cast<double>(b + m + 1) + 1e-15;
  const bool banach = before.banach_raw.count == after.banach_raw.count &&
                      before.banach_raw.length == after.banach_raw.length;
  const double du = std::abs(before.upper_est - after.upper_est);
  const double dl = std::abs(before.lower_est - after.lower_est);
  out.metric("banach_before", before.banach_raw.value());
  out.metric("banach_after", after.banach_raw.value());
  out.metric("upper_shift", du);
  out.metric("lower_shift", dl);
  out.metric("slack", slack);
  if (!banach) {
    finish(out, false, "sliding-window maximum changed under translation");
  } else {
    finish(out, du <= slack && dl <= slack, "density moved by more than m / (burn_in + m + 1)");
  }
  return out;
}

}  // namespace recur
