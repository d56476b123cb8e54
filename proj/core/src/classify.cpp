#include "recurlab/classify.hpp"

#include <algorithm>
#include <cmath>

#include "recurlab/error.hpp"

namespace recur {

std::string to_string(Label l) {
  switch (l) {
    case Label::None:
      return "None";
    case Label::Recurrent:
      return "Recurrent";
    case Label::Reiterative:
      return "ReiterativelyRecurrent";
    case Label::UpperFrequent:
      return "UpperFrequentlyRecurrent";
    case Label::Frequent:
      return "FrequentlyRecurrent";
    case Label::Uniform:
      return "UniformlyRecurrent";
    case Label::IpStar:
      return "IpStarCertified";
    case Label::Periodic:
      return "Periodic";
  }
  return "?";
}

void Thresholds::validate() const {
  for (double d : {delta_low, delta_up, delta_bd}) {
    if (!(d >= 0 && d < 1)) throw ConfigError("density thresholds must lie in [0, 1)");
  }
  if (delta_low < delta_up || delta_up < delta_bd) {
    throw ConfigError("thresholds must satisfy delta_low >= delta_up >= delta_bd");
  }
  if (ip_budget == 0) throw ConfigError("ip budget must be at least 1");
}

std::string Thresholds::to_string() const {
  std::string s = "delta_low=" + format_double(delta_low, 10) + " delta_up=" + format_double(delta_up, 10) +
                  " delta_bd=" + format_double(delta_bd, 10) + " m_min=" + std::to_string(m_min);
  s += " burn_in=" + (burn_in ? std::to_string(*burn_in) : std::string("N/10"));
  s += " margin=" + (margin ? std::to_string(*margin) : std::string("N/10"));
  s += " ip_budget=" + std::to_string(ip_budget) + " seed=" + std::to_string(seed);
  return s;
}

namespace {

bool infinite_looking(const IndexWindow& w, const Thresholds& t) {
  const std::uint64_t h = w.horizon();
  const std::uint64_t margin = t.margin_for(h);
  return w.size() > t.m_min && w.back() + margin >= h;
}

std::optional<std::uint64_t> progression_step(const IndexWindow& w) {
  if (w.size() < 2 || w.front() != 0) return std::nullopt;
  const std::uint64_t d = w.elements()[1];
  if (w.size() != w.horizon() / d + 1) return std::nullopt;
  for (std::size_t i = 0; i < w.size(); ++i) {
    if (w.elements()[i] != i * d) return std::nullopt;
  }
  return d;
}

IpProbeOptions probe_options(const Thresholds& t) {
  IpProbeOptions o;
  o.budget = t.ip_budget;
  o.seed = t.seed;
  return o;
}

}  // namespace

WindowEvidence window_evidence(const IndexWindow& w, const Thresholds& t) {
  if (w.horizon() == 0) throw DegenerateWindow("classification needs a positive horizon");
  WindowEvidence e;
  e.density = density_report(w, t.burn_in_for(w.horizon()));
  e.ip = ip_star_probe(w, probe_options(t));
  e.infinite = infinite_looking(w, t);
  const bool syndetic = e.density.syndetic.certified;
  // A syndetic certificate is itself evidence of positive density.
  e.reiterative = e.infinite && (e.density.banach_upper_est > t.delta_bd || syndetic);
  e.upper_frequent = e.infinite && (e.density.upper_est > t.delta_up || syndetic);
  e.frequent = e.infinite && (e.density.lower_est > t.delta_low || syndetic);
  e.uniform = syndetic;
  e.ip_star = e.ip.kind == IpProbeResult::Kind::ArithmeticCertificate;
  e.progression = progression_step(w);
  return e;
}

std::string RecurrenceVerdict::label_text() const {
  if (label == Label::Periodic && period) return "Periodic(" + std::to_string(*period) + ")";
  return to_string(label);
}

RecurrenceVerdict classify(const std::vector<ReturnSetRecord>& records, const Thresholds& thresholds) {
  if (records.empty()) throw ConfigError("classification needs at least one epsilon");
  thresholds.validate();
  const auto& first = records.front();
  for (const auto& r : records) {
    if (r.horizon != first.horizon || r.operator_literal != first.operator_literal ||
        r.vector_literal != first.vector_literal || r.seminorms != first.seminorms) {
      throw ConfigError("records to classify must share operator, vector, seminorms and horizon");
    }
    if (r.epsilon <= 0) throw ConfigError("epsilon must be positive");
  }
  std::vector<const ReturnSetRecord*> sorted;
  for (const auto& r : records) sorted.push_back(&r);
  std::sort(sorted.begin(), sorted.end(), [](const auto* a, const auto* b) { return a->epsilon > b->epsilon; });
  for (std::size_t i = 1; i < sorted.size(); ++i) {
    if (sorted[i]->epsilon == sorted[i - 1]->epsilon) throw ConfigError("epsilon grid has repeated values");
  }

  RecurrenceVerdict v;
  v.thresholds = thresholds;
  v.horizon = first.horizon;
  bool all_infinite = true;
  bool all_reiterative = true;
  bool all_upper = true;
  bool all_frequent = true;
  bool all_uniform = true;
  bool all_ip = true;
  std::optional<std::uint64_t> common_step;
  bool same_step = true;
  for (const auto* r : sorted) {
    EpsilonEvidence ev;
    ev.epsilon = r->epsilon;
    ev.evidence = window_evidence(r->window, thresholds);
    ev.returns = r->window.size();
    const auto& e = ev.evidence;
    all_infinite = all_infinite && e.infinite;
    all_reiterative = all_reiterative && e.reiterative;
    all_upper = all_upper && e.upper_frequent;
    all_frequent = all_frequent && e.frequent;
    all_uniform = all_uniform && e.uniform;
    all_ip = all_ip && e.ip_star;
    if (!e.progression || (common_step && *common_step != *e.progression)) same_step = false;
    if (e.progression) common_step = e.progression;
    if (e.ip.kind == IpProbeResult::Kind::FalsifiedByIpWitness) {
      v.notes.push_back("IP set avoiding the window found at epsilon=" + r->epsilon.get_str());
    }
    v.evidence.push_back(std::move(ev));
  }

  Label label = Label::None;
  if (all_infinite) label = Label::Recurrent;
  if (label == Label::Recurrent && all_reiterative) label = Label::Reiterative;
  if (label == Label::Reiterative && all_upper) label = Label::UpperFrequent;
  if (label == Label::UpperFrequent && all_frequent) label = Label::Frequent;
  if (label == Label::Frequent && all_uniform) label = Label::Uniform;
  if (label == Label::Uniform && all_ip) label = Label::IpStar;

  const auto root = static_cast<std::uint64_t>(std::sqrt(static_cast<double>(v.horizon)));
  if (first.exact_period) {
    if (*first.exact_period <= root && label == Label::IpStar) {
      label = Label::Periodic;
      v.period = first.exact_period;
    } else {
      v.notes.push_back("exact period " + std::to_string(*first.exact_period) + " not certified at this horizon");
    }
  } else if (same_step && common_step && !first.exact_arithmetic) {
    v.notes.push_back("periodic-like(" + std::to_string(*common_step) + ")");
  }
  v.label = label;
  return v;
}

std::string RecurrenceVerdict::to_record() const {
  std::string s = "label=" + label_text() + "\n";
  s += "horizon=" + std::to_string(horizon) + "\n";
  s += "thresholds=" + thresholds.to_string() + "\n";
  for (const auto& ev : evidence) {
    const auto& e = ev.evidence;
    const auto& d = e.density;
    s += "eps=" + ev.epsilon.get_str();
    s += " returns=" + std::to_string(ev.returns);
    s += " lower=" + format_double(d.lower_est, 10);
    s += " upper=" + format_double(d.upper_est, 10);
    s += " banach=" + format_double(d.banach_upper_est, 10);
    s += " max_gap=" + (d.max_gap ? std::to_string(*d.max_gap) : std::string("unbounded"));
    s += " observed_gap=" + std::to_string(d.syndetic.max_gap);
    s += " trailing_gap=" + std::to_string(d.syndetic.trailing_gap);
    s += " ip=" + recur::to_string(e.ip);
    s += " infinite=" + std::to_string(e.infinite);
    s += " reiterative=" + std::to_string(e.reiterative);
    s += " upper_frequent=" + std::to_string(e.upper_frequent);
    s += " frequent=" + std::to_string(e.frequent);
    s += " syndetic=" + std::to_string(e.uniform);
    s += " ip_star=" + std::to_string(e.ip_star);
    s += "\n";
  }
  for (const auto& n : notes) s += "note=" + n + "\n";
  return s;
}

FamilyEvaluator FamilyEvaluator::infinite() {
  return {"infinite", [](const IndexWindow& w, const Thresholds& t) { return infinite_looking(w, t); }};
}

FamilyEvaluator FamilyEvaluator::syndetic() {
  return {"syndetic", [](const IndexWindow& w, const Thresholds&) { return syndetic_certificate(w).certified; }};
}

FamilyEvaluator FamilyEvaluator::lower_density() {
  return {"lower-density", [](const IndexWindow& w, const Thresholds& t) { return window_evidence(w, t).frequent; }};
}

FamilyEvaluator FamilyEvaluator::upper_density() {
  return {"upper-density",
          [](const IndexWindow& w, const Thresholds& t) { return window_evidence(w, t).upper_frequent; }};
}

FamilyEvaluator FamilyEvaluator::banach_density() {
  return {"banach-density",
          [](const IndexWindow& w, const Thresholds& t) { return window_evidence(w, t).reiterative; }};
}

FamilyEvaluator FamilyEvaluator::ip_star() {
  return {"ip-star", [](const IndexWindow& w, const Thresholds& t) {
            return ip_star_probe(w, probe_options(t)).kind == IpProbeResult::Kind::ArithmeticCertificate;
          }};
}

FamilyEvaluator FamilyEvaluator::by_name(const std::string& name) {
  if (name == "infinite") return infinite();
  if (name == "syndetic") return syndetic();
  if (name == "lower-density") return lower_density();
  if (name == "upper-density") return upper_density();
  if (name == "banach-density") return banach_density();
  if (name == "ip-star") return ip_star();
  throw ConfigError("unknown family '" + name + "'");
}

FamilyCheck f_recurrence_check(const std::vector<ReturnSetRecord>& records, const FamilyEvaluator& family,
                               const Thresholds& thresholds) {
  if (records.empty()) throw ConfigError("family check needs at least one record");
  FamilyCheck c;
  c.holds = true;
  for (const auto& r : records) {
    const bool ok = family.predicate(r.window, thresholds);
    c.per_record.push_back(ok);
    c.holds = c.holds && ok;
  }
  return c;
}

RrecRefutation blockcycle_rrec_refutation(const StateVector& x, double delta, const Rational& epsilon) {
  RrecRefutation r;
  if (x.is_rows() || x.space().kind == SpaceDescriptor::Kind::FiniteDim ||
      x.space().kind == SpaceDescriptor::Kind::PolynomialEntire || x.space().over_integers) {
    r.reason = "vector is not in a block-cycle sequence space";
    return r;
  }
  if (epsilon > Rational(1, 2)) {
    r.reason = "the argument needs epsilon <= 1/2";
    return r;
  }
  if (x.is_zero()) {
    r.reason = "zero vector";
    return r;
  }
  const auto& c = x.coords();
  const Rational half(1, 2);
  for (const auto& [n, v] : c) {
    if (v.abs() >= 0.5 - 1e-12) {
      const auto a = v.abs2_exact();
      if (!a || *a >= half * half) r.n1 = static_cast<std::uint64_t>(n) + 1;
    }
  }
  const auto max_index = static_cast<std::uint64_t>(c.rbegin()->first);
  // Smallest qualifying j: j/2^j < delta/2, 2^j > N1, |x_{2^j}| > 1/j.
  for (std::uint64_t j = 1; j < 62 && (std::uint64_t{1} << j) <= max_index; ++j) {
    const std::uint64_t pj = std::uint64_t{1} << j;
    if (!(static_cast<double>(j) / static_cast<double>(pj) < delta / 2) || pj <= r.n1) continue;
    const auto it = c.find(static_cast<std::int64_t>(pj));
    if (it == c.end()) continue;
    const auto a2 = it->second.abs2_exact();
    const bool big = a2 ? *a2 * Rational(static_cast<long>(j * j)) > 1 : it->second.abs() * static_cast<double>(j) > 1;
    if (!big) continue;
    r.j = j;
    break;
  }
  if (r.j == 0) {
    r.reason = "no j with j/2^j < delta/2, 2^j > N1 and |x_{2^j}| > 1/j in the materialized range";
    return r;
  }
  const std::uint64_t pj = std::uint64_t{1} << r.j;
  if (pj > (std::uint64_t{1} << 16)) {
    r.reason = "qualifying block too long to verify by iteration";
    return r;
  }
  // [T^n x]_{2^j+k} = 2^k x_{2^j} for n = l 2^j + k, j <= k < 2^j; verify
  // over two full cycles by exact iteration.
  const BlockCycleOperator t(x.space());
  const Scalar base = c.at(static_cast<std::int64_t>(pj));
  StateVector y = x;
  for (std::uint64_t n = 0; n < 2 * pj; ++n) {
    const std::uint64_t k = n % pj;
    if (k >= r.j) {
      const auto it = y.coords().find(static_cast<std::int64_t>(pj + k));
      const Scalar expected = Scalar(pow2(static_cast<long>(k))) * base;
      if (it == y.coords().end() || !(it->second == expected) || expected.abs() <= 1) {
        r.reason = "coordinate identity failed at n=" + std::to_string(n);
        return r;
      }
      ++r.pairs_verified;
    }
    y = t.apply(y);
  }
  r.applicable = true;
  r.max_returns_per_window = r.j;
  r.density_bound = static_cast<double>(r.j) / static_cast<double>(pj);
  return r;
}

}  // namespace recur
