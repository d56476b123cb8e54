#include "recurlab/orbit.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "recurlab/error.hpp"

namespace recur {

namespace {

constexpr std::size_t kStoredStates = std::size_t{1} << 16;
constexpr std::size_t kMaxCenters = 2048;

std::string join(const std::vector<std::uint64_t>& v) {
  std::string s;
  for (std::size_t i = 0; i < v.size(); ++i) s += (i > 0 ? "," : "") + std::to_string(v[i]);
  return s;
}

}  // namespace

OrbitInfo walk_orbit(const Operator& op, const StateVector& x, std::uint64_t horizon, const OrbitVisitor& visit) {
  OrbitInfo info;
  const bool exact = x.is_exact();
  std::vector<StateVector> stored;
  StateVector cur = x;
  for (std::uint64_t n = 0; n <= horizon; ++n) {
    if (info.exact_period && *info.exact_period <= stored.size()) {
      const std::uint64_t m = n % *info.exact_period;
      visit(n, stored[m], m);
      continue;
    }
    if (info.fixed_from) {
      visit(n, cur, *info.fixed_from);
      continue;
    }
    visit(n, cur, std::nullopt);
    if (n == horizon) break;
    StateVector next = op.apply(cur);
    ++info.applications;
    if (stored.size() < kStoredStates) stored.push_back(cur);
    if (exact && next.is_exact() && !info.exact_period) {
      if (next == x) {
        info.exact_period = n + 1;
      } else if (next == cur) {
        info.fixed_from = n;
      }
    }
    cur = std::move(next);
  }
  return info;
}

OrbitDistances orbit_distances(const Operator& op, const StateVector& x, const std::vector<std::uint64_t>& seminorms,
                               std::uint64_t horizon) {
  if (horizon == 0) throw ConfigError("orbit horizon must be at least 1");
  OrbitDistances d;
  d.values.reserve(horizon + 1);
  d.info = walk_orbit(op, x, horizon, [&](std::uint64_t, const StateVector& s, std::optional<std::uint64_t> same) {
    if (same) {
      d.values.push_back(d.values[*same]);
    } else {
      d.values.push_back(seminorm_max(op.space(), seminorms, s - x));
    }
  });
  return d;
}

std::string ReturnSetRecord::serialize() const {
  std::string s = "operator=" + operator_literal + "\n";
  s += "vector=" + vector_literal + "\n";
  s += "epsilon=" + epsilon.get_str() + "\n";
  s += "seminorms=" + join(seminorms) + "\n";
  s += "arithmetic=" + std::string(exact_arithmetic ? "exact" : "float") + "\n";
  if (exact_period) s += "exact_period=" + std::to_string(*exact_period) + "\n";
  return s + window.serialize();
}

std::vector<ReturnSetRecord> return_sets(const OrbitDistances& d, const Operator& op, const StateVector& x,
                                         const std::vector<Rational>& epsilons,
                                         const std::vector<std::uint64_t>& seminorms) {
  std::vector<ReturnSetRecord> out;
  const std::uint64_t horizon = d.values.size() - 1;
  for (const auto& eps : epsilons) {
    if (eps <= 0) throw ConfigError("epsilon must be positive");
    ReturnSetRecord r;
    r.operator_literal = op.literal();
    r.vector_literal = x.to_string();
    r.epsilon = eps;
    r.seminorms = seminorms;
    r.horizon = horizon;
    r.exact_period = d.info.exact_period;
    r.exact_arithmetic = x.is_exact();
    std::vector<std::uint64_t> e;
    for (std::uint64_t n = 0; n <= horizon; ++n) {
      if (n == 0 || d.values[n].less_than(eps)) e.push_back(n);
    }
    r.window = IndexWindow(std::move(e), horizon);
    out.push_back(std::move(r));
  }
  return out;
}

std::vector<ReturnSetRecord> return_sets(const Operator& op, const StateVector& x, const std::vector<Rational>& epsilons,
                                         const std::vector<std::uint64_t>& seminorms, std::uint64_t horizon) {
  const OrbitDistances d = orbit_distances(op, x, seminorms, horizon);
  return return_sets(d, op, x, epsilons, seminorms);
}

ReturnSetRecord return_set(const Operator& op, const StateVector& x, const Rational& epsilon,
                           const std::vector<std::uint64_t>& seminorms, std::uint64_t horizon) {
  return return_sets(op, x, {epsilon}, seminorms, horizon).front();
}

GrowthCurve orbit_growth(const Operator& op, const StateVector& x, std::uint64_t seminorm_index, std::uint64_t horizon) {
  if (horizon == 0) throw ConfigError("orbit horizon must be at least 1");
  std::set<std::uint64_t> schedule;
  for (std::uint64_t n = 0; n <= std::min<std::uint64_t>(horizon, 16); ++n) schedule.insert(n);
  for (double v = 16; v <= static_cast<double>(horizon); v *= 1.1) schedule.insert(static_cast<std::uint64_t>(v));
  for (int k = 1; k < 64 && (std::uint64_t{1} << (k - 1)) - 1 <= horizon; ++k) {
    const std::uint64_t half = std::uint64_t{1} << (k - 1);
    schedule.insert(half - 1);
    if (half + 1 <= horizon) schedule.insert(half + 1);
  }
  schedule.insert(horizon);

  GrowthCurve g;
  auto record = [&](std::uint64_t n, const StateVector& s) {
    g.samples.emplace_back(n, seminorm(op.space(), seminorm_index, s).approx);
  };
  const bool closed_form = op.kind() == Operator::Kind::RowRotation || op.kind() == Operator::Kind::Diagonal;
  if (closed_form) {
    for (auto n : schedule) record(n, op.apply_power(x, n));
  } else {
    walk_orbit(op, x, horizon, [&](std::uint64_t n, const StateVector& s, std::optional<std::uint64_t>) {
      if (schedule.count(n) != 0) record(n, s);
    });
  }

  double best = -1;
  std::vector<std::pair<std::uint64_t, double>> records;
  for (const auto& [n, v] : g.samples) {
    g.bound = std::max(g.bound, v);
    if (best < 0 || v > best * (1 + 1e-9) + 1e-300) {
      if (best >= 0) records.emplace_back(n, v);
      best = v;
    }
  }
  if (records.size() >= 3 && records.back().first >= horizon / 4) {
    g.verdict = GrowthCurve::Verdict::GrowthWitness;
    g.witness = std::move(records);
  }
  return g;
}

PowerBoundedResult power_bounded_probe(const Operator& op, const std::vector<StateVector>& sample, std::uint64_t horizon,
                                       std::uint64_t seminorm_index, double cap) {
  if (sample.empty()) throw ConfigError("power-bounded probe needs a nonempty sample");
  PowerBoundedResult r;
  for (std::size_t i = 0; i < sample.size() && r.equibounded; ++i) {
    const double base = seminorm(op.space(), seminorm_index, sample[i]).approx;
    if (base == 0) continue;
    std::vector<double> ratios;
    walk_orbit(op, sample[i], horizon, [&](std::uint64_t n, const StateVector& s, std::optional<std::uint64_t> same) {
      const double ratio = same ? ratios[*same] : seminorm(op.space(), seminorm_index, s).approx / base;
      ratios.push_back(ratio);
      r.bound = std::max(r.bound, ratio);
      if (r.equibounded && ratio > cap) {
        r.equibounded = false;
        r.witness_n = n;
        r.witness_vector = i;
        r.witness_ratio = ratio;
      }
    });
  }
  return r;
}

CoveringReport totally_bounded_probe(const Operator& op, const StateVector& x, std::uint64_t horizon,
                                     const std::vector<Rational>& epsilons, std::uint64_t seminorm_index) {
  CoveringReport r;
  r.epsilons = epsilons;
  std::vector<std::vector<StateVector>> centers(epsilons.size());
  r.at_half.assign(epsilons.size(), 0);
  std::vector<std::uint64_t> overflow(epsilons.size(), 0);
  walk_orbit(op, x, horizon, [&](std::uint64_t n, const StateVector& s, std::optional<std::uint64_t> same) {
    if (!same) {
      for (std::size_t e = 0; e < epsilons.size(); ++e) {
        bool covered = false;
        for (const auto& c : centers[e]) {
          if (seminorm(op.space(), seminorm_index, s - c).less_than(epsilons[e])) {
            covered = true;
            break;
          }
        }
        // Past the cap, uncovered points are counted but not kept as centers.
        if (covered) continue;
        if (centers[e].size() < kMaxCenters) {
          centers[e].push_back(s);
        } else {
          ++overflow[e];
        }
      }
    }
    if (n == horizon / 2) {
      for (std::size_t e = 0; e < epsilons.size(); ++e) r.at_half[e] = centers[e].size() + overflow[e];
    }
  });
  for (std::size_t e = 0; e < epsilons.size(); ++e) r.at_full.push_back(centers[e].size() + overflow[e]);
  return r;
}

}  // namespace recur
