#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

#include "recurlab/error.hpp"
#include "recurlab/families.hpp"

namespace recur {

IndexWindow ip_generate(const std::vector<std::uint64_t>& generators, std::uint64_t depth,
                        std::uint64_t horizon) {
  if (generators.empty()) throw ConfigError("IP generators must be nonempty");
  if (depth == 0) throw ConfigError("IP depth must be at least 1");
  for (std::size_t i = 0; i < generators.size(); ++i) {
    if (generators[i] == 0 || (i > 0 && generators[i] <= generators[i - 1])) {
      throw ConfigError("IP generators must be positive and strictly increasing");
    }
  }
  if (horizon > (std::uint64_t{1} << 32)) throw ConfigError("IP horizon too large");
  // fewest[s] = least number of distinct generators summing to s (0/1 knapsack)
  constexpr std::uint32_t kNone = std::numeric_limits<std::uint32_t>::max();
  std::vector<std::uint32_t> fewest(horizon + 1, kNone);
  fewest[0] = 0;
  for (auto g : generators) {
    if (g > horizon) break;
    for (std::uint64_t s = horizon; s >= g; --s) {
      if (fewest[s - g] != kNone) fewest[s] = std::min(fewest[s], fewest[s - g] + 1);
      if (s == g) break;
    }
  }
  std::vector<std::uint64_t> out;
  for (std::uint64_t s = 1; s <= horizon; ++s) {
    if (fewest[s] <= depth) out.push_back(s);
  }
  return IndexWindow(std::move(out), horizon);
}

namespace {

std::uint64_t isqrt(std::uint64_t v) {
  auto r = static_cast<std::uint64_t>(std::sqrt(static_cast<double>(v)));
  while (r * r > v) --r;
  while ((r + 1) * (r + 1) <= v) ++r;
  return r;
}

bool multiples_inside(const IndexWindow& a, std::uint64_t k) {
  const std::uint64_t h = a.horizon();
  if (a.size() < h / k + 1) return false;
  for (std::uint64_t n = 0; n <= h; n += k) {
    if (!a.contains(n)) return false;
  }
  return true;
}

}  // namespace

IpProbeResult ip_star_probe(const IndexWindow& a, const IpProbeOptions& options) {
  if (options.budget == 0) throw ConfigError("IP* probe budget must be at least 1");
  IpProbeResult r;
  const std::uint64_t h = a.horizon();
  const std::uint64_t root = std::max<std::uint64_t>(1, isqrt(h));
  for (std::uint64_t k = 1; k <= root; ++k) {
    if (multiples_inside(a, k)) {
      r.kind = IpProbeResult::Kind::ArithmeticCertificate;
      r.modulus = k;
      return r;
    }
  }

  // Greedy search for generators whose finite sums all avoid A. The whole
  // FS set must fit in [0, H] so that avoidance is actually observed.
  const std::uint64_t need =
      options.min_generators > 0
          ? options.min_generators
          : std::max<std::uint64_t>(1, static_cast<std::uint64_t>(std::ceil(std::sqrt(static_cast<double>(h)) / 2.0)));
  std::vector<char> in_a(h + 1, 0);
  for (auto e : a.elements()) in_a[e] = 1;
  std::mt19937_64 rng(options.seed);
  std::bernoulli_distribution skip(0.25);
  std::vector<char> is_sum(h + 1, 0);
  std::vector<std::uint64_t> sums;
  for (std::uint64_t attempt = 0; attempt < options.budget; ++attempt) {
    r.budget_used = attempt + 1;
    std::fill(is_sum.begin(), is_sum.end(), 0);
    sums.clear();
    std::vector<std::uint64_t> gens;
    std::uint64_t total = 0;
    for (std::uint64_t g = 1; g + total <= h && gens.size() < need; ++g) {
      if (in_a[g] != 0) continue;
      if (attempt > 0 && skip(rng)) continue;
      bool clean = true;
      for (auto s : sums) {
        if (in_a[s + g] != 0) {
          clean = false;
          break;
        }
      }
      if (!clean) continue;
      const std::size_t old = sums.size();
      for (std::size_t i = 0; i < old; ++i) {
        const std::uint64_t s = sums[i] + g;
        if (is_sum[s] == 0) {
          is_sum[s] = 1;
          sums.push_back(s);
        }
      }
      if (is_sum[g] == 0) {
        is_sum[g] = 1;
        sums.push_back(g);
      }
      gens.push_back(g);
      total += g;
    }
    if (gens.size() >= need) {
      r.kind = IpProbeResult::Kind::FalsifiedByIpWitness;
      r.generators = std::move(gens);
      return r;
    }
  }
  return r;
}

std::string to_string(const IpProbeResult& r) {
  switch (r.kind) {
    case IpProbeResult::Kind::ArithmeticCertificate:
      return "ArithmeticCertificate(" + std::to_string(r.modulus) + ")";
    case IpProbeResult::Kind::FalsifiedByIpWitness: {
      std::string s = "FalsifiedByIpWitness(";
      for (std::size_t i = 0; i < r.generators.size(); ++i) {
        if (i > 0) s += ',';
        s += std::to_string(r.generators[i]);
      }
      return s + ")";
    }
    case IpProbeResult::Kind::Inconclusive:
      break;
  }
  return "Inconclusive";
}

}  // namespace recur
