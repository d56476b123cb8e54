#include <algorithm>
#include <cmath>

#include "recurlab/error.hpp"
#include "recurlab/families.hpp"

namespace recur {

__extension__ typedef unsigned __int128 Wide;

bool ratio_less(const CountRatio& a, const CountRatio& b) {
  return static_cast<Wide>(a.count) * b.length < static_cast<Wide>(b.count) * a.length;
}

namespace {

std::uint64_t isqrt(std::uint64_t v) {
  auto r = static_cast<std::uint64_t>(std::sqrt(static_cast<double>(v)));
  while (r * r > v) --r;
  while ((r + 1) * (r + 1) <= v) ++r;
  return r;
}

std::uint64_t iroot(std::uint64_t v, double exponent) {
  auto r = static_cast<std::uint64_t>(std::floor(std::pow(static_cast<double>(v), exponent) + 1e-9));
  return std::min(r, v);
}

}  // namespace

SyndeticCertificate syndetic_certificate(const IndexWindow& a, std::optional<std::uint64_t> cap) {
  SyndeticCertificate s;
  s.cap = cap.value_or(isqrt(a.horizon()));
  if (a.empty()) {
    s.empty = true;
    s.trailing_gap = a.horizon();
    return s;
  }
  const auto& e = a.elements();
  s.leading_gap = e.front();
  s.max_gap = s.leading_gap;
  for (std::size_t i = 1; i < e.size(); ++i) s.max_gap = std::max(s.max_gap, e[i] - e[i - 1]);
  s.trailing_gap = a.horizon() - e.back();
  // The true next gap is at least trailing_gap + 1.
  s.certified = s.max_gap <= s.cap && s.trailing_gap < s.cap;
  return s;
}

std::vector<std::uint64_t> default_window_schedule(std::uint64_t horizon) {
  std::vector<std::uint64_t> s{isqrt(horizon), iroot(horizon, 2.0 / 3.0), iroot(horizon, 0.75)};
  std::sort(s.begin(), s.end());
  s.erase(std::unique(s.begin(), s.end()), s.end());
  return s;
}

CountRatio sliding_window_max(const IndexWindow& a, std::uint64_t length) {
  const std::uint64_t h = a.horizon();
  if (length > h) throw ConfigError("window length exceeds horizon");
  CountRatio best{0, length + 1};
  const auto& e = a.elements();
  // An optimal window can always be slid right until its left edge is an
  // element, or until it hits the right boundary m = H - L.
  std::size_t hi = 0;
  auto consider = [&](std::uint64_t m, std::size_t lo) {
    if (hi < lo) hi = lo;
    while (hi < e.size() && e[hi] <= m + length) ++hi;
    best.count = std::max<std::uint64_t>(best.count, hi - lo);
  };
  std::size_t lo = 0;
  for (; lo < e.size() && e[lo] <= h - length; ++lo) consider(e[lo], lo);
  consider(h - length, lo);
  return best;
}

DensityReport density_report(const IndexWindow& a, std::uint64_t burn_in,
                             const std::vector<std::uint64_t>& window_schedule) {
  const std::uint64_t h = a.horizon();
  if (h == 0) throw DegenerateWindow("density of a window with horizon 0");
  if (window_schedule.empty()) throw ConfigError("empty window schedule");
  if (burn_in >= h) throw ConfigError("burn-in must be below the horizon");
  for (auto l : window_schedule) {
    if (l > h) throw ConfigError("window length " + std::to_string(l) + " exceeds horizon " + std::to_string(h));
  }

  DensityReport r;
  r.burn_in = burn_in;
  r.schedule = window_schedule;
  std::sort(r.schedule.begin(), r.schedule.end());
  r.schedule.erase(std::unique(r.schedule.begin(), r.schedule.end()), r.schedule.end());

  // The running density c(N)/(N+1) only rises at elements and only falls
  // between them, so extremes occur at elements, just before them, or at
  // the ends of [burn_in, H].
  auto at = [&](std::uint64_t n) { return CountRatio{a.count_upto(n), n + 1}; };
  r.lower = at(burn_in);
  r.upper = r.lower;
  r.lower_at = r.upper_at = burn_in;
  auto visit = [&](std::uint64_t n) {
    if (n < burn_in || n > h) return;
    const CountRatio c = at(n);
    if (ratio_less(c, r.lower)) {
      r.lower = c;
      r.lower_at = n;
    }
    if (ratio_less(r.upper, c)) {
      r.upper = c;
      r.upper_at = n;
    }
  };
  visit(h);
  for (auto e : a.elements()) {
    visit(e);
    if (e > 0) visit(e - 1);
  }
  r.lower_est = r.lower.value();
  r.upper_est = r.upper.value();

  for (auto l : r.schedule) {
    const CountRatio m = sliding_window_max(a, l);
    r.banach_curve.emplace_back(l, m.value());
    r.banach_raw = m;
  }
  // Upper Banach density dominates upper density; partial windows can put
  // the raw sliding maximum below a running density.
  r.banach_upper_est = ratio_less(r.banach_raw, r.upper) ? r.upper_est : r.banach_raw.value();

  for (std::uint64_t n = burn_in; n <= h;) {
    r.running_density_curve.emplace_back(n, at(n).value());
    if (n == h) break;
    n = std::min(h, std::max(n + 1, n + n / 100));
  }

  r.syndetic = syndetic_certificate(a);
  if (r.syndetic.certified) r.max_gap = r.syndetic.max_gap;
  return r;
}

DensityReport density_report(const IndexWindow& a, std::uint64_t burn_in) {
  if (a.horizon() == 0) throw DegenerateWindow("density of a window with horizon 0");
  return density_report(a, burn_in, default_window_schedule(a.horizon()));
}

}  // namespace recur
