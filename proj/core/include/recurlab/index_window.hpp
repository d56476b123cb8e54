#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace recur {

/// A finite observation of a subset of N0: its elements in [0, horizon].
class IndexWindow {
 public:
  IndexWindow() = default;
  /// Elements must be strictly increasing and <= horizon.
  IndexWindow(std::vector<std::uint64_t> elements, std::uint64_t horizon);

  /// Sorts, removes duplicates and drops everything above `horizon`.
  static IndexWindow from_unsorted(std::vector<std::uint64_t> elements, std::uint64_t horizon);
  static IndexWindow full(std::uint64_t horizon);
  /// {n <= horizon : n = r mod k}
  static IndexWindow residue(std::uint64_t k, std::uint64_t r, std::uint64_t horizon);

  const std::vector<std::uint64_t>& elements() const noexcept { return elements_; }
  std::uint64_t horizon() const noexcept { return horizon_; }
  std::size_t size() const noexcept { return elements_.size(); }
  bool empty() const noexcept { return elements_.empty(); }
  std::uint64_t front() const { return elements_.front(); }
  std::uint64_t back() const { return elements_.back(); }

  bool contains(std::uint64_t n) const;
  /// card(A ∩ [0, n])
  std::uint64_t count_upto(std::uint64_t n) const;
  /// card(A ∩ [lo, hi])
  std::uint64_t count_in(std::uint64_t lo, std::uint64_t hi) const;

  /// Same set observed on the shorter horizon h <= horizon().
  IndexWindow truncated(std::uint64_t h) const;
  /// Every element of this window is in `other` (horizons may differ).
  bool subset_of(const IndexWindow& other) const;
  /// {n + m : n in A}, horizon + m.
  IndexWindow translated(std::uint64_t m) const;

  /// `horizon=<H>` followed by one element per line.
  std::string serialize() const;
  static IndexWindow deserialize(std::string_view text);

  friend bool operator==(const IndexWindow&, const IndexWindow&) = default;

 private:
  std::vector<std::uint64_t> elements_;
  std::uint64_t horizon_ = 0;
};

/// Pointwise-multiplied window {p n}, horizon p H.
IndexWindow dilate(const IndexWindow& a, std::uint64_t p);
/// {n : p n in A}, horizon floor(H / p).
IndexWindow contract(const IndexWindow& a, std::uint64_t p);

/// Builds a window from a set expression:
///   residue(k, r)            n = r mod k
///   fs(g1, ..., gm; depth)   finite sums of at most `depth` distinct generators
///   intervals([a,b], [c,d])  union of closed intervals, `inf` allowed as end
///   explicit(n1, n2, ...)    listed elements
///   powers(b)                {b^j : j >= 0}
///   squares                  {j^2 : j >= 0}
IndexWindow window_from_expression(std::string_view text, std::uint64_t horizon);

}  // namespace recur
