#include "recurlab/index_window.hpp"

#include <algorithm>
#include <charconv>
#include <limits>
#include <optional>

#include "recurlab/error.hpp"
#include "recurlab/families.hpp"
#include "recurlab/text.hpp"

namespace recur {

IndexWindow::IndexWindow(std::vector<std::uint64_t> elements, std::uint64_t horizon)
    : elements_(std::move(elements)), horizon_(horizon) {
  for (std::size_t i = 0; i < elements_.size(); ++i) {
    if (elements_[i] > horizon_) throw ConfigError("window element above horizon");
    if (i > 0 && elements_[i] <= elements_[i - 1]) throw ConfigError("window elements not strictly increasing");
  }
}

IndexWindow IndexWindow::from_unsorted(std::vector<std::uint64_t> elements, std::uint64_t horizon) {
  std::sort(elements.begin(), elements.end());
  elements.erase(std::unique(elements.begin(), elements.end()), elements.end());
  elements.erase(std::upper_bound(elements.begin(), elements.end(), horizon), elements.end());
  IndexWindow w;
  w.elements_ = std::move(elements);
  w.horizon_ = horizon;
  return w;
}

IndexWindow IndexWindow::full(std::uint64_t horizon) { return residue(1, 0, horizon); }

IndexWindow IndexWindow::residue(std::uint64_t k, std::uint64_t r, std::uint64_t horizon) {
  if (k == 0) throw ConfigError("residue modulus must be positive");
  IndexWindow w;
  w.horizon_ = horizon;
  for (std::uint64_t n = r % k; n <= horizon; n += k) {
    w.elements_.push_back(n);
    if (n > std::numeric_limits<std::uint64_t>::max() - k) break;
  }
  return w;
}

bool IndexWindow::contains(std::uint64_t n) const {
  return std::binary_search(elements_.begin(), elements_.end(), n);
}

std::uint64_t IndexWindow::count_upto(std::uint64_t n) const {
  return static_cast<std::uint64_t>(std::upper_bound(elements_.begin(), elements_.end(), n) - elements_.begin());
}

std::uint64_t IndexWindow::count_in(std::uint64_t lo, std::uint64_t hi) const {
  if (hi < lo) return 0;
  const auto first = std::lower_bound(elements_.begin(), elements_.end(), lo);
  const auto last = std::upper_bound(first, elements_.end(), hi);
  return static_cast<std::uint64_t>(last - first);
}

IndexWindow IndexWindow::truncated(std::uint64_t h) const {
  if (h > horizon_) throw ConfigError("cannot extend a window beyond its horizon");
  IndexWindow w;
  w.horizon_ = h;
  w.elements_.assign(elements_.begin(), std::upper_bound(elements_.begin(), elements_.end(), h));
  return w;
}

bool IndexWindow::subset_of(const IndexWindow& other) const {
  return std::includes(other.elements_.begin(), other.elements_.end(), elements_.begin(), elements_.end());
}

IndexWindow IndexWindow::translated(std::uint64_t m) const {
  IndexWindow w;
  w.horizon_ = horizon_ + m;
  w.elements_.reserve(elements_.size());
  for (auto e : elements_) w.elements_.push_back(e + m);
  return w;
}

std::string IndexWindow::serialize() const {
  std::string out = "horizon=" + std::to_string(horizon_) + "\n";
  for (auto e : elements_) {
    out += std::to_string(e);
    out += '\n';
  }
  return out;
}

IndexWindow IndexWindow::deserialize(std::string_view text) {
  std::vector<std::uint64_t> elements;
  std::optional<std::uint64_t> horizon;
  std::size_t line_no = 0;
  while (!text.empty()) {
    const auto nl = text.find('\n');
    std::string_view line = text.substr(0, nl);
    text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
    ++line_no;
    while (!line.empty() && (line.back() == '\r' || line.back() == ' ')) line.remove_suffix(1);
    if (line.empty() || line.front() == '#') continue;
    std::uint64_t v = 0;
    const bool is_header = line.starts_with("horizon=");
    if (is_header) line.remove_prefix(8);
    const auto [ptr, ec] = std::from_chars(line.data(), line.data() + line.size(), v);
    if (ec != std::errc() || ptr != line.data() + line.size()) {
      throw ConfigError("malformed window line", static_cast<int>(line_no), 1);
    }
    if (is_header) {
      horizon = v;
    } else {
      if (!horizon) throw ConfigError("window text must start with horizon=<H>", static_cast<int>(line_no), 1);
      elements.push_back(v);
    }
  }
  if (!horizon) throw ConfigError("window text has no horizon header");
  return IndexWindow(std::move(elements), *horizon);
}

IndexWindow dilate(const IndexWindow& a, std::uint64_t p) {
  if (p == 0) throw ConfigError("dilation factor must be positive");
  std::vector<std::uint64_t> out;
  out.reserve(a.size());
  for (auto e : a.elements()) out.push_back(e * p);
  return IndexWindow(std::move(out), a.horizon() * p);
}

IndexWindow contract(const IndexWindow& a, std::uint64_t p) {
  if (p == 0) throw ConfigError("contraction factor must be positive");
  std::vector<std::uint64_t> out;
  for (auto e : a.elements()) {
    if (e % p == 0) out.push_back(e / p);
  }
  return IndexWindow(std::move(out), a.horizon() / p);
}

namespace {

std::vector<std::uint64_t> natural_list(TextCursor& c, char close) {
  std::vector<std::uint64_t> out;
  if (c.consume(close)) return out;
  do {
    out.push_back(c.natural());
  } while (c.consume(','));
  c.expect(close);
  return out;
}

}  // namespace

IndexWindow window_from_expression(std::string_view text, std::uint64_t horizon) {
  TextCursor c(text);
  const std::string name = c.identifier();
  IndexWindow out;
  if (name == "squares") {
    std::vector<std::uint64_t> e;
    for (std::uint64_t j = 0; j * j <= horizon; ++j) e.push_back(j * j);
    out = IndexWindow(std::move(e), horizon);
  } else {
    c.expect('(');
    if (name == "residue") {
      const auto k = c.natural();
      c.expect(',');
      const auto r = c.natural();
      c.expect(')');
      out = IndexWindow::residue(k, r, horizon);
    } else if (name == "explicit") {
      out = IndexWindow::from_unsorted(natural_list(c, ')'), horizon);
    } else if (name == "powers") {
      const auto b = c.natural();
      c.expect(')');
      if (b < 2) c.fail("powers base must be at least 2");
      std::vector<std::uint64_t> e;
      for (std::uint64_t v = 1; v <= horizon; v *= b) {
        e.push_back(v);
        if (v > horizon / b) break;
      }
      out = IndexWindow(std::move(e), horizon);
    } else if (name == "fs") {
      std::vector<std::uint64_t> gens;
      do {
        gens.push_back(c.natural());
      } while (c.consume(','));
      std::uint64_t depth = gens.size();
      if (c.consume(';')) depth = c.natural();
      c.expect(')');
      out = ip_generate(gens, depth, horizon);
    } else if (name == "intervals") {
      std::vector<std::uint64_t> e;
      do {
        c.expect('[');
        const auto lo = c.natural();
        c.expect(',');
        const std::uint64_t hi = c.consume_word("inf") ? horizon : std::min(c.natural(), horizon);
        c.expect(']');
        for (std::uint64_t n = lo; n <= hi; ++n) e.push_back(n);
      } while (c.consume(','));
      c.expect(')');
      out = IndexWindow::from_unsorted(std::move(e), horizon);
    } else {
      c.fail("unknown set expression '" + name + "'");
    }
  }
  if (!c.eof()) c.fail("unexpected trailing input in set expression");
  return out;
}

}  // namespace recur
