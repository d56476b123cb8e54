#include <algorithm>
#include <limits>

#include "recurlab/error.hpp"
#include "recurlab/families.hpp"
#include "recurlab/text.hpp"

namespace recur {

namespace {

constexpr std::uint64_t kUnbounded = std::numeric_limits<std::uint64_t>::max();

}  // namespace

bool holds(const IndexPredicate& p, std::uint64_t n) {
  if (const auto* r = std::get_if<ResiduePredicate>(&p)) {
    const std::uint64_t c = n % r->modulus;
    return std::find(r->residues.begin(), r->residues.end(), c) != r->residues.end();
  }
  for (const auto& [lo, hi] : std::get<IntervalPredicate>(p).intervals) {
    if (n >= lo && n <= hi) return true;
  }
  return false;
}

std::string to_string(const IndexPredicate& p) {
  std::string s;
  if (const auto* r = std::get_if<ResiduePredicate>(&p)) {
    s = "residue(" + std::to_string(r->modulus) + ";";
    for (std::size_t i = 0; i < r->residues.size(); ++i) {
      s += (i > 0 ? "," : "") + std::to_string(r->residues[i]);
    }
    return s + ")";
  }
  s = "intervals(";
  const auto& iv = std::get<IntervalPredicate>(p).intervals;
  for (std::size_t i = 0; i < iv.size(); ++i) {
    if (i > 0) s += ",";
    s += "[" + std::to_string(iv[i].first) + "," +
         (iv[i].second == kUnbounded ? std::string("inf") : std::to_string(iv[i].second)) + "]";
  }
  return s + ")";
}

namespace {

IndexPredicate parse_predicate(TextCursor& c) {
  const std::string name = c.identifier();
  c.expect('(');
  if (name == "residue") {
    ResiduePredicate r;
    r.modulus = c.natural();
    if (r.modulus == 0) c.fail("residue modulus must be positive");
    c.expect(';');
    do {
      r.residues.push_back(c.natural() % r.modulus);
    } while (c.consume(','));
    c.expect(')');
    return r;
  }
  if (name == "intervals") {
    IntervalPredicate p;
    do {
      c.expect('[');
      const auto lo = c.natural();
      c.expect(',');
      const auto hi = c.consume_word("inf") ? kUnbounded : c.natural();
      c.expect(']');
      if (hi < lo) c.fail("empty interval");
      p.intervals.emplace_back(lo, hi);
    } while (c.consume(','));
    c.expect(')');
    return p;
  }
  c.fail("unknown partition predicate '" + name + "'");
}

}  // namespace

IndexPredicate parse_index_predicate(std::string_view text) {
  TextCursor c(text);
  IndexPredicate p = parse_predicate(c);
  if (!c.eof()) c.fail("unexpected trailing input in predicate");
  return p;
}

std::uint64_t CuspInstance::max_shift() const {
  return shifts.empty() ? 0 : *std::max_element(shifts.begin(), shifts.end());
}

std::uint64_t CuspInstance::min_shift() const {
  return shifts.empty() ? 0 : *std::min_element(shifts.begin(), shifts.end());
}

std::string CuspInstance::to_string() const {
  std::string s;
  for (std::size_t j = 0; j < partition.size(); ++j) {
    if (j > 0) s += " | ";
    s += recur::to_string(partition[j]) + " + " + std::to_string(j < shifts.size() ? shifts[j] : 0);
  }
  return s;
}

CuspInstance CuspInstance::parse(std::string_view text) {
  TextCursor c(text);
  CuspInstance inst;
  do {
    inst.partition.push_back(parse_predicate(c));
    c.expect('+');
    inst.shifts.push_back(c.natural());
  } while (c.consume('|'));
  if (!c.eof()) c.fail("unexpected trailing input in CuSP instance");
  return inst;
}

IndexWindow cusp_transform(const IndexWindow& a, const CuspInstance& inst) {
  if (inst.partition.empty()) throw ConfigError("CuSP instance needs at least one piece");
  if (inst.partition.size() != inst.shifts.size()) throw ConfigError("CuSP pieces and shifts differ in number");
  for (std::uint64_t n = 0; n <= a.horizon(); ++n) {
    const bool covered = std::any_of(inst.partition.begin(), inst.partition.end(),
                                     [n](const IndexPredicate& p) { return holds(p, n); });
    if (!covered) throw ConfigError("CuSP partition does not cover " + std::to_string(n));
  }
  std::vector<std::uint64_t> out;
  out.reserve(a.size());
  for (auto e : a.elements()) {
    for (std::size_t j = 0; j < inst.partition.size(); ++j) {
      if (holds(inst.partition[j], e)) out.push_back(e + inst.shifts[j]);
    }
  }
  return IndexWindow::from_unsorted(std::move(out), a.horizon() + inst.max_shift());
}

}  // namespace recur
