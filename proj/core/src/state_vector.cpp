#include <algorithm>
#include <cmath>

#include "recurlab/error.hpp"
#include "recurlab/operators.hpp"

namespace recur {

namespace {

bool finite(const Scalar& s) {
  if (s.is_exact()) return true;
  const auto z = s.to_complex();
  return std::isfinite(z.real()) && std::isfinite(z.imag());
}

template <class Map>
void drop_zeros(Map& m) {
  for (auto it = m.begin(); it != m.end();) {
    it = it->second.is_zero() ? m.erase(it) : std::next(it);
  }
}

}  // namespace

StateVector StateVector::sparse(const SpaceDescriptor& space, Sparse coords) {
  if (space.kind == SpaceDescriptor::Kind::RowRotationFrechet) {
    throw SpaceMismatch("row-rotation vectors are given by rows, not sparse coordinates");
  }
  for (const auto& [i, v] : coords) {
    (void)v;
    switch (space.kind) {
      case SpaceDescriptor::Kind::FiniteDim:
        if (i < 1 || static_cast<std::uint64_t>(i) > space.dimension) {
          throw SpaceMismatch("coordinate " + std::to_string(i) + " outside C^" + std::to_string(space.dimension));
        }
        break;
      case SpaceDescriptor::Kind::PolynomialEntire:
        if (i < 0 || static_cast<std::uint64_t>(i) > space.max_degree) {
          throw SpaceMismatch("degree " + std::to_string(i) + " above the space's maximum degree");
        }
        break;
      default:
        if (!space.over_integers && i < 1) throw SpaceMismatch("sequence indices start at 1");
        break;
    }
  }
  StateVector v;
  v.space_ = space;
  v.coords_ = std::move(coords);
  v.canonicalize();
  return v;
}

StateVector StateVector::row_blocks(Rows rows) {
  if (rows.rows.size() > 63) throw SpaceMismatch("row-rotation rows above 62 cannot be materialized");
  for (std::size_t k = 0; k < rows.rows.size(); ++k) {
    for (const auto& [j, v] : rows.rows[k]) {
      (void)v;
      if (j >> k != 0) throw SpaceMismatch("row " + std::to_string(k) + " has no position " + std::to_string(j));
    }
  }
  StateVector v;
  v.space_ = SpaceDescriptor::row_rotation();
  v.rows_ = std::move(rows);
  v.canonicalize();
  return v;
}

StateVector StateVector::zero(const SpaceDescriptor& space) {
  StateVector v;
  v.space_ = space;
  return v;
}

void StateVector::canonicalize() {
  drop_zeros(coords_);
  for (auto& r : rows_.rows) drop_zeros(r);
  std::map<std::uint64_t, Scalar> merged;
  for (const auto& t : rows_.tail) merged[t.shift] += t.coef;
  rows_.tail.clear();
  for (auto& [s, c] : merged) {
    if (!c.is_zero()) rows_.tail.push_back({c, s});
  }
  if (rows_.tail.empty()) {
    while (!rows_.rows.empty() && rows_.rows.back().empty()) rows_.rows.pop_back();
  }
}

StateVector::Rows StateVector::materialized_to(std::size_t k) const {
  if (k > 62) throw SeminormRefusal("cannot materialize row-rotation rows above 62");
  Rows out = rows_;
  while (out.rows.size() <= k) {
    const std::size_t row = out.rows.size();
    const std::uint64_t size = std::uint64_t{1} << row;
    Row r;
    for (const auto& t : rows_.tail) {
      const std::uint64_t pos = (size - (t.shift & (size - 1))) & (size - 1);
      r[pos] += t.coef;
    }
    drop_zeros(r);
    out.rows.push_back(std::move(r));
  }
  return out;
}

bool StateVector::is_exact() const {
  for (const auto& [i, v] : coords_) {
    if (!v.is_exact()) return false;
  }
  for (const auto& r : rows_.rows) {
    for (const auto& [j, v] : r) {
      if (!v.is_exact()) return false;
    }
  }
  return std::all_of(rows_.tail.begin(), rows_.tail.end(), [](const TailTerm& t) { return t.coef.is_exact(); });
}

bool StateVector::is_zero() const { return coords_.empty() && rows_.rows.empty() && rows_.tail.empty(); }

bool StateVector::is_finite() const {
  for (const auto& [i, v] : coords_) {
    if (!finite(v)) return false;
  }
  for (const auto& r : rows_.rows) {
    for (const auto& [j, v] : r) {
      if (!finite(v)) return false;
    }
  }
  return std::all_of(rows_.tail.begin(), rows_.tail.end(), [](const TailTerm& t) { return finite(t.coef); });
}

StateVector StateVector::to_inexact() const {
  StateVector v = *this;
  for (auto& [i, c] : v.coords_) c = c.to_inexact();
  for (auto& r : v.rows_.rows) {
    for (auto& [j, c] : r) c = c.to_inexact();
  }
  for (auto& t : v.rows_.tail) t.coef = t.coef.to_inexact();
  return v;
}

StateVector StateVector::operator+(const StateVector& o) const {
  if (!(space_ == o.space_)) throw SpaceMismatch("adding vectors of different spaces");
  StateVector v;
  v.space_ = space_;
  if (!is_rows()) {
    v.coords_ = coords_;
    for (const auto& [i, c] : o.coords_) v.coords_[i] += c;
    v.canonicalize();
    return v;
  }
  const std::size_t rows = std::max(rows_.rows.size(), o.rows_.rows.size());
  if (rows == 0) {
    v.rows_.tail = rows_.tail;
  } else {
    v.rows_ = materialized_to(rows - 1);
    const Rows other = o.materialized_to(rows - 1);
    for (std::size_t k = 0; k < rows; ++k) {
      for (const auto& [j, c] : other.rows[k]) v.rows_.rows[k][j] += c;
    }
  }
  v.rows_.tail.insert(v.rows_.tail.end(), o.rows_.tail.begin(), o.rows_.tail.end());
  v.canonicalize();
  return v;
}

StateVector StateVector::scaled(const Scalar& s) const {
  StateVector v = *this;
  for (auto& [i, c] : v.coords_) c *= s;
  for (auto& r : v.rows_.rows) {
    for (auto& [j, c] : r) c *= s;
  }
  for (auto& t : v.rows_.tail) t.coef *= s;
  v.canonicalize();
  return v;
}

StateVector StateVector::operator-(const StateVector& o) const { return *this + o.scaled(Scalar(-1L)); }

bool operator==(const StateVector& a, const StateVector& b) {
  if (!(a.space_ == b.space_)) return false;
  if (!a.is_rows()) return a.coords_ == b.coords_;
  if (!(a.rows_.tail == b.rows_.tail)) return false;
  const std::size_t rows = std::max(a.rows_.rows.size(), b.rows_.rows.size());
  if (rows == 0) return true;
  return a.materialized_to(rows - 1).rows == b.materialized_to(rows - 1).rows;
}

std::string StateVector::to_string(int digits) const {
  std::string s;
  if (!is_rows()) {
    s = "vec(sparse:";
    bool first = true;
    for (const auto& [i, c] : coords_) {
      s += (first ? " " : ", ") + std::to_string(i) + ":" + c.to_string(digits);
      first = false;
    }
    return s + ")";
  }
  s = "rowvec(entries:";
  bool first = true;
  for (std::size_t k = 0; k < rows_.rows.size(); ++k) {
    for (const auto& [j, c] : rows_.rows[k]) {
      s += (first ? " " : ", ") + std::to_string(k) + ":" + std::to_string(j) + ":" + c.to_string(digits);
      first = false;
    }
  }
  if (!rows_.rows.empty()) s += "; rows: " + std::to_string(rows_.rows.size());
  if (!rows_.tail.empty()) {
    s += "; tail:";
    first = true;
    for (const auto& t : rows_.tail) {
      s += (first ? " " : ", ") + t.coef.to_string(digits) + "@" + std::to_string(t.shift);
      first = false;
    }
  }
  return s + ")";
}

}  // namespace recur
