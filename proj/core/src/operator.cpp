#include <cmath>

#include "recurlab/error.hpp"
#include "recurlab/operators.hpp"

namespace recur {

namespace {

std::string scalar_list(const std::vector<Scalar>& v) {
  std::string s;
  for (std::size_t i = 0; i < v.size(); ++i) s += (i > 0 ? ", " : "") + v[i].to_string();
  return s;
}

void require_space(const Operator& op, const StateVector& x) {
  if (!(op.space() == x.space())) {
    throw SpaceMismatch("vector in " + x.space().to_string() + " given to an operator on " + op.space().to_string());
  }
}

}  // namespace

StateVector Operator::apply(const StateVector& x) const {
  require_space(*this, x);
  StateVector y = apply_checked(x);
  if (!y.is_finite()) {
    throw OverflowError("floating-point overflow while applying " + literal() + "; rerun with exact precision");
  }
  return y;
}

StateVector Operator::apply_power(const StateVector& x, std::uint64_t m) const {
  StateVector y = x;
  for (std::uint64_t i = 0; i < m; ++i) y = apply(y);
  return y;
}

// --- matrix ----------------------------------------------------------------

MatrixOperator::MatrixOperator(std::vector<std::vector<Scalar>> entries)
    : Operator(SpaceDescriptor::finite(entries.empty() ? 1 : entries.size())), entries_(std::move(entries)) {
  if (entries_.empty()) throw ConfigError("matrix must be nonempty");
  for (const auto& row : entries_) {
    if (row.size() != entries_.size()) throw ConfigError("matrix must be square");
  }
}

StateVector MatrixOperator::apply_checked(const StateVector& x) const {
  StateVector::Sparse out;
  for (std::size_t i = 0; i < entries_.size(); ++i) {
    Scalar acc;
    for (const auto& [j, v] : x.coords()) acc += entries_[i][static_cast<std::size_t>(j - 1)] * v;
    if (!acc.is_zero()) out[static_cast<std::int64_t>(i + 1)] = acc;
  }
  return StateVector::sparse(space(), std::move(out));
}

std::string MatrixOperator::literal() const {
  std::string s = "matrix([";
  for (std::size_t i = 0; i < entries_.size(); ++i) s += (i > 0 ? ", [" : "[") + scalar_list(entries_[i]) + "]";
  return s + "])";
}

std::string MatrixOperator::describe() const {
  return "kind: matrix\ndimension: " + std::to_string(entries_.size()) + "\nspace: " + space().to_string() +
         "\nconstruction: finite matrix; recurrent exactly when similar to a diagonal matrix with unimodular "
         "entries\n";
}

// --- weighted backward shift -------------------------------------------------

ShiftOperator::ShiftOperator(Expr weights, bool bilateral, SpaceDescriptor space)
    : Operator(std::move(space)), weights_(std::move(weights)), bilateral_(bilateral) {
  const auto sk = this->space().kind;
  if (sk != SpaceDescriptor::Kind::SequenceLp && sk != SpaceDescriptor::Kind::SequenceC0) {
    throw ConfigError("weighted shifts act on sequence spaces");
  }
  if (this->space().over_integers != bilateral) throw ConfigError("bilateral shifts need a Z-indexed space");
}

Scalar ShiftOperator::weight(std::int64_t n) const {
  std::lock_guard<std::mutex> lock(mutex_);
  auto it = cache_.find(n);
  if (it != cache_.end()) return it->second;
  Scalar w = weights_.eval(n);
  if (w.is_zero()) throw ConfigError("shift weight w_" + std::to_string(n) + " is zero");
  if (cache_.size() > 1'000'000) cache_.clear();
  cache_.emplace(n, w);
  return w;
}

StateVector ShiftOperator::apply_checked(const StateVector& x) const {
  StateVector::Sparse out;
  for (const auto& [i, v] : x.coords()) {
    if (!bilateral_ && i == 1) continue;
    out[i - 1] = weight(i) * v;
  }
  return StateVector::sparse(space(), std::move(out));
}

std::string ShiftOperator::literal() const {
  std::string space_name;
  const auto& s = space();
  if (s.kind == SpaceDescriptor::Kind::SequenceC0) {
    space_name = "c0";
  } else if (s.p.get_den() == 1) {
    space_name = "l" + s.p.get_str();
  } else {
    space_name = "lp(" + s.p.get_str() + ")";
  }
  if (bilateral_) space_name += "_Z";
  return "shift(weights=" + weights_.text() + ", side=" + (bilateral_ ? "bi" : "uni") + ", space=" + space_name + ")";
}

std::string ShiftOperator::describe() const {
  std::string s = "kind: weighted backward shift (" + std::string(bilateral_ ? "bilateral" : "unilateral") +
                  ")\nweights: w_n = " + weights_.text() + "\nspace: " + space().to_string() + "\n";
  s += "construction: (B_w x)_n = w_{n+1} x_{n+1}";
  if (weights_.text() == "(n+1)/n") {
    s += "; the weight family (n+1)/n: on l^1 the shift is mixing but has no nonzero reiteratively recurrent "
         "vector, and the inverse partial products 1/(n+1) sum harmonically";
  }
  return s + "\n";
}

// --- diagonal -------------------------------------------------------------------

DiagonalOperator::DiagonalOperator(Expr rule, SpaceDescriptor space)
    : Operator(std::move(space)), rule_(std::move(rule)) {
  const auto sk = this->space().kind;
  if (sk != SpaceDescriptor::Kind::SequenceLp && sk != SpaceDescriptor::Kind::SequenceC0) {
    throw ConfigError("diagonal rules act on sequence spaces");
  }
}

DiagonalOperator::DiagonalOperator(std::vector<Scalar> values)
    : Operator(SpaceDescriptor::finite(values.empty() ? 1 : values.size())), values_(std::move(values)) {
  if (values_.empty()) throw ConfigError("diagonal needs at least one value");
}

Scalar DiagonalOperator::eigenvalue(std::int64_t n) const {
  if (!values_.empty()) {
    if (n < 1 || static_cast<std::size_t>(n) > values_.size()) throw SpaceMismatch("diagonal index out of range");
    return values_[static_cast<std::size_t>(n - 1)];
  }
  std::lock_guard<std::mutex> lock(mutex_);
  auto it = cache_.find(n);
  if (it != cache_.end()) return it->second;
  Scalar v = rule_.eval(n);
  if (cache_.size() > 1'000'000) cache_.clear();
  cache_.emplace(n, v);
  return v;
}

StateVector DiagonalOperator::apply_checked(const StateVector& x) const {
  StateVector::Sparse out;
  for (const auto& [i, v] : x.coords()) out[i] = eigenvalue(i) * v;
  return StateVector::sparse(space(), std::move(out));
}

StateVector DiagonalOperator::apply_power(const StateVector& x, std::uint64_t m) const {
  if (!(space() == x.space())) return Operator::apply_power(x, m);
  StateVector::Sparse out;
  for (const auto& [i, v] : x.coords()) out[i] = eigenvalue(i).pow(m) * v;
  StateVector y = StateVector::sparse(space(), std::move(out));
  if (!y.is_finite()) throw OverflowError("floating-point overflow in a diagonal power; rerun with exact precision");
  return y;
}

std::string DiagonalOperator::literal() const {
  if (!values_.empty()) return "diag(values: " + scalar_list(values_) + ")";
  return "diag(" + rule_.text() + ")";
}

std::string DiagonalOperator::describe() const {
  std::string s = "kind: diagonal\n";
  s += values_.empty() ? "eigenvalues: lambda_n = " + rule_.text() + "\n"
                       : "eigenvalues: " + scalar_list(values_) + "\n";
  s += "space: " + space().to_string() + "\n";
  s += "construction: diagonal multiplication operator; recurrent exactly when every lambda_n is unimodular\n";
  return s;
}

// --- block cycle ----------------------------------------------------------------

BlockCycleOperator::BlockCycleOperator(SpaceDescriptor space) : Operator(std::move(space)) {
  const auto sk = this->space().kind;
  if (sk != SpaceDescriptor::Kind::SequenceLp && sk != SpaceDescriptor::Kind::SequenceC0) {
    throw ConfigError("the block-cycle operator acts on sequence spaces");
  }
  if (this->space().over_integers) throw ConfigError("the block-cycle operator acts on N-indexed sequences");
}

std::pair<std::int64_t, Rational> BlockCycleOperator::image_of_basis(std::int64_t k) {
  if (k < 1) throw SpaceMismatch("block-cycle basis index must be positive");
  if (k == 1) return {1, Rational(1)};
  const int j = 63 - __builtin_clzll(static_cast<unsigned long long>(k));
  const std::int64_t block_end = (std::int64_t{1} << (j + 1)) - 1;
  if (k < block_end) return {k + 1, Rational(2)};
  return {std::int64_t{1} << j, pow2(-((std::int64_t{1} << j) - 1))};
}

StateVector BlockCycleOperator::apply_checked(const StateVector& x) const {
  StateVector::Sparse out;
  for (const auto& [k, v] : x.coords()) {
    const auto [target, w] = image_of_basis(k);
    if (!v.is_exact()) {
      const double wd = w.get_d();
      if (wd == 0.0 || !std::isfinite(wd)) {
        throw OverflowError("block-cycle weight 2^-" + std::to_string(target - 1) +
                            " underflows in floating point; rerun with exact precision");
      }
    }
    out[target] += Scalar(w) * v;
  }
  return StateVector::sparse(space(), std::move(out));
}

std::string BlockCycleOperator::literal() const {
  if (space() == SpaceDescriptor::lp(2)) return "blockcycle";
  const auto& s = space();
  const std::string name = s.kind == SpaceDescriptor::Kind::SequenceC0 ? "c0" : "l" + s.p.get_str();
  return "blockcycle(space=" + name + ")";
}

std::string BlockCycleOperator::describe() const {
  return "kind: block cycle\nspace: " + space().to_string() +
         "\nconstruction: Te_1 = e_1, Te_k = 2e_{k+1} inside the dyadic block 2^j <= k < 2^{j+1}, and the block end "
         "returns with weight 2^{-(2^j-1)}; every e_k is periodic (period 2^j on block j), while no vector with "
         "|x_{2^j}| > 1/j for infinitely many j is reiteratively recurrent\n";
}

// --- row rotation ---------------------------------------------------------------

RowRotationOperator::RowRotationOperator() : Operator(SpaceDescriptor::row_rotation()) {}

StateVector RowRotationOperator::apply_power(const StateVector& x, std::uint64_t m) const {
  if (!(space() == x.space())) throw SpaceMismatch("row rotation applied outside its space");
  StateVector::Rows rows = x.blocks();
  for (std::size_t k = 0; k < rows.rows.size(); ++k) {
    const std::uint64_t mask = (std::uint64_t{1} << k) - 1;
    StateVector::Row moved;
    // (T^m x)_{k,j} = x_{k,j+m}: position j moves to j - m.
    for (const auto& [j, v] : rows.rows[k]) moved[(j - (m & mask)) & mask] = v;
    rows.rows[k] = std::move(moved);
  }
  for (auto& t : rows.tail) {
    if (t.shift > (std::uint64_t{1} << 61) - m) throw SeminormRefusal("row-rotation shift beyond 2^61");
    t.shift += m;
  }
  return StateVector::row_blocks(std::move(rows));
}

StateVector RowRotationOperator::apply_checked(const StateVector& x) const { return apply_power(x, 1); }

std::string RowRotationOperator::literal() const { return "rowrotation"; }

std::string RowRotationOperator::describe() const {
  return "kind: row rotation\nspace: " + space().to_string() +
         " (rows k >= 0 of length 2^k, seminorms p_n)\nconstruction: (Tx)_{k,j} = x_{k,j+1 mod 2^k}; the vector "
         "with x_{k,0} = 1 is uniformly recurrent with an unbounded orbit\n";
}

// --- affine composition ---------------------------------------------------------

CompositionOperator::CompositionOperator(Scalar a, Scalar b, SpaceDescriptor space)
    : Operator(std::move(space)), a_(std::move(a)), b_(std::move(b)) {
  if (this->space().kind != SpaceDescriptor::Kind::PolynomialEntire) {
    throw ConfigError("composition operators act on the polynomial space");
  }
  if (!std::isfinite(a_.abs()) || !std::isfinite(b_.abs())) throw ConfigError("composition symbol must be finite");
}

std::vector<std::vector<Scalar>> CompositionOperator::coefficient_matrix() const {
  const std::size_t d = space().max_degree;
  std::vector<std::vector<Scalar>> m(d + 1, std::vector<Scalar>(d + 1));
  // (az+b)^j = sum_i C(j,i) a^i b^{j-i} z^i
  for (std::size_t j = 0; j <= d; ++j) {
    Integer binom = 1;
    for (std::size_t i = 0; i <= j; ++i) {
      m[i][j] = Scalar(Rational(binom)) * a_.pow(i) * b_.pow(j - i);
      binom = binom * static_cast<unsigned long>(j - i) / static_cast<unsigned long>(i + 1);
    }
  }
  return m;
}

StateVector CompositionOperator::apply_checked(const StateVector& x) const {
  const std::int64_t d = static_cast<std::int64_t>(space().max_degree);
  StateVector::Sparse out;
  for (const auto& [j, c] : x.coords()) {
    if (j > d) throw Error("affine composition raised the degree");
    Integer binom = 1;
    for (std::int64_t i = 0; i <= j; ++i) {
      out[i] += Scalar(Rational(binom)) * a_.pow(static_cast<std::uint64_t>(i)) *
                b_.pow(static_cast<std::uint64_t>(j - i)) * c;
      binom = binom * static_cast<unsigned long>(j - i) / static_cast<unsigned long>(i + 1);
    }
  }
  return StateVector::sparse(space(), std::move(out));
}

std::string CompositionOperator::literal() const {
  std::string radii;
  for (std::size_t i = 0; i < space().radii.size(); ++i) radii += (i > 0 ? "," : "") + space().radii[i].get_str();
  return "comp(a=" + a_.to_string() + ", b=" + b_.to_string() + ", deg=" + std::to_string(space().max_degree) +
         ", radii=" + radii + ")";
}

std::string CompositionOperator::describe() const {
  return "kind: affine composition f(z) -> f(az+b)\na: " + a_.to_string() + "\nb: " + b_.to_string() +
         "\nspace: " + space().to_string() +
         " (coefficient seminorms q_R(f) = sum |c_j| R^j)\nconstruction: composition with phi(z) = az+b on entire "
         "functions; recurrent when |a| = 1 and a != 1, or a = 1 and b = 0\n";
}

// --- scaled and power -------------------------------------------------------------

ScaledOperator::ScaledOperator(Scalar lambda, OperatorPtr inner)
    : Operator(inner->space()), lambda_(std::move(lambda)), inner_(std::move(inner)) {}

StateVector ScaledOperator::apply_checked(const StateVector& x) const { return inner_->apply(x).scaled(lambda_); }

StateVector ScaledOperator::apply_power(const StateVector& x, std::uint64_t m) const {
  return inner_->apply_power(x, m).scaled(lambda_.pow(m));
}

std::string ScaledOperator::literal() const {
  return "scaled(lambda=" + lambda_.to_string() + ", op=" + inner_->literal() + ")";
}

std::string ScaledOperator::describe() const {
  return "kind: scalar multiple lambda*T\nlambda: " + lambda_.to_string() + "\ninner operator:\n" + inner_->describe();
}

PowerOperator::PowerOperator(std::uint64_t p, OperatorPtr inner)
    : Operator(inner->space()), p_(p), inner_(std::move(inner)) {
  if (p_ == 0) throw ConfigError("operator power must be at least 1");
}

// Plain repetition, so that T^p stepped n times does the same floating-point
// work as T stepped pn times.
StateVector PowerOperator::apply_checked(const StateVector& x) const {
  StateVector y = x;
  for (std::uint64_t i = 0; i < p_; ++i) y = inner_->apply(y);
  return y;
}

StateVector PowerOperator::apply_power(const StateVector& x, std::uint64_t m) const {
  return inner_->apply_power(x, p_ * m);
}

std::string PowerOperator::literal() const {
  return "power(p=" + std::to_string(p_) + ", op=" + inner_->literal() + ")";
}

std::string PowerOperator::describe() const {
  return "kind: power T^p\np: " + std::to_string(p_) + "\ninner operator:\n" + inner_->describe();
}

OperatorPtr scaled(const Scalar& lambda, OperatorPtr op) { return std::make_shared<ScaledOperator>(lambda, std::move(op)); }

OperatorPtr power(std::uint64_t p, OperatorPtr op) { return std::make_shared<PowerOperator>(p, std::move(op)); }

}  // namespace recur
