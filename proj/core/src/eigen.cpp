#include <Eigen/Dense>
#include <Eigen/Eigenvalues>
#include <cmath>

#include "recurlab/error.hpp"
#include "recurlab/operators.hpp"

namespace recur {

EigenStructure eigen_structure(const MatrixOperator& m, const EigenOptions& options) {
  const auto n = static_cast<Eigen::Index>(m.dimension());
  if (m.dimension() > options.dimension_cap) {
    throw ConfigError("matrix dimension " + std::to_string(m.dimension()) + " above the cap " +
                      std::to_string(options.dimension_cap));
  }
  Eigen::MatrixXcd a(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) {
      a(i, j) = m.entries()[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)].to_complex();
    }
  }
  if (!a.allFinite()) throw NumericalFailure("matrix has non-finite entries");
  const double scale = std::max(1.0, a.cwiseAbs().maxCoeff());

  Eigen::ComplexEigenSolver<Eigen::MatrixXcd> solver(a, /*computeEigenvectors=*/false);
  if (solver.info() != Eigen::Success) throw NumericalFailure("eigenvalue iteration did not converge");
  const Eigen::VectorXcd values = solver.eigenvalues();

  EigenStructure out;
  std::vector<bool> used(static_cast<std::size_t>(n), false);
  for (Eigen::Index i = 0; i < n; ++i) {
    if (used[static_cast<std::size_t>(i)]) continue;
    EigenCluster c;
    std::complex<double> sum = 0;
    for (Eigen::Index j = i; j < n; ++j) {
      if (!used[static_cast<std::size_t>(j)] && std::abs(values(j) - values(i)) <= options.cluster_tolerance * scale) {
        used[static_cast<std::size_t>(j)] = true;
        sum += values(j);
        ++c.algebraic;
      }
    }
    c.value = sum / static_cast<double>(c.algebraic);
    Eigen::MatrixXcd shifted = a - c.value * Eigen::MatrixXcd::Identity(n, n);
    Eigen::JacobiSVD<Eigen::MatrixXcd> svd(shifted);
    const auto& sv = svd.singularValues();
    std::size_t rank = 0;
    for (Eigen::Index k = 0; k < sv.size(); ++k) {
      if (sv(k) > options.rank_tolerance * scale) ++rank;
    }
    c.geometric = static_cast<std::size_t>(n) - rank;
    out.eigenvalues.push_back(c);
  }
  std::size_t geometric_total = 0;
  out.unimodular = true;
  for (const auto& c : out.eigenvalues) {
    geometric_total += std::min(c.geometric, c.algebraic);
    if (std::abs(std::abs(c.value) - 1.0) > options.unimodular_tolerance) out.unimodular = false;
  }
  out.diagonalizable = geometric_total == static_cast<std::size_t>(n);
  Eigen::JacobiSVD<Eigen::MatrixXcd> full(a);
  const auto& sv = full.singularValues();
  out.condition = sv(sv.size() - 1) > 0 ? sv(0) / sv(sv.size() - 1) : INFINITY;
  return out;
}

}  // namespace recur
