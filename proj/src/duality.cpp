#include "dualpredict/duality.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <string>

namespace dualpredict {

namespace {

Eigen::Index offset_of(const IndexWindow& window, long i) { return window.offset(i); }

Matrix submatrix(const Matrix& full, const IndexWindow& window, std::span<const long> rows, std::span<const long> cols) {
  Matrix out(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(cols.size()));
  for (std::size_t r = 0; r < rows.size(); ++r) {
    for (std::size_t c = 0; c < cols.size(); ++c) {
      out(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) =
          full(offset_of(window, rows[r]), offset_of(window, cols[c]));
    }
  }
  return out;
}

// (u^T X, v^T X) = u^T Gamma conj(v).
Complex inner(const Vector& u, const Vector& v, const Matrix& covariance) {
  return (u.transpose() * covariance * v.conjugate()).value();
}

Vector to_vector(const ComplexVector& v) { return Eigen::Map<const Vector>(v.data(), static_cast<Eigen::Index>(v.size())); }

ComplexVector to_std(const Vector& v) { return {v.data(), v.data() + v.size()}; }

// alpha'_j = (error, X_j) for j in M u {l}; an independent route to the dual-basis weights.
ComplexVector dual_weights_from_error(const Vector& error, const Matrix& covariance, const IndexWindow& window,
                                      std::span<const long> dual_indices) {
  ComplexVector out;
  out.reserve(dual_indices.size());
  for (const long j : dual_indices) {
    out.push_back((error.transpose() * covariance.col(offset_of(window, j))).value());
  }
  return out;
}

}  // namespace

// --- IndexPartition ---------------------------------------------------------

IndexPartition IndexPartition::from_missing(IndexWindow window, long target, std::vector<long> missing) {
  IndexPartition part;
  part.window = window;
  part.target = target;
  std::sort(missing.begin(), missing.end());
  part.missing = std::move(missing);
  for (long i = -window.m; i <= window.n; ++i) {
    if (i != target && !std::binary_search(part.missing.begin(), part.missing.end(), i)) {
      part.observed.push_back(i);
    }
  }
  part.validate();
  return part;
}

void IndexPartition::validate() const {
  if (!window.contains(target)) {
    throw ValidationError("target " + std::to_string(target) + " is outside the window");
  }
  std::vector<long> all;
  all.reserve(window.size());
  for (const long i : missing) {
    if (!window.contains(i)) {
      throw ValidationError("missing index " + std::to_string(i) + " is outside the window");
    }
    if (i == target) {
      throw ValidationError("missing set contains the target " + std::to_string(target));
    }
    all.push_back(i);
  }
  for (const long i : observed) {
    if (!window.contains(i)) {
      throw ValidationError("observed index " + std::to_string(i) + " is outside the window");
    }
    if (i == target) {
      throw ValidationError("observed set contains the target " + std::to_string(target));
    }
    all.push_back(i);
  }
  all.push_back(target);
  std::sort(all.begin(), all.end());
  if (std::adjacent_find(all.begin(), all.end()) != all.end()) {
    throw ValidationError("observed and missing sets overlap or repeat an index");
  }
  if (all.size() != window.size()) {
    throw ValidationError("observed, target and missing sets do not cover the window");
  }
}

std::vector<long> IndexPartition::dual_indices() const {
  std::vector<long> out = missing;
  out.insert(std::upper_bound(out.begin(), out.end(), target), target);
  return out;
}

// --- DualRepresentation -----------------------------------------------------

double DualRepresentation::biorthogonality_residual(const Matrix& covariance) const {
  const Matrix product = covariance * coefficients.adjoint();
  return (product - Matrix::Identity(product.rows(), product.cols())).cwiseAbs().maxCoeff();
}

double DualRepresentation::covariance_residual(const Matrix& covariance) const {
  return (coefficients * covariance * coefficients.adjoint() - coefficients).cwiseAbs().maxCoeff();
}

ComplexVector DualRepresentation::row(long i) const {
  if (!window.contains(i)) {
    throw ValidationError("index " + std::to_string(i) + " is outside the window");
  }
  return to_std(coefficients.row(window.offset(i)).transpose());
}

// --- PredictionResult -------------------------------------------------------

Complex PredictionResult::alpha_at(long k) const {
  const auto it = std::lower_bound(observed.begin(), observed.end(), k);
  if (it == observed.end() || *it != k) {
    throw ValidationError("index " + std::to_string(k) + " is not observed");
  }
  return alpha[static_cast<std::size_t>(it - observed.begin())];
}

Complex PredictionResult::alpha_prime_at(long i) const {
  const auto it = std::lower_bound(dual_indices.begin(), dual_indices.end(), i);
  if (it == dual_indices.end() || *it != i || alpha_prime.empty()) {
    throw ValidationError("index " + std::to_string(i) + " has no dual-basis weight");
  }
  return alpha_prime[static_cast<std::size_t>(it - dual_indices.begin())];
}

ComplexVector PredictionResult::error_vector() const {
  ComplexVector e(window.size(), 0.0);
  e[static_cast<std::size_t>(window.offset(target))] = 1.0;
  for (std::size_t k = 0; k < observed.size(); ++k) {
    e[static_cast<std::size_t>(window.offset(observed[k]))] = -alpha[k];
  }
  return e;
}

double PredictionResult::orthogonality_residual(const Matrix& covariance) const {
  const Vector e = to_vector(error_vector());
  const double sigma = std::sqrt(std::max(sigma2, 0.0));
  double worst = 0.0;
  for (const long j : observed) {
    const Eigen::Index col = window.offset(j);
    const Complex projection = (e.transpose() * covariance.col(col)).value();
    worst = std::max(worst, std::abs(projection) / (sigma * std::sqrt(covariance(col, col).real())));
  }
  return worst;
}

// --- normal equations -------------------------------------------------------

NormalEquations solve_normal_equations(const Matrix& covariance, const IndexWindow& window, long target,
                                       std::span<const long> observed) {
  NormalEquations out;
  const Eigen::Index l = window.offset(target);
  const double gamma_ll = covariance(l, l).real();
  if (observed.empty()) {
    out.sigma2 = gamma_ll;
    out.sigma2_from_inverse = gamma_ll;
    return out;
  }
  // sum_k alpha_k gamma_{k,j} = gamma_{l,j}  <=>  Gamma_K conj(alpha) = (gamma_{j,l})_j.
  const Matrix gram = submatrix(covariance, window, observed, observed);
  const std::array<long, 1> target_index{target};
  const Vector rhs = submatrix(covariance, window, observed, target_index).col(0);
  const Eigen::LLT<Matrix> llt(gram);
  if (llt.info() != Eigen::Success) {
    throw PositiveDefinitenessError(observed.front(), 0.0, 0.0);
  }
  const Vector alpha = llt.solve(rhs).conjugate();
  out.alpha = to_std(alpha);
  Complex explained = 0.0;
  for (std::size_t k = 0; k < observed.size(); ++k) {
    explained += alpha(static_cast<Eigen::Index>(k)) * covariance(window.offset(observed[k]), l);
  }
  out.sigma2 = gamma_ll - explained.real();

  std::vector<long> augmented(observed.begin(), observed.end());
  augmented.push_back(target);
  const Matrix full = submatrix(covariance, window, augmented, augmented);
  const Matrix full_inverse = full.llt().solve(Matrix::Identity(full.rows(), full.cols()));
  out.sigma2_from_inverse = 1.0 / full_inverse(full.rows() - 1, full.cols() - 1).real();

  for (const long j : augmented) {
    const Eigen::Index cj = window.offset(j);
    Complex value = covariance(l, cj);
    for (std::size_t k = 0; k < observed.size(); ++k) {
      value -= alpha(static_cast<Eigen::Index>(k)) * covariance(window.offset(observed[k]), cj);
    }
    if (j == target) {
      value -= out.sigma2;
    }
    out.yule_walker_residual = std::max(out.yule_walker_residual, std::abs(value));
  }
  return out;
}

// --- dual -------------------------------------------------------------------

DualRepresentation dual(const CovarianceMatrix& cov) { return {cov.window(), cov.inverse()}; }

ComplexVector standardized_interpolation_error(const CovarianceMatrix& cov, long j) {
  const IndexPartition part = IndexPartition::from_missing(cov.window(), j, {});
  const NormalEquations solution = solve_normal_equations(cov.entries(), cov.window(), j, part.observed);
  ComplexVector out(cov.size(), 0.0);
  out[static_cast<std::size_t>(cov.window().offset(j))] = 1.0 / solution.sigma2;
  for (std::size_t k = 0; k < part.observed.size(); ++k) {
    out[static_cast<std::size_t>(cov.window().offset(part.observed[k]))] = -solution.alpha[k] / solution.sigma2;
  }
  return out;
}

PredictionResult predict_via_duality(const ArTable& table, const IndexPartition& part) {
  part.validate();
  if (!(part.window == table.window())) {
    throw ValidationError("partition window does not match the A-table window");
  }
  const IndexWindow& window = part.window;
  const Matrix& a = table.matrix();
  const std::vector<long> dual_indices = part.dual_indices();
  const auto size = static_cast<Eigen::Index>(dual_indices.size());

  // Rows gamma^{i, .} of Gamma^{-1} = A* A for i in M u {l}.
  Matrix inverse_rows(size, a.cols());
  for (Eigen::Index r = 0; r < size; ++r) {
    inverse_rows.row(r) = a.col(window.offset(dual_indices[static_cast<std::size_t>(r)])).adjoint() * a;
  }
  Matrix block(size, size);
  for (Eigen::Index c = 0; c < size; ++c) {
    block.col(c) = inverse_rows.col(window.offset(dual_indices[static_cast<std::size_t>(c)]));
  }

  // sum_i alpha'_i gamma^{i,j} = delta_{lj}  <=>  block^T alpha' = e_l.
  const auto l_pos = static_cast<Eigen::Index>(std::find(dual_indices.begin(), dual_indices.end(), part.target) -
                                               dual_indices.begin());
  const Vector alpha_prime = block.transpose().partialPivLu().solve(Vector::Unit(size, l_pos));

  PredictionResult result;
  result.window = window;
  result.target = part.target;
  result.observed = part.observed;
  result.dual_indices = dual_indices;
  result.alpha_prime = to_std(alpha_prime);
  result.sigma2 = alpha_prime(l_pos).real();

  const Vector weights = inverse_rows.transpose() * alpha_prime;  // sum_i alpha'_i gamma^{i,k}
  result.alpha.reserve(part.observed.size());
  for (const long k : part.observed) {
    result.alpha.push_back(-weights(window.offset(k)));
  }

  // Y_i = sum_k conj(A(k,i)) eps_k.
  Vector innovation = Vector::Zero(a.rows());
  for (Eigen::Index r = 0; r < size; ++r) {
    innovation += alpha_prime(r) * a.col(window.offset(dual_indices[static_cast<std::size_t>(r)])).conjugate();
  }
  result.innovation_error = to_std(innovation);
  return result;
}

PredictionResult predict_via_duality(const CovarianceMatrix& cov, const IndexPartition& part) {
  return predict_via_duality(cov.ar_table(), part);
}

PredictionResult predict_via_normal_equations(const CovarianceMatrix& cov, const IndexPartition& part) {
  part.validate();
  if (!(part.window == cov.window())) {
    throw ValidationError("partition window does not match the covariance window");
  }
  const NormalEquations solution = solve_normal_equations(cov.entries(), cov.window(), part.target, part.observed);
  PredictionResult result;
  result.window = part.window;
  result.target = part.target;
  result.observed = part.observed;
  result.alpha = solution.alpha;
  result.sigma2 = solution.sigma2;
  result.dual_indices = part.dual_indices();
  const Vector error = to_vector(result.error_vector());
  result.alpha_prime = dual_weights_from_error(error, cov.entries(), cov.window(), result.dual_indices);
  // error^T X = error^T B eps.
  result.innovation_error = to_std(cov.lower_factor().transpose() * error);
  return result;
}

DualityDiagnostics duality_diagnostics(const CovarianceMatrix& cov, const IndexPartition& part) {
  part.validate();
  const IndexWindow& window = cov.window();
  const NormalEquations primal = solve_normal_equations(cov.entries(), window, part.target, part.observed);
  const Matrix inverse = cov.inverse();
  const NormalEquations dual_solution = solve_normal_equations(inverse, window, part.target, part.missing);

  const auto size = static_cast<Eigen::Index>(window.size());
  Vector primal_error = Vector::Zero(size);
  primal_error(window.offset(part.target)) = 1.0;
  for (std::size_t k = 0; k < part.observed.size(); ++k) {
    primal_error(window.offset(part.observed[k])) = -primal.alpha[k];
  }
  // Y_l - sum_i beta_i Y_i in X-coefficients: (e_l - sum_i beta_i e_i)^T D.
  Vector dual_weights = Vector::Zero(size);
  dual_weights(window.offset(part.target)) = 1.0;
  for (std::size_t i = 0; i < part.missing.size(); ++i) {
    dual_weights(window.offset(part.missing[i])) = -dual_solution.alpha[i];
  }
  const Vector dual_error = inverse.transpose() * dual_weights;

  DualityDiagnostics out;
  out.primal_error = primal.sigma2;
  out.dual_error = dual_solution.sigma2;
  out.product = primal.sigma2 * dual_solution.sigma2;
  const double pp = inner(primal_error, primal_error, cov.entries()).real();
  const double dd = inner(dual_error, dual_error, cov.entries()).real();
  out.cosine = std::abs(inner(primal_error, dual_error, cov.entries())) / std::sqrt(pp * dd);
  out.proportionality_residual = (primal_error - dual_error / dual_solution.sigma2).cwiseAbs().maxCoeff();
  return out;
}

double duality_product_check(const CovarianceMatrix& cov, const IndexPartition& part) {
  return duality_diagnostics(cov, part).product;
}

double involution_residual(const CovarianceMatrix& cov) {
  const DualRepresentation first = dual(cov);
  const CovarianceMatrix dual_cov(cov.window(), first.coefficients);
  const DualRepresentation second = dual(dual_cov);
  const Matrix composed = second.coefficients * first.coefficients;
  return (composed - Matrix::Identity(composed.rows(), composed.cols())).cwiseAbs().maxCoeff();
}

}  // namespace dualpredict
