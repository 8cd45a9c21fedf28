#include "dualpredict/predictors.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <string>

namespace dualpredict {

namespace {

constexpr double kTailWarning = 1e-8;
// Extra AR coefficients used to estimate the tail mass beyond n.
constexpr std::size_t kTailProbe = 1024;

Complex hermitian_lag(const ComplexVector& gamma, long lag) {
  return lag >= 0 ? gamma[static_cast<std::size_t>(lag)] : std::conj(gamma[static_cast<std::size_t>(-lag)]);
}

Matrix toeplitz_matrix(const ComplexVector& gamma, std::size_t size) {
  Matrix out(static_cast<Eigen::Index>(size), static_cast<Eigen::Index>(size));
  for (std::size_t i = 0; i < size; ++i) {
    for (std::size_t j = 0; j < size; ++j) {
      out(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) =
          hermitian_lag(gamma, static_cast<long>(i) - static_cast<long>(j));
    }
  }
  return out;
}

// a_k of the normalized innovation at the recursion's current order.
Complex normalized_coefficient(const LevinsonDurbin& recursion, std::size_t k) {
  const double scale = 1.0 / std::sqrt(recursion.innovation_variance());
  return k == 0 ? Complex(scale) : -recursion.coefficients()[k - 1] * scale;
}

// Largest lag a model can supply, or `wanted` when unbounded.
std::size_t lag_limit(const ProcessModel& model, std::size_t wanted) {
  if (const auto* acvf = std::get_if<AutocovarianceModel>(&model.variant())) {
    return std::min(wanted, acvf->max_lag());
  }
  return wanted;
}

std::vector<long> sorted_dual_indices(std::vector<long> missing) {
  std::sort(missing.begin(), missing.end());
  if (std::adjacent_find(missing.begin(), missing.end()) != missing.end()) {
    throw ValidationError("missing set repeats an index");
  }
  if (std::binary_search(missing.begin(), missing.end(), 0L)) {
    throw ValidationError("missing set contains the target 0");
  }
  missing.insert(std::upper_bound(missing.begin(), missing.end(), 0L), 0L);
  return missing;
}

// Solves sum_i alpha'_i h(i, j) = delta_{0j} over j in `indices`.
Vector solve_dual_system(const std::vector<long>& indices, const std::function<Complex(long, long)>& h) {
  const auto size = static_cast<Eigen::Index>(indices.size());
  Matrix block(size, size);
  for (Eigen::Index r = 0; r < size; ++r) {
    for (Eigen::Index c = 0; c < size; ++c) {
      block(r, c) = h(indices[static_cast<std::size_t>(r)], indices[static_cast<std::size_t>(c)]);
    }
  }
  const auto zero = static_cast<Eigen::Index>(std::find(indices.begin(), indices.end(), 0L) - indices.begin());
  return block.transpose().partialPivLu().solve(Vector::Unit(size, zero));
}

// Window doubling from `first` to `last` with successive-difference stopping.
LimitReport sweep(long first, long last, double tolerance, const std::function<double(long)>& evaluate) {
  if (last < first) {
    throw ValidationError("limit sweep needs a window of at least " + std::to_string(first) + " but the cap is " +
                          std::to_string(last));
  }
  std::vector<long> windows;
  for (long m = first; m <= last; m *= 2) {
    windows.push_back(m);
  }
  if (windows.back() < last) {
    windows.push_back(last);
  }
  LimitReport report;
  report.tolerance = tolerance;
  report.achieved_delta = std::numeric_limits<double>::infinity();
  for (const long m : windows) {
    const double value = evaluate(m);
    if (!report.values.empty()) {
      report.achieved_delta = std::abs(value - report.values.back().second);
    }
    report.values.emplace_back(m, value);
    report.extrapolated = value;
    if (report.achieved_delta < tolerance) {
      report.converged = true;
      break;
    }
  }
  return report;
}

long sweep_start(const LimitPolicy& policy, long minimum, long last) {
  return std::max(minimum, std::min(static_cast<long>(policy.start), std::max(minimum, last / 2)));
}

}  // namespace

PredictionResult finite_kolmogorov_nakazi(const ProcessModel& model, long m, long n) {
  const IndexWindow window(m, n);
  const ComplexVector gamma = autocovariances(model, static_cast<std::size_t>(m + n));
  // rows[r] = (a_{0,m+r}, ..., a_{m+r,m+r}): row r of the A-table for r = 0..n.
  std::vector<ComplexVector> rows;
  rows.reserve(static_cast<std::size_t>(n + 1));
  LevinsonDurbin recursion(gamma);
  for (long r = 0; r <= n; ++r) {
    recursion.advance_to(static_cast<std::size_t>(m + r));
    rows.push_back(recursion.normalized_row());
  }
  const auto table = [&](long r, long k) { return rows[static_cast<std::size_t>(r)][static_cast<std::size_t>(r - k)]; };

  double total = 0.0;
  for (long r = 0; r <= n; ++r) {
    total += std::norm(table(r, 0));
  }
  PredictionResult result;
  result.window = window;
  result.target = 0;
  result.sigma2 = 1.0 / total;
  result.dual_indices = {0};
  result.alpha_prime = {Complex(result.sigma2)};
  result.innovation_error.assign(window.size(), 0.0);
  for (long r = 0; r <= n; ++r) {
    result.innovation_error[static_cast<std::size_t>(window.offset(r))] = result.sigma2 * std::conj(table(r, 0));
  }
  for (long k = -m; k <= n; ++k) {
    if (k == 0) {
      continue;
    }
    Complex entry = 0.0;  // gamma^{0,k}
    for (long r = std::max(0L, k); r <= n; ++r) {
      entry += std::conj(table(r, 0)) * table(r, k);
    }
    result.observed.push_back(k);
    result.alpha.push_back(-result.sigma2 * entry);
  }
  return result;
}

LimitReport nakazi_limit(const ProcessModel& model, long n, const LimitPolicy& policy) {
  if (n < 0) {
    throw ValidationError("n must be nonnegative");
  }
  const auto lags = lag_limit(model, policy.cap + static_cast<std::size_t>(n));
  const long last = static_cast<long>(lags) - n;
  const ComplexVector gamma = autocovariances(model, lags);
  LevinsonDurbin recursion(gamma);
  LimitReport report = sweep(sweep_start(policy, 1, last), last, policy.tolerance, [&](long m) {
    double total = 0.0;
    for (long k = 0; k <= n; ++k) {
      recursion.advance_to(static_cast<std::size_t>(m + k));
      total += std::norm(normalized_coefficient(recursion, static_cast<std::size_t>(k)));
    }
    return 1.0 / total;
  });

  try {
    const std::size_t length = static_cast<std::size_t>(n) + 1 + (model.arma() ? kTailProbe : 0);
    const TheoreticalCoefficients coeffs = theoretical_coefficients(model, length, policy);
    double head = 0.0;
    double tail = 0.0;
    for (std::size_t k = 0; k < coeffs.a.size(); ++k) {
      (k <= static_cast<std::size_t>(n) ? head : tail) += std::norm(coeffs.a[k]);
    }
    report.reference = 1.0 / head;
    if (model.arma() != nullptr) {
      report.tail_mass = tail;
      report.kolmogorov = tail < policy.tolerance;
    }
  } catch (const ConvergenceError&) {
  } catch (const ValidationError&) {
  }
  return report;
}

double wold_msteps(const ProcessModel& model, long n, const LimitPolicy& policy) {
  if (n < 0) {
    throw ValidationError("n must be nonnegative");
  }
  const TheoreticalCoefficients coeffs = theoretical_coefficients(model, static_cast<std::size_t>(n) + 1, policy);
  double total = 0.0;
  for (const Complex& b : coeffs.b) {
    total += std::norm(b);
  }
  return total;
}

double truncated_msteps(const ProcessModel& model, long n, long m) {
  if (n < 0 || m < 1) {
    throw ValidationError("truncated m-step prediction needs n >= 0 and m >= 1");
  }
  const IndexWindow window(n + m, 0);
  const ComplexVector gamma = autocovariances(model, window.size() - 1);
  std::vector<long> observed;
  for (long k = -n - m; k <= -n - 1; ++k) {
    observed.push_back(k);
  }
  return solve_normal_equations(toeplitz_matrix(gamma, window.size()), window, 0, observed).sigma2;
}

LimitReport wold_msteps_sweep(const ProcessModel& model, long n, const LimitPolicy& policy) {
  if (n < 0) {
    throw ValidationError("n must be nonnegative");
  }
  const long last = static_cast<long>(lag_limit(model, policy.cap + static_cast<std::size_t>(n))) - n;
  LimitReport report = sweep(sweep_start(policy, 1, last), last, policy.tolerance,
                             [&](long m) { return truncated_msteps(model, n, m); });
  try {
    report.reference = wold_msteps(model, n, policy);
  } catch (const ConvergenceError&) {
  } catch (const ValidationError&) {
  }
  return report;
}

SingleMissingValue single_missing_value(const ProcessModel& model, long m, long u) {
  if (u < 1 || u > m) {
    throw ValidationError("single missing value needs 1 <= u <= m, got u = " + std::to_string(u) +
                          ", m = " + std::to_string(m));
  }
  const IndexWindow window(m, 0);
  const ComplexVector gamma = autocovariances(model, static_cast<std::size_t>(m));
  // rows[r + u] holds row r of the A-table for r = -u..0.
  std::vector<ComplexVector> rows;
  LevinsonDurbin recursion(gamma);
  for (long r = -u; r <= 0; ++r) {
    recursion.advance_to(static_cast<std::size_t>(m + r));
    rows.push_back(recursion.normalized_row());
  }
  const auto table = [&](long r, long k) {
    return rows[static_cast<std::size_t>(r + u)][static_cast<std::size_t>(r - k)];
  };
  const auto inverse_entry = [&](long i, long j) {
    Complex sum = 0.0;
    for (long r = std::max(i, j); r <= 0; ++r) {
      sum += std::conj(table(r, i)) * table(r, j);
    }
    return sum;
  };

  double numerator = 0.0;  // sum_{k=0}^{u} |a_{u-k,m-k}|^2
  for (long k = 0; k <= u; ++k) {
    numerator += std::norm(table(-k, -u));
  }
  const Complex a0 = table(0, 0);
  const double delta = std::norm(a0) * (numerator - std::norm(table(0, -u)));

  SingleMissingValue out;
  out.alpha_prime_0 = numerator / delta;
  out.alpha_prime_u = -std::conj(a0) * table(0, -u) / delta;
  PredictionResult& result = out.result;
  result.window = window;
  result.target = 0;
  result.sigma2 = out.alpha_prime_0.real();
  result.dual_indices = {-u, 0};
  result.alpha_prime = {out.alpha_prime_u, out.alpha_prime_0};
  for (long k = -m; k <= -1; ++k) {
    if (k == -u) {
      continue;
    }
    result.observed.push_back(k);
    result.alpha.push_back(-(out.alpha_prime_u * inverse_entry(-u, k) + out.alpha_prime_0 * inverse_entry(0, k)));
  }
  result.innovation_error.assign(window.size(), 0.0);
  for (long r = -u; r <= 0; ++r) {
    Complex value = out.alpha_prime_u * std::conj(table(r, -u));
    if (r == 0) {
      value += out.alpha_prime_0 * std::conj(a0);
    }
    result.innovation_error[static_cast<std::size_t>(window.offset(r))] = value;
  }
  return out;
}

double single_missing_value_limit(const ProcessModel& model, long u) {
  if (u < 1) {
    throw ValidationError("u must be at least 1");
  }
  const TheoreticalCoefficients coeffs = theoretical_coefficients(model, static_cast<std::size_t>(u) + 1);
  double head = 0.0;
  for (long k = 0; k < u; ++k) {
    head += std::norm(coeffs.a[static_cast<std::size_t>(k)]);
  }
  const double full = head + std::norm(coeffs.a[static_cast<std::size_t>(u)]);
  return std::norm(coeffs.b[0]) * full / head;
}

LimitReport single_missing_sweep(const ProcessModel& model, long u, const LimitPolicy& policy) {
  if (u < 1) {
    throw ValidationError("u must be at least 1");
  }
  const long last = static_cast<long>(lag_limit(model, policy.cap));
  LimitReport report = sweep(sweep_start(policy, u, last), last, policy.tolerance,
                             [&](long m) { return single_missing_value(model, m, u).result.sigma2; });
  try {
    report.reference = single_missing_value_limit(model, u);
  } catch (const ConvergenceError&) {
  } catch (const ValidationError&) {
  }
  return report;
}

PredictionResult finite_yaglom(const ProcessModel& model, long m, long n, std::vector<long> missing) {
  if (missing.empty()) {
    throw ValidationError("the Yaglom problem needs at least one missing index");
  }
  const IndexWindow window(m, n);
  const IndexPartition part = IndexPartition::from_missing(window, 0, std::move(missing));
  const ComplexVector gamma = autocovariances(model, window.size() - 1);
  return predict_via_duality(levinson_ar_table(gamma, window), part);
}

WoldReduction wold_reduction_predict(const ProcessModel& model, long n, std::vector<long> missing, long truncation) {
  const IndexWindow window(truncation, n);
  const IndexPartition part = IndexPartition::from_missing(window, 0, std::move(missing));
  const TheoreticalCoefficients coeffs = theoretical_coefficients(model, window.size());
  const auto size = static_cast<Eigen::Index>(window.size());
  Matrix b_lower = Matrix::Zero(size, size);
  Matrix a_lower = Matrix::Zero(size, size);
  for (Eigen::Index i = 0; i < size; ++i) {
    for (Eigen::Index k = 0; k <= i; ++k) {
      b_lower(i, k) = coeffs.b[static_cast<std::size_t>(i - k)];
      a_lower(i, k) = coeffs.a[static_cast<std::size_t>(i - k)];
    }
  }
  // g_{i,j} = sum_{k=-m}^{min(i,j)} b_{i-k} conj(b_{j-k}).
  const Matrix g = b_lower * b_lower.adjoint();
  const ArTable table(window, a_lower);

  WoldReduction out;
  out.result = predict_via_duality(table, part);
  out.sigma2_dual = out.result.sigma2;
  out.sigma2_normal = solve_normal_equations(g, window, 0, part.observed).sigma2_from_inverse;
  const Matrix dense = g.partialPivLu().inverse();
  out.inverse_residual = (table.inverse() - dense).cwiseAbs().maxCoeff() / dense.cwiseAbs().maxCoeff();
  return out;
}

SeriesPredictor predictor_series(const ProcessModel& model, long n, std::vector<long> missing, long truncation) {
  if (n < 0 || truncation < 0) {
    throw ValidationError("n and the truncation must be nonnegative");
  }
  const std::vector<long> dual_indices = sorted_dual_indices(std::move(missing));
  if (dual_indices.front() < -truncation || dual_indices.back() > n) {
    throw ValidationError("missing indices must lie in the window {-m..n}");
  }
  const long lowest = -2 * truncation - 1;
  const TheoreticalCoefficients coeffs =
      theoretical_coefficients(model, static_cast<std::size_t>(n - lowest) + 1);
  const ComplexVector& a = coeffs.a;
  // g^{i,j} = sum_{k = max(i,j)}^{n} conj(a_{k-i}) a_{k-j}.
  const auto g_inverse = [&](long i, long j) {
    Complex sum = 0.0;
    for (long k = std::max(i, j); k <= n; ++k) {
      sum += std::conj(a[static_cast<std::size_t>(k - i)]) * a[static_cast<std::size_t>(k - j)];
    }
    return sum;
  };
  const Vector alpha_prime = solve_dual_system(dual_indices, g_inverse);

  // weights[j - lowest] = sum_i alpha'_i g^{i,j}.
  const long span = n - lowest + 1;
  ComplexVector weights(static_cast<std::size_t>(span));
#pragma omp parallel for schedule(dynamic, 16)
  for (long offset = 0; offset < span; ++offset) {
    Complex sum = 0.0;
    for (std::size_t r = 0; r < dual_indices.size(); ++r) {
      sum += alpha_prime(static_cast<Eigen::Index>(r)) * g_inverse(dual_indices[r], lowest + offset);
    }
    weights[static_cast<std::size_t>(offset)] = sum;
  }

  SeriesPredictor out;
  out.dual_indices = dual_indices;
  out.error_dual_coefficients.assign(alpha_prime.data(), alpha_prime.data() + alpha_prime.size());
  out.truncation = truncation;
  out.sigma2 = alpha_prime(std::find(dual_indices.begin(), dual_indices.end(), 0L) - dual_indices.begin()).real();
  for (long j = lowest; j <= n; ++j) {
    const Complex w = weights[static_cast<std::size_t>(j - lowest)];
    if (std::binary_search(dual_indices.begin(), dual_indices.end(), j)) {
      if (j != 0) {
        out.missing_weight = std::max(out.missing_weight, std::abs(w));
      }
    } else if (j < -truncation) {
      out.tail_magnitude = std::max(out.tail_magnitude, std::abs(w));
    } else {
      out.observed_coefficients.emplace(j, -w);
    }
  }
  out.tail_warning = out.tail_magnitude > kTailWarning;
  return out;
}

SeriesPredictor interpolator_series(const ProcessModel& model, std::vector<long> missing, long truncation) {
  if (truncation < 1) {
    throw ValidationError("truncation must be positive");
  }
  const std::vector<long> dual_indices = sorted_dual_indices(std::move(missing));
  const long low = dual_indices.front() - 2 * truncation;
  const long high = dual_indices.back() + 2 * truncation;
  const ComplexVector lags =
      inverse_autocovariances(model, static_cast<std::size_t>(high - low), static_cast<std::size_t>(truncation));
  const auto g_inverse = [&](long i, long j) { return hermitian_lag(lags, i - j); };
  const Vector alpha_prime = solve_dual_system(dual_indices, g_inverse);

  SeriesPredictor out;
  out.dual_indices = dual_indices;
  out.error_dual_coefficients.assign(alpha_prime.data(), alpha_prime.data() + alpha_prime.size());
  out.truncation = truncation;
  out.sigma2 = alpha_prime(std::find(dual_indices.begin(), dual_indices.end(), 0L) - dual_indices.begin()).real();
  for (long j = low; j <= high; ++j) {
    Complex w = 0.0;
    for (std::size_t r = 0; r < dual_indices.size(); ++r) {
      w += alpha_prime(static_cast<Eigen::Index>(r)) * g_inverse(dual_indices[r], j);
    }
    if (std::binary_search(dual_indices.begin(), dual_indices.end(), j)) {
      if (j != 0) {
        out.missing_weight = std::max(out.missing_weight, std::abs(w));
      }
    } else if (j < dual_indices.front() - truncation || j > dual_indices.back() + truncation) {
      out.tail_magnitude = std::max(out.tail_magnitude, std::abs(w));
    } else {
      out.observed_coefficients.emplace(j, -w);
    }
  }
  out.tail_warning = out.tail_magnitude > kTailWarning;
  return out;
}

SeriesDiagnostics series_diagnostics(const ProcessModel& model, const SeriesPredictor& series, long m, long n) {
  const IndexWindow window(m, n);
  std::vector<long> missing;
  for (const long i : series.dual_indices) {
    if (i != 0) {
      missing.push_back(i);
    }
  }
  const IndexPartition part = IndexPartition::from_missing(window, 0, missing);
  const ComplexVector gamma = autocovariances(model, window.size() - 1);

  Vector error = Vector::Zero(static_cast<Eigen::Index>(window.size()));
  error(window.offset(0)) = 1.0;
  for (const auto& [j, c] : series.observed_coefficients) {
    if (window.contains(j)) {
      error(window.offset(j)) = -c;
    }
  }
  SeriesDiagnostics out;
  out.applied_sigma2 = (error.transpose() * toeplitz_matrix(gamma, window.size()) * error.conjugate()).value().real();

  const PredictionResult finite = predict_via_duality(levinson_ar_table(gamma, window), part);
  for (std::size_t k = 0; k < finite.observed.size(); ++k) {
    const auto it = series.observed_coefficients.find(finite.observed[k]);
    const Complex c = it == series.observed_coefficients.end() ? Complex(0.0) : it->second;
    out.finite_window_deviation = std::max(out.finite_window_deviation, std::abs(c - finite.alpha[k]));
  }
  return out;
}

}  // namespace dualpredict
