#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <utility>
#include <vector>

#include "dualpredict/duality.hpp"
#include "dualpredict/process_models.hpp"
#include "dualpredict/toeplitz_linalg.hpp"

namespace dualpredict {

/// Window sweep of a finite-window quantity toward its limit.
struct LimitReport {
  /// (m, value) pairs in increasing m.
  std::vector<std::pair<long, double>> values;
  double extrapolated = 0.0;
  double achieved_delta = 0.0;
  double tolerance = 0.0;
  bool converged = false;
  /// Closed-form limit from the theoretical AR/MA coefficients, when available.
  std::optional<double> reference;
  /// sum_{k>n} |a_k|^2 over the computed AR coefficients, when available.
  std::optional<double> tail_mass;
  /// Set when the tail mass is below the tolerance, so that the value also
  /// approximates the two-sided limit 1/gamma^0.
  bool kolmogorov = false;
};

/// Predictor written as a series over the observed indices.
struct SeriesPredictor {
  /// X_hat_0 = sum_j coefficient[j] X_j, j in the observed set within the truncation.
  std::map<long, Complex> observed_coefficients;
  /// M u {0}, sorted, with the error = sum_i alpha'_i (dual component i).
  std::vector<long> dual_indices;
  ComplexVector error_dual_coefficients;
  long truncation = 0;
  double sigma2 = 0.0;
  /// Largest |coefficient| in the band just beyond the truncation.
  double tail_magnitude = 0.0;
  bool tail_warning = false;
  /// Largest |coefficient| the series formula assigns to a missing index.
  double missing_weight = 0.0;
};

struct SeriesDiagnostics {
  /// Variance of X_0 minus the truncated series, evaluated under the model covariance.
  double applied_sigma2 = 0.0;
  /// max |series coefficient - finite-window duality coefficient| over the window's observed set.
  double finite_window_deviation = 0.0;
};

/// Single missing value X_{-u} in the finite past of length m: closed form from the A-table.
struct SingleMissingValue {
  PredictionResult result;
  Complex alpha_prime_0;
  Complex alpha_prime_u;
};

struct WoldReduction {
  /// Prediction of X'_0 = X_0 - X_hat_0 from X'_K; alpha over K, dual weights over M u {0}.
  PredictionResult result;
  /// 1 / (0,0)-entry of the inverse of G restricted to K u {0}.
  double sigma2_normal = 0.0;
  /// (0,0)-entry of the inverse of (g^{i,j})_{M u {0}} with g^{i,j} from the AR sums.
  double sigma2_dual = 0.0;
  /// max |g^{i,j}(AR sums) - (G^{-1})_{ij}| / max |G^{-1}| against an LU inverse.
  double inverse_residual = 0.0;
};

/// Finite Kolmogorov-Nakazi problem: K = {-m..n} \ {0}, M empty.
/// sigma^2 = (sum_{k=0}^{n} |a_{k,m+k}|^2)^{-1}.
[[nodiscard]] PredictionResult finite_kolmogorov_nakazi(const ProcessModel& model, long m, long n);

/// sigma^2(S_n) as m grows, against (sum_{k<=n} |a_k|^2)^{-1}.
[[nodiscard]] LimitReport nakazi_limit(const ProcessModel& model, long n, const LimitPolicy& policy = {});

/// (n+1)-step prediction error variance |b_0|^2 + ... + |b_n|^2.
[[nodiscard]] double wold_msteps(const ProcessModel& model, long n, const LimitPolicy& policy = {});

/// (n+1)-step error from the normal equations on the m observations X_{-n-m}..X_{-n-1}.
[[nodiscard]] double truncated_msteps(const ProcessModel& model, long n, long m);

/// Sweep of truncated_msteps in m, with wold_msteps as reference.
[[nodiscard]] LimitReport wold_msteps_sweep(const ProcessModel& model, long n, const LimitPolicy& policy = {});

[[nodiscard]] SingleMissingValue single_missing_value(const ProcessModel& model, long m, long u);

/// |b_0|^2 (sum_{k<=u} |a_k|^2) / (sum_{k<u} |a_k|^2).
[[nodiscard]] double single_missing_value_limit(const ProcessModel& model, long u);

/// Sweep of single_missing_value in m, with the closed-form limit as reference.
[[nodiscard]] LimitReport single_missing_sweep(const ProcessModel& model, long u, const LimitPolicy& policy = {});

/// Finite Yaglom problem: several missing values in {-m..n}.
[[nodiscard]] PredictionResult finite_yaglom(const ProcessModel& model, long m, long n, std::vector<long> missing);

/// S = {.., -m-1} u K through the Wold decomposition: G from the MA coefficients.
[[nodiscard]] WoldReduction wold_reduction_predict(const ProcessModel& model, long n, std::vector<long> missing,
                                                   long truncation);

/// One-sided series for S = S_n \ M with coefficients on j >= -truncation.
[[nodiscard]] SeriesPredictor predictor_series(const ProcessModel& model, long n, std::vector<long> missing,
                                               long truncation);

/// Two-sided interpolator for S = Z \ (M u {0}) from the inverse autocovariances.
[[nodiscard]] SeriesPredictor interpolator_series(const ProcessModel& model, std::vector<long> missing,
                                                  long truncation);

/// Evaluates a series predictor inside the window {-m..n}: the applied error variance
/// under the model and, for one-sided series, the deviation from the finite-window solution.
[[nodiscard]] SeriesDiagnostics series_diagnostics(const ProcessModel& model, const SeriesPredictor& series, long m,
                                                   long n);

}  // namespace dualpredict
