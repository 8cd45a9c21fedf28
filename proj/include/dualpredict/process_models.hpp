#pragma once

#include <cstddef>
#include <span>
#include <variant>
#include <vector>

#include "dualpredict/types.hpp"

namespace dualpredict {

/// Causal ARMA(p, q):  X_t - sum phi_j X_{t-j} = e_t + sum theta_j e_{t-j},  Var(e_t) = sigma2.
class ArmaModel {
 public:
  ArmaModel(ComplexVector ar, ComplexVector ma, double sigma2);

  [[nodiscard]] const ComplexVector& ar() const noexcept { return ar_; }
  [[nodiscard]] const ComplexVector& ma() const noexcept { return ma_; }
  [[nodiscard]] double sigma2() const noexcept { return sigma2_; }

  /// Largest modulus among the reciprocal roots of the AR polynomial (< 1 for a causal model).
  [[nodiscard]] double ar_spectral_radius() const noexcept { return ar_radius_; }
  /// Largest modulus among the reciprocal roots of the MA polynomial.
  [[nodiscard]] double ma_spectral_radius() const noexcept { return ma_radius_; }
  [[nodiscard]] bool invertible() const noexcept;

  /// psi_0..psi_{length-1} of X_t = sum psi_j e_{t-j}.
  [[nodiscard]] ComplexVector psi_weights(std::size_t length) const;
  /// gamma_0..gamma_{max_lag}.
  [[nodiscard]] ComplexVector autocovariances(std::size_t max_lag) const;
  /// f(lambda) = sigma2 |theta(e^{i lambda})|^2 / |phi(e^{i lambda})|^2.
  [[nodiscard]] double spectral_density(double lambda) const;

 private:
  ComplexVector ar_;
  ComplexVector ma_;
  double sigma2_;
  double ar_radius_ = 0.0;
  double ma_radius_ = 0.0;
  ComplexVector head_;  // gamma_0..gamma_p
};

/// Explicit gamma_0..gamma_L; negative lags follow from Hermitian symmetry.
class AutocovarianceModel {
 public:
  explicit AutocovarianceModel(ComplexVector gamma);

  [[nodiscard]] const ComplexVector& gamma() const noexcept { return gamma_; }
  [[nodiscard]] std::size_t max_lag() const noexcept { return gamma_.size() - 1; }

 private:
  ComplexVector gamma_;
};

/// Spectral density sampled on the inclusive uniform grid lambda_i = -pi + 2 pi i / (G - 1).
class SpectrumModel {
 public:
  explicit SpectrumModel(std::vector<double> values);

  [[nodiscard]] const std::vector<double>& values() const noexcept { return values_; }
  [[nodiscard]] double grid_point(std::size_t i) const noexcept;

 private:
  std::vector<double> values_;
};

/// A stationary process description that yields gamma_k on demand.
class ProcessModel {
 public:
  using Variant = std::variant<ArmaModel, AutocovarianceModel, SpectrumModel>;

  ProcessModel(ArmaModel model) : model_(std::move(model)) {}                // NOLINT
  ProcessModel(AutocovarianceModel model) : model_(std::move(model)) {}      // NOLINT
  ProcessModel(SpectrumModel model) : model_(std::move(model)) {}            // NOLINT

  static ProcessModel white_noise(double sigma2 = 1.0);
  static ProcessModel ar1(Complex phi, double sigma2 = 1.0);
  static ProcessModel ma1(Complex theta, double sigma2 = 1.0);

  [[nodiscard]] const Variant& variant() const noexcept { return model_; }
  [[nodiscard]] const ArmaModel* arma() const noexcept { return std::get_if<ArmaModel>(&model_); }

 private:
  Variant model_;
};

/// Limit policy for finite-section approximations: windows double from
/// `start` until successive coefficient vectors differ by less than
/// `tolerance` in max-norm, giving up after `cap`.
struct LimitPolicy {
  std::size_t start = 64;
  std::size_t cap = 4096;
  double tolerance = 1e-10;
};

/// Default number of trapezoid nodes for spectral integrals.
inline constexpr std::size_t kDefaultQuadratureGrid = std::size_t{1} << 14;

/// MA coefficients b_k and AR coefficients a_k (convolution inverses, b_0 > 0).
struct TheoreticalCoefficients {
  ComplexVector b;
  ComplexVector a;
  /// Window of the finite-section limit; 0 when computed from a model recursion.
  std::size_t window = 0;
  /// Last successive max-norm difference of the finite-section limit.
  double achieved_residual = 0.0;

  /// max_j | sum_{k<=j} b_k a_{j-k} - delta_{0j} |.
  [[nodiscard]] double convolution_residual() const;
};

[[nodiscard]] Complex autocovariance(const ProcessModel& model, long lag);
/// gamma_0..gamma_{max_lag} in one pass.
[[nodiscard]] ComplexVector autocovariances(const ProcessModel& model, std::size_t max_lag);

[[nodiscard]] TheoreticalCoefficients theoretical_coefficients(const ProcessModel& model,
                                                               std::size_t length,
                                                               const LimitPolicy& policy = {});

/// Convolution inverse of a sequence with nonzero leading term.
[[nodiscard]] ComplexVector convolution_inverse(std::span<const Complex> sequence);

/// gamma^k = sum_{j=0}^{truncation} conj(a_j) a_{j+|k|} (conjugated for k < 0).
/// Throws ConvergenceError when sum_{j>truncation} |a_j|^2 exceeds `tail_tolerance`.
[[nodiscard]] Complex inverse_autocovariance(const ProcessModel& model, long lag,
                                             std::size_t truncation,
                                             double tail_tolerance = 1e-10);

/// gamma^0..gamma^{max_lag} from one AR-coefficient sequence, with the same tail check.
[[nodiscard]] ComplexVector inverse_autocovariances(const ProcessModel& model, std::size_t max_lag,
                                                    std::size_t truncation, double tail_tolerance = 1e-10);
/// gamma^k by trapezoidal quadrature of f^{-1}; ARMA and sampled-spectrum models only.
[[nodiscard]] Complex inverse_autocovariance_quadrature(const ProcessModel& model, long lag,
                                                        std::size_t grid_points = kDefaultQuadratureGrid);

/// f(lambda) for ARMA models.
[[nodiscard]] double spectral_density(const ProcessModel& model, double lambda);

}  // namespace dualpredict
