#include "dualpredict/process_models.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "dualpredict/kernels.hpp"
#include "dualpredict/toeplitz_linalg.hpp"

namespace dualpredict {

namespace {

constexpr double kRootMargin = 1e-8;

// Largest eigenvalue modulus of the companion matrix of
// z^p - c_1 z^{p-1} - ... - c_p, i.e. the reciprocal-root radius of 1 - sum c_j z^j.
double companion_radius(const ComplexVector& c) {
  const auto p = static_cast<Eigen::Index>(c.size());
  if (p == 0) {
    return 0.0;
  }
  Matrix companion = Matrix::Zero(p, p);
  for (Eigen::Index j = 0; j < p; ++j) {
    companion(0, j) = c[static_cast<std::size_t>(j)];
  }
  for (Eigen::Index i = 1; i < p; ++i) {
    companion(i, i - 1) = 1.0;
  }
  Eigen::ComplexEigenSolver<Matrix> solver(companion, false);
  return solver.eigenvalues().cwiseAbs().maxCoeff();
}

ComplexVector trim_trailing_zeros(ComplexVector v) {
  while (!v.empty() && v.back() == Complex(0.0)) {
    v.pop_back();
  }
  return v;
}

Complex conj_lag(const ComplexVector& gamma, long lag) {
  return lag >= 0 ? gamma[static_cast<std::size_t>(lag)] : std::conj(gamma[static_cast<std::size_t>(-lag)]);
}

ComplexVector spectrum_lags(const SpectrumModel& model, std::size_t first, std::size_t last) {
  ComplexVector out;
  out.reserve(last - first + 1);
  for (std::size_t k = first; k <= last; ++k) {
    out.push_back(kernels::parallel::trapezoid_fourier(model.values(), static_cast<long>(k)));
  }
  return out;
}

// Finite-section limit of the bottom row of A as the window grows.
TheoreticalCoefficients finite_section_limit(const ProcessModel& model, std::size_t length,
                                             const LimitPolicy& policy) {
  const auto* explicit_model = std::get_if<AutocovarianceModel>(&model.variant());
  const auto* spectrum = std::get_if<SpectrumModel>(&model.variant());
  const std::size_t available = explicit_model ? explicit_model->max_lag() + 1 : policy.cap;
  const std::size_t cap = std::min(policy.cap, available);
  if (length > cap) {
    throw ValidationError("requested " + std::to_string(length) +
                          " coefficients but the finite-section window is capped at " + std::to_string(cap));
  }

  std::vector<std::size_t> windows;
  for (std::size_t w = std::max(length, std::min(policy.start, cap / 2)); w <= cap; w *= 2) {
    windows.push_back(w);
  }
  if (windows.empty() || windows.back() < cap) {
    windows.push_back(cap);
  }

  LevinsonDurbin recursion(explicit_model ? explicit_model->gamma()
                                          : spectrum_lags(*spectrum, 0, windows.front() - 1));
  ComplexVector previous;
  double residual = std::numeric_limits<double>::infinity();
  for (const std::size_t w : windows) {
    if (spectrum != nullptr && recursion.available_lags() < w) {
      recursion.append_lags(spectrum_lags(*spectrum, recursion.available_lags(), w - 1));
    }
    recursion.advance_to(w - 1);
    ComplexVector row = recursion.normalized_row();
    row.resize(length);
    if (!previous.empty()) {
      residual = 0.0;
      for (std::size_t k = 0; k < length; ++k) {
        residual = std::max(residual, std::abs(row[k] - previous[k]));
      }
      if (residual < policy.tolerance) {
        TheoreticalCoefficients out;
        out.a = std::move(row);
        out.b = convolution_inverse(out.a);
        out.window = w;
        out.achieved_residual = residual;
        return out;
      }
    }
    previous = std::move(row);
  }
  throw ConvergenceError("finite-section limit of the AR coefficients did not converge by window " +
                             std::to_string(cap),
                         residual);
}

}  // namespace

ArmaModel::ArmaModel(ComplexVector ar, ComplexVector ma, double sigma2)
    : ar_(trim_trailing_zeros(std::move(ar))), ma_(trim_trailing_zeros(std::move(ma))), sigma2_(sigma2) {
  if (!(sigma2_ > 0.0) || !std::isfinite(sigma2_)) {
    throw ValidationError("ARMA innovation variance must be positive");
  }
  ar_radius_ = companion_radius(ar_);
  if (ar_radius_ >= 1.0 - kRootMargin) {
    throw ValidationError("ARMA model is not causal: AR polynomial has a root in the closed unit disc");
  }
  ComplexVector neg_ma(ma_.size());
  std::transform(ma_.begin(), ma_.end(), neg_ma.begin(), [](Complex t) { return -t; });
  ma_radius_ = companion_radius(neg_ma);

  // Real-linear system for gamma_0..gamma_p:
  //   gamma_k - sum_j phi_j gamma_{k-j} = sigma2 sum_{j=k}^{q} theta_j conj(psi_{j-k}),
  // with gamma_{-d} = conj(gamma_d). Unknowns: Re gamma_0, (Re, Im) gamma_1..gamma_p.
  const std::size_t p = ar_.size();
  const std::size_t q = ma_.size();
  const ComplexVector psi = psi_weights(q + 1);
  ComplexVector rhs(p + 1, 0.0);
  for (std::size_t k = 0; k <= std::min(p, q); ++k) {
    for (std::size_t j = k; j <= q; ++j) {
      const Complex theta = j == 0 ? Complex(1.0) : ma_[j - 1];
      rhs[k] += sigma2_ * theta * std::conj(psi[j - k]);
    }
  }
  const auto unknowns = static_cast<Eigen::Index>(2 * p + 1);
  const auto equations = static_cast<Eigen::Index>(2 * (p + 1));
  auto lhs = [&](const Eigen::VectorXd& x) {
    ComplexVector gamma(p + 1);
    gamma[0] = x(0);
    for (std::size_t d = 1; d <= p; ++d) {
      gamma[d] = Complex(x(static_cast<Eigen::Index>(2 * d - 1)), x(static_cast<Eigen::Index>(2 * d)));
    }
    Eigen::VectorXd out(equations);
    for (std::size_t k = 0; k <= p; ++k) {
      Complex value = gamma[k];
      for (std::size_t j = 1; j <= p; ++j) {
        value -= ar_[j - 1] * conj_lag(gamma, static_cast<long>(k) - static_cast<long>(j));
      }
      out(static_cast<Eigen::Index>(2 * k)) = value.real();
      out(static_cast<Eigen::Index>(2 * k + 1)) = value.imag();
    }
    return out;
  };
  Eigen::MatrixXd system(equations, unknowns);
  for (Eigen::Index u = 0; u < unknowns; ++u) {
    system.col(u) = lhs(Eigen::VectorXd::Unit(unknowns, u));
  }
  Eigen::VectorXd target(equations);
  for (std::size_t k = 0; k <= p; ++k) {
    target(static_cast<Eigen::Index>(2 * k)) = rhs[k].real();
    target(static_cast<Eigen::Index>(2 * k + 1)) = rhs[k].imag();
  }
  const Eigen::VectorXd x = system.colPivHouseholderQr().solve(target);
  head_.assign(p + 1, 0.0);
  head_[0] = x(0);
  for (std::size_t d = 1; d <= p; ++d) {
    head_[d] = Complex(x(static_cast<Eigen::Index>(2 * d - 1)), x(static_cast<Eigen::Index>(2 * d)));
  }
}

bool ArmaModel::invertible() const noexcept { return ma_radius_ <= 1.0 + kRootMargin; }

ComplexVector ArmaModel::psi_weights(std::size_t length) const {
  ComplexVector psi(length, 0.0);
  for (std::size_t j = 0; j < length; ++j) {
    Complex value = j == 0 ? Complex(1.0) : (j <= ma_.size() ? ma_[j - 1] : Complex(0.0));
    for (std::size_t i = 1; i <= std::min(j, ar_.size()); ++i) {
      value += ar_[i - 1] * psi[j - i];
    }
    psi[j] = value;
  }
  return psi;
}

ComplexVector ArmaModel::autocovariances(std::size_t max_lag) const {
  const std::size_t p = ar_.size();
  const std::size_t q = ma_.size();
  ComplexVector gamma(max_lag + 1, 0.0);
  std::copy_n(head_.begin(), std::min(head_.size(), max_lag + 1), gamma.begin());
  if (max_lag <= p) {
    return gamma;
  }
  const ComplexVector psi = psi_weights(q + 1);
  for (std::size_t k = p + 1; k <= max_lag; ++k) {
    Complex value = 0.0;
    for (std::size_t j = 1; j <= p; ++j) {
      value += ar_[j - 1] * gamma[k - j];
    }
    for (std::size_t j = k; j <= q; ++j) {
      value += sigma2_ * ma_[j - 1] * std::conj(psi[j - k]);
    }
    gamma[k] = value;
  }
  return gamma;
}

double ArmaModel::spectral_density(double lambda) const {
  const Complex z = std::polar(1.0, lambda);
  Complex num = 1.0;
  Complex den = 1.0;
  Complex power = 1.0;
  for (const Complex& theta : ma_) {
    power *= z;
    num += theta * power;
  }
  power = 1.0;
  for (const Complex& phi : ar_) {
    power *= z;
    den -= phi * power;
  }
  return sigma2_ * std::norm(num) / std::norm(den);
}

AutocovarianceModel::AutocovarianceModel(ComplexVector gamma) : gamma_(std::move(gamma)) {
  if (gamma_.empty()) {
    throw ValidationError("autocovariance sequence must contain gamma_0");
  }
  const Complex g0 = gamma_.front();
  if (!(g0.real() > 0.0) || std::abs(g0.imag()) > 1e-12 * g0.real()) {
    throw ValidationError("gamma_0 must be real and positive");
  }
  gamma_.front() = g0.real();
}

SpectrumModel::SpectrumModel(std::vector<double> values) : values_(std::move(values)) {
  if (values_.size() < 3) {
    throw ValidationError("sampled spectral density needs at least 3 grid points");
  }
  for (const double v : values_) {
    if (!(v > 0.0) || !std::isfinite(v)) {
      throw ValidationError("sampled spectral density values must be strictly positive");
    }
  }
}

double SpectrumModel::grid_point(std::size_t i) const noexcept {
  return -std::numbers::pi + 2.0 * std::numbers::pi * static_cast<double>(i) /
                                 static_cast<double>(values_.size() - 1);
}

ProcessModel ProcessModel::white_noise(double sigma2) { return ArmaModel({}, {}, sigma2); }
ProcessModel ProcessModel::ar1(Complex phi, double sigma2) { return ArmaModel({phi}, {}, sigma2); }
ProcessModel ProcessModel::ma1(Complex theta, double sigma2) { return ArmaModel({}, {theta}, sigma2); }

double TheoreticalCoefficients::convolution_residual() const {
  double worst = 0.0;
  const std::size_t length = std::min(a.size(), b.size());
  for (std::size_t j = 0; j < length; ++j) {
    Complex sum = 0.0;
    for (std::size_t k = 0; k <= j; ++k) {
      sum += b[k] * a[j - k];
    }
    worst = std::max(worst, std::abs(sum - (j == 0 ? Complex(1.0) : Complex(0.0))));
  }
  return worst;
}

ComplexVector autocovariances(const ProcessModel& model, std::size_t max_lag) {
  if (const auto* arma = std::get_if<ArmaModel>(&model.variant())) {
    return arma->autocovariances(max_lag);
  }
  if (const auto* acvf = std::get_if<AutocovarianceModel>(&model.variant())) {
    if (max_lag > acvf->max_lag()) {
      throw ValidationError("lag " + std::to_string(max_lag) + " exceeds the explicit autocovariance length " +
                            std::to_string(acvf->max_lag()));
    }
    return {acvf->gamma().begin(), acvf->gamma().begin() + static_cast<std::ptrdiff_t>(max_lag + 1)};
  }
  return spectrum_lags(std::get<SpectrumModel>(model.variant()), 0, max_lag);
}

Complex autocovariance(const ProcessModel& model, long lag) {
  const auto abs_lag = static_cast<std::size_t>(std::labs(lag));
  Complex value;
  if (const auto* spectrum = std::get_if<SpectrumModel>(&model.variant())) {
    value = kernels::parallel::trapezoid_fourier(spectrum->values(), static_cast<long>(abs_lag));
  } else {
    value = autocovariances(model, abs_lag).back();
  }
  return lag >= 0 ? value : std::conj(value);
}

ComplexVector convolution_inverse(std::span<const Complex> sequence) {
  if (sequence.empty() || sequence.front() == Complex(0.0)) {
    throw ValidationError("convolution inverse needs a nonzero leading coefficient");
  }
  ComplexVector inv(sequence.size(), 0.0);
  inv[0] = 1.0 / sequence[0];
  for (std::size_t j = 1; j < sequence.size(); ++j) {
    Complex sum = 0.0;
    for (std::size_t k = 1; k <= j; ++k) {
      sum += sequence[k] * inv[j - k];
    }
    inv[j] = -sum / sequence[0];
  }
  return inv;
}

TheoreticalCoefficients theoretical_coefficients(const ProcessModel& model, std::size_t length,
                                                 const LimitPolicy& policy) {
  if (length == 0) {
    throw ValidationError("coefficient length must be positive");
  }
  const auto* arma = model.arma();
  if (arma == nullptr) {
    return finite_section_limit(model, length, policy);
  }
  if (!arma->invertible()) {
    throw ValidationError("MA polynomial has a root inside the unit disc; Wold coefficients differ from psi-weights");
  }
  TheoreticalCoefficients out;
  out.b = arma->psi_weights(length);
  const double scale = std::sqrt(arma->sigma2());
  for (Complex& value : out.b) {
    value *= scale;
  }
  out.a = convolution_inverse(out.b);
  return out;
}

ComplexVector inverse_autocovariances(const ProcessModel& model, std::size_t max_lag, std::size_t truncation,
                                      double tail_tolerance) {
  // Coefficients beyond the truncation estimate the neglected tail mass.
  std::size_t length = 2 * truncation + max_lag + 2;
  LimitPolicy policy;
  if (model.arma() == nullptr) {
    if (const auto* acvf = std::get_if<AutocovarianceModel>(&model.variant())) {
      policy.cap = acvf->max_lag() + 1;
    }
    if (truncation + max_lag + 2 > policy.cap) {
      throw ValidationError("truncation " + std::to_string(truncation) + " exceeds the finite-section window cap " +
                            std::to_string(policy.cap));
    }
    length = std::min(length, policy.cap);
  }
  const TheoreticalCoefficients coeffs = theoretical_coefficients(model, length, policy);
  const ComplexVector& a = coeffs.a;
  double tail = 0.0;
  for (std::size_t j = truncation + 1; j < a.size(); ++j) {
    tail += std::norm(a[j]);
  }
  if (tail > tail_tolerance) {
    throw ConvergenceError("AR coefficients are not square-summable at truncation " + std::to_string(truncation),
                           tail);
  }
  ComplexVector out(max_lag + 1, 0.0);
  for (std::size_t shift = 0; shift <= max_lag; ++shift) {
    for (std::size_t j = 0; j <= truncation && j + shift < a.size(); ++j) {
      out[shift] += std::conj(a[j]) * a[j + shift];
    }
  }
  return out;
}

Complex inverse_autocovariance(const ProcessModel& model, long lag, std::size_t truncation,
                               double tail_tolerance) {
  const auto shift = static_cast<std::size_t>(std::labs(lag));
  const Complex value = inverse_autocovariances(model, shift, truncation, tail_tolerance).back();
  return lag >= 0 ? value : std::conj(value);
}

Complex inverse_autocovariance_quadrature(const ProcessModel& model, long lag, std::size_t grid_points) {
  std::vector<double> inverse;
  if (const auto* arma = model.arma()) {
    if (grid_points < 3) {
      throw ValidationError("quadrature grid needs at least 3 points");
    }
    inverse.resize(grid_points);
    for (std::size_t i = 0; i < grid_points; ++i) {
      const double lambda = -std::numbers::pi + 2.0 * std::numbers::pi * static_cast<double>(i) /
                                                    static_cast<double>(grid_points - 1);
      inverse[i] = 1.0 / arma->spectral_density(lambda);
    }
  } else if (const auto* spectrum = std::get_if<SpectrumModel>(&model.variant())) {
    inverse.reserve(spectrum->values().size());
    for (const double v : spectrum->values()) {
      inverse.push_back(1.0 / v);
    }
  } else {
    throw ValidationError("quadrature of 1/f needs an ARMA or sampled-spectrum model");
  }
  return kernels::parallel::trapezoid_fourier(inverse, lag);
}

double spectral_density(const ProcessModel& model, double lambda) {
  if (const auto* arma = model.arma()) {
    return arma->spectral_density(lambda);
  }
  throw ValidationError("closed-form spectral density is only available for ARMA models");
}

}  // namespace dualpredict
