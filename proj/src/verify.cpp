#include "dualpredict/verify.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <vector>

namespace dualpredict {

namespace {

// Instance seeds decorrelated from the corpus seed.
std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

void missing_sets(const std::vector<long>& pool, std::size_t limit, std::vector<std::vector<long>>& out) {
  out.assign(1, {});
  for (const long i : pool) {
    const std::size_t count = out.size();
    for (std::size_t s = 0; s < count; ++s) {
      if (out[s].size() < limit) {
        auto next = out[s];
        next.push_back(i);
        out.push_back(std::move(next));
      }
    }
  }
}

VerifySummary check_instance(const Matrix& entries, std::size_t max_missing) {
  VerifySummary s;
  s.instances = 1;
  const IndexWindow window(0, static_cast<long>(entries.rows()) - 1);
  const CovarianceMatrix cov(window, entries);
  const Matrix inverse = cov.inverse();

  const DualRepresentation d = dual(cov);
  s.max_biorthogonality = d.biorthogonality_residual(entries);
  s.max_involution = involution_residual(cov);
  for (long j = 0; j <= window.n; ++j) {
    const ComplexVector loo = standardized_interpolation_error(cov, j);
    const ComplexVector row = d.row(j);
    for (std::size_t k = 0; k < loo.size(); ++k) {
      s.max_row_deviation = std::max(s.max_row_deviation, std::abs(loo[k] - row[k]));
    }
  }

  std::vector<std::vector<long>> sets;
  for (long target = 0; target <= window.n; ++target) {
    std::vector<long> pool;
    for (long i = 0; i <= window.n; ++i) {
      if (i != target) {
        pool.push_back(i);
      }
    }
    missing_sets(pool, max_missing, sets);
    for (const auto& missing : sets) {
      const IndexPartition part = IndexPartition::from_missing(window, target, missing);
      const PredictionResult via_dual = predict_via_duality(cov, part);
      const NormalEquations primal = solve_normal_equations(entries, window, target, part.observed);
      const NormalEquations secondary = solve_normal_equations(inverse, window, target, part.missing);
      s.max_sigma2_deviation = std::max(s.max_sigma2_deviation, std::abs(via_dual.sigma2 - primal.sigma2));
      for (std::size_t k = 0; k < primal.alpha.size(); ++k) {
        s.max_alpha_deviation = std::max(s.max_alpha_deviation, std::abs(via_dual.alpha[k] - primal.alpha[k]));
      }
      s.max_product_deviation = std::max(s.max_product_deviation, std::abs(primal.sigma2 * secondary.sigma2 - 1.0));
      ++s.partitions;
    }
  }
  return s;
}

void merge(VerifySummary& into, const VerifySummary& from) {
  into.instances += from.instances;
  into.partitions += from.partitions;
  into.factorization_failures += from.factorization_failures;
  into.max_sigma2_deviation = std::max(into.max_sigma2_deviation, from.max_sigma2_deviation);
  into.max_alpha_deviation = std::max(into.max_alpha_deviation, from.max_alpha_deviation);
  into.max_product_deviation = std::max(into.max_product_deviation, from.max_product_deviation);
  into.max_biorthogonality = std::max(into.max_biorthogonality, from.max_biorthogonality);
  into.max_involution = std::max(into.max_involution, from.max_involution);
  into.max_row_deviation = std::max(into.max_row_deviation, from.max_row_deviation);
}

}  // namespace

double SeededRandom::uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

double SeededRandom::normal() {
  // 1 - u keeps the logarithm finite.
  const double u1 = 1.0 - uniform();
  const double u2 = uniform();
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

Matrix random_hermitian_pd(SeededRandom& rng, Eigen::Index size) {
  Matrix g(size, size);
  for (Eigen::Index j = 0; j < size; ++j) {
    for (Eigen::Index i = 0; i < size; ++i) {
      const double re = rng.normal();
      g(i, j) = Complex(re, rng.normal());
    }
  }
  const Matrix q = Eigen::HouseholderQR<Matrix>(g).householderQ();
  Eigen::VectorXd eigenvalues(size);
  for (Eigen::Index i = 0; i < size; ++i) {
    eigenvalues(i) = 0.1 + 0.9 * rng.uniform();
  }
  const Matrix out = q * eigenvalues.cast<Complex>().asDiagonal() * q.adjoint();
  return (out + out.adjoint()) / 2.0;
}

bool VerifySummary::prediction_passed(const VerifyOptions& options) const {
  return factorization_failures == 0 && max_sigma2_deviation <= options.tolerance &&
         max_alpha_deviation <= options.tolerance && max_product_deviation <= options.tolerance;
}

bool VerifySummary::dual_passed(const VerifyOptions& options) const {
  return factorization_failures == 0 && max_biorthogonality <= options.biorthogonality_tolerance &&
         max_involution <= options.tolerance && max_row_deviation <= options.tolerance;
}

VerifySummary run_verification(const VerifyOptions& options) {
  if (options.min_size < 1 || options.max_size < options.min_size) {
    throw ValidationError("verify corpus needs 1 <= min_size <= max_size");
  }
  const auto count = static_cast<long>(options.instances);
  const std::uint64_t sizes = options.max_size - options.min_size + 1;
  std::vector<VerifySummary> results(options.instances);
#pragma omp parallel for schedule(dynamic)
  for (long i = 0; i < count; ++i) {
    SeededRandom rng(splitmix64(options.seed ^ splitmix64(static_cast<std::uint64_t>(i))));
    const auto size = static_cast<Eigen::Index>(options.min_size + rng.bits() % sizes);
    const Matrix entries = random_hermitian_pd(rng, size);
    try {
      results[static_cast<std::size_t>(i)] = check_instance(entries, options.max_missing);
    } catch (const PositiveDefinitenessError&) {
      results[static_cast<std::size_t>(i)].instances = 1;
      results[static_cast<std::size_t>(i)].factorization_failures = 1;
    }
  }
  VerifySummary total;
  for (const VerifySummary& r : results) {
    merge(total, r);
  }
  return total;
}

}  // namespace dualpredict
