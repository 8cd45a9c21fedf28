#include "dualpredict/types.hpp"

#include <sstream>

namespace dualpredict {

namespace {

std::string pivot_message(long index, double pivot, double threshold) {
  std::ostringstream os;
  os.precision(17);
  os << "covariance matrix is not positive definite: pivot at index " << index << " is " << pivot
     << " (threshold " << threshold << ")";
  return os.str();
}

std::string convergence_message(const std::string& what, double achieved) {
  std::ostringstream os;
  os.precision(17);
  os << what << " (achieved " << achieved << ")";
  return os.str();
}

}  // namespace

PositiveDefinitenessError::PositiveDefinitenessError(long index, double pivot, double threshold)
    : std::runtime_error(pivot_message(index, pivot, threshold)), index_(index), pivot_(pivot) {}

ConvergenceError::ConvergenceError(const std::string& what, double achieved)
    : std::runtime_error(convergence_message(what, achieved)), achieved_(achieved) {}

IndexWindow::IndexWindow(long past, long future) : m(past), n(future) {
  if (past < 0 || future < 0) {
    throw ValidationError("window extents must be nonnegative");
  }
}

}  // namespace dualpredict
