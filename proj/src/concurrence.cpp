#include "entvol/concurrence.hpp"

#include <algorithm>
#include <cmath>

namespace entvol {

namespace {

constexpr double kAlphaFloor = 1e-14;

void require_two_qubit(const MatrixXcd& rho) {
  if (rho.rows() != 4 || rho.cols() != 4) {
    throw std::invalid_argument("concurrence: state must be 4x4");
  }
}

}  // namespace

double binary_entropy(double x) {
  double h = 0.0;
  if (x > 0.0) {
    h -= x * std::log(x);
  }
  if (x < 1.0) {
    h -= (1.0 - x) * std::log(1.0 - x);
  }
  return h;
}

MatrixXcd flipped_state(const MatrixXcd& rho) {
  require_two_qubit(rho);
  Eigen::Matrix4d o = Eigen::Matrix4d::Zero();
  o(0, 3) = o(3, 0) = 1.0;
  o(1, 2) = o(2, 1) = -1.0;
  return o * rho.conjugate() * o.transpose();
}

ConcurrenceResult concurrence(const MatrixXcd& rho) {
  require_two_qubit(rho);
  const MatrixXcd product = rho * flipped_state(rho);
  Eigen::ComplexEigenSolver<MatrixXcd> solver(product, false);
  if (solver.info() != Eigen::Success) {
    throw NumericalError("concurrence: eigensolver failed to converge");
  }

  ConcurrenceResult result;
  for (Index i = 0; i < 4; ++i) {
    double modulus = std::abs(solver.eigenvalues()(i));
    if (modulus < kAlphaFloor) {
      modulus = 0.0;
    }
    result.alphas(i) = std::sqrt(modulus);
  }
  std::sort(result.alphas.begin(), result.alphas.end(), std::greater<double>());

  result.concurrence = std::max(
      0.0, result.alphas(0) - result.alphas(1) - result.alphas(2) - result.alphas(3));
  result.concurrence = std::min(result.concurrence, 1.0);
  result.entanglement = eof_from_concurrence(result.concurrence);
  return result;
}

double eof_from_concurrence(double c) {
  if (!(c >= 0.0 && c <= 1.0)) {
    throw std::invalid_argument("eof_from_concurrence: C must lie in [0, 1]");
  }
  if (c == 0.0) {
    return 0.0;
  }
  return binary_entropy(0.5 * (1.0 + std::sqrt(std::max(0.0, 1.0 - c * c))));
}

}  // namespace entvol
