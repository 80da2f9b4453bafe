#pragma once

#include <complex>
#include <stdexcept>

#include <Eigen/Dense>

namespace entvol {

using Complex = std::complex<double>;
using Eigen::Index;
using Eigen::MatrixXcd;
using Eigen::MatrixXd;
using Eigen::VectorXcd;
using Eigen::VectorXd;

/// Thrown when an eigensolver or another numeric kernel fails to converge.
struct NumericalError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Bipartition of an N = n_a * n_b dimensional system. The composite basis
/// index is i = j * n_b + l with j indexing subsystem A and l indexing B
/// (row-major over A then B); partial transposition and reshaping both use
/// this convention.
struct BipartiteSplit {
  Index n_a = 0;
  Index n_b = 0;

  Index dim() const { return n_a * n_b; }
  Index min_side() const { return n_a < n_b ? n_a : n_b; }

  void require_valid() const {
    if (n_a < 2 || n_b < 2) {
      throw std::invalid_argument("BipartiteSplit: subsystem dimensions must be >= 2");
    }
  }

  void require_matches(Index n) const {
    require_valid();
    if (dim() != n) {
      throw std::invalid_argument("BipartiteSplit: n_a*n_b does not match matrix dimension");
    }
  }
};

}  // namespace entvol
