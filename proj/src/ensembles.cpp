#include "entvol/ensembles.hpp"

#include <cmath>
#include <utility>

namespace entvol {

namespace {

void require_dimension(Index n) {
  if (n < 1) {
    throw std::invalid_argument("sample: dimension must be >= 1");
  }
}

}  // namespace

MeasureSpec MeasureSpec::dirichlet(double lambda) {
  if (!(lambda > 0.0)) {
    throw std::invalid_argument("MeasureSpec: dirichlet lambda must be > 0");
  }
  MeasureSpec m;
  m.kind = Kind::Dirichlet;
  m.lambda = lambda;
  return m;
}

MeasureSpec MeasureSpec::pure() {
  MeasureSpec m;
  m.kind = Kind::Pure;
  return m;
}

MeasureSpec MeasureSpec::fixed_spectrum(VectorXd d) {
  if (d.size() < 1 || (d.array() < 0.0).any()) {
    throw std::invalid_argument("MeasureSpec: spectrum entries must be nonnegative");
  }
  if (std::abs(d.sum() - 1.0) > 1e-12) {
    throw std::invalid_argument("MeasureSpec: spectrum must sum to 1");
  }
  MeasureSpec m;
  m.kind = Kind::FixedSpectrum;
  m.spectrum = std::move(d);
  return m;
}

MatrixXcd sample_haar_unitary(Index n, RngStream& rng) {
  require_dimension(n);
  MatrixXcd g(n, n);
  for (Index j = 0; j < n; ++j) {
    for (Index i = 0; i < n; ++i) {
      g(i, j) = Complex(rng.gaussian(), rng.gaussian());
    }
  }
  Eigen::HouseholderQR<MatrixXcd> qr(g);
  MatrixXcd q = qr.householderQ();
  const MatrixXcd& r = qr.matrixQR();
  // Fix the phase gauge: make the R diagonal real positive so Q is Haar.
  for (Index j = 0; j < n; ++j) {
    const Complex d = r(j, j);
    const double a = std::abs(d);
    q.col(j) *= (a > 0.0) ? d / a : Complex(1.0, 0.0);
  }
  return q;
}

MatrixXd sample_haar_orthogonal(Index n, RngStream& rng) {
  require_dimension(n);
  MatrixXd g(n, n);
  for (Index j = 0; j < n; ++j) {
    for (Index i = 0; i < n; ++i) {
      g(i, j) = rng.gaussian();
    }
  }
  Eigen::HouseholderQR<MatrixXd> qr(g);
  MatrixXd q = qr.householderQ();
  const MatrixXd& r = qr.matrixQR();
  for (Index j = 0; j < n; ++j) {
    if (r(j, j) < 0.0) {
      q.col(j) = -q.col(j);
    }
  }
  return q;
}

MatrixXcd sample_gue(Index m, RngStream& rng) {
  require_dimension(m);
  MatrixXcd h(m, m);
  const double off = 1.0 / std::sqrt(static_cast<double>(m));
  const double diag = std::sqrt(2.0 / static_cast<double>(m));
  for (Index i = 0; i < m; ++i) {
    h(i, i) = Complex(diag * rng.gaussian(), 0.0);
    for (Index j = i + 1; j < m; ++j) {
      const Complex z(off * rng.gaussian(), off * rng.gaussian());
      h(i, j) = z;
      h(j, i) = std::conj(z);
    }
  }
  return h;
}

VectorXd sample_simplex(Index n, const MeasureSpec& measure, RngStream& rng) {
  require_dimension(n);
  switch (measure.kind) {
    case MeasureSpec::Kind::FixedSpectrum:
      if (measure.spectrum.size() != n) {
        throw std::invalid_argument("sample_simplex: fixed spectrum has wrong dimension");
      }
      return measure.spectrum;
    case MeasureSpec::Kind::Pure: {
      VectorXd d = VectorXd::Zero(n);
      d(static_cast<Index>(rng.uniform_index(static_cast<std::uint64_t>(n)))) = 1.0;
      return d;
    }
    case MeasureSpec::Kind::Dirichlet: {
      VectorXd d(n);
      double sum = 0.0;
      do {
        for (Index i = 0; i < n; ++i) {
          d(i) = rng.gamma(measure.lambda);
        }
        sum = d.sum();
      } while (!(sum > 0.0));
      return d / sum;
    }
  }
  throw std::logic_error("sample_simplex: unknown measure kind");
}

MatrixXcd sample_density_matrix(Index n, const MeasureSpec& measure, RngStream& rng) {
  const VectorXd d = sample_simplex(n, measure, rng);
  const MatrixXcd u = sample_haar_unitary(n, rng);
  MatrixXcd rho = u * d.asDiagonal() * u.adjoint();
  rho = 0.5 * (rho + rho.adjoint()).eval();
  return rho;
}

VectorXcd sample_haar_pure_state(Index n, RngStream& rng) {
  require_dimension(n);
  VectorXcd psi(n);
  double norm2 = 0.0;
  do {
    for (Index i = 0; i < n; ++i) {
      psi(i) = Complex(rng.gaussian(), rng.gaussian());
    }
    norm2 = psi.squaredNorm();
  } while (!(norm2 > 0.0));
  return psi / std::sqrt(norm2);
}

}  // namespace entvol
