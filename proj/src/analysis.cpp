#include "entvol/analysis.hpp"

#include <algorithm>
#include <cmath>

namespace entvol {

namespace {

VectorXd descending(VectorXd v) {
  std::sort(v.begin(), v.end(), std::greater<double>());
  return v;
}

// Eigenvalues of a 2x2 Hermitian matrix in closed form; the walk objective
// spends most of its time here.
inline void hermitian_2x2_eigenvalues(const MatrixXcd& g, double& lo, double& hi) {
  const double a = g(0, 0).real();
  const double c = g(1, 1).real();
  const double mean = 0.5 * (a + c);
  const double delta = 0.5 * (a - c);
  const double radius = std::sqrt(delta * delta + std::norm(g(0, 1)));
  lo = mean - radius;
  hi = mean + radius;
}

}  // namespace

VectorXd hermitian_spectrum(const MatrixXcd& m) {
  Eigen::SelfAdjointEigenSolver<MatrixXcd> solver(m, Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success) {
    throw NumericalError("hermitian_spectrum: eigensolver failed to converge");
  }
  return descending(solver.eigenvalues());
}

PtResult pt_spectrum_and_negativity(const MatrixXcd& rho, const BipartiteSplit& split) {
  PtResult result;
  result.spectrum = hermitian_spectrum(partial_transpose(rho, split));
  result.ppt = result.spectrum(result.spectrum.size() - 1) >= -kPptTolerance;
  result.negativity =
      result.ppt ? 0.0 : std::max(result.spectrum.array().abs().sum() - 1.0, 0.0);
  return result;
}

double entropy_from_spectrum(const Eigen::Ref<const VectorXd>& spectrum) {
  double h = 0.0;
  for (Index i = 0; i < spectrum.size(); ++i) {
    const double d = spectrum(i);
    if (d > kEntropyFloor) {
      h -= d * std::log(d);
    }
  }
  return h;
}

double von_neumann_entropy(const MatrixXcd& rho) {
  return entropy_from_spectrum(hermitian_spectrum(rho));
}

double renyi_from_spectrum(const Eigen::Ref<const VectorXd>& spectrum, double q) {
  if (!(q > 0.0) || q == 1.0) {
    throw std::invalid_argument("renyi_entropy: require q > 0 and q != 1");
  }
  double s = 0.0;
  for (Index i = 0; i < spectrum.size(); ++i) {
    const double d = spectrum(i);
    if (d > kEntropyFloor) {
      s += std::pow(d, q);
    }
  }
  return std::log(s) / (1.0 - q);
}

double renyi_entropy(const MatrixXcd& rho, double q) {
  return renyi_from_spectrum(hermitian_spectrum(rho), q);
}

std::pair<MatrixXcd, double> reduce_to_b(const Eigen::Ref<const VectorXcd>& psi,
                                         const BipartiteSplit& split) {
  split.require_matches(psi.size());
  const double p = psi.squaredNorm();
  if (!(p > 0.0)) {
    throw std::invalid_argument("reduce_to_b: zero-norm vector");
  }
  using RowMajorMap =
      Eigen::Map<const Eigen::Matrix<Complex, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>>;
  RowMajorMap a(psi.data(), split.n_a, split.n_b);
  return {a.adjoint() * a, p};
}

VectorXd schmidt_spectrum(const Eigen::Ref<const VectorXcd>& psi, const BipartiteSplit& split) {
  split.require_matches(psi.size());
  const double p = psi.squaredNorm();
  if (!(p > 0.0)) {
    throw std::invalid_argument("schmidt_spectrum: zero-norm vector");
  }
  using RowMajorMap =
      Eigen::Map<const Eigen::Matrix<Complex, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>>;
  RowMajorMap a(psi.data(), split.n_a, split.n_b);

  const Index k = split.min_side();
  VectorXd b(k);
  if (k == 2) {
    MatrixXcd gram =
        (split.n_a <= split.n_b) ? MatrixXcd(a * a.adjoint()) : MatrixXcd(a.adjoint() * a);
    double lo = 0.0;
    double hi = 0.0;
    hermitian_2x2_eigenvalues(gram, lo, hi);
    b(0) = hi;
    b(1) = lo;
  } else {
    MatrixXcd gram =
        (split.n_a <= split.n_b) ? MatrixXcd(a * a.adjoint()) : MatrixXcd(a.adjoint() * a);
    b = hermitian_spectrum(gram);
  }
  b = (b.array().max(0.0) / p).matrix();
  return b;
}

double pure_state_entanglement(const Eigen::Ref<const VectorXcd>& psi,
                               const BipartiteSplit& split) {
  return entropy_from_spectrum(schmidt_spectrum(psi, split));
}

AnalysisRecord analyze_state(const MatrixXcd& rho, const BipartiteSplit& split,
                             const std::vector<double>& renyi_orders) {
  AnalysisRecord rec;
  const PtResult pt = pt_spectrum_and_negativity(rho, split);
  rec.negativity = pt.negativity;
  rec.ppt = pt.ppt;
  rec.pt_spectrum = pt.spectrum;
  rec.participation = participation_ratio(rho);

  const VectorXd spectrum = hermitian_spectrum(rho);
  rec.von_neumann = entropy_from_spectrum(spectrum);
  rec.renyi.reserve(renyi_orders.size());
  for (double q : renyi_orders) {
    rec.renyi.emplace_back(q, renyi_from_spectrum(spectrum, q));
  }
  return rec;
}

}  // namespace entvol
