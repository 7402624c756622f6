#include "lgdc/spectral.hpp"

#include "lgdc/error.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

namespace lgdc {

Eigen::MatrixXd laplacian(const Graph& g) {
  const Eigen::MatrixXd& w = g.weights();
  Eigen::MatrixXd l = -w;
  l.diagonal() = w.rowwise().sum();
  return l;
}

Eigen::MatrixXd normalized_laplacian(const Graph& g) {
  const Eigen::MatrixXd& w = g.weights();
  const Eigen::Index n = w.rows();
  Eigen::VectorXd inv_sqrt = Eigen::VectorXd::Zero(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const double d = w.row(i).sum();
    if (d > 0.0) inv_sqrt(i) = 1.0 / std::sqrt(d);
  }
  Eigen::MatrixXd l = -(inv_sqrt.asDiagonal() * w * inv_sqrt.asDiagonal());
  for (Eigen::Index i = 0; i < n; ++i) l(i, i) = inv_sqrt(i) > 0.0 ? 1.0 : 0.0;
  return l;
}

SpectralDecomposition eig_sym(const Eigen::MatrixXd& m, const JacobiOptions& options) {
  if (m.rows() != m.cols()) throw Error("eig_sym: matrix is not square");
  const Eigen::Index n = m.rows();
  const double scale = std::max(1.0, m.cwiseAbs().maxCoeff() * (n > 0 ? 1.0 : 0.0));
  if ((m - m.transpose()).cwiseAbs().maxCoeff() > options.symmetry_tolerance * scale) {
    throw Error("eig_sym: matrix is not symmetric");
  }
  Eigen::MatrixXd a = 0.5 * (m + m.transpose());
  Eigen::MatrixXd v = Eigen::MatrixXd::Identity(n, n);
  const double tol = options.off_diagonal_tolerance * scale;

  auto max_off = [&] {
    double worst = 0.0;
    for (Eigen::Index i = 0; i < n; ++i) {
      for (Eigen::Index j = i + 1; j < n; ++j) worst = std::max(worst, std::abs(a(i, j)));
    }
    return worst;
  };

  int sweep = 0;
  double residual = max_off();
  while (residual >= tol) {
    if (sweep++ >= options.max_sweeps) {
      std::ostringstream msg;
      msg << "eig_sym: no convergence after " << options.max_sweeps
          << " sweeps (max off-diagonal " << residual << ")";
      throw Error(msg.str());
    }
    for (Eigen::Index p = 0; p < n; ++p) {
      for (Eigen::Index q = p + 1; q < n; ++q) {
        const double apq = a(p, q);
        if (std::abs(apq) < 1e-300) continue;
        // Rotation angle from the classic stable formulation (Golub & Van Loan 8.5.2).
        const double theta = (a(q, q) - a(p, p)) / (2.0 * apq);
        const double t = (theta >= 0.0 ? 1.0 : -1.0) / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double s = t * c;
        for (Eigen::Index k = 0; k < n; ++k) {
          const double akp = a(k, p);
          const double akq = a(k, q);
          a(k, p) = c * akp - s * akq;
          a(k, q) = s * akp + c * akq;
        }
        for (Eigen::Index k = 0; k < n; ++k) {
          const double apk = a(p, k);
          const double aqk = a(q, k);
          a(p, k) = c * apk - s * aqk;
          a(q, k) = s * apk + c * aqk;
        }
        a(p, q) = 0.0;
        a(q, p) = 0.0;
        for (Eigen::Index k = 0; k < n; ++k) {
          const double vkp = v(k, p);
          const double vkq = v(k, q);
          v(k, p) = c * vkp - s * vkq;
          v(k, q) = s * vkp + c * vkq;
        }
      }
    }
    residual = max_off();
  }

  std::vector<Eigen::Index> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), Eigen::Index{0});
  std::stable_sort(order.begin(), order.end(), [&](Eigen::Index x, Eigen::Index y) { return a(x, x) < a(y, y); });

  SpectralDecomposition out;
  out.eigenvalues.resize(n);
  out.eigenvectors.resize(n, n);
  for (Eigen::Index k = 0; k < n; ++k) {
    const auto src = order[static_cast<std::size_t>(k)];
    out.eigenvalues(k) = a(src, src);
    out.eigenvectors.col(k) = v.col(src);
  }
  return out;
}

}  // namespace lgdc
