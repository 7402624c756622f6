#pragma once

#include "lgdc/graph.hpp"

#include <Eigen/Dense>

namespace lgdc {

/// Ascending eigenvalues with orthonormal eigenvectors stored as columns.
struct SpectralDecomposition {
  Eigen::VectorXd eigenvalues;
  Eigen::MatrixXd eigenvectors;
};

/// L = D - W.
Eigen::MatrixXd laplacian(const Graph& g);

/// I - D^{-1/2} W D^{-1/2}; rows and columns of isolated nodes are zero.
Eigen::MatrixXd normalized_laplacian(const Graph& g);

struct JacobiOptions {
  double off_diagonal_tolerance = 1e-10;
  int max_sweeps = 100;
  double symmetry_tolerance = 1e-12;
};

/// Cyclic Jacobi eigensolver for dense symmetric matrices.
///
/// Converged when the largest off-diagonal magnitude of the rotated matrix is
/// below `off_diagonal_tolerance` (scaled by the Frobenius norm for matrices
/// with large entries). Throws lgdc::Error naming the residual when the sweep
/// budget is exhausted, and when `m` is not symmetric.
SpectralDecomposition eig_sym(const Eigen::MatrixXd& m, const JacobiOptions& options = {});

}  // namespace lgdc
