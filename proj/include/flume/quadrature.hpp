#pragma once
/// @file quadrature.hpp
/// @brief Gauss-Jacobi quadrature for the symmetric weight (1 - z^2)^lambda
///        on [-1, 1], built with the Golub-Welsch eigenvalue procedure.

#include <Eigen/Eigenvalues>
#include <cmath>
#include <stdexcept>
#include <vector>

namespace flume {

/// Nodes/weights integrate z^p (1 - z^2)^lambda exactly for p <= 2 n - 1.
/// The weights carry the (1 - z^2)^lambda density, so they sum to the total
/// weight mass 1 / c_lambda.
struct JacobiQuadrature {
  double lambda = 0.5;
  int n_nodes = 48;
  std::vector<double> nodes;    // strictly increasing in (-1, 1)
  std::vector<double> weights;  // positive

  static JacobiQuadrature build(double lambda, int n_nodes = 48) {
    if (!(lambda > -0.5)) throw std::domain_error("quadrature: lambda must exceed -1/2");
    if (n_nodes < 1) throw std::domain_error("quadrature: need at least one node");

    // Three-term recurrence of the (lambda, lambda) Jacobi polynomials in
    // symmetric tridiagonal form: zero diagonal, off-diagonal
    // b_k = sqrt(k (k + 2 lambda) / ((2k + 2 lambda)^2 - 1)).
    Eigen::MatrixXd jac = Eigen::MatrixXd::Zero(n_nodes, n_nodes);
    for (int k = 1; k < n_nodes; ++k) {
      double two_k = 2.0 * (k + lambda);
      double b = std::sqrt(k * (k + 2.0 * lambda) / (two_k * two_k - 1.0));
      jac(k, k - 1) = b;
      jac(k - 1, k) = b;
    }

    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(jac);
    if (solver.info() != Eigen::Success)
      throw std::runtime_error("quadrature: eigensolver failed");

    // Total mass of the weight: int_{-1}^{1} (1-z^2)^lambda dz
    //                         = sqrt(pi) Gamma(lambda+1) / Gamma(lambda+3/2).
    double mu0 = std::sqrt(std::acos(-1.0)) *
                 std::exp(std::lgamma(lambda + 1.0) - std::lgamma(lambda + 1.5));

    JacobiQuadrature q;
    q.lambda = lambda;
    q.n_nodes = n_nodes;
    q.nodes.resize(n_nodes);
    q.weights.resize(n_nodes);
    for (int i = 0; i < n_nodes; ++i) {
      q.nodes[i] = solver.eigenvalues()(i);
      double v0 = solver.eigenvectors()(0, i);
      q.weights[i] = mu0 * v0 * v0;
    }
    return q;
  }
};

}  // namespace flume
