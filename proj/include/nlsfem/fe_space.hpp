#pragma once

#include <array>
#include <string>
#include <vector>

#include "nlsfem/basis.hpp"
#include "nlsfem/errors.hpp"
#include "nlsfem/mesh.hpp"
#include "nlsfem/types.hpp"

namespace nlsfem {

/// Continuous Lagrange space of degree p in {1,2,3} on a Mesh1D, with the
/// homogeneous Dirichlet DOFs at x=a and x=b eliminated. Free DOFs are
/// numbered left to right; n_dof = m*p - 1 and the assembled operators have
/// band half-width p.
class FeSpace {
 public:
  static constexpr int kBoundary = -1;  // dof_map marker for eliminated DOFs

  FeSpace(Mesh1D mesh, int degree) : mesh_(std::move(mesh)), degree_(degree) {
    if (degree_ < 1 || degree_ > 3) {
      throw InvalidArgument("FeSpace: degree must be 1, 2 or 3, got " + std::to_string(degree_));
    }
    const int m = mesh_.m();
    n_dof_ = m * degree_ - 1;
    dof_map_.resize(m);
    for (int e = 0; e < m; ++e) {
      for (int j = 0; j <= degree_; ++j) {
        int global_node = e * degree_ + j;
        bool on_boundary = (global_node == 0) || (global_node == m * degree_);
        dof_map_[e][j] = on_boundary ? kBoundary : global_node - 1;
      }
    }
  }

  const Mesh1D& mesh() const { return mesh_; }
  int degree() const { return degree_; }
  int n_dof() const { return n_dof_; }
  int bandwidth() const { return degree_; }
  int quadrature_order() const { return degree_ + 2; }

  /// Global free-DOF index of local node `j` in element `e`, or kBoundary.
  int dof(int e, int j) const { return dof_map_[e][j]; }

  /// Physical coordinate of local node `j` in element `e`.
  double node_coord(int e, int j) const {
    return mesh_.nodes[e] + (mesh_.nodes[e + 1] - mesh_.nodes[e]) *
                                static_cast<double>(j) / degree_;
  }

  /// Affine map [-1,1] -> element e and its Jacobian dx/dxi.
  double map_to_element(int e, double xi) const {
    return 0.5 * (mesh_.nodes[e] + mesh_.nodes[e + 1]) + element_jacobian(e) * xi;
  }
  double element_jacobian(int e) const { return 0.5 * mesh_.element_length(e); }

  /// Evaluate the FE function with coefficients `u` (and its x-derivative)
  /// at reference point xi of element e. Eliminated boundary DOFs carry 0.
  Complex eval_element(const FieldVector& u, int e, const BasisEval& basis) const {
    Complex v{0.0, 0.0};
    for (int j = 0; j <= degree_; ++j) {
      int g = dof(e, j);
      if (g != kBoundary) v += u[g] * basis.value[j];
    }
    return v;
  }

  Complex eval_element_deriv(const FieldVector& u, int e, const BasisEval& basis) const {
    Complex v{0.0, 0.0};
    const double inv_jac = 1.0 / element_jacobian(e);
    for (int j = 0; j <= degree_; ++j) {
      int g = dof(e, j);
      if (g != kBoundary) v += u[g] * (basis.deriv[j] * inv_jac);
    }
    return v;
  }

 private:
  Mesh1D mesh_;
  int degree_;
  int n_dof_;
  std::vector<std::array<int, 4>> dof_map_;
};

}  // namespace nlsfem
