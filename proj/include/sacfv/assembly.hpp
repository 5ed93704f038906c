#ifndef SACFV_ASSEMBLY_HPP
#define SACFV_ASSEMBLY_HPP

#include <vector>

#include <Eigen/Core>
#include <Eigen/SparseCore>

#include "sacfv/mesh.hpp"

namespace sacfv {

/// M = diag(m_K).
template <typename Scalar>
using DiagonalOperator = Eigen::DiagonalMatrix<Scalar, Eigen::Dynamic>;

/// TPFA stiffness matrix, both triangles stored.
template <typename Scalar>
using SparseOperator = Eigen::SparseMatrix<Scalar, Eigen::RowMajor>;

template <typename Scalar>
DiagonalOperator<Scalar> assemble_mass(const Mesh<Scalar>& mesh) {
  return DiagonalOperator<Scalar>(mesh.measures());
}

/// a_KK = sum over interior edges of K of m_sigma / d_sigma, a_KL = -m_sigma / d_sigma.
/// Exterior edges (homogeneous Neumann) contribute nothing.
template <typename Scalar>
SparseOperator<Scalar> assemble_stiffness(const Mesh<Scalar>& mesh) {
  std::vector<Eigen::Triplet<Scalar>> triplets;
  triplets.reserve(4 * mesh.edges().size());
  for (const auto& e : mesh.edges()) {
    const Scalar t = e.measure / e.center_distance;
    triplets.emplace_back(e.first, e.first, t);
    triplets.emplace_back(e.second, e.second, t);
    triplets.emplace_back(e.first, e.second, -t);
    triplets.emplace_back(e.second, e.first, -t);
  }
  SparseOperator<Scalar> a(mesh.size(), mesh.size());
  a.setFromTriplets(triplets.begin(), triplets.end());
  a.makeCompressed();
  return a;
}

}  // namespace sacfv

#endif  // SACFV_ASSEMBLY_HPP
