#ifndef SACFV_MESH_HPP
#define SACFV_MESH_HPP

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Core>
#include <Eigen/Geometry>

#include "sacfv/errors.hpp"

namespace sacfv {

using Index = Eigen::Index;

/// Per-cell values u = (u_K), identified with a piecewise constant function.
template <typename Scalar>
using Field = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

using FieldD = Field<double>;

template <typename Scalar>
struct Cell {
  Eigen::Matrix<Scalar, 2, 1> center;
  Scalar measure;
  // Axis-aligned bounding box; equals the cell for rectangular control volumes.
  Eigen::AlignedBox<Scalar, 2> box;
};

/// Interior edge sigma = K|L. Exterior edges carry no flux and are not stored.
template <typename Scalar>
struct Edge {
  Index first;
  Index second;
  Scalar measure;          // m_sigma
  Scalar center_distance;  // d_{K|L}
  Scalar first_to_edge;    // d(x_K, sigma)
  Scalar second_to_edge;   // d(x_L, sigma)
};

template <typename Scalar>
struct MeshRegularity {
  Scalar min_measure;
  Scalar max_measure;
  Scalar xi;  // min over K, sigma of d(x_K, sigma) / h
  Index max_edges_per_cell;
};

/// Admissible finite-volume mesh. Immutable once constructed.
template <typename Scalar>
class Mesh {
 public:
  Mesh(std::vector<Cell<Scalar>> cells, std::vector<Edge<Scalar>> edges, Scalar h, Index cells_per_axis = 0)
      : cells_(std::move(cells)), edges_(std::move(edges)), h_(h), cells_per_axis_(cells_per_axis) {
    if (cells_.empty()) throw ConfigError("mesh has no cells");
    if (!(h_ > 0)) throw ConfigError("mesh size h must be positive");
    cell_edges_.resize(cells_.size());
    std::set<std::pair<Index, Index>> seen;
    for (const auto& c : cells_) {
      if (!(c.measure > 0)) throw ConfigError("cell measure must be positive");
    }
    for (std::size_t e = 0; e < edges_.size(); ++e) {
      const auto& edge = edges_[e];
      if (edge.first == edge.second || edge.first < 0 || edge.second < 0 || edge.first >= size() ||
          edge.second >= size()) {
        throw ConfigError("interior edge must join two distinct existing cells");
      }
      if (!(edge.measure > 0) || !(edge.center_distance > 0)) {
        throw ConfigError("edge measure and center distance must be positive");
      }
      auto key = std::minmax(edge.first, edge.second);
      if (!seen.insert(key).second) throw ConfigError("duplicate interior edge");
      cell_edges_[edge.first].push_back(static_cast<Index>(e));
      cell_edges_[edge.second].push_back(static_cast<Index>(e));
    }
  }

  Index size() const { return static_cast<Index>(cells_.size()); }
  const std::vector<Cell<Scalar>>& cells() const { return cells_; }
  const std::vector<Edge<Scalar>>& edges() const { return edges_; }
  const Cell<Scalar>& cell(Index k) const { return cells_[static_cast<std::size_t>(k)]; }
  const std::vector<Index>& edges_of(Index k) const { return cell_edges_[static_cast<std::size_t>(k)]; }
  Scalar h() const { return h_; }
  Index cells_per_axis() const { return cells_per_axis_; }

  Field<Scalar> measures() const {
    Field<Scalar> m(size());
    for (Index k = 0; k < size(); ++k) m[k] = cell(k).measure;
    return m;
  }

  Scalar total_measure() const { return measures().sum(); }

  MeshRegularity<Scalar> regularity() const {
    MeshRegularity<Scalar> r{std::numeric_limits<Scalar>::max(), Scalar(0), std::numeric_limits<Scalar>::max(), 0};
    for (const auto& c : cells_) {
      r.min_measure = std::min(r.min_measure, c.measure);
      r.max_measure = std::max(r.max_measure, c.measure);
    }
    for (const auto& e : edges_) r.xi = std::min({r.xi, e.first_to_edge / h_, e.second_to_edge / h_});
    if (edges_.empty()) r.xi = Scalar(0);
    for (const auto& ce : cell_edges_) r.max_edges_per_cell = std::max(r.max_edges_per_cell, Index(ce.size()));
    return r;
  }

 private:
  std::vector<Cell<Scalar>> cells_;
  std::vector<Edge<Scalar>> edges_;
  std::vector<std::vector<Index>> cell_edges_;
  Scalar h_;
  Index cells_per_axis_;
};

using MeshD = Mesh<double>;

/// Cell index of the square in column ix (x direction) and row iy (y direction).
/// The x index runs fastest.
inline Index uniform_cell_index(Index cells_per_axis, Index ix, Index iy) { return cells_per_axis * iy + ix; }

/// Uniform L x L square grid of (-w, w)^2.
template <typename Scalar = double>
Mesh<Scalar> build_uniform_mesh(Index cells_per_axis, Scalar half_width = Scalar(1)) {
  const Index n = cells_per_axis;
  if (n < 1) throw ConfigError("uniform mesh needs L >= 1, got " + std::to_string(n));
  if (!(half_width > 0)) throw ConfigError("domain half width must be positive");
  const Scalar side = Scalar(2) * half_width / Scalar(n);
  std::vector<Cell<Scalar>> cells(static_cast<std::size_t>(n * n));
  for (Index iy = 0; iy < n; ++iy) {
    for (Index ix = 0; ix < n; ++ix) {
      Eigen::Matrix<Scalar, 2, 1> lo(-half_width + side * Scalar(ix), -half_width + side * Scalar(iy));
      Eigen::Matrix<Scalar, 2, 1> hi(lo.x() + side, lo.y() + side);
      auto& c = cells[static_cast<std::size_t>(uniform_cell_index(n, ix, iy))];
      c.box = Eigen::AlignedBox<Scalar, 2>(lo, hi);
      c.center = c.box.center();
      c.measure = side * side;
    }
  }
  std::vector<Edge<Scalar>> edges;
  edges.reserve(static_cast<std::size_t>(2 * n * (n - 1)));
  const Scalar half = side / Scalar(2);
  for (Index iy = 0; iy < n; ++iy) {
    for (Index ix = 0; ix < n; ++ix) {
      const Index k = uniform_cell_index(n, ix, iy);
      if (ix + 1 < n) edges.push_back({k, uniform_cell_index(n, ix + 1, iy), side, side, half, half});
      if (iy + 1 < n) edges.push_back({k, uniform_cell_index(n, ix, iy + 1), side, side, half, half});
    }
  }
  return Mesh<Scalar>(std::move(cells), std::move(edges), std::sqrt(Scalar(2)) * side, n);
}

/// p(x) q(y) with coefficient lists in ascending powers.
template <typename Scalar>
struct SeparablePolynomial {
  std::vector<Scalar> x_coeffs;
  std::vector<Scalar> y_coeffs;

  Scalar operator()(Scalar x, Scalar y) const { return horner(x_coeffs, x) * horner(y_coeffs, y); }

  static Scalar horner(const std::vector<Scalar>& c, Scalar t) {
    Scalar acc(0);
    for (auto it = c.rbegin(); it != c.rend(); ++it) acc = acc * t + *it;
    return acc;
  }

  /// Exact mean of a one-dimensional factor over [lo, hi].
  static Scalar mean(const std::vector<Scalar>& c, Scalar lo, Scalar hi) {
    // Antiderivative evaluated by Horner on the shifted coefficients c_j / (j + 1).
    auto primitive = [&](Scalar t) {
      Scalar acc(0);
      for (std::size_t j = c.size(); j-- > 0;) acc = acc * t + c[j] / Scalar(j + 1);
      return acc * t;
    };
    return (primitive(hi) - primitive(lo)) / (hi - lo);
  }
};

/// Quartic initial datum on (-1,1)^2 with homogeneous Neumann data and values in [0,1].
template <typename Scalar = double>
SeparablePolynomial<Scalar> reference_initial_datum() {
  return {{Scalar(9) / 16, Scalar(-3) / 4, Scalar(-1) / 8, Scalar(1) / 4, Scalar(1) / 16},
          {Scalar(19) / 32, Scalar(3) / 4, Scalar(-3) / 16, Scalar(-1) / 4, Scalar(3) / 32}};
}

/// u_K = (1/m_K) * integral of p(x) q(y) over K, in closed form.
template <typename Scalar>
Field<Scalar> cell_average(const SeparablePolynomial<Scalar>& poly, const Mesh<Scalar>& mesh) {
  Field<Scalar> u(mesh.size());
  for (Index k = 0; k < mesh.size(); ++k) {
    const auto& box = mesh.cell(k).box;
    u[k] = SeparablePolynomial<Scalar>::mean(poly.x_coeffs, box.min().x(), box.max().x()) *
           SeparablePolynomial<Scalar>::mean(poly.y_coeffs, box.min().y(), box.max().y());
  }
  return u;
}

/// ||u - v||^2 in L^2 of the piecewise constant functions: sum_K m_K (u_K - v_K)^2.
template <typename Scalar, typename DerivedU, typename DerivedV>
Scalar squared_l2_distance(const Eigen::MatrixBase<DerivedU>& u, const Eigen::MatrixBase<DerivedV>& v,
                           const Mesh<Scalar>& mesh) {
  if (u.size() != mesh.size() || v.size() != mesh.size()) {
    throw std::invalid_argument("squared_l2_distance: field length does not match mesh");
  }
  Scalar acc(0);
  for (Index k = 0; k < mesh.size(); ++k) {
    const Scalar d = u[k] - v[k];
    acc += mesh.cell(k).measure * d * d;
  }
  return acc;
}

}  // namespace sacfv

#endif  // SACFV_MESH_HPP
