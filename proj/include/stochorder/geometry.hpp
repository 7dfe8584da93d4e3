#pragma once

#include <Eigen/Dense>
#include <cmath>

#include "stochorder/errors.hpp"

namespace stochorder {

// A simplex is treated as affinely dependent when, after each coordinate of
// the edge matrix is divided by its largest magnitude, the product of the QR
// pivots falls below this fraction of the product of the edge norms (the
// Hadamard bound). The ratio lies in [0, 1] and the equilibration makes the
// decision independent of per-coordinate units.
inline constexpr double kDegenerateSimplexTolerance = 1e-10;

namespace detail {

template <typename A, typename B>
void check_same_size(const Eigen::MatrixBase<A>& r, const Eigen::MatrixBase<B>& s) {
  if (r.size() != s.size()) throw InvalidInput("dimension mismatch");
}

inline constexpr int kSmallSimplexDim = 8;

template <typename Scalar, typename Work, typename Derived>
Scalar simplex_sq_volume_impl(const Eigen::MatrixBase<Derived>& vertices) {
  const Eigen::Index k = vertices.rows() - 1;
  const Eigen::Index d = vertices.cols();

  // d x k edge matrix, column i = x_i - x_{k+1}.
  Work edges = (vertices.topRows(k).rowwise() - vertices.row(k)).transpose();

  if (k == 1) return edges.squaredNorm();

  Work scaled = edges;
  Scalar scale_product(1);
  for (Eigen::Index j = 0; j < d; ++j) {
    const Scalar s = scaled.row(j).cwiseAbs().maxCoeff();
    if (s == Scalar(0)) {
      // Every vertex shares coordinate j; for k == d that flattens the simplex.
      if (k == d) return Scalar(0);
      continue;
    }
    scaled.row(j) /= s;
    scale_product *= s;
  }

  Scalar hadamard(1);
  for (Eigen::Index i = 0; i < k; ++i) hadamard *= scaled.col(i).norm();
  if (hadamard == Scalar(0)) return Scalar(0);

  const Eigen::HouseholderQR<Work> qr(scaled);
  const Scalar pivots = qr.matrixQR().diagonal().head(k).cwiseAbs().prod();
  if (pivots <= Scalar(kDegenerateSimplexTolerance) * hadamard) return Scalar(0);

  Scalar root;  // sqrt(det(M^T M))
  if (k == d) {
    root = pivots * scale_product;
  } else {
    const Eigen::HouseholderQR<Work> raw(edges);
    root = raw.matrixQR().diagonal().head(k).cwiseAbs().prod();
  }

  Scalar factorial(1);
  for (Eigen::Index i = 2; i <= k; ++i) factorial *= Scalar(i);
  const Scalar v = root / factorial;
  return v * v;
}

}  // namespace detail

template <typename A, typename B>
typename A::Scalar l1_distance(const Eigen::MatrixBase<A>& r, const Eigen::MatrixBase<B>& s) {
  detail::check_same_size(r, s);
  return (r.derived().reshaped() - s.derived().reshaped()).cwiseAbs().sum();
}

template <typename A, typename B>
typename A::Scalar l2_distance(const Eigen::MatrixBase<A>& r, const Eigen::MatrixBase<B>& s) {
  detail::check_same_size(r, s);
  return (r.derived().reshaped() - s.derived().reshaped()).norm();
}

// Squared k-volume of the simplex whose k+1 vertices are the rows of
// `vertices` ((k+1) x d, 1 <= k <= d): det(M^T M) / (k!)^2 for the edge
// matrix M = [x_1 - x_{k+1}, ..., x_k - x_{k+1}]. The Gram determinant is
// taken as the squared product of the R pivots of a QR of M.
template <typename Derived>
typename Derived::Scalar simplex_sq_volume(const Eigen::MatrixBase<Derived>& vertices) {
  using Scalar = typename Derived::Scalar;
  const Eigen::Index k = vertices.rows() - 1;
  const Eigen::Index d = vertices.cols();
  if (k < 1) throw InvalidInput("simplex needs at least 2 vertices");
  if (d < 1) throw InvalidInput("simplex vertices must have dimension >= 1");
  if (k > d) throw InvalidInput("simplex order k exceeds dimension d");

  if (d <= detail::kSmallSimplexDim) {
    using Small = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic, Eigen::ColMajor, detail::kSmallSimplexDim,
                                detail::kSmallSimplexDim>;
    return detail::simplex_sq_volume_impl<Scalar, Small>(vertices);
  }
  return detail::simplex_sq_volume_impl<Scalar, Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>>(vertices);
}

template <typename Derived>
typename Derived::Scalar simplex_volume(const Eigen::MatrixBase<Derived>& vertices) {
  using std::sqrt;
  return sqrt(simplex_sq_volume(vertices));
}

}  // namespace stochorder
