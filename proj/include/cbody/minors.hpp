#pragma once

// Exterior algebra of small gradient matrices: every k x k minor of a 3 x 3
// matrix or of a (3 + m) x 3 stack [F; N], the Binet composition rule and the
// unit 3-vector orienting the tangent plane of a graph.

#include <array>
#include <vector>

#include <Eigen/Dense>

#include "cbody/types.hpp"

namespace cbody {

/// Strictly increasing list of 1-based indices, length 0..3.
class MultiIndex {
 public:
  MultiIndex() = default;
  MultiIndex(std::initializer_list<int> entries);

  int size() const { return size_; }
  int operator[](int i) const { return entries_[static_cast<std::size_t>(i)]; }

  /// Sorted complement in {1, ..., n}. Only defined for n <= 3 + size().
  MultiIndex complement(int n) const;

  /// Sign of the permutation that lists this index followed by its complement.
  int sign_with_complement(int n) const;

  bool operator==(const MultiIndex&) const = default;

  /// All multi-indices of length k over {1, ..., n}, in lexicographic order.
  static std::vector<MultiIndex> all(int n, int k);

 private:
  std::array<int, 3> entries_{};
  int size_ = 0;
};

/// All minors of an r x 3 matrix, grouped by order.
///
/// compound(k) is the k-th compound matrix: rows are the length-k row
/// multi-indices of the source, columns the length-k column multi-indices,
/// both in lexicographic order. order0 is 1 for every vector built from a
/// matrix; it is stored so that scaled vectors and general 3-vectors remain
/// representable.
class MinorsVector {
 public:
  MinorsVector(int rows, double order0, std::array<Eigen::MatrixXd, 3> compounds);

  int rows() const { return rows_; }
  int cols() const { return 3; }

  double order0() const { return order0_; }
  const Eigen::MatrixXd& order1() const { return compounds_[0]; }
  const Eigen::MatrixXd& compound(int k) const;

  /// M^beta_alpha with beta a row multi-index and alpha a column multi-index.
  double minor(const MultiIndex& rows, const MultiIndex& cols) const;

  // 3 x 3 sources only. order2_matrix() is the cofactor matrix, so that
  // G * order2_matrix()^T = det(G) I and adj(G) = order2_matrix()^T.
  Mat3 order2_matrix() const;
  double order3() const;

  /// Flattened components [order0, compound(1), compound(2), compound(3)],
  /// each compound row-major.
  Eigen::VectorXd components() const;

  double norm_squared() const;
  double norm() const;

  MinorsVector scaled(double c) const;

 private:
  int rows_;
  double order0_;
  std::array<Eigen::MatrixXd, 3> compounds_;
};

/// Unit simple 3-vector orienting the approximate tangent plane of a graph.
struct GraphTangent {
  Eigen::VectorXd xi;
};

MinorsVector minors3(const Mat3& g);

/// Minors of the stacked (3 + m) x 3 matrix [F; N].
MinorsVector minors_stacked(const Mat3& f, const Eigen::MatrixXd& n);

/// Minors of G*H through the Binet rule M(GH) = M(G) M(H), order by order.
MinorsVector binet_compose(const Mat3& g, const Mat3& h);

/// Throws Error(ZeroMinors) when |M| = 0.
GraphTangent graph_tangent(const MinorsVector& m);

// Adjugate and cofactor of a 3 x 3 matrix; used throughout the energy code.
Mat3 cofactor(const Mat3& g);
inline Mat3 adjugate(const Mat3& g) { return cofactor(g).transpose(); }

}  // namespace cbody
