#include "cbody/minors.hpp"

#include <algorithm>
#include <cmath>

#include "cbody/error.hpp"

namespace cbody {

MultiIndex::MultiIndex(std::initializer_list<int> entries) {
  if (entries.size() > 3) {
    throw Error(ErrorCode::InvalidParameter, "multi-index longer than 3");
  }
  int prev = 0;
  for (int e : entries) {
    if (e <= prev) {
      throw Error(ErrorCode::InvalidParameter, "multi-index entries must be strictly increasing and >= 1");
    }
    entries_[static_cast<std::size_t>(size_++)] = e;
    prev = e;
  }
}

MultiIndex MultiIndex::complement(int n) const {
  if (n - size_ > 3 || n < size_) {
    throw Error(ErrorCode::InvalidParameter, "complement does not fit in a multi-index");
  }
  MultiIndex out;
  int j = 0;
  for (int v = 1; v <= n; ++v) {
    if (j < size_ && entries_[static_cast<std::size_t>(j)] == v) {
      ++j;
      continue;
    }
    out.entries_[static_cast<std::size_t>(out.size_++)] = v;
  }
  return out;
}

int MultiIndex::sign_with_complement(int n) const {
  // Count inversions in (alpha, complement(alpha)).
  const MultiIndex rest = complement(n);
  int inversions = 0;
  for (int i = 0; i < size_; ++i) {
    for (int j = 0; j < rest.size(); ++j) {
      if ((*this)[i] > rest[j]) ++inversions;
    }
  }
  return inversions % 2 == 0 ? 1 : -1;
}

std::vector<MultiIndex> MultiIndex::all(int n, int k) {
  std::vector<MultiIndex> out;
  if (k == 0) {
    out.emplace_back();
    return out;
  }
  std::vector<int> idx(static_cast<std::size_t>(k));
  for (int i = 0; i < k; ++i) idx[static_cast<std::size_t>(i)] = i + 1;
  while (true) {
    MultiIndex m;
    for (int i = 0; i < k; ++i) m.entries_[static_cast<std::size_t>(i)] = idx[static_cast<std::size_t>(i)];
    m.size_ = k;
    out.push_back(m);
    int i = k - 1;
    while (i >= 0 && idx[static_cast<std::size_t>(i)] == n - k + i + 1) --i;
    if (i < 0) break;
    ++idx[static_cast<std::size_t>(i)];
    for (int j = i + 1; j < k; ++j) idx[static_cast<std::size_t>(j)] = idx[static_cast<std::size_t>(j - 1)] + 1;
  }
  return out;
}

namespace {

int position_of(const MultiIndex& m, int n) {
  const auto all = MultiIndex::all(n, m.size());
  const auto it = std::find(all.begin(), all.end(), m);
  if (it == all.end()) throw Error(ErrorCode::InvalidParameter, "multi-index out of range");
  return static_cast<int>(it - all.begin());
}

double sub_det(const Eigen::MatrixXd& a, const MultiIndex& r, const MultiIndex& c) {
  auto at = [&](int i, int j) { return a(r[i] - 1, c[j] - 1); };
  switch (r.size()) {
    case 1:
      return at(0, 0);
    case 2:
      return at(0, 0) * at(1, 1) - at(0, 1) * at(1, 0);
    case 3:
      return at(0, 0) * (at(1, 1) * at(2, 2) - at(1, 2) * at(2, 1)) -
             at(0, 1) * (at(1, 0) * at(2, 2) - at(1, 2) * at(2, 0)) +
             at(0, 2) * (at(1, 0) * at(2, 1) - at(1, 1) * at(2, 0));
    default:
      return 1.0;
  }
}

MinorsVector minors_of(const Eigen::MatrixXd& a) {
  const int rows = static_cast<int>(a.rows());
  std::array<Eigen::MatrixXd, 3> comp;
  for (int k = 1; k <= 3; ++k) {
    const auto row_idx = MultiIndex::all(rows, k);
    const auto col_idx = MultiIndex::all(3, k);
    Eigen::MatrixXd c(static_cast<Eigen::Index>(row_idx.size()), static_cast<Eigen::Index>(col_idx.size()));
    for (std::size_t i = 0; i < row_idx.size(); ++i) {
      for (std::size_t j = 0; j < col_idx.size(); ++j) {
        c(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = sub_det(a, row_idx[i], col_idx[j]);
      }
    }
    comp[static_cast<std::size_t>(k - 1)] = std::move(c);
  }
  return MinorsVector(rows, 1.0, std::move(comp));
}

}  // namespace

MinorsVector::MinorsVector(int rows, double order0, std::array<Eigen::MatrixXd, 3> compounds)
    : rows_(rows), order0_(order0), compounds_(std::move(compounds)) {}

const Eigen::MatrixXd& MinorsVector::compound(int k) const {
  if (k < 1 || k > 3) throw Error(ErrorCode::InvalidParameter, "compound order must be 1..3");
  return compounds_[static_cast<std::size_t>(k - 1)];
}

double MinorsVector::minor(const MultiIndex& rows, const MultiIndex& cols) const {
  if (rows.size() != cols.size()) throw Error(ErrorCode::ShapeMismatch, "row/column multi-index lengths differ");
  if (rows.size() == 0) return order0_;
  return compound(rows.size())(position_of(rows, rows_), position_of(cols, 3));
}

Mat3 MinorsVector::order2_matrix() const {
  if (rows_ != 3) throw Error(ErrorCode::ShapeMismatch, "order2_matrix needs a 3x3 source");
  Mat3 m;
  for (int i = 1; i <= 3; ++i) {
    for (int j = 1; j <= 3; ++j) {
      const MultiIndex ri{i};
      const MultiIndex cj{j};
      const int sign = ri.sign_with_complement(3) * cj.sign_with_complement(3);
      m(i - 1, j - 1) = sign * minor(ri.complement(3), cj.complement(3));
    }
  }
  return m;
}

double MinorsVector::order3() const {
  if (rows_ != 3) throw Error(ErrorCode::ShapeMismatch, "order3 needs a 3x3 source");
  return compounds_[2](0, 0);
}

Eigen::VectorXd MinorsVector::components() const {
  Eigen::Index n = 1;
  for (const auto& c : compounds_) n += c.size();
  Eigen::VectorXd out(n);
  out(0) = order0_;
  Eigen::Index pos = 1;
  for (const auto& c : compounds_) {
    for (Eigen::Index i = 0; i < c.rows(); ++i) {
      for (Eigen::Index j = 0; j < c.cols(); ++j) out(pos++) = c(i, j);
    }
  }
  return out;
}

double MinorsVector::norm_squared() const {
  double s = order0_ * order0_;
  for (const auto& c : compounds_) s += c.squaredNorm();
  return s;
}

double MinorsVector::norm() const { return std::sqrt(norm_squared()); }

MinorsVector MinorsVector::scaled(double c) const {
  std::array<Eigen::MatrixXd, 3> comp;
  for (std::size_t k = 0; k < 3; ++k) comp[k] = c * compounds_[k];
  return MinorsVector(rows_, c * order0_, std::move(comp));
}

MinorsVector minors3(const Mat3& g) { return minors_of(Eigen::MatrixXd(g)); }

MinorsVector minors_stacked(const Mat3& f, const Eigen::MatrixXd& n) {
  if (n.size() > 0 && n.cols() != 3) throw Error(ErrorCode::ShapeMismatch, "N must have 3 columns");
  Eigen::MatrixXd stack(3 + n.rows(), 3);
  stack.topRows(3) = f;
  if (n.rows() > 0) stack.bottomRows(n.rows()) = n;
  return minors_of(stack);
}

MinorsVector binet_compose(const Mat3& g, const Mat3& h) {
  const MinorsVector mg = minors3(g);
  const MinorsVector mh = minors3(h);
  std::array<Eigen::MatrixXd, 3> comp;
  for (int k = 1; k <= 3; ++k) comp[static_cast<std::size_t>(k - 1)] = mg.compound(k) * mh.compound(k);
  return MinorsVector(3, mg.order0() * mh.order0(), std::move(comp));
}

GraphTangent graph_tangent(const MinorsVector& m) {
  const double nrm = m.norm();
  if (!(nrm > 0.0)) throw Error(ErrorCode::ZeroMinors, "cannot normalize a zero minors vector");
  return GraphTangent{m.components() / nrm};
}

Mat3 cofactor(const Mat3& g) {
  Mat3 c;
  c(0, 0) = g(1, 1) * g(2, 2) - g(1, 2) * g(2, 1);
  c(0, 1) = g(1, 2) * g(2, 0) - g(1, 0) * g(2, 2);
  c(0, 2) = g(1, 0) * g(2, 1) - g(1, 1) * g(2, 0);
  c(1, 0) = g(0, 2) * g(2, 1) - g(0, 1) * g(2, 2);
  c(1, 1) = g(0, 0) * g(2, 2) - g(0, 2) * g(2, 0);
  c(1, 2) = g(0, 1) * g(2, 0) - g(0, 0) * g(2, 1);
  c(2, 0) = g(0, 1) * g(1, 2) - g(0, 2) * g(1, 1);
  c(2, 1) = g(0, 2) * g(1, 0) - g(0, 0) * g(1, 2);
  c(2, 2) = g(0, 0) * g(1, 1) - g(0, 1) * g(1, 0);
  return c;
}

}  // namespace cbody
