#include <doctest.h>

#include <random>

#include "cbody/error.hpp"
#include "cbody/minors.hpp"
#include "support.hpp"

using namespace cbody;

namespace {

Mat3 uniform_matrix(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  Mat3 m;
  for (int i = 0; i < 9; ++i) m(i / 3, i % 3) = u(rng);
  return m;
}

// Determinant of the submatrix picked by 1-based row and column lists.
double brute_minor(const Eigen::MatrixXd& a, const MultiIndex& rows, const MultiIndex& cols) {
  const int k = rows.size();
  if (k == 0) return 1.0;
  Eigen::MatrixXd sub(k, k);
  for (int i = 0; i < k; ++i)
    for (int j = 0; j < k; ++j) sub(i, j) = a(rows[i] - 1, cols[j] - 1);
  return sub.determinant();
}

}  // namespace

TEST_CASE("multi-index complements and signs") {
  MultiIndex a{2};
  CHECK(a.complement(3) == MultiIndex{1, 3});
  CHECK(a.sign_with_complement(3) == -1);
  CHECK(MultiIndex{1}.sign_with_complement(3) == 1);
  CHECK(MultiIndex{1, 3}.sign_with_complement(3) == -1);
  CHECK(MultiIndex{}.complement(3) == MultiIndex{1, 2, 3});
  CHECK(MultiIndex::all(5, 2).size() == 10);
  CHECK(MultiIndex::all(3, 0).size() == 1);
  for (int n = 1; n <= 5; ++n) {
    for (int k = 0; k <= std::min(3, n); ++k) {
      for (const auto& idx : MultiIndex::all(n, k)) {
        for (int i = 1; i < idx.size(); ++i) CHECK(idx[i - 1] < idx[i]);
        if (n - k <= 3) {
          const int s = idx.sign_with_complement(n);
          CHECK((s == 1 || s == -1));
        }
      }
    }
  }
}

TEST_CASE("minors of the identity") {
  const MinorsVector m = minors3(Mat3::Identity());
  CHECK(m.order0() == 1.0);
  CHECK(m.order3() == doctest::Approx(1.0));
  CHECK((m.order2_matrix() - Mat3::Identity()).norm() == doctest::Approx(0.0));
  CHECK(m.norm_squared() == doctest::Approx(8.0));
}

TEST_CASE("adjugate identity pins the second-order layout") {
  std::mt19937_64 rng(3);
  for (int t = 0; t < 1000; ++t) {
    const Mat3 g = uniform_matrix(rng);
    const MinorsVector m = minors3(g);
    const Mat3 lhs = g * m.order2_matrix().transpose();
    CHECK((lhs - g.determinant() * Mat3::Identity()).cwiseAbs().maxCoeff() < 1e-12);
    CHECK((adjugate(g) - m.order2_matrix().transpose()).cwiseAbs().maxCoeff() < 1e-15);
    CHECK(std::abs(m.order3() - g.determinant()) < 1e-15);
  }
}

TEST_CASE("Binet composition equals the minors of the product") {
  std::mt19937_64 rng(5);
  for (int t = 0; t < 1000; ++t) {
    const Mat3 g = uniform_matrix(rng);
    const Mat3 h = uniform_matrix(rng);
    const Eigen::VectorXd a = binet_compose(g, h).components();
    const Eigen::VectorXd b = minors3(g * h).components();
    REQUIRE(a.size() == b.size());
    CHECK((a - b).cwiseAbs().maxCoeff() < 1e-10);
  }
}

TEST_CASE("stacked minors agree with brute-force enumeration") {
  std::mt19937_64 rng(7);
  for (int t = 0; t < 100; ++t) {
    const int m = 1 + t % 9;
    const Mat3 f = uniform_matrix(rng);
    const Eigen::MatrixXd n = test::random_dense(rng, m, 3);
    Eigen::MatrixXd stack(3 + m, 3);
    stack << f, n;
    const MinorsVector mv = minors_stacked(f, n);
    CHECK(mv.rows() == 3 + m);
    for (int k = 1; k <= 3; ++k) {
      const auto rows = MultiIndex::all(3 + m, k);
      const auto cols = MultiIndex::all(3, k);
      CHECK(mv.compound(k).rows() == static_cast<int>(rows.size()));
      CHECK(mv.compound(k).cols() == static_cast<int>(cols.size()));
      for (const auto& b : rows)
        for (const auto& a : cols) CHECK(std::abs(mv.minor(b, a) - brute_minor(stack, b, a)) < 1e-12);
    }
  }
}

TEST_CASE("stacked minors restricted to F rows reproduce minors3") {
  std::mt19937_64 rng(9);
  const Mat3 f = uniform_matrix(rng);
  const MinorsVector s = minors_stacked(f, test::random_dense(rng, 3, 3));
  const MinorsVector p = minors3(f);
  for (int k = 1; k <= 3; ++k)
    for (const auto& b : MultiIndex::all(3, k))
      for (const auto& a : MultiIndex::all(3, k)) CHECK(s.minor(b, a) == doctest::Approx(p.minor(b, a)));
}

TEST_CASE("norm counts every order including the unit zeroth minor") {
  std::mt19937_64 rng(11);
  for (int t = 0; t < 100; ++t) {
    const Mat3 g = uniform_matrix(rng);
    const MinorsVector m = minors3(g);
    const double expected = 1.0 + g.squaredNorm() + m.order2_matrix().squaredNorm() + std::pow(g.determinant(), 2);
    CHECK(m.norm_squared() == doctest::Approx(expected).epsilon(1e-14));
    CHECK(m.components().squaredNorm() == doctest::Approx(expected).epsilon(1e-14));
  }
}

TEST_CASE("graph tangent is a unit vector and rejects zero") {
  std::mt19937_64 rng(13);
  const GraphTangent t = graph_tangent(minors_stacked(uniform_matrix(rng), test::random_dense(rng, 3, 3)));
  CHECK(t.xi.norm() == doctest::Approx(1.0));
  const MinorsVector zero = minors3(Mat3::Identity()).scaled(0.0);
  try {
    graph_tangent(zero);
    FAIL("expected ZeroMinors");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::ZeroMinors);
  }
}
