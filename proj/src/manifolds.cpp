#include "cbody/manifolds.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "cbody/error.hpp"

namespace cbody {

Mat3 cross_matrix(const Vec3& a) {
  Mat3 m;
  m << 0.0, -a(2), a(1), a(2), 0.0, -a(0), -a(1), a(0), 0.0;
  return m;
}

Mat3 rotation_matrix(const Vec3& q) {
  const double angle = q.norm();
  if (angle == 0.0) return Mat3::Identity();
  return Eigen::AngleAxisd(angle, q / angle).toRotationMatrix();
}

VecM Manifold::retract(const VecM& nu, const VecM& v) const {
  try {
    return project(nu + v);
  } catch (const Error& e) {
    throw Error(ErrorCode::RetractionUndefined, std::string("retraction failed: ") + e.what());
  }
}

RotationGenerator Manifold::rotation_generator(const VecM& nu) const {
  return RotationGenerator{rotation_action(nu)};
}

MatM3 Manifold::rotation_action(const VecM&) const {
  throw Error(ErrorCode::GeneratorUnavailable, name() + " declares no SO(3) action");
}

namespace {

bool all_finite(const VecM& v) { return v.allFinite(); }

class Euclidean final : public Manifold {
 public:
  explicit Euclidean(int dim) : dim_(dim) {
    if (dim < 1 || dim > kMaxEmbed) throw Error(ErrorCode::InvalidParameter, "euclidean dimension out of range");
  }
  std::string name() const override { return "euclidean" + std::to_string(dim_); }
  int embed_dim() const override { return dim_; }
  bool has_boundary() const override { return false; }
  bool rotation_generator_defined() const override { return dim_ == 3; }
  VecM project(const VecM& p) const override {
    if (!all_finite(p)) throw Error(ErrorCode::ProjectionUndefined, "non-finite point");
    return p;
  }
  VecM tangent_project(const VecM&, const VecM& v) const override { return v; }
  double constraint_violation(const VecM& p) const override {
    return all_finite(p) ? 0.0 : std::numeric_limits<double>::infinity();
  }
  MatM3 rotation_action(const VecM& v) const override {
    if (dim_ != 3) return Manifold::rotation_action(v);
    // q x v = -[v]x q
    return -cross_matrix(Vec3(v(0), v(1), v(2)));
  }

 private:
  int dim_;
};

class Sphere final : public Manifold {
 public:
  std::string name() const override { return "sphere"; }
  int embed_dim() const override { return 3; }
  bool has_boundary() const override { return false; }
  bool rotation_generator_defined() const override { return true; }
  VecM project(const VecM& p) const override {
    const double n = p.norm();
    if (!std::isfinite(n) || n < std::numeric_limits<double>::min()) {
      throw Error(ErrorCode::ProjectionUndefined, "cannot project the zero vector onto S^2");
    }
    return p / n;
  }
  VecM tangent_project(const VecM& nu, const VecM& v) const override { return v - nu.dot(v) * nu; }
  double constraint_violation(const VecM& p) const override { return std::abs(p.norm() - 1.0); }
  MatM3 rotation_action(const VecM& v) const override { return -cross_matrix(Vec3(v(0), v(1), v(2))); }
};

class Interval final : public Manifold {
 public:
  Interval(double lo, double hi) : lo_(lo), hi_(hi) {
    if (!(lo < hi)) throw Error(ErrorCode::InvalidParameter, "interval needs lo < hi");
  }
  std::string name() const override { return "interval"; }
  int embed_dim() const override { return 1; }
  bool has_boundary() const override { return true; }
  bool rotation_generator_defined() const override { return false; }
  VecM project(const VecM& p) const override {
    if (!all_finite(p)) throw Error(ErrorCode::ProjectionUndefined, "non-finite point");
    VecM out(1);
    out(0) = std::clamp(p(0), lo_, hi_);
    return out;
  }
  VecM tangent_project(const VecM&, const VecM& v) const override { return v; }
  double constraint_violation(const VecM& p) const override {
    return std::max({0.0, lo_ - p(0), p(0) - hi_});
  }
  VecM feasible_direction(const VecM& nu, const VecM& v) const override {
    if ((nu(0) <= lo_ && v(0) < 0.0) || (nu(0) >= hi_ && v(0) > 0.0)) return VecM::Zero(1);
    return v;
  }

 private:
  double lo_, hi_;
};

class SymPositive final : public Manifold {
 public:
  explicit SymPositive(double floor) : floor_(floor) {}
  std::string name() const override { return "sym_positive"; }
  int embed_dim() const override { return 9; }
  bool has_boundary() const override { return false; }
  bool rotation_generator_defined() const override { return true; }

  VecM project(const VecM& p) const override {
    if (!all_finite(p)) throw Error(ErrorCode::ProjectionUndefined, "non-finite point");
    const Mat3 s = sym(p);
    Eigen::SelfAdjointEigenSolver<Mat3> es(s);
    const Vec3 lam = es.eigenvalues().cwiseMax(floor_);
    const Mat3 out = es.eigenvectors() * lam.asDiagonal() * es.eigenvectors().transpose();
    return flat(0.5 * (out + out.transpose()));
  }
  VecM tangent_project(const VecM&, const VecM& v) const override { return flat(sym(v)); }
  double constraint_violation(const VecM& p) const override {
    const Mat3 m = as_mat(p);
    const double skew = (m - m.transpose()).norm() * 0.5;
    Eigen::SelfAdjointEigenSolver<Mat3> es(0.5 * (m + m.transpose()));
    const double neg = std::max(0.0, -es.eigenvalues().minCoeff());
    return skew + neg;
  }
  MatM3 rotation_action(const VecM& v) const override {
    // d/dt (Q v Q^T) at Q = I with dQ = [q]x : W v - v W
    const Mat3 m = as_mat(v);
    MatM3 a(9, 3);
    for (int k = 0; k < 3; ++k) {
      const Mat3 w = cross_matrix(Vec3::Unit(k));
      a.col(k) = flat(w * m - m * w);
    }
    return a;
  }

 private:
  static Mat3 as_mat(const VecM& p) {
    Mat3 m;
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) m(i, j) = p(3 * i + j);
    return m;
  }
  static Mat3 sym(const VecM& p) {
    const Mat3 m = as_mat(p);
    return 0.5 * (m + m.transpose());
  }
  static VecM flat(const Mat3& m) {
    VecM v(9);
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) v(3 * i + j) = m(i, j);
    return v;
  }
  double floor_;
};

class Product final : public Manifold {
 public:
  explicit Product(std::vector<ManifoldSpec> factors) : factors_(std::move(factors)) {
    if (factors_.empty()) throw Error(ErrorCode::InvalidParameter, "empty product manifold");
    int off = 0;
    for (const auto& f : factors_) {
      offsets_.push_back(off);
      off += f->embed_dim();
    }
    dim_ = off;
    if (dim_ > kMaxEmbed) throw Error(ErrorCode::InvalidParameter, "product embedding too large");
  }
  std::string name() const override {
    std::string s = "product(";
    for (std::size_t i = 0; i < factors_.size(); ++i) s += (i ? "," : "") + factors_[i]->name();
    return s + ")";
  }
  int embed_dim() const override { return dim_; }
  bool has_boundary() const override {
    return std::any_of(factors_.begin(), factors_.end(), [](const auto& f) { return f->has_boundary(); });
  }
  bool rotation_generator_defined() const override {
    return std::any_of(factors_.begin(), factors_.end(),
                       [](const auto& f) { return f->rotation_generator_defined(); });
  }
  VecM project(const VecM& p) const override {
    VecM out(dim_);
    for (std::size_t i = 0; i < factors_.size(); ++i) {
      const int d = factors_[i]->embed_dim();
      out.segment(offsets_[i], d) = factors_[i]->project(p.segment(offsets_[i], d));
    }
    return out;
  }
  VecM tangent_project(const VecM& nu, const VecM& v) const override {
    VecM out(dim_);
    for (std::size_t i = 0; i < factors_.size(); ++i) {
      const int d = factors_[i]->embed_dim();
      out.segment(offsets_[i], d) =
          factors_[i]->tangent_project(nu.segment(offsets_[i], d), v.segment(offsets_[i], d));
    }
    return out;
  }
  double constraint_violation(const VecM& p) const override {
    double s = 0.0;
    for (std::size_t i = 0; i < factors_.size(); ++i) {
      const int d = factors_[i]->embed_dim();
      s = std::max(s, factors_[i]->constraint_violation(p.segment(offsets_[i], d)));
    }
    return s;
  }
  VecM feasible_direction(const VecM& nu, const VecM& v) const override {
    VecM out(dim_);
    for (std::size_t i = 0; i < factors_.size(); ++i) {
      const int d = factors_[i]->embed_dim();
      out.segment(offsets_[i], d) =
          factors_[i]->feasible_direction(nu.segment(offsets_[i], d), v.segment(offsets_[i], d));
    }
    return out;
  }
  MatM3 rotation_action(const VecM& v) const override {
    if (!rotation_generator_defined()) return Manifold::rotation_action(v);
    MatM3 a = MatM3::Zero(dim_, 3);
    for (std::size_t i = 0; i < factors_.size(); ++i) {
      if (!factors_[i]->rotation_generator_defined()) continue;
      const int d = factors_[i]->embed_dim();
      a.middleRows(offsets_[i], d) = factors_[i]->rotation_action(v.segment(offsets_[i], d));
    }
    return a;
  }

 private:
  std::vector<ManifoldSpec> factors_;
  std::vector<int> offsets_;
  int dim_ = 0;
};

}  // namespace

ManifoldSpec make_euclidean(int dim) { return std::make_shared<Euclidean>(dim); }
ManifoldSpec make_sphere() { return std::make_shared<Sphere>(); }
ManifoldSpec make_interval(double lo, double hi) { return std::make_shared<Interval>(lo, hi); }
ManifoldSpec make_sym_positive(double eig_floor) { return std::make_shared<SymPositive>(eig_floor); }
ManifoldSpec make_product(std::vector<ManifoldSpec> factors) {
  return std::make_shared<Product>(std::move(factors));
}
ManifoldSpec make_degree_of_orientation() { return make_product({make_sphere(), make_interval(-0.5, 1.0)}); }

ManifoldSpec manifold_by_name(const std::string& name) {
  if (name == "euclidean1") return make_euclidean(1);
  if (name == "euclidean3") return make_euclidean(3);
  if (name == "euclidean9") return make_euclidean(9);
  if (name == "sphere") return make_sphere();
  if (name == "interval") return make_interval();
  if (name == "sym_positive") return make_sym_positive();
  if (name == "degree_of_orientation") return make_degree_of_orientation();
  if (name == "smectic") return make_product({make_euclidean(1), make_sphere()});
  throw Error(ErrorCode::ConfigError, "unknown manifold '" + name + "'");
}

}  // namespace cbody
