#include "cbody/energy.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "cbody/error.hpp"
#include "cbody/minors.hpp"

namespace cbody {

DensityDerivatives DensityDerivatives::zero(int m) {
  DensityDerivatives d;
  d.d_nu = VecM::Zero(m);
  d.d_N = MatM3::Zero(m, 3);
  return d;
}

DensityDerivatives& DensityDerivatives::operator+=(const DensityDerivatives& o) {
  value += o.value;
  d_x += o.d_x;
  d_u += o.d_u;
  d_F += o.d_F;
  d_nu += o.d_nu;
  d_N += o.d_N;
  return *this;
}

double GrowthSpec::bound(const Mat3& F, const MatM3& N) const {
  const double det = F.determinant();
  const double th = theta ? theta(det) : 0.0;
  const double n_term = std::pow(N.norm(), s);
  if (variant == GrowthVariant::H3) {
    return c1 * (F.squaredNorm() + std::pow(cofactor(F).norm(), 1.5) + n_term) + th;
  }
  const double m_term = r ? std::pow(minors3(F).norm(), *r) : 0.0;
  return c1 * (m_term + n_term) + th;
}

double GrowthSpec::bound_adj_squared(const Mat3& F, const MatM3& N) const {
  const double th = theta ? theta(F.determinant()) : 0.0;
  return c1 * (F.squaredNorm() + cofactor(F).squaredNorm() + std::pow(N.norm(), s)) + th;
}

VecM EnergyDensity::d_nu_external(const PointState& s) const { return VecM::Zero(s.nu.size()); }

namespace {

void require_dim(const PointState& s, int m, const std::string& who) {
  if (s.nu.size() != m || s.N.rows() != m) {
    throw Error(ErrorCode::ShapeMismatch, who + " expects a descriptor of dimension " + std::to_string(m));
  }
}

// Row-major flattening, index 3 i + j.
using Vec9 = Eigen::Matrix<double, 9, 1>;

Vec9 flat9(const Mat3& a) { return Eigen::Map<const Vec9>(Mat3(a.transpose()).data()); }

template <class V>
Mat3 unflatten3(const Eigen::MatrixBase<V>& v) {
  Mat3 a;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) a(i, j) = v(3 * i + j);
  return a;
}

template <class V>
MatM3 unflattenM(const Eigen::MatrixBase<V>& v, int m) {
  MatM3 a(m, 3);
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < 3; ++j) a(i, j) = v(3 * i + j);
  return a;
}

// ---------------------------------------------------------------------------

class TwoWellDensity final : public EnergyDensity {
 public:
  TwoWellDensity(TwoWell w, int m) : w_(std::move(w)), m_(m) {
    generator_ = [this](const Eigen::VectorXd&, const MatM3&, const PointState& frozen) {
      return w_.value(frozen.x, frozen.nu);
    };
  }
  std::string name() const override { return "two_well"; }
  int descriptor_dim() const override { return m_; }
  double eval(const PointState& s) const override {
    require_dim(s, m_, "two_well");
    return w_.value(s.x, s.nu);
  }
  DensityDerivatives derivatives(const PointState& s) const override {
    require_dim(s, m_, "two_well");
    auto d = DensityDerivatives::zero(m_);
    d.value = w_.value(s.x, s.nu);
    d.d_nu = w_.d_nu(s.x, s.nu);
    if (w_.x_dependent && w_.d_x) d.d_x = w_.d_x(s.x, s.nu);
    return d;
  }
  bool objective() const override { return w_.rotation_invariant; }
  bool x_homogeneous() const override { return !w_.x_dependent; }
  const MinorsGenerator* minors_generator() const override { return &generator_; }

 private:
  TwoWell w_;
  int m_;
  MinorsGenerator generator_;
};

class GradientPenalty final : public EnergyDensity {
 public:
  GradientPenalty(double varpi, int m) : varpi_(varpi), m_(m) {
    if (!(varpi > 0.0)) throw Error(ErrorCode::InvalidParameter, "varpi must be positive");
    generator_ = [varpi](const Eigen::VectorXd&, const MatM3& N, const PointState&) { return 0.5 * varpi * N.squaredNorm(); };
  }
  std::string name() const override { return "gradient_penalty"; }
  int descriptor_dim() const override { return m_; }
  double eval(const PointState& s) const override {
    require_dim(s, m_, "gradient_penalty");
    return 0.5 * varpi_ * s.N.squaredNorm();
  }
  DensityDerivatives derivatives(const PointState& s) const override {
    require_dim(s, m_, "gradient_penalty");
    auto d = DensityDerivatives::zero(m_);
    d.value = 0.5 * varpi_ * s.N.squaredNorm();
    d.d_N = varpi_ * s.N;
    return d;
  }
  bool objective() const override { return true; }
  const MinorsGenerator* minors_generator() const override { return &generator_; }

 private:
  double varpi_;
  int m_;
  MinorsGenerator generator_;
};

// ---------------------------------------------------------------------------

class QuadraticDensity final : public EnergyDensity {
 public:
  QuadraticDensity(QuadraticConstitutive k, std::string name) : k_(std::move(k)), name_(std::move(name)) {
    const int m = k_.nu_dim;
    const int n = 3 * m;
    auto check = [](const Eigen::MatrixXd& a, Eigen::Index r, Eigen::Index c, const char* label) {
      if (a.rows() != r || a.cols() != c) {
        throw Error(ErrorCode::ShapeMismatch, std::string(label) + " must be " + std::to_string(r) + "x" +
                                                  std::to_string(c));
      }
    };
    check(k_.C, 9, 9, "C");
    check(k_.A1, 9, m, "A1");
    check(k_.A2, 9, n, "A2");
    check(k_.A3, m, m, "A3");
    check(k_.A4, m, n, "A4");
    check(k_.A5, n, n, "A5");
    auto symmetric = [](const Eigen::MatrixXd& a, const char* label) {
      if ((a - a.transpose()).norm() > 1e-12 * (1.0 + a.norm())) {
        throw Error(ErrorCode::InvalidParameter, std::string(label) + " lacks major symmetry");
      }
    };
    symmetric(k_.C, "C");
    symmetric(k_.A3, "A3");
    symmetric(k_.A5, "A5");
    if (k_.centrosymmetric) {
      // odd tensors vanish: A2, A4 for tensor descriptors; A1, A4 for vectors
      if (m == 9) {
        k_.A2.setZero();
      } else {
        k_.A1.setZero();
      }
      k_.A4.setZero();
    }
    // Full symmetric form on x = (eps, nu, N flattened), stored by nonzeros.
    Eigen::MatrixXd full = Eigen::MatrixXd::Zero(9 + m + n, 9 + m + n);
    full.block(0, 0, 9, 9) = k_.C;
    full.block(0, 9, 9, m) = k_.A1;
    full.block(0, 9 + m, 9, n) = k_.A2;
    full.block(9, 9, m, m) = k_.A3;
    full.block(9, 9 + m, m, n) = k_.A4;
    full.block(9 + m, 9 + m, n, n) = k_.A5;
    full.block(9, 0, m, 9) = k_.A1.transpose();
    full.block(9 + m, 0, n, 9) = k_.A2.transpose();
    full.block(9 + m, 9, n, m) = k_.A4.transpose();
    for (Eigen::Index r = 0; r < full.rows(); ++r) {
      for (Eigen::Index c = 0; c < full.cols(); ++c) {
        if (full(r, c) != 0.0) entries_.push_back({static_cast<int>(r), static_cast<int>(c), full(r, c)});
      }
    }
    generator_ = [this](const Eigen::VectorXd& xi, const MatM3& N, const PointState& frozen) {
      PointState s = frozen;
      s.F = unflatten3(xi.segment(1, 9));
      s.N = N;
      return eval_impl(s);
    };
  }

  std::string name() const override { return name_; }
  int descriptor_dim() const override { return k_.nu_dim; }

  double eval(const PointState& s) const override {
    require_dim(s, k_.nu_dim, name_);
    return eval_impl(s);
  }

  DensityDerivatives derivatives(const PointState& s) const override {
    require_dim(s, k_.nu_dim, name_);
    const int m = k_.nu_dim;
    const XVec x = stack(s);
    const XVec g = apply(x);
    auto d = DensityDerivatives::zero(m);
    d.value = 0.5 * x.dot(g);  // homogeneous quadratic
    const Mat3 ge = unflatten3(g.head(9));
    d.d_F = 0.5 * (ge + ge.transpose());
    d.d_nu = g.segment(9, m);
    d.d_N = unflattenM(g.segment(9 + m, 3 * m), m);
    return d;
  }

  // Minors-space generator at frozen nu; only order-1 minors enter.
  const MinorsGenerator* minors_generator() const override { return &generator_; }

 private:
  struct Entry {
    int r, c;
    double v;
  };
  using XVec = Eigen::Matrix<double, Eigen::Dynamic, 1, 0, 9 + 4 * kMaxEmbed, 1>;

  XVec stack(const PointState& s) const {
    const int m = k_.nu_dim;
    XVec x(9 + 4 * m);
    const Mat3 du = s.F - Mat3::Identity();
    const Mat3 eps = 0.5 * (du + du.transpose());
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) x(3 * i + j) = eps(i, j);
    x.segment(9, m) = s.nu;
    for (int i = 0; i < m; ++i)
      for (int j = 0; j < 3; ++j) x(9 + m + 3 * i + j) = s.N(i, j);
    return x;
  }

  XVec apply(const XVec& x) const {
    XVec g = XVec::Zero(x.size());
    for (const Entry& e : entries_) g(e.r) += e.v * x(e.c);
    return g;
  }

  double eval_impl(const PointState& s) const {
    const XVec x = stack(s);
    return 0.5 * x.dot(apply(x));
  }

  QuadraticConstitutive k_;
  std::vector<Entry> entries_;
  std::string name_;
  MinorsGenerator generator_;
};

// ---------------------------------------------------------------------------

class QuasicrystalDensity final : public EnergyDensity {
 public:
  explicit QuasicrystalDensity(QuasicrystalParams p) : p_(std::move(p)) {
    if (!(p_.K > 0.0)) throw Error(ErrorCode::InvalidParameter, "phason stiffness K must be positive");
    if (p_.a < 0 || p_.b < 0 || p_.c < 0) throw Error(ErrorCode::InvalidParameter, "a, b, c must be >= 0");
    if (p_.coupling.size() != 0 && (p_.coupling.rows() != 9 || p_.coupling.cols() != 9)) {
      throw Error(ErrorCode::ShapeMismatch, "quasicrystal coupling must be 9x9");
    }
    log_coeff_ = 2.0 * (p_.a + 2.0 * p_.b);
    has_coupling_ = p_.coupling.size() != 0;
    if (has_coupling_) R_ = p_.coupling;
    generator_ = [this](const Eigen::VectorXd& xi, const MatM3& N, const PointState&) {
      const double f2 = xi.segment(1, 9).squaredNorm();
      const double a2 = xi.segment(10, 9).squaredNorm();
      const double j = xi(19);
      if (!(j > 0.0)) return std::numeric_limits<double>::infinity();
      double e = p_.a * (f2 - 3.0) + p_.b * (a2 - 3.0) + p_.c * (j - 1.0 - std::log(j)) -
                 log_coeff_ * std::log(j) + p_.offset + 0.5 * p_.K * N.squaredNorm();
      if (has_coupling_) {
        Vec9 f = xi.segment(1, 9);
        f(0) -= 1.0;
        f(4) -= 1.0;
        f(8) -= 1.0;
        e += f.dot(R_ * flat9(Mat3(N)));
      }
      return e;
    };
  }

  std::string name() const override { return "quasicrystal"; }
  int descriptor_dim() const override { return 3; }

  double eval(const PointState& s) const override {
    require_dim(s, 3, "quasicrystal");
    const double j = s.F.determinant();
    if (!(j > 0.0)) return std::numeric_limits<double>::infinity();
    return value_with(s, j, cofactor(s.F));
  }

  DensityDerivatives derivatives(const PointState& s) const override {
    require_dim(s, 3, "quasicrystal");
    auto d = DensityDerivatives::zero(3);
    const double j = s.F.determinant();
    if (!(j > 0.0)) {
      d.value = std::numeric_limits<double>::infinity();
      d.d_F.setConstant(std::numeric_limits<double>::quiet_NaN());
      return d;
    }
    const Mat3 cof = cofactor(s.F);
    d.value = value_with(s, j, cof);
    const double f2 = s.F.squaredNorm();
    d.d_F = 2.0 * p_.a * s.F + 2.0 * p_.b * (f2 * s.F - s.F * s.F.transpose() * s.F) +
            (p_.c * (1.0 - 1.0 / j) - log_coeff_ / j) * cof;
    d.d_N = p_.K * s.N;
    if (has_coupling_) {
      const Vec9 f = flat9(s.F - Mat3::Identity());
      d.d_F += unflatten3(Vec9(R_ * flat9(Mat3(s.N))));
      d.d_N += unflattenM(Vec9(R_.transpose() * f), 3);
    }
    return d;
  }

  bool objective() const override { return p_.coupling.size() == 0 || p_.coupling.isZero(0.0); }
  const MinorsGenerator* minors_generator() const override { return &generator_; }

 private:
  double value_with(const PointState& s, double j, const Mat3& cof) const {
    double e = p_.a * (s.F.squaredNorm() - 3.0) + p_.b * (cof.squaredNorm() - 3.0) + p_.c * (j - 1.0 - std::log(j)) -
               log_coeff_ * std::log(j) + p_.offset + 0.5 * p_.K * s.N.squaredNorm();
    if (has_coupling_) {
      e += flat9(s.F - Mat3::Identity()).dot(R_ * flat9(Mat3(s.N)));
    }
    return e;
  }

  QuasicrystalParams p_;
  bool has_coupling_ = false;
  Eigen::Matrix<double, 9, 9> R_ = Eigen::Matrix<double, 9, 9>::Zero();
  double log_coeff_ = 0.0;
  MinorsGenerator generator_;
};

// ---------------------------------------------------------------------------

class DirichletSphere final : public EnergyDensity {
 public:
  DirichletSphere() {
    generator_ = [](const Eigen::VectorXd&, const MatM3& N, const PointState&) { return 0.5 * N.squaredNorm(); };
  }
  std::string name() const override { return "dirichlet_sphere"; }
  int descriptor_dim() const override { return 3; }
  double eval(const PointState& s) const override {
    require_dim(s, 3, "dirichlet_sphere");
    return 0.5 * s.N.squaredNorm();
  }
  DensityDerivatives derivatives(const PointState& s) const override {
    require_dim(s, 3, "dirichlet_sphere");
    auto d = DensityDerivatives::zero(3);
    d.value = 0.5 * s.N.squaredNorm();
    d.d_N = s.N;
    return d;
  }
  bool objective() const override { return true; }
  const MinorsGenerator* minors_generator() const override { return &generator_; }

 private:
  MinorsGenerator generator_;
};

class EasyAxisSphere final : public EnergyDensity {
 public:
  EasyAxisSphere(double kappa, const Vec3& axis) : kappa_(kappa), axis_(axis.normalized()) {}
  std::string name() const override { return "easy_axis_sphere"; }
  int descriptor_dim() const override { return 3; }
  double eval(const PointState& s) const override {
    require_dim(s, 3, "easy_axis_sphere");
    const double c = s.nu.dot(VecM(axis_));
    return 0.5 * s.N.squaredNorm() + 0.5 * kappa_ * c * c;
  }
  DensityDerivatives derivatives(const PointState& s) const override {
    auto d = DensityDerivatives::zero(3);
    d.value = eval(s);
    d.d_N = s.N;
    d.d_nu = kappa_ * s.nu.dot(VecM(axis_)) * VecM(axis_);
    return d;
  }

 private:
  double kappa_;
  Vec3 axis_;
};

class SmecticA final : public EnergyDensity {
 public:
  SmecticA(double k1, double k2) : k1_(k1), k2_(k2) {
    if (!(k1 > 0.0 && k2 > 0.0)) throw Error(ErrorCode::InvalidParameter, "smectic constants must be positive");
    generator_ = [this](const Eigen::VectorXd&, const MatM3& N, const PointState& frozen) {
      PointState s = frozen;
      s.N = N;
      return eval(s);
    };
  }
  std::string name() const override { return "smectic_a"; }
  int descriptor_dim() const override { return 4; }
  double eval(const PointState& s) const override {
    require_dim(s, 4, "smectic_a");
    const double g = s.N.row(0).norm();
    const double div = s.N(1, 0) + s.N(2, 1) + s.N(3, 2);
    return 0.5 * k1_ * (g - 1.0) * (g - 1.0) + 0.5 * k2_ * div * div;
  }
  DensityDerivatives derivatives(const PointState& s) const override {
    auto d = DensityDerivatives::zero(4);
    d.value = eval(s);
    const double g = s.N.row(0).norm();
    if (g > 0.0) d.d_N.row(0) = k1_ * (g - 1.0) / g * s.N.row(0);
    const double div = s.N(1, 0) + s.N(2, 1) + s.N(3, 2);
    d.d_N(1, 0) = k2_ * div;
    d.d_N(2, 1) = k2_ * div;
    d.d_N(3, 2) = k2_ * div;
    return d;
  }
  const MinorsGenerator* minors_generator() const override { return &generator_; }

 private:
  double k1_, k2_;
  MinorsGenerator generator_;
};

}  // namespace

// ---------------------------------------------------------------------------

TwoWell zero_well(int m) {
  TwoWell w;
  w.value = [](const Vec3&, const VecM&) { return 0.0; };
  w.d_nu = [m](const Vec3&, const VecM&) { return VecM(VecM::Zero(m)); };
  w.d_x = [](const Vec3&, const VecM&) { return Vec3(Vec3::Zero()); };
  w.rotation_invariant = true;
  return w;
}

TwoWell component_double_well(int m, int index, double a, double b, double height, bool rotation_invariant) {
  if (index < 0 || index >= m) throw Error(ErrorCode::InvalidParameter, "two-well component out of range");
  TwoWell w;
  w.value = [=](const Vec3&, const VecM& nu) {
    const double p = nu(index) - a;
    const double q = nu(index) - b;
    return height * p * p * q * q;
  };
  w.d_nu = [=](const Vec3&, const VecM& nu) {
    const double p = nu(index) - a;
    const double q = nu(index) - b;
    VecM g = VecM::Zero(m);
    g(index) = 2.0 * height * p * q * (p + q);
    return g;
  };
  w.d_x = [](const Vec3&, const VecM&) { return Vec3(Vec3::Zero()); };
  w.rotation_invariant = rotation_invariant;
  return w;
}

TwoWell graded_double_well(int m, int index, double a0, double slope, double b, double height) {
  if (index < 0 || index >= m) throw Error(ErrorCode::InvalidParameter, "two-well component out of range");
  TwoWell w;
  w.value = [=](const Vec3& x, const VecM& nu) {
    const double p = nu(index) - (a0 + slope * x(0));
    const double q = nu(index) - b;
    return height * p * p * q * q;
  };
  w.d_nu = [=](const Vec3& x, const VecM& nu) {
    const double p = nu(index) - (a0 + slope * x(0));
    const double q = nu(index) - b;
    VecM g = VecM::Zero(m);
    g(index) = 2.0 * height * p * q * (p + q);
    return g;
  };
  w.d_x = [=](const Vec3& x, const VecM& nu) {
    const double p = nu(index) - (a0 + slope * x(0));
    const double q = nu(index) - b;
    return Vec3(-2.0 * height * slope * p * q * q, 0.0, 0.0);
  };
  w.x_dependent = true;
  return w;
}

DecomposedDensity::DecomposedDensity(std::string name, std::vector<DensityPart> parts)
    : name_(std::move(name)), parts_(std::move(parts)) {
  if (parts_.empty()) throw Error(ErrorCode::InvalidParameter, "decomposed density needs at least one part");
  const int m = parts_.front().density->descriptor_dim();
  for (const auto& p : parts_) {
    if (p.density->descriptor_dim() != m) throw Error(ErrorCode::ShapeMismatch, "parts disagree on descriptor dim");
  }
  const bool all_have = std::all_of(parts_.begin(), parts_.end(),
                                    [](const DensityPart& p) { return p.density->minors_generator() != nullptr; });
  if (all_have) {
    generator_ = [this](const Eigen::VectorXd& xi, const MatM3& N, const PointState& frozen) {
      double s = 0.0;
      for (const auto& p : parts_) s += (*p.density->minors_generator())(xi, N, frozen);
      return s;
    };
  }
}

int DecomposedDensity::descriptor_dim() const { return parts_.front().density->descriptor_dim(); }

double DecomposedDensity::eval(const PointState& s) const {
  double e = 0.0;
  for (const auto& p : parts_) e += p.density->eval(s);
  return e;
}

DensityDerivatives DecomposedDensity::derivatives(const PointState& s) const {
  auto d = DensityDerivatives::zero(descriptor_dim());
  for (const auto& p : parts_) d += p.density->derivatives(s);
  return d;
}

bool DecomposedDensity::objective() const {
  for (const auto& p : parts_)
    if (!p.density->objective()) return false;
  return true;
}

bool DecomposedDensity::x_homogeneous() const {
  for (const auto& p : parts_)
    if (!p.density->x_homogeneous()) return false;
  return true;
}

const MinorsGenerator* DecomposedDensity::minors_generator() const {
  return generator_ ? &*generator_ : nullptr;
}

VecM DecomposedDensity::d_nu_external(const PointState& s) const {
  VecM g = VecM::Zero(descriptor_dim());
  for (const auto& p : parts_) {
    if (p.role == PartRole::External) g += p.density->derivatives(s).d_nu;
  }
  return g;
}

DensityPtr make_two_well_density(TwoWell w, int m) { return std::make_shared<TwoWellDensity>(std::move(w), m); }

DensityPtr make_gradient_penalty(double varpi, int m) { return std::make_shared<GradientPenalty>(varpi, m); }

std::shared_ptr<const DecomposedDensity> make_ginzburg_landau(TwoWell w, double varpi, int m) {
  return std::make_shared<DecomposedDensity>(
      "ginzburg_landau",
      std::vector<DensityPart>{{make_two_well_density(std::move(w), m), PartRole::Internal},
                               {make_gradient_penalty(varpi, m), PartRole::Internal}});
}

QuadraticConstitutive QuadraticConstitutive::zeros(int nu_dim) {
  QuadraticConstitutive k;
  k.nu_dim = nu_dim;
  const int n = 3 * nu_dim;
  k.C = Eigen::MatrixXd::Zero(9, 9);
  k.A1 = Eigen::MatrixXd::Zero(9, nu_dim);
  k.A2 = Eigen::MatrixXd::Zero(9, n);
  k.A3 = Eigen::MatrixXd::Zero(nu_dim, nu_dim);
  k.A4 = Eigen::MatrixXd::Zero(nu_dim, n);
  k.A5 = Eigen::MatrixXd::Zero(n, n);
  return k;
}

Eigen::MatrixXd isotropic_stiffness(double lambda, double mu) {
  Eigen::MatrixXd c = Eigen::MatrixXd::Zero(9, 9);
  auto d = [](int a, int b) { return a == b ? 1.0 : 0.0; };
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j)
      for (int h = 0; h < 3; ++h)
        for (int k = 0; k < 3; ++k)
          c(3 * i + j, 3 * h + k) = lambda * d(i, j) * d(h, k) + mu * (d(i, h) * d(j, k) + d(i, k) * d(j, h));
  return c;
}

DensityPtr make_quadratic_tensor(QuadraticConstitutive k) {
  if (k.nu_dim != 9) throw Error(ErrorCode::ShapeMismatch, "tensor-valued quadratic density needs nu_dim = 9");
  return std::make_shared<QuadraticDensity>(std::move(k), "quadratic_tensor");
}

DensityPtr make_quadratic_vector(QuadraticConstitutive k) {
  if (k.nu_dim != 3) throw Error(ErrorCode::ShapeMismatch, "vector-valued quadratic density needs nu_dim = 3");
  return std::make_shared<QuadraticDensity>(std::move(k), "quadratic_vector");
}

DensityPtr make_quasicrystal(QuasicrystalParams p) {
  auto d = std::make_shared<QuasicrystalDensity>(std::move(p));
  d->set_growth_meta(quasicrystal_growth_spec());
  return d;
}

GrowthSpec quasicrystal_growth_spec() {
  GrowthSpec g;
  g.c1 = 0.1;
  g.r = 4.0 / 3.0;
  g.s = 2.0;
  g.theta = [](double t) { return t > 0.0 ? 0.5 * (t - 1.0 - std::log(t)) : std::numeric_limits<double>::infinity(); };
  g.variant = GrowthVariant::H2;
  g.description = "H2: C1=0.1, r=4/3, s=2, theta(t)=0.5(t-1-log t)";
  return g;
}

DensityPtr make_dirichlet_sphere() { return std::make_shared<DirichletSphere>(); }

DensityPtr make_easy_axis_sphere(double kappa, const Vec3& axis) {
  return std::make_shared<EasyAxisSphere>(kappa, axis);
}

DensityPtr make_smectic_a(double k1, double k2) { return std::make_shared<SmecticA>(k1, k2); }

}  // namespace cbody
