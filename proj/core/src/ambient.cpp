#include "fbms/ambient.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include <Eigen/Eigenvalues>

#include "fbms/errors.hpp"

namespace fbms {

LevelSet LevelSet::sphere(double radius) {
  if (!(radius > 0.0)) throw AmbientError("sphere radius must be positive");
  LevelSet s;
  s.kind_ = Kind::sphere;
  s.params_ = Vec3(radius, 0.0, 0.0);
  return s;
}

LevelSet LevelSet::half_space() {
  LevelSet s;
  s.kind_ = Kind::half_space;
  s.params_.setZero();
  return s;
}

LevelSet LevelSet::ball_exterior(double radius) {
  if (!(radius > 0.0)) throw AmbientError("ball radius must be positive");
  LevelSet s;
  s.kind_ = Kind::ball_exterior;
  s.params_ = Vec3(radius, 0.0, 0.0);
  return s;
}

LevelSet LevelSet::ellipsoid(double a, double b, double c) {
  if (!(a > 0.0 && b > 0.0 && c > 0.0)) throw AmbientError("ellipsoid semi-axes must be positive");
  LevelSet s;
  s.kind_ = Kind::ellipsoid;
  s.params_ = Vec3(a, b, c);
  return s;
}

double LevelSet::value(const Vec3& x) const {
  switch (kind_) {
    case Kind::sphere: return 0.5 * (x.squaredNorm() - params_[0] * params_[0]);
    case Kind::half_space: return x[2];
    case Kind::ball_exterior: return 0.5 * (params_[0] * params_[0] - x.squaredNorm());
    case Kind::ellipsoid: return 0.5 * (x.cwiseQuotient(params_).squaredNorm() - 1.0);
  }
  return 0.0;
}

Vec3 LevelSet::gradient(const Vec3& x) const {
  switch (kind_) {
    case Kind::sphere: return x;
    case Kind::half_space: return Vec3::UnitZ();
    case Kind::ball_exterior: return -x;
    case Kind::ellipsoid: return x.cwiseQuotient(params_.cwiseProduct(params_));
  }
  return Vec3::Zero();
}

Mat3 LevelSet::hessian(const Vec3&) const {
  switch (kind_) {
    case Kind::sphere: return Mat3::Identity();
    case Kind::half_space: return Mat3::Zero();
    case Kind::ball_exterior: return -Mat3::Identity();
    case Kind::ellipsoid: return params_.cwiseProduct(params_).cwiseInverse().asDiagonal();
  }
  return Mat3::Zero();
}

Vec3 LevelSet::project(const Vec3& x) const {
  switch (kind_) {
    case Kind::sphere:
    case Kind::ball_exterior: {
      const double n = x.norm();
      if (n == 0.0) return Vec3(params_[0], 0.0, 0.0);
      return x * (params_[0] / n);
    }
    case Kind::half_space: return Vec3(x[0], x[1], 0.0);
    case Kind::ellipsoid: {
      Vec3 p = x.norm() == 0.0 ? Vec3(params_[0], 0.0, 0.0) : x;
      for (int it = 0; it < 100; ++it) {
        const double f = value(p);
        const Vec3 g = gradient(p);
        if (std::abs(f) < 1e-15) break;
        p -= f / g.squaredNorm() * g;
      }
      return p;
    }
  }
  return x;
}

std::optional<double> LevelSet::min_curvature() const {
  switch (kind_) {
    case Kind::sphere: return 1.0 / params_[0];
    case Kind::half_space: return 0.0;
    case Kind::ball_exterior: return -1.0 / params_[0];
    case Kind::ellipsoid: return std::nullopt;
  }
  return std::nullopt;
}

std::string LevelSet::describe() const {
  std::ostringstream out;
  switch (kind_) {
    case Kind::sphere: out << "sphere:" << params_[0]; break;
    case Kind::half_space: out << "half_space"; break;
    case Kind::ball_exterior: out << "ball_exterior:" << params_[0]; break;
    case Kind::ellipsoid: out << "ellipsoid:" << params_[0] << ":" << params_[1] << ":" << params_[2]; break;
  }
  return out.str();
}

AmbientSpace AmbientSpace::euclidean() { return AmbientSpace{}; }

AmbientSpace AmbientSpace::unit_ball() {
  AmbientSpace a;
  a.kind_ = Kind::unit_ball_3;
  a.boundary_ = LevelSet::sphere(1.0);
  return a;
}

AmbientSpace AmbientSpace::space_form(double kappa, std::optional<LevelSet> boundary) {
  if (!std::isfinite(kappa)) throw AmbientError("curvature must be finite");
  AmbientSpace a;
  a.kind_ = Kind::space_form;
  a.kappa_ = kappa;
  a.boundary_ = std::move(boundary);
  return a;
}

AmbientSpace AmbientSpace::level_set_domain(LevelSet boundary) {
  AmbientSpace a;
  a.kind_ = Kind::level_set_domain;
  a.boundary_ = std::move(boundary);
  return a;
}

const LevelSet& AmbientSpace::boundary() const {
  if (!boundary_) throw AmbientError("ambient space has no boundary");
  return *boundary_;
}

std::string AmbientSpace::describe() const {
  std::ostringstream out;
  switch (kind_) {
    case Kind::euclidean_3: out << "euclidean_3"; break;
    case Kind::unit_ball_3: out << "unit_ball_3"; break;
    case Kind::space_form:
      out << "space_form,kappa=" << kappa_;
      if (boundary_) out << ",boundary=" << boundary_->describe();
      break;
    case Kind::level_set_domain: out << "level_set_domain,level=" << boundary().describe(); break;
  }
  return out.str();
}

Vec3 AmbientSpace::boundary_normal(const Vec3& x) const {
  const Vec3 p = boundary().project(x);
  return boundary().gradient(p).normalized();
}

Mat3 AmbientSpace::shape_operator(const Vec3& x) const {
  const LevelSet& f = boundary();
  const Vec3 p = f.project(x);
  const Vec3 g = f.gradient(p);
  const double gn = g.norm();
  const Vec3 w = g / gn;
  const Mat3 proj = Mat3::Identity() - w * w.transpose();
  return proj * f.hessian(p) * proj / gn;
}

double AmbientSpace::boundary_residual(const Vec3& x) const {
  const LevelSet& f = boundary();
  return std::abs(f.value(x)) / f.gradient(x).norm();
}

namespace {

std::vector<std::string_view> split(std::string_view s, char sep) {
  std::vector<std::string_view> out;
  std::size_t pos = 0;
  while (true) {
    const std::size_t next = s.find(sep, pos);
    out.push_back(s.substr(pos, next == std::string_view::npos ? std::string_view::npos : next - pos));
    if (next == std::string_view::npos) break;
    pos = next + 1;
  }
  return out;
}

double parse_number(std::string_view s) {
  try {
    std::size_t used = 0;
    const std::string str(s);
    const double v = std::stod(str, &used);
    if (used != str.size()) throw AmbientError("bad number '" + str + "'");
    return v;
  } catch (const std::logic_error&) {
    throw AmbientError("bad number '" + std::string(s) + "'");
  }
}

LevelSet parse_level(std::string_view s) {
  const auto parts = split(s, ':');
  const auto& name = parts[0];
  auto arg = [&](std::size_t i, double fallback) {
    return parts.size() > i ? parse_number(parts[i]) : fallback;
  };
  if (name == "sphere") return LevelSet::sphere(arg(1, 1.0));
  if (name == "half_space") return LevelSet::half_space();
  if (name == "ball_exterior") return LevelSet::ball_exterior(arg(1, 1.0));
  if (name == "ellipsoid") return LevelSet::ellipsoid(arg(1, 1.0), arg(2, 1.0), arg(3, 1.0));
  throw AmbientError("unknown level set '" + std::string(name) + "'");
}

}  // namespace

AmbientSpace parse_ambient(std::string_view text) {
  const auto parts = split(text, ',');
  const std::string_view name = parts[0];
  double kappa = 0.0;
  std::optional<LevelSet> level;
  bool level_given = false;
  for (std::size_t i = 1; i < parts.size(); ++i) {
    const auto eq = parts[i].find('=');
    if (eq == std::string_view::npos) throw AmbientError("expected key=value in '" + std::string(parts[i]) + "'");
    const auto key = parts[i].substr(0, eq);
    const auto value = parts[i].substr(eq + 1);
    if (key == "kappa" || key == "κ") {
      kappa = parse_number(value);
    } else if (key == "boundary" || key == "level") {
      level_given = true;
      if (value != "none") level = parse_level(value);
    } else {
      throw AmbientError("unknown ambient key '" + std::string(key) + "'");
    }
  }
  if (name == "euclidean_3") {
    if (kappa != 0.0 || level_given) throw AmbientError("euclidean_3 takes no parameters");
    return AmbientSpace::euclidean();
  }
  if (name == "unit_ball_3") {
    if (kappa != 0.0 || level_given) throw AmbientError("unit_ball_3 takes no parameters");
    return AmbientSpace::unit_ball();
  }
  if (name == "space_form") return AmbientSpace::space_form(kappa, level_given ? level : LevelSet::sphere());
  if (name == "level_set_domain") {
    if (!level) throw AmbientError("level_set_domain needs level=NAME");
    if (kappa != 0.0) throw AmbientError("level_set_domain is flat");
    return AmbientSpace::level_set_domain(*level);
  }
  throw AmbientError("unknown ambient '" + std::string(name) + "'");
}

Vec3 evaluate_curvature_operator(const AmbientSpace& ambient, const Vec3&, const Vec3& e1, const Vec3& e2,
                                 const Vec3& v) {
  const double tol = 1e-10;
  if (std::abs(e1.squaredNorm() - 1.0) > tol || std::abs(e2.squaredNorm() - 1.0) > tol ||
      std::abs(e1.dot(e2)) > tol)
    throw FrameError("tangent frame is not orthonormal");
  if (ambient.kappa() == 0.0) return Vec3::Zero();
  // R(X, Y)Z = kappa (<Y, Z> X - <X, Z> Y), so R(V, e)e = kappa (V - <V, e> e).
  const double k = ambient.kappa();
  Vec3 out = Vec3::Zero();
  for (const Vec3* e : {&e1, &e2}) out += k * (v - v.dot(*e) * *e);
  return out;
}

double boundary_second_form(const AmbientSpace& ambient, const Vec3& point, const Vec3& x, const Vec3& y) {
  const LevelSet& f = ambient.boundary();
  const Vec3 g = f.gradient(point);
  const double gn = g.norm();
  if (std::abs(f.value(point)) / gn > kTolBoundary) throw OffBoundaryError("point is not on the ambient boundary");
  const Vec3 w = g / gn;
  if (std::abs(x.dot(w)) > kTolTangency * std::max(1.0, x.norm()) ||
      std::abs(y.dot(w)) > kTolTangency * std::max(1.0, y.norm()))
    throw TangencyError("vector is not tangent to the ambient boundary");
  return x.dot(f.hessian(point) * y) / gn;
}

double probe_min_curvature(const AmbientSpace& ambient, const std::vector<Vec3>& probe_points) {
  double lo = std::numeric_limits<double>::infinity();
  for (const auto& q : probe_points) {
    const LevelSet& f = ambient.boundary();
    const Vec3 p = f.project(q);
    const Vec3 w = f.gradient(p).normalized();
    // Orthonormal basis of the tangent plane.
    const Vec3 a = (std::abs(w[0]) < 0.9 ? Vec3::UnitX() : Vec3::UnitY()).cross(w).normalized();
    const Vec3 b = w.cross(a);
    const Mat3 s = ambient.shape_operator(p);
    Eigen::Matrix2d s2;
    s2 << a.dot(s * a), a.dot(s * b), b.dot(s * a), b.dot(s * b);
    const Eigen::Matrix2d sym = 0.5 * (s2 + s2.transpose());
    lo = std::min(lo, Eigen::SelfAdjointEigenSolver<Eigen::Matrix2d>(sym).eigenvalues()[0]);
  }
  return lo;
}

double probe_rho(const AmbientSpace& ambient, const std::vector<Vec3>& probe_points) {
  double hi = 0.0;
  const std::array<std::pair<Vec3, Vec3>, 3> frames{std::pair{Vec3::UnitX(), Vec3::UnitY()},
                                                    std::pair{Vec3::UnitY(), Vec3::UnitZ()},
                                                    std::pair{Vec3::UnitZ(), Vec3::UnitX()}};
  for (const auto& p : probe_points) {
    for (const auto& [e1, e2] : frames) {
      Mat3 r;
      for (int c = 0; c < 3; ++c) r.col(c) = evaluate_curvature_operator(ambient, p, e1, e2, Vec3::Unit(c));
      const Mat3 sym = 0.5 * (r + r.transpose());
      const Eigen::Vector3d ev = Eigen::SelfAdjointEigenSolver<Mat3>(sym).eigenvalues();
      hi = std::max(hi, std::max(std::abs(ev[0]), std::abs(ev[2])));
    }
  }
  return hi;
}

AmbientBounds ambient_bounds(const AmbientSpace& ambient, const std::vector<Vec3>& probe_points) {
  AmbientBounds out;
  // Every catalogued ambient carries an analytic curvature tensor.
  out.rho = 2.0 * std::abs(ambient.kappa());
  out.rho_source = BoundSource::analytic;
  if (!ambient.has_boundary()) {
    out.alpha = 0.0;
    return out;
  }
  if (auto k = ambient.boundary().min_curvature()) {
    out.alpha = std::min(0.0, *k);
    out.alpha_source = BoundSource::analytic;
  } else {
    if (probe_points.empty()) throw AmbientError("probe sample is empty");
    out.alpha = std::min(0.0, probe_min_curvature(ambient, probe_points));
    out.alpha_source = BoundSource::probed;
    out.warning = "alpha probed over a finite boundary sample";
  }
  return out;
}

std::vector<Vec3> fibonacci_sphere(int count, double radius) {
  std::vector<Vec3> out;
  out.reserve(static_cast<std::size_t>(count));
  const double golden = std::numbers::pi * (3.0 - std::sqrt(5.0));
  for (int i = 0; i < count; ++i) {
    const double z = 1.0 - (2.0 * i + 1.0) / count;
    const double r = std::sqrt(std::max(0.0, 1.0 - z * z));
    out.emplace_back(radius * r * std::cos(golden * i), radius * r * std::sin(golden * i), radius * z);
  }
  return out;
}

}  // namespace fbms
