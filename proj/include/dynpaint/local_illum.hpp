#pragma once

#include <algorithm>
#include <cmath>

#include "dynpaint/shape.hpp"

namespace dynpaint {

enum class StepType { linear, smooth, smoother };

/// Ramp bounds for Clamp&Step. t0 == t1 is a hard threshold at t0.
struct RampParams {
  double t0 = 0.0;
  double t1 = 1.0;
  StepType step = StepType::linear;

  friend bool operator==(const RampParams&, const RampParams&) = default;
};

template <typename Scalar>
Scalar clamp_and_step(Scalar t, const RampParams& p) {
  Scalar u;
  if (p.t1 == p.t0) {
    u = t >= Scalar(p.t0) ? Scalar(1) : Scalar(0);
  } else {
    u = (t - Scalar(p.t0)) / Scalar(p.t1 - p.t0);
    u = std::clamp(u, Scalar(0), Scalar(1));
  }
  switch (p.step) {
    case StepType::smooth:
      return u * u * (Scalar(3) - Scalar(2) * u);
    case StepType::smoother:
      return u * u * u * (u * (u * Scalar(6) - Scalar(15)) + Scalar(10));
    case StepType::linear:
      break;
  }
  return u;
}

enum class LightKind { directional, point };

struct LightSpec {
  LightKind kind = LightKind::directional;
  Vec3 direction = Vec3::UnitZ();  // unit, toward the light
  Vec3 position = Vec3::UnitZ();   // scene units
  Eigen::Array3d color = Eigen::Array3d::Ones();

  static LightSpec directional(const Vec3& dir, const Eigen::Array3d& color = Eigen::Array3d::Ones()) {
    LightSpec l;
    l.kind = LightKind::directional;
    l.direction = dir.normalized();
    l.color = color;
    return l;
  }
  static LightSpec point(const Vec3& pos, const Eigen::Array3d& color = Eigen::Array3d::Ones()) {
    LightSpec l;
    l.kind = LightKind::point;
    l.position = pos;
    l.color = color;
    return l;
  }

  friend bool operator==(const LightSpec& a, const LightSpec& b) {
    return a.kind == b.kind && a.direction == b.direction && a.position == b.position &&
           (a.color == b.color).all();
  }
};

/// Unit vector from the shading point toward the light.
template <typename Derived>
Vector3<typename Derived::Scalar> light_direction(const LightSpec& light,
                                                  const Eigen::MatrixBase<Derived>& p) {
  using Scalar = typename Derived::Scalar;
  if (light.kind == LightKind::directional) return light.direction.cast<Scalar>();
  const Vector3<Scalar> v = light.position.cast<Scalar>() - p;
  const Scalar len = v.norm();
  if (len <= Scalar(1e-9)) throw Error("point light coincides with the shading point");
  return v / len;
}

template <typename DerivedN, typename DerivedL>
typename DerivedN::Scalar diffuse_term(const Eigen::MatrixBase<DerivedN>& n,
                                       const Eigen::MatrixBase<DerivedL>& l, const RampParams& p) {
  return clamp_and_step(n.dot(l), p);
}

// Reflected light direction dotted with the fixed eye (0,0,1).
template <typename DerivedN, typename DerivedL>
typename DerivedN::Scalar specular_raw(const Eigen::MatrixBase<DerivedN>& n,
                                       const Eigen::MatrixBase<DerivedL>& l) {
  using Scalar = typename DerivedN::Scalar;
  return Scalar(2) * l.dot(n) * n.z() - l.z();
}

template <typename DerivedN, typename DerivedL>
typename DerivedN::Scalar specular_term(const Eigen::MatrixBase<DerivedN>& n,
                                        const Eigen::MatrixBase<DerivedL>& l, const RampParams& p) {
  return clamp_and_step(specular_raw(n, l), p);
}

}  // namespace dynpaint
