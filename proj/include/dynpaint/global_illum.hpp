#pragma once

#include <Eigen/Core>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <optional>
#include <vector>

#include "dynpaint/image.hpp"
#include "dynpaint/shape.hpp"

namespace dynpaint {

enum class RefractionMode { physical, artistic };
enum class FresnelMode { physical, artistic, fixed };

struct OpticsParams {
  double eta = 1.5;   // eta2 / eta1
  double mu = 0.5;    // art-directed bend control, log2(eta) scale, [-1, 1]
  RefractionMode refraction_mode = RefractionMode::physical;
  double d_env = 0.1;  // canvas to environment plane, scene units
  double d_bg = 0.1;   // canvas to background plane, scene units
  std::optional<double> max_offset;  // pixels; unset means a quarter of the sampled width

  friend bool operator==(const OpticsParams&, const OpticsParams&) = default;
};

struct FresnelParams {
  FresnelMode mode = FresnelMode::artistic;
  double fixed_f = 0.5;
  double sp_weight = 0.5;  // weight of the s-polarized term
  double x0 = 0.2;         // sin(theta) of total refraction
  double x1 = 0.8;         // sin(theta) of the equal mix
  double blend = 0.0;      // -1 total refraction .. +1 total reflection

  friend bool operator==(const FresnelParams&, const FresnelParams&) = default;
};

void validate(const OpticsParams& optics);
void validate(const FresnelParams& fresnel);

/// Mirror of the fixed eye I = (0,0,1) about N.
template <typename Derived>
Vector3<typename Derived::Scalar> reflect_eye(const Eigen::MatrixBase<Derived>& n) {
  using Scalar = typename Derived::Scalar;
  const Scalar two_z = Scalar(2) * n.z();
  return Vector3<Scalar>(two_z * n.x(), two_z * n.y(), two_z * n.z() - Scalar(1));
}

/// Physical transmission of the eye ray I = (0,0,1) through N:
/// T = -I/eta + (c/eta - sqrt((c^2 - 1)/eta^2 + 1)) N with c = N.z.
/// Returns nullopt on total internal reflection.
template <typename Derived>
std::optional<Vector3<typename Derived::Scalar>> refract_eye(const Eigen::MatrixBase<Derived>& n,
                                                             typename Derived::Scalar eta) {
  using Scalar = typename Derived::Scalar;
  const Scalar c = n.z();
  const Scalar radicand = (c * c - Scalar(1)) / (eta * eta) + Scalar(1);
  if (radicand < Scalar(0)) return std::nullopt;
  const Scalar k = c / eta - std::sqrt(radicand);
  return Vector3<Scalar>(k * n.x(), k * n.y(), -Scalar(1) / eta + k * n.z());
}

/// Art-directed transmission, linear in mu. mu > 0 bends V toward -N,
/// mu < 0 pushes V along its tangential component. Returns nullopt when the
/// unnormalized direction vanishes.
template <typename DerivedV, typename DerivedN>
std::optional<Vector3<typename DerivedV::Scalar>> try_refract_eye_artistic(
    const Eigen::MatrixBase<DerivedV>& v, const Eigen::MatrixBase<DerivedN>& n,
    typename DerivedV::Scalar mu) {
  using Scalar = typename DerivedV::Scalar;
  Vector3<Scalar> t;
  if (mu > Scalar(0)) {
    t = v * (Scalar(1) - mu) - n * mu;
  } else {
    const Vector3<Scalar> tangential = v - v.dot(n) * n;
    t = tangential * mu + v * (Scalar(1) + mu);
  }
  const Scalar len = t.norm();
  if (len < Scalar(1e-12)) return std::nullopt;
  return Vector3<Scalar>(t / len);
}

template <typename DerivedV, typename DerivedN>
Vector3<typename DerivedV::Scalar> refract_eye_artistic(const Eigen::MatrixBase<DerivedV>& v,
                                                        const Eigen::MatrixBase<DerivedN>& n,
                                                        typename DerivedV::Scalar mu) {
  auto t = try_refract_eye_artistic(v, n, mu);
  if (!t) throw DegenerateDirectionError("art-directed refraction direction is degenerate");
  return *t;
}

inline constexpr double kGrazingZ = 1e-4;

/// Pixel offset of a ray D travelling plane_distance (scene units) along z,
/// on a source image of the given size. Grazing rays saturate at
/// +-max_offset.
inline Eigen::Vector2d warp_offset(const Vec3& dir, double plane_distance, int width, int height,
                                   double max_offset) {
  const double dz = std::abs(dir.z());
  auto component = [&](double along, int extent) {
    if (dz < kGrazingZ) return along > 0 ? max_offset : (along < 0 ? -max_offset : 0.0);
    return std::clamp(plane_distance * along / dz * extent, -max_offset, max_offset);
  };
  return {component(dir.x(), width), component(dir.y(), height)};
}

/// Weighted s/p dielectric Fresnel reflectance at incidence cos(theta).
template <typename Scalar>
Scalar fresnel_physical(Scalar cos_theta, Scalar eta, Scalar sp_weight) {
  const Scalar c = std::clamp(cos_theta, Scalar(0), Scalar(1));
  if (c <= Scalar(0)) return Scalar(1);
  const Scalar sin2 = Scalar(1) - c * c;
  const Scalar radicand = eta * eta - sin2;
  if (radicand < Scalar(0)) return Scalar(1);
  const Scalar root = std::sqrt(radicand);
  const Scalar fs = (c - root) / (c + root);
  // sqrt(1 - sin^2/eta^2) = root / eta
  const Scalar rp = root / eta;
  const Scalar fp = (rp - eta * c) / (rp + eta * c);
  const Scalar f = sp_weight * fs * fs + (Scalar(1) - sp_weight) * fp * fp;
  return std::clamp(f, Scalar(0), Scalar(1));
}

/// Piecewise-linear Fresnel: 0 up to x0, 0.5 at x1, 1 at sin(theta) = 1,
/// then blended toward total reflection (blend > 0) or refraction (< 0).
template <typename Scalar>
Scalar fresnel_artistic(Scalar sin_theta, const FresnelParams& p) {
  const Scalar x = std::clamp(sin_theta, Scalar(0), Scalar(1));
  const Scalar x0 = Scalar(p.x0);
  const Scalar x1 = Scalar(p.x1);
  Scalar base;
  if (x <= x0)
    base = Scalar(0);
  else if (x <= x1)
    base = Scalar(0.5) * (x - x0) / (x1 - x0);
  else
    base = Scalar(0.5) + Scalar(0.5) * (x - x1) / (Scalar(1) - x1);
  const Scalar b = Scalar(p.blend);
  const Scalar f = b >= Scalar(0) ? base * (Scalar(1) - b) + b : base * (Scalar(1) + b);
  return std::clamp(f, Scalar(0), Scalar(1));
}

struct RefractionResult {
  Image image;
  std::vector<std::uint8_t> tir;  // per canvas pixel, 1 = total internal reflection
};

/// Per canvas pixel: reflect the eye about N and sample the (blurred)
/// environment at the offset landing point.
Image warp_environment(const ShapeField& shape, const Image& env, const OpticsParams& optics,
                       double blur_sigma, int threads = 1);

/// Per canvas pixel: transmit the eye ray (physically or art-directed) and
/// sample the (blurred) background. TIR pixels keep the unwarped sample and
/// are flagged.
RefractionResult warp_background(const ShapeField& shape, const Image& bg,
                                 const OpticsParams& optics, double blur_sigma, int threads = 1);

/// Offset used by warp_environment at one pixel (exposed for tests).
Eigen::Vector2d reflection_offset(const Vec3& n, const OpticsParams& optics, int width, int height);

/// Offset used by warp_background at one pixel; nullopt on TIR.
std::optional<Eigen::Vector2d> refraction_offset(const Vec3& n, const OpticsParams& optics,
                                                 int width, int height);

}  // namespace dynpaint
