#pragma once

#include <Eigen/Core>

#include <optional>

#include "dynpaint/image.hpp"

namespace dynpaint {

template <typename Scalar>
using Vector3 = Eigen::Matrix<Scalar, 3, 1>;
using Vec3 = Vector3<double>;

enum class ShapeKind { normal_map, depth_map };

/// Sign applied to the height gradient when building normals from a depth
/// map. `uphill` keeps N = (+dH/dx, +dH/dy, 1); `outward` is the geometric
/// outward normal (-dH/dx, -dH/dy, 1) of z = H(x, y).
enum class GradientSign { uphill, outward };

/// Per-pixel unit normals, plus heights (scene units) for depth-map shapes.
/// Normals use scene axes: x right, y up (against the row index), z toward
/// the eye. normal(x, y) takes a column and a row.
template <typename Scalar>
class ShapeFieldT {
 public:
  using Normals = Eigen::Matrix<Scalar, 3, Eigen::Dynamic>;
  using Heights = Eigen::Array<Scalar, Eigen::Dynamic, 1>;

  ShapeFieldT() = default;

  ShapeFieldT(int width, int height, ShapeKind kind, Normals normals,
              std::optional<Heights> heights = std::nullopt)
      : width_(width),
        height_(height),
        kind_(kind),
        normals_(std::move(normals)),
        heights_(std::move(heights)) {
    if (width < 1 || height < 1) throw ShapeError("shape dimensions must be at least 1x1");
    const Eigen::Index n = Eigen::Index(width) * height;
    if (normals_.cols() != n) throw ShapeError("normal count does not match shape dimensions");
    if ((kind == ShapeKind::depth_map) != heights_.has_value())
      throw ShapeError("heights must be present exactly for depth-map shapes");
    if (heights_ && heights_->size() != n)
      throw ShapeError("height count does not match shape dimensions");
    const auto deviation = (normals_.colwise().norm().array() - Scalar(1)).abs();
    if (n > 0 && deviation.maxCoeff() > Scalar(1e-5)) throw ShapeError("normals must be unit length");
    if (heights_) max_height_ = heights_->maxCoeff();
  }

  int width() const { return width_; }
  int height() const { return height_; }
  ShapeKind kind() const { return kind_; }

  const Normals& normals() const { return normals_; }
  const std::optional<Heights>& heights() const { return heights_; }

  auto normal(int x, int y) const { return normals_.col(Eigen::Index(y) * width_ + x); }
  Scalar height_at(int x, int y) const {
    return heights_ ? (*heights_)[Eigen::Index(y) * width_ + x] : Scalar(0);
  }
  Scalar max_height() const { return max_height_; }

 private:
  int width_ = 0;
  int height_ = 0;
  ShapeKind kind_ = ShapeKind::normal_map;
  Normals normals_;
  std::optional<Heights> heights_;
  Scalar max_height_ = 0;
};

using ShapeField = ShapeFieldT<double>;

/// N = normalize(2c - 1) per pixel. Throws DegenerateNormalError when
/// |2c - 1| < 1e-6.
ShapeField decode_normal_map(const Image& img);

/// Inverse of decode_normal_map: color = 0.5 N + 0.5.
Image encode_normal_map(const ShapeField& shape);

/// Heights = height_scale * sample; normals from central differences in
/// pixel units (one-sided at borders). Accepts 1-channel or R=G=B images.
ShapeField depth_to_shape(const Image& img, double height_scale = 0.1,
                          GradientSign sign = GradientSign::uphill);

/// Normal-map encoded hemisphere of radius `radius * size / 2` centred in a
/// size x size image; flat (0.5, 0.5, 1) outside the disc.
Image procedural_hemisphere(int size, double radius = 1.0);

}  // namespace dynpaint
