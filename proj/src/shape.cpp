#include "dynpaint/shape.hpp"

#include <cmath>

namespace dynpaint {

ShapeField decode_normal_map(const Image& img) {
  if (img.channels() != 3) throw ShapeError("normal map must have 3 channels");
  const int w = img.width();
  const int h = img.height();
  ShapeField::Normals normals(3, Eigen::Index(w) * h);
  for (int y = 0; y < h; ++y)
    for (int x = 0; x < w; ++x) {
      Vec3 n = 2.0 * img.color(x, y).cast<double>().matrix() - Vec3::Ones();
      // 8-bit maps cannot encode 0 exactly (127 and 128 straddle it).
      for (int c = 0; c < 3; ++c)
        if (std::abs(n[c]) < 1.5 / 255.0) n[c] = 0.0;
      const double len = n.norm();
      if (len < 1e-6) throw DegenerateNormalError(x, y);
      normals.col(Eigen::Index(y) * w + x) = n / len;
    }
  return ShapeField(w, h, ShapeKind::normal_map, std::move(normals));
}

Image encode_normal_map(const ShapeField& shape) {
  Image img(shape.width(), shape.height(), 3);
  for (int y = 0; y < shape.height(); ++y)
    for (int x = 0; x < shape.width(); ++x)
      img.set_color(x, y, (0.5 * shape.normal(x, y).array() + 0.5).cast<float>());
  return img;
}

ShapeField depth_to_shape(const Image& img, double height_scale, GradientSign sign) {
  const int w = img.width();
  const int h = img.height();
  if (img.channels() == 3) {
    for (int y = 0; y < h; ++y)
      for (int x = 0; x < w; ++x)
        if (img(x, y, 0) != img(x, y, 1) || img(x, y, 0) != img(x, y, 2))
          throw ShapeError("depth map channels differ at pixel (" + std::to_string(x) + ", " +
                           std::to_string(y) + "); expected R=G=B");
  }

  ShapeField::Heights heights(Eigen::Index(w) * h);
  for (int y = 0; y < h; ++y)
    for (int x = 0; x < w; ++x) heights[Eigen::Index(y) * w + x] = height_scale * img(x, y, 0);

  auto at = [&](int x, int y) { return heights[Eigen::Index(y) * w + x]; };
  auto derivative = [](auto value, int i, int n) {
    if (n == 1) return 0.0;
    if (i == 0) return value(1) - value(0);
    if (i == n - 1) return value(n - 1) - value(n - 2);
    return 0.5 * (value(i + 1) - value(i - 1));
  };

  const double s = sign == GradientSign::uphill ? 1.0 : -1.0;
  ShapeField::Normals normals(3, Eigen::Index(w) * h);
  for (int y = 0; y < h; ++y)
    for (int x = 0; x < w; ++x) {
      const double dx = derivative([&](int i) { return at(i, y); }, x, w);
      // Scene y points up, against the row index.
      const double dy = -derivative([&](int j) { return at(x, j); }, y, h);
      normals.col(Eigen::Index(y) * w + x) = Vec3(s * dx, s * dy, 1.0).normalized();
    }
  return ShapeField(w, h, ShapeKind::depth_map, std::move(normals), std::move(heights));
}

Image procedural_hemisphere(int size, double radius) {
  if (size < 2) throw ShapeError("hemisphere size must be at least 2");
  if (!(radius > 0 && radius <= 1)) throw ShapeError("hemisphere radius must be in (0, 1]");
  Image img(size, size, 3);
  const double centre = 0.5 * size;
  const double r = radius * centre;
  for (int y = 0; y < size; ++y)
    for (int x = 0; x < size; ++x) {
      const double nx = (x + 0.5 - centre) / r;
      const double ny = (centre - (y + 0.5)) / r;
      const double rr = nx * nx + ny * ny;
      if (rr < 1.0) {
        const Vec3 n(nx, ny, std::sqrt(1.0 - rr));
        img.set_color(x, y, (0.5 * n.array() + 0.5).cast<float>());
      } else {
        img.set_color(x, y, Color(0.5f, 0.5f, 1.0f));
      }
    }
  return img;
}

}  // namespace dynpaint
