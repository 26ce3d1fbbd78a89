#include "dynpaint/shadow.hpp"

#include <algorithm>
#include <cmath>

namespace dynpaint {
namespace {

constexpr double kMinNormalZ = 1e-3;

bool inside_canvas(double x, double y) { return x >= 0.0 && x < 1.0 && y >= 0.0 && y < 1.0; }

// True once a sample is off-canvas and the ray keeps moving away from it.
bool leaving_canvas(double x, double y, const Vec3& l) {
  return (x < 0.0 && l.x() <= 0.0) || (x >= 1.0 && l.x() >= 0.0) ||
         (y < 0.0 && l.y() <= 0.0) || (y >= 1.0 && l.y() >= 0.0);
}

double bilinear_height(const ShapeField& shape, double x, double y) {
  const int w = shape.width();
  const int h = shape.height();
  const double fx = std::clamp(x * w - 0.5, 0.0, double(w - 1));
  const double fy = std::clamp((1.0 - y) * h - 0.5, 0.0, double(h - 1));
  const int x0 = int(fx);
  const int y0 = int(fy);
  const int x1 = std::min(x0 + 1, w - 1);
  const int y1 = std::min(y0 + 1, h - 1);
  const double tx = fx - x0;
  const double ty = fy - y0;
  const double top = shape.height_at(x0, y0) * (1 - tx) + shape.height_at(x1, y0) * tx;
  const double bottom = shape.height_at(x0, y1) * (1 - tx) + shape.height_at(x1, y1) * tx;
  return top * (1 - ty) + bottom * ty;
}

Vec3 nearest_normal(const ShapeField& shape, double x, double y) {
  const int ix = std::clamp(int(std::floor(x * shape.width())), 0, shape.width() - 1);
  const int iy = std::clamp(int(std::floor((1.0 - y) * shape.height())), 0, shape.height() - 1);
  return shape.normal(ix, iy);
}

long step_budget(const LightSpec& light, const Vec3& start, const ShadowParams& params) {
  if (light.kind == LightKind::directional) return params.K;
  return long(std::ceil((light.position - start).norm() / params.a));
}

// In-matter length along the march. Samples sit at the midpoints of
// a-length intervals; g = H - z is taken as linear between neighbouring
// samples, so a crossing splits an interval at the interpolated root. Off-
// canvas samples never block and split their intervals at the midpoint.
class InsideLength {
 public:
  explicit InsideLength(double a) : a_(a) {}

  void add(double g) { push(g, true); }
  void add_off_canvas() { push(0.0, false); }

  double finish() {
    if (started_ && prev_on_ && prev_ > 0) length_ += 0.5 * a_;
    return length_;
  }

 private:
  void push(double g, bool on) {
    if (!started_) {
      if (on && g > 0) length_ += 0.5 * a_;
    } else if (prev_on_ && on) {
      if (prev_ > 0 && g > 0)
        length_ += a_;
      else if (prev_ > 0 || g > 0)
        length_ += a_ * (prev_ > 0 ? prev_ : g) / std::abs(prev_ - g);
    } else if (prev_on_ && prev_ > 0) {
      length_ += 0.5 * a_;
    } else if (on && g > 0) {
      length_ += 0.5 * a_;
    }
    started_ = true;
    prev_on_ = on;
    prev_ = g;
  }

  double a_;
  double length_ = 0.0;
  double prev_ = 0.0;
  bool prev_on_ = false;
  bool started_ = false;
};

double finish(double inside, const ShadowParams& params) {
  const double r = std::max(params.d, inside);
  return clamp_and_step(params.d / r, params.ramp);
}

}  // namespace

void validate(const ShadowParams& params) {
  if (!(params.d > 0)) throw Error("shadow offset d must be positive");
  if (!(params.a > 0 && params.a < params.d)) throw Error("shadow step a must satisfy 0 < a < d");
  if (params.K < 1) throw Error("shadow step count K must be at least 1");
}

double shadow_term_depth(const ShapeField& shape, const LightSpec& light, int x, int y,
                         const ShadowParams& params) {
  if (shape.kind() != ShapeKind::depth_map) throw ShapeError("shadow_term_depth needs a depth map");
  const Vec3 ps = shading_point(shape, x, y);
  const Vec3 l = light_direction(light, ps);
  if (l.z() <= 0.0) return 0.0;

  const Vec3 start = ps - params.d * shape.normal(x, y);
  const long steps = step_budget(light, start, params);
  const double top = shape.max_height();
  InsideLength inside(params.a);
  for (long k = 0; k < steps; ++k) {
    const Vec3 p = start + ((double(k) + 0.5) * params.a) * l;
    if (!inside_canvas(p.x(), p.y())) {
      inside.add_off_canvas();
      if (leaving_canvas(p.x(), p.y(), l)) break;
      continue;
    }
    inside.add(bilinear_height(shape, p.x(), p.y()) - p.z());
    // Above the highest point the ray stays clear.
    if (p.z() > top) break;
  }
  return finish(inside.finish(), params);
}

double shadow_term_normalmap(const ShapeField& shape, const LightSpec& light, int x, int y,
                             const ShadowParams& params) {
  if (shape.kind() != ShapeKind::normal_map)
    throw ShapeError("shadow_term_normalmap needs a normal map");
  // Shading points of a normal map all sit at z = 0.
  const Vec3 ps((x + 0.5) / shape.width(), 1.0 - (y + 0.5) / shape.height(), 0.0);
  const Vec3 l = light_direction(light, ps);
  if (l.z() <= 0.0) return 0.0;

  const Vec3 start = ps - params.d * shape.normal(x, y);
  const long steps = step_budget(light, start, params);
  double height = 0.0;
  double px = ps.x();
  double py = ps.y();
  InsideLength inside(params.a);
  for (long k = 0; k < steps; ++k) {
    const Vec3 p = start + ((double(k) + 0.5) * params.a) * l;
    if (!inside_canvas(p.x(), p.y())) {
      inside.add_off_canvas();
      if (leaving_canvas(p.x(), p.y(), l)) break;
    }

    // Midpoint slope of the plane orthogonal to the traversed normal.
    const Vec3 n = nearest_normal(shape, 0.5 * (px + p.x()), 0.5 * (py + p.y()));
    height -= (n.x() * (p.x() - px) + n.y() * (p.y() - py)) / std::max(n.z(), kMinNormalZ);
    px = p.x();
    py = p.y();

    if (inside_canvas(p.x(), p.y())) inside.add(height - p.z());
  }
  return finish(inside.finish(), params);
}

double shadow_term(const ShapeField& shape, const LightSpec& light, int x, int y,
                   const ShadowParams& params) {
  return shape.kind() == ShapeKind::depth_map ? shadow_term_depth(shape, light, x, y, params)
                                              : shadow_term_normalmap(shape, light, x, y, params);
}

}  // namespace dynpaint
