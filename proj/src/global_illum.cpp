#include "dynpaint/global_illum.hpp"

#include "dynpaint/parallel.hpp"

namespace dynpaint {
namespace {

double max_offset_for(const OpticsParams& optics, int source_width) {
  return optics.max_offset ? *optics.max_offset : source_width / 4.0;
}

// Samples `source` at the canvas pixel (x, y) displaced by `offset` source
// pixels. Equal-sized images map pixel centres onto pixel centres exactly.
// Offsets are in scene axes (y up); rows grow downward.
Color sample_at(const Image& source, const ShapeField& shape, int x, int y,
                const Eigen::Vector2d& offset) {
  const double sx = double(source.width()) / shape.width();
  const double sy = double(source.height()) / shape.height();
  return sample_wrapped(source, (x + 0.5) * sx - 0.5 + offset.x(),
                        (y + 0.5) * sy - 0.5 - offset.y());
}

}  // namespace

void validate(const OpticsParams& optics) {
  if (!(optics.eta > 0)) throw Error("eta must be positive");
  if (!(optics.mu >= -1 && optics.mu <= 1)) throw Error("mu must lie in [-1, 1]");
  if (!(optics.d_env > 0)) throw Error("d_env must be positive");
  if (!(optics.d_bg > 0)) throw Error("d_bg must be positive");
  if (optics.max_offset && !(*optics.max_offset > 0)) throw Error("max_offset must be positive");
}

void validate(const FresnelParams& fresnel) {
  if (!(fresnel.fixed_f >= 0 && fresnel.fixed_f <= 1)) throw Error("fixed_f must lie in [0, 1]");
  if (!(fresnel.sp_weight >= 0 && fresnel.sp_weight <= 1))
    throw Error("sp_weight must lie in [0, 1]");
  if (!(fresnel.x0 >= 0 && fresnel.x0 < 1)) throw Error("x0 must lie in [0, 1)");
  if (!(fresnel.x1 > fresnel.x0 && fresnel.x1 <= 1)) throw Error("x1 must lie in (x0, 1]");
  if (!(fresnel.blend >= -1 && fresnel.blend <= 1)) throw Error("blend must lie in [-1, 1]");
}

Eigen::Vector2d reflection_offset(const Vec3& n, const OpticsParams& optics, int width,
                                  int height) {
  Vec3 r = reflect_eye(n);
  // Rays that do not head toward the environment plane saturate.
  if (r.z() <= kGrazingZ) r.z() = 0.0;
  return warp_offset(r, optics.d_env, width, height, max_offset_for(optics, width));
}

std::optional<Eigen::Vector2d> refraction_offset(const Vec3& n, const OpticsParams& optics,
                                                 int width, int height) {
  Vec3 t;
  if (optics.refraction_mode == RefractionMode::physical) {
    const auto physical = refract_eye(n, optics.eta);
    if (!physical) return std::nullopt;
    t = *physical;
  } else {
    const Vec3 v(0.0, 0.0, -1.0);
    const Vec3 eye_side = n.z() < 0.0 ? Vec3(-n) : n;
    t = try_refract_eye_artistic(v, eye_side, optics.mu).value_or(v);
  }
  return warp_offset(t, optics.d_bg, width, height, max_offset_for(optics, width));
}

Image warp_environment(const ShapeField& shape, const Image& env, const OpticsParams& optics,
                       double blur_sigma, int threads) {
  const Image source = gaussian_blur(env, blur_sigma);
  Image out(shape.width(), shape.height(), source.channels());
  parallel_rows(shape.height(), threads, [&](int y0, int y1) {
    for (int y = y0; y < y1; ++y)
      for (int x = 0; x < shape.width(); ++x) {
        const auto offset =
            reflection_offset(shape.normal(x, y), optics, source.width(), source.height());
        out.set_color(x, y, sample_at(source, shape, x, y, offset));
      }
  });
  return out;
}

RefractionResult warp_background(const ShapeField& shape, const Image& bg,
                                 const OpticsParams& optics, double blur_sigma, int threads) {
  const Image source = gaussian_blur(bg, blur_sigma);
  RefractionResult result{Image(shape.width(), shape.height(), source.channels()),
                          std::vector<std::uint8_t>(std::size_t(shape.width()) * shape.height(), 0)};
  parallel_rows(shape.height(), threads, [&](int y0, int y1) {
    for (int y = y0; y < y1; ++y)
      for (int x = 0; x < shape.width(); ++x) {
        auto offset =
            refraction_offset(shape.normal(x, y), optics, source.width(), source.height());
        if (!offset) {
          result.tir[std::size_t(y) * shape.width() + x] = 1;
          offset = Eigen::Vector2d::Zero();
        }
        result.image.set_color(x, y, sample_at(source, shape, x, y, *offset));
      }
  });
  return result;
}

}  // namespace dynpaint
