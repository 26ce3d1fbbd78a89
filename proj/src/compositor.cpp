#include "dynpaint/compositor.hpp"

#include <cmath>

#include "dynpaint/parallel.hpp"

namespace dynpaint {
namespace {

void require_same_grid(const Image& img, const ShapeField& shape, const char* name) {
  if (img.width() != shape.width() || img.height() != shape.height())
    throw DimensionMismatchError(std::string(name) + " is " + std::to_string(img.width()) + "x" +
                                 std::to_string(img.height()) + " but the shape is " +
                                 std::to_string(shape.width()) + "x" +
                                 std::to_string(shape.height()));
}

void require_same_grid(const Image& a, const Image& b, const char* name) {
  if (!a.same_size(b)) throw DimensionMismatchError(std::string(name) + " dimensions differ");
}

void validate(const RampParams& ramp, const char* name) {
  if (!(ramp.t0 <= ramp.t1)) throw Error(std::string(name) + ": t0 must not exceed t1");
}

}  // namespace

Scene make_scene(ShapeField shape, Image i0, Image i1, Image env, Image bg, Image ks,
                 Image spec_color) {
  Scene scene;
  const int w = shape.width();
  const int h = shape.height();
  scene.shape = std::move(shape);
  scene.i0 = to_rgb(i0);
  scene.i1 = to_rgb(i1);
  scene.env = std::move(env);
  scene.bg = std::move(bg);
  scene.ks = ks.empty() ? Image(w, h, 1, 0.f) : to_gray(ks);
  scene.spec_color = spec_color.empty() ? Image(w, h, 3, 1.f) : to_rgb(spec_color);
  validate(scene);
  return scene;
}

void validate(const Scene& scene) {
  require_same_grid(scene.i0, scene.shape, "i0");
  require_same_grid(scene.i1, scene.shape, "i1");
  require_same_grid(scene.ks, scene.shape, "ks");
  require_same_grid(scene.spec_color, scene.shape, "spec_color");
  if (scene.env.empty()) throw Error("scene has no environment image");
  if (scene.bg.empty()) throw Error("scene has no background image");
  if (scene.i0.channels() != 3 || scene.i1.channels() != 3 || scene.spec_color.channels() != 3)
    throw Error("diffuse and specular color images must be RGB");
  if (scene.ks.channels() != 1) throw Error("ks must be a gray image");
  const auto& k = scene.ks.samples();
  if ((k < 0.f).any() || (k > 1.f).any()) throw Error("ks samples must lie in [0, 1]");
}

void validate(const ShadeParams& params) {
  validate(params.diffuse_ramp, "diffuse_ramp");
  validate(params.spec_ramp, "spec_ramp");
  validate(params.global_ramp, "global_ramp");
  validate(params.shadow);
  validate(params.optics);
  validate(params.fresnel);
  if (!(params.env_blur >= 0)) throw Error("env_blur must be non-negative");
  if (!(params.bg_blur >= 0)) throw Error("bg_blur must be non-negative");
}

Image diffuse_field(const Scene& scene, std::span<const LightSpec> lights,
                    const ShadeParams& params, int threads) {
  if (lights.empty()) throw Error("at least one light is required");
  const ShapeField& shape = scene.shape;
  ShadowParams march = params.shadow;
  march.ramp = params.diffuse_ramp;
  const bool use_march = params.marches_shadows();

  Image omega(shape.width(), shape.height(), 3);
  parallel_rows(shape.height(), threads, [&](int y0, int y1) {
    for (int y = y0; y < y1; ++y)
      for (int x = 0; x < shape.width(); ++x) {
        const Vec3 p = shading_point(shape, x, y);
        Eigen::Array3d sum = Eigen::Array3d::Zero();
        for (const LightSpec& light : lights) {
          const Vec3 l = light_direction(light, p);
          // Lights behind the canvas contribute nothing.
          if (l.z() <= 0.0) continue;
          const double t = use_march ? shadow_term(shape, light, x, y, march)
                                     : diffuse_term(Vec3(shape.normal(x, y)), l, params.diffuse_ramp);
          sum += t * light.color;
        }
        omega.set_color(x, y, sum.max(0.0).min(1.0).cast<float>());
      }
  });
  return omega;
}

Image complement(const Image& omega1) {
  Image out = omega1;
  out.samples() = 1.f - omega1.samples();
  return out;
}

Image shade_diffuse(const Scene& scene, const Image& omega1) {
  require_same_grid(omega1, scene.i0, "omega1");
  Image out(scene.width(), scene.height(), 3);
  const auto w = omega1.samples();
  out.samples() = scene.i0.samples() * (1.f - w) + scene.i1.samples() * w;
  return out;
}

Image specular_field(const Scene& scene, std::span<const LightSpec> lights,
                     const ShadeParams& params, int threads) {
  const ShapeField& shape = scene.shape;
  Image s(shape.width(), shape.height(), 1);
  parallel_rows(shape.height(), threads, [&](int y0, int y1) {
    for (int y = y0; y < y1; ++y)
      for (int x = 0; x < shape.width(); ++x) {
        const Vec3 p = shading_point(shape, x, y);
        const Vec3 n = shape.normal(x, y);
        double sum = 0.0;
        for (const LightSpec& light : lights) {
          const Vec3 l = light_direction(light, p);
          if (l.z() <= 0.0) continue;
          sum += specular_term(n, l, params.spec_ramp);
        }
        s(x, y) = float(std::clamp(sum, 0.0, 1.0));
      }
  });
  return s;
}

Image shade_specular(const Image& base, const Scene& scene, const Image& s) {
  require_same_grid(base, scene.spec_color, "base");
  require_same_grid(s, scene.ks, "s");
  Image out = base;
  for (int y = 0; y < base.height(); ++y)
    for (int x = 0; x < base.width(); ++x) {
      const float ks = scene.ks(x, y) * s(x, y);
      for (int c = 0; c < 3; ++c)
        out(x, y, c) = base(x, y, c) * (1.f - ks) + scene.spec_color(x, y, c) * ks;
    }
  return out;
}

Image fresnel_field(const ShapeField& shape, const ShadeParams& params) {
  Image f(shape.width(), shape.height(), 1);
  const FresnelParams& fp = params.fresnel;
  for (int y = 0; y < shape.height(); ++y)
    for (int x = 0; x < shape.width(); ++x) {
      const double cos_theta = std::clamp(shape.normal(x, y).z(), 0.0, 1.0);
      double value = fp.fixed_f;
      if (fp.mode == FresnelMode::physical)
        value = fresnel_physical(cos_theta, params.optics.eta, fp.sp_weight);
      else if (fp.mode == FresnelMode::artistic)
        value = fresnel_artistic(std::sqrt(1.0 - cos_theta * cos_theta), fp);
      f(x, y) = float(value);
    }
  return f;
}

GlobalFields global_fields(const Scene& scene, std::span<const LightSpec> lights,
                           const ShadeParams& params, int threads) {
  GlobalFields fields;
  fields.s = specular_field(scene, lights, params, threads);
  fields.reflection = warp_environment(scene.shape, scene.env, params.optics, params.env_blur, threads);
  auto refraction = warp_background(scene.shape, scene.bg, params.optics, params.bg_blur, threads);
  fields.refraction = std::move(refraction.image);
  fields.tir = std::move(refraction.tir);
  fields.fresnel = fresnel_field(scene.shape, params);
  return fields;
}

Image shade_global(const Image& base, const Scene& scene, const GlobalFields& fields,
                   const ShadeParams& params) {
  require_same_grid(base, scene.spec_color, "base");
  require_same_grid(fields.reflection, base, "reflection");
  require_same_grid(fields.refraction, base, "refraction");
  require_same_grid(fields.fresnel, base, "fresnel");
  require_same_grid(fields.s, base, "s");
  Image out = base;
  for (int y = 0; y < base.height(); ++y)
    for (int x = 0; x < base.width(); ++x) {
      const std::size_t i = std::size_t(y) * base.width() + x;
      const float f = (!fields.tir.empty() && fields.tir[i]) ? 1.f : fields.fresnel(x, y);
      const float s = fields.s(x, y);
      const float ks = scene.ks(x, y);
      const Color cm = fields.reflection.color(x, y);
      const Color ct = fields.refraction.color(x, y);
      for (int c = 0; c < 3; ++c) {
        const float mixed = cm[c] * f + ct[c] * (1.f - f) + s * scene.spec_color(x, y, c);
        const float c2 = clamp_and_step(mixed, params.global_ramp);
        out(x, y, c) = base(x, y, c) * (1.f - ks * s) + c2 * ks;
      }
    }
  return out;
}

Image render(const Scene& scene, std::span<const LightSpec> lights, const ShadeParams& params,
             const RenderOptions& options) {
  validate(params);
  const int threads = std::max(1, options.threads);
  const Image omega1 = diffuse_field(scene, lights, params, threads);
  const Image base = shade_diffuse(scene, omega1);
  if ((scene.ks.samples() > 0.f).any()) {
    const GlobalFields fields = global_fields(scene, lights, params, threads);
    return clamp01(shade_global(base, scene, fields, params));
  }
  return clamp01(shade_specular(base, scene, specular_field(scene, lights, params, threads)));
}

}  // namespace dynpaint
