#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "dynpaint/global_illum.hpp"
#include "dynpaint/image.hpp"
#include "dynpaint/local_illum.hpp"
#include "dynpaint/shadow.hpp"
#include "dynpaint/shape.hpp"

namespace dynpaint {

/// The image set of a dynamic painting. i0, i1, ks and spec_color share the
/// shape's pixel grid; env and bg are sampled and may have any size.
struct Scene {
  ShapeField shape;
  Image i0;          // dark diffuse control, RGB
  Image i1;          // bright diffuse control, RGB
  Image env;         // environment / foreground, reflected
  Image bg;          // background, refracted
  Image ks;          // transparency / reflectivity mask, gray
  Image spec_color;  // specular color, RGB

  int width() const { return shape.width(); }
  int height() const { return shape.height(); }
};

/// Fills ks (zero) and spec_color (white) when empty, promotes color
/// channels, and checks the pixel grids agree.
Scene make_scene(ShapeField shape, Image i0, Image i1, Image env, Image bg, Image ks = {},
                 Image spec_color = {});
void validate(const Scene& scene);

enum class ShadowMode { classic, cos_theta };

struct ShadeParams {
  RampParams diffuse_ramp;
  RampParams spec_ramp{0.9, 1.0, StepType::smooth};
  RampParams global_ramp;
  bool shadow_enabled = false;
  // The march ramp is taken from diffuse_ramp; shadow.ramp is not read.
  ShadowParams shadow;
  OpticsParams optics;
  FresnelParams fresnel;
  double env_blur = 0.0;
  double bg_blur = 0.0;
  ShadowMode shadow_mode = ShadowMode::cos_theta;

  bool marches_shadows() const { return shadow_enabled && shadow_mode == ShadowMode::cos_theta; }

  friend bool operator==(const ShadeParams&, const ShadeParams&) = default;
};

void validate(const ShadeParams& params);

/// Colored bright weight: per channel clamp(sum_i t_i color_i, 0, 1), where
/// t_i is the ramped diffuse term or the marched shadow term of light i.
Image diffuse_field(const Scene& scene, std::span<const LightSpec> lights,
                    const ShadeParams& params, int threads = 1);

/// 1 - omega1 per channel.
Image complement(const Image& omega1);

/// C = I0 (1 - omega1) + I1 omega1.
Image shade_diffuse(const Scene& scene, const Image& omega1);

/// Scalar specular field: clamp(sum_i s_i, 0, 1).
Image specular_field(const Scene& scene, std::span<const LightSpec> lights,
                     const ShadeParams& params, int threads = 1);

/// C <- C (1 - ks s) + C2 ks s.
Image shade_specular(const Image& base, const Scene& scene, const Image& s);

struct GlobalFields {
  Image s;                        // specular, gray
  Image reflection;               // C_M
  Image refraction;               // C_T
  Image fresnel;                  // F, gray
  std::vector<std::uint8_t> tir;  // 1 where F is forced to 1
};

/// Per-pixel Fresnel weight from the eye incidence, cos(theta) = N.z.
Image fresnel_field(const ShapeField& shape, const ShadeParams& params);

GlobalFields global_fields(const Scene& scene, std::span<const LightSpec> lights,
                           const ShadeParams& params, int threads = 1);

/// C2' = Clamp&Step(C_M F + C_T (1 - F) + s C2) per channel;
/// C <- C (1 - ks s) + C2' ks.
Image shade_global(const Image& base, const Scene& scene, const GlobalFields& fields,
                   const ShadeParams& params);

struct RenderOptions {
  int threads = 1;
};

/// Diffuse, then global compositing when any ks > 0, else the specular
/// cascade. Output clamped to [0, 1].
Image render(const Scene& scene, std::span<const LightSpec> lights, const ShadeParams& params,
             const RenderOptions& options = {});

}  // namespace dynpaint
