#pragma once

#include "dynpaint/local_illum.hpp"
#include "dynpaint/shape.hpp"

namespace dynpaint {

/// Ray-march controls for the integrated diffuse/shadow term t = d / r.
struct ShadowParams {
  double d = 0.02;       // under-surface offset, scene units
  double a = 0.0025;     // step length, scene units; 0 < a < d
  int K = 256;           // step budget for directional lights
  RampParams ramp;

  friend bool operator==(const ShadowParams&, const ShadowParams&) = default;
};

void validate(const ShadowParams& params);

// Shadow terms for the pixel (x, y). The march starts at P0 = P_S - d N_S
// and samples the midpoints P0 + (k + 1/2) a L. r is the marched length
// found inside matter (never less than d). Samples outside the canvas never
// block. Both return 0 when the light is not in front of the canvas.

/// Depth-map variant; blocking tests the bilinear height field.
double shadow_term_depth(const ShapeField& shape, const LightSpec& light, int x, int y,
                         const ShadowParams& params);

/// Normal-map variant; the blocking height is integrated along the ray from
/// the slopes of the traversed normals, starting at 0 at the shading point.
double shadow_term_normalmap(const ShapeField& shape, const LightSpec& light, int x, int y,
                             const ShadowParams& params);

/// Dispatches on shape.kind().
double shadow_term(const ShapeField& shape, const LightSpec& light, int x, int y,
                   const ShadowParams& params);

/// Scene-space position of a pixel centre. The canvas is the unit square
/// with y up, so row 0 lies at the top (y near 1).
inline Vec3 shading_point(const ShapeField& shape, int x, int y) {
  return Vec3((x + 0.5) / shape.width(), 1.0 - (y + 0.5) / shape.height(), shape.height_at(x, y));
}

}  // namespace dynpaint
