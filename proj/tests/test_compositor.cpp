#include <doctest.h>

#include <cmath>
#include <random>

#include "dynpaint/compositor.hpp"
#include "test_util.hpp"

using namespace dynpaint;

namespace {

Scene flat_scene(int w, int h, float i0, float i1) {
  return make_scene(test::flat_shape(w, h), Image(w, h, 3, i0), Image(w, h, 3, i1),
                    Image(w, h, 3, 0.f), Image(w, h, 3, 0.f));
}

Scene random_scene(int n, unsigned seed, bool with_ks) {
  const Image normals = test::random_image(n, n, 3, seed);
  Image upper = normals;
  // Keep every normal facing the eye.
  for (int y = 0; y < n; ++y)
    for (int x = 0; x < n; ++x) upper(x, y, 2) = 0.55f + 0.45f * normals(x, y, 2);
  return make_scene(decode_normal_map(upper), test::random_image(n, n, 3, seed + 1),
                    test::random_image(n, n, 3, seed + 2), test::random_image(n + 3, n, 3, seed + 3),
                    test::random_image(n, n + 5, 3, seed + 4),
                    with_ks ? test::random_image(n, n, 1, seed + 5) : Image{},
                    test::random_image(n, n, 3, seed + 6));
}

}  // namespace

TEST_CASE("diffuse_field examples") {
  const Scene scene = flat_scene(5, 4, 0.f, 1.f);
  ShadeParams params;
  const std::vector<LightSpec> white{LightSpec::directional(Vec3(0, 0, 1))};
  const Image omega = diffuse_field(scene, white, params);
  CHECK((omega.samples() == 1.f).all());

  const std::vector<LightSpec> red{LightSpec::directional(Vec3(0, 0, 1), Eigen::Array3d(1, 0, 0))};
  const Image o_red = diffuse_field(scene, red, params);
  const Image o_dark = complement(o_red);
  CHECK((o_red.color(2, 2) == Color(1, 0, 0)).all());
  CHECK((o_dark.color(2, 2) == Color(0, 1, 1)).all());

  // Each light alone gives 0.6; the sum clamps.
  const std::vector<LightSpec> two{LightSpec::directional(Vec3(0.8, 0, 0.6)),
                                   LightSpec::directional(Vec3(-0.8, 0, 0.6))};
  const Image single = diffuse_field(scene, std::span(two).first(1), params);
  CHECK(single(1, 1, 0) == doctest::Approx(0.6).epsilon(1e-6));
  CHECK((diffuse_field(scene, two, params).samples() == 1.f).all());

  CHECK_THROWS_AS(diffuse_field(scene, std::span<const LightSpec>{}, params), Error);
}

TEST_CASE("partition of unity holds exactly") {
  const Scene scene = random_scene(24, 10, false);
  ShadeParams params;
  params.diffuse_ramp = {-0.3, 0.9, StepType::smooth};
  const std::vector<LightSpec> lights{
      LightSpec::directional(Vec3(0.3, 0.2, 0.9), Eigen::Array3d(0.9, 0.4, 0.1)),
      LightSpec::point(Vec3(0.1, 0.9, 0.5), Eigen::Array3d(0.2, 0.3, 0.8))};
  for (const ShadowMode mode : {ShadowMode::classic, ShadowMode::cos_theta}) {
    params.shadow_enabled = true;
    params.shadow_mode = mode;
    const Image o1 = diffuse_field(scene, lights, params);
    const Image o0 = complement(o1);
    CHECK(((o0.samples() + o1.samples()) == 1.f).all());
    CHECK((o1.samples() >= 0.f).all());
    CHECK((o1.samples() <= 1.f).all());
  }
}

TEST_CASE("shade_diffuse examples") {
  const Scene scene = random_scene(10, 20, false);
  CHECK(shade_diffuse(scene, Image(10, 10, 3, 1.f)) == scene.i1);
  CHECK(shade_diffuse(scene, Image(10, 10, 3, 0.f)) == scene.i0);
  const Scene bw = flat_scene(6, 6, 0.f, 1.f);
  CHECK((shade_diffuse(bw, Image(6, 6, 3, 0.5f)).samples() == 0.5f).all());
  CHECK_THROWS_AS(shade_diffuse(bw, Image(5, 6, 3, 0.5f)), DimensionMismatchError);
}

TEST_CASE("shade_specular examples") {
  Scene scene = flat_scene(4, 4, 0.f, 1.f);
  const Image base = test::random_image(4, 4, 3, 30);
  CHECK(shade_specular(base, scene, test::random_image(4, 4, 1, 31)) == base);

  scene.ks = Image(4, 4, 1, 1.f);
  CHECK((shade_specular(base, scene, Image(4, 4, 1, 1.f)).samples() == 1.f).all());
  const Image out = shade_specular(Image(4, 4, 3, 0.4f), scene, Image(4, 4, 1, 0.5f));
  CHECK(out(2, 3, 1) == doctest::Approx(0.7).epsilon(1e-7));
}

TEST_CASE("shade_global examples") {
  const int n = 6;
  Scene scene = flat_scene(n, n, 0.f, 0.f);
  scene.ks = Image(n, n, 1, 1.f);
  GlobalFields fields;
  fields.s = Image(n, n, 1, 0.f);
  fields.reflection = test::random_image(n, n, 3, 40);
  fields.refraction = test::random_image(n, n, 3, 41);
  fields.fresnel = Image(n, n, 1, 0.f);
  ShadeParams params;
  const Image black(n, n, 3, 0.f);
  CHECK(shade_global(black, scene, fields, params) == fields.refraction);
  fields.fresnel = Image(n, n, 1, 1.f);
  CHECK(shade_global(black, scene, fields, params) == fields.reflection);

  // The TIR mask overrides F.
  fields.fresnel = Image(n, n, 1, 0.f);
  fields.tir.assign(std::size_t(n) * n, 0);
  fields.tir[7] = 1;
  const Image masked = shade_global(black, scene, fields, params);
  CHECK((masked.color(1, 1) == fields.reflection.color(1, 1)).all());
  CHECK((masked.color(2, 1) == fields.refraction.color(2, 1)).all());

  // Opaque paintings pass through.
  scene.ks = Image(n, n, 1, 0.f);
  const Image base = test::random_image(n, n, 3, 42);
  CHECK(shade_global(base, scene, fields, params) == base);

  // Hand evaluation: base 0.2, ks 0.5, s 0.4, C2 white, F 0.25, C_M 0.8, C_T 0.4.
  scene.ks = Image(n, n, 1, 0.5f);
  fields.tir.clear();
  fields.s = Image(n, n, 1, 0.4f);
  fields.fresnel = Image(n, n, 1, 0.25f);
  fields.reflection = Image(n, n, 3, 0.8f);
  fields.refraction = Image(n, n, 3, 0.4f);
  const double c2 = std::min(1.0, 0.8 * 0.25 + 0.4 * 0.75 + 0.4);
  const double expected = 0.2 * (1 - 0.5 * 0.4) + c2 * 0.5;
  CHECK(shade_global(Image(n, n, 3, 0.2f), scene, fields, params)(3, 3, 2) ==
        doctest::Approx(expected).epsilon(1e-6));
}

TEST_CASE("render examples") {
  const std::vector<LightSpec> overhead{LightSpec::directional(Vec3(0, 0, 1))};
  const std::vector<LightSpec> behind{LightSpec::directional(Vec3(0, 0, -1))};
  const Scene scene = flat_scene(16, 12, 0.f, 1.f);
  ShadeParams params;
  CHECK((render(scene, overhead, params).samples() == 1.f).all());
  CHECK((render(scene, behind, params).samples() == 0.f).all());

  SUBCASE("flat pixels of a transparent hemisphere show the background") {
    const int n = 48;
    const ShapeField ball = decode_normal_map(procedural_hemisphere(n, 0.7));
    const Image bg = test::random_image(n, n, 3, 50);
    const Scene glass = make_scene(ball, Image(n, n, 3, 0.f), Image(n, n, 3, 0.f),
                                   test::random_image(n, n, 3, 51), bg, Image(n, n, 1, 1.f));
    ShadeParams p;
    p.fresnel.mode = FresnelMode::fixed;
    p.fresnel.fixed_f = 0.0;
    // R.z = 0.8 on flat pixels stays below the specular ramp.
    const std::vector<LightSpec> side{LightSpec::directional(Vec3(0.6, 0, 0.8))};
    const Image out = render(glass, side, p);
    int flat = 0;
    for (int y = 0; y < n; ++y)
      for (int x = 0; x < n; ++x)
        if (Vec3(ball.normal(x, y)) == Vec3::UnitZ()) {
          ++flat;
          CHECK((out.color(x, y) == bg.color(x, y)).all());
        }
    CHECK(flat > n * n / 2);
  }
}

TEST_CASE("diffuse and specular stages are convex combinations") {
  for (unsigned seed : {60u, 61u, 62u}) {
    const Scene scene = random_scene(20, seed, false);
    ShadeParams params;
    const std::vector<LightSpec> lights{LightSpec::directional(Vec3(0.2, -0.3, 0.9)),
                                        LightSpec::point(Vec3(0.8, 0.1, 0.4))};
    const Image out = render(scene, lights, params);
    const auto lo = scene.i0.samples().min(scene.i1.samples());
    const auto hi = scene.i0.samples().max(scene.i1.samples());
    CHECK((out.samples() >= lo).all());
    CHECK((out.samples() <= hi).all());

    Scene speckled = scene;
    speckled.ks = test::random_image(20, 20, 1, seed + 100);
    const Image base = test::random_image(20, 20, 3, seed + 200);
    const Image s = specular_field(scene, lights, params);
    const Image spec = shade_specular(base, speckled, s);
    const float tol = 1e-6f;
    CHECK((spec.samples() >= base.samples().min(scene.spec_color.samples()) - tol).all());
    CHECK((spec.samples() <= base.samples().max(scene.spec_color.samples()) + tol).all());
  }
}

TEST_CASE("cos-theta shadows match classic shading under a zenith light") {
  const int n = 64;
  const ShapeField ball = decode_normal_map(procedural_hemisphere(n, 0.8));
  const Scene scene = make_scene(ball, Image(n, n, 3, 0.f), Image(n, n, 3, 1.f),
                                 Image(n, n, 3, 0.f), Image(n, n, 3, 0.f));
  const std::vector<LightSpec> zenith{LightSpec::directional(Vec3(0, 0, 1))};
  ShadeParams params;
  params.shadow_enabled = true;
  params.shadow_mode = ShadowMode::classic;
  const Image classic = diffuse_field(scene, zenith, params);
  params.shadow_mode = ShadowMode::cos_theta;
  const Image marched = diffuse_field(scene, zenith, params);
  const double tol = 2 * params.shadow.a / params.shadow.d;
  CHECK((classic.samples() - marched.samples()).abs().maxCoeff() <= tol);
}

TEST_CASE("renders are deterministic across worker counts") {
  Scene scene = random_scene(37, 70, true);
  ShadeParams params;
  params.shadow_enabled = true;
  params.env_blur = 1.5;
  params.bg_blur = 0.7;
  params.optics.refraction_mode = RefractionMode::artistic;
  const std::vector<LightSpec> lights{LightSpec::directional(Vec3(0.4, 0.1, 0.8)),
                                      LightSpec::point(Vec3(0.2, 0.7, 0.3))};
  const Image a = render(scene, lights, params, {1});
  CHECK(render(scene, lights, params, {1}) == a);
  for (const int threads : {2, 3, 8}) CHECK(render(scene, lights, params, {threads}) == a);
  CHECK((a.samples() >= 0.f).all());
  CHECK((a.samples() <= 1.f).all());
}

TEST_CASE("scene and parameter validation") {
  const ShapeField flat = test::flat_shape(4, 4);
  CHECK_THROWS_AS(make_scene(flat, Image(4, 3, 3), Image(4, 4, 3), Image(2, 2, 3), Image(2, 2, 3)),
                  DimensionMismatchError);
  CHECK_THROWS_AS(make_scene(flat, Image(4, 4, 3), Image(4, 4, 3), Image(2, 2, 3), Image(2, 2, 3),
                             Image(4, 4, 1, 1.5f)),
                  Error);
  const Scene ok = make_scene(flat, Image(4, 4, 1, 0.3f), Image(4, 4, 3), Image(2, 2, 3), Image(9, 2, 1));
  CHECK(ok.i0.channels() == 3);
  CHECK((ok.spec_color.samples() == 1.f).all());
  CHECK((ok.ks.samples() == 0.f).all());

  ShadeParams params;
  params.env_blur = -1;
  CHECK_THROWS_AS(validate(params), Error);
  params = {};
  params.diffuse_ramp = {0.5, 0.2, StepType::linear};
  CHECK_THROWS_AS(validate(params), Error);
}
