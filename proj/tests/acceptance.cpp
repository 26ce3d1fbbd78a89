// Acceptance run: one PASS/FAIL line per primary criterion. Exits non-zero
// when any criterion fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <string>
#include <thread>
#include <vector>

#include "dynpaint/compositor.hpp"
#include "dynpaint/demo.hpp"
#include "oracles.hpp"
#include "test_util.hpp"

using namespace dynpaint;

namespace {

struct Outcome {
  bool ok = true;
  std::string detail;
};

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::string fmt(const char* f, double a) {
  char buf[128];
  std::snprintf(buf, sizeof buf, f, a);
  return buf;
}

std::string fmt(const char* f, double a, double b) {
  char buf[160];
  std::snprintf(buf, sizeof buf, f, a, b);
  return buf;
}

Vec3 from_angles(double theta_deg, double azimuth_deg) {
  const double t = theta_deg * M_PI / 180;
  const double p = azimuth_deg * M_PI / 180;
  return Vec3(std::sin(t) * std::cos(p), std::sin(t) * std::sin(p), std::cos(t));
}

// 1. Constant height field: t = cos(theta) wherever the marched segment
// stays on the canvas.
Outcome planar_shadow_limit() {
  const int n = 128;
  const ShapeField s = depth_to_shape(Image(n, n, 1, 0.5f), 0.1);
  ShadowParams p;
  p.d = 0.05;
  p.a = 0.001;
  p.K = 400;  // a K = 0.4 covers the longest path d / cos 80 = 0.288
  double worst = 0;
  long checked = 0;
  for (int k = 0; k <= 8; ++k) {
    const double theta = 10.0 * k;
    const double azimuth = 40.0 * k;
    const Vec3 l = from_angles(theta, azimuth);
    const LightSpec light = LightSpec::directional(l);
    // Horizontal reach of the in-matter segment, in pixels, plus one.
    const double reach = p.d * std::tan(theta * M_PI / 180) * n;
    const int mx = int(std::ceil(reach * std::abs(l.x()) / std::max(1e-12, std::hypot(l.x(), l.y())))) + 1;
    const int my = int(std::ceil(reach * std::abs(l.y()) / std::max(1e-12, std::hypot(l.x(), l.y())))) + 1;
    for (int y = 0; y < n; ++y)
      for (int x = 0; x < n; ++x) {
        // Scene +x is image +x; scene +y is image -y.
        if (l.x() > 0 ? x >= n - mx : x < mx) continue;
        if (l.y() > 0 ? y < my : y >= n - my) continue;
        const double t = shadow_term_depth(s, light, x, y, p);
        worst = std::max(worst, std::abs(t - l.z()));
        ++checked;
      }
  }
  return {worst <= 0.02, fmt("max |d/r - cos| = %.5f over %.0f interior samples (tol 0.02)", worst,
                             double(checked))};
}

// 2. Production march (a = d/8) against the dense oracle (a = d/200).
Outcome march_oracle() {
  const int n = 64;
  double worst_fraction = 1.0;
  for (unsigned seed = 1; seed <= 5; ++seed) {
    const ShapeField s = depth_to_shape(oracle::smooth_field(n, seed), 0.1);
    const double elevation = (30.0 + 12.5 * (seed - 1)) * M_PI / 180;
    const Vec3 l(std::cos(elevation) * std::cos(seed), std::cos(elevation) * std::sin(seed),
                 std::sin(elevation));
    ShadowParams p;
    p.d = 0.02;
    p.a = p.d / 8;
    p.K = 256;
    int agree = 0;
    for (int y = 0; y < n; ++y)
      for (int x = 0; x < n; ++x) {
        const double t = shadow_term_depth(s, LightSpec::directional(l), x, y, p);
        const double o = oracle::dense_shadow_depth(s, l, x, y, p.d, p.d / 200, p.K * p.a);
        agree += std::abs(t - o) <= 0.05;
      }
    worst_fraction = std::min(worst_fraction, agree / double(n * n));
  }
  return {worst_fraction >= 0.95,
          fmt("worst field agrees at %.2f%% of pixels (need >= %.0f%%)", 100 * worst_fraction, 95.0)};
}

// 3. Fresnel endpoints.
Outcome fresnel_endpoints() {
  const double f15 = fresnel_physical(1.0, 1.5, 0.5);
  bool ok = std::abs(f15 - 0.04) <= 1e-6;
  for (const double eta : {0.6, 1.0, 5.0 / 3}) ok = ok && fresnel_physical(0.0, eta, 0.5) == 1.0;
  double matched = 0;
  for (const double w : {0.0, 0.5, 1.0}) matched = std::max(matched, fresnel_physical(1.0, 1.0, w));
  ok = ok && matched == 0.0;
  return {ok, fmt("F(1, 1.5) = %.9f; F(0, eta) = 1; F(1, 1) = %.1g", f15, matched)};
}

// 4. Refraction identities.
Outcome refraction_identities() {
  const int w = 64;
  const int h = 48;
  const ShapeField flat = test::flat_shape(w, h);
  const Image bg = test::random_image(w, h, 3, 4);
  bool identical = true;
  OpticsParams optics;
  for (const double eta : {0.6, 1.0, 1.667}) {
    optics.eta = eta;
    identical = identical && warp_background(flat, bg, optics, 0.0).image == bg;
  }
  optics.refraction_mode = RefractionMode::artistic;
  optics.mu = 0.0;
  identical = identical && warp_background(flat, bg, optics, 0.0).image == bg;

  std::mt19937 rng(44);
  double worst = 0;
  for (int i = 0; i < 1000; ++i) {
    const auto t = refract_eye(test::random_upper_unit(rng), 1.0);
    worst = std::max(worst, t ? (*t - Vec3(0, 0, -1)).norm() : 1.0);
  }
  return {identical && worst <= 1e-6,
          std::string(identical ? "flat warps bit-identical" : "flat warp differs") +
              fmt("; max |T(eta=1) - (0,0,-1)| = %.2g (tol 1e-6)", worst)};
}

// 5. Artistic refraction continuity and monotone offsets.
Outcome artistic_refraction() {
  std::mt19937 rng(55);
  double jump = 0;
  for (int i = 0; i < 1000; ++i) {
    Vec3 v = test::random_upper_unit(rng);
    v.z() = -v.z();
    const Vec3 n = test::random_upper_unit(rng);
    jump = std::max(jump, (refract_eye_artistic(v, n, 1e-6) - refract_eye_artistic(v, n, -1e-6)).norm());
  }

  const int size = 128;
  const ShapeField ball = decode_normal_map(procedural_hemisphere(size, 0.8));
  OpticsParams optics;
  optics.refraction_mode = RefractionMode::artistic;
  std::uniform_int_distribution<int> coord(0, size - 1);
  int sampled = 0;
  int violations = 0;
  while (sampled < 50) {
    const int x = coord(rng);
    const int y = coord(rng);
    if (Vec3(ball.normal(x, y)) == Vec3::UnitZ()) continue;  // off-centre and on the disc
    ++sampled;
    double prev = -1;
    for (const double mu : {0.0, 0.25, 0.5, 0.75, 1.0}) {
      optics.mu = mu;
      const double m = refraction_offset(ball.normal(x, y), optics, size, size)->norm();
      violations += m < prev;
      prev = m;
    }
  }
  return {jump <= 1e-4 && violations == 0,
          fmt("max |T(+1e-6) - T(-1e-6)| = %.2g (tol 1e-4); ", jump) +
              fmt("%.0f of %.0f pixels with decreasing offsets", violations, sampled)};
}

// 6. Barycentric algebra on 64x64 fixtures.
Outcome barycentric_algebra() {
  const int n = 64;
  Image normals = test::random_image(n, n, 3, 60);
  for (int y = 0; y < n; ++y)
    for (int x = 0; x < n; ++x) normals(x, y, 2) = 0.6f + 0.4f * normals(x, y, 2);
  Scene scene = make_scene(decode_normal_map(normals), test::random_image(n, n, 3, 61),
                           test::random_image(n, n, 3, 62), test::random_image(n, n, 3, 63),
                           test::random_image(n, n, 3, 64), {}, test::random_image(n, n, 3, 65));
  ShadeParams params;
  params.diffuse_ramp = {-1, 1, StepType::smooth};
  const std::vector<LightSpec> lights{
      LightSpec::directional(Vec3(0.3, 0.4, 0.8), Eigen::Array3d(0.9, 0.5, 0.2)),
      LightSpec::point(Vec3(0.9, 0.1, 0.3), Eigen::Array3d(0.3, 0.6, 0.9))};
  const Image o1 = diffuse_field(scene, lights, params);
  const bool unity = ((complement(o1).samples() + o1.samples()) == 1.f).all();
  const bool eq4 = shade_diffuse(scene, Image(n, n, 3, 1.f)) == scene.i1 &&
                   shade_diffuse(scene, Image(n, n, 3, 0.f)) == scene.i0;

  const Image base = shade_diffuse(scene, o1);
  const Image s = specular_field(scene, lights, params);
  bool eq5 = shade_specular(base, scene, s) == base;  // ks = 0
  scene.ks = Image(n, n, 1, 1.f);
  eq5 = eq5 && shade_specular(base, scene, Image(n, n, 1, 1.f)) == scene.spec_color;

  GlobalFields fields;
  fields.s = Image(n, n, 1, 0.f);
  fields.reflection = test::random_image(n, n, 3, 66);
  fields.refraction = test::random_image(n, n, 3, 67);
  fields.fresnel = Image(n, n, 1, 0.f);
  const Image black(n, n, 3, 0.f);
  bool eq6 = shade_global(black, scene, fields, params) == fields.refraction;
  fields.fresnel = Image(n, n, 1, 1.f);
  eq6 = eq6 && shade_global(black, scene, fields, params) == fields.reflection;
  scene.ks = Image(n, n, 1, 0.f);
  eq6 = eq6 && shade_global(base, scene, fields, params) == base;

  auto mark = [](bool b) { return b ? "ok" : "FAILED"; };
  return {unity && eq4 && eq5 && eq6, std::string("unity ") + mark(unity) + ", diffuse blend " + mark(eq4) +
                                          ", specular cascade " + mark(eq5) + ", global composite " + mark(eq6)};
}

// 7. Clamp&step contract.
Outcome clamp_step_contract() {
  bool ok = clamp_and_step(0.0, {-1.0, 1.0, StepType::linear}) == 0.5;
  for (const StepType step : {StepType::smooth, StepType::smoother}) {
    const RampParams unit{0.0, 1.0, step};
    ok = ok && clamp_and_step(0.0, unit) == 0.0 && clamp_and_step(0.5, unit) == 0.5 &&
         clamp_and_step(1.0, unit) == 1.0;
    double prev = -1;
    for (int i = 0; i <= 10000; ++i) {
      const double v = clamp_and_step(-0.5 + 2.0 * i / 10000, unit);
      ok = ok && v >= prev;
      prev = v;
    }
  }
  const double eps = 1e-4;
  const RampParams smooth{0.0, 1.0, StepType::smooth};
  const RampParams smoother{0.0, 1.0, StepType::smoother};
  double smooth_slope = 0;
  double smoother_slope = 0;
  double smoother_delta = 0;
  for (const double end : {0.0, 1.0}) {
    const double t = end == 0.0 ? eps : 1.0 - eps;
    smooth_slope = std::max(smooth_slope, std::abs(clamp_and_step(t, smooth) - clamp_and_step(end, smooth)) / eps);
    const double delta = std::abs(clamp_and_step(t, smoother) - clamp_and_step(end, smoother));
    smoother_delta = std::max(smoother_delta, delta);
    smoother_slope = std::max(smoother_slope, delta / eps);
  }
  // The smoother-step difference quotient is 10e^2 - 15e^3 + 6e^4 = 9.9985e-8
  // at e = 1e-4, so the 1e-8 figure can only bound the difference itself.
  const double analytic = 10 * eps * eps - 15 * eps * eps * eps + 6 * eps * eps * eps * eps;
  ok = ok && smooth_slope <= 3e-4 && smoother_delta <= 1e-8 &&
       std::abs(smoother_slope - analytic) <= 1e-11;  // rounding of f near 1, over e
  return {ok, fmt("Gooch(0) = 0.5; smooth slope %.5g (<= 3e-4); ", smooth_slope) +
                  fmt("smoother |f(e)-f(0)| %.4g (<= 1e-8), slope %.5g (analytic 10e^2-15e^3+6e^4)", smoother_delta,
                      smoother_slope)};
}

// 8. Determinism and speed.
Scene performance_scene(int size, bool depth) {
  const Image depth_img = demo::relief_depth(size);
  ShapeField shape = depth ? depth_to_shape(depth_img, 0.1) : decode_normal_map(procedural_hemisphere(size, 0.8));
  const Color dark(0.1f, 0.1f, 0.2f);
  return make_scene(std::move(shape), demo::checker(size, size, 16, dark, Color(0.2f, 0.15f, 0.1f)),
                    demo::checker(size, size, 16, Color(0.9f, 0.8f, 0.6f), Color(1.f, 0.95f, 0.8f)),
                    demo::vertical_gradient(size, size, Color(1, 1, 1), Color(0.3f, 0.5f, 0.9f)),
                    demo::grid_lines(size, size, 16, Color(1, 1, 1), Color(0.1f, 0.1f, 0.1f)),
                    demo::disc_mask(size, 0.6));
}

double median_ms(const std::function<void()>& f, int runs) {
  std::vector<double> ms;
  for (int i = 0; i < runs; ++i) {
    const auto t0 = Clock::now();
    f();
    ms.push_back(1000 * seconds_since(t0));
  }
  std::sort(ms.begin(), ms.end());
  return ms[ms.size() / 2];
}

Outcome determinism_and_speed() {
  const Scene big = performance_scene(512, true);
  ShadeParams params;
  params.shadow_enabled = true;
  params.shadow.K = 256;
  params.env_blur = 2.0;
  params.bg_blur = 1.0;
  const std::vector<LightSpec> lights{LightSpec::directional(Vec3(0.5, -0.4, 0.75))};
  const Image one = render(big, lights, params, {1});
  const Image eight = render(big, lights, params, {8});
  const bool same = one == eight && render(big, lights, params, {3}) == one;

  const double t1 = median_ms([&] { render(big, lights, params, {1}); }, 3);
  const double t8 = median_ms([&] { render(big, lights, params, {8}); }, 3);
  const Scene small = performance_scene(256, false);
  ShadeParams fast;
  const double t_small = median_ms([&] { render(small, lights, fast, {1}); }, 5);

  const unsigned cores = std::max(1u, std::thread::hardware_concurrency());
  const bool ok = same && t1 < 2000 && t8 < 500 && t_small < 50;
  return {ok, std::string(same ? "bit-identical across 1/3/8 workers" : "worker counts DIFFER") +
                  fmt("; 512^2 shadows %.0f ms (1 worker, < 2000), ", t1) +
                  fmt("%.0f ms (8 workers on %.0f cores, < 500); ", t8, cores) +
                  fmt("256^2 no shadows %.1f ms (< 50)", t_small)};
}

// 9. Mean brightness over the eta sweep is smallest for matched media.
Outcome eta_sweep() {
  const int n = 128;
  const Scene scene = make_scene(decode_normal_map(procedural_hemisphere(n, 0.9)), Image(n, n, 3, 0.f),
                                 Image(n, n, 3, 0.f), Image(n, n, 3, 1.f), Image(n, n, 3, 0.f),
                                 Image(n, n, 1, 1.f));
  ShadeParams params;
  params.fresnel.mode = FresnelMode::physical;
  params.optics.refraction_mode = RefractionMode::physical;
  const std::vector<LightSpec> lights{LightSpec::directional(Vec3(0.6, 0, 0.8))};
  std::vector<double> means;
  for (const double eta : {0.6, 0.8, 1.0, 4.0 / 3, 5.0 / 3}) {
    params.optics.eta = eta;
    means.push_back(render(scene, lights, params).samples().cast<double>().mean());
  }
  const bool ok = means[0] > means[1] && means[1] > means[2] && means[2] < means[3] && means[3] < means[4];
  std::string detail = "means";
  for (const double m : means) detail += fmt(" %.4f", m);
  detail += " for eta 0.6, 0.8, 1, 4/3, 5/3";
  return {ok, detail};
}

}  // namespace

int main() {
  struct Criterion {
    int id;
    const char* name;
    double limit_s;  // 0 means the limits live inside the check
    Outcome (*run)();
  };
  const Criterion criteria[] = {
      {1, "planar-shadow limit", 10, planar_shadow_limit},
      {2, "shadow-march oracle equivalence", 30, march_oracle},
      {3, "Fresnel endpoints", 1, fresnel_endpoints},
      {4, "refraction identities", 5, refraction_identities},
      {5, "artistic refraction continuity and monotonicity", 5, artistic_refraction},
      {6, "barycentric algebra", 5, barycentric_algebra},
      {7, "clamp&step contract", 1, clamp_step_contract},
      {8, "determinism and performance", 0, determinism_and_speed},
      {9, "eta sweep minimum at matched media", 10, eta_sweep},
  };
  int failures = 0;
  for (const Criterion& c : criteria) {
    const auto t0 = Clock::now();
    Outcome out;
    try {
      out = c.run();
    } catch (const std::exception& e) {
      out = {false, std::string("threw: ") + e.what()};
    }
    const double s = seconds_since(t0);
    const bool in_time = c.limit_s == 0 || s < c.limit_s;
    const bool pass = out.ok && in_time;
    failures += !pass;
    std::printf("[%s] criterion %d, %s: %s; %.3f s", pass ? "PASS" : "FAIL", c.id, c.name,
                out.detail.c_str(), s);
    if (c.limit_s > 0) std::printf(" (limit %.0f s)", c.limit_s);
    std::printf("\n");
    std::fflush(stdout);
  }
  std::printf("%d of %zu primary criteria passed\n", int(std::size(criteria)) - failures,
              std::size(criteria));
  return failures == 0 ? 0 : 1;
}
