#include "dynpaint/scene_io.hpp"

#include <cmath>
#include <fstream>
#include <set>

namespace dynpaint {

using nlohmann::json;

namespace {

// Strict view over one JSON object: every key must be consumed.
class ObjectReader {
 public:
  ObjectReader(const json& object, std::string path) : object_(object), path_(std::move(path)) {
    if (!object_.is_object()) throw SceneError(path_, "\"" + path_ + "\" must be an object");
  }

  std::string key_path(std::string_view key) const {
    return path_.empty() ? std::string(key) : path_ + "." + std::string(key);
  }

  const json* find(std::string_view key) {
    seen_.insert(std::string(key));
    const auto it = object_.find(std::string(key));
    if (it == object_.end() || it->is_null()) return nullptr;
    return &*it;
  }

  const json& require(std::string_view key) {
    const json* value = find(key);
    if (!value) throw MissingKeyError(key_path(key));
    return *value;
  }

  double number(std::string_view key, double fallback) {
    const json* value = find(key);
    if (!value) return fallback;
    if (!value->is_number()) throw SceneError(key_path(key), "\"" + key_path(key) + "\" must be a number");
    return value->get<double>();
  }

  int integer(std::string_view key, int fallback) {
    const json* value = find(key);
    if (!value) return fallback;
    if (!value->is_number_integer())
      throw SceneError(key_path(key), "\"" + key_path(key) + "\" must be an integer");
    return value->get<int>();
  }

  bool boolean(std::string_view key, bool fallback) {
    const json* value = find(key);
    if (!value) return fallback;
    if (!value->is_boolean()) throw SceneError(key_path(key), "\"" + key_path(key) + "\" must be a boolean");
    return value->get<bool>();
  }

  std::string string(const json& value, std::string_view key) const {
    if (!value.is_string()) throw SceneError(key_path(key), "\"" + key_path(key) + "\" must be a string");
    return value.get<std::string>();
  }

  std::optional<std::string> optional_string(std::string_view key) {
    const json* value = find(key);
    if (!value) return std::nullopt;
    return string(*value, key);
  }

  std::string required_string(std::string_view key) { return string(require(key), key); }

  template <typename Enum, std::size_t N>
  Enum choice(std::string_view key, Enum fallback,
              const std::pair<std::string_view, Enum> (&names)[N]) {
    const json* value = find(key);
    if (!value) return fallback;
    const std::string text = string(*value, key);
    for (const auto& [name, e] : names)
      if (name == text) return e;
    throw RangeError(key_path(key), "unknown value \"" + text + "\"");
  }

  void finish() const {
    for (const auto& [key, value] : object_.items())
      if (!seen_.count(key)) throw UnknownKeyError(key_path(key));
  }

 private:
  const json& object_;
  std::string path_;
  std::set<std::string> seen_;
};

constexpr std::pair<std::string_view, ShapeKind> kShapeKinds[] = {
    {"normalmap", ShapeKind::normal_map}, {"depthmap", ShapeKind::depth_map}};
// First name per value is the serialized spelling; "uphill" is accepted as an alias.
constexpr std::pair<std::string_view, GradientSign> kGradientSigns[] = {
    {"paper", GradientSign::uphill}, {"uphill", GradientSign::uphill},
    {"outward", GradientSign::outward}};
constexpr std::pair<std::string_view, StepType> kStepTypes[] = {
    {"linear", StepType::linear}, {"smooth-step", StepType::smooth},
    {"smoother-step", StepType::smoother}};
constexpr std::pair<std::string_view, LightKind> kLightKinds[] = {
    {"directional", LightKind::directional}, {"point", LightKind::point}};
constexpr std::pair<std::string_view, RefractionMode> kRefractionModes[] = {
    {"physical", RefractionMode::physical}, {"artistic", RefractionMode::artistic}};
constexpr std::pair<std::string_view, FresnelMode> kFresnelModes[] = {
    {"physical", FresnelMode::physical}, {"artistic", FresnelMode::artistic},
    {"fixed", FresnelMode::fixed}};
constexpr std::pair<std::string_view, ShadowMode> kShadowModes[] = {
    {"classic", ShadowMode::classic}, {"cos-theta", ShadowMode::cos_theta}};

template <typename Enum, std::size_t N>
std::string name_of(Enum e, const std::pair<std::string_view, Enum> (&names)[N]) {
  for (const auto& [name, value] : names)
    if (value == e) return std::string(name);
  return {};
}

void check(bool ok, const std::string& key, const std::string& what) {
  if (!ok) throw RangeError(key, what);
}

Vec3 read_vec3(const json& value, const std::string& key) {
  if (!value.is_array() || value.size() != 3)
    throw SceneError(key, "\"" + key + "\" must be an array of 3 numbers");
  Vec3 v;
  for (int i = 0; i < 3; ++i) {
    if (!value[std::size_t(i)].is_number())
      throw SceneError(key, "\"" + key + "\" must be an array of 3 numbers");
    v[i] = value[std::size_t(i)].get<double>();
  }
  check(v.allFinite(), key, "must be finite");
  return v;
}

RampParams read_ramp(ObjectReader& parent, std::string_view key, const RampParams& fallback) {
  const json* value = parent.find(key);
  if (!value) return fallback;
  ObjectReader r(*value, parent.key_path(key));
  RampParams ramp;
  ramp.t0 = r.number("t0", fallback.t0);
  ramp.t1 = r.number("t1", fallback.t1);
  ramp.step = r.choice("step", fallback.step, kStepTypes);
  r.finish();
  check(ramp.t0 <= ramp.t1, r.key_path("t1"), "t1 must not be below t0");
  return ramp;
}

LightSpec read_light(const json& value, const std::string& path) {
  ObjectReader r(value, path);
  LightSpec light;
  light.kind = r.choice("kind", LightKind::directional, kLightKinds);
  if (light.kind == LightKind::directional) {
    Vec3 dir = read_vec3(r.require("direction"), r.key_path("direction"));
    const double len = dir.norm();
    check(len > 1e-12, r.key_path("direction"), "direction must be non-zero");
    if (std::abs(len - 1.0) > 1e-12) dir /= len;
    light.direction = dir;
  } else {
    light.position = read_vec3(r.require("position"), r.key_path("position"));
  }
  if (const json* color = r.find("color")) {
    const Vec3 c = read_vec3(*color, r.key_path("color"));
    check((c.array() >= 0.0).all() && (c.array() <= 1.0).all(), r.key_path("color"),
          "components must lie in [0, 1]");
    light.color = c.array();
  }
  r.finish();
  return light;
}

ShadeParams read_params(const json* value) {
  ShadeParams p;
  if (!value) return p;
  ObjectReader r(*value, "params");
  p.diffuse_ramp = read_ramp(r, "diffuse_ramp", p.diffuse_ramp);
  p.spec_ramp = read_ramp(r, "spec_ramp", p.spec_ramp);
  p.global_ramp = read_ramp(r, "global_ramp", p.global_ramp);

  if (const json* shadow = r.find("shadow")) {
    ObjectReader s(*shadow, "params.shadow");
    p.shadow_enabled = s.boolean("enabled", p.shadow_enabled);
    p.shadow.d = s.number("d", p.shadow.d);
    p.shadow.a = s.number("a", p.shadow.a);
    p.shadow.K = s.integer("K", p.shadow.K);
    s.finish();
    check(p.shadow.d > 0, s.key_path("d"), "d must be positive");
    check(p.shadow.a > 0 && p.shadow.a < p.shadow.d, s.key_path("a"), "a must satisfy 0 < a < d");
    check(p.shadow.K >= 1, s.key_path("K"), "K must be at least 1");
  }

  if (const json* optics = r.find("optics")) {
    ObjectReader o(*optics, "params.optics");
    p.optics.eta = o.number("eta", p.optics.eta);
    p.optics.mu = o.number("mu", p.optics.mu);
    p.optics.refraction_mode = o.choice("refraction_mode", p.optics.refraction_mode, kRefractionModes);
    p.optics.d_env = o.number("d_env", p.optics.d_env);
    p.optics.d_bg = o.number("d_bg", p.optics.d_bg);
    if (o.find("max_offset")) p.optics.max_offset = o.number("max_offset", 0.0);
    o.finish();
    check(p.optics.eta > 0, o.key_path("eta"), "eta must be positive");
    check(p.optics.mu >= -1 && p.optics.mu <= 1, o.key_path("mu"), "mu must lie in [-1, 1]");
    check(p.optics.d_env > 0, o.key_path("d_env"), "d_env must be positive");
    check(p.optics.d_bg > 0, o.key_path("d_bg"), "d_bg must be positive");
    check(!p.optics.max_offset || *p.optics.max_offset > 0, o.key_path("max_offset"),
          "max_offset must be positive");
  }

  if (const json* fresnel = r.find("fresnel")) {
    ObjectReader f(*fresnel, "params.fresnel");
    p.fresnel.mode = f.choice("mode", p.fresnel.mode, kFresnelModes);
    p.fresnel.fixed_f = f.number("fixed_f", p.fresnel.fixed_f);
    p.fresnel.sp_weight = f.number("sp_weight", p.fresnel.sp_weight);
    p.fresnel.x0 = f.number("x0", p.fresnel.x0);
    p.fresnel.x1 = f.number("x1", p.fresnel.x1);
    p.fresnel.blend = f.number("blend", p.fresnel.blend);
    f.finish();
    check(p.fresnel.fixed_f >= 0 && p.fresnel.fixed_f <= 1, f.key_path("fixed_f"), "must lie in [0, 1]");
    check(p.fresnel.sp_weight >= 0 && p.fresnel.sp_weight <= 1, f.key_path("sp_weight"),
          "must lie in [0, 1]");
    check(p.fresnel.x0 >= 0 && p.fresnel.x0 < 1, f.key_path("x0"), "must lie in [0, 1)");
    check(p.fresnel.x1 > p.fresnel.x0 && p.fresnel.x1 <= 1, f.key_path("x1"), "must lie in (x0, 1]");
    check(p.fresnel.blend >= -1 && p.fresnel.blend <= 1, f.key_path("blend"), "must lie in [-1, 1]");
  }

  p.env_blur = r.number("env_blur", p.env_blur);
  p.bg_blur = r.number("bg_blur", p.bg_blur);
  p.shadow_mode = r.choice("shadow_mode", p.shadow_mode, kShadowModes);
  r.finish();
  check(p.env_blur >= 0, "params.env_blur", "must be non-negative");
  check(p.bg_blur >= 0, "params.bg_blur", "must be non-negative");
  return p;
}

json ramp_json(const RampParams& ramp) {
  return {{"t0", ramp.t0}, {"t1", ramp.t1}, {"step", name_of(ramp.step, kStepTypes)}};
}

json vec_json(const Vec3& v) { return json::array({v.x(), v.y(), v.z()}); }

std::pair<int, int> line_and_column(std::string_view text, std::size_t byte) {
  int line = 1;
  int column = 1;
  for (std::size_t i = 0; i + 1 < byte && i < text.size(); ++i) {
    if (text[i] == '\n') {
      ++line;
      column = 1;
    } else {
      ++column;
    }
  }
  return {line, column};
}

}  // namespace

SceneDoc scene_from_json(const json& value) {
  ObjectReader r(value, "");
  SceneDoc doc;
  doc.shape = r.required_string("shape");
  doc.shape_kind = r.choice("shape_kind", doc.shape_kind, kShapeKinds);
  doc.height_scale = r.number("height_scale", doc.height_scale);
  check(doc.height_scale > 0, "height_scale", "must be positive");
  doc.gradient_sign = r.choice("gradient_sign", doc.gradient_sign, kGradientSigns);
  doc.i0 = r.required_string("i0");
  doc.i1 = r.required_string("i1");
  doc.env = r.required_string("env");
  doc.bg = r.required_string("bg");
  doc.ks = r.optional_string("ks");
  doc.spec_color = r.optional_string("spec_color");

  const json& lights = r.require("lights");
  if (!lights.is_array()) throw SceneError("lights", "\"lights\" must be an array");
  if (lights.empty()) throw RangeError("lights", "at least one light is required");
  for (std::size_t i = 0; i < lights.size(); ++i)
    doc.lights.push_back(read_light(lights[i], "lights." + std::to_string(i)));

  doc.params = read_params(r.find("params"));
  r.finish();
  return doc;
}

SceneDoc parse_scene(std::string_view text) {
  json value;
  try {
    value = json::parse(text.begin(), text.end());
  } catch (const json::parse_error& e) {
    const auto [line, column] = line_and_column(text, e.byte);
    throw ParseError(line, column, e.what());
  }
  return scene_from_json(value);
}

json to_json(const SceneDoc& doc) {
  json lights = json::array();
  for (const LightSpec& light : doc.lights) {
    json l = {{"kind", name_of(light.kind, kLightKinds)}};
    if (light.kind == LightKind::directional)
      l["direction"] = vec_json(light.direction);
    else
      l["position"] = vec_json(light.position);
    l["color"] = vec_json(light.color.matrix());
    lights.push_back(std::move(l));
  }
  const ShadeParams& p = doc.params;
  json params = {
      {"diffuse_ramp", ramp_json(p.diffuse_ramp)},
      {"spec_ramp", ramp_json(p.spec_ramp)},
      {"global_ramp", ramp_json(p.global_ramp)},
      {"shadow", {{"enabled", p.shadow_enabled}, {"d", p.shadow.d}, {"a", p.shadow.a}, {"K", p.shadow.K}}},
      {"optics",
       {{"eta", p.optics.eta},
        {"mu", p.optics.mu},
        {"refraction_mode", name_of(p.optics.refraction_mode, kRefractionModes)},
        {"d_env", p.optics.d_env},
        {"d_bg", p.optics.d_bg},
        {"max_offset", p.optics.max_offset ? json(*p.optics.max_offset) : json(nullptr)}}},
      {"fresnel",
       {{"mode", name_of(p.fresnel.mode, kFresnelModes)},
        {"fixed_f", p.fresnel.fixed_f},
        {"sp_weight", p.fresnel.sp_weight},
        {"x0", p.fresnel.x0},
        {"x1", p.fresnel.x1},
        {"blend", p.fresnel.blend}}},
      {"env_blur", p.env_blur},
      {"bg_blur", p.bg_blur},
      {"shadow_mode", name_of(p.shadow_mode, kShadowModes)},
  };
  return {
      {"shape", doc.shape},
      {"shape_kind", name_of(doc.shape_kind, kShapeKinds)},
      {"height_scale", doc.height_scale},
      {"gradient_sign", name_of(doc.gradient_sign, kGradientSigns)},
      {"i0", doc.i0},
      {"i1", doc.i1},
      {"env", doc.env},
      {"bg", doc.bg},
      {"ks", doc.ks ? json(*doc.ks) : json(nullptr)},
      {"spec_color", doc.spec_color ? json(*doc.spec_color) : json(nullptr)},
      {"lights", std::move(lights)},
      {"params", std::move(params)},
  };
}

std::string serialize_scene(const SceneDoc& doc) { return to_json(doc).dump(2); }

void apply_override(json& doc, std::string_view path, std::string_view value) {
  const std::string full(path);
  if (full.empty()) throw UnknownKeyError(full);
  json* node = &doc;
  std::size_t begin = 0;
  for (;;) {
    const std::size_t dot = full.find('.', begin);
    const std::string segment = full.substr(begin, dot == std::string::npos ? std::string::npos : dot - begin);
    if (node->is_object()) {
      const auto it = node->find(segment);
      if (it == node->end()) throw UnknownKeyError(full);
      node = &*it;
    } else if (node->is_array()) {
      std::size_t index = 0;
      try {
        std::size_t used = 0;
        index = std::stoul(segment, &used);
        if (used != segment.size()) throw std::invalid_argument(segment);
      } catch (const std::exception&) {
        throw UnknownKeyError(full);
      }
      if (index >= node->size()) throw UnknownKeyError(full);
      node = &(*node)[index];
    } else {
      throw UnknownKeyError(full);
    }
    if (dot == std::string::npos) break;
    begin = dot + 1;
  }
  json parsed = json::parse(value.begin(), value.end(), nullptr, false);
  *node = parsed.is_discarded() ? json(std::string(value)) : std::move(parsed);
}

std::pair<std::string, std::string> split_assignment(std::string_view assignment) {
  const std::size_t eq = assignment.find('=');
  if (eq == std::string_view::npos)
    throw SceneError(std::string(assignment), "override \"" + std::string(assignment) +
                                                  "\" must have the form key=value");
  return {std::string(assignment.substr(0, eq)), std::string(assignment.substr(eq + 1))};
}

SceneDoc apply_overrides(const SceneDoc& doc, std::span<const std::string> assignments) {
  if (assignments.empty()) return doc;
  json value = to_json(doc);
  for (const std::string& assignment : assignments) {
    const auto [key, text] = split_assignment(assignment);
    apply_override(value, key, text);
  }
  return scene_from_json(value);
}

LoadedScene load_scene(const SceneDoc& doc, const ImageResolver& resolve) {
  auto fetch = [&](const char* key, const std::string& path) {
    try {
      return resolve(key, path);
    } catch (const SceneError&) {
      throw;
    } catch (const Error& e) {
      throw SceneError(key, std::string(key) + ": " + e.what());
    }
  };

  const Image shape_image = fetch("shape", doc.shape);
  ShapeField shape;
  try {
    shape = doc.shape_kind == ShapeKind::normal_map
                ? decode_normal_map(shape_image)
                : depth_to_shape(shape_image, doc.height_scale, doc.gradient_sign);
  } catch (const ShapeError& e) {
    throw SceneError("shape", std::string("shape: ") + e.what());
  }

  Image i0 = fetch("i0", doc.i0);
  Image i1 = fetch("i1", doc.i1);
  Image env = fetch("env", doc.env);
  Image bg = fetch("bg", doc.bg);
  Image ks = doc.ks ? fetch("ks", *doc.ks) : Image();
  Image spec = doc.spec_color ? fetch("spec_color", *doc.spec_color) : Image();

  auto check_grid = [&](const Image& img, const char* key) {
    if (!img.empty() && (img.width() != shape.width() || img.height() != shape.height()))
      throw DimensionMismatchError(std::string(key) + " is " + std::to_string(img.width()) + "x" +
                                   std::to_string(img.height()) + " but the shape is " +
                                   std::to_string(shape.width()) + "x" +
                                   std::to_string(shape.height()));
  };
  check_grid(i0, "i0");
  check_grid(i1, "i1");
  check_grid(ks, "ks");
  check_grid(spec, "spec_color");

  LoadedScene loaded{make_scene(std::move(shape), std::move(i0), std::move(i1), std::move(env),
                                std::move(bg), std::move(ks), std::move(spec)),
                     doc.lights, doc.params};
  return loaded;
}

LoadedScene load_scene(const SceneDoc& doc, const std::filesystem::path& base_dir) {
  return load_scene(doc, [&](const std::string&, const std::string& path) {
    const std::filesystem::path p(path);
    return load_image(p.is_absolute() ? p : base_dir / p);
  });
}

bool same_image_bindings(const SceneDoc& a, const SceneDoc& b) {
  return a.shape == b.shape && a.shape_kind == b.shape_kind && a.height_scale == b.height_scale &&
         a.gradient_sign == b.gradient_sign && a.i0 == b.i0 && a.i1 == b.i1 && a.env == b.env &&
         a.bg == b.bg && a.ks == b.ks && a.spec_color == b.spec_color;
}

std::string read_text_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot read " + path.string());
  return std::string((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
}

LoadedScene load_scene_file(const std::filesystem::path& path,
                            std::span<const std::string> overrides) {
  const SceneDoc doc = apply_overrides(parse_scene(read_text_file(path)), overrides);
  return load_scene(doc, path.parent_path());
}

}  // namespace dynpaint
