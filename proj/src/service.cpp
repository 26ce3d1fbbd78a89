#include "dynpaint/service.hpp"

#include <httplib.h>

#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <mutex>
#include <shared_mutex>

namespace dynpaint {

using nlohmann::json;

namespace {

struct StoredScene {
  SceneDoc doc;
  LoadedScene loaded;
};

// Flat query names of the params section.
const std::map<std::string, std::string>& param_paths() {
  static const std::map<std::string, std::string> paths = {
      {"t0", "params.diffuse_ramp.t0"},
      {"t1", "params.diffuse_ramp.t1"},
      {"step", "params.diffuse_ramp.step"},
      {"s0", "params.spec_ramp.t0"},
      {"s1", "params.spec_ramp.t1"},
      {"spec_step", "params.spec_ramp.step"},
      {"g0", "params.global_ramp.t0"},
      {"g1", "params.global_ramp.t1"},
      {"global_step", "params.global_ramp.step"},
      {"shadow", "params.shadow.enabled"},
      {"d", "params.shadow.d"},
      {"a", "params.shadow.a"},
      {"K", "params.shadow.K"},
      {"eta", "params.optics.eta"},
      {"mu", "params.optics.mu"},
      {"refraction_mode", "params.optics.refraction_mode"},
      {"d_env", "params.optics.d_env"},
      {"d_bg", "params.optics.d_bg"},
      {"max_offset", "params.optics.max_offset"},
      {"fresnel_mode", "params.fresnel.mode"},
      {"fixed_f", "params.fresnel.fixed_f"},
      {"sp_weight", "params.fresnel.sp_weight"},
      {"x0", "params.fresnel.x0"},
      {"x1", "params.fresnel.x1"},
      {"blend", "params.fresnel.blend"},
      {"env_blur", "params.env_blur"},
      {"bg_blur", "params.bg_blur"},
      {"shadow_mode", "params.shadow_mode"},
  };
  return paths;
}

// Light query names: target array and component.
struct LightField {
  const char* array;
  int index;
};

const std::map<std::string, LightField>& light_fields() {
  static const std::map<std::string, LightField> fields = {
      {"lx", {"direction", 0}}, {"ly", {"direction", 1}}, {"lz", {"direction", 2}},
      {"px", {"position", 0}},  {"py", {"position", 1}},  {"pz", {"position", 2}},
      {"lr", {"color", 0}},     {"lg", {"color", 1}},     {"lb", {"color", 2}},
  };
  return fields;
}

class BadRequest : public Error {
 public:
  BadRequest(std::string name, const std::string& message)
      : Error(message), name_(std::move(name)) {}
  const std::string& name() const { return name_; }

 private:
  std::string name_;
};

ServiceResponse json_response(int status, const json& body) {
  ServiceResponse r;
  r.status = status;
  r.body = body.dump();
  return r;
}

ServiceResponse error_response(int status, const std::string& message, const std::string& key = {}) {
  json body = {{"error", message}};
  if (!key.empty()) body["key"] = key;
  return json_response(status, body);
}

double parse_decimal(const std::string& name, const std::string& text) {
  char* end = nullptr;
  const double v = std::strtod(text.c_str(), &end);
  if (text.empty() || end != text.c_str() + text.size() || !std::isfinite(v))
    throw BadRequest(name, "parameter \"" + name + "\" must be a decimal number, got \"" + text + "\"");
  return v;
}

std::string boolean_text(const std::string& text) {
  if (text == "1" || text == "on") return "true";
  if (text == "0" || text == "off") return "false";
  return text;
}

// Applies the flat light parameters to lights[0] of the document.
void apply_light_query(json& doc, const std::vector<std::pair<std::string, std::string>>& items) {
  json& light = doc["lights"][0];
  for (const auto& [name, value] : items)
    if (name == "kind") {
      if (value != "directional" && value != "point")
        throw BadRequest(name, "parameter \"kind\" must be directional or point");
      light["kind"] = value;
    }
  const bool point = light["kind"] == "point";
  if (point) {
    if (!light.contains("position")) light["position"] = json::array({0.5, 0.5, 1.0});
    light.erase("direction");
  } else {
    if (!light.contains("direction")) light["direction"] = json::array({0.0, 0.0, 1.0});
    light.erase("position");
  }
  for (const auto& [name, value] : items) {
    if (name == "kind") continue;
    const LightField field = light_fields().at(name);
    if (!light.contains(field.array))
      throw BadRequest(name, "parameter \"" + name + "\" does not apply to a " +
                                 std::string(point ? "point" : "directional") + " light");
    light[field.array][std::size_t(field.index)] = parse_decimal(name, value);
  }
}

}  // namespace

std::string query_key_path(const std::string& name) {
  if (name.find('.') != std::string::npos) return name;
  if (light_fields().count(name)) return "lights.0." + std::string(light_fields().at(name).array);
  if (name == "kind") return "lights.0.kind";
  const auto it = param_paths().find(name);
  return it == param_paths().end() ? std::string() : it->second;
}

struct RenderService::Impl {
  int threads;
  mutable std::shared_mutex mutex;
  std::map<std::string, std::shared_ptr<const StoredScene>> scenes;
  std::uint64_t next_id = 1;
  httplib::Server server;

  std::shared_ptr<const StoredScene> find(const std::string& id) const {
    std::shared_lock lock(mutex);
    const auto it = scenes.find(id);
    return it == scenes.end() ? nullptr : it->second;
  }

  std::string insert(std::shared_ptr<const StoredScene> scene) {
    std::unique_lock lock(mutex);
    const std::string id = std::to_string(next_id++);
    scenes.emplace(id, std::move(scene));
    return id;
  }
};

RenderService::RenderService(int render_threads) : impl_(std::make_unique<Impl>()) {
  impl_->threads = std::max(1, render_threads);
  httplib::Server& server = impl_->server;

  auto send = [](httplib::Response& res, const ServiceResponse& r) {
    res.status = r.status;
    for (const auto& [name, value] : r.headers) res.set_header(name, value);
    res.set_content(r.body, r.content_type);
  };

  server.Post("/scenes", [this, send](const httplib::Request& req, httplib::Response& res) {
    if (!req.is_multipart_form_data()) {
      send(res, error_response(400, "POST /scenes expects multipart/form-data"));
      return;
    }
    std::map<std::string, UploadPart> parts;
    for (const auto& [name, file] : req.files) {
      if (parts.count(name)) {
        send(res, error_response(400, "duplicate part \"" + name + "\"", name));
        return;
      }
      parts[name] = {file.filename, file.content};
    }
    send(res, upload(parts));
  });

  server.Get(R"(/scenes/([^/]+)/render)", [this, send](const httplib::Request& req,
                                                       httplib::Response& res) {
    send(res, render(req.matches[1], req.params));
  });

  server.Get(R"(/scenes/([^/]+)/meta)", [this, send](const httplib::Request& req,
                                                     httplib::Response& res) {
    send(res, meta(req.matches[1]));
  });

  server.Options(".*", [](const httplib::Request&, httplib::Response& res) { res.status = 204; });

  server.set_post_routing_handler([](const httplib::Request&, httplib::Response& res) {
    res.set_header("Access-Control-Allow-Origin", "*");
    res.set_header("Access-Control-Allow-Methods", "GET, POST, OPTIONS");
    res.set_header("Access-Control-Allow-Headers", "Content-Type");
    res.set_header("Access-Control-Expose-Headers", "X-Render-Time-Ms");
  });

  server.set_exception_handler(
      [send](const httplib::Request&, httplib::Response& res, std::exception_ptr ep) {
        std::string message = "internal error";
        try {
          std::rethrow_exception(ep);
        } catch (const std::exception& e) {
          message = e.what();
        } catch (...) {
        }
        send(res, error_response(500, message));
      });
}

RenderService::~RenderService() { stop(); }

ServiceResponse RenderService::upload(const std::map<std::string, UploadPart>& parts) {
  try {
    SceneDoc doc;
    const auto scene_part = parts.find("scene");
    if (scene_part != parts.end()) {
      doc = parse_scene(scene_part->second.content);
    } else {
      doc.lights = {LightSpec::directional(Vec3::UnitZ())};
    }

    auto bound_name = [&](const std::string& key) {
      const UploadPart& part = parts.at(key);
      return part.filename.empty() ? key : part.filename;
    };
    std::string* required[] = {&doc.shape, &doc.i0, &doc.i1, &doc.env, &doc.bg};
    std::optional<std::string>* optional[] = {&doc.ks, &doc.spec_color};
    for (std::size_t i = 0; i < 5; ++i) {
      const std::string key(kImageKeys[i]);
      if (!parts.count(key)) throw MissingKeyError(key);
      if (required[i]->empty()) *required[i] = bound_name(key);
    }
    for (std::size_t i = 0; i < 2; ++i) {
      const std::string key(kImageKeys[5 + i]);
      if (optional[i]->has_value() && !parts.count(key)) throw MissingKeyError(key);
      if (!optional[i]->has_value() && parts.count(key)) *optional[i] = bound_name(key);
    }
    for (const auto& [name, part] : parts) {
      const bool known = name == "scene" || std::find(std::begin(kImageKeys), std::end(kImageKeys),
                                                      name) != std::end(kImageKeys);
      if (!known) throw UnknownKeyError(name);
    }

    std::map<std::string, Image> images;  // by document key
    for (std::string_view k : kImageKeys) {
      const std::string key(k);
      if (!parts.count(key)) continue;
      try {
        images[key] = decode_image(parts.at(key).content);
      } catch (const Error& e) {
        throw SceneError(key, key + ": " + e.what());
      }
    }
    auto stored = std::make_shared<StoredScene>();
    stored->doc = doc;
    stored->loaded = load_scene(doc, [&images](const std::string& key, const std::string&) {
      return images.at(key);
    });
    const int width = stored->loaded.scene.width();
    const int height = stored->loaded.scene.height();
    const std::string id = impl_->insert(std::move(stored));
    return json_response(201, {{"id", id}, {"width", width}, {"height", height}});
  } catch (const SceneError& e) {
    return error_response(400, e.what(), e.key());
  } catch (const Error& e) {
    return error_response(400, e.what());
  }
}

ServiceResponse RenderService::render(const std::string& id,
                                      const std::multimap<std::string, std::string>& query) {
  const auto start = std::chrono::steady_clock::now();
  const auto stored = impl_->find(id);
  if (!stored) return error_response(404, "unknown scene id \"" + id + "\"");
  try {
    std::string format = "png";
    json doc = to_json(stored->doc);
    std::vector<std::pair<std::string, std::string>> light_items;
    for (const auto& [name, value] : query) {
      if (name == "format") {
        if (value != "png" && value != "ppm")
          throw BadRequest(name, "parameter \"format\" must be png or ppm");
        format = value;
      } else if (name == "kind" || light_fields().count(name)) {
        light_items.emplace_back(name, value);
      } else {
        const std::string path = query_key_path(name);
        if (path.empty()) throw BadRequest(name, "unknown parameter \"" + name + "\"");
        try {
          apply_override(doc, path, name == "shadow" ? boolean_text(value) : value);
        } catch (const UnknownKeyError&) {
          throw BadRequest(name, "unknown parameter \"" + name + "\"");
        }
      }
    }
    if (!light_items.empty()) apply_light_query(doc, light_items);

    SceneDoc edited;
    try {
      edited = scene_from_json(doc);
    } catch (const SceneError& e) {
      throw BadRequest(e.key(), std::string("bad parameter: ") + e.what());
    }
    if (!light_items.empty()) {
      const LightSpec& light = edited.lights.front();
      if (light.kind == LightKind::directional && light.direction.z() <= 0.0)
        throw BadRequest("lz", "directional light must point in front of the canvas (lz > 0)");
    }

    // Query names only reach lights and params, so the stored images still apply.
    const Image image =
        dynpaint::render(stored->loaded.scene, edited.lights, edited.params, {impl_->threads});

    ServiceResponse r;
    if (format == "png") {
      r.content_type = "image/png";
      r.body = encode_png(image);
    } else {
      r.content_type = "image/x-portable-pixmap";
      r.body = encode_pnm(image);
    }
    const double ms =
        std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.3f", ms);
    r.headers["X-Render-Time-Ms"] = buf;
    return r;
  } catch (const BadRequest& e) {
    return error_response(400, e.what(), e.name());
  } catch (const SceneError& e) {
    return error_response(400, e.what(), e.key());
  } catch (const Error& e) {
    return error_response(400, e.what());
  }
}

ServiceResponse RenderService::meta(const std::string& id) const {
  const auto stored = impl_->find(id);
  if (!stored) return error_response(404, "unknown scene id \"" + id + "\"");
  const json doc = to_json(stored->doc);
  return json_response(200, {{"id", id},
                             {"width", stored->loaded.scene.width()},
                             {"height", stored->loaded.scene.height()},
                             {"lights", doc["lights"]},
                             {"params", doc["params"]},
                             {"scene", doc}});
}

int RenderService::bind(const std::string& host, int port) {
  if (port == 0) {
    const int bound = impl_->server.bind_to_any_port(host);
    if (bound < 0) throw Error("cannot bind " + host);
    return bound;
  }
  if (!impl_->server.bind_to_port(host, port))
    throw Error("cannot bind " + host + ":" + std::to_string(port));
  return port;
}

void RenderService::listen() {
  if (!impl_->server.listen_after_bind()) throw Error("server stopped with an error");
}

void RenderService::stop() {
  if (impl_->server.is_running()) impl_->server.stop();
}

void RenderService::wait_until_ready() const { impl_->server.wait_until_ready(); }

void serve(const std::string& host, int port, int render_threads) {
  RenderService service(render_threads);
  const int bound = service.bind(host, port);
  std::printf("serving on http://%s:%d\n", host.c_str(), bound);
  std::fflush(stdout);
  service.listen();
}

}  // namespace dynpaint
