#pragma once

#include <map>
#include <memory>
#include <string>
#include <vector>

#include "dynpaint/scene_io.hpp"

namespace dynpaint {

/// Plain response record; the HTTP layer copies it onto the wire.
struct ServiceResponse {
  int status = 200;
  std::string content_type = "application/json";
  std::string body;
  std::map<std::string, std::string> headers;
};

/// One uploaded multipart part.
struct UploadPart {
  std::string filename;
  std::string content;
};

/// Query parameter name to override path ("mu" -> "params.optics.mu").
/// Dotted names pass through unchanged; returns empty for unknown names.
std::string query_key_path(const std::string& name);

/// In-memory scene store and renderer behind the HTTP API. Stored scenes
/// are immutable; every render applies its query parameters to a copy.
class RenderService {
 public:
  explicit RenderService(int render_threads = 1);
  ~RenderService();
  RenderService(const RenderService&) = delete;
  RenderService& operator=(const RenderService&) = delete;

  // Endpoint logic, callable without a socket.
  ServiceResponse upload(const std::map<std::string, UploadPart>& parts);
  ServiceResponse render(const std::string& id, const std::multimap<std::string, std::string>& query);
  ServiceResponse meta(const std::string& id) const;

  /// Binds host:port (port 0 picks a free port) and returns the bound port.
  int bind(const std::string& host, int port);
  /// Serves until stop(); requires a prior bind().
  void listen();
  void stop();
  /// Blocks until the listener is accepting connections.
  void wait_until_ready() const;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

/// bind + listen; blocks.
void serve(const std::string& host, int port, int render_threads);

}  // namespace dynpaint
