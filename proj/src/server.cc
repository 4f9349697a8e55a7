#include <stdexcept>
#include <thread>

#include "eyesfree/delivery.h"
#include "httplib.h"

namespace eyesfree {

struct BundleServer::Impl {
  BundleStore store;
  httplib::Server server;
  std::thread thread;
};

BundleServer::BundleServer(BundleStore store) : impl_(std::make_unique<Impl>()) {
  impl_->store = std::move(store);
  const BundleStore* s = &impl_->store;
  impl_->server.Get(".*", [s](const httplib::Request& req, httplib::Response& res) {
    const BundleStore::Resource* r = s->find(req.path);
    if (!r) {
      res.status = httplib::StatusCode::NotFound_404;
      res.set_content("not found\n", "text/plain");
      return;
    }
    res.set_header("ETag", r->etag);
    res.set_header("Cache-Control", "public, max-age=31536000, immutable");
    if (req.get_header_value("If-None-Match") == r->etag) {
      res.status = httplib::StatusCode::NotModified_304;
      return;
    }
    res.set_content(r->body, r->content_type);
  });
}

BundleServer::~BundleServer() { stop(); }

int BundleServer::start(const std::string& address, int port) {
  int bound = port;
  if (port == 0) {
    bound = impl_->server.bind_to_any_port(address);
  } else if (!impl_->server.bind_to_port(address, port)) {
    bound = -1;
  }
  if (bound <= 0) {
    throw std::runtime_error("cannot bind " + address + ":" + std::to_string(port));
  }
  impl_->thread = std::thread([this] { impl_->server.listen_after_bind(); });
  impl_->server.wait_until_ready();
  return bound;
}

void BundleServer::listen(const std::string& address, int port) {
  if (!impl_->server.listen(address, port)) {
    throw std::runtime_error("cannot listen on " + address + ":" + std::to_string(port));
  }
}

void BundleServer::stop() {
  if (!impl_) return;
  impl_->server.stop();
  if (impl_->thread.joinable()) impl_->thread.join();
}

std::string ProgressiveClient::get(const std::string& path) const {
  httplib::Client client(host_, port_);
  client.set_keep_alive(false);
  auto res = client.Get(path);
  if (!res) {
    throw std::runtime_error("GET " + path + ": " + httplib::to_string(res.error()));
  }
  if (res->status != httplib::StatusCode::OK_200) {
    throw std::runtime_error("GET " + path + ": HTTP " + std::to_string(res->status));
  }
  return res->body;
}

}  // namespace eyesfree
