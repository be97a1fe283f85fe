#pragma once

// Binds SessionService routes onto an httplib server.

#include <string>

#include <httplib.h>

#include "convex/service.hpp"

namespace convex {

inline void bind_routes(httplib::Server& server, SessionService& service) {
  auto forward = [&service](const httplib::Request& req, httplib::Response& res) {
    ServiceResponse out = service.handle(req.method, req.path, req.body);
    res.status = out.status;
    res.set_content(out.body.dump(), "application/json");
  };
  server.Get(R"(/.*)", forward);
  server.Post(R"(/.*)", forward);
  server.Delete(R"(/.*)", forward);
  server.Options(R"(/.*)", [](const httplib::Request&, httplib::Response& res) { res.status = 204; });
  server.set_default_headers({{"Access-Control-Allow-Origin", "*"},
                              {"Access-Control-Allow-Headers", "Content-Type"},
                              {"Access-Control-Allow-Methods", "GET, POST, DELETE, OPTIONS"}});
}

}  // namespace convex
