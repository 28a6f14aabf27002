#pragma once

#include <string>

#include "scenedirector/gateway.hpp"

namespace scenedirector::detail {

struct HttpResponse {
  int status = 0;
  std::string body;
};

/// Blocking POST. Throws Error(network) or Error(timeout); any HTTP status is
/// returned to the caller.
HttpResponse http_post(const HttpRequest& request, double timeout_seconds);

}  // namespace scenedirector::detail
