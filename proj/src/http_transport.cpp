#define CPPHTTPLIB_OPENSSL_SUPPORT
#include <httplib.h>

#include "http_transport.hpp"

#include <cmath>

#include "scenedirector/error.hpp"

namespace scenedirector::detail {

namespace {

struct SplitUrl {
  std::string origin;  // scheme://host[:port]
  std::string path;
};

SplitUrl split_url(const std::string& url)
{
  const auto scheme_end = url.find("://");
  if (scheme_end == std::string::npos)
    throw Error(ErrorKind::config, "endpoint '" + url + "' has no scheme");
  const auto scheme = url.substr(0, scheme_end);
  if (scheme != "http" && scheme != "https")
    throw Error(ErrorKind::config, "endpoint '" + url + "' must be http or https");
  const auto path_start = url.find('/', scheme_end + 3);
  if (path_start == std::string::npos)
    return {url, "/"};
  return {url.substr(0, path_start), url.substr(path_start)};
}

void set_timeouts(httplib::Client& client, double seconds)
{
  const auto whole = static_cast<time_t>(std::floor(seconds));
  const auto micros = static_cast<time_t>((seconds - double(whole)) * 1e6);
  client.set_connection_timeout(whole, micros);
  client.set_read_timeout(whole, micros);
  client.set_write_timeout(whole, micros);
}

}  // namespace

HttpResponse http_post(const HttpRequest& request, double timeout_seconds)
{
  const auto url = split_url(request.url);
  httplib::Client client(url.origin);
  set_timeouts(client, timeout_seconds);

  httplib::Headers headers;
  std::string content_type = "application/json";
  for (const auto& [name, value] : request.headers) {
    if (name == "Content-Type")
      content_type = value;
    else
      headers.emplace(name, value);
  }

  auto result = client.Post(url.path, headers, request.body, content_type);
  if (!result) {
    const auto err = result.error();
    const std::string what = "request to " + url.origin + " failed: " + httplib::to_string(err);
    if (err == httplib::Error::ConnectionTimeout || err == httplib::Error::Read)
      throw Error(ErrorKind::timeout, what);
    throw Error(ErrorKind::network, what);
  }
  return {result->status, result->body};
}

}  // namespace scenedirector::detail
