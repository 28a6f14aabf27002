#include "scenedirector/gateway.hpp"

#include <cstdlib>
#include <fstream>
#include <iomanip>
#include <sstream>
#include <thread>

#include <openssl/sha.h>

#include <nlohmann/json.hpp>

#include "http_transport.hpp"
#include "scenedirector/error.hpp"
#include "toml_lite.hpp"

namespace scenedirector {

namespace detail {
extern const std::string_view kSystemPromptText;
}

std::string_view to_string(Provider provider)
{
  switch (provider) {
    case Provider::chatgpt: return "chatgpt";
    case Provider::claude: return "claude";
    case Provider::gemini: return "gemini";
    case Provider::grok: return "grok";
    case Provider::mock: return "mock";
  }
  return "unknown";
}

std::string_view display_name(Provider provider)
{
  switch (provider) {
    case Provider::chatgpt: return "ChatGPT";
    case Provider::claude: return "Claude";
    case Provider::gemini: return "Gemini";
    case Provider::grok: return "Grok";
    case Provider::mock: return "Mock";
  }
  return "Unknown";
}

const std::vector<Provider>& all_providers()
{
  static const std::vector<Provider> providers{Provider::chatgpt, Provider::claude,
                                               Provider::gemini, Provider::grok,
                                               Provider::mock};
  return providers;
}

Provider parse_provider(std::string_view token)
{
  for (auto p : all_providers())
    if (to_string(p) == token)
      return p;
  throw Error(ErrorKind::config, "unknown provider '" + std::string(token) +
                                     "' (expected chatgpt|claude|gemini|grok|mock)");
}

ProviderConfig default_config(Provider provider)
{
  ProviderConfig c;
  c.provider = provider;
  switch (provider) {
    case Provider::chatgpt:
      c.model_name = "gpt-4.1-mini";
      c.endpoint = "https://api.openai.com/v1/chat/completions";
      c.api_key_ref = "OPENAI_API_KEY";
      break;
    case Provider::claude:
      c.model_name = "claude-sonnet-4-5";
      c.endpoint = "https://api.anthropic.com/v1/messages";
      c.api_key_ref = "ANTHROPIC_API_KEY";
      break;
    case Provider::gemini:
      c.model_name = "gemini-2.5-flash";
      c.endpoint =
          "https://generativelanguage.googleapis.com/v1beta/models/{model}:generateContent";
      c.api_key_ref = "GEMINI_API_KEY";
      break;
    case Provider::grok:
      c.model_name = "grok-4-1-fast";
      c.endpoint = "https://api.x.ai/v1/chat/completions";
      c.api_key_ref = "XAI_API_KEY";
      break;
    case Provider::mock:
      c.model_name = "mock-planner";
      c.mock_latency = 0.0;
      c.mock_seed = 0;
      break;
  }
  return c;
}

void check_config(const ProviderConfig& config)
{
  const std::string who = "provider " + std::string(to_string(config.provider));
  if (!(config.timeout > 0.0))
    throw Error(ErrorKind::config, who + ": timeout must be > 0");
  if (config.provider == Provider::mock) {
    if (config.mock_latency && !(*config.mock_latency >= 0.0))
      throw Error(ErrorKind::config, who + ": mock_latency must be >= 0");
    return;
  }
  if (config.api_key_ref.empty())
    throw Error(ErrorKind::config, who + ": api_key_ref is required");
  if (config.endpoint.empty())
    throw Error(ErrorKind::config, who + ": endpoint is required");
  if (config.mock_latency || config.mock_seed)
    throw Error(ErrorKind::config, who + ": mock_latency/mock_seed apply to the mock provider only");
}

namespace {

double as_number(const toml_lite::Value& v, const std::string& key)
{
  if (auto d = std::get_if<double>(&v))
    return *d;
  if (auto i = std::get_if<std::int64_t>(&v))
    return double(*i);
  throw Error(ErrorKind::config, "key '" + key + "' must be a number");
}

std::string as_string(const toml_lite::Value& v, const std::string& key)
{
  if (auto s = std::get_if<std::string>(&v))
    return *s;
  throw Error(ErrorKind::config, "key '" + key + "' must be a string");
}

std::int64_t as_integer(const toml_lite::Value& v, const std::string& key)
{
  if (auto i = std::get_if<std::int64_t>(&v))
    return *i;
  throw Error(ErrorKind::config, "key '" + key + "' must be an integer");
}

}  // namespace

std::map<Provider, ProviderConfig> parse_provider_configs(std::string_view toml_text)
{
  std::map<Provider, ProviderConfig> out;
  for (auto p : all_providers())
    out[p] = default_config(p);

  for (const auto& [table, entries] : toml_lite::parse(toml_text)) {
    if (table.empty()) {
      if (!entries.empty())
        throw Error(ErrorKind::config, "providers config: keys must live inside a [provider] table");
      continue;
    }
    const Provider provider = parse_provider(table);
    ProviderConfig& c = out[provider];
    for (const auto& [key, value] : entries) {
      const std::string where = "[" + table + "]." + key;
      if (key == "model_name")
        c.model_name = as_string(value, where);
      else if (key == "endpoint")
        c.endpoint = as_string(value, where);
      else if (key == "api_key_ref")
        c.api_key_ref = as_string(value, where);
      else if (key == "timeout")
        c.timeout = as_number(value, where);
      else if (key == "mock_latency")
        c.mock_latency = as_number(value, where);
      else if (key == "mock_seed")
        c.mock_seed = as_integer(value, where);
      else if (key == "temperature")
        c.temperature = as_number(value, where);
      else if (key == "max_tokens")
        c.max_tokens = static_cast<int>(as_integer(value, where));
      else if (key == "debug_log")
        c.debug_log = as_string(value, where);
      else
        throw Error(ErrorKind::config, "providers config: unknown key " + where);
    }
    check_config(c);
  }
  return out;
}

std::map<Provider, ProviderConfig> load_provider_configs(const std::filesystem::path& path)
{
  std::ifstream in(path, std::ios::binary);
  if (!in)
    throw Error(ErrorKind::config, "cannot open providers config '" + path.string() + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_provider_configs(buf.str());
}

std::string_view system_prompt() { return detail::kSystemPromptText; }

std::string system_prompt_sha256()
{
  const auto text = system_prompt();
  unsigned char digest[SHA256_DIGEST_LENGTH];
  SHA256(reinterpret_cast<const unsigned char*>(text.data()), text.size(), digest);
  std::ostringstream hex;
  for (unsigned char b : digest)
    hex << std::hex << std::setw(2) << std::setfill('0') << int(b);
  return hex.str();
}

PromptPair build_prompt(const SceneDescription& description)
{
  if (description.text.empty())
    throw Error(ErrorKind::precondition, "scene description is empty");
  return {std::string(system_prompt()), description.text};
}

CleanReply clean_reply(std::string_view raw)
{
  auto trim = [](std::string_view s) {
    const auto ws = " \t\r\n";
    const auto b = s.find_first_not_of(ws);
    if (b == std::string_view::npos)
      return std::string_view{};
    const auto e = s.find_last_not_of(ws);
    return s.substr(b, e - b + 1);
  };
  std::string_view text = trim(raw);
  if (text.size() >= 6 && text.substr(0, 3) == "```" && text.substr(text.size() - 3) == "```") {
    auto body = text.substr(3, text.size() - 6);
    // Drop an info string such as ```text on the opening line.
    const auto nl = body.find('\n');
    if (nl != std::string_view::npos && body.substr(0, nl).find_first_of("{}(),") == std::string_view::npos)
      body.remove_prefix(nl + 1);
    return {std::string(trim(body)), true};
  }
  return {std::string(text), false};
}

HttpRequest build_request(const ProviderConfig& config, const PromptPair& prompt,
                          const std::string& api_key)
{
  using nlohmann::json;
  HttpRequest req;
  req.url = config.endpoint;
  req.headers.emplace_back("Content-Type", "application/json");
  json body;

  switch (config.provider) {
    case Provider::chatgpt:
    case Provider::grok:
      req.headers.emplace_back("Authorization", "Bearer " + api_key);
      body["model"] = config.model_name;
      body["messages"] = json::array({{{"role", "system"}, {"content", prompt.system_text}},
                                      {{"role", "user"}, {"content", prompt.user_text}}});
      if (config.temperature)
        body["temperature"] = *config.temperature;
      if (config.max_tokens)
        body["max_tokens"] = *config.max_tokens;
      break;
    case Provider::claude:
      req.headers.emplace_back("x-api-key", api_key);
      req.headers.emplace_back("anthropic-version", "2023-06-01");
      body["model"] = config.model_name;
      body["max_tokens"] = config.max_tokens.value_or(1024);
      body["system"] = prompt.system_text;
      body["messages"] = json::array({{{"role", "user"}, {"content", prompt.user_text}}});
      if (config.temperature)
        body["temperature"] = *config.temperature;
      break;
    case Provider::gemini: {
      req.headers.emplace_back("x-goog-api-key", api_key);
      if (auto at = req.url.find("{model}"); at != std::string::npos)
        req.url.replace(at, 7, config.model_name);
      body["system_instruction"] = {{"parts", json::array({{{"text", prompt.system_text}}})}};
      body["contents"] = json::array(
          {{{"role", "user"}, {"parts", json::array({{{"text", prompt.user_text}}})}}});
      json generation = json::object();
      if (config.temperature)
        generation["temperature"] = *config.temperature;
      if (config.max_tokens)
        generation["maxOutputTokens"] = *config.max_tokens;
      if (!generation.empty())
        body["generationConfig"] = generation;
      break;
    }
    case Provider::mock:
      throw Error(ErrorKind::config, "the mock provider has no wire format");
  }
  req.body = body.dump();
  return req;
}

std::string extract_reply(Provider provider, std::string_view response_body)
{
  using nlohmann::json;
  json doc = json::parse(response_body, nullptr, false);
  if (doc.is_discarded())
    throw Error(ErrorKind::http, "provider response is not JSON");
  try {
    switch (provider) {
      case Provider::chatgpt:
      case Provider::grok:
        return doc.at("choices").at(0).at("message").at("content").get<std::string>();
      case Provider::claude: {
        std::string text;
        for (const auto& block : doc.at("content"))
          if (block.value("type", "") == "text")
            text += block.at("text").get<std::string>();
        return text;
      }
      case Provider::gemini: {
        std::string text;
        for (const auto& part : doc.at("candidates").at(0).at("content").at("parts"))
          if (part.contains("text"))
            text += part.at("text").get<std::string>();
        return text;
      }
      case Provider::mock:
        break;
    }
  } catch (const json::exception& e) {
    throw Error(ErrorKind::http, std::string("unexpected provider response shape: ") + e.what());
  }
  throw Error(ErrorKind::config, "the mock provider has no wire format");
}

namespace {

void append_debug_log(const ProviderConfig& config, const nlohmann::json& entry)
{
  if (!config.debug_log)
    return;
  std::ofstream out(*config.debug_log, std::ios::app | std::ios::binary);
  if (!out)
    throw Error(ErrorKind::io, "cannot append debug log '" + config.debug_log->string() + "'");
  out << entry.dump() << '\n';
}

std::string iso8601(std::chrono::system_clock::time_point tp)
{
  const std::time_t t = std::chrono::system_clock::to_time_t(tp);
  std::tm utc{};
  gmtime_r(&t, &utc);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &utc);
  return buf;
}

std::string excerpt(const std::string& body)
{
  constexpr std::size_t limit = 300;
  return body.size() <= limit ? body : body.substr(0, limit) + "...";
}

}  // namespace

GenerationResult generate(const ProviderConfig& config, const Scene& scene)
{
  check_config(config);
  require_runnable(scene);

  GenerationResult result;
  result.provider = config.provider;
  result.model_name = config.model_name;

  std::string api_key;
  if (config.provider != Provider::mock) {
    const char* value = std::getenv(config.api_key_ref.c_str());
    if (!value || !*value)
      throw Error(ErrorKind::credential, "environment variable " + config.api_key_ref +
                                             " is not set (credential for " +
                                             std::string(to_string(config.provider)) + ")");
    api_key = value;
  }

  const PromptPair prompt = build_prompt(serialize_scene(scene));
  using clock = std::chrono::steady_clock;

  if (config.provider == Provider::mock) {
    const double delay = config.mock_latency.value_or(0.0);
    const auto seed = static_cast<std::uint64_t>(config.mock_seed.value_or(0));
    result.timestamp = std::chrono::system_clock::now();
    const auto start = clock::now();
    if (delay > config.timeout) {
      std::this_thread::sleep_for(std::chrono::duration<double>(config.timeout));
      throw Error(ErrorKind::timeout, "mock provider exceeded timeout");
    }
    std::this_thread::sleep_for(std::chrono::duration<double>(delay));
    result.raw_text = mock_plan(scene, seed);
    result.latency = std::chrono::duration<double>(clock::now() - start).count();
    append_debug_log(config, {{"timestamp", iso8601(result.timestamp)},
                              {"provider", "mock"},
                              {"model", config.model_name},
                              {"request", {{"system", prompt.system_text}, {"user", prompt.user_text}}},
                              {"response", result.raw_text},
                              {"latency_s", result.latency}});
    return result;
  }

  const HttpRequest request = build_request(config, prompt, api_key);
  result.timestamp = std::chrono::system_clock::now();
  const auto start = clock::now();
  detail::HttpResponse response;
  try {
    response = detail::http_post(request, config.timeout);
  } catch (const Error&) {
    append_debug_log(config, {{"timestamp", iso8601(result.timestamp)},
                              {"provider", to_string(config.provider)},
                              {"url", request.url},
                              {"request", nlohmann::json::parse(request.body)},
                              {"error", "transport failure"}});
    throw;
  }
  result.latency = std::chrono::duration<double>(clock::now() - start).count();

  append_debug_log(config, {{"timestamp", iso8601(result.timestamp)},
                            {"provider", to_string(config.provider)},
                            {"model", config.model_name},
                            {"url", request.url},
                            {"request", nlohmann::json::parse(request.body)},
                            {"status", response.status},
                            {"response", response.body},
                            {"latency_s", result.latency}});

  if (response.status < 200 || response.status >= 300)
    throw Error(ErrorKind::http, "HTTP " + std::to_string(response.status) + " from " +
                                     std::string(to_string(config.provider)) + ": " +
                                     excerpt(response.body));
  result.raw_text = extract_reply(config.provider, response.body);
  return result;
}

GenerationResult generate_with_retry(const ProviderConfig& config, const Scene& scene,
                                     int attempts, std::chrono::milliseconds backoff)
{
  if (attempts < 1)
    throw Error(ErrorKind::precondition, "attempts must be >= 1");
  for (int i = 1;; ++i) {
    try {
      return generate(config, scene);
    } catch (const Error& e) {
      const bool transient = e.kind() == ErrorKind::network || e.kind() == ErrorKind::timeout ||
                             (e.kind() == ErrorKind::http &&
                              std::string_view(e.what()).substr(0, 6) == "HTTP 5");
      if (!transient || i >= attempts)
        throw;
      std::this_thread::sleep_for(backoff * i);
    }
  }
}

}  // namespace scenedirector
