#pragma once

#include <chrono>
#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "scenedirector/scene.hpp"
#include "scenedirector/serializer.hpp"

namespace scenedirector {

enum class Provider { chatgpt, claude, gemini, grok, mock };

std::string_view to_string(Provider provider);
/// Display name used in reports ("ChatGPT", "Claude", ...).
std::string_view display_name(Provider provider);
Provider parse_provider(std::string_view token);
const std::vector<Provider>& all_providers();

struct ProviderConfig {
  Provider provider = Provider::mock;
  std::string model_name;
  std::string endpoint;
  std::string api_key_ref;  ///< name of the environment variable holding the key
  double timeout = 60.0;    ///< seconds
  std::optional<double> mock_latency;
  std::optional<std::int64_t> mock_seed;
  // Decoding parameters are passed through only when set.
  std::optional<double> temperature;
  std::optional<int> max_tokens;
  std::optional<std::filesystem::path> debug_log;  ///< JSONL request/response log
};

/// Built-in endpoint, model and key variable for each vendor.
ProviderConfig default_config(Provider provider);

/// Throws Error(config) on a broken config.
void check_config(const ProviderConfig& config);

/// Reads providers.toml: one table per provider name, keys named like the
/// ProviderConfig fields. Providers missing from the file get defaults.
std::map<Provider, ProviderConfig> load_provider_configs(const std::filesystem::path& path);
std::map<Provider, ProviderConfig> parse_provider_configs(std::string_view toml_text);

inline constexpr std::string_view kSystemPromptVersion = "v1";

/// The instruction prompt sent as the system message, verbatim.
std::string_view system_prompt();
/// Lower-case hex SHA-256 of system_prompt().
std::string system_prompt_sha256();

struct PromptPair {
  std::string system_text;
  std::string user_text;

  friend bool operator==(const PromptPair&, const PromptPair&) = default;
};

PromptPair build_prompt(const SceneDescription& description);

struct GenerationResult {
  std::string raw_text;
  double latency = 0.0;  ///< seconds, request sent to full response received
  Provider provider = Provider::mock;
  std::string model_name;
  std::chrono::system_clock::time_point timestamp;
};

/// One request, no retries.
GenerationResult generate(const ProviderConfig& config, const Scene& scene);

/// Retries network/timeout/5xx failures with linear backoff. Not used by the
/// benchmark, whose timing is single-shot.
GenerationResult generate_with_retry(const ProviderConfig& config, const Scene& scene,
                                     int attempts, std::chrono::milliseconds backoff);

/// Deterministic stand-in for model output; strict-valid and conflict-free.
std::string mock_plan(const Scene& scene, std::uint64_t seed);

struct CleanReply {
  std::string text;
  bool stripped_fence = false;
};

/// Trims whitespace and a surrounding Markdown code fence.
CleanReply clean_reply(std::string_view raw);

// Vendor wire adapters, exposed for tests.

struct HttpRequest {
  std::string url;
  std::vector<std::pair<std::string, std::string>> headers;
  std::string body;
};

HttpRequest build_request(const ProviderConfig& config, const PromptPair& prompt,
                          const std::string& api_key);
std::string extract_reply(Provider provider, std::string_view response_body);

}  // namespace scenedirector
