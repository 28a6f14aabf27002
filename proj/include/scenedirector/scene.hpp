#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>
#include <nlohmann/json.hpp>

namespace scenedirector {

struct Vec3 {
  double x = 0.0;
  double y = 0.0;
  double z = 0.0;

  friend bool operator==(const Vec3&, const Vec3&) = default;
};

struct AgentSpec {
  std::string name;
  std::string id;
  std::vector<std::string> tags;
  Vec3 position;

  friend bool operator==(const AgentSpec&, const AgentSpec&) = default;
};

struct ObjectSpec {
  std::string id;
  std::string name;
  bool grabbable = false;
  bool stationary = false;
  bool stationary_compatible = false;
  bool basic = false;
  std::vector<std::string> tags;
  Vec3 position;
  /// Device state for toggleable objects. Absent means "off" for basic
  /// objects and "not a device" otherwise.
  std::optional<bool> initial_state;

  /// Basic objects always carry a device state; others only when declared.
  bool toggleable() const { return basic || initial_state.has_value(); }
  bool walk_only() const { return !grabbable && !stationary && !basic; }

  friend bool operator==(const ObjectSpec&, const ObjectSpec&) = default;
};

struct Scene {
  std::vector<AgentSpec> agents;
  std::vector<ObjectSpec> objects;

  const AgentSpec* find_agent(std::string_view id) const;
  const ObjectSpec* find_object(std::string_view id) const;

  friend bool operator==(const Scene&, const Scene&) = default;
};

/// Factors of the scenario-count estimate: objects, variants per object,
/// timing variations and agents.
struct ScenarioParams {
  std::uint64_t objects = 1;
  std::uint64_t variants = 1;
  std::uint64_t durations = 1;
  std::uint64_t agents = 1;
};

using BigInt = boost::multiprecision::cpp_int;

bool is_agent_id(std::string_view id);
bool is_object_id(std::string_view id);

/// Every broken invariant, one human-readable line each, naming the entity
/// and the rule. Empty means the scene is well formed.
std::vector<std::string> validate_scene(const Scene& scene);

/// Throws Error(invariant) with the first violation, or Error(precondition)
/// when the scene has no agents or no objects.
void require_runnable(const Scene& scene);

Scene scene_from_json(const nlohmann::json& doc);
nlohmann::json scene_to_json(const Scene& scene);

/// Parses scene JSON text. Syntax errors carry line and column.
Scene parse_scene(std::string_view text);
Scene load_scene(const std::filesystem::path& path);
void save_scene(const Scene& scene, const std::filesystem::path& path);

/// (objects * variants * durations) ^ agents, exact.
BigInt estimate_scenarios(const ScenarioParams& params);

}  // namespace scenedirector
