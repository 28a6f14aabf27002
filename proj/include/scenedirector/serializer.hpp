#pragma once

#include <string>

#include "scenedirector/scene.hpp"

namespace scenedirector {

/// Plain-language scene description sent to the language model.
struct SceneDescription {
  std::string text;

  friend bool operator==(const SceneDescription&, const SceneDescription&) = default;
};

inline constexpr const char* kSectionRule = "----------";

/// Two fractional digits; the integer zero is dropped for |v| < 1 ("-.36",
/// ".70") and a value that rounds to zero prints as "0".
std::string format_coordinate(double value);

/// "(<x>, <y>, <z>)" with format_coordinate on each component.
std::string format_position(const Vec3& p);

/// LF-terminated lines; agents and objects in scene order.
SceneDescription serialize_scene(const Scene& scene);

}  // namespace scenedirector
