#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "scenedirector/error.hpp"
#include "scenedirector/scene.hpp"

namespace scenedirector {

/// One queued visit: target object plus how the agent engages with it.
struct Destination {
  std::string object_id;
  bool interact = false;
  double duration = 0.0;  ///< seconds
  double speed = 1.0;     ///< world units per second
  bool grab = false;
  bool stationary = false;
  bool basic = false;

  friend bool operator==(const Destination&, const Destination&) = default;
};

enum class InteractionType { walk_only, normal, grab, stationary, basic };

std::string_view to_string(InteractionType type);

/// walk_only whenever interact is false, regardless of the type flags.
InteractionType interaction_type(const Destination& d);

struct AgentQueue {
  std::string agent_id;
  std::vector<Destination> queue;

  friend bool operator==(const AgentQueue&, const AgentQueue&) = default;
};

struct ActionPlan {
  std::vector<AgentQueue> entries;

  const AgentQueue* find(std::string_view agent_id) const;
  std::size_t destination_count() const;

  friend bool operator==(const ActionPlan&, const ActionPlan&) = default;
};

/// Thrown by parse_plan. `code` is one of: syntax, duplicate-agent,
/// flag-exclusivity, interact-required, non-positive-duration,
/// non-positive-speed.
class PlanParseError : public Error {
public:
  PlanParseError(std::string code, std::size_t offset,
                 std::vector<std::string> expected, std::string context,
                 const std::string& message);

  const std::string& code() const noexcept { return code_; }
  std::size_t offset() const noexcept { return offset_; }
  const std::vector<std::string>& expected() const noexcept { return expected_; }
  /// "A_1/Obj_2" style location, empty for pure syntax errors.
  const std::string& context() const noexcept { return context_; }

private:
  std::string code_;
  std::size_t offset_;
  std::vector<std::string> expected_;
  std::string context_;
};

ActionPlan parse_plan(std::string_view text);

/// Canonical form: `A_1 {Obj_1 (T, 2, 1, F, F, T)}, A_2 {...}`.
std::string emit_plan(const ActionPlan& plan);

/// Shortest decimal that round-trips, never in exponent form.
std::string format_number(double value);

enum class Strictness { lenient, strict };
enum class Severity { error, warning };

struct Violation {
  Severity severity = Severity::error;
  std::string code;
  std::string message;
  std::string location;
};

struct ValidityReport {
  bool parse_ok = false;
  std::vector<Violation> violations;
  bool is_structurally_valid = false;

  std::size_t error_count() const;
  std::size_t warning_count() const;
};

inline constexpr double kMinSpeed = 1.0;
inline constexpr double kMaxSpeed = 4.0;
inline constexpr double kMinDuration = 2.0;
inline constexpr double kMaxDuration = 16.0;
inline constexpr double kMinBasicDuration = 3.0;
inline constexpr double kMaxBasicDuration = 5.0;

ValidityReport validate_plan(const ActionPlan& plan, const Scene& scene,
                             Strictness mode);

/// Parse then validate; parse failures become a report with parse_ok=false.
ValidityReport validate_plan_text(std::string_view text, const Scene& scene,
                                  Strictness mode,
                                  std::optional<ActionPlan>* parsed = nullptr);

nlohmann::json to_json(const ValidityReport& report);

}  // namespace scenedirector
