#pragma once

#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "scenedirector/error.hpp"
#include "scenedirector/plan.hpp"
#include "scenedirector/scene.hpp"

namespace scenedirector {

/// Ground-plane point: the scene's x and z. Height is metadata only.
struct Vec2 {
  double x = 0.0;
  double z = 0.0;

  friend bool operator==(const Vec2&, const Vec2&) = default;
};

inline Vec2 ground(const Vec3& p) { return {p.x, p.z}; }

/// Seam for swapping navigation models. Distances are in world units.
class PathProvider {
public:
  virtual ~PathProvider() = default;
  virtual double distance(const Vec2& from, const Vec2& to) const = 0;
};

class StraightLinePaths final : public PathProvider {
public:
  double distance(const Vec2& from, const Vec2& to) const override;
};

enum class AgentMode { idle, moving, interacting };
enum class ConflictPolicy { wait, fail };

std::string_view to_string(AgentMode mode);
std::string_view to_string(ConflictPolicy policy);
ConflictPolicy parse_conflict_policy(std::string_view token);

struct AgentState {
  std::string agent_id;
  Vec2 position;
  AgentMode mode = AgentMode::idle;
  std::optional<std::string> carried_object;
  std::string lower_channel;  ///< sustained stationary action, empty when none
  std::string upper_channel;  ///< carry action, empty when none
  std::size_t queue_cursor = 0;

  friend bool operator==(const AgentState&, const AgentState&) = default;
};

enum class EventKind {
  move_start,
  arrive,
  interact_start,
  interact_end,
  attach,
  drop_destroy,
  toggle,
  conflict,
  idle,
};

std::string_view to_string(EventKind kind);

struct SimEvent {
  double time = 0.0;
  std::optional<std::string> agent_id;
  EventKind kind = EventKind::idle;
  std::optional<std::string> object_id;
  std::string detail;

  friend bool operator==(const SimEvent&, const SimEvent&) = default;
};

struct Interval {
  double start = 0.0;
  double end = 0.0;

  friend bool operator==(const Interval&, const Interval&) = default;
};

/// Two agents wanting one exclusive object at overlapping times.
struct ConflictRecord {
  std::string object_id;
  std::vector<std::string> agents;  ///< holder first, then the waiting agent
  Interval overlap;

  friend bool operator==(const ConflictRecord&, const ConflictRecord&) = default;
};

struct SimTrace {
  std::vector<SimEvent> events;
  std::vector<AgentState> final_states;
  std::map<std::string, bool> object_states;
  std::set<std::string> destroyed_objects;
  std::vector<ConflictRecord> conflicts;

  friend bool operator==(const SimTrace&, const SimTrace&) = default;
};

/// Thrown under ConflictPolicy::fail.
class ConflictError : public Error {
public:
  explicit ConflictError(ConflictRecord record);
  const ConflictRecord& record() const noexcept { return record_; }

private:
  ConflictRecord record_;
};

/// Event-driven execution with exact times. Throws ConflictError under
/// policy=fail, Error(unavailable_object) on a reference to a grabbed object,
/// Error(precondition) when the plan does not resolve against the scene.
SimTrace simulate(const Scene& scene, const ActionPlan& plan,
                  ConflictPolicy policy = ConflictPolicy::wait,
                  const PathProvider& paths = StraightLinePaths{});

enum class PredictionKind { occupancy_overlap, grabbed_reuse };

struct PredictedConflict {
  PredictionKind kind = PredictionKind::occupancy_overlap;
  std::string object_id;
  std::vector<std::string> agents;
  Interval overlap;  ///< empty for grabbed_reuse

  friend bool operator==(const PredictedConflict&, const PredictedConflict&) = default;
};

/// Static timeline estimate without waiting. Empty result guarantees that
/// simulate(policy=fail) completes.
std::vector<PredictedConflict> check_feasibility(const Scene& scene, const ActionPlan& plan,
                                                 const PathProvider& paths = StraightLinePaths{});

std::string trace_to_jsonl(const SimTrace& trace);
nlohmann::json to_json(const SimEvent& event);

enum class TimelineFormat { text, svg };
TimelineFormat parse_timeline_format(std::string_view token);

/// One lane per agent with labelled spans. Deterministic.
std::string render_timeline(const SimTrace& trace, TimelineFormat format);

}  // namespace scenedirector
