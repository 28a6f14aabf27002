#include "scenedirector/simulator.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <queue>
#include <sstream>

namespace scenedirector {

double StraightLinePaths::distance(const Vec2& from, const Vec2& to) const
{
  return std::hypot(to.x - from.x, to.z - from.z);
}

std::string_view to_string(AgentMode mode)
{
  switch (mode) {
    case AgentMode::idle: return "idle";
    case AgentMode::moving: return "moving";
    case AgentMode::interacting: return "interacting";
  }
  return "unknown";
}

std::string_view to_string(ConflictPolicy policy)
{
  return policy == ConflictPolicy::wait ? "wait" : "fail";
}

ConflictPolicy parse_conflict_policy(std::string_view token)
{
  if (token == "wait")
    return ConflictPolicy::wait;
  if (token == "fail")
    return ConflictPolicy::fail;
  throw Error(ErrorKind::precondition,
              "unknown conflict policy '" + std::string(token) + "' (expected wait|fail)");
}

std::string_view to_string(EventKind kind)
{
  switch (kind) {
    case EventKind::move_start: return "move_start";
    case EventKind::arrive: return "arrive";
    case EventKind::interact_start: return "interact_start";
    case EventKind::interact_end: return "interact_end";
    case EventKind::attach: return "attach";
    case EventKind::drop_destroy: return "drop_destroy";
    case EventKind::toggle: return "toggle";
    case EventKind::conflict: return "conflict";
    case EventKind::idle: return "idle";
  }
  return "unknown";
}

namespace {

std::string seconds(double t)
{
  return format_number(t);
}

std::string describe(const ConflictRecord& r)
{
  std::string who;
  for (std::size_t i = 0; i < r.agents.size(); ++i)
    who += (i ? " and " : "") + r.agents[i];
  return "conflict on " + r.object_id + " between " + who + " over [" +
         seconds(r.overlap.start) + ", " + seconds(r.overlap.end) + "]";
}

bool exclusive(InteractionType type)
{
  return type == InteractionType::normal || type == InteractionType::stationary ||
         type == InteractionType::basic;
}

void check_resolvable(const Scene& scene, const ActionPlan& plan)
{
  const auto scene_violations = validate_scene(scene);
  if (!scene_violations.empty())
    throw Error(ErrorKind::invariant, scene_violations.front());
  const auto report = validate_plan(plan, scene, Strictness::lenient);
  for (const auto& v : report.violations) {
    if (v.severity == Severity::error &&
        (v.code == "unknown-agent" || v.code == "unknown-object" ||
         v.code == "capability-mismatch"))
      throw Error(ErrorKind::precondition,
                  "plan does not resolve against scene: " + v.location + ": " + v.message);
  }
}

class Runner {
public:
  Runner(const Scene& scene, const ActionPlan& plan, ConflictPolicy policy,
         const PathProvider& paths)
  : scene_(scene), plan_(plan), policy_(policy), paths_(paths)
  {}

  SimTrace run()
  {
    for (const auto& o : scene_.objects)
      if (o.toggleable())
        trace_.object_states[o.id] = o.initial_state.value_or(false);

    for (const auto& entry : plan_.entries) {
      const AgentSpec* spec = scene_.find_agent(entry.agent_id);
      Agent a;
      a.queue = &entry;
      a.state.agent_id = entry.agent_id;
      a.state.position = ground(spec->position);
      agents_.push_back(std::move(a));
    }
    for (std::size_t i = 0; i < agents_.size(); ++i)
      depart(i, 0.0);

    while (!pending_.empty()) {
      const Wakeup w = pending_.top();
      pending_.pop();
      if (w.phase == Phase::release)
        finish(w.agent, w.time);
      else
        arrive(w.agent, w.time);
    }

    // Agents without a queue are idle from the start.
    for (const auto& spec : scene_.agents) {
      if (plan_.find(spec.id))
        continue;
      emit(0.0, spec.id, EventKind::idle, std::nullopt, "no destinations");
    }
    std::stable_sort(trace_.events.begin(), trace_.events.end(),
                     [](const SimEvent& l, const SimEvent& r) { return l.time < r.time; });

    for (const auto& spec : scene_.agents) {
      auto it = std::find_if(agents_.begin(), agents_.end(), [&](const Agent& a) {
        return a.state.agent_id == spec.id;
      });
      if (it != agents_.end()) {
        trace_.final_states.push_back(it->state);
      } else {
        AgentState s;
        s.agent_id = spec.id;
        s.position = ground(spec.position);
        trace_.final_states.push_back(std::move(s));
      }
    }
    return std::move(trace_);
  }

private:
  enum class Phase { release = 0, arrival = 1 };

  struct Wakeup {
    double time;
    Phase phase;
    std::uint64_t seq;
    std::size_t agent;

    bool operator>(const Wakeup& o) const
    {
      if (time != o.time)
        return time > o.time;
      if (phase != o.phase)
        return phase > o.phase;
      return seq > o.seq;
    }
  };

  struct Agent {
    const AgentQueue* queue = nullptr;
    AgentState state;
    std::size_t carry_index = 0;  ///< queue index of the grab that attached the carry
    std::optional<std::size_t> pending_conflict;
  };

  struct Occupancy {
    std::optional<std::size_t> holder;
    Interval held;
    std::deque<std::size_t> waiters;
  };

  const Destination& current(const Agent& a) const { return a.queue->queue[a.state.queue_cursor]; }
  const ObjectSpec& object(const Destination& d) const { return *scene_.find_object(d.object_id); }

  void emit(double t, const std::string& agent, EventKind kind,
            std::optional<std::string> object, std::string detail)
  {
    trace_.events.push_back({t, agent, kind, std::move(object), std::move(detail)});
  }

  void schedule(double t, Phase phase, std::size_t agent)
  {
    pending_.push({t, phase, seq_++, agent});
  }

  void drop_carry(Agent& a, double t, const std::string& why)
  {
    const std::string obj = *a.state.carried_object;
    emit(t, a.state.agent_id, EventKind::drop_destroy, obj, why);
    trace_.destroyed_objects.insert(obj);
    attached_.erase(obj);
    a.state.carried_object.reset();
    a.state.upper_channel.clear();
  }

  void depart(std::size_t index, double t)
  {
    Agent& a = agents_[index];
    if (a.state.queue_cursor == a.queue->queue.size()) {
      if (a.state.carried_object)
        drop_carry(a, t, "queue finished");
      a.state.mode = AgentMode::idle;
      a.state.lower_channel.clear();
      emit(t, a.state.agent_id, EventKind::idle, std::nullopt, "queue finished");
      return;
    }
    const Destination& d = current(a);
    const ObjectSpec& obj = object(d);
    const double dist = paths_.distance(a.state.position, ground(obj.position));
    a.state.mode = AgentMode::moving;
    emit(t, a.state.agent_id, EventKind::move_start, d.object_id,
         "speed " + format_number(d.speed) + ", distance " + format_number(dist));
    schedule(t + dist / d.speed, Phase::arrival, index);
  }

  void arrive(std::size_t index, double t)
  {
    Agent& a = agents_[index];
    const Destination& d = current(a);
    const ObjectSpec& obj = object(d);
    a.state.position = ground(obj.position);
    emit(t, a.state.agent_id, EventKind::arrive, d.object_id, std::string(to_string(interaction_type(d))));

    if (trace_.destroyed_objects.count(d.object_id))
      throw Error(ErrorKind::unavailable_object,
                  a.state.agent_id + " references " + d.object_id +
                      ", which was destroyed after being grabbed");
    if (auto it = attached_.find(d.object_id); it != attached_.end())
      throw Error(ErrorKind::unavailable_object,
                  a.state.agent_id + " references " + d.object_id + ", which is carried by " +
                      it->second);

    const InteractionType type = interaction_type(d);
    a.state.mode = AgentMode::interacting;
    switch (type) {
      case InteractionType::walk_only:
        schedule(t + d.duration, Phase::release, index);
        return;
      case InteractionType::grab:
        if (a.state.carried_object)
          drop_carry(a, t, "replaced by " + d.object_id);
        attached_[d.object_id] = a.state.agent_id;
        a.state.carried_object = d.object_id;
        a.state.upper_channel = "carry:" + d.object_id;
        a.carry_index = a.state.queue_cursor;
        emit(t, a.state.agent_id, EventKind::attach, d.object_id, "upper channel");
        emit(t, a.state.agent_id, EventKind::interact_start, d.object_id, "grab");
        schedule(t + d.duration, Phase::release, index);
        return;
      default:
        break;
    }

    Occupancy& occ = occupancy_[d.object_id];
    if (occ.holder && *occ.holder != index) {
      ConflictRecord record{d.object_id,
                            {agents_[*occ.holder].state.agent_id, a.state.agent_id},
                            {t, std::min(occ.held.end, t + d.duration)}};
      if (policy_ == ConflictPolicy::fail)
        throw ConflictError(std::move(record));
      record.overlap.end = occ.held.end;
      emit(t, a.state.agent_id, EventKind::conflict, d.object_id,
           "waiting for " + record.agents.front() + " to free " + d.object_id);
      a.pending_conflict = trace_.conflicts.size();
      trace_.conflicts.push_back(std::move(record));
      occ.waiters.push_back(index);
      return;
    }
    start_exclusive(index, t);
  }

  void start_exclusive(std::size_t index, double t)
  {
    Agent& a = agents_[index];
    const Destination& d = current(a);
    const ObjectSpec& obj = object(d);
    const InteractionType type = interaction_type(d);

    if (a.pending_conflict) {
      trace_.conflicts[*a.pending_conflict].overlap.end = t;
      a.pending_conflict.reset();
    }
    Occupancy& occ = occupancy_[d.object_id];
    occ.holder = index;
    occ.held = {t, t + d.duration};

    if (type == InteractionType::stationary && a.state.carried_object &&
        !obj.stationary_compatible)
      drop_carry(a, t, "warning: " + d.object_id + " is not stationary compatible");

    emit(t, a.state.agent_id, EventKind::interact_start, d.object_id,
         std::string(to_string(type)));
    if (type == InteractionType::stationary)
      a.state.lower_channel = "hold:" + d.object_id;
    if (type == InteractionType::basic) {
      bool& state = trace_.object_states[d.object_id];
      const bool before = state;
      state = !state;
      emit(t, a.state.agent_id, EventKind::toggle, d.object_id,
           std::string(before ? "on" : "off") + " -> " + (state ? "on" : "off"));
    }
    schedule(t + d.duration, Phase::release, index);
  }

  void finish(std::size_t index, double t)
  {
    Agent& a = agents_[index];
    const Destination& d = current(a);
    const InteractionType type = interaction_type(d);

    std::optional<std::size_t> next_holder;
    if (type != InteractionType::walk_only) {
      emit(t, a.state.agent_id, EventKind::interact_end, d.object_id,
           std::string(to_string(type)));
      if (type == InteractionType::stationary)
        a.state.lower_channel.clear();
    }
    if (exclusive(type)) {
      Occupancy& occ = occupancy_[d.object_id];
      occ.holder.reset();
      if (!occ.waiters.empty()) {
        next_holder = occ.waiters.front();
        occ.waiters.pop_front();
      }
    }
    if (a.state.carried_object && a.carry_index != a.state.queue_cursor)
      drop_carry(a, t, "done after " + d.object_id);

    ++a.state.queue_cursor;
    depart(index, t);
    if (next_holder)
      start_exclusive(*next_holder, t);
  }

  const Scene& scene_;
  const ActionPlan& plan_;
  ConflictPolicy policy_;
  const PathProvider& paths_;

  std::vector<Agent> agents_;
  std::map<std::string, Occupancy> occupancy_;
  std::map<std::string, std::string> attached_;
  std::priority_queue<Wakeup, std::vector<Wakeup>, std::greater<>> pending_;
  std::uint64_t seq_ = 0;
  SimTrace trace_;
};

}  // namespace

ConflictError::ConflictError(ConflictRecord record)
: Error(ErrorKind::conflict, describe(record)), record_(std::move(record))
{}

SimTrace simulate(const Scene& scene, const ActionPlan& plan, ConflictPolicy policy,
                  const PathProvider& paths)
{
  check_resolvable(scene, plan);
  return Runner(scene, plan, policy, paths).run();
}

std::vector<PredictedConflict> check_feasibility(const Scene& scene, const ActionPlan& plan,
                                                 const PathProvider& paths)
{
  struct Booking {
    std::size_t agent;
    Interval span;
  };
  std::map<std::string, std::vector<Booking>> bookings;
  std::map<std::string, std::vector<std::string>> referrers;
  std::set<std::string> grabbed;

  for (std::size_t ai = 0; ai < plan.entries.size(); ++ai) {
    const auto& entry = plan.entries[ai];
    const AgentSpec* agent = scene.find_agent(entry.agent_id);
    if (!agent)
      continue;
    Vec2 pos = ground(agent->position);
    double t = 0.0;
    for (const auto& d : entry.queue) {
      const ObjectSpec* obj = scene.find_object(d.object_id);
      if (!obj)
        break;
      const Vec2 target = ground(obj->position);
      const double arrival = t + paths.distance(pos, target) / d.speed;
      const double end = arrival + d.duration;
      if (exclusive(interaction_type(d)))
        bookings[d.object_id].push_back({ai, {arrival, end}});
      if (d.grab)
        grabbed.insert(d.object_id);
      referrers[d.object_id].push_back(entry.agent_id);
      t = end;
      pos = target;
    }
  }

  std::vector<PredictedConflict> out;
  for (const auto& obj : scene.objects) {
    if (auto it = bookings.find(obj.id); it != bookings.end()) {
      const auto& list = it->second;
      for (std::size_t i = 0; i < list.size(); ++i) {
        for (std::size_t j = i + 1; j < list.size(); ++j) {
          const auto& l = list[i];
          const auto& r = list[j];
          if (l.agent == r.agent)
            continue;
          if (l.span.start < r.span.end && r.span.start < l.span.end) {
            const bool l_first = l.span.start <= r.span.start;
            const auto& first = l_first ? l : r;
            const auto& second = l_first ? r : l;
            out.push_back({PredictionKind::occupancy_overlap,
                           obj.id,
                           {plan.entries[first.agent].agent_id,
                            plan.entries[second.agent].agent_id},
                           {std::max(l.span.start, r.span.start),
                            std::min(l.span.end, r.span.end)}});
          }
        }
      }
    }
    if (grabbed.count(obj.id)) {
      const auto& refs = referrers[obj.id];
      if (refs.size() > 1) {
        std::vector<std::string> agents;
        for (const auto& r : refs)
          if (std::find(agents.begin(), agents.end(), r) == agents.end())
            agents.push_back(r);
        out.push_back({PredictionKind::grabbed_reuse, obj.id, std::move(agents), {}});
      }
    }
  }
  return out;
}

nlohmann::json to_json(const SimEvent& event)
{
  nlohmann::json j;
  j["time"] = event.time;
  j["agent_id"] = event.agent_id ? nlohmann::json(*event.agent_id) : nlohmann::json(nullptr);
  j["kind"] = std::string(to_string(event.kind));
  j["object_id"] = event.object_id ? nlohmann::json(*event.object_id) : nlohmann::json(nullptr);
  j["detail"] = event.detail;
  return j;
}

std::string trace_to_jsonl(const SimTrace& trace)
{
  std::string out;
  for (const auto& e : trace.events) {
    out += to_json(e).dump();
    out += '\n';
  }
  return out;
}

}  // namespace scenedirector
