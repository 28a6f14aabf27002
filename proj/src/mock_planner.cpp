#include <algorithm>
#include <map>
#include <optional>
#include <random>
#include <set>

#include "scenedirector/gateway.hpp"
#include "scenedirector/plan.hpp"
#include "scenedirector/simulator.hpp"

namespace scenedirector {

namespace {

std::uint64_t fnv1a(std::string_view text)
{
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char c : text) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

// Draws straight from mt19937_64 output, which the standard fully specifies,
// so plans are identical across standard libraries.
class Draw {
public:
  explicit Draw(std::uint64_t seed) : engine_(seed) {}

  std::size_t below(std::size_t n) { return static_cast<std::size_t>(engine_() % n); }
  int between(int lo, int hi) { return lo + static_cast<int>(below(std::size_t(hi - lo + 1))); }

  template <class T>
  void shuffle(std::vector<T>& v)
  {
    for (std::size_t i = v.size(); i > 1; --i)
      std::swap(v[i - 1], v[below(i)]);
  }

private:
  std::mt19937_64 engine_;
};

struct Booked {
  double start;
  double end;
};

Destination shape_for(const ObjectSpec& obj, Draw& draw)
{
  Destination d;
  d.object_id = obj.id;
  d.speed = 1.0 + 0.5 * draw.between(0, 6);  // 1.0 .. 4.0
  if (obj.basic) {
    d.interact = true;
    d.basic = true;
    d.duration = draw.between(3, 5);
  } else if (obj.stationary) {
    d.interact = true;
    d.stationary = true;
    d.duration = draw.between(2, 16);
  } else if (obj.grabbable) {
    d.interact = true;
    d.grab = true;
    d.duration = draw.between(2, 6);
  } else {
    d.duration = draw.between(2, 16);
  }
  return d;
}

}  // namespace

std::string mock_plan(const Scene& scene, std::uint64_t seed)
{
  require_runnable(scene);
  Draw draw(seed ^ fnv1a(serialize_scene(scene).text));
  const StraightLinePaths paths;

  std::set<std::string> touched;  // referenced by any agent so far
  std::set<std::string> grabbed;
  std::map<std::string, std::vector<Booked>> bookings;

  ActionPlan plan;
  for (const auto& agent : scene.agents) {
    AgentQueue entry{agent.id, {}};
    Vec2 pos = ground(agent.position);
    double t = 0.0;
    bool carrying = false;
    std::string previous;
    const std::size_t wanted = 1 + draw.below(3);
    std::vector<std::pair<std::string, Booked>> mine;

    while (entry.queue.size() < wanted) {
      std::vector<const ObjectSpec*> candidates;
      for (const auto& o : scene.objects) {
        if (grabbed.count(o.id) || o.id == previous)
          continue;
        if (o.grabbable && (carrying || touched.count(o.id)))
          continue;
        if (carrying && o.stationary && !o.stationary_compatible)
          continue;
        candidates.push_back(&o);
      }
      draw.shuffle(candidates);

      std::optional<Destination> chosen;
      double chosen_end = 0.0;
      for (const ObjectSpec* obj : candidates) {
        for (int attempt = 0; attempt < 4 && !chosen; ++attempt) {
          Destination d = shape_for(*obj, draw);
          const double arrival = t + paths.distance(pos, ground(obj->position)) / d.speed;
          const double end = arrival + d.duration;
          const auto type = interaction_type(d);
          const bool exclusive = type == InteractionType::normal ||
                                 type == InteractionType::stationary ||
                                 type == InteractionType::basic;
          bool clear = true;
          if (exclusive) {
            for (const auto& b : bookings[obj->id])
              if (arrival < b.end && b.start < end)
                clear = false;
          }
          if (clear) {
            chosen = d;
            chosen_end = end;
            if (exclusive)
              mine.push_back({obj->id, {arrival, end}});
          }
        }
        if (chosen)
          break;
      }
      if (!chosen)
        break;

      const ObjectSpec& obj = *scene.find_object(chosen->object_id);
      touched.insert(obj.id);
      if (chosen->grab) {
        grabbed.insert(obj.id);
        carrying = true;
      } else if (carrying) {
        carrying = false;  // dropped after this destination
      }
      pos = ground(obj.position);
      t = chosen_end;
      previous = obj.id;
      entry.queue.push_back(std::move(*chosen));
    }

    for (auto& [id, span] : mine)
      bookings[id].push_back(span);
    if (!entry.queue.empty())
      plan.entries.push_back(std::move(entry));
  }
  return emit_plan(plan);
}

}  // namespace scenedirector
