#include "fixtures.hpp"

#include <set>

namespace sdtest {

Scene golden_scene()
{
  Scene s;
  s.agents.push_back({"Guy", "A_1", {"male", "college student", "casual", "claustrophobic"},
                      {-0.36, 0.11, -6.12}});
  ObjectSpec chair;
  chair.id = "Obj_5";
  chair.name = "Chair";
  chair.stationary = true;
  chair.tags = {"chair", "sit", "stay", "relax"};
  chair.position = {-1.18, 0.23, -5.55};
  ObjectSpec computer;
  computer.id = "Obj_1";
  computer.name = "Computer";
  computer.stationary = true;
  computer.tags = {"work", "play games", "desktop", "office work"};
  computer.position = {0.70, 0.26, -5.46};
  s.objects = {chair, computer};
  return s;
}

const std::vector<std::string>& golden_lines()
{
  static const std::vector<std::string> lines = {
      "Scene Description:",
      "----------",
      "Actors:",
      "----------",
      "Name: Guy",
      "ID: A_1",
      "Tags: male, college student, casual, claustrophobic",
      "Position: (-.36, .11, -6.12)",
      "----------",
      "----------",
      "Interactable Objects:",
      "----------",
      "Object ID: Obj_5",
      "Name: Chair",
      "Is Grabbable: No",
      "Is Stationary: Yes",
      "Is Stationary Compatible: No",
      "Is Basic Interaction: No",
      "Tags: chair, sit, stay, relax",
      "Position: (-1.18, .23, -5.55)",
      "----------",
      "Object ID: Obj_1",
      "Name: Computer",
      "Is Grabbable: No",
      "Is Stationary: Yes",
      "Is Stationary Compatible: No",
      "Is Basic Interaction: No",
      "Tags: work, play games, desktop, office work",
      "Position: (.70, .26, -5.46)",
      "----------",
      "----------",
      "END",
      "----------",
  };
  return lines;
}

namespace {

ObjectSpec object(std::string id, std::string name, Vec3 pos)
{
  ObjectSpec o;
  o.id = std::move(id);
  o.name = std::move(name);
  o.position = pos;
  return o;
}

}  // namespace

Scene switch_and_desk_scene()
{
  Scene s;
  s.agents.push_back({"Guy", "A_1", {"student"}, {0, 0, 0}});
  auto light = object("Obj_1", "Light Switch", {1, 1.2, 0});
  light.basic = true;
  light.initial_state = false;
  auto desk = object("Obj_2", "Desk", {3, 0, 4});
  desk.stationary = true;
  s.objects = {light, desk};
  return s;
}

Scene syntax_example_scene()
{
  Scene s;
  s.agents.push_back({"Guy", "A_1", {}, {0, 0, 0}});
  auto chair = object("Obj_1", "Chair", {2, 0, 0});
  chair.stationary = true;
  auto light = object("Obj_2", "Light Switch", {2, 1, 3});
  light.basic = true;
  s.objects = {chair, light};
  return s;
}

Scene random_scene(Gen& g, std::size_t agents, std::size_t objects)
{
  Scene s;
  for (std::size_t i = 0; i < agents; ++i)
    s.agents.push_back({"Agent " + std::to_string(i + 1), "A_" + std::to_string(i + 1),
                        {"tag" + std::to_string(g.below(5))},
                        {g.hundredths(8), g.hundredths(1), g.hundredths(8)}});
  for (std::size_t i = 0; i < objects; ++i) {
    auto o = object("Obj_" + std::to_string(i + 1), "Thing " + std::to_string(i + 1),
                    {g.hundredths(8), g.hundredths(1), g.hundredths(8)});
    switch (g.below(5)) {
      case 0: o.grabbable = true; break;
      case 1: o.stationary = true; o.stationary_compatible = g.coin(); break;
      case 2: o.basic = true; o.initial_state = g.coin(); break;
      case 3: break;
      default: o.stationary = true; break;
    }
    s.objects.push_back(o);
  }
  return s;
}

ActionPlan random_plan(Gen& g, const Scene& scene, std::size_t max_queue)
{
  ActionPlan plan;
  std::set<std::string> grabbed;
  for (const auto& agent : scene.agents) {
    if (g.below(6) == 0)
      continue;
    AgentQueue entry{agent.id, {}};
    const std::size_t n = 1 + g.below(max_queue);
    for (std::size_t k = 0; k < n; ++k) {
      const ObjectSpec& o = scene.objects[g.below(scene.objects.size())];
      if (grabbed.count(o.id))
        continue;
      Destination d;
      d.object_id = o.id;
      d.speed = g.eighths(1, 4);
      d.interact = !o.walk_only() && g.below(5) != 0;
      d.duration = g.eighths(2, 16);
      if (o.grabbable) {
        // Any reference to a grabbable object consumes it.
        d.grab = d.interact;
        grabbed.insert(o.id);
      } else if (o.stationary) {
        d.stationary = d.interact;
      } else if (o.basic) {
        d.basic = true;
        if (d.interact)
          d.duration = g.eighths(3, 5);
      }
      entry.queue.push_back(d);
    }
    if (!entry.queue.empty())
      plan.entries.push_back(std::move(entry));
  }
  if (plan.entries.empty()) {
    Destination d;
    d.object_id = scene.objects.front().id;
    d.duration = 2;
    plan.entries.push_back({scene.agents.front().id, {d}});
  }
  return plan;
}

ActionPlan random_syntactic_plan(Gen& g)
{
  ActionPlan plan;
  const std::size_t agents = 1 + g.below(5);
  std::set<std::size_t> used;
  while (plan.entries.size() < agents) {
    const std::size_t id = 1 + g.below(40);
    if (!used.insert(id).second)
      continue;
    AgentQueue entry{"A_" + std::to_string(id), {}};
    const std::size_t n = 1 + g.below(5);
    for (std::size_t k = 0; k < n; ++k) {
      Destination d;
      d.object_id = "Obj_" + std::to_string(1 + g.below(1000));
      const int kind = g.between(0, 3);
      d.grab = kind == 1;
      d.stationary = kind == 2;
      d.basic = kind == 3;
      d.interact = d.grab || d.stationary || g.coin();
      // Mix integers, dyadic fractions and arbitrary decimals.
      switch (g.below(3)) {
        case 0: d.duration = g.between(1, 40); break;
        case 1: d.duration = g.eighths(1, 20); break;
        default: d.duration = g.between(1, 99999) / 1000.0; break;
      }
      d.speed = g.below(2) ? g.eighths(1, 6) : g.between(1, 9999) / 100.0;
      entry.queue.push_back(d);
    }
    plan.entries.push_back(std::move(entry));
  }
  return plan;
}

}  // namespace sdtest
