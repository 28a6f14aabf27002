#include <catch_amalgamated.hpp>

#include <cmath>

#include "fixtures.hpp"
#include "scenedirector/simulator.hpp"
#include "trace_checks.hpp"

using namespace scenedirector;
using sdtest::Gen;

namespace {

ObjectSpec make(std::string id, Vec3 pos)
{
  ObjectSpec o;
  o.id = id;
  o.name = id;
  o.position = pos;
  return o;
}

std::vector<SimEvent> of_kind(const SimTrace& t, EventKind k)
{
  std::vector<SimEvent> out;
  for (const auto& e : t.events)
    if (e.kind == k)
      out.push_back(e);
  return out;
}

/// Two agents, a chair both want, a book, a compatible couch and a light.
Scene room()
{
  Scene s;
  s.agents.push_back({"Guy", "A_1", {}, {0, 0, 0}});
  s.agents.push_back({"Maya", "A_2", {}, {0, 0, 6}});
  auto chair = make("Obj_1", {3, 0, 0});
  chair.stationary = true;
  auto book = make("Obj_2", {0, 0, 4});
  book.grabbable = true;
  auto couch = make("Obj_3", {0, 0, 8});
  couch.stationary = true;
  couch.stationary_compatible = true;
  auto light = make("Obj_4", {3, 1, 4});
  light.basic = true;
  auto plant = make("Obj_5", {6, 0, 0});
  s.objects = {chair, book, couch, light, plant};
  return s;
}

}  // namespace

TEST_CASE("arrival and interaction times", "[simulator]")
{
  const Scene s = room();
  const auto trace = simulate(s, parse_plan("A_1 {Obj_1 (T, 4, 1.5, F, T, F), Obj_5 (F, 2, 3, F, F, F)}"));
  const auto arrivals = of_kind(trace, EventKind::arrive);
  REQUIRE(arrivals.size() == 2);
  CHECK(arrivals[0].time == Catch::Approx(2.0).margin(1e-12));
  CHECK(arrivals[1].time == Catch::Approx(2.0 + 4.0 + 1.0).margin(1e-12));
  CHECK(arrivals[1].detail == "walk");
  const auto idle = of_kind(trace, EventKind::idle);
  REQUIRE(idle.size() == 2);  // A_2 has no destinations
  CHECK(idle[0].agent_id == "A_2");
  CHECK(idle[0].time == 0.0);
  CHECK(idle[1].time == Catch::Approx(9.0));
  CHECK(trace.final_states[0].position == Vec2{6, 0});
  CHECK(trace.final_states[0].queue_cursor == 2);
}

TEST_CASE("walk-only visit does not occupy the object", "[simulator]")
{
  const Scene s = room();
  const auto trace = simulate(
      s, parse_plan("A_1 {Obj_1 (F, 10, 1, F, F, F)}, A_2 {Obj_1 (T, 2, 1, F, T, F)}"),
      ConflictPolicy::fail);
  CHECK(trace.conflicts.empty());
  CHECK(of_kind(trace, EventKind::interact_start).size() == 1);
}

TEST_CASE("basic interaction toggles once per event", "[simulator]")
{
  const Scene s = room();
  const auto once = simulate(s, parse_plan("A_1 {Obj_4 (T, 3, 1, F, F, T)}"));
  CHECK(once.object_states.at("Obj_4") == true);
  const auto toggles = of_kind(once, EventKind::toggle);
  REQUIRE(toggles.size() == 1);
  CHECK(toggles[0].detail == "off -> on");
  CHECK(toggles[0].time == Catch::Approx(5.0));

  const auto twice =
      simulate(s, parse_plan("A_1 {Obj_4 (T, 3, 1, F, F, T), Obj_5 (F, 2, 1, F, F, F), "
                             "Obj_4 (T, 3, 1, F, F, T)}"));
  CHECK(twice.object_states.at("Obj_4") == false);

  const auto visit = simulate(s, parse_plan("A_1 {Obj_4 (F, 3, 1, F, F, T)}"));
  CHECK(visit.object_states.at("Obj_4") == false);
  CHECK(of_kind(visit, EventKind::toggle).empty());
}

TEST_CASE("grab then compatible hold layers the channels", "[simulator][layering]")
{
  const Scene s = room();
  const auto trace = simulate(s, parse_plan("A_2 {Obj_2 (T, 2, 1, T, F, F), Obj_3 (T, 5, 1, F, T, F)}"));
  const auto attach = of_kind(trace, EventKind::attach);
  const auto drop = of_kind(trace, EventKind::drop_destroy);
  REQUIRE(attach.size() == 1);
  REQUIRE(drop.size() == 1);
  SimEvent hold_start, hold_end;
  for (const auto& e : trace.events) {
    if (e.detail == "stationary" && e.kind == EventKind::interact_start)
      hold_start = e;
    if (e.detail == "stationary" && e.kind == EventKind::interact_end)
      hold_end = e;
  }
  // carry [2, 13], hold [8, 13]
  CHECK(attach[0].time == Catch::Approx(2.0));
  CHECK(hold_start.time == Catch::Approx(8.0));
  CHECK(drop[0].time == Catch::Approx(13.0));
  CHECK(hold_end.time == Catch::Approx(13.0));
  CHECK(std::max(attach[0].time, hold_start.time) < std::min(drop[0].time, hold_end.time));
  CHECK(trace.destroyed_objects == std::set<std::string>{"Obj_2"});
}

TEST_CASE("incompatible hold drops the carry with a warning", "[simulator]")
{
  const Scene s = room();
  const auto trace = simulate(s, parse_plan("A_2 {Obj_2 (T, 2, 1, T, F, F), Obj_1 (T, 5, 1, F, T, F)}"));
  const auto drop = of_kind(trace, EventKind::drop_destroy);
  REQUIRE(drop.size() == 1);
  CHECK(drop[0].detail.rfind("warning:", 0) == 0);
  const auto starts = of_kind(trace, EventKind::interact_start);
  CHECK(drop[0].time == starts.back().time);
}

TEST_CASE("carry is dropped at queue end", "[simulator]")
{
  const Scene s = room();
  const auto trace = simulate(s, parse_plan("A_2 {Obj_2 (T, 2, 1, T, F, F)}"));
  const auto drop = of_kind(trace, EventKind::drop_destroy);
  REQUIRE(drop.size() == 1);
  CHECK(drop[0].time == Catch::Approx(4.0));
  CHECK(trace.final_states[1].carried_object == std::nullopt);
}

TEST_CASE("grabbed objects are unavailable afterwards", "[simulator]")
{
  const Scene s = room();
  const auto plan = parse_plan("A_2 {Obj_2 (T, 2, 1, T, F, F)}, A_1 {Obj_5 (F, 2, 1, F, F, F), Obj_2 (F, 2, 1, F, F, F)}");
  try {
    simulate(s, plan);
    FAIL("reused a grabbed object");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::unavailable_object);
  }
  const auto predicted = check_feasibility(s, plan);
  REQUIRE(predicted.size() == 1);
  CHECK(predicted[0].kind == PredictionKind::grabbed_reuse);
}

TEST_CASE("occupancy conflict under both policies", "[simulator][conflict]")
{
  Scene s = room();
  s.agents[1].position = {3, 0, 3};
  // A_1 reaches the chair at 3 and holds it to 9; A_2 arrives at 3 too.
  const auto plan = parse_plan("A_1 {Obj_1 (T, 6, 1, F, T, F)}, A_2 {Obj_1 (T, 4, 1, F, T, F)}");

  const auto predicted = check_feasibility(s, plan);
  REQUIRE(predicted.size() == 1);
  CHECK(predicted[0].overlap == Interval{3, 7});

  try {
    simulate(s, plan, ConflictPolicy::fail);
    FAIL("conflict not reported");
  } catch (const ConflictError& e) {
    CHECK(e.kind() == ErrorKind::conflict);
    CHECK(e.record().object_id == "Obj_1");
    CHECK(e.record().agents == std::vector<std::string>{"A_1", "A_2"});
    CHECK(e.record().overlap == Interval{3, 7});
  }

  const auto trace = simulate(s, plan, ConflictPolicy::wait);
  REQUIRE(trace.conflicts.size() == 1);
  CHECK(trace.conflicts[0].overlap == Interval{3, 9});
  const auto starts = of_kind(trace, EventKind::interact_start);
  REQUIRE(starts.size() == 2);
  CHECK(starts[1].agent_id == "A_2");
  CHECK(starts[1].time == 9.0);
  CHECK(sdtest::occupancy_problem(trace).empty());
}

TEST_CASE("back-to-back use at the same instant is not a conflict", "[simulator][conflict]")
{
  Scene s;
  s.agents.push_back({"a", "A_1", {}, {0, 0, 0}});
  s.agents.push_back({"b", "A_2", {}, {0, 0, 0}});
  auto chair = make("Obj_1", {2, 0, 0});
  chair.stationary = true;
  s.objects = {chair};
  // A_1 holds [2, 4); A_2 arrives exactly at 4.
  const auto plan = parse_plan("A_1 {Obj_1 (T, 2, 1, F, T, F)}, A_2 {Obj_1 (T, 2, 0.5, F, T, F)}");
  CHECK(check_feasibility(s, plan).empty());
  const auto trace = simulate(s, plan, ConflictPolicy::fail);
  CHECK(trace.conflicts.empty());
}

TEST_CASE("simulate rejects unresolved plans", "[simulator]")
{
  try {
    simulate(room(), parse_plan("A_1 {Obj_9 (F, 2, 1, F, F, F)}"));
    FAIL("accepted unknown object");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::precondition);
  }
}

TEST_CASE("single-agent arrival times are exact", "[simulator][property]")
{
  Gen g(404);
  for (int i = 0; i < 300; ++i) {
    const Scene s = sdtest::random_scene(g, 1, 1 + g.below(6));
    ActionPlan plan = sdtest::random_plan(g, s);
    const auto trace = simulate(s, plan);
    const auto arrivals = of_kind(trace, EventKind::arrive);
    const auto& q = plan.entries.front().queue;
    REQUIRE(arrivals.size() == q.size());
    double t = 0, x = s.agents[0].position.x, z = s.agents[0].position.z;
    for (std::size_t k = 0; k < q.size(); ++k) {
      const auto& o = *s.find_object(q[k].object_id);
      const double dx = o.position.x - x, dz = o.position.z - z;
      t += std::sqrt(dx * dx + dz * dz) / q[k].speed;
      CHECK(std::abs(arrivals[k].time - t) <= 1e-9);
      t += q[k].duration;
      x = o.position.x;
      z = o.position.z;
    }
  }
}

TEST_CASE("lifecycle and occupancy hold over random runs", "[simulator][property]")
{
  Gen g(505);
  int completed_fail = 0;
  for (int i = 0; i < 300; ++i) {
    const Scene s = sdtest::random_scene(g, 2 + g.below(4), 2 + g.below(5));
    const ActionPlan plan = sdtest::random_plan(g, s);
    const auto waited = simulate(s, plan, ConflictPolicy::wait);
    INFO(emit_plan(plan));
    CHECK(sdtest::grab_lifecycle_problem(waited).empty());
    CHECK(sdtest::occupancy_problem(waited).empty());
    CHECK(sdtest::finalization_problem(s, waited).empty());
    try {
      const auto failed = simulate(s, plan, ConflictPolicy::fail);
      ++completed_fail;
      CHECK(sdtest::grab_lifecycle_problem(failed).empty());
      CHECK(sdtest::occupancy_problem(failed).empty());
      CHECK(failed.conflicts.empty());
    } catch (const ConflictError&) {
      CHECK_FALSE(waited.conflicts.empty());
    }
  }
  CHECK(completed_fail > 0);
}

TEST_CASE("empty feasibility report means policy=fail completes", "[simulator][property]")
{
  Gen g(606);
  int feasible = 0;
  for (int i = 0; i < 500; ++i) {
    const Scene s = sdtest::random_scene(g, 1 + g.below(5), 1 + g.below(5));
    const ActionPlan plan = sdtest::random_plan(g, s);
    if (!check_feasibility(s, plan).empty())
      continue;
    ++feasible;
    INFO(emit_plan(plan));
    CHECK_NOTHROW(simulate(s, plan, ConflictPolicy::fail));
  }
  CHECK(feasible > 50);
}

TEST_CASE("trace JSONL", "[simulator]")
{
  const auto trace = simulate(room(), parse_plan("A_1 {Obj_4 (T, 3, 1, F, F, T)}"));
  const std::string jsonl = trace_to_jsonl(trace);
  std::size_t lines = 0;
  std::istringstream in(jsonl);
  for (std::string line; std::getline(in, line); ++lines) {
    const auto j = nlohmann::json::parse(line);
    CHECK(j.contains("time"));
    CHECK(j.contains("kind"));
  }
  CHECK(lines == trace.events.size());
}
