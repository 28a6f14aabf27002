#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "scenedirector/plan.hpp"
#include "scenedirector/scene.hpp"

namespace sdtest {

using namespace scenedirector;

/// The expected two-object example scene with its single actor.
Scene golden_scene();

/// The 33 expected description lines, without line terminators.
const std::vector<std::string>& golden_lines();

/// Light switch as Obj_1 and a desk as Obj_2, matching the prompt example.
Scene switch_and_desk_scene();

inline constexpr const char* kPromptExamplePlan =
    "A_1 {Obj_1 (T, 2, 1, F, F, T), Obj_2 (T, 5, 1, F, T, F)}";
inline constexpr const char* kSyntaxExamplePlan =
    "A_1{Obj_1(T, 2, 1.5, F, T, F), Obj_2(F, 1, 1.5, F, F, T)}";

/// Stationary Obj_1, basic Obj_2: the objects the syntax example visits.
Scene syntax_example_scene();

class Gen {
public:
  explicit Gen(std::uint64_t seed) : rng_(seed) {}
  std::uint64_t raw() { return rng_(); }
  std::size_t below(std::size_t n) { return static_cast<std::size_t>(rng_() % n); }
  int between(int lo, int hi) { return lo + static_cast<int>(below(std::size_t(hi - lo + 1))); }
  bool coin() { return rng_() & 1u; }
  /// Multiple of 0.01 in [-limit, limit].
  double hundredths(int limit) { return between(-limit * 100, limit * 100) / 100.0; }
  /// Multiple of 1/8 in [lo, hi]; dyadic so every decimal round-trips.
  double eighths(int lo, int hi) { return between(lo * 8, hi * 8) / 8.0; }

private:
  std::mt19937_64 rng_;
};

/// Valid scene with the given counts; object capabilities drawn uniformly.
Scene random_scene(Gen& g, std::size_t agents, std::size_t objects);

/// Structurally valid plan for `scene`: capability-matched flags, ranges
/// respected, grabbed objects referenced once. Occupancy is not controlled.
ActionPlan random_plan(Gen& g, const Scene& scene, std::size_t max_queue = 4);

/// Any plan satisfying the parser's type invariants, ids unconstrained.
ActionPlan random_syntactic_plan(Gen& g);

}  // namespace sdtest
