#include "scenedirector/benchmark.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <map>
#include <random>

#include "scenedirector/error.hpp"
#include "scenedirector/serializer.hpp"

namespace scenedirector {

std::string_view to_string(ScenarioLabel label)
{
  switch (label) {
    case ScenarioLabel::o1_a1: return "1O-1A";
    case ScenarioLabel::o5_a1: return "5O-1A";
    case ScenarioLabel::o5_a2: return "5O-2A";
    case ScenarioLabel::o5_a5: return "5O-5A";
    case ScenarioLabel::o10_a5: return "10O-5A";
  }
  return "unknown";
}

const std::vector<ScenarioLabel>& all_scenario_labels()
{
  static const std::vector<ScenarioLabel> labels{ScenarioLabel::o1_a1, ScenarioLabel::o5_a1,
                                                 ScenarioLabel::o5_a2, ScenarioLabel::o5_a5,
                                                 ScenarioLabel::o10_a5};
  return labels;
}

ScenarioLabel parse_scenario_label(std::string_view token)
{
  for (auto l : all_scenario_labels())
    if (to_string(l) == token)
      return l;
  throw Error(ErrorKind::precondition, "unknown scenario class '" + std::string(token) +
                                           "' (expected 1O-1A|5O-1A|5O-2A|5O-5A|10O-5A)");
}

ScenarioClass make_scenario_class(ScenarioLabel label, std::uint64_t layout_seed)
{
  switch (label) {
    case ScenarioLabel::o1_a1: return {label, 1, 1, layout_seed};
    case ScenarioLabel::o5_a1: return {label, 5, 1, layout_seed};
    case ScenarioLabel::o5_a2: return {label, 5, 2, layout_seed};
    case ScenarioLabel::o5_a5: return {label, 5, 5, layout_seed};
    case ScenarioLabel::o10_a5: return {label, 10, 5, layout_seed};
  }
  throw Error(ErrorKind::precondition, "unknown scenario class");
}

namespace {

struct CatalogItem {
  const char* name;
  bool grabbable, stationary, stationary_compatible, basic;
  std::vector<std::string> tags;
};

const std::vector<CatalogItem>& catalog()
{
  static const std::vector<CatalogItem> items{
      {"Light Switch", false, false, false, true, {"light", "switch", "toggle"}},
      {"Chair", false, true, true, false, {"chair", "sit", "stay", "relax"}},
      {"Bed", false, true, false, false, {"bed", "sleep", "rest"}},
      {"Computer", false, true, false, false, {"work", "play games", "desktop", "office work"}},
      {"Couch", false, true, true, false, {"couch", "sit", "relax", "watch tv"}},
      {"Book", true, false, false, false, {"book", "read", "carry"}},
      {"Box", true, false, false, false, {"box", "carry", "move"}},
      {"Plant", false, false, false, false, {"plant", "decoration", "look"}},
  };
  return items;
}

struct Persona {
  const char* name;
  std::vector<std::string> tags;
};

const std::vector<Persona>& personas()
{
  static const std::vector<Persona> people{
      {"Guy", {"male", "college student", "casual", "claustrophobic"}},
      {"Maya", {"female", "nurse", "night shift", "tired"}},
      {"Omar", {"male", "programmer", "remote worker"}},
      {"Lena", {"female", "retired teacher", "bookworm"}},
      {"Theo", {"male", "teenager", "gamer", "restless"}},
  };
  return people;
}

// Uniform on [-range, range], snapped to hundredths so the description is lossless.
double coordinate(std::mt19937_64& engine, double range)
{
  const auto steps = static_cast<std::int64_t>(range * 100.0);
  const auto span = static_cast<std::uint64_t>(2 * steps + 1);
  return double(static_cast<std::int64_t>(engine() % span) - steps) / 100.0;
}

}  // namespace

Scene build_scenario(const ScenarioClass& scenario)
{
  const auto expected = make_scenario_class(scenario.label, scenario.layout_seed);
  if (scenario.object_count != expected.object_count ||
      scenario.agent_count != expected.agent_count)
    throw Error(ErrorKind::precondition, "scenario counts do not match label " +
                                             std::string(to_string(scenario.label)));

  std::mt19937_64 engine(scenario.layout_seed * 0x9e3779b97f4a7c15ull +
                         static_cast<std::uint64_t>(scenario.label) + 1);
  std::vector<std::size_t> order(catalog().size());
  for (std::size_t i = 0; i < order.size(); ++i)
    order[i] = i;
  for (std::size_t i = order.size(); i > 1; --i)
    std::swap(order[i - 1], order[engine() % i]);

  Scene scene;
  for (std::size_t i = 0; i < scenario.agent_count; ++i) {
    const auto& p = personas()[i % personas().size()];
    AgentSpec a;
    a.name = p.name;
    a.id = "A_" + std::to_string(i + 1);
    a.tags = p.tags;
    a.position = {coordinate(engine, 6.0), 0.0, coordinate(engine, 6.0)};
    scene.agents.push_back(std::move(a));
  }
  for (std::size_t i = 0; i < scenario.object_count; ++i) {
    const auto& item = catalog()[order[i % order.size()]];
    ObjectSpec o;
    o.id = "Obj_" + std::to_string(i + 1);
    o.name = item.name;
    o.grabbable = item.grabbable;
    o.stationary = item.stationary;
    o.stationary_compatible = item.stationary_compatible;
    o.basic = item.basic;
    o.tags = item.tags;
    o.position = {coordinate(engine, 6.0), double(engine() % 51) / 100.0, coordinate(engine, 6.0)};
    if (item.basic)
      o.initial_state = false;
    scene.objects.push_back(std::move(o));
  }
  return scene;
}

std::vector<BenchmarkRecord> run_benchmark(const std::vector<ProviderConfig>& providers,
                                           const std::vector<ScenarioClass>& classes,
                                           std::size_t trials, Strictness mode)
{
  if (trials < 1)
    throw Error(ErrorKind::precondition, "trials must be >= 1");
  if (providers.empty() || classes.empty())
    throw Error(ErrorKind::precondition, "benchmark needs at least one provider and one class");

  std::vector<BenchmarkRecord> records;
  for (const auto& cls : classes) {
    const Scene scene = build_scenario(cls);
    for (const auto& base : providers) {
      for (std::size_t trial = 0; trial < trials; ++trial) {
        ProviderConfig config = base;
        if (config.provider == Provider::mock)
          config.mock_seed = config.mock_seed.value_or(0) + static_cast<std::int64_t>(trial);

        BenchmarkRecord rec;
        rec.provider = config.provider;
        rec.scenario = cls.label;
        rec.trial = trial;
        const auto start = std::chrono::steady_clock::now();
        try {
          const auto result = generate(config, scene);
          rec.latency = result.latency;
          const auto report = validate_plan_text(clean_reply(result.raw_text).text, scene, mode);
          rec.validity.parse_ok = report.parse_ok;
          rec.validity.structurally_valid = report.is_structurally_valid;
          rec.validity.errors = report.error_count();
          rec.validity.warnings = report.warning_count();
          for (const auto& v : report.violations) {
            if (v.severity == Severity::error) {
              rec.validity.first_problem = v.code + ": " + v.message;
              break;
            }
          }
        } catch (const Error& e) {
          rec.latency =
              std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
          rec.validity.first_problem = std::string(to_string(e.kind())) + ": " + e.what();
        }
        rec.retained = rec.validity.structurally_valid;
        records.push_back(std::move(rec));
      }
    }
  }
  return records;
}

MeanSd mean_sd(std::vector<double> values)
{
  MeanSd out;
  if (values.empty())
    return out;
  std::sort(values.begin(), values.end());
  double sum = 0.0;
  for (double v : values)
    sum += v;
  out.mean = sum / double(values.size());
  if (values.size() < 2)
    return out;
  double squares = 0.0;
  for (double v : values)
    squares += (v - out.mean) * (v - out.mean);
  out.sd = std::sqrt(squares / double(values.size() - 1));
  return out;
}

std::vector<BenchmarkStats> summarize(const std::vector<BenchmarkRecord>& records)
{
  struct Cell {
    std::vector<double> retained;
    std::size_t total = 0;
  };
  std::map<std::pair<Provider, ScenarioLabel>, Cell> cells;
  for (const auto& r : records) {
    auto& cell = cells[{r.provider, r.scenario}];
    ++cell.total;
    if (r.retained)
      cell.retained.push_back(r.latency);
  }

  std::vector<BenchmarkStats> out;
  for (const auto& [key, cell] : cells) {
    BenchmarkStats s;
    s.provider = key.first;
    s.scenario = key.second;
    const auto m = mean_sd(cell.retained);
    s.mean = m.mean;
    s.sd = m.sd;
    s.trial_count = cell.retained.size();
    s.total_count = cell.total;
    s.validity_rate = cell.total ? double(cell.retained.size()) / double(cell.total) : 0.0;
    s.single_sample = cell.retained.size() == 1;
    out.push_back(s);
  }
  return out;
}

std::string records_to_csv(const std::vector<BenchmarkRecord>& records)
{
  std::string out = "provider,scenario,trial,latency_s,valid,retained\n";
  char buf[64];
  for (const auto& r : records) {
    std::snprintf(buf, sizeof buf, "%.6f", r.latency);
    out += std::string(to_string(r.provider)) + "," + std::string(to_string(r.scenario)) + "," +
           std::to_string(r.trial + 1) + "," + buf + "," +
           (r.validity.structurally_valid ? "true" : "false") + "," +
           (r.retained ? "true" : "false") + "\n";
  }
  return out;
}

const std::vector<ReferenceCell>& reference_latencies()
{
  using P = Provider;
  using S = ScenarioLabel;
  static const std::vector<ReferenceCell> cells{
      {P::chatgpt, S::o1_a1, 0.79, 0.13},   {P::claude, S::o1_a1, 3.27, 0.45},
      {P::gemini, S::o1_a1, 2.94, 0.71},    {P::grok, S::o1_a1, 4.38, 0.79},
      {P::chatgpt, S::o5_a1, 1.52, 0.22},   {P::claude, S::o5_a1, 4.49, 0.81},
      {P::gemini, S::o5_a1, 6.99, 1.94},    {P::grok, S::o5_a1, 28.38, 5.14},
      {P::chatgpt, S::o5_a2, 3.50, 1.38},   {P::claude, S::o5_a2, 4.63, 0.62},
      {P::gemini, S::o5_a2, 8.96, 4.69},    {P::grok, S::o5_a2, 20.56, 4.60},
      {P::chatgpt, S::o5_a5, 2.53, 0.36},   {P::claude, S::o5_a5, 5.36, 0.44},
      {P::gemini, S::o5_a5, 15.77, 2.94},   {P::grok, S::o5_a5, 58.22, 47.40},
      {P::chatgpt, S::o10_a5, 2.31, 0.36},  {P::claude, S::o10_a5, 5.83, 1.19},
      {P::gemini, S::o10_a5, 13.90, 3.57},  {P::grok, S::o10_a5, 40.60, 12.21},
  };
  return cells;
}

std::string reference_latencies_csv()
{
  std::string out = "provider,scenario,mean_s,sd_s\n";
  char buf[96];
  for (const auto& c : reference_latencies()) {
    std::snprintf(buf, sizeof buf, "%.2f,%.2f", c.mean, c.sd);
    out += std::string(to_string(c.provider)) + "," + std::string(to_string(c.scenario)) + "," +
           buf + "\n";
  }
  return out;
}

namespace {

template <class Lookup>
std::string mean_sd_table(const std::vector<Provider>& providers,
                          const std::vector<ScenarioLabel>& scenarios, Lookup lookup)
{
  std::string out = "| Scenario |";
  for (auto p : providers)
    out += " " + std::string(display_name(p)) + " M | " + std::string(display_name(p)) + " SD |";
  out += "\n|---|";
  for (std::size_t i = 0; i < providers.size(); ++i)
    out += "---:|---:|";
  out += "\n";
  for (auto s : scenarios) {
    out += "| " + std::string(to_string(s)) + " |";
    for (auto p : providers)
      out += " " + lookup(p, s) + " |";
    out += "\n";
  }
  return out;
}

}  // namespace

std::string stats_to_markdown(const std::vector<BenchmarkStats>& stats, bool include_reference)
{
  std::vector<Provider> providers;
  std::vector<ScenarioLabel> scenarios;
  for (auto p : all_providers())
    if (std::any_of(stats.begin(), stats.end(), [&](const auto& s) { return s.provider == p; }))
      providers.push_back(p);
  for (auto l : all_scenario_labels())
    if (std::any_of(stats.begin(), stats.end(), [&](const auto& s) { return s.scenario == l; }))
      scenarios.push_back(l);

  auto find = [&](Provider p, ScenarioLabel l) -> const BenchmarkStats* {
    auto it = std::find_if(stats.begin(), stats.end(),
                           [&](const auto& s) { return s.provider == p && s.scenario == l; });
    return it == stats.end() ? nullptr : &*it;
  };

  std::string out = "## Processing and response time (seconds)\n\n";
  out += mean_sd_table(providers, scenarios, [&](Provider p, ScenarioLabel l) {
    const auto* s = find(p, l);
    if (!s || s->trial_count == 0)
      return std::string("- | -");
    return format_coordinate(s->mean) + " | " + format_coordinate(s->sd) + (s->single_sample ? "*" : "");
  });

  out += "\n## Structural validity (retained / total)\n\n| Scenario |";
  for (auto p : providers)
    out += " " + std::string(display_name(p)) + " |";
  out += "\n|---|";
  for (std::size_t i = 0; i < providers.size(); ++i)
    out += "---:|";
  out += "\n";
  char buf[64];
  for (auto l : scenarios) {
    out += "| " + std::string(to_string(l)) + " |";
    for (auto p : providers) {
      const auto* s = find(p, l);
      if (!s) {
        out += " - |";
        continue;
      }
      std::snprintf(buf, sizeof buf, " %zu/%zu (%.2f) |", s->trial_count, s->total_count,
                    s->validity_rate);
      out += buf;
    }
    out += "\n";
  }

  out += "\nM is the mean over retained trials; SD is the sample standard deviation "
         "(n - 1 denominator). * marks a single retained trial, reported with SD 0.\n";

  if (include_reference) {
    out += "\n## Reference latencies (hosted APIs, not reproduced locally)\n\n";
    const std::vector<Provider> hosted{Provider::chatgpt, Provider::claude, Provider::gemini,
                                       Provider::grok};
    out += mean_sd_table(hosted, all_scenario_labels(), [](Provider p, ScenarioLabel l) {
      for (const auto& c : reference_latencies())
        if (c.provider == p && c.scenario == l)
          return format_coordinate(c.mean) + " | " + format_coordinate(c.sd);
      return std::string("- | -");
    });
  }
  return out;
}

}  // namespace scenedirector
