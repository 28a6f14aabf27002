#include "scenedirector/cli.hpp"

#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "scenedirector/benchmark.hpp"
#include "scenedirector/error.hpp"
#include "scenedirector/gateway.hpp"
#include "scenedirector/plan.hpp"
#include "scenedirector/scene.hpp"
#include "scenedirector/serializer.hpp"
#include "scenedirector/simulator.hpp"

namespace scenedirector::cli {

namespace fs = std::filesystem;

namespace {

int exit_code_for(ErrorKind kind)
{
  switch (kind) {
    case ErrorKind::io: return io_error;
    case ErrorKind::syntax:
    case ErrorKind::invariant:
    case ErrorKind::precondition: return scene_error;
    case ErrorKind::config:
    case ErrorKind::credential: return config_error;
    case ErrorKind::network:
    case ErrorKind::http:
    case ErrorKind::timeout: return provider_error;
    case ErrorKind::plan_parse: return plan_parse_error;
    case ErrorKind::conflict:
    case ErrorKind::unavailable_object: return simulation_error;
  }
  return internal;
}

std::string read_file(const fs::path& path, const char* what)
{
  std::ifstream in(path, std::ios::binary);
  if (!in)
    throw Error(ErrorKind::io, std::string("cannot open ") + what + " '" + path.string() + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void write_file(const fs::path& path, std::string_view content)
{
  std::ofstream out(path, std::ios::binary);
  if (!out)
    throw Error(ErrorKind::io, "cannot write '" + path.string() + "'");
  out << content;
  if (!out)
    throw Error(ErrorKind::io, "failed writing '" + path.string() + "'");
}

struct Common {
  std::string config_path;
  std::string debug_log;
};

struct SceneSource {
  std::string scene_path;
  std::string scenario;
  std::uint64_t layout_seed = 0;

  Scene load() const
  {
    if (!scenario.empty())
      return build_scenario(make_scenario_class(parse_scenario_label(scenario), layout_seed));
    return load_scene(scene_path);
  }
};

struct ProviderChoice {
  std::string name = "mock";
  std::optional<std::int64_t> seed;
  std::optional<double> mock_latency;
};

ProviderConfig resolve_provider(const Common& common, const ProviderChoice& choice)
{
  const Provider provider = parse_provider(choice.name);
  ProviderConfig config = default_config(provider);
  std::string path = common.config_path;
  if (path.empty())
    if (const char* env = std::getenv("SCENE_DIRECTOR_CONFIG"); env && *env)
      path = env;
  if (!path.empty())
    config = load_provider_configs(path).at(provider);
  if (provider == Provider::mock) {
    if (choice.seed)
      config.mock_seed = *choice.seed;
    if (choice.mock_latency)
      config.mock_latency = *choice.mock_latency;
  } else if (choice.seed || choice.mock_latency) {
    throw Error(ErrorKind::config, "--seed and --mock-latency apply to the mock provider only");
  }
  if (!common.debug_log.empty())
    config.debug_log = common.debug_log;
  check_config(config);
  return config;
}

void add_scene_source(CLI::App* cmd, SceneSource& src, bool allow_class)
{
  auto* scene = cmd->add_option("--scene", src.scene_path, "Scene JSON file");
  if (!allow_class) {
    scene->required();
    return;
  }
  auto* cls = cmd->add_option("--class", src.scenario,
                              "Built-in scenario class instead of a scene file")
                  ->check(CLI::IsMember({"1O-1A", "5O-1A", "5O-2A", "5O-5A", "10O-5A"}));
  cmd->add_option("--layout-seed", src.layout_seed, "Layout seed for --class")->needs(cls);
  scene->excludes(cls);
  cls->excludes(scene);
}

void add_provider_options(CLI::App* cmd, ProviderChoice& choice)
{
  cmd->add_option("--provider", choice.name, "chatgpt | claude | gemini | grok | mock")
      ->check(CLI::IsMember({"chatgpt", "claude", "gemini", "grok", "mock"}))
      ->capture_default_str();
  cmd->add_option("--seed", choice.seed, "Mock planner seed");
  cmd->add_option("--mock-latency", choice.mock_latency, "Mock response delay in seconds")
      ->check(CLI::NonNegativeNumber);
}

// --- subcommands ----------------------------------------------------------

int cmd_validate(const SceneSource& src, std::ostream& out)
{
  // Read without invariant enforcement so every violation can be listed.
  const std::string text = read_file(src.scene_path, "scene file");
  Scene scene;
  try {
    scene = scene_from_json(nlohmann::json::parse(text));
  } catch (const nlohmann::json::parse_error&) {
    parse_scene(text);  // rethrows with line and column
    throw;
  }
  const auto violations = validate_scene(scene);
  for (const auto& v : violations)
    out << v << '\n';
  if (!violations.empty())
    return scene_error;
  out << "scene ok: " << scene.agents.size() << " agents, " << scene.objects.size()
      << " objects\n";
  return ok;
}

int cmd_serialize(const SceneSource& src, const std::string& out_path, std::ostream& out)
{
  const auto description = serialize_scene(src.load());
  if (out_path.empty())
    out << description.text;
  else
    write_file(out_path, description.text);
  return ok;
}

int cmd_generate(const Common& common, const SceneSource& src, const ProviderChoice& choice,
                 const std::string& out_path, std::ostream& out, std::ostream& err)
{
  const Scene scene = src.load();
  const auto config = resolve_provider(common, choice);
  const auto result = generate(config, scene);
  if (out_path.empty())
    out << result.raw_text << '\n';
  else
    write_file(out_path, result.raw_text);
  err << "provider " << to_string(result.provider) << " (" << result.model_name
      << ") latency " << format_number(result.latency) << " s\n";
  return ok;
}

nlohmann::json report_document(const ValidityReport& report, const std::optional<ActionPlan>& plan,
                               Strictness mode)
{
  auto doc = to_json(report);
  doc["mode"] = mode == Strictness::strict ? "strict" : "lenient";
  doc["canonical"] = plan ? nlohmann::json(emit_plan(*plan)) : nlohmann::json(nullptr);
  return doc;
}

int report_status(const ValidityReport& report)
{
  if (!report.parse_ok)
    return plan_parse_error;
  return report.is_structurally_valid ? ok : plan_invalid;
}

int cmd_parse(const SceneSource& src, const std::string& plan_path, bool strict,
              const std::string& out_path, std::ostream& out)
{
  const Scene scene = src.load();
  const auto cleaned = clean_reply(read_file(plan_path, "plan file"));
  const Strictness mode = strict ? Strictness::strict : Strictness::lenient;
  std::optional<ActionPlan> plan;
  const auto report = validate_plan_text(cleaned.text, scene, mode, &plan);
  const auto doc = report_document(report, plan, mode).dump(2) + "\n";
  if (out_path.empty())
    out << doc;
  else
    write_file(out_path, doc);
  return report_status(report);
}

struct SimulateOptions {
  std::string plan_path;
  std::string policy = "wait";
  std::string timeline;
  std::string trace_path;
  std::string timeline_path;
};

int cmd_simulate(const SceneSource& src, const SimulateOptions& opts, std::ostream& out,
                 std::ostream& err)
{
  const Scene scene = src.load();
  require_runnable(scene);
  const auto cleaned = clean_reply(read_file(opts.plan_path, "plan file"));
  std::optional<ActionPlan> plan;
  const auto report = validate_plan_text(cleaned.text, scene, Strictness::lenient, &plan);
  if (!report.is_structurally_valid) {
    for (const auto& v : report.violations)
      err << (v.severity == Severity::error ? "error" : "warning") << " [" << v.code << "] "
          << v.location << ": " << v.message << '\n';
    return report_status(report);
  }
  const auto trace = simulate(scene, *plan, parse_conflict_policy(opts.policy));
  const auto jsonl = trace_to_jsonl(trace);
  if (opts.trace_path.empty())
    out << jsonl;
  else
    write_file(opts.trace_path, jsonl);
  if (!opts.timeline.empty()) {
    const auto doc = render_timeline(trace, parse_timeline_format(opts.timeline));
    if (opts.timeline_path.empty())
      out << doc;
    else
      write_file(opts.timeline_path, doc);
  }
  return ok;
}

struct RunOptions {
  std::string out_dir;
  std::string policy = "wait";
  bool strict = false;
  std::string timeline = "svg";
};

int cmd_run(const Common& common, const SceneSource& src, const ProviderChoice& choice,
            const RunOptions& opts, std::ostream& out, std::ostream& err)
{
  const Scene scene = src.load();
  require_runnable(scene);
  const auto config = resolve_provider(common, choice);
  const fs::path dir = opts.out_dir;
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec)
    throw Error(ErrorKind::io, "cannot create output directory '" + dir.string() + "'");
  if (!src.scenario.empty())
    save_scene(scene, dir / "scene.json");

  write_file(dir / "scene_description.txt", serialize_scene(scene).text);

  const auto result = generate(config, scene);
  write_file(dir / "reply.txt", result.raw_text);
  const auto cleaned = clean_reply(result.raw_text);
  if (cleaned.stripped_fence)
    err << "note: stripped a Markdown code fence from the reply\n";

  const Strictness mode = opts.strict ? Strictness::strict : Strictness::lenient;
  std::optional<ActionPlan> plan;
  const auto report = validate_plan_text(cleaned.text, scene, mode, &plan);
  auto doc = report_document(report, plan, mode);
  doc["provider"] = to_string(result.provider);
  doc["model_name"] = result.model_name;
  doc["latency_s"] = result.latency;
  write_file(dir / "validity.json", doc.dump(2) + "\n");
  for (const auto& v : report.violations)
    err << (v.severity == Severity::error ? "error" : "warning") << " [" << v.code << "] "
        << v.location << ": " << v.message << '\n';
  if (const int status = report_status(report); status != ok)
    return status;

  const auto trace = simulate(scene, *plan, parse_conflict_policy(opts.policy));
  write_file(dir / "trace.jsonl", trace_to_jsonl(trace));
  const auto format = parse_timeline_format(opts.timeline);
  write_file(dir / (format == TimelineFormat::svg ? "timeline.svg" : "timeline.txt"),
             render_timeline(trace, format));

  out << "run ok: " << plan->entries.size() << " agents planned, " << trace.events.size()
      << " events, " << trace.conflicts.size() << " conflicts, latency "
      << format_number(result.latency) << " s -> " << dir.string() << '\n';
  return ok;
}

struct BenchOptions {
  std::vector<std::string> providers{"mock"};
  std::size_t trials = 5;
  std::string classes = "all";
  std::string out_dir;
  bool strict = false;
  bool reference = false;
  std::uint64_t layout_seed = 0;
};

int cmd_bench(const Common& common, const BenchOptions& opts, const ProviderChoice& mock_choice,
              std::ostream& out)
{
  std::vector<ProviderConfig> configs;
  for (const auto& name : opts.providers) {
    ProviderChoice choice = mock_choice;
    choice.name = name;
    if (name != "mock") {
      choice.seed.reset();
      choice.mock_latency.reset();
    }
    configs.push_back(resolve_provider(common, choice));
  }

  std::vector<ScenarioClass> classes;
  if (opts.classes == "all") {
    for (auto l : all_scenario_labels())
      classes.push_back(make_scenario_class(l, opts.layout_seed));
  } else {
    std::stringstream list(opts.classes);
    std::string token;
    while (std::getline(list, token, ','))
      classes.push_back(make_scenario_class(parse_scenario_label(token), opts.layout_seed));
  }

  const auto records = run_benchmark(configs, classes, opts.trials,
                                     opts.strict ? Strictness::strict : Strictness::lenient);
  const auto stats = summarize(records);
  const auto markdown = stats_to_markdown(stats, opts.reference);

  if (!opts.out_dir.empty()) {
    std::error_code ec;
    fs::create_directories(opts.out_dir, ec);
    if (ec)
      throw Error(ErrorKind::io, "cannot create output directory '" + opts.out_dir + "'");
    write_file(fs::path(opts.out_dir) / "records.csv", records_to_csv(records));
    write_file(fs::path(opts.out_dir) / "report.md", markdown);
  }
  out << markdown;
  std::size_t failed = 0;
  for (const auto& r : records)
    if (!r.retained)
      ++failed;
  out << "\n" << records.size() << " records, " << failed << " not retained\n";
  return ok;
}

int cmd_estimate(const ScenarioParams& params, std::ostream& out)
{
  out << estimate_scenarios(params) << '\n';
  return ok;
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err)
{
  CLI::App app{"Scene-aware LLM action planning: serialize scenes, request SceneDirector "
               "plans, validate and simulate them, and benchmark providers."};
  app.name("scenedirector");
  app.require_subcommand(1);

  Common common;
  app.add_option("--config", common.config_path,
                 "providers.toml path (default: $SCENE_DIRECTOR_CONFIG)");
  app.add_option("--debug-log", common.debug_log, "Append raw requests/responses as JSONL");

  std::function<int()> action;

  SceneSource validate_src;
  auto* validate = app.add_subcommand("validate", "Check a scene file against all invariants");
  add_scene_source(validate, validate_src, false);
  validate->callback([&] { action = [&] { return cmd_validate(validate_src, out); }; });

  SceneSource serialize_src;
  std::string serialize_out;
  auto* serialize = app.add_subcommand("serialize", "Print the plain-language scene description");
  add_scene_source(serialize, serialize_src, true);
  serialize->add_option("--out", serialize_out, "Write to file instead of stdout");
  serialize->callback([&] {
    action = [&] { return cmd_serialize(serialize_src, serialize_out, out); };
  });

  SceneSource generate_src;
  ProviderChoice generate_choice;
  std::string generate_out;
  auto* generate_cmd = app.add_subcommand("generate", "Request a SceneDirector plan for a scene");
  add_scene_source(generate_cmd, generate_src, true);
  add_provider_options(generate_cmd, generate_choice);
  generate_cmd->add_option("--out", generate_out, "Write the raw reply to a file");
  generate_cmd->callback([&] {
    action = [&] {
      return cmd_generate(common, generate_src, generate_choice, generate_out, out, err);
    };
  });

  SceneSource parse_src;
  std::string parse_plan_path, parse_out;
  bool parse_strict = false;
  auto* parse = app.add_subcommand("parse", "Parse and validate a SceneDirector plan");
  parse->add_option("--plan", parse_plan_path, "Plan text file")->required();
  add_scene_source(parse, parse_src, false);
  parse->add_flag("--strict", parse_strict, "Treat speed/duration range violations as errors");
  parse->add_option("--out", parse_out, "Write the JSON report to a file");
  parse->callback([&] {
    action = [&] { return cmd_parse(parse_src, parse_plan_path, parse_strict, parse_out, out); };
  });

  SceneSource simulate_src;
  SimulateOptions sim;
  auto* simulate_cmd = app.add_subcommand("simulate", "Execute a plan and emit the event trace");
  add_scene_source(simulate_cmd, simulate_src, false);
  simulate_cmd->add_option("--plan", sim.plan_path, "Plan text file")->required();
  simulate_cmd->add_option("--policy", sim.policy, "Occupancy conflict policy")
      ->check(CLI::IsMember({"wait", "fail"}))
      ->capture_default_str();
  simulate_cmd->add_option("--timeline", sim.timeline, "Also render a timeline")
      ->check(CLI::IsMember({"svg", "text"}));
  simulate_cmd->add_option("--trace", sim.trace_path, "Write trace JSONL here instead of stdout");
  simulate_cmd->add_option("--timeline-out", sim.timeline_path,
                           "Write the timeline here instead of stdout");
  simulate_cmd->callback([&] { action = [&] { return cmd_simulate(simulate_src, sim, out, err); }; });

  SceneSource run_src;
  ProviderChoice run_choice;
  RunOptions run_opts;
  auto* run_cmd = app.add_subcommand("run", "Full pipeline: serialize, generate, validate, simulate");
  add_scene_source(run_cmd, run_src, true);
  add_provider_options(run_cmd, run_choice);
  run_cmd->add_option("--out", run_opts.out_dir, "Artifact directory")->required();
  run_cmd->add_option("--policy", run_opts.policy, "Occupancy conflict policy")
      ->check(CLI::IsMember({"wait", "fail"}))
      ->capture_default_str();
  run_cmd->add_flag("--strict", run_opts.strict, "Strict range validation");
  run_cmd->add_option("--timeline", run_opts.timeline, "Timeline format")
      ->check(CLI::IsMember({"svg", "text"}))
      ->capture_default_str();
  run_cmd->callback([&] {
    action = [&] {
      if (run_src.scene_path.empty() && run_src.scenario.empty())
        throw CLI::RequiredError("--scene or --class");
      return cmd_run(common, run_src, run_choice, run_opts, out, err);
    };
  });

  BenchOptions bench_opts;
  ProviderChoice bench_choice;
  auto* bench = app.add_subcommand("bench", "Latency and validity sweep over scenario classes");
  bench->add_option("--provider", bench_opts.providers, "Providers to benchmark (repeatable)")
      ->check(CLI::IsMember({"chatgpt", "claude", "gemini", "grok", "mock"}))
      ->capture_default_str();
  bench->add_option("--trials", bench_opts.trials, "Trials per provider and class")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  bench->add_option("--classes", bench_opts.classes, "'all' or comma-separated labels")
      ->capture_default_str();
  bench->add_option("--out", bench_opts.out_dir, "Write records.csv and report.md here");
  bench->add_option("--layout-seed", bench_opts.layout_seed, "Scenario layout seed");
  bench->add_flag("--strict", bench_opts.strict, "Strict range validation");
  bench->add_flag("--reference", bench_opts.reference, "Append the bundled reference latencies");
  bench->add_option("--seed", bench_choice.seed, "Mock planner base seed");
  bench->add_option("--mock-latency", bench_choice.mock_latency, "Mock response delay in seconds")
      ->check(CLI::NonNegativeNumber);
  bench->callback([&] {
    action = [&] { return cmd_bench(common, bench_opts, bench_choice, out); };
  });

  ScenarioParams params;
  auto* estimate = app.add_subcommand("estimate", "Count possible scenarios: (m*v*d)^n");
  estimate->add_option("--m", params.objects, "Interactable objects")
      ->required()->check(CLI::PositiveNumber);
  estimate->add_option("--v", params.variants, "Variants per object")
      ->required()->check(CLI::PositiveNumber);
  estimate->add_option("--d", params.durations, "Duration variations")
      ->required()->check(CLI::PositiveNumber);
  estimate->add_option("--n", params.agents, "Agents")->required()->check(CLI::PositiveNumber);
  estimate->callback([&] { action = [&] { return cmd_estimate(params, out); }; });

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return ok;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return ok;
  } catch (const CLI::ParseError& e) {
    err << e.what() << "\nRun with --help for usage.\n";
    return usage;
  }

  try {
    return action ? action() : usage;
  } catch (const CLI::ParseError& e) {
    err << e.what() << '\n';
    return usage;
  } catch (const Error& e) {
    err << "error (" << to_string(e.kind()) << "): " << e.what() << '\n';
    return exit_code_for(e.kind());
  } catch (const std::exception& e) {
    err << "internal error: " << e.what() << '\n';
    return internal;
  }
}

}  // namespace scenedirector::cli
