#include <catch_amalgamated.hpp>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "fixtures.hpp"
#include "scenedirector/cli.hpp"

using namespace scenedirector;
namespace fs = std::filesystem;

namespace {

struct Outcome {
  int code;
  std::string out;
  std::string err;
};

Outcome invoke(std::vector<std::string> args)
{
  args.insert(args.begin(), "scenedirector");
  std::vector<const char*> argv;
  for (const auto& a : args)
    argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = cli::run(int(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

fs::path scratch(const std::string& name)
{
  auto dir = fs::temp_directory_path() / "sd_cli_test" / name;
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

fs::path write(const fs::path& path, const std::string& content)
{
  std::ofstream(path, std::ios::binary) << content;
  return path;
}

std::string read(const fs::path& path)
{
  std::ifstream in(path, std::ios::binary);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

fs::path golden_file(const fs::path& dir)
{
  return write(dir / "scene.json", scene_to_json(sdtest::golden_scene()).dump(2));
}

}  // namespace

TEST_CASE("usage errors and help", "[cli]")
{
  CHECK(invoke({}).code == cli::usage);
  CHECK(invoke({"frobnicate"}).code == cli::usage);
  const auto help = invoke({"--help"});
  CHECK(help.code == cli::ok);
  CHECK(help.out.find("simulate") != std::string::npos);
  CHECK(invoke({"bench", "--trials", "0"}).code == cli::usage);
  CHECK(invoke({"run", "--scene", "x.json", "--class", "1O-1A", "--out", "o"}).code == cli::usage);
}

TEST_CASE("validate and serialize", "[cli]")
{
  const auto dir = scratch("validate");
  const auto scene = golden_file(dir);
  const auto ok = invoke({"validate", "--scene", scene.string()});
  CHECK(ok.code == cli::ok);
  CHECK(ok.out.find("1 agents, 2 objects") != std::string::npos);

  auto bad = sdtest::golden_scene();
  bad.objects[1].id = "Obj_5";
  const auto dup = write(dir / "dup.json", scene_to_json(bad).dump());
  const auto r = invoke({"validate", "--scene", dup.string()});
  CHECK(r.code == cli::scene_error);
  CHECK(r.out.find("Obj_5") != std::string::npos);

  CHECK(invoke({"validate", "--scene", (dir / "missing.json").string()}).code == cli::io_error);
  CHECK(invoke({"validate", "--scene", write(dir / "broken.json", "{").string()}).code ==
        cli::scene_error);

  const auto ser = invoke({"serialize", "--scene", scene.string()});
  CHECK(ser.code == cli::ok);
  std::string expected;
  for (const auto& l : sdtest::golden_lines())
    expected += l + "\n";
  CHECK(ser.out == expected);

  CHECK(invoke({"serialize", "--class", "5O-2A", "--out", (dir / "d.txt").string()}).code == cli::ok);
  CHECK(read(dir / "d.txt").rfind("Scene Description:\n", 0) == 0);
}

TEST_CASE("parse reports validity and exit status", "[cli]")
{
  const auto dir = scratch("parse");
  const auto scene = golden_file(dir);
  const auto good = write(dir / "good.txt", "```\nA_1 {Obj_5 (T, 4, 1, F, T, F)}\n```\n");
  const auto r = invoke({"parse", "--plan", good.string(), "--scene", scene.string()});
  CHECK(r.code == cli::ok);
  const auto doc = nlohmann::json::parse(r.out);
  CHECK(doc["is_structurally_valid"] == true);
  CHECK(doc["canonical"] == "A_1 {Obj_5 (T, 4, 1, F, T, F)}");

  const auto slow = write(dir / "slow.txt", "A_1 {Obj_5 (T, 1, 1, F, T, F)}");
  CHECK(invoke({"parse", "--plan", slow.string(), "--scene", scene.string()}).code == cli::ok);
  CHECK(invoke({"parse", "--plan", slow.string(), "--scene", scene.string(), "--strict"}).code ==
        cli::plan_invalid);

  const auto junk = write(dir / "junk.txt", "Sure! Here is your plan.");
  const auto j = invoke({"parse", "--plan", junk.string(), "--scene", scene.string()});
  CHECK(j.code == cli::plan_parse_error);
  CHECK(nlohmann::json::parse(j.out)["parse_ok"] == false);
}

TEST_CASE("simulate writes trace and timeline", "[cli]")
{
  const auto dir = scratch("simulate");
  const auto scene = golden_file(dir);
  const auto plan = write(dir / "plan.txt", "A_1 {Obj_5 (T, 4, 1, F, T, F), Obj_1 (T, 3, 2, F, T, F)}");
  const auto r = invoke({"simulate", "--scene", scene.string(), "--plan", plan.string(), "--timeline",
                      "text", "--trace", (dir / "t.jsonl").string()});
  CHECK(r.code == cli::ok);
  CHECK(r.out.rfind("timeline: 1 lanes", 0) == 0);
  CHECK(read(dir / "t.jsonl").find("\"kind\":\"idle\"") != std::string::npos);

  const auto grab_twice = write(dir / "reuse.txt", "A_1 {Obj_9 (F, 2, 1, F, F, F)}");
  CHECK(invoke({"simulate", "--scene", scene.string(), "--plan", grab_twice.string()}).code ==
        cli::plan_invalid);
}

TEST_CASE("simulate conflict policy", "[cli]")
{
  const auto dir = scratch("conflict");
  Scene s = sdtest::golden_scene();
  s.agents.push_back({"Maya", "A_2", {}, s.agents[0].position});
  const auto scene = write(dir / "scene.json", scene_to_json(s).dump());
  const auto plan = write(dir / "plan.txt",
                          "A_1 {Obj_5 (T, 8, 1, F, T, F)}, A_2 {Obj_5 (T, 4, 1, F, T, F)}");
  CHECK(invoke({"simulate", "--scene", scene.string(), "--plan", plan.string()}).code == cli::ok);
  const auto failed =
      invoke({"simulate", "--scene", scene.string(), "--plan", plan.string(), "--policy", "fail"});
  CHECK(failed.code == cli::simulation_error);
  CHECK(failed.err.find("Obj_5") != std::string::npos);
}

TEST_CASE("run pipeline with the mock provider", "[cli][run]")
{
  const auto dir = scratch("run");
  const auto r = invoke({"run", "--class", "5O-2A", "--provider", "mock", "--seed", "4", "--out",
                      dir.string()});
  INFO(r.err);
  REQUIRE(r.code == cli::ok);
  for (const char* f : {"scene.json", "scene_description.txt", "reply.txt", "validity.json",
                        "trace.jsonl", "timeline.svg"})
    CHECK(fs::exists(dir / f));
  CHECK(nlohmann::json::parse(read(dir / "validity.json"))["is_structurally_valid"] == true);

  const auto scene = golden_file(scratch("run_scene"));
  const auto again = scratch("run2");
  CHECK(invoke({"run", "--scene", scene.string(), "--out", again.string(), "--timeline", "text"}).code ==
        cli::ok);
  CHECK(fs::exists(again / "timeline.txt"));
}

TEST_CASE("run without a credential", "[cli][run]")
{
  ::unsetenv("OPENAI_API_KEY");
  const auto dir = scratch("nokey");
  const auto r = invoke({"run", "--class", "1O-1A", "--provider", "chatgpt", "--out", dir.string()});
  CHECK(r.code == cli::config_error);
  CHECK(r.err.find("OPENAI_API_KEY") != std::string::npos);
}

TEST_CASE("bench and estimate", "[cli]")
{
  const auto dir = scratch("bench");
  const auto r = invoke({"bench", "--provider", "mock", "--trials", "2", "--classes", "1O-1A,5O-5A",
                      "--out", dir.string(), "--reference"});
  CHECK(r.code == cli::ok);
  CHECK(fs::exists(dir / "records.csv"));
  CHECK(read(dir / "report.md").find("| 5O-5A |") != std::string::npos);
  CHECK(r.out.find("Reference latencies") != std::string::npos);

  const auto e = invoke({"estimate", "--m", "10", "--v", "4", "--d", "8", "--n", "5"});
  CHECK(e.code == cli::ok);
  CHECK(e.out == "3355443200000\n");
  CHECK(invoke({"estimate", "--m", "0", "--v", "1", "--d", "1", "--n", "1"}).code == cli::usage);
}

TEST_CASE("providers config via environment", "[cli]")
{
  const auto dir = scratch("config");
  const auto cfg = write(dir / "providers.toml", "[mock]\nmock_latency = \"slow\"\n");
  ::setenv("SCENE_DIRECTOR_CONFIG", cfg.string().c_str(), 1);
  const auto r = invoke({"generate", "--class", "1O-1A"});
  ::unsetenv("SCENE_DIRECTOR_CONFIG");
  CHECK(r.code == cli::config_error);
  CHECK(invoke({"generate", "--class", "1O-1A"}).code == cli::ok);
}

TEST_CASE("documented example scene", "[cli]")
{
  const fs::path example = fs::path(SD_SOURCE_DIR) / "docs" / "scene-example.json";
  CHECK(invoke({"validate", "--scene", example.string()}).code == cli::ok);
  const auto described = invoke({"serialize", "--scene", example.string()});
  REQUIRE(described.code == cli::ok);
  std::string expected;
  for (const auto& line : sdtest::golden_lines())
    expected += line + "\n";
  CHECK(described.out == expected);
}
