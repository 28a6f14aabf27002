#include "scenedirector/scene.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include "scenedirector/error.hpp"

namespace scenedirector {

std::string_view to_string(ErrorKind kind)
{
  switch (kind) {
    case ErrorKind::io: return "io";
    case ErrorKind::syntax: return "syntax";
    case ErrorKind::invariant: return "invariant";
    case ErrorKind::config: return "config";
    case ErrorKind::credential: return "credential";
    case ErrorKind::network: return "network";
    case ErrorKind::http: return "http";
    case ErrorKind::timeout: return "timeout";
    case ErrorKind::plan_parse: return "plan-parse";
    case ErrorKind::precondition: return "precondition";
    case ErrorKind::conflict: return "conflict";
    case ErrorKind::unavailable_object: return "unavailable-object";
  }
  return "unknown";
}

namespace {

bool has_positive_suffix(std::string_view id, std::string_view prefix)
{
  if (id.size() <= prefix.size() || id.substr(0, prefix.size()) != prefix)
    return false;
  const auto digits = id.substr(prefix.size());
  if (digits.front() == '0')
    return false;
  return std::all_of(digits.begin(), digits.end(),
                     [](unsigned char c) { return std::isdigit(c) != 0; });
}

bool is_trimmed_nonempty(const std::string& s)
{
  if (s.empty())
    return false;
  const auto space = [](unsigned char c) { return std::isspace(c) != 0; };
  return !space(s.front()) && !space(s.back());
}

bool finite(const Vec3& p)
{
  return std::isfinite(p.x) && std::isfinite(p.y) && std::isfinite(p.z);
}

void check_tags(const std::vector<std::string>& tags, const std::string& owner,
                std::vector<std::string>& out)
{
  for (std::size_t i = 0; i < tags.size(); ++i) {
    if (!is_trimmed_nonempty(tags[i])) {
      out.push_back(owner + ": tag #" + std::to_string(i + 1) +
                    " must be non-empty trimmed text");
    }
  }
}

[[noreturn]] void schema_error(const std::string& where, const std::string& what)
{
  throw Error(ErrorKind::syntax, "scene schema: " + where + ": " + what);
}

const nlohmann::json& field(const nlohmann::json& obj, const char* key,
                            const std::string& where)
{
  auto it = obj.find(key);
  if (it == obj.end())
    schema_error(where, std::string("missing field '") + key + "'");
  return *it;
}

std::string read_string(const nlohmann::json& obj, const char* key,
                        const std::string& where)
{
  const auto& v = field(obj, key, where);
  if (!v.is_string())
    schema_error(where, std::string("field '") + key + "' must be a string");
  return v.get<std::string>();
}

bool read_flag(const nlohmann::json& obj, const char* key,
               const std::string& where)
{
  auto it = obj.find(key);
  if (it == obj.end())
    return false;
  if (!it->is_boolean())
    schema_error(where, std::string("field '") + key + "' must be a boolean");
  return it->get<bool>();
}

std::vector<std::string> read_tags(const nlohmann::json& obj,
                                   const std::string& where)
{
  std::vector<std::string> tags;
  auto it = obj.find("tags");
  if (it == obj.end())
    return tags;
  if (!it->is_array())
    schema_error(where, "field 'tags' must be an array of strings");
  for (const auto& t : *it) {
    if (!t.is_string())
      schema_error(where, "field 'tags' must be an array of strings");
    tags.push_back(t.get<std::string>());
  }
  return tags;
}

Vec3 read_position(const nlohmann::json& obj, const std::string& where)
{
  const auto& p = field(obj, "position", where);
  if (!p.is_array() || p.size() != 3 ||
      !std::all_of(p.begin(), p.end(), [](const auto& c) { return c.is_number(); }))
    schema_error(where, "field 'position' must be a 3-element numeric array");
  return {p[0].get<double>(), p[1].get<double>(), p[2].get<double>()};
}

nlohmann::json position_json(const Vec3& p)
{
  return nlohmann::json::array({p.x, p.y, p.z});
}

}  // namespace

bool is_agent_id(std::string_view id) { return has_positive_suffix(id, "A_"); }
bool is_object_id(std::string_view id) { return has_positive_suffix(id, "Obj_"); }

const AgentSpec* Scene::find_agent(std::string_view id) const
{
  auto it = std::find_if(agents.begin(), agents.end(),
                         [&](const AgentSpec& a) { return a.id == id; });
  return it == agents.end() ? nullptr : &*it;
}

const ObjectSpec* Scene::find_object(std::string_view id) const
{
  auto it = std::find_if(objects.begin(), objects.end(),
                         [&](const ObjectSpec& o) { return o.id == id; });
  return it == objects.end() ? nullptr : &*it;
}

std::vector<std::string> validate_scene(const Scene& scene)
{
  std::vector<std::string> out;
  std::set<std::string> seen;

  for (const auto& a : scene.agents) {
    const std::string who = "agent '" + a.id + "'";
    if (!is_agent_id(a.id))
      out.push_back(who + ": id must match A_<n> with n >= 1");
    if (!seen.insert(a.id).second)
      out.push_back(who + ": duplicate id");
    check_tags(a.tags, who, out);
    if (!finite(a.position))
      out.push_back(who + ": position must be finite");
  }

  for (const auto& o : scene.objects) {
    const std::string who = "object '" + o.id + "'";
    if (!is_object_id(o.id))
      out.push_back(who + ": id must match Obj_<n> with n >= 1");
    if (!seen.insert(o.id).second)
      out.push_back(who + ": duplicate id");
    const int kinds = int(o.grabbable) + int(o.stationary) + int(o.basic);
    if (kinds > 1) {
      out.push_back(who + ": supports only one interaction type "
                          "(grabbable, stationary, basic are exclusive)");
    }
    if (o.stationary_compatible && o.grabbable)
      out.push_back(who + ": stationary_compatible requires grabbable=false");
    check_tags(o.tags, who, out);
    if (!finite(o.position))
      out.push_back(who + ": position must be finite");
  }
  return out;
}

void require_runnable(const Scene& scene)
{
  const auto violations = validate_scene(scene);
  if (!violations.empty())
    throw Error(ErrorKind::invariant, violations.front());
  if (scene.agents.empty())
    throw Error(ErrorKind::precondition, "scene has no agents");
  if (scene.objects.empty())
    throw Error(ErrorKind::precondition, "scene has no objects");
}

Scene scene_from_json(const nlohmann::json& doc)
{
  if (!doc.is_object())
    schema_error("document", "top level must be an object");
  Scene scene;

  const auto& agents = field(doc, "agents", "document");
  if (!agents.is_array())
    schema_error("document", "'agents' must be an array");
  for (std::size_t i = 0; i < agents.size(); ++i) {
    const std::string where = "agents[" + std::to_string(i) + "]";
    const auto& a = agents[i];
    if (!a.is_object())
      schema_error(where, "must be an object");
    AgentSpec spec;
    spec.name = read_string(a, "name", where);
    spec.id = read_string(a, "id", where);
    spec.tags = read_tags(a, where);
    spec.position = read_position(a, where);
    scene.agents.push_back(std::move(spec));
  }

  const auto& objects = field(doc, "objects", "document");
  if (!objects.is_array())
    schema_error("document", "'objects' must be an array");
  for (std::size_t i = 0; i < objects.size(); ++i) {
    const std::string where = "objects[" + std::to_string(i) + "]";
    const auto& o = objects[i];
    if (!o.is_object())
      schema_error(where, "must be an object");
    ObjectSpec spec;
    spec.id = read_string(o, "id", where);
    spec.name = read_string(o, "name", where);
    spec.grabbable = read_flag(o, "grabbable", where);
    spec.stationary = read_flag(o, "stationary", where);
    spec.stationary_compatible = read_flag(o, "stationary_compatible", where);
    spec.basic = read_flag(o, "basic", where);
    spec.tags = read_tags(o, where);
    spec.position = read_position(o, where);
    if (auto it = o.find("initial_state"); it != o.end() && !it->is_null()) {
      if (!it->is_boolean())
        schema_error(where, "field 'initial_state' must be a boolean");
      spec.initial_state = it->get<bool>();
    }
    scene.objects.push_back(std::move(spec));
  }
  return scene;
}

nlohmann::json scene_to_json(const Scene& scene)
{
  nlohmann::json agents = nlohmann::json::array();
  for (const auto& a : scene.agents) {
    agents.push_back({{"name", a.name},
                      {"id", a.id},
                      {"tags", a.tags},
                      {"position", position_json(a.position)}});
  }
  nlohmann::json objects = nlohmann::json::array();
  for (const auto& o : scene.objects) {
    nlohmann::json j = {{"id", o.id},
                        {"name", o.name},
                        {"grabbable", o.grabbable},
                        {"stationary", o.stationary},
                        {"stationary_compatible", o.stationary_compatible},
                        {"basic", o.basic},
                        {"tags", o.tags},
                        {"position", position_json(o.position)}};
    if (o.initial_state)
      j["initial_state"] = *o.initial_state;
    objects.push_back(std::move(j));
  }
  return {{"agents", std::move(agents)}, {"objects", std::move(objects)}};
}

Scene parse_scene(std::string_view text)
{
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text.begin(), text.end());
  } catch (const nlohmann::json::parse_error& e) {
    // e.byte is 1-based and may point one past the end.
    const std::size_t stop = std::min<std::size_t>(e.byte == 0 ? 0 : e.byte - 1, text.size());
    std::size_t line = 1, column = 1;
    for (std::size_t i = 0; i < stop; ++i) {
      if (text[i] == '\n') {
        ++line;
        column = 1;
      } else {
        ++column;
      }
    }
    std::ostringstream msg;
    msg << "scene syntax error at line " << line << ", column " << column << ": "
        << e.what();
    throw Error(ErrorKind::syntax, msg.str());
  }

  Scene scene = scene_from_json(doc);
  const auto violations = validate_scene(scene);
  if (!violations.empty())
    throw Error(ErrorKind::invariant, violations.front());
  return scene;
}

Scene load_scene(const std::filesystem::path& path)
{
  std::ifstream in(path, std::ios::binary);
  if (!in)
    throw Error(ErrorKind::io, "cannot open scene file '" + path.string() + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  if (in.bad())
    throw Error(ErrorKind::io, "failed reading scene file '" + path.string() + "'");
  return parse_scene(buf.str());
}

void save_scene(const Scene& scene, const std::filesystem::path& path)
{
  std::ofstream out(path, std::ios::binary);
  if (!out)
    throw Error(ErrorKind::io, "cannot write scene file '" + path.string() + "'");
  out << scene_to_json(scene).dump(2) << '\n';
}

BigInt estimate_scenarios(const ScenarioParams& params)
{
  if (params.objects == 0 || params.variants == 0 || params.durations == 0 ||
      params.agents == 0)
    throw Error(ErrorKind::precondition, "scenario parameters must all be >= 1");
  BigInt base = params.objects;
  base *= params.variants;
  base *= params.durations;
  // Square-and-multiply; n can be large.
  BigInt result = 1;
  std::uint64_t n = params.agents;
  while (n > 0) {
    if (n & 1u)
      result *= base;
    n >>= 1;
    if (n > 0)
      base *= base;
  }
  return result;
}

}  // namespace scenedirector
