#include "scenedirector/serializer.hpp"

#include <cmath>
#include <cstdio>

#include "scenedirector/error.hpp"

namespace scenedirector {

namespace {

const char* yes_no(bool v) { return v ? "Yes" : "No"; }

std::string join_tags(const std::vector<std::string>& tags)
{
  std::string out;
  for (std::size_t i = 0; i < tags.size(); ++i) {
    if (i)
      out += ", ";
    out += tags[i];
  }
  return out;
}

void line(std::string& out, std::string_view label, std::string_view value)
{
  out += label;
  if (!value.empty()) {
    out += ' ';
    out += value;
  }
  out += '\n';
}

void rule(std::string& out)
{
  out += kSectionRule;
  out += '\n';
}

}  // namespace

std::string format_coordinate(double value)
{
  if (!std::isfinite(value))
    throw Error(ErrorKind::precondition, "cannot format non-finite coordinate");
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.2f", value);
  std::string s = buf;
  if (s == "0.00" || s == "-0.00")
    return "0";
  if (s.rfind("0.", 0) == 0)
    s.erase(0, 1);
  else if (s.rfind("-0.", 0) == 0)
    s.erase(1, 1);
  return s;
}

std::string format_position(const Vec3& p)
{
  return "(" + format_coordinate(p.x) + ", " + format_coordinate(p.y) + ", " +
         format_coordinate(p.z) + ")";
}

SceneDescription serialize_scene(const Scene& scene)
{
  const auto violations = validate_scene(scene);
  if (!violations.empty())
    throw Error(ErrorKind::invariant, violations.front());

  std::string out;
  out += "Scene Description:\n";
  rule(out);
  out += "Actors:\n";
  rule(out);
  for (const auto& a : scene.agents) {
    line(out, "Name:", a.name);
    line(out, "ID:", a.id);
    line(out, "Tags:", join_tags(a.tags));
    line(out, "Position:", format_position(a.position));
    rule(out);
  }
  rule(out);
  out += "Interactable Objects:\n";
  rule(out);
  for (const auto& o : scene.objects) {
    line(out, "Object ID:", o.id);
    line(out, "Name:", o.name);
    line(out, "Is Grabbable:", yes_no(o.grabbable));
    line(out, "Is Stationary:", yes_no(o.stationary));
    line(out, "Is Stationary Compatible:", yes_no(o.stationary_compatible));
    line(out, "Is Basic Interaction:", yes_no(o.basic));
    line(out, "Tags:", join_tags(o.tags));
    line(out, "Position:", format_position(o.position));
    rule(out);
  }
  rule(out);
  out += "END\n";
  rule(out);
  return {std::move(out)};
}

}  // namespace scenedirector
