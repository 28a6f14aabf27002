#include <algorithm>
#include <cstdio>

#include "scenedirector/simulator.hpp"

namespace scenedirector {

TimelineFormat parse_timeline_format(std::string_view token)
{
  if (token == "text")
    return TimelineFormat::text;
  if (token == "svg")
    return TimelineFormat::svg;
  throw Error(ErrorKind::precondition,
              "unsupported timeline format '" + std::string(token) + "' (expected text|svg)");
}

namespace {

struct Span {
  std::string kind;  // move, interact, wait, visit, carry, idle
  double start = 0.0;
  double end = 0.0;
  std::string label;
};

struct Lane {
  std::string agent_id;
  std::vector<Span> spans;
};

std::string fixed3(double v)
{
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.3f", v);
  return buf;
}

std::string xml_escape(const std::string& s)
{
  std::string out;
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

Lane build_lane(const std::string& agent_id, const std::vector<SimEvent>& events)
{
  Lane lane{agent_id, {}};
  std::optional<SimEvent> move, interact, wait, carry, visit;
  for (const auto& e : events) {
    if (e.agent_id != agent_id)
      continue;
    const std::string obj = e.object_id.value_or("");
    switch (e.kind) {
      case EventKind::move_start:
        if (visit) {
          lane.spans.push_back({"visit", visit->time, e.time, "visit " + *visit->object_id});
          visit.reset();
        }
        move = e;
        break;
      case EventKind::arrive:
        if (move) {
          lane.spans.push_back({"move", move->time, e.time, "move -> " + obj});
          move.reset();
        }
        if (e.detail == to_string(InteractionType::walk_only))
          visit = e;
        break;
      case EventKind::conflict:
        wait = e;
        break;
      case EventKind::interact_start:
        if (wait) {
          lane.spans.push_back({"wait", wait->time, e.time, "wait " + obj});
          wait.reset();
        }
        interact = e;
        break;
      case EventKind::interact_end:
        if (interact) {
          lane.spans.push_back({"interact", interact->time, e.time, e.detail + " " + obj});
          interact.reset();
        }
        break;
      case EventKind::attach:
        carry = e;
        break;
      case EventKind::drop_destroy:
        if (carry) {
          lane.spans.push_back({"carry", carry->time, e.time, "carry " + obj});
          carry.reset();
        }
        break;
      case EventKind::idle:
        if (visit) {
          lane.spans.push_back({"visit", visit->time, e.time, "visit " + *visit->object_id});
          visit.reset();
        }
        lane.spans.push_back({"idle", e.time, e.time, "idle"});
        break;
      case EventKind::toggle:
        break;
    }
  }
  std::stable_sort(lane.spans.begin(), lane.spans.end(),
                   [](const Span& l, const Span& r) { return l.start < r.start; });
  return lane;
}

std::vector<Lane> build_lanes(const SimTrace& trace)
{
  std::vector<Lane> lanes;
  for (const auto& s : trace.final_states)
    lanes.push_back(build_lane(s.agent_id, trace.events));
  return lanes;
}

double horizon(const SimTrace& trace)
{
  double end = 0.0;
  for (const auto& e : trace.events)
    end = std::max(end, e.time);
  return end;
}

std::string render_text(const SimTrace& trace)
{
  const auto lanes = build_lanes(trace);
  std::string out = "timeline: " + std::to_string(lanes.size()) + " lanes, end " +
                    fixed3(horizon(trace)) + " s\n";
  for (const auto& lane : lanes) {
    out += "lane " + lane.agent_id + "\n";
    for (const auto& s : lane.spans) {
      if (s.kind == "idle")
        out += "  [" + fixed3(s.start) + "] idle\n";
      else
        out += "  [" + fixed3(s.start) + ", " + fixed3(s.end) + "] " + s.kind + ": " +
               s.label + "\n";
    }
  }
  return out;
}

std::string render_svg(const SimTrace& trace)
{
  const auto lanes = build_lanes(trace);
  const double end = std::max(horizon(trace), 1.0);
  const double left = 80.0, scale = 800.0 / end, lane_height = 40.0, top = 30.0;
  const double width = left + 800.0 + 20.0;
  const double height = top + lane_height * double(lanes.size()) + 10.0;

  std::string out;
  out += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + fixed3(width) +
         "\" height=\"" + fixed3(height) + "\" data-lanes=\"" + std::to_string(lanes.size()) +
         "\">\n";
  out += "<style>.move{fill:#9ecae1}.interact{fill:#3182bd}.wait{fill:#fd8d3c}"
         ".visit{fill:#c7e9c0}.carry{fill:#756bb1}.idle{fill:#636363}"
         "text{font:10px sans-serif}</style>\n";
  out += "<text x=\"4\" y=\"16\">timeline 0 - " + fixed3(horizon(trace)) + " s</text>\n";
  for (std::size_t i = 0; i < lanes.size(); ++i) {
    const auto& lane = lanes[i];
    const double y = top + lane_height * double(i);
    out += "<g class=\"lane\" data-agent=\"" + xml_escape(lane.agent_id) + "\">\n";
    out += "<text x=\"4\" y=\"" + fixed3(y + 20.0) + "\">" + xml_escape(lane.agent_id) +
           "</text>\n";
    for (const auto& s : lane.spans) {
      const double x = left + s.start * scale;
      double w = (s.end - s.start) * scale;
      double sy = y + 4.0, sh = 24.0;
      if (s.kind == "carry") {
        sy = y + 30.0;
        sh = 6.0;
      }
      if (s.kind == "idle")
        w = 3.0;
      out += "<rect class=\"span " + s.kind + "\" x=\"" + fixed3(x) + "\" y=\"" + fixed3(sy) +
             "\" width=\"" + fixed3(w) + "\" height=\"" + fixed3(sh) + "\"><title>" +
             xml_escape(s.label) + " [" + fixed3(s.start) + ", " + fixed3(s.end) +
             "]</title></rect>\n";
    }
    out += "</g>\n";
  }
  out += "</svg>\n";
  return out;
}

}  // namespace

std::string render_timeline(const SimTrace& trace, TimelineFormat format)
{
  return format == TimelineFormat::svg ? render_svg(trace) : render_text(trace);
}

}  // namespace scenedirector
