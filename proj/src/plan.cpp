#include "scenedirector/plan.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <map>
#include <set>
#include <sstream>

namespace scenedirector {

std::string_view to_string(InteractionType type)
{
  switch (type) {
    case InteractionType::walk_only: return "walk";
    case InteractionType::normal: return "normal";
    case InteractionType::grab: return "grab";
    case InteractionType::stationary: return "stationary";
    case InteractionType::basic: return "basic";
  }
  return "unknown";
}

InteractionType interaction_type(const Destination& d)
{
  if (!d.interact)
    return InteractionType::walk_only;
  if (d.grab)
    return InteractionType::grab;
  if (d.stationary)
    return InteractionType::stationary;
  if (d.basic)
    return InteractionType::basic;
  return InteractionType::normal;
}

const AgentQueue* ActionPlan::find(std::string_view agent_id) const
{
  auto it = std::find_if(entries.begin(), entries.end(),
                         [&](const AgentQueue& q) { return q.agent_id == agent_id; });
  return it == entries.end() ? nullptr : &*it;
}

std::size_t ActionPlan::destination_count() const
{
  std::size_t n = 0;
  for (const auto& e : entries)
    n += e.queue.size();
  return n;
}

PlanParseError::PlanParseError(std::string code, std::size_t offset,
                               std::vector<std::string> expected,
                               std::string context, const std::string& message)
: Error(ErrorKind::plan_parse, message),
  code_(std::move(code)),
  offset_(offset),
  expected_(std::move(expected)),
  context_(std::move(context))
{}

namespace {

class Parser {
public:
  explicit Parser(std::string_view text) : text_(text) {}

  ActionPlan run()
  {
    ActionPlan plan;
    skip_ws();
    agent_block(plan);
    for (;;) {
      skip_ws();
      if (at_end())
        break;
      if (peek() == ',') {
        ++pos_;
        skip_ws();
        if (at_end())
          break;
        if (peek() == '.') {
          trailing_period();
          break;
        }
        agent_block(plan);
      } else if (peek() == '.') {
        trailing_period();
        break;
      } else {
        fail({"','", "'.'", "end of input"});
      }
    }
    return plan;
  }

private:
  bool at_end() const { return pos_ >= text_.size(); }
  char peek() const { return text_[pos_]; }

  void skip_ws()
  {
    while (!at_end() &&
           (peek() == ' ' || peek() == '\t' || peek() == '\n' || peek() == '\r'))
      ++pos_;
  }

  [[noreturn]] void fail(std::vector<std::string> expected)
  {
    std::ostringstream msg;
    msg << "syntax error at offset " << pos_ << ": expected ";
    for (std::size_t i = 0; i < expected.size(); ++i)
      msg << (i ? " or " : "") << expected[i];
    if (at_end()) {
      msg << ", found end of input";
    } else {
      const unsigned char c = static_cast<unsigned char>(peek());
      if (c >= 0x20 && c < 0x7f)
        msg << ", found '" << peek() << "'";
      else
        msg << ", found byte 0x" << std::hex << int(c);
    }
    throw PlanParseError("syntax", pos_, std::move(expected), "", msg.str());
  }

  [[noreturn]] void semantic(std::string code, std::size_t at, std::string context,
                             const std::string& what)
  {
    throw PlanParseError(std::move(code), at, {}, context,
                         context + ": " + what + " (offset " + std::to_string(at) + ")");
  }

  void expect(char c, const char* name)
  {
    skip_ws();
    if (at_end() || peek() != c)
      fail({name});
    ++pos_;
  }

  void trailing_period()
  {
    ++pos_;
    skip_ws();
    if (!at_end())
      fail({"end of input"});
  }

  std::string identifier(std::string_view prefix, const char* name)
  {
    skip_ws();
    const std::size_t start = pos_;
    if (text_.substr(pos_, prefix.size()) != prefix)
      fail({name});
    pos_ += prefix.size();
    const std::size_t digits = pos_;
    while (!at_end() && peek() >= '0' && peek() <= '9')
      ++pos_;
    if (pos_ == digits) {
      pos_ = start;
      fail({name});
    }
    return std::string(text_.substr(start, pos_ - start));
  }

  bool flag()
  {
    skip_ws();
    if (!at_end() && (peek() == 'T' || peek() == 'F')) {
      const bool v = peek() == 'T';
      ++pos_;
      // Reject longer words such as "True" or "False".
      if (!at_end() && std::isalnum(static_cast<unsigned char>(peek())))
        fail({"',' or ')' after flag"});
      return v;
    }
    fail({"flag (T|F)"});
  }

  double number()
  {
    skip_ws();
    const std::size_t start = pos_;
    auto digit = [&] { return !at_end() && peek() >= '0' && peek() <= '9'; };
    if (!digit())
      fail({"number"});
    while (digit())
      ++pos_;
    if (!at_end() && peek() == '.') {
      ++pos_;
      if (!digit())
        fail({"digit"});
      while (digit())
        ++pos_;
    }
    double value = 0.0;
    const char* first = text_.data() + start;
    const char* last = text_.data() + pos_;
    auto [ptr, ec] = std::from_chars(first, last, value, std::chars_format::fixed);
    if (ec != std::errc() || ptr != last) {
      pos_ = start;
      fail({"number within double range"});
    }
    return value;
  }

  Destination destination(const std::string& agent_id)
  {
    Destination d;
    skip_ws();
    const std::size_t start = pos_;
    d.object_id = identifier("Obj_", "object id");
    expect('(', "'('");
    d.interact = flag();
    expect(',', "','");
    d.duration = number();
    expect(',', "','");
    d.speed = number();
    expect(',', "','");
    d.grab = flag();
    expect(',', "','");
    d.stationary = flag();
    expect(',', "','");
    d.basic = flag();
    expect(')', "')'");

    const std::string context = agent_id + "/" + d.object_id;
    if (int(d.grab) + int(d.stationary) + int(d.basic) > 1)
      semantic("flag-exclusivity", start, context,
               "at most one of grab, stationary, basic may be set");
    if ((d.grab || d.stationary) && !d.interact)
      semantic("interact-required", start, context,
               "interact must be T when grab or stationary is set");
    if (!(d.duration > 0.0))
      semantic("non-positive-duration", start, context, "duration must be > 0");
    if (!(d.speed > 0.0))
      semantic("non-positive-speed", start, context, "speed must be > 0");
    return d;
  }

  void agent_block(ActionPlan& plan)
  {
    skip_ws();
    const std::size_t start = pos_;
    AgentQueue entry;
    entry.agent_id = identifier("A_", "agent id");
    if (plan.find(entry.agent_id))
      semantic("duplicate-agent", start, entry.agent_id, "agent appears more than once");
    expect('{', "'{'");
    entry.queue.push_back(destination(entry.agent_id));
    for (;;) {
      skip_ws();
      if (!at_end() && peek() == ',') {
        ++pos_;
        entry.queue.push_back(destination(entry.agent_id));
      } else if (!at_end() && peek() == '}') {
        ++pos_;
        break;
      } else {
        fail({"','", "'}'"});
      }
    }
    plan.entries.push_back(std::move(entry));
  }

  std::string_view text_;
  std::size_t pos_ = 0;
};

const char* tf(bool v) { return v ? "T" : "F"; }

std::string where(const std::string& agent, std::size_t index, const std::string& object)
{
  return agent + "[" + std::to_string(index + 1) + "]:" + object;
}

}  // namespace

ActionPlan parse_plan(std::string_view text) { return Parser(text).run(); }

std::string format_number(double value)
{
  char buf[400];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, value, std::chars_format::fixed);
  if (ec != std::errc())
    return std::to_string(value);
  return std::string(buf, ptr);
}

std::string emit_plan(const ActionPlan& plan)
{
  std::string out;
  for (std::size_t i = 0; i < plan.entries.size(); ++i) {
    const auto& entry = plan.entries[i];
    if (i)
      out += ", ";
    out += entry.agent_id;
    out += " {";
    for (std::size_t j = 0; j < entry.queue.size(); ++j) {
      const auto& d = entry.queue[j];
      if (j)
        out += ", ";
      out += d.object_id;
      out += " (";
      out += tf(d.interact);
      out += ", " + format_number(d.duration);
      out += ", " + format_number(d.speed);
      out += ", ";
      out += tf(d.grab);
      out += ", ";
      out += tf(d.stationary);
      out += ", ";
      out += tf(d.basic);
      out += ")";
    }
    out += "}";
  }
  return out;
}

std::size_t ValidityReport::error_count() const
{
  return std::count_if(violations.begin(), violations.end(),
                       [](const Violation& v) { return v.severity == Severity::error; });
}

std::size_t ValidityReport::warning_count() const
{
  return violations.size() - error_count();
}

ValidityReport validate_plan(const ActionPlan& plan, const Scene& scene, Strictness mode)
{
  ValidityReport report;
  report.parse_ok = true;
  const Severity range_severity =
      mode == Strictness::strict ? Severity::error : Severity::warning;
  auto add = [&](Severity s, std::string code, std::string message, std::string loc) {
    report.violations.push_back({s, std::move(code), std::move(message), std::move(loc)});
  };

  std::set<std::string> grabbed;
  for (const auto& entry : plan.entries)
    for (const auto& d : entry.queue)
      if (d.grab)
        grabbed.insert(d.object_id);
  std::map<std::string, int> references;

  for (const auto& entry : plan.entries) {
    if (!scene.find_agent(entry.agent_id))
      add(Severity::error, "unknown-agent",
          "agent " + entry.agent_id + " is not in the scene", entry.agent_id);

    for (std::size_t i = 0; i < entry.queue.size(); ++i) {
      const auto& d = entry.queue[i];
      const std::string loc = where(entry.agent_id, i, d.object_id);
      const ObjectSpec* obj = scene.find_object(d.object_id);
      if (!obj)
        add(Severity::error, "unknown-object",
            "object " + d.object_id + " is not in the scene", loc);

      if (d.speed < kMinSpeed || d.speed > kMaxSpeed)
        add(range_severity, "speed-range",
            "speed " + format_number(d.speed) + " outside [1.0, 4.0]", loc);

      if (d.basic && d.interact) {
        if (d.duration < kMinBasicDuration || d.duration > kMaxBasicDuration)
          add(range_severity, "basic-duration-range",
              "basic duration " + format_number(d.duration) + " outside [3.00, 5.00]", loc);
      } else if (d.duration < kMinDuration || d.duration > kMaxDuration) {
        add(range_severity, "duration-range",
            "duration " + format_number(d.duration) + " outside [2, 16]", loc);
      }

      if (obj) {
        if (d.grab && !obj->grabbable)
          add(Severity::error, "capability-mismatch",
              d.object_id + " is not grabbable", loc);
        if (d.stationary && !obj->stationary)
          add(Severity::error, "capability-mismatch",
              d.object_id + " does not support stationary actions", loc);
        if (d.basic && !obj->basic)
          add(Severity::error, "capability-mismatch",
              d.object_id + " does not support basic interactions", loc);
      }

      if (grabbed.count(d.object_id) && ++references[d.object_id] > 1)
        add(Severity::error, "grab-reuse",
            d.object_id + " is grabbed in this plan and cannot be referenced again", loc);

      if (i > 0 && entry.queue[i - 1].grab && d.stationary && obj &&
          !obj->stationary_compatible)
        add(Severity::warning, "carry-incompatible",
            "carried " + entry.queue[i - 1].object_id + " will be dropped: " +
                d.object_id + " is not stationary compatible",
            loc);
    }
  }

  report.is_structurally_valid = report.error_count() == 0;
  return report;
}

ValidityReport validate_plan_text(std::string_view text, const Scene& scene,
                                  Strictness mode, std::optional<ActionPlan>* parsed)
{
  try {
    ActionPlan plan = parse_plan(text);
    auto report = validate_plan(plan, scene, mode);
    if (parsed)
      *parsed = std::move(plan);
    return report;
  } catch (const PlanParseError& e) {
    ValidityReport report;
    std::string loc = "offset " + std::to_string(e.offset());
    if (!e.context().empty())
      loc = e.context() + " @ " + loc;
    report.violations.push_back({Severity::error, e.code(), e.what(), loc});
    if (parsed)
      parsed->reset();
    return report;
  }
}

nlohmann::json to_json(const ValidityReport& report)
{
  nlohmann::json violations = nlohmann::json::array();
  for (const auto& v : report.violations) {
    violations.push_back({{"severity", v.severity == Severity::error ? "error" : "warning"},
                          {"code", v.code},
                          {"message", v.message},
                          {"location", v.location}});
  }
  return {{"parse_ok", report.parse_ok},
          {"is_structurally_valid", report.is_structurally_valid},
          {"violations", std::move(violations)}};
}

}  // namespace scenedirector
