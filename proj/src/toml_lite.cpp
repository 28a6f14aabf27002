#include "toml_lite.hpp"

#include <cctype>
#include <charconv>

#include "scenedirector/error.hpp"

namespace scenedirector::toml_lite {

namespace {

std::string_view trim(std::string_view s)
{
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front())))
    s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back())))
    s.remove_suffix(1);
  return s;
}

[[noreturn]] void fail(std::size_t line, const std::string& what)
{
  throw Error(ErrorKind::config, "providers config line " + std::to_string(line) + ": " + what);
}

bool bare_key(std::string_view key)
{
  if (key.empty())
    return false;
  for (char c : key)
    if (!std::isalnum(static_cast<unsigned char>(c)) && c != '_' && c != '-')
      return false;
  return true;
}

/// Parses a basic string starting at the opening quote; returns the string
/// and leaves `rest` after the closing quote.
std::string basic_string(std::string_view& rest, std::size_t line)
{
  std::string out;
  std::size_t i = 1;
  for (; i < rest.size(); ++i) {
    const char c = rest[i];
    if (c == '"')
      break;
    if (c != '\\') {
      out += c;
      continue;
    }
    if (++i >= rest.size())
      fail(line, "unterminated escape");
    switch (rest[i]) {
      case '"': out += '"'; break;
      case '\\': out += '\\'; break;
      case 'n': out += '\n'; break;
      case 't': out += '\t'; break;
      case 'r': out += '\r'; break;
      default: fail(line, "unsupported escape sequence");
    }
  }
  if (i >= rest.size())
    fail(line, "unterminated string");
  rest.remove_prefix(i + 1);
  return out;
}

Value scalar(std::string_view text, std::size_t line)
{
  if (text == "true")
    return true;
  if (text == "false")
    return false;
  std::string cleaned;
  for (char c : text)
    if (c != '_')
      cleaned += c;
  const char* first = cleaned.data();
  const char* last = first + cleaned.size();
  if (!cleaned.empty() && *first == '+')
    ++first;
  const bool looks_float = cleaned.find_first_of(".eE") != std::string::npos;
  if (!looks_float) {
    std::int64_t v = 0;
    auto [ptr, ec] = std::from_chars(first, last, v);
    if (ec == std::errc() && ptr == last)
      return v;
  } else {
    double v = 0.0;
    auto [ptr, ec] = std::from_chars(first, last, v);
    if (ec == std::errc() && ptr == last)
      return v;
  }
  fail(line, "unsupported value '" + std::string(text) + "'");
}

}  // namespace

Document parse(std::string_view text)
{
  Document doc;
  std::string current;
  std::size_t line_no = 0;
  while (!text.empty()) {
    ++line_no;
    const auto nl = text.find('\n');
    std::string_view line = text.substr(0, nl);
    text.remove_prefix(nl == std::string_view::npos ? text.size() : nl + 1);

    line = trim(line);
    if (line.empty() || line.front() == '#')
      continue;

    if (line.front() == '[') {
      const auto close = line.find(']');
      if (close == std::string_view::npos || line.substr(0, 2) == "[[")
        fail(line_no, "malformed table header");
      auto after = trim(line.substr(close + 1));
      if (!after.empty() && after.front() != '#')
        fail(line_no, "unexpected text after table header");
      current = std::string(trim(line.substr(1, close - 1)));
      if (!bare_key(current))
        fail(line_no, "table name must be a bare key");
      if (doc.count(current))
        fail(line_no, "duplicate table [" + current + "]");
      doc[current];
      continue;
    }

    const auto eq = line.find('=');
    if (eq == std::string_view::npos)
      fail(line_no, "expected key = value");
    const std::string key(trim(line.substr(0, eq)));
    if (!bare_key(key))
      fail(line_no, "key must be a bare key");
    std::string_view rest = trim(line.substr(eq + 1));
    if (rest.empty())
      fail(line_no, "missing value");

    Value value;
    if (rest.front() == '"') {
      value = basic_string(rest, line_no);
      rest = trim(rest);
      if (!rest.empty() && rest.front() != '#')
        fail(line_no, "unexpected text after string");
    } else {
      const auto hash = rest.find('#');
      value = scalar(trim(rest.substr(0, hash)), line_no);
    }
    auto& table = doc[current];
    if (table.count(key))
      fail(line_no, "duplicate key '" + key + "'");
    table[key] = std::move(value);
  }
  return doc;
}

}  // namespace scenedirector::toml_lite
