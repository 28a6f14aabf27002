#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace scenedirector {

/// Failure categories shared by every pipeline stage. The CLI maps each one
/// to a distinct exit status.
enum class ErrorKind {
  io,
  syntax,
  invariant,
  config,
  credential,
  network,
  http,
  timeout,
  plan_parse,
  precondition,
  conflict,
  unavailable_object,
};

std::string_view to_string(ErrorKind kind);

class Error : public std::runtime_error {
public:
  Error(ErrorKind kind, const std::string& message)
  : std::runtime_error(message), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

private:
  ErrorKind kind_;
};

}  // namespace scenedirector
