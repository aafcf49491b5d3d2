#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace padt {

enum class ErrorKind {
  invalid_input,
  configuration,
  descriptor_mismatch,
  division_by_zero,
  precision,
  unsupported,
  encoding,
  not_in_image,
  degenerate,
  no_translation,
  non_discrete,
};

constexpr std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::invalid_input: return "invalid-input";
    case ErrorKind::configuration: return "configuration";
    case ErrorKind::descriptor_mismatch: return "descriptor-mismatch";
    case ErrorKind::division_by_zero: return "division-by-zero";
    case ErrorKind::precision: return "precision";
    case ErrorKind::unsupported: return "unsupported-operation";
    case ErrorKind::encoding: return "encoding";
    case ErrorKind::not_in_image: return "not-in-image";
    case ErrorKind::degenerate: return "degenerate";
    case ErrorKind::no_translation: return "no-translation";
    case ErrorKind::non_discrete: return "non-discrete";
  }
  return "unknown";
}

/// Single exception type for the library; `kind()` drives CLI exit codes.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind), message_(what) {}

  ErrorKind kind() const noexcept { return kind_; }
  /// The message without the kind prefix.
  const std::string& message() const noexcept { return message_; }

 private:
  ErrorKind kind_;
  std::string message_;
};

[[noreturn]] inline void fail(ErrorKind kind, const std::string& what) { throw Error(kind, what); }

}  // namespace padt
