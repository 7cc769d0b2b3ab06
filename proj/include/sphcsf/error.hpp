#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace sphcsf {

enum class ErrorKind {
  PoleDegenerate,
  DomainError,
  TooFewNodes,
  NotEmbedded,
  AntipodalEndpoints,
  NeverEnters,
  BlowUp,
  ParamDomain,
  SpacingNotFound,
  OffsetCollision,
  ExtinctionBeforeEnd,
  ConfigInvalid,
  ParseError,
};

constexpr std::string_view to_string(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::PoleDegenerate: return "PoleDegenerate";
    case ErrorKind::DomainError: return "DomainError";
    case ErrorKind::TooFewNodes: return "TooFewNodes";
    case ErrorKind::NotEmbedded: return "NotEmbedded";
    case ErrorKind::AntipodalEndpoints: return "AntipodalEndpoints";
    case ErrorKind::NeverEnters: return "NeverEnters";
    case ErrorKind::BlowUp: return "BlowUp";
    case ErrorKind::ParamDomain: return "ParamDomain";
    case ErrorKind::SpacingNotFound: return "SpacingNotFound";
    case ErrorKind::OffsetCollision: return "OffsetCollision";
    case ErrorKind::ExtinctionBeforeEnd: return "ExtinctionBeforeEnd";
    case ErrorKind::ConfigInvalid: return "ConfigInvalid";
    case ErrorKind::ParseError: return "ParseError";
  }
  return "Unknown";
}

/// Every failure raised by the library carries one of the kinds above so
/// callers (and the CLI exit-code mapping) can dispatch without string matching.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

  [[nodiscard]] ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace sphcsf
