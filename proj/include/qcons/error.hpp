#pragma once

#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace qcons {

enum class ErrorCode {
  DisconnectedGraph,
  NonSquare,
  DimensionMismatch,
  BaseNotDominating,
  CapReached,
  NonFinite,
  NotRepresentable,
  NoAttacks,
  InvalidParams,
  BudgetTooLarge,
  NotScalar,
  SelectionViolated,
  DegenerateFactors,
  InvalidRange,
  ParseError,
  ValidationError,
  SaturationAbort,
};

std::string_view to_string(ErrorCode code) noexcept;

/// Exception carrying a machine-readable code. Validation failures carry the
/// full list of violations in `details()`.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message, std::vector<std::string> details = {})
      : std::runtime_error(std::string(to_string(code)) + ": " + message),
        code_(code),
        details_(std::move(details)) {}

  ErrorCode code() const noexcept { return code_; }
  const std::vector<std::string>& details() const noexcept { return details_; }

 private:
  ErrorCode code_;
  std::vector<std::string> details_;
};

inline std::string_view to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::DisconnectedGraph: return "DisconnectedGraph";
    case ErrorCode::NonSquare: return "NonSquare";
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::BaseNotDominating: return "BaseNotDominating";
    case ErrorCode::CapReached: return "CapReached";
    case ErrorCode::NonFinite: return "NonFinite";
    case ErrorCode::NotRepresentable: return "NotRepresentable";
    case ErrorCode::NoAttacks: return "NoAttacks";
    case ErrorCode::InvalidParams: return "InvalidParams";
    case ErrorCode::BudgetTooLarge: return "BudgetTooLarge";
    case ErrorCode::NotScalar: return "NotScalar";
    case ErrorCode::SelectionViolated: return "SelectionViolated";
    case ErrorCode::DegenerateFactors: return "DegenerateFactors";
    case ErrorCode::InvalidRange: return "InvalidRange";
    case ErrorCode::ParseError: return "ParseError";
    case ErrorCode::ValidationError: return "ValidationError";
    case ErrorCode::SaturationAbort: return "SaturationAbort";
  }
  return "Unknown";
}

}  // namespace qcons
