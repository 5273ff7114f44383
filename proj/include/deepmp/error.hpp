#pragma once

#include <stdexcept>
#include <string>

namespace deepmp {

enum class Errc {
  EmptyInput,
  NotNormalized,
  NegativeEntry,
  NotOvercomplete,
  DimensionMismatch,
  MaxIterationsExceeded,
  SparsityMismatch,
  EmptyBatch,
  ShapeMismatch,
  NonFiniteGradient,
  NonFiniteLoss,
  DegenerateColumn,
  ParseError,
  EmptyLibrary,
  ZeroSparsity,
  ZeroSignal,
  ZeroColumn,
  MissingModel,
  BadConfig,
  IoError,
};

constexpr const char* to_string(Errc code) {
  switch (code) {
    case Errc::EmptyInput: return "EmptyInput";
    case Errc::NotNormalized: return "NotNormalized";
    case Errc::NegativeEntry: return "NegativeEntry";
    case Errc::NotOvercomplete: return "NotOvercomplete";
    case Errc::DimensionMismatch: return "DimensionMismatch";
    case Errc::MaxIterationsExceeded: return "MaxIterationsExceeded";
    case Errc::SparsityMismatch: return "SparsityMismatch";
    case Errc::EmptyBatch: return "EmptyBatch";
    case Errc::ShapeMismatch: return "ShapeMismatch";
    case Errc::NonFiniteGradient: return "NonFiniteGradient";
    case Errc::NonFiniteLoss: return "NonFiniteLoss";
    case Errc::DegenerateColumn: return "DegenerateColumn";
    case Errc::ParseError: return "ParseError";
    case Errc::EmptyLibrary: return "EmptyLibrary";
    case Errc::ZeroSparsity: return "ZeroSparsity";
    case Errc::ZeroSignal: return "ZeroSignal";
    case Errc::ZeroColumn: return "ZeroColumn";
    case Errc::MissingModel: return "MissingModel";
    case Errc::BadConfig: return "BadConfig";
    case Errc::IoError: return "IoError";
  }
  return "Unknown";
}

// Numerical failures map to exit code 1, everything else is bad input (2).
constexpr bool is_numerical(Errc code) {
  return code == Errc::MaxIterationsExceeded || code == Errc::NonFiniteGradient ||
         code == Errc::NonFiniteLoss || code == Errc::DegenerateColumn;
}

class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  Errc code() const noexcept { return code_; }

 private:
  Errc code_;
};

}  // namespace deepmp
