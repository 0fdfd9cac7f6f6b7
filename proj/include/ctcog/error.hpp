#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace ctcog {

// Every failure mode the library reports. CLI exit codes are derived from
// these (input errors -> 2, IO -> 3).
enum class Errc {
  // substrate / variable construction
  OverlappingAttributes,
  EmptyAttribute,
  SubstrateMismatch,
  MixedBackends,
  InvalidPartition,
  IndexOutOfRange,
  // task construction
  AmbiguousInputs,
  EmptyTask,
  NotAPermutation,
  TooFewAttributes,
  LabelCountMismatch,
  // possibility oracle
  UnsupportedTaskShape,
  NotInformationVariable,
  // judgement simulation
  InvalidScenario,
  InvalidNoise,
  EmptySheet,
  EmptyCohort,
  EnumerationTooLarge,
  DimensionMismatch,
  UnknownFormat,
  // scenario files / CLI
  SyntaxError,
  UnresolvedName,
  InvariantViolation,
  RegimeMismatch,
  UnknownParameter,
  InvalidRange,
  IoError,
  // out-of-contract call not covered by a more specific code
  InvalidArgument,
};

constexpr std::string_view errc_name(Errc c) {
  switch (c) {
    case Errc::OverlappingAttributes: return "OverlappingAttributes";
    case Errc::EmptyAttribute: return "EmptyAttribute";
    case Errc::SubstrateMismatch: return "SubstrateMismatch";
    case Errc::MixedBackends: return "MixedBackends";
    case Errc::InvalidPartition: return "InvalidPartition";
    case Errc::IndexOutOfRange: return "IndexOutOfRange";
    case Errc::AmbiguousInputs: return "AmbiguousInputs";
    case Errc::EmptyTask: return "EmptyTask";
    case Errc::NotAPermutation: return "NotAPermutation";
    case Errc::TooFewAttributes: return "TooFewAttributes";
    case Errc::LabelCountMismatch: return "LabelCountMismatch";
    case Errc::UnsupportedTaskShape: return "UnsupportedTaskShape";
    case Errc::NotInformationVariable: return "NotInformationVariable";
    case Errc::InvalidScenario: return "InvalidScenario";
    case Errc::InvalidNoise: return "InvalidNoise";
    case Errc::EmptySheet: return "EmptySheet";
    case Errc::EmptyCohort: return "EmptyCohort";
    case Errc::EnumerationTooLarge: return "EnumerationTooLarge";
    case Errc::DimensionMismatch: return "DimensionMismatch";
    case Errc::UnknownFormat: return "UnknownFormat";
    case Errc::SyntaxError: return "SyntaxError";
    case Errc::UnresolvedName: return "UnresolvedName";
    case Errc::InvariantViolation: return "InvariantViolation";
    case Errc::RegimeMismatch: return "RegimeMismatch";
    case Errc::UnknownParameter: return "UnknownParameter";
    case Errc::InvalidRange: return "InvalidRange";
    case Errc::IoError: return "IoError";
    case Errc::InvalidArgument: return "InvalidArgument";
  }
  return "UnknownError";
}

class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& message)
      : std::runtime_error(std::string(errc_name(code)) + ": " + message), code_(code) {}

  Errc code() const noexcept { return code_; }

 private:
  Errc code_;
};

[[noreturn]] inline void raise(Errc code, const std::string& message) {
  throw Error(code, message);
}

}  // namespace ctcog
