#pragma once

#include <stdexcept>
#include <string>

namespace fedhide {

// Base for every error raised by the library. Callers that only need to
// distinguish "bad configuration" from "runtime failure" can catch
// ConfigError and Error respectively.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

#define FEDHIDE_DEFINE_ERROR(Name)       \
  class Name : public Error {            \
   public:                               \
    using Error::Error;                  \
  }

// Geometry
FEDHIDE_DEFINE_ERROR(DegenerateVector);
FEDHIDE_DEFINE_ERROR(DimensionMismatch);
FEDHIDE_DEFINE_ERROR(InvalidArgument);

// Data
FEDHIDE_DEFINE_ERROR(InvalidSpec);
FEDHIDE_DEFINE_ERROR(ParseError);
FEDHIDE_DEFINE_ERROR(InconsistentDimension);
FEDHIDE_DEFINE_ERROR(EmptyClass);

// Model / objective
FEDHIDE_DEFINE_ERROR(InvalidArchitecture);
FEDHIDE_DEFINE_ERROR(TraceMismatch);
FEDHIDE_DEFINE_ERROR(ShapeMismatch);
FEDHIDE_DEFINE_ERROR(EmptyProxySet);
FEDHIDE_DEFINE_ERROR(EmptyNeighborPool);

// Federation / experiment
FEDHIDE_DEFINE_ERROR(ConfigError);
FEDHIDE_DEFINE_ERROR(CheckpointError);

// Metrics
FEDHIDE_DEFINE_ERROR(KeyMismatch);
FEDHIDE_DEFINE_ERROR(MissingPrototype);
FEDHIDE_DEFINE_ERROR(EmptyScores);
FEDHIDE_DEFINE_ERROR(NoMetricsFound);

// Convergence
FEDHIDE_DEFINE_ERROR(InvalidInputs);
FEDHIDE_DEFINE_ERROR(InsufficientTrace);

#undef FEDHIDE_DEFINE_ERROR

// Raised when the Theorem-2 style round count is requested outside its
// applicability region. Carries the offending denominator.
class NonPositiveDenominator : public Error {
 public:
  explicit NonPositiveDenominator(double denominator);
  double denominator() const noexcept { return denominator_; }

 private:
  double denominator_;
};

}  // namespace fedhide
