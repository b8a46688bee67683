#pragma once

#include <stdexcept>
#include <string>

namespace sqc {

/// Iterative solver exceeded its bounded iteration budget.
struct SolverFailure : std::runtime_error {
  explicit SolverFailure(const std::string& what) : std::runtime_error(what) {}
};

/// Operation requested on a cone variant that does not support it.
struct UnsupportedCone : std::invalid_argument {
  explicit UnsupportedCone(const std::string& what) : std::invalid_argument(what) {}
};

/// Slerp endpoints equal or antipodal: the minimal geodesic is not unique.
struct DegenerateGeodesic : std::invalid_argument {
  explicit DegenerateGeodesic(const std::string& what) : std::invalid_argument(what) {}
};

/// Rejection sampling ran out of budget before accepting enough points.
struct SamplingExhausted : std::runtime_error {
  explicit SamplingExhausted(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace sqc
