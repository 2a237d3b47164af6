#pragma once

#include <stdexcept>
#include <string>

namespace fbms {

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

#define FBMS_DEFINE_ERROR(Name)                                   \
  class Name : public Error {                                     \
   public:                                                        \
    explicit Name(const std::string& what) : Error(#Name ": " + what) {} \
  }

// mesh_core
FBMS_DEFINE_ERROR(ParseError);
FBMS_DEFINE_ERROR(NonManifoldError);
FBMS_DEFINE_ERROR(ClosedSurfaceError);
FBMS_DEFINE_ERROR(OrientationError);
FBMS_DEFINE_ERROR(DegenerateTriangleError);
FBMS_DEFINE_ERROR(TopologyError);
FBMS_DEFINE_ERROR(ResolutionError);

// ambient_geometry
FBMS_DEFINE_ERROR(FrameError);
FBMS_DEFINE_ERROR(OffBoundaryError);
FBMS_DEFINE_ERROR(TangencyError);
FBMS_DEFINE_ERROR(AmbientError);

// variation_forms
FBMS_DEFINE_ERROR(ValidationError);
FBMS_DEFINE_ERROR(SolveError);
FBMS_DEFINE_ERROR(AdmissibilityError);

// spectral_engine
FBMS_DEFINE_ERROR(ConvergenceError);
FBMS_DEFINE_ERROR(DimensionError);

// heat_bounds
FBMS_DEFINE_ERROR(GridError);
FBMS_DEFINE_ERROR(SizeError);
FBMS_DEFINE_ERROR(ZeroFieldError);
FBMS_DEFINE_ERROR(ParameterError);

// bounds_topology
FBMS_DEFINE_ERROR(RankError);
FBMS_DEFINE_ERROR(SignError);
FBMS_DEFINE_ERROR(InputMismatchError);

// cli_runner
FBMS_DEFINE_ERROR(ConfigError);

#undef FBMS_DEFINE_ERROR

}  // namespace fbms
