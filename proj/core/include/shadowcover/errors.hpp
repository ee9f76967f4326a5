#pragma once

#include <stdexcept>
#include <string>

namespace shadowcover {

struct ShadowError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// The requested lift is not unique: a jump reached the injectivity radius.
struct NoUniqueLift : ShadowError {
  explicit NoUniqueLift(const std::string& m) : ShadowError("NoUniqueLift: " + m) {}
};

struct NotHyperbolic : ShadowError {
  explicit NotHyperbolic(const std::string& m) : ShadowError("NotHyperbolic: " + m) {}
};

struct ConeCheckFailed : ShadowError {
  explicit ConeCheckFailed(const std::string& m) : ShadowError("ConeCheckFailed: " + m) {}
};

struct DimensionMismatch : ShadowError {
  explicit DimensionMismatch(const std::string& m) : ShadowError("DimensionMismatch: " + m) {}
};

struct SupportEscapesWindow : ShadowError {
  explicit SupportEscapesWindow(const std::string& m) : ShadowError("SupportEscapesWindow: " + m) {}
};

struct CocycleWindowTooSmall : ShadowError {
  explicit CocycleWindowTooSmall(const std::string& m) : ShadowError("CocycleWindowTooSmall: " + m) {}
};

struct SingularSystem : ShadowError {
  explicit SingularSystem(const std::string& m) : ShadowError("SingularSystem: " + m) {}
};

struct NoCenterDirection : ShadowError {
  explicit NoCenterDirection(const std::string& m) : ShadowError("NoCenterDirection: " + m) {}
};

struct NotLinear : ShadowError {
  explicit NotLinear(const std::string& m) : ShadowError("NotLinear: " + m) {}
};

struct NotProductDecomposable : ShadowError {
  explicit NotProductDecomposable(const std::string& m) : ShadowError("NotProductDecomposable: " + m) {}
};

struct OrbitEscapes : ShadowError {
  explicit OrbitEscapes(const std::string& m) : ShadowError("OrbitEscapes: " + m) {}
};

struct InvalidArgument : ShadowError {
  explicit InvalidArgument(const std::string& m) : ShadowError("InvalidArgument: " + m) {}
};

}  // namespace shadowcover
