#pragma once

#include <stdexcept>
#include <string>

namespace hcp {

// Base of every error thrown by the library. `kind()` is a stable,
// machine-readable tag used by the CLI error line.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
  virtual const char* kind() const noexcept { return "Error"; }
};

#define HCP_DEFINE_ERROR(Name)                                      \
  class Name : public Error {                                       \
   public:                                                          \
    using Error::Error;                                             \
    const char* kind() const noexcept override { return #Name; }    \
  }

HCP_DEFINE_ERROR(ValidationError);
HCP_DEFINE_ERROR(ConfigError);
HCP_DEFINE_ERROR(InsufficientData);
HCP_DEFINE_ERROR(NotPositiveDefinite);
HCP_DEFINE_ERROR(NearSingularCovariance);
HCP_DEFINE_ERROR(IoError);

#undef HCP_DEFINE_ERROR

}  // namespace hcp
