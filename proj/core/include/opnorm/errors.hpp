#pragma once

#include <stdexcept>
#include <string>

namespace opnorm {

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
  virtual const char* kind() const noexcept { return "Error"; }
};

#define OPNORM_DECLARE_ERROR(Name)                                   \
  class Name : public Error {                                        \
   public:                                                           \
    using Error::Error;                                              \
    const char* kind() const noexcept override { return #Name; }     \
  }

OPNORM_DECLARE_ERROR(DependentBasis);
OPNORM_DECLARE_ERROR(ShapeMismatch);
OPNORM_DECLARE_ERROR(InvalidKind);
OPNORM_DECLARE_ERROR(InvalidInput);
OPNORM_DECLARE_ERROR(ZeroTensor);
OPNORM_DECLARE_ERROR(ZeroMap);
OPNORM_DECLARE_ERROR(IdentityViolated);
OPNORM_DECLARE_ERROR(DimensionTooLarge);
OPNORM_DECLARE_ERROR(IoError);

#undef OPNORM_DECLARE_ERROR

}  // namespace opnorm
