#pragma once

#include <stdexcept>
#include <string>

namespace heckeops {

// Every failure raised by the library derives from Error, so callers that do not
// care about the specific condition can catch a single type.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

#define HECKEOPS_DEFINE_ERROR(Name)                                   \
    class Name : public Error {                                       \
    public:                                                           \
        explicit Name(const std::string& what) : Error(#Name ": " + what) {} \
    }

HECKEOPS_DEFINE_ERROR(DegenerateMatrix);
HECKEOPS_DEFINE_ERROR(NotInG);
HECKEOPS_DEFINE_ERROR(NotDisjoint);
HECKEOPS_DEFINE_ERROR(InternalInvariantViolation);
HECKEOPS_DEFINE_ERROR(NotRadial);
HECKEOPS_DEFINE_ERROR(OutsidePositivityWindow);
HECKEOPS_DEFINE_ERROR(QuadratureFailure);
HECKEOPS_DEFINE_ERROR(EmptyBall);
HECKEOPS_DEFINE_ERROR(RadiusTooSmall);
HECKEOPS_DEFINE_ERROR(DomainError);
HECKEOPS_DEFINE_ERROR(DivergentSeries);
HECKEOPS_DEFINE_ERROR(RaiseLevel);
HECKEOPS_DEFINE_ERROR(Overflow);

#undef HECKEOPS_DEFINE_ERROR

}  // namespace heckeops
