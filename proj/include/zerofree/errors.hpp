#pragma once
// Error taxonomy shared by every module. Each failure mode named in the public
// contracts maps to one exception type so callers can react selectively
// (e.g. extend a horizon on HorizonError, abort on StrayRootError).

#include <stdexcept>
#include <string>

namespace zerofree {

/// Base class of all library errors.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

#define ZEROFREE_DEFINE_ERROR(Name)                  \
    class Name : public Error {                      \
    public:                                          \
        explicit Name(const std::string& what)       \
            : Error(std::string(#Name ": ") + what) {} \
    };

ZEROFREE_DEFINE_ERROR(DomainError)
ZEROFREE_DEFINE_ERROR(ConvergenceError)
ZEROFREE_DEFINE_ERROR(OverflowError)
ZEROFREE_DEFINE_ERROR(StrayRootError)
ZEROFREE_DEFINE_ERROR(PoleTableError)
ZEROFREE_DEFINE_ERROR(NoRootError)
ZEROFREE_DEFINE_ERROR(HorizonError)
ZEROFREE_DEFINE_ERROR(GridMismatchError)
ZEROFREE_DEFINE_ERROR(SingularBasisError)
ZEROFREE_DEFINE_ERROR(ExplosionError)
ZEROFREE_DEFINE_ERROR(TailError)
ZEROFREE_DEFINE_ERROR(MultipleMinimaError)
ZEROFREE_DEFINE_ERROR(BoundaryZeroError)
ZEROFREE_DEFINE_ERROR(DegenerateSpectrumError)

#undef ZEROFREE_DEFINE_ERROR

}  // namespace zerofree
