#pragma once

#include <stdexcept>
#include <string>

namespace inclab {

// All recoverable failures surface as typed exceptions so callers (and the
// CLI exit-code mapping) can tell validation errors from verified negative
// results like PartitionNotAchieved.
struct Error : std::runtime_error {
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

#define INCLAB_ERROR(NAME)                                              \
    struct NAME : Error {                                               \
        explicit NAME(const std::string& what = #NAME) : Error(what) {} \
    }

INCLAB_ERROR(ZeroDirection);
INCLAB_ERROR(DimensionMismatch);
INCLAB_ERROR(AtPole);
INCLAB_ERROR(ZeroPolynomial);
INCLAB_ERROR(AlphaOutOfRange);
INCLAB_ERROR(BadParams);
INCLAB_ERROR(SingularCayley);
INCLAB_ERROR(EmptyDirections);
INCLAB_ERROR(BadRank);
INCLAB_ERROR(PartitionNotAchieved);
INCLAB_ERROR(UnsupportedDimension);
INCLAB_ERROR(BudgetExceeded);
INCLAB_ERROR(DegenerateInput);
INCLAB_ERROR(ParseError);

#undef INCLAB_ERROR

} // namespace inclab
