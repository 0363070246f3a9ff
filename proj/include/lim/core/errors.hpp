#pragma once
#include <stdexcept>
#include <string>

namespace lim {

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

#define LIM_ERROR(Name)                                  \
    struct Name : Error {                                \
        explicit Name(const std::string& m) : Error(m) {} \
    }

LIM_ERROR(AllZero);
LIM_ERROR(NonFinite);
LIM_ERROR(NonFiniteDensity);
LIM_ERROR(ZeroSlice);
LIM_ERROR(KernelTagMismatch);
LIM_ERROR(BadLambda);
LIM_ERROR(SpaceTooLarge);
LIM_ERROR(NotStochastic);
LIM_ERROR(SingularSystem);
LIM_ERROR(Unreachable);
LIM_ERROR(NoConvergence);
LIM_ERROR(DimensionMismatch);
LIM_ERROR(Timeout);
LIM_ERROR(DuplicatePoints);
LIM_ERROR(TooFewReplicates);
LIM_ERROR(InvalidArgument);

#undef LIM_ERROR

} // namespace lim
