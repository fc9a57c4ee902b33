#ifndef MIXDIAG_ERRORS_HPP
#define MIXDIAG_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace mixdiag {

/// Base class for all library errors.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

#define MIXDIAG_DEFINE_ERROR(NAME)                                 \
    class NAME : public Error {                                    \
    public:                                                        \
        explicit NAME(const std::string& msg) : Error(msg) {}      \
    }

MIXDIAG_DEFINE_ERROR(DimensionMismatch);
MIXDIAG_DEFINE_ERROR(NotPositiveDefinite);
MIXDIAG_DEFINE_ERROR(NotStable);
MIXDIAG_DEFINE_ERROR(NotContractive);
MIXDIAG_DEFINE_ERROR(RankDeficientLoading);
MIXDIAG_DEFINE_ERROR(InfeasibleTargets);
MIXDIAG_DEFINE_ERROR(OutOfRange);
MIXDIAG_DEFINE_ERROR(NoConvergence);
MIXDIAG_DEFINE_ERROR(ConsistencyFailure);
MIXDIAG_DEFINE_ERROR(SingularDeterminant);
MIXDIAG_DEFINE_ERROR(Overflow);
MIXDIAG_DEFINE_ERROR(InsufficientData);
MIXDIAG_DEFINE_ERROR(DegenerateBins);
MIXDIAG_DEFINE_ERROR(DegenerateInput);
MIXDIAG_DEFINE_ERROR(NotMonotone);
MIXDIAG_DEFINE_ERROR(PremiseViolated);
MIXDIAG_DEFINE_ERROR(PreconditionFailed);

#undef MIXDIAG_DEFINE_ERROR

} // namespace mixdiag

#endif
