#pragma once

#include <stdexcept>
#include <string>

namespace levy_emm {

/// Broad class of a failure; the command-line front end maps it to an exit code.
enum class ErrorCategory { Validation, Numerical };

class LevyError : public std::runtime_error {
public:
    LevyError(std::string name, ErrorCategory category, const std::string& what)
        : std::runtime_error(what), name_(std::move(name)), category_(category) {}

    const std::string& name() const noexcept { return name_; }
    ErrorCategory category() const noexcept { return category_; }

private:
    std::string name_;
    ErrorCategory category_;
};

#define LEVY_EMM_DEFINE_ERROR(Name, Category)                                                      \
    class Name : public LevyError {                                                                \
    public:                                                                                        \
        explicit Name(const std::string& what) : LevyError(#Name, ErrorCategory::Category, what) {} \
    }

LEVY_EMM_DEFINE_ERROR(InvalidArgument, Validation);
LEVY_EMM_DEFINE_ERROR(NegativeVariance, Validation);
LEVY_EMM_DEFINE_ERROR(NonIntegrableLevyMeasure, Validation);
LEVY_EMM_DEFINE_ERROR(JumpBelowMinusOne, Validation);
LEVY_EMM_DEFINE_ERROR(PenaltyViolation, Validation);
LEVY_EMM_DEFINE_ERROR(UnsupportedMeasure, Validation);
LEVY_EMM_DEFINE_ERROR(MissingJumpRecords, Validation);
LEVY_EMM_DEFINE_ERROR(KappaOutsideI, Validation);
LEVY_EMM_DEFINE_ERROR(ArbitrageMarket, Numerical);
LEVY_EMM_DEFINE_ERROR(QuadratureFailure, Numerical);
LEVY_EMM_DEFINE_ERROR(PsiUndefined, Numerical);
LEVY_EMM_DEFINE_ERROR(NoFiniteMinimizer, Numerical);
LEVY_EMM_DEFINE_ERROR(DegenerateWeights, Numerical);

#undef LEVY_EMM_DEFINE_ERROR

} // namespace levy_emm
