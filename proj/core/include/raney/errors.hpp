#pragma once

#include <stdexcept>
#include <string>

namespace raney {

struct MixedFieldError : std::domain_error {
    explicit MixedFieldError(const std::string& m) : std::domain_error(m) {}
};

struct DivisionByZeroError : std::domain_error {
    explicit DivisionByZeroError(const std::string& m) : std::domain_error(m) {}
};

struct NegativeDiscriminantError : std::domain_error {
    explicit NegativeDiscriminantError(const std::string& m) : std::domain_error(m) {}
};

struct EmptyCFError : std::invalid_argument {
    explicit EmptyCFError(const std::string& m) : std::invalid_argument(m) {}
};

struct EmptyPeriodError : std::invalid_argument {
    explicit EmptyPeriodError(const std::string& m) : std::invalid_argument(m) {}
};

struct UnrelatedPeriodsError : std::runtime_error {
    explicit UnrelatedPeriodsError(const std::string& m) : std::runtime_error(m) {}
};

struct NonPositiveDeterminantError : std::invalid_argument {
    explicit NonPositiveDeterminantError(const std::string& m) : std::invalid_argument(m) {}
};

struct CompactionDivergedError : std::runtime_error {
    explicit CompactionDivergedError(const std::string& m) : std::runtime_error(m) {}
};

struct NotPrimeError : std::invalid_argument {
    explicit NotPrimeError(const std::string& m) : std::invalid_argument(m) {}
};

struct EmptyCycleSetError : std::invalid_argument {
    explicit EmptyCycleSetError(const std::string& m) : std::invalid_argument(m) {}
};

struct VerificationFailedError : std::runtime_error {
    explicit VerificationFailedError(const std::string& m) : std::runtime_error(m) {}
};

struct FactorizationTimeout : std::runtime_error {
    explicit FactorizationTimeout(const std::string& m) : std::runtime_error(m) {}
};

struct CheckpointError : std::runtime_error {
    explicit CheckpointError(const std::string& m) : std::runtime_error(m) {}
};

struct ParseError : std::invalid_argument {
    explicit ParseError(const std::string& m) : std::invalid_argument(m) {}
};

}  // namespace raney
