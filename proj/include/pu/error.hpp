#pragma once

#include <stdexcept>
#include <string>

namespace pu {

enum class ErrorCode {
    MalformedRow,
    DuplicateId,
    UnknownLabelToken,
    EmptyDataset,
    SubsetOutOfRange,
    KTooLarge,
    EmptyU,
    ModelWithoutImportances,
    SingleClassInput,
    NonPositiveLearningRate,
    DimensionMismatch,
    TooFewEntities,
    TooFewPositives,
    SingleClassScores,
    GridEmpty,
    MismatchedShapes,
    MismatchedLength,
    InvalidConfig,
    TopNZero,
    IoError,
    UsageError,
};

const char* error_code_name(ErrorCode code);

class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& message)
        : std::runtime_error(std::string(error_code_name(code)) + ": " + message), code_(code) {}

    ErrorCode code() const { return code_; }
    const char* code_name() const { return error_code_name(code_); }

private:
    ErrorCode code_;
};

} // namespace pu
