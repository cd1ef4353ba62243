#include "pu/error.hpp"

namespace pu {

const char* error_code_name(ErrorCode code) {
    switch (code) {
        case ErrorCode::MalformedRow: return "MalformedRow";
        case ErrorCode::DuplicateId: return "DuplicateId";
        case ErrorCode::UnknownLabelToken: return "UnknownLabelToken";
        case ErrorCode::EmptyDataset: return "EmptyDataset";
        case ErrorCode::SubsetOutOfRange: return "SubsetOutOfRange";
        case ErrorCode::KTooLarge: return "KTooLarge";
        case ErrorCode::EmptyU: return "EmptyU";
        case ErrorCode::ModelWithoutImportances: return "ModelWithoutImportances";
        case ErrorCode::SingleClassInput: return "SingleClassInput";
        case ErrorCode::NonPositiveLearningRate: return "NonPositiveLearningRate";
        case ErrorCode::DimensionMismatch: return "DimensionMismatch";
        case ErrorCode::TooFewEntities: return "TooFewEntities";
        case ErrorCode::TooFewPositives: return "TooFewPositives";
        case ErrorCode::SingleClassScores: return "SingleClassScores";
        case ErrorCode::GridEmpty: return "GridEmpty";
        case ErrorCode::MismatchedShapes: return "MismatchedShapes";
        case ErrorCode::MismatchedLength: return "MismatchedLength";
        case ErrorCode::InvalidConfig: return "InvalidConfig";
        case ErrorCode::TopNZero: return "TopNZero";
        case ErrorCode::IoError: return "IoError";
        case ErrorCode::UsageError: return "UsageError";
    }
    return "UnknownError";
}

} // namespace pu
