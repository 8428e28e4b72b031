#include "grad/error.hpp"

namespace grad {

std::string_view to_string(ErrorCode code)
{
    switch (code) {
    case ErrorCode::EmptyLabel: return "EmptyLabel";
    case ErrorCode::EmptyIdentifier: return "EmptyIdentifier";
    case ErrorCode::DuplicateIdentity: return "DuplicateIdentity";
    case ErrorCode::UnknownNode: return "UnknownNode";
    case ErrorCode::UnknownEdge: return "UnknownEdge";
    case ErrorCode::DuplicateParentEdge: return "DuplicateParentEdge";
    case ErrorCode::DuplicateEdgeLabelPair: return "DuplicateEdgeLabelPair";
    case ErrorCode::CompositeContextValue: return "CompositeContextValue";
    case ErrorCode::CompositionCycle: return "CompositionCycle";
    case ErrorCode::UnsupportedElement: return "UnsupportedElement";
    case ErrorCode::IncomparableTypes: return "IncomparableTypes";
    case ErrorCode::InvalidPattern: return "InvalidPattern";
    case ErrorCode::CapExceeded: return "CapExceeded";
    case ErrorCode::TooManyMatches: return "TooManyMatches";
    case ErrorCode::UnboundTemplateVariable: return "UnboundTemplateVariable";
    case ErrorCode::TemplateNotGradCompliant: return "TemplateNotGradCompliant";
    case ErrorCode::ConflictingIdentifiers: return "ConflictingIdentifiers";
    case ErrorCode::ConflictingParentEdges: return "ConflictingParentEdges";
    case ErrorCode::InvalidMultiplicity: return "InvalidMultiplicity";
    case ErrorCode::InvalidAssertion: return "InvalidAssertion";
    case ErrorCode::InvalidJoinPredicate: return "InvalidJoinPredicate";
    case ErrorCode::ParseError: return "ParseError";
    case ErrorCode::UnsupportedVersion: return "UnsupportedVersion";
    case ErrorCode::SinkError: return "SinkError";
    case ErrorCode::MappingError: return "MappingError";
    case ErrorCode::TypeCoercionError: return "TypeCoercionError";
    case ErrorCode::StructuralViolation: return "StructuralViolation";
    }
    return "Unknown";
}

GradError::GradError(ErrorCode code, const std::string& message, std::size_t line)
    : std::runtime_error(std::string(to_string(code)) + ": " + message), code_(code), line_(line)
{
}

}  // namespace grad
