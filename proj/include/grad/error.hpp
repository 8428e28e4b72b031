#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <string_view>

namespace grad {

enum class ErrorCode {
    EmptyLabel,
    EmptyIdentifier,
    DuplicateIdentity,
    UnknownNode,
    UnknownEdge,
    DuplicateParentEdge,
    DuplicateEdgeLabelPair,
    CompositeContextValue,
    CompositionCycle,
    UnsupportedElement,
    IncomparableTypes,
    InvalidPattern,
    CapExceeded,
    TooManyMatches,
    UnboundTemplateVariable,
    TemplateNotGradCompliant,
    ConflictingIdentifiers,
    ConflictingParentEdges,
    InvalidMultiplicity,
    InvalidAssertion,
    InvalidJoinPredicate,
    ParseError,
    UnsupportedVersion,
    SinkError,
    MappingError,
    TypeCoercionError,
    StructuralViolation,
};

std::string_view to_string(ErrorCode code);

/// Error raised by every grad library operation. `line()` is non-zero for
/// errors tied to a position in a text input.
class GradError : public std::runtime_error {
public:
    GradError(ErrorCode code, const std::string& message, std::size_t line = 0);

    ErrorCode code() const noexcept { return code_; }
    std::size_t line() const noexcept { return line_; }

private:
    ErrorCode code_;
    std::size_t line_;
};

}  // namespace grad
