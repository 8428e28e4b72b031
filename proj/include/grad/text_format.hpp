#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "grad/algebra.hpp"
#include "grad/constraints.hpp"
#include "grad/pattern.hpp"

namespace grad {

// Line-oriented text formats for patterns, templates, constraints and join
// predicates. Tokens are separated by blanks; "double quotes" group blanks
// (\" and \\ escape inside them); `#` starts a comment. Typed constants use
// the grad/1 value tags (i:1 f:7 s:Audience b:true c:[...]). The full
// grammar is in docs/formats.md. Errors are ParseError with a line number.

/// Splits one line into tokens; also used by the ETL mapping reader.
std::vector<std::string> tokenize(std::string_view line, std::size_t line_number = 0);
/// Inverse of tokenize for one token.
std::string quote_token(const std::string& token);

/// nodes
///   m entity label = MOVIE
///   v literal value > f:7
/// edges
///   m r attribute
///   r v literal attr.Type = s:Audience
///   m a entity:Association label = ACTS attr.ranking = i:1 as acts
GraphPattern parse_pattern(std::string_view text);
std::string write_pattern(const GraphPattern& p);

/// entities
///   x1 ACTOR ActorName=${a1.ActorName}
/// attributes
///   r x1 Rating
/// literals
///   r ${v} Type=${e.Type}
/// edges
///   x1 x2 Association Co-Acts symmetric
GraphTemplate parse_template(std::string_view text);
std::string write_template(const GraphTemplate& t);

struct ConstraintSet {
    std::vector<Assertion> assertions;
    std::vector<Multiplicity> multiplicities;
};

/// assert NAME PATTERN_FILE ANCHOR...
/// MOVIE ACTS ACTOR [1..*, *] [kind=Association]
///
/// Pattern paths are resolved against `base_dir`.
ConstraintSet parse_constraints(std::string_view text, const std::filesystem::path& base_dir);

/// merge MOVIE IMDB_ID
JoinPredicate parse_join_predicate(std::string_view text);
std::string write_join_predicate(const JoinPredicate& pr);

/// `[1..*]`, `[*]`, `[2]`, `[0..3]`; brackets optional.
CountRange parse_count_range(std::string_view text);

/// Reads a whole file; throws ParseError naming the path when unreadable.
std::string read_file(const std::filesystem::path& path);

}  // namespace grad
