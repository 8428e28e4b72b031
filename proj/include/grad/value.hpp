#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <variant>
#include <vector>

namespace grad {

/// Typed scalar or composite datum stored in identifiers, literal nodes and
/// edge attributes.
class Value {
public:
    using Composite = std::vector<Value>;

    enum class Type { Boolean, Integer, Decimal, Text, Composite };

    Value() : data_(std::string{}) {}
    Value(bool b) : data_(b) {}
    Value(int i) : data_(static_cast<std::int64_t>(i)) {}
    Value(std::int64_t i) : data_(i) {}
    Value(double d) : data_(d) {}
    Value(std::string s) : data_(std::move(s)) {}
    Value(const char* s) : data_(std::string(s)) {}
    /// Throws GradError(EmptyIdentifier) for an empty element list.
    static Value composite(Composite elements);

    Type type() const noexcept { return static_cast<Type>(data_.index()); }
    bool is_numeric() const noexcept { return type() == Type::Integer || type() == Type::Decimal; }
    bool is_scalar() const noexcept { return type() != Type::Composite; }

    bool as_bool() const { return std::get<bool>(data_); }
    std::int64_t as_int() const { return std::get<std::int64_t>(data_); }
    double as_double() const { return std::get<double>(data_); }
    /// Integer widened to decimal; throws on non-numeric.
    double as_number() const;
    const std::string& as_string() const { return std::get<std::string>(data_); }
    const Composite& as_composite() const { return std::get<Composite>(data_); }

    /// Human-readable rendering without type tags.
    std::string to_display() const;

    /// Structural total order: type first, then payload. Used for identity
    /// keys and canonical ordering, not for pattern predicates.
    friend int compare(const Value& a, const Value& b);
    friend bool operator==(const Value& a, const Value& b) { return compare(a, b) == 0; }
    friend bool operator!=(const Value& a, const Value& b) { return compare(a, b) != 0; }
    friend bool operator<(const Value& a, const Value& b) { return compare(a, b) < 0; }

private:
    std::variant<bool, std::int64_t, double, std::string, Composite> data_;
};

/// Named values: entity identifiers, edge attributes, literal-edge context.
using Properties = std::map<std::string, Value>;

int compare(const Properties& a, const Properties& b);

enum class CompareOp { Less, LessEqual, Equal, GreaterEqual, Greater, NotEqual };

const char* to_symbol(CompareOp op);

/// Predicate comparison. Numbers compare numerically, text by code point,
/// booleans and composites only under = and !=. Across types = is false and
/// != is true; ordering across types throws GradError(IncomparableTypes).
bool compare_values(const Value& a, CompareOp op, const Value& b);

}  // namespace grad
