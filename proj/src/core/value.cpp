#include "grad/value.hpp"

#include <algorithm>
#include <charconv>

#include "grad/error.hpp"

namespace grad {

namespace {

template <typename T>
int three_way(const T& a, const T& b)
{
    if (a < b) return -1;
    if (b < a) return 1;
    return 0;
}

bool ordering_op(CompareOp op) { return op != CompareOp::Equal && op != CompareOp::NotEqual; }

template <typename T>
bool apply(CompareOp op, const T& a, const T& b)
{
    switch (op) {
    case CompareOp::Less: return a < b;
    case CompareOp::LessEqual: return a <= b;
    case CompareOp::Equal: return a == b;
    case CompareOp::GreaterEqual: return a >= b;
    case CompareOp::Greater: return a > b;
    case CompareOp::NotEqual: return a != b;
    }
    return false;
}

}  // namespace

Value Value::composite(Composite elements)
{
    if (elements.empty())
        throw GradError(ErrorCode::EmptyIdentifier, "composite value needs at least one element");
    Value v;
    v.data_ = std::move(elements);
    return v;
}

double Value::as_number() const
{
    if (type() == Type::Integer) return static_cast<double>(as_int());
    if (type() == Type::Decimal) return as_double();
    throw GradError(ErrorCode::IncomparableTypes, "value is not numeric");
}

std::string Value::to_display() const
{
    switch (type()) {
    case Type::Boolean: return as_bool() ? "true" : "false";
    case Type::Integer: return std::to_string(as_int());
    case Type::Decimal: {
        char buf[64];
        auto res = std::to_chars(buf, buf + sizeof buf, as_double());
        return std::string(buf, res.ptr);
    }
    case Type::Text: return as_string();
    case Type::Composite: {
        std::string out = "[";
        for (std::size_t i = 0; i < as_composite().size(); ++i) {
            if (i) out += ",";
            out += as_composite()[i].to_display();
        }
        return out + "]";
    }
    }
    return {};
}

int compare(const Value& a, const Value& b)
{
    if (a.data_.index() != b.data_.index())
        return three_way(a.data_.index(), b.data_.index());
    switch (a.type()) {
    case Value::Type::Boolean: return three_way(a.as_bool(), b.as_bool());
    case Value::Type::Integer: return three_way(a.as_int(), b.as_int());
    case Value::Type::Decimal: return three_way(a.as_double(), b.as_double());
    case Value::Type::Text: return three_way(a.as_string(), b.as_string());
    case Value::Type::Composite: {
        const auto& x = a.as_composite();
        const auto& y = b.as_composite();
        for (std::size_t i = 0; i < std::min(x.size(), y.size()); ++i)
            if (int c = compare(x[i], y[i])) return c;
        return three_way(x.size(), y.size());
    }
    }
    return 0;
}

int compare(const Properties& a, const Properties& b)
{
    auto ia = a.begin();
    auto ib = b.begin();
    for (; ia != a.end() && ib != b.end(); ++ia, ++ib) {
        if (int c = three_way(ia->first, ib->first)) return c;
        if (int c = compare(ia->second, ib->second)) return c;
    }
    return three_way(a.size(), b.size());
}

const char* to_symbol(CompareOp op)
{
    switch (op) {
    case CompareOp::Less: return "<";
    case CompareOp::LessEqual: return "<=";
    case CompareOp::Equal: return "=";
    case CompareOp::GreaterEqual: return ">=";
    case CompareOp::Greater: return ">";
    case CompareOp::NotEqual: return "!=";
    }
    return "?";
}

bool compare_values(const Value& a, CompareOp op, const Value& b)
{
    if (a.is_numeric() && b.is_numeric()) {
        if (a.type() == Value::Type::Integer && b.type() == Value::Type::Integer)
            return apply(op, a.as_int(), b.as_int());
        return apply(op, a.as_number(), b.as_number());
    }
    if (a.type() == Value::Type::Text && b.type() == Value::Type::Text)
        return apply(op, a.as_string(), b.as_string());

    if (ordering_op(op)) {
        throw GradError(ErrorCode::IncomparableTypes,
                        std::string("operator ") + to_symbol(op) + " is undefined for " +
                            a.to_display() + " and " + b.to_display());
    }
    // booleans, composites and mixed types: equality only
    const bool equal = a.type() == b.type() && compare(a, b) == 0;
    return op == CompareOp::Equal ? equal : !equal;
}

}  // namespace grad
