#pragma once

#include "normalign/rational.hpp"

#include <map>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace normalign::dsl
{

/// 1-based position in the scenario source.
struct SourcePos
{
    std::size_t line = 1;
    std::size_t column = 1;
};

enum class Function
{
    abs,
    max,
    min,
    ratio, // safe division: ratio(a, 0) == 0
};

std::string_view to_string( Function fn );
std::optional<Function> function_named( std::string_view name );

struct Expr;
using ExprPtr = std::shared_ptr<const Expr>;

struct Expr
{
    struct Number
    {
        Rational value;
    };
    struct Variable
    {
        std::string name;
        bool primed = false;
    };
    struct Negate
    {
        ExprPtr operand;
    };
    struct Binary
    {
        char op; // one of + - * /
        ExprPtr lhs;
        ExprPtr rhs;
    };
    struct Call
    {
        Function fn;
        std::vector<ExprPtr> args;
    };

    std::variant<Number, Variable, Negate, Binary, Call> node;
    SourcePos pos;
};

ExprPtr make_number( Rational value, SourcePos pos = {} );
ExprPtr make_variable( std::string name, bool primed = false, SourcePos pos = {} );
ExprPtr make_negate( ExprPtr operand, SourcePos pos = {} );
ExprPtr make_binary( char op, ExprPtr lhs, ExprPtr rhs, SourcePos pos = {} );
ExprPtr make_call( Function fn, std::vector<ExprPtr> args, SourcePos pos = {} );

/// Structural equality; positions are ignored.
bool operator==( const Expr& a, const Expr& b );

/// Source text that parses back to a structurally equal expression, with the
/// minimum parentheses.
std::string to_source( const Expr& e );

/// Variable bindings for evaluation. Unprimed names refer to the earlier
/// state, primed names to the later one.
class Env
{
public:
    virtual ~Env() = default;
    [[nodiscard]] virtual std::optional<Rational> lookup( std::string_view name, bool primed ) const = 0;
};

class MapEnv final : public Env
{
public:
    MapEnv& bind( std::string name, Rational value, bool primed = false );
    [[nodiscard]] std::optional<Rational> lookup( std::string_view name, bool primed ) const override;

private:
    std::map<std::pair<std::string, bool>, Rational, std::less<>> values_;
};

/// Exact evaluation. `ratio(a, 0)` is 0; `/` by zero throws DivisionByZero;
/// a missing binding throws UnboundVariable.
Rational eval_expr( const Expr& e, const Env& env );

/// Every variable reference in `e`, in source order.
std::vector<const Expr*> variable_refs( const Expr& e );

} // namespace normalign::dsl
