#include "normalign/dsl/expr.hpp"

#include "normalign/error.hpp"
#include "normalign/preference.hpp"

#include <algorithm>

namespace normalign::dsl
{

std::string_view to_string( Function fn )
{
    switch ( fn )
    {
    case Function::abs:
        return "abs";
    case Function::max:
        return "max";
    case Function::min:
        return "min";
    case Function::ratio:
        return "ratio";
    }
    return "?";
}

std::optional<Function> function_named( std::string_view name )
{
    for ( const auto fn : { Function::abs, Function::max, Function::min, Function::ratio } )
        if ( to_string( fn ) == name )
            return fn;
    return std::nullopt;
}

ExprPtr make_number( Rational value, SourcePos pos )
{
    return std::make_shared<const Expr>( Expr{ Expr::Number{ std::move( value ) }, pos } );
}

ExprPtr make_variable( std::string name, bool primed, SourcePos pos )
{
    return std::make_shared<const Expr>( Expr{ Expr::Variable{ std::move( name ), primed }, pos } );
}

ExprPtr make_negate( ExprPtr operand, SourcePos pos )
{
    return std::make_shared<const Expr>( Expr{ Expr::Negate{ std::move( operand ) }, pos } );
}

ExprPtr make_binary( char op, ExprPtr lhs, ExprPtr rhs, SourcePos pos )
{
    return std::make_shared<const Expr>( Expr{ Expr::Binary{ op, std::move( lhs ), std::move( rhs ) }, pos } );
}

ExprPtr make_call( Function fn, std::vector<ExprPtr> args, SourcePos pos )
{
    return std::make_shared<const Expr>( Expr{ Expr::Call{ fn, std::move( args ) }, pos } );
}

bool operator==( const Expr& a, const Expr& b )
{
    if ( a.node.index() != b.node.index() )
        return false;
    return std::visit(
            [ & ]( const auto& x ) -> bool {
                using T = std::decay_t<decltype( x )>;
                const auto& y = std::get<T>( b.node );
                if constexpr ( std::is_same_v<T, Expr::Number> )
                    return x.value == y.value;
                else if constexpr ( std::is_same_v<T, Expr::Variable> )
                    return x.name == y.name && x.primed == y.primed;
                else if constexpr ( std::is_same_v<T, Expr::Negate> )
                    return *x.operand == *y.operand;
                else if constexpr ( std::is_same_v<T, Expr::Binary> )
                    return x.op == y.op && *x.lhs == *y.lhs && *x.rhs == *y.rhs;
                else
                    return x.fn == y.fn
                           && std::equal( x.args.begin(), x.args.end(), y.args.begin(), y.args.end(),
                                          []( const ExprPtr& l, const ExprPtr& r ) { return *l == *r; } );
            },
            a.node );
}

namespace
{

constexpr int kAdditive = 1;
constexpr int kMultiplicative = 2;
constexpr int kUnary = 3;

int precedence( char op )
{
    return ( op == '+' || op == '-' ) ? kAdditive : kMultiplicative;
}

std::string print( const Expr& e, int context, bool right_operand )
{
    return std::visit(
            [ & ]( const auto& x ) -> std::string {
                using T = std::decay_t<decltype( x )>;
                if constexpr ( std::is_same_v<T, Expr::Number> )
                {
                    std::string text = format_exact( x.value );
                    if ( text.find( '/' ) != std::string::npos )
                        return "(" + text.replace( text.find( '/' ), 1, " / " ) + ")";
                    if ( !text.empty() && text.front() == '-' )
                        return context > kAdditive || right_operand ? "(" + text + ")" : text;
                    return text;
                }
                else if constexpr ( std::is_same_v<T, Expr::Variable> )
                    return x.primed ? x.name + "'" : x.name;
                else if constexpr ( std::is_same_v<T, Expr::Negate> )
                    return "-" + print( *x.operand, kUnary, false );
                else if constexpr ( std::is_same_v<T, Expr::Binary> )
                {
                    const int p = precedence( x.op );
                    std::string text = print( *x.lhs, p, false ) + " " + x.op + " " + print( *x.rhs, p, true );
                    if ( p < context || ( p == context && right_operand ) )
                        return "(" + text + ")";
                    return text;
                }
                else
                {
                    std::string text = std::string( to_string( x.fn ) ) + "(";
                    for ( std::size_t i = 0; i < x.args.size(); ++i )
                    {
                        if ( i )
                            text += ", ";
                        text += print( *x.args[ i ], 0, false );
                    }
                    return text + ")";
                }
            },
            e.node );
}

void collect_refs( const Expr& e, std::vector<const Expr*>& out )
{
    std::visit(
            [ & ]( const auto& x ) {
                using T = std::decay_t<decltype( x )>;
                if constexpr ( std::is_same_v<T, Expr::Variable> )
                    out.push_back( &e );
                else if constexpr ( std::is_same_v<T, Expr::Negate> )
                    collect_refs( *x.operand, out );
                else if constexpr ( std::is_same_v<T, Expr::Binary> )
                {
                    collect_refs( *x.lhs, out );
                    collect_refs( *x.rhs, out );
                }
                else if constexpr ( std::is_same_v<T, Expr::Call> )
                    for ( const auto& arg : x.args )
                        collect_refs( *arg, out );
            },
            e.node );
}

} // namespace

std::string to_source( const Expr& e )
{
    return print( e, 0, false );
}

MapEnv& MapEnv::bind( std::string name, Rational value, bool primed )
{
    values_[ { std::move( name ), primed } ] = std::move( value );
    return *this;
}

std::optional<Rational> MapEnv::lookup( std::string_view name, bool primed ) const
{
    const auto it = values_.find( std::pair<std::string, bool>( name, primed ) );
    if ( it == values_.end() )
        return std::nullopt;
    return it->second;
}

Rational eval_expr( const Expr& e, const Env& env )
{
    return std::visit(
            [ & ]( const auto& x ) -> Rational {
                using T = std::decay_t<decltype( x )>;
                if constexpr ( std::is_same_v<T, Expr::Number> )
                    return x.value;
                else if constexpr ( std::is_same_v<T, Expr::Variable> )
                {
                    if ( auto v = env.lookup( x.name, x.primed ) )
                        return *v;
                    throw UnboundVariable( "unbound variable " + x.name + ( x.primed ? "'" : "" ) );
                }
                else if constexpr ( std::is_same_v<T, Expr::Negate> )
                    return -eval_expr( *x.operand, env );
                else if constexpr ( std::is_same_v<T, Expr::Binary> )
                {
                    const Rational lhs = eval_expr( *x.lhs, env );
                    const Rational rhs = eval_expr( *x.rhs, env );
                    switch ( x.op )
                    {
                    case '+':
                        return lhs + rhs;
                    case '-':
                        return lhs - rhs;
                    case '*':
                        return lhs * rhs;
                    default:
                        if ( rhs == 0 )
                            throw DivisionByZero( "division by zero in '" + to_source( e ) + "'" );
                        return lhs / rhs;
                    }
                }
                else
                {
                    std::vector<Rational> args;
                    args.reserve( x.args.size() );
                    for ( const auto& arg : x.args )
                        args.push_back( eval_expr( *arg, env ) );
                    switch ( x.fn )
                    {
                    case Function::abs:
                        return args.at( 0 ) < 0 ? Rational( -args[ 0 ] ) : args[ 0 ];
                    case Function::max:
                        return *std::max_element( args.begin(), args.end() );
                    case Function::min:
                        return *std::min_element( args.begin(), args.end() );
                    case Function::ratio:
                        return safe_ratio( args.at( 0 ), args.at( 1 ) );
                    }
                    return Rational( 0 );
                }
            },
            e.node );
}

std::vector<const Expr*> variable_refs( const Expr& e )
{
    std::vector<const Expr*> out;
    collect_refs( e, out );
    return out;
}

} // namespace normalign::dsl
