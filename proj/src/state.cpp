#include "normalign/state.hpp"

#include "normalign/error.hpp"

#include <algorithm>

namespace normalign
{

StateProps::StateProps( std::vector<std::pair<std::string, Rational>> vars )
{
    std::vector<std::string> names;
    names.reserve( vars.size() );
    values_.reserve( vars.size() );
    for ( auto& [ name, value ] : vars )
    {
        if ( name.empty() )
            throw InvalidWorld( "state variable with empty name" );
        if ( std::find( names.begin(), names.end(), name ) != names.end() )
            throw InvalidWorld( "duplicate state variable '" + name + "'" );
        names.push_back( std::move( name ) );
        values_.push_back( std::move( value ) );
    }
    names_ = std::make_shared<const std::vector<std::string>>( std::move( names ) );
}

std::vector<std::string> StateProps::names() const
{
    return *names_;
}

std::optional<std::size_t> StateProps::index_of( std::string_view name ) const
{
    for ( std::size_t i = 0; i < names_->size(); ++i )
        if ( ( *names_ )[ i ] == name )
            return i;
    return std::nullopt;
}

const Rational* StateProps::find( std::string_view name ) const
{
    const auto i = index_of( name );
    return i ? &values_[ *i ] : nullptr;
}

const Rational& StateProps::at( std::string_view name ) const
{
    if ( const auto* v = find( name ) )
        return *v;
    throw MissingVariable( "state " + to_string() + " has no variable '" + std::string( name ) + "'" );
}

StateProps StateProps::with_values( std::vector<Rational> values ) const
{
    if ( values.size() != values_.size() )
        throw InvalidWorld( "state value count mismatch" );
    StateProps out;
    out.names_ = names_;
    out.values_ = std::move( values );
    return out;
}

bool StateProps::same_schema( const StateProps& other ) const
{
    return names_ == other.names_ || *names_ == *other.names_;
}

std::string StateProps::to_string() const
{
    std::string out = "(";
    for ( std::size_t i = 0; i < values_.size(); ++i )
    {
        if ( i )
            out += ", ";
        out += ( *names_ )[ i ] + "=" + format_exact( values_[ i ] );
    }
    return out + ")";
}

bool operator==( const StateProps& a, const StateProps& b )
{
    return a.values_ == b.values_ && a.same_schema( b );
}

} // namespace normalign
