#include "normalign/preference.hpp"

#include "normalign/error.hpp"

#include <algorithm>
#include <map>
#include <mutex>

namespace normalign
{

Rational safe_ratio( const Rational& numerator, const Rational& denominator )
{
    if ( denominator == 0 )
        return Rational( 0 );
    return numerator / denominator;
}

PreferenceFunction::PreferenceFunction( std::string id, Evaluator evaluator, std::string value, std::optional<std::string> owner )
        : id_{ std::move( id ) }, value_{ std::move( value ) }, owner_{ std::move( owner ) }, evaluator_{ std::move( evaluator ) }
{
    if ( value_.empty() )
        value_ = id_;
}

PreferenceFunction PreferenceFunction::with_owner( std::string owner ) const
{
    auto out = *this;
    out.owner_ = std::move( owner );
    return out;
}

PreferenceFunction PreferenceFunction::with_value( std::string value ) const
{
    auto out = *this;
    out.value_ = std::move( value );
    return out;
}

PreferenceFunction PreferenceFunction::with_id( std::string id ) const
{
    auto out = *this;
    out.id_ = std::move( id );
    return out;
}

Rational eval_pref( const PreferenceFunction& pf, const StateProps& before, const StateProps& after )
{
    Rational score = pf.raw( before, after );
    if ( score < -1 || score > 1 )
        throw RangeViolation( "preference '" + pf.id() + "' scored " + format_exact( score ) + " on " + before.to_string()
                              + " -> " + after.to_string() + ", outside [-1, 1]" );
    return score;
}

// ---------------------------------------------------------------------------
// Equality preferences over accumulated gains (x own, y other; primes mark the
// later state).

namespace
{

Rational abs_of( const Rational& v )
{
    return v < 0 ? Rational( -v ) : v;
}

const Rational& max_of( const Rational& a, const Rational& b )
{
    return a < b ? b : a;
}

Rational inequality( const Rational& x, const Rational& y )
{
    return safe_ratio( abs_of( x - y ), max_of( x, y ) );
}

Rational relative_gain( const Rational& before, const Rational& after )
{
    return safe_ratio( after - before, max_of( after, before ) );
}

struct Alias
{
    std::string_view alias;
    std::string_view name;
};

constexpr Alias kAliases[] = {
    { "eq7", "eq7" },
    { "eq8", "eq8" },
    { "eq9", "eq9" },
    { "eq10", "eq10" },
    { "equality-strict", "eq7" },
    { "equality-own-gain", "eq8" },
    { "gain-equality-guard", "eq9" },
    { "selfish", "eq10" },
};

} // namespace

std::string canonical_builtin( std::string_view name )
{
    for ( const auto& a : kAliases )
        if ( a.alias == name )
            return std::string( a.name );
    throw UnknownPreference( "unknown preference '" + std::string( name ) + "'" );
}

std::vector<std::string> builtin_preferences()
{
    return { "eq7", "eq8", "eq9", "eq10" };
}

PreferenceFunction builtin( std::string_view name, std::string own, std::string other )
{
    const std::string canonical = canonical_builtin( name );

    PreferenceFunction::Evaluator evaluator;
    if ( canonical == "eq7" )
        evaluator = [ = ]( const StateProps& s, const StateProps& t ) {
            return Rational( inequality( s.at( own ), s.at( other ) ) - inequality( t.at( own ), t.at( other ) ) );
        };
    else if ( canonical == "eq8" )
        evaluator = [ = ]( const StateProps& s, const StateProps& t ) {
            const Rational equality = 1 - inequality( t.at( other ), t.at( own ) );
            return Rational( equality * relative_gain( s.at( own ), t.at( own ) ) );
        };
    else if ( canonical == "eq9" )
        evaluator = [ = ]( const StateProps& s, const StateProps& t ) {
            const Rational& x = s.at( own );
            const Rational& xn = t.at( own );
            const Rational& y = s.at( other );
            const Rational& yn = t.at( other );
            return Rational( safe_ratio( xn - x, 2 * max_of( xn, x ) ) - safe_ratio( yn - y, 2 * max_of( yn, y ) ) );
        };
    else
        evaluator = [ = ]( const StateProps& s, const StateProps& t ) { return relative_gain( s.at( own ), t.at( own ) ); };

    return PreferenceFunction( canonical, std::move( evaluator ), "equality" );
}

// ---------------------------------------------------------------------------
// Property-based preferences

Rational SatisfactionFunction::operator()( const StateProps& state ) const
{
    Rational degree = evaluator_( state );
    if ( degree < 0 || degree > 1 )
        throw RangeViolation( "satisfaction degree " + format_exact( degree ) + " at " + state.to_string()
                              + " is outside [0, 1]" );
    return degree;
}

namespace
{

struct CombinerRegistry
{
    std::mutex mutex;
    std::map<std::string, Combiner, std::less<>> combiners{
        { "difference", []( const Rational& before, const Rational& after ) { return Rational( after - before ); } },
        { "improvement",
          []( const Rational& before, const Rational& after ) {
              return after > before ? Rational( after - before ) : Rational( 0 );
          } },
    };
};

CombinerRegistry& combiner_registry()
{
    static CombinerRegistry registry;
    return registry;
}

} // namespace

void register_combiner( std::string name, Combiner combiner )
{
    auto& registry = combiner_registry();
    std::lock_guard lock( registry.mutex );
    registry.combiners[ std::move( name ) ] = std::move( combiner );
}

std::vector<std::string> combiner_names()
{
    auto& registry = combiner_registry();
    std::lock_guard lock( registry.mutex );
    std::vector<std::string> names;
    for ( const auto& [ name, _ ] : registry.combiners )
        names.push_back( name );
    return names;
}

PreferenceFunction property_based( std::string id, SatisfactionFunction sat, std::string_view combiner )
{
    Combiner combine;
    {
        auto& registry = combiner_registry();
        std::lock_guard lock( registry.mutex );
        const auto it = registry.combiners.find( combiner );
        if ( it == registry.combiners.end() )
            throw UnknownCombiner( "unknown combiner '" + std::string( combiner ) + "'" );
        combine = it->second;
    }
    return PreferenceFunction( std::move( id ), [ sat = std::move( sat ), combine = std::move( combine ) ](
                                                        const StateProps& s, const StateProps& t ) {
        return combine( sat( s ), sat( t ) );
    } );
}

} // namespace normalign
