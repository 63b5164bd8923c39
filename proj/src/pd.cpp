#include "normalign/pd.hpp"

#include "normalign/error.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <sstream>

namespace normalign::pd
{

Payoffs standard_payoffs()
{
    Payoffs p;
    p[ 0 ][ 0 ] = { 6, 6 };
    p[ 0 ][ 1 ] = { 0, 9 };
    p[ 1 ][ 0 ] = { 9, 0 };
    p[ 1 ][ 1 ] = { 3, 3 };
    return p;
}

namespace
{

std::size_t action_index( const std::string& label )
{
    return label == "c" ? 0 : 1;
}

void check_actions( const char* agent, const std::vector<std::string>& actions )
{
    if ( actions.empty() )
        throw InvalidActionSet( std::string( agent ) + " has no actions" );
    std::set<std::string> seen;
    for ( const auto& a : actions )
    {
        if ( a != "c" && a != "d" )
            throw InvalidActionSet( std::string( agent ) + ": unknown action '" + a + "' (expected c or d)" );
        if ( !seen.insert( a ).second )
            throw InvalidActionSet( std::string( agent ) + ": action '" + a + "' listed twice" );
    }
}

} // namespace

World build_pd( const Payoffs& payoffs, std::vector<std::string> alpha, std::vector<std::string> beta )
{
    check_actions( "alpha", alpha );
    check_actions( "beta", beta );

    EffectTable effects;
    for ( const auto& a : alpha )
        for ( const auto& b : beta )
        {
            const auto& gain = payoffs[ action_index( a ) ][ action_index( b ) ];
            effects[ { a, b } ] = { gain[ 0 ], gain[ 1 ] };
        }
    StateProps start( { { "x", Rational( 0 ) }, { "y", Rational( 0 ) } } );
    return World( { { "alpha", std::move( alpha ) }, { "beta", std::move( beta ) } }, std::move( start ),
                  std::move( effects ) );
}

std::vector<Norm> pd_norms()
{
    return {
        Norm::identity( "n0" ),
        Norm::table( "n1", { { 0, 0 }, { 3, 0 }, { 6, 3 }, { 9, 5 } } ),
        Norm::rule( "n2", []( const Rational& g ) { return Rational( g / 3 ); } ),
    };
}

std::vector<PreferenceFunction> pd_preferences()
{
    std::vector<PreferenceFunction> prefs;
    for ( const auto& name : builtin_preferences() )
        prefs.push_back( builtin( name ).with_owner( "alpha" ) );
    return prefs;
}

std::string Ordering::to_string() const
{
    std::string out;
    for ( std::size_t i = 0; i < names.size(); ++i )
    {
        if ( i )
            out += std::string( " " ) + relations[ i - 1 ] + " ";
        out += names[ i ];
    }
    return out;
}

std::vector<std::vector<std::string>> chain_groups( std::string_view chain )
{
    std::vector<std::vector<std::string>> groups( 1 );
    std::istringstream in{ std::string( chain ) };
    std::string token;
    while ( in >> token )
    {
        if ( token == ">" )
            groups.emplace_back();
        else if ( token != "~" )
            groups.back().push_back( token );
    }
    for ( auto& g : groups )
        std::sort( g.begin(), g.end() );
    return groups;
}

bool Ordering::matches( std::string_view chain ) const
{
    return chain_groups( to_string() ) == chain_groups( chain );
}

Ordering classify( std::vector<Scored> scores, const Rational& epsilon )
{
    std::sort( scores.begin(), scores.end(), []( const Scored& a, const Scored& b ) {
        if ( a.score != b.score )
            return a.score > b.score;
        return a.name < b.name;
    } );
    Ordering out;
    for ( std::size_t i = 0; i < scores.size(); ++i )
    {
        if ( i )
        {
            const Rational gap = scores[ i - 1 ].score - scores[ i ].score;
            out.relations.push_back( gap <= epsilon ? '~' : '>' );
        }
        out.names.push_back( scores[ i ].name );
    }
    return out;
}

std::string OrderingRow::ordering() const
{
    std::string out;
    for ( const auto& r : results )
    {
        const std::string chain = r.ordering.to_string();
        if ( out.empty() )
            out = chain;
        else if ( chain_groups( out ) != chain_groups( chain ) )
        {
            out.clear();
            for ( std::size_t i = 0; i < results.size(); ++i )
                out += ( i ? " | " : "" ) + results[ i ].ordering.to_string();
            return out;
        }
    }
    return out;
}

bool OrderingRow::matches() const
{
    return !results.empty()
           && std::all_of( results.begin(), results.end(), []( const PreferenceResult& r ) { return r.matches; } );
}

const std::vector<RowSpec>& table2_rows()
{
    using V = std::vector<std::string>;
    const V c{ "c" }, d{ "d" }, cd{ "c", "d" };
    static const std::vector<RowSpec> rows = {
        { 1, "eq7", c, cd, "n1 > n0 ~ n2", true },   { 2, "eq8", c, cd, "n0 ~ n1 ~ n2", true },
        { 3, "eq9", c, cd, "n0 ~ n1 ~ n2", true },   { 4, "eq10", c, cd, "n0 > n2 > n1", true },
        { 5, "eq7", d, cd, "n1 > n0 ~ n2", true },   { 6, "eq8", d, cd, "n0 ~ n1 ~ n2", true },
        { 7, "eq9", d, cd, "n0 ~ n1 ~ n2", true },   { 8, "eq10", d, cd, "n0 ~ n1 ~> n2", false },
        { 9, "eq7", cd, c, "n1 > n0 ~ n2", true },   { 10, "eq8", cd, c, "n0 ~ n1 ~ n2", true },
        { 11, "eq9", cd, c, "n0 ~ n1 ~ n2", true },  { 12, "eq10", cd, c, "n0 ~ n1 ~ n2", true },
        { 13, "eq7", cd, d, "n1 > n0 ~ n2", true },  { 14, "eq8", cd, d, "n1 > n0 ~ n2", true },
        { 15, "eq9", cd, d, "n1 > n0 ~ n2", true },  { 16, "eq10", cd, d, "n0 ~ n1 > n2", true },
        { 17, "", cd, cd, "n0 ~ n1 ~ n2", true },
    };
    return rows;
}

Setup default_setup()
{
    return { build_pd(), pd_norms(), pd_preferences() };
}

std::vector<OrderingRow> table2( const Setup& setup, const SamplingParams& params, const Rational& epsilon )
{
    std::vector<Norm> norms;
    for ( const char* name : { "n0", "n1", "n2" } )
    {
        const auto it = std::find_if( setup.norms.begin(), setup.norms.end(),
                                      [ & ]( const Norm& n ) { return n.name() == name; } );
        if ( it == setup.norms.end() )
            throw UnknownNorm( std::string( "table2 needs norm " ) + name );
        norms.push_back( *it );
    }
    std::vector<PreferenceFunction> prefs;
    for ( const auto& name : builtin_preferences() )
    {
        const auto it = std::find_if( setup.prefs.begin(), setup.prefs.end(),
                                      [ & ]( const PreferenceFunction& p ) { return p.id() == name; } );
        if ( it == setup.prefs.end() )
            throw UnknownPreference( "table2 needs preference " + name );
        prefs.push_back( *it );
    }

    // reports[(alpha, beta)][norm][pref]
    std::map<std::pair<std::vector<std::string>, std::vector<std::string>>, std::vector<std::vector<AlignmentReport>>>
        cache;

    std::vector<OrderingRow> out;
    for ( const auto& spec : table2_rows() )
    {
        auto key = std::make_pair( spec.alpha, spec.beta );
        auto it = cache.find( key );
        if ( it == cache.end() )
        {
            const World base = setup.base.with_actions( "alpha", spec.alpha ).with_actions( "beta", spec.beta );
            std::vector<std::vector<AlignmentReport>> per_norm;
            for ( const auto& norm : norms )
                per_norm.push_back( align_multi( base, norm, prefs, base.initial(), params ) );
            it = cache.emplace( std::move( key ), std::move( per_norm ) ).first;
        }

        OrderingRow row{ spec.index, spec.alpha, spec.beta, {}, spec.expected, spec.verifiable };
        for ( std::size_t p = 0; p < prefs.size(); ++p )
        {
            if ( !spec.preference.empty() && prefs[ p ].id() != spec.preference )
                continue;
            PreferenceResult result{ prefs[ p ].id(), {}, {}, false };
            std::vector<Scored> scores;
            for ( std::size_t n = 0; n < norms.size(); ++n )
            {
                result.reports.push_back( it->second[ n ][ p ] );
                scores.push_back( { norms[ n ].name(), it->second[ n ][ p ].score } );
            }
            result.ordering = classify( std::move( scores ), epsilon );
            result.matches = spec.verifiable && result.ordering.matches( spec.expected );
            row.results.push_back( std::move( result ) );
        }
        out.push_back( std::move( row ) );
    }
    return out;
}

std::vector<OrderingRow> table2( const SamplingParams& params, const Rational& epsilon )
{
    return table2( default_setup(), params, epsilon );
}

} // namespace normalign::pd
