#include "normalign/optimizer.hpp"

#include "normalign/error.hpp"

#include <algorithm>

namespace normalign
{

namespace
{

void check_count( std::size_t count, const char* what )
{
    if ( count == 0 )
        throw EmptyInput( std::string( "no candidate " ) + what );
    if ( count > kMaxCandidates )
        throw TooManyCandidates( std::to_string( count ) + " candidate " + what + "; at most "
                                 + std::to_string( kMaxCandidates ) + " are searched" );
}

std::vector<std::size_t> subset_indices( std::uint32_t mask, std::size_t count )
{
    std::vector<std::size_t> out;
    for ( std::size_t i = 0; i < count; ++i )
        if ( mask & ( 1u << i ) )
            out.push_back( i );
    return out;
}

std::vector<std::string> member_names( const std::vector<std::size_t>& indices, const std::vector<std::string>& names )
{
    std::vector<std::string> out;
    for ( std::size_t i : indices )
        out.push_back( names[ i ] );
    std::sort( out.begin(), out.end() );
    return out;
}

SearchResult finish( std::vector<Candidate> ranking )
{
    std::stable_sort( ranking.begin(), ranking.end(), []( const Candidate& a, const Candidate& b ) {
        if ( a.score != b.score )
            return a.score > b.score;
        return a.members < b.members;
    } );
    SearchResult result{ ranking.front().members, ranking.front().score, {} };
    result.ranking = std::move( ranking );
    return result;
}

} // namespace

Norm compose_norms( std::span<const Norm> norms )
{
    if ( norms.empty() )
        throw EmptyInput( "cannot compose an empty set of norms" );
    std::string name;
    for ( const auto& n : norms )
        name += ( name.empty() ? "" : "+" ) + n.name();
    std::vector<Norm> parts( norms.begin(), norms.end() );
    return Norm::rule( name, [ parts ]( const Rational& gain ) {
        Rational net = gain;
        for ( const auto& n : parts )
            net = n.rewrite( net );
        return Rational( gain - net );
    } );
}

SearchResult best_norm_subset( std::span<const Norm> candidates, const PreferenceMatrix& prefs, const World& base,
                               const StateProps& start, const SamplingParams& params,
                               const SetAggregators& aggregators, SubsetSemantics semantics )
{
    check_count( candidates.size(), "norms" );
    const std::uint32_t subsets = 1u << candidates.size();
    std::vector<std::string> names;
    for ( const auto& n : candidates )
        names.push_back( n.name() );

    std::vector<Candidate> ranking;
    if ( semantics == SubsetSemantics::mean )
    {
        const AlignmentCube cube = alignment_cube( candidates, prefs, base, start, params );
        for ( std::uint32_t mask = 1; mask < subsets; ++mask )
        {
            const auto indices = subset_indices( mask, candidates.size() );
            ranking.push_back( { member_names( indices, names ), reduce_cube( cube, aggregators, indices ) } );
        }
    }
    else
    {
        for ( std::uint32_t mask = 1; mask < subsets; ++mask )
        {
            const auto indices = subset_indices( mask, candidates.size() );
            std::vector<Norm> chosen;
            for ( std::size_t i : indices )
                chosen.push_back( candidates[ i ] );
            const Norm composed = compose_norms( chosen );
            const AlignmentCube cube = alignment_cube( std::span( &composed, 1 ), prefs, base, start, params );
            ranking.push_back( { member_names( indices, names ), reduce_cube( cube, aggregators ) } );
        }
    }
    return finish( std::move( ranking ) );
}

SearchResult best_agent_subset( const PreferenceMatrix& prefs, std::span<const Norm> norms, const World& base,
                                const StateProps& start, const SamplingParams& params,
                                const SetAggregators& aggregators )
{
    const auto& agents = prefs.agents();
    check_count( agents.size(), "agents" );
    const AlignmentCube cube = alignment_cube( norms, prefs, base, start, params );

    std::vector<Candidate> ranking;
    for ( std::uint32_t mask = 1; mask < ( 1u << agents.size() ); ++mask )
    {
        const auto indices = subset_indices( mask, agents.size() );
        ranking.push_back( { member_names( indices, agents ), reduce_cube( cube, aggregators, {}, indices ) } );
    }
    return finish( std::move( ranking ) );
}

SearchResult best_aggregator( std::span<const Aggregator> family, std::span<const Norm> norms,
                              const PreferenceMatrix& prefs, const World& base, const StateProps& start,
                              const SamplingParams& params, const SetAggregators& aggregators )
{
    if ( family.empty() )
        throw EmptyFamily( "the aggregator family is empty" );
    const AlignmentCube cube = alignment_cube( norms, prefs, base, start, params );

    std::vector<Candidate> ranking;
    for ( const auto& f : family )
    {
        SetAggregators trial = aggregators;
        trial.f = f;
        ranking.push_back( { { f.name() }, reduce_cube( cube, trial ) } );
    }
    return finish( std::move( ranking ) );
}

} // namespace normalign
