#include "normalign/aggregation.hpp"

#include "normalign/error.hpp"

#include <algorithm>

namespace normalign
{

Aggregator::Aggregator( std::string name, Reduction reduction, std::size_t arity )
        : name_{ std::move( name ) }, reduction_{ std::move( reduction ) }, arity_{ arity }
{
    const std::size_t probe_size = arity_ == 0 ? 1 : arity_;
    for ( const Rational& c : { Rational( -1 ), make_rational( -1, 2 ), Rational( 0 ), make_rational( 1, 3 ), Rational( 1 ) } )
    {
        const std::vector<Rational> probe( probe_size, c );
        if ( reduction_( probe ) != c )
            throw InvalidAggregator( "aggregator '" + name_ + "' is not idempotent on constant input "
                                     + format_exact( c ) );
    }
}

Rational Aggregator::operator()( std::span<const Rational> scores ) const
{
    if ( scores.empty() )
        throw EmptyInput( "aggregator '" + name_ + "' applied to no scores" );
    if ( arity_ != 0 && scores.size() != arity_ )
        throw InvalidWeights( "aggregator '" + name_ + "' expects " + std::to_string( arity_ ) + " scores, got "
                              + std::to_string( scores.size() ) );
    Rational out = reduction_( scores );
    if ( out < -1 || out > 1 )
        throw RangeViolation( "aggregator '" + name_ + "' produced " + format_exact( out ) + ", outside [-1, 1]" );
    return out;
}

Aggregator Aggregator::mean()
{
    return Aggregator( "mean", []( std::span<const Rational> xs ) {
        Rational sum = 0;
        for ( const auto& x : xs )
            sum += x;
        return Rational( sum / xs.size() );
    } );
}

Aggregator Aggregator::min()
{
    return Aggregator( "min", []( std::span<const Rational> xs ) { return *std::min_element( xs.begin(), xs.end() ); } );
}

Aggregator Aggregator::max()
{
    return Aggregator( "max", []( std::span<const Rational> xs ) { return *std::max_element( xs.begin(), xs.end() ); } );
}

Aggregator Aggregator::median()
{
    return Aggregator( "median", []( std::span<const Rational> xs ) {
        std::vector<Rational> sorted( xs.begin(), xs.end() );
        std::sort( sorted.begin(), sorted.end() );
        const std::size_t mid = sorted.size() / 2;
        if ( sorted.size() % 2 == 1 )
            return sorted[ mid ];
        return Rational( ( sorted[ mid - 1 ] + sorted[ mid ] ) / 2 );
    } );
}

Aggregator Aggregator::weighted_mean( std::vector<Rational> weights )
{
    if ( weights.empty() )
        throw InvalidWeights( "weighted-mean needs at least one weight" );
    Rational total = 0;
    for ( const auto& w : weights )
    {
        if ( w < 0 )
            throw InvalidWeights( "weighted-mean weight " + format_exact( w ) + " is negative" );
        total += w;
    }
    if ( total != 1 )
        throw InvalidWeights( "weighted-mean weights sum to " + format_exact( total ) + ", not 1" );

    const std::size_t arity = weights.size();
    return Aggregator(
            "weighted-mean",
            [ weights = std::move( weights ) ]( std::span<const Rational> xs ) {
                Rational sum = 0;
                for ( std::size_t i = 0; i < xs.size(); ++i )
                    sum += weights[ i ] * xs[ i ];
                return sum;
            },
            arity );
}

Aggregator aggregator( std::string_view name, std::vector<Rational> weights )
{
    if ( name == "mean" )
        return Aggregator::mean();
    if ( name == "min" )
        return Aggregator::min();
    if ( name == "max" )
        return Aggregator::max();
    if ( name == "median" )
        return Aggregator::median();
    if ( name == "weighted-mean" )
        return Aggregator::weighted_mean( std::move( weights ) );
    throw UnknownAggregator( "unknown aggregator '" + std::string( name ) + "'" );
}

std::vector<std::string> aggregator_names()
{
    return { "mean", "weighted-mean", "min", "max", "median" };
}

// ---------------------------------------------------------------------------

ScoreMatrix::ScoreMatrix( std::vector<std::vector<Rational>> rows ) : rows_{ std::move( rows ) }
{
    if ( rows_.empty() || rows_.front().empty() )
        throw EmptyInput( "score matrix needs at least one agent and one value" );
    for ( const auto& row : rows_ )
    {
        if ( row.size() != rows_.front().size() )
            throw InvalidMatrix( "score matrix rows differ in length" );
        for ( const auto& cell : row )
            if ( cell < -1 || cell > 1 )
                throw RangeViolation( "score matrix cell " + format_exact( cell ) + " is outside [-1, 1]" );
    }
}

std::vector<Rational> ScoreMatrix::column( std::size_t value ) const
{
    std::vector<Rational> out;
    out.reserve( rows_.size() );
    for ( const auto& row : rows_ )
        out.push_back( row[ value ] );
    return out;
}

Rational agg_values( std::span<const Rational> row, const Aggregator& p )
{
    return p( row );
}

Rational agg_agents( std::span<const Rational> column, const Aggregator& q )
{
    return q( column );
}

Rational agg_group( const ScoreMatrix& matrix, const Aggregator& p, const Aggregator& q, const Aggregator& f,
                    const Aggregator& g, AggregationOrder order )
{
    std::vector<Rational> partial;
    if ( order == AggregationOrder::values_first )
    {
        for ( std::size_t a = 0; a < matrix.agents(); ++a )
            partial.push_back( agg_values( matrix.row( a ), p ) );
        return f( partial );
    }
    for ( std::size_t v = 0; v < matrix.values(); ++v )
        partial.push_back( agg_agents( matrix.column( v ), q ) );
    return g( partial );
}

Rational coherence_deviation( const ScoreMatrix& matrix, const Aggregator& p, const Aggregator& q, const Aggregator& f,
                              const Aggregator& g )
{
    const Rational a = agg_group( matrix, p, q, f, g, AggregationOrder::values_first );
    const Rational b = agg_group( matrix, p, q, f, g, AggregationOrder::agents_first );
    return a < b ? Rational( b - a ) : Rational( a - b );
}

} // namespace normalign
