#include "normalign/alignment.hpp"

#include "normalign/error.hpp"
#include "normalign/state_space.hpp"

#include <atomic>
#include <cmath>
#include <exception>
#include <mutex>
#include <numeric>
#include <thread>

namespace normalign
{

std::string_view to_string( Method method )
{
    return method == Method::exhaustive ? "exhaustive" : "monte-carlo";
}

namespace
{

std::uint64_t mix64( std::uint64_t z )
{
    z += 0x9e3779b97f4a7c15ULL;
    z = ( z ^ ( z >> 30 ) ) * 0xbf58476d1ce4e5b9ULL;
    z = ( z ^ ( z >> 27 ) ) * 0x94d049bb133111ebULL;
    return z ^ ( z >> 31 );
}

std::uint64_t fnv1a( std::string_view text )
{
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for ( const unsigned char c : text )
    {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

void check_horizon( std::size_t horizon )
{
    if ( horizon == 0 )
        throw ZeroLength( "alignment horizon must be at least 1" );
}

// Lazily evaluated preference values per transition of one StateSpace.
class TransitionValues
{
public:
    explicit TransitionValues( std::span<const PreferenceFunction> prefs ) : prefs_{ prefs }, exact_( prefs.size() ),
                                                                            approx_( prefs.size() )
    {
    }

    // Makes sure every preference has a value for transition t = (from, joint) -> to.
    void ensure( const StateSpace& space, StateSpace::TransitionId t, StateSpace::StateId from,
                 StateSpace::StateId to )
    {
        if ( t >= known_.size() )
        {
            const auto bound = std::max<std::size_t>( space.transition_bound(), t + 1 );
            known_.resize( bound, 0 );
            for ( std::size_t p = 0; p < prefs_.size(); ++p )
            {
                exact_[ p ].resize( bound );
                approx_[ p ].resize( bound );
            }
        }
        if ( known_[ t ] )
            return;
        for ( std::size_t p = 0; p < prefs_.size(); ++p )
        {
            exact_[ p ][ t ] = eval_pref( prefs_[ p ], space.state( from ), space.state( to ) );
            approx_[ p ][ t ] = to_double( exact_[ p ][ t ] );
        }
        known_[ t ] = 1;
    }

    [[nodiscard]] const Rational& exact( std::size_t p, StateSpace::TransitionId t ) const { return exact_[ p ][ t ]; }
    [[nodiscard]] double approx( std::size_t p, StateSpace::TransitionId t ) const { return approx_[ p ][ t ]; }

private:
    std::span<const PreferenceFunction> prefs_;
    std::vector<std::uint8_t> known_;
    std::vector<std::vector<Rational>> exact_;
    std::vector<std::vector<double>> approx_;
};

AlignmentReport base_report( const World& world, const PreferenceFunction& pref, const StateProps& start,
                             std::size_t horizon, Method method )
{
    AlignmentReport report;
    report.method = method;
    report.horizon = horizon;
    report.norm_id = world.norm_id();
    report.preference_id = pref.id();
    report.initial = start;
    return report;
}

unsigned resolve_threads( unsigned requested )
{
    if ( requested != 0 )
        return requested;
    return std::max( 1U, std::thread::hardware_concurrency() );
}

} // namespace

std::uint64_t stream_seed( std::uint64_t seed, std::string_view key )
{
    return mix64( seed ^ mix64( fnv1a( key ) ) );
}

std::uint64_t path_seed( std::uint64_t stream, std::uint64_t index )
{
    return mix64( stream ^ mix64( index + 0x632be59bd9b4e019ULL ) );
}

// ---------------------------------------------------------------------------

std::vector<AlignmentReport> align_exhaustive_world( const World& normative, std::span<const PreferenceFunction> prefs,
                                                     const StateProps& start, std::size_t horizon, std::uint64_t cap )
{
    check_horizon( horizon );
    normative.require_actions();
    const auto paths = path_count( normative, horizon, cap );
    if ( !paths )
        throw ExplosionCap( "more than " + std::to_string( cap ) + " paths of length " + std::to_string( horizon ) );

    StateSpace space( normative, start );
    TransitionValues values( prefs );
    const std::size_t branching = space.joint_action_count();

    // completions[d] = number of paths sharing any given prefix of length d + 1
    std::vector<std::uint64_t> completions( horizon, 1 );
    for ( std::size_t d = horizon - 1; d-- > 0; )
        completions[ d ] = completions[ d + 1 ] * branching;

    std::vector<Rational> totals( prefs.size(), Rational( 0 ) );

    // Visit every path prefix once; a transition at depth d lies on
    // completions[d] of the enumerated paths.
    auto visit = [ & ]( auto&& self, StateSpace::StateId state, std::size_t depth ) -> void {
        for ( std::size_t j = 0; j < branching; ++j )
        {
            const auto t = space.transition_id( state, j );
            const auto next = space.successor( state, j );
            values.ensure( space, t, state, next );
            for ( std::size_t p = 0; p < prefs.size(); ++p )
                totals[ p ] += values.exact( p, t ) * completions[ depth ];
            if ( depth + 1 < horizon )
                self( self, next, depth + 1 );
        }
    };
    visit( visit, space.start(), 0 );

    const Rational denominator = Rational( Integer( *paths ) * horizon );
    std::vector<AlignmentReport> reports;
    for ( std::size_t p = 0; p < prefs.size(); ++p )
    {
        auto report = base_report( normative, prefs[ p ], start, horizon, Method::exhaustive );
        report.score = totals[ p ] / denominator;
        reports.push_back( std::move( report ) );
    }
    return reports;
}

std::vector<AlignmentReport> align_mc_world( const World& normative, std::span<const PreferenceFunction> prefs,
                                             const StateProps& start, const SamplingParams& params,
                                             std::string_view stream_key )
{
    check_horizon( params.horizon );
    if ( params.samples == 0 )
        throw ZeroSamples( "Monte Carlo alignment needs at least one sampled path" );
    normative.require_actions();

    const std::size_t samples = params.samples;
    const std::size_t horizon = params.horizon;
    const std::size_t pref_count = prefs.size();
    const std::uint64_t stream = stream_seed( params.seed, stream_key );

    constexpr std::size_t kChunk = 1024;
    const std::size_t chunks = ( samples + kChunk - 1 ) / kChunk;
    const unsigned workers = static_cast<unsigned>( std::min<std::size_t>( resolve_threads( params.threads ), chunks ) );

    // Per-path means, indexed [pref][path]; filled by whichever worker owns the
    // path and read back in index order.
    std::vector<double> path_means( pref_count * samples, 0.0 );
    std::vector<Rational> totals( pref_count, Rational( 0 ) );
    std::atomic<std::size_t> next_chunk{ 0 };
    std::mutex merge_mutex;
    std::exception_ptr failure;

    auto work = [ & ] {
        try
        {
            StateSpace space( normative, start );
            TransitionValues values( prefs );
            std::vector<std::uint64_t> visits;
            std::vector<double> sums( pref_count );

            for ( std::size_t c; ( c = next_chunk.fetch_add( 1 ) ) < chunks; )
            {
                const std::size_t end = std::min( samples, ( c + 1 ) * kChunk );
                for ( std::size_t i = c * kChunk; i < end; ++i )
                {
                    std::mt19937_64 rng( path_seed( stream, i ) );
                    std::fill( sums.begin(), sums.end(), 0.0 );
                    auto state = space.start();
                    for ( std::size_t d = 0; d < horizon; ++d )
                    {
                        const auto joint = draw_joint_action( normative, rng );
                        const auto t = space.transition_id( state, joint );
                        const auto next = space.successor( state, joint );
                        values.ensure( space, t, state, next );
                        if ( t >= visits.size() )
                            visits.resize( std::max<std::size_t>( space.transition_bound(), t + 1 ), 0 );
                        ++visits[ t ];
                        for ( std::size_t p = 0; p < pref_count; ++p )
                            sums[ p ] += values.approx( p, t );
                        state = next;
                    }
                    for ( std::size_t p = 0; p < pref_count; ++p )
                        path_means[ p * samples + i ] = sums[ p ] / static_cast<double>( horizon );
                }
            }

            // Exact partial sums; addition order across workers does not
            // matter for rationals.
            std::vector<Rational> partial( pref_count, Rational( 0 ) );
            for ( std::size_t t = 0; t < visits.size(); ++t )
                if ( visits[ t ] != 0 )
                    for ( std::size_t p = 0; p < pref_count; ++p )
                        partial[ p ] += values.exact( p, t ) * visits[ t ];

            std::lock_guard lock( merge_mutex );
            for ( std::size_t p = 0; p < pref_count; ++p )
                totals[ p ] += partial[ p ];
        }
        catch ( ... )
        {
            std::lock_guard lock( merge_mutex );
            if ( !failure )
                failure = std::current_exception();
            next_chunk.store( chunks );
        }
    };

    if ( workers <= 1 )
        work();
    else
    {
        std::vector<std::jthread> pool;
        for ( unsigned w = 0; w < workers; ++w )
            pool.emplace_back( work );
    }
    if ( failure )
        std::rethrow_exception( failure );

    const Rational denominator = Rational( Integer( samples ) * horizon );
    std::vector<AlignmentReport> reports;
    for ( std::size_t p = 0; p < pref_count; ++p )
    {
        auto report = base_report( normative, prefs[ p ], start, horizon, Method::monte_carlo );
        report.score = totals[ p ] / denominator;
        report.samples = samples;
        report.seed = params.seed;

        const double* means = path_means.data() + p * samples;
        double mean = 0.0;
        for ( std::size_t i = 0; i < samples; ++i )
            mean += means[ i ];
        mean /= static_cast<double>( samples );
        double squares = 0.0;
        for ( std::size_t i = 0; i < samples; ++i )
            squares += ( means[ i ] - mean ) * ( means[ i ] - mean );
        report.standard_error =
                samples > 1 ? std::sqrt( squares / static_cast<double>( samples - 1 ) / static_cast<double>( samples ) )
                            : 0.0;
        reports.push_back( std::move( report ) );
    }
    return reports;
}

// ---------------------------------------------------------------------------

AlignmentReport align_exhaustive( const World& base, const Norm& norm, const PreferenceFunction& pref,
                                  const StateProps& start, std::size_t horizon, std::uint64_t cap )
{
    const World normative = apply_norm( base, norm );
    return align_exhaustive_world( normative, std::span( &pref, 1 ), start, horizon, cap ).front();
}

AlignmentReport align_mc( const World& base, const Norm& norm, const PreferenceFunction& pref, const StateProps& start,
                          const SamplingParams& params )
{
    const World normative = apply_norm( base, norm );
    return align_mc_world( normative, std::span( &pref, 1 ), start, params, normative.norm_id() ).front();
}

std::vector<AlignmentReport> align_multi( const World& base, const Norm& norm, std::span<const PreferenceFunction> prefs,
                                          const StateProps& start, const SamplingParams& params )
{
    const World normative = apply_norm( base, norm );
    if ( params.method == Method::exhaustive )
        return align_exhaustive_world( normative, prefs, start, params.horizon, params.path_cap );
    return align_mc_world( normative, prefs, start, params, normative.norm_id() );
}

AlignmentReport align( const World& base, const Norm& norm, const PreferenceFunction& pref, const StateProps& start,
                       const SamplingParams& params )
{
    return align_multi( base, norm, std::span( &pref, 1 ), start, params ).front();
}

RelativeAlignment relative_align( const Norm& first, const Norm& second, const PreferenceFunction& pref,
                                  const World& base, const StateProps& start, const SamplingParams& params )
{
    RelativeAlignment out{ align( base, first, pref, start, params ), align( base, second, pref, start, params ), 0 };
    out.score = out.first.score - out.second.score;
    return out;
}

// ---------------------------------------------------------------------------

PreferenceMatrix::PreferenceMatrix( std::vector<std::string> agents, std::vector<std::string> values,
                                    std::vector<std::vector<PreferenceFunction>> cells )
        : agents_{ std::move( agents ) }, values_{ std::move( values ) }, cells_{ std::move( cells ) }
{
    if ( agents_.empty() || values_.empty() )
        throw EmptyInput( "preference matrix needs at least one agent and one value" );
    if ( cells_.size() != agents_.size() )
        throw InvalidMatrix( "preference matrix needs one row per agent" );
    for ( std::size_t a = 0; a < cells_.size(); ++a )
        if ( cells_[ a ].size() != values_.size() )
            throw InvalidMatrix( "agent '" + agents_[ a ] + "' does not define a preference for every value" );
}

ScoreMatrix AlignmentCube::matrix( std::size_t norm, std::span<const std::size_t> agent_subset ) const
{
    std::vector<std::size_t> rows( agent_subset.begin(), agent_subset.end() );
    if ( rows.empty() )
    {
        rows.resize( agents.size() );
        std::iota( rows.begin(), rows.end(), 0 );
    }
    std::vector<std::vector<Rational>> cells;
    for ( const auto a : rows )
    {
        std::vector<Rational> row;
        for ( const auto& report : reports.at( norm ).at( a ) )
            row.push_back( report.score );
        cells.push_back( std::move( row ) );
    }
    return ScoreMatrix( std::move( cells ) );
}

AlignmentCube alignment_cube( std::span<const Norm> norms, const PreferenceMatrix& prefs, const World& base,
                              const StateProps& start, const SamplingParams& params )
{
    if ( norms.empty() )
        throw EmptyInput( "set alignment needs at least one norm" );

    AlignmentCube cube;
    cube.agents = prefs.agents();
    cube.values = prefs.values();

    std::vector<PreferenceFunction> flat;
    for ( std::size_t a = 0; a < prefs.agents().size(); ++a )
        for ( std::size_t v = 0; v < prefs.values().size(); ++v )
            flat.push_back( prefs.at( a, v ) );

    for ( const auto& norm : norms )
    {
        cube.norms.push_back( norm.name() );
        auto reports = align_multi( base, norm, flat, start, params );
        std::vector<std::vector<AlignmentReport>> rows( prefs.agents().size() );
        for ( std::size_t a = 0; a < rows.size(); ++a )
            for ( std::size_t v = 0; v < prefs.values().size(); ++v )
                rows[ a ].push_back( std::move( reports[ a * prefs.values().size() + v ] ) );
        cube.reports.push_back( std::move( rows ) );
    }
    return cube;
}

Rational reduce_cube( const AlignmentCube& cube, const SetAggregators& aggregators,
                      std::span<const std::size_t> norm_subset, std::span<const std::size_t> agent_subset )
{
    std::vector<std::size_t> norms( norm_subset.begin(), norm_subset.end() );
    if ( norms.empty() )
    {
        norms.resize( cube.norms.size() );
        std::iota( norms.begin(), norms.end(), 0 );
    }
    std::vector<Rational> per_norm;
    for ( const auto n : norms )
        per_norm.push_back( agg_group( cube.matrix( n, agent_subset ), aggregators.p, aggregators.q, aggregators.f,
                                       aggregators.g, aggregators.order ) );
    return aggregators.norms( per_norm );
}

SetAlignment align_sets( std::span<const Norm> norms, const PreferenceMatrix& prefs, const World& base,
                         const StateProps& start, const SamplingParams& params, const SetAggregators& aggregators )
{
    SetAlignment out{ 0, {}, alignment_cube( norms, prefs, base, start, params ) };
    for ( std::size_t n = 0; n < out.cube.norms.size(); ++n )
    {
        const std::size_t one[] = { n };
        out.per_norm.push_back( reduce_cube( out.cube, aggregators, one ) );
    }
    out.score = reduce_cube( out.cube, aggregators );
    return out;
}

} // namespace normalign
