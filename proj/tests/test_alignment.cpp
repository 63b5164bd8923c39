#include "normalign/alignment.hpp"
#include "normalign/error.hpp"
#include "normalign/pd.hpp"

#include "support.hpp"

#include <doctest.h>

#include <cmath>
#include <cstdlib>

using namespace normalign;
using testing::R;

namespace
{

const std::vector<Norm>& norms()
{
    static const auto n = pd::pd_norms();
    return n;
}

PreferenceFunction pref( const char* name )
{
    return builtin( name ).with_owner( "alpha" );
}

SamplingParams mc( std::size_t samples, std::size_t horizon, std::uint64_t seed = 42 )
{
    SamplingParams p;
    p.samples = samples;
    p.horizon = horizon;
    p.seed = seed;
    return p;
}

PreferenceFunction constant( Rational v )
{
    return PreferenceFunction( "const", [ v ]( const StateProps&, const StateProps& ) { return v; } );
}

} // namespace

TEST_SUITE( "alignment" )
{
    TEST_CASE( "one-step anchors" )
    {
        const World pd = pd::build_pd();
        CHECK( align_exhaustive( pd, norms()[ 0 ], pref( "eq10" ), pd.initial(), 1 ).score == R( 3, 4 ) );
        CHECK( align_exhaustive( pd, norms()[ 0 ], pref( "eq7" ), pd.initial(), 1 ).score == R( -1, 2 ) );
    }

    TEST_CASE( "one-transition world with a constant preference" )
    {
        const World w( { { "a", { "go" } } }, StateProps( { { "v", R( 0 ) } } ), { { { "go" }, { R( 1 ) } } } );
        const auto half = constant( R( 1, 2 ) );
        CHECK( align_exhaustive( w, Norm::identity(), half, w.initial(), 1 ).score == R( 1, 2 ) );
        CHECK( align_mc( w, Norm::identity(), half, w.initial(), mc( 10, 4 ) ).score == R( 1, 2 ) );
    }

    TEST_CASE( "constant preferences give that constant on the PD" )
    {
        const World pd = pd::build_pd();
        const auto c = constant( R( -2, 7 ) );
        for ( const auto& n : norms() )
        {
            CHECK( align_exhaustive( pd, n, c, pd.initial(), 3 ).score == R( -2, 7 ) );
            CHECK( align_mc( pd, n, c, pd.initial(), mc( 500, 6 ) ).score == R( -2, 7 ) );
        }
    }

    TEST_CASE( "exhaustive agrees with a brute-force oracle" )
    {
        const World pd = pd::build_pd();
        for ( std::size_t l = 1; l <= 4; ++l )
            for ( const auto& n : norms() )
                for ( const auto& name : builtin_preferences() )
                {
                    const auto pf = pref( name.c_str() );
                    CAPTURE( l );
                    CAPTURE( n.name() );
                    CAPTURE( name );
                    CHECK( align_exhaustive( pd, n, pf, pd.initial(), l ).score
                           == testing::brute_force_alignment( apply_norm( pd, n ), pf, l ) );
                }
    }

    TEST_CASE( "frozen reference values" )
    {
        // exact values from an independent Python enumeration
        const World c_only = pd::build_pd( pd::standard_payoffs(), { "c" } );
        CHECK( align_exhaustive( c_only, norms()[ 0 ], pref( "eq10" ), c_only.initial(), 3 ).score == R( 7, 18 ) );
        CHECK( align_exhaustive( c_only, norms()[ 1 ], pref( "eq10" ), c_only.initial(), 3 ).score == R( 7, 18 ) );
    }

    TEST_CASE( "deterministic worlds: MC equals exhaustive for any seed" )
    {
        const World fixed = pd::build_pd( pd::standard_payoffs(), { "d" }, { "c" } );
        for ( std::uint64_t seed : { 0, 1, 99 } )
            for ( const auto& n : norms() )
                CHECK( align_mc( fixed, n, pref( "eq7" ), fixed.initial(), mc( 17, 5, seed ) ).score
                       == align_exhaustive( fixed, n, pref( "eq7" ), fixed.initial(), 5 ).score );
    }

    TEST_CASE( "MC lands near the exhaustive value" )
    {
        const World pd = pd::build_pd();
        const auto report = align_mc( pd, norms()[ 0 ], pref( "eq10" ), pd.initial(), mc( 20'000, 1 ) );
        REQUIRE( report.standard_error );
        CHECK( std::abs( to_double( report.score ) - 0.75 ) <= 3 * *report.standard_error );
        CHECK( report.method == Method::monte_carlo );
        CHECK( report.samples == 20'000u );
        CHECK( report.seed == 42u );
        CHECK( report.horizon == 1 );
        CHECK( report.norm_id == "n0" );
        CHECK( report.preference_id == "eq10" );
        CHECK( report.initial == pd.initial() );
    }

    TEST_CASE( "standard error matches a direct per-path computation" )
    {
        const World pd = pd::build_pd();
        const auto params = mc( 300, 4, 5 );
        const auto report = align_mc( pd, norms()[ 1 ], pref( "eq8" ), pd.initial(), params );
        const World normative = apply_norm( pd, norms()[ 1 ] );
        const auto stream = stream_seed( params.seed, "n1" );
        std::vector<double> means;
        Rational total = 0;
        for ( std::size_t i = 0; i < params.samples; ++i )
        {
            const Path p = sample_path( normative, pd.initial(), params.horizon, path_seed( stream, i ) );
            Rational sum = 0;
            for ( std::size_t d = 0; d < p.length(); ++d )
                sum += eval_pref( pref( "eq8" ), p.initial( d ), p.final( d ) );
            total += sum;
            means.push_back( to_double( sum / params.horizon ) );
        }
        CHECK( report.score == total / ( params.samples * params.horizon ) );
        double mean = 0;
        for ( double m : means )
            mean += m;
        mean /= means.size();
        double var = 0;
        for ( double m : means )
            var += ( m - mean ) * ( m - mean );
        var /= means.size() - 1;
        CHECK( *report.standard_error == doctest::Approx( std::sqrt( var / means.size() ) ).epsilon( 1e-9 ) );
    }

    TEST_CASE( "seeded runs repeat and do not depend on the thread count" )
    {
        const World pd = pd::build_pd();
        auto params = mc( 3000, 10, 7 );
        params.threads = 1;
        const auto one = align_mc( pd, norms()[ 2 ], pref( "eq9" ), pd.initial(), params );
        params.threads = 4;
        const auto four = align_mc( pd, norms()[ 2 ], pref( "eq9" ), pd.initial(), params );
        CHECK( one.score == four.score );
        CHECK( one.standard_error == four.standard_error );
        params.seed = 8;
        CHECK( align_mc( pd, norms()[ 2 ], pref( "eq9" ), pd.initial(), params ).score != one.score );
    }

    TEST_CASE( "row 1 at full scale: n1 beats n0 and n2" )
    {
        const World pd = pd::build_pd( pd::standard_payoffs(), { "c" } );
        const auto params = mc( 20'000, 10 );
        const auto a0 = align_mc( pd, norms()[ 0 ], pref( "eq7" ), pd.initial(), params ).score;
        const auto a1 = align_mc( pd, norms()[ 1 ], pref( "eq7" ), pd.initial(), params ).score;
        const auto a2 = align_mc( pd, norms()[ 2 ], pref( "eq7" ), pd.initial(), params ).score;
        CHECK( a1 > a0 );
        CHECK( a1 > a2 );
        CHECK( relative_align( norms()[ 1 ], norms()[ 0 ], pref( "eq7" ), pd, pd.initial(), params ).score > 0 );
    }

    TEST_CASE( "identity norm equals the unmodified world" )
    {
        const World pd = pd::build_pd();
        const auto params = mc( 2000, 6 );
        const auto reports = align_mc_world( pd, std::vector{ pref( "eq8" ) }, pd.initial(), params, "n0" );
        CHECK( reports.front().score == align_mc( pd, norms()[ 0 ], pref( "eq8" ), pd.initial(), params ).score );
        CHECK( align_exhaustive_world( pd, std::vector{ pref( "eq8" ) }, pd.initial(), 3 ).front().score
               == align_exhaustive( pd, norms()[ 0 ], pref( "eq8" ), pd.initial(), 3 ).score );
    }

    TEST_CASE( "relative alignment" )
    {
        const World pd = pd::build_pd();
        const auto params = mc( 1000, 5 );
        CHECK( relative_align( norms()[ 1 ], norms()[ 1 ], pref( "eq7" ), pd, pd.initial(), params ).score == 0 );
        const auto ab = relative_align( norms()[ 1 ], norms()[ 2 ], pref( "eq8" ), pd, pd.initial(), params );
        const auto ba = relative_align( norms()[ 2 ], norms()[ 1 ], pref( "eq8" ), pd, pd.initial(), params );
        CHECK( ab.score == -ba.score );
        CHECK( ab.score == ab.first.score - ab.second.score );
    }

    TEST_CASE( "align_multi shares paths across preferences" )
    {
        const World pd = pd::build_pd();
        const auto params = mc( 1500, 8 );
        const auto prefs = pd::pd_preferences();
        const auto multi = align_multi( pd, norms()[ 1 ], prefs, pd.initial(), params );
        REQUIRE( multi.size() == 4 );
        for ( std::size_t i = 0; i < prefs.size(); ++i )
            CHECK( multi[ i ].score == align_mc( pd, norms()[ 1 ], prefs[ i ], pd.initial(), params ).score );
    }

    TEST_CASE( "errors" )
    {
        const World pd = pd::build_pd();
        CHECK_THROWS_AS( align_exhaustive( pd, norms()[ 0 ], pref( "eq7" ), pd.initial(), 0 ), ZeroLength );
        CHECK_THROWS_AS( align_mc( pd, norms()[ 0 ], pref( "eq7" ), pd.initial(), mc( 0, 3 ) ), ZeroSamples );
        CHECK_THROWS_AS( align_mc( pd, norms()[ 0 ], pref( "eq7" ), pd.initial(), mc( 10, 0 ) ), ZeroLength );
        CHECK_THROWS_AS( align_exhaustive( pd, norms()[ 0 ], pref( "eq7" ), pd.initial(), 10 ), ExplosionCap );
        CHECK_THROWS_AS( align_mc( pd.with_actions( "beta", {} ), norms()[ 0 ], pref( "eq7" ), pd.initial(), mc( 5, 2 ) ),
                         EmptyActionSet );
        CHECK_THROWS_AS( align_mc( pd, norms()[ 0 ], constant( 2 ), pd.initial(), mc( 5, 2 ) ), RangeViolation );
    }

    TEST_CASE( "set alignment" )
    {
        const World pd = pd::build_pd();
        const auto params = mc( 2000, 6 );
        const auto eq7 = pref( "eq7" );

        const PreferenceMatrix single( { "alpha" }, { "eq7" }, { { eq7 } } );
        const auto one = align_sets( std::span( &norms()[ 1 ], 1 ), single, pd, pd.initial(), params );
        CHECK( one.score == align_mc( pd, norms()[ 1 ], eq7, pd.initial(), params ).score );

        const PreferenceMatrix twins( { "a", "b" }, { "eq7" }, { { eq7 }, { eq7 } } );
        CHECK( align_sets( std::span( &norms()[ 1 ], 1 ), twins, pd, pd.initial(), params ).score == one.score );

        const std::vector<Norm> pair = { norms()[ 0 ], norms()[ 1 ] };
        const auto both = align_sets( pair, single, pd, pd.initial(), params );
        const auto a0 = align_mc( pd, norms()[ 0 ], eq7, pd.initial(), params ).score;
        CHECK( both.score == ( a0 + one.score ) / 2 );
        CHECK( both.per_norm == std::vector<Rational>{ a0, one.score } );

        SetAggregators worst;
        worst.norms = Aggregator::min();
        CHECK( align_sets( pair, single, pd, pd.initial(), params, worst ).score == std::min( a0, one.score ) );

        CHECK_THROWS_AS( PreferenceMatrix( {}, {}, {} ), EmptyInput );
        CHECK_THROWS_AS( PreferenceMatrix( { "a" }, { "v", "w" }, { { eq7 } } ), InvalidMatrix );
    }

    TEST_CASE( "stream seeds are independent per key" )
    {
        CHECK( stream_seed( 42, "n0" ) != stream_seed( 42, "n1" ) );
        CHECK( stream_seed( 42, "n0" ) != stream_seed( 43, "n0" ) );
        CHECK( stream_seed( 42, "n0" ) == stream_seed( 42, "n0" ) );
        CHECK( path_seed( 1, 0 ) != path_seed( 1, 1 ) );
    }
}
