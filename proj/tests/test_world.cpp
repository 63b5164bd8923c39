#include "normalign/error.hpp"
#include "normalign/pd.hpp"
#include "normalign/state_space.hpp"
#include "normalign/world.hpp"

#include "support.hpp"

#include <doctest.h>

#include <map>
#include <set>

using namespace normalign;
using testing::R;
using testing::xy;

namespace
{

const World& pd_world()
{
    static const World w = pd::build_pd();
    return w;
}

const Norm& norm( const char* name )
{
    static const auto norms = pd::pd_norms();
    for ( const auto& n : norms )
        if ( n.name() == name )
            return n;
    throw std::logic_error( "no such norm" );
}

JointAction ja( std::string a, std::string b )
{
    return { { std::move( a ), std::move( b ) } };
}

} // namespace

TEST_SUITE( "world" )
{
    TEST_CASE( "apply_norm rewrites gains and leaves the base alone" )
    {
        const World n0 = apply_norm( pd_world(), norm( "n0" ) );
        const World n1 = apply_norm( pd_world(), norm( "n1" ) );
        const World n2 = apply_norm( pd_world(), norm( "n2" ) );

        CHECK( step( n0, xy( 0, 0 ), ja( "c", "c" ) ).to == xy( 6, 6 ) );
        CHECK( step( n1, xy( 0, 0 ), ja( "c", "c" ) ).to == xy( 3, 3 ) );
        CHECK( step( n2, xy( 3, 3 ), ja( "d", "d" ) ).to == xy( 5, 5 ) );
        CHECK( step( pd_world(), xy( 0, 0 ), ja( "c", "c" ) ).to == xy( 6, 6 ) );

        CHECK( n1.norm_id() == "n1" );
        CHECK( pd_world().norm_id().empty() );
        CHECK( apply_norm( n1, norm( "n2" ) ).norm_id() == "n1+n2" );
        CHECK( n1.agents().size() == 2 );
        CHECK( n1.initial().names() == pd_world().initial().names() );
    }

    TEST_CASE( "step" )
    {
        const World n0 = apply_norm( pd_world(), norm( "n0" ) );
        const World n1 = apply_norm( pd_world(), norm( "n1" ) );
        CHECK( step( n0, xy( 0, 0 ), ja( "d", "c" ) ).to == xy( 9, 0 ) );
        CHECK( step( n1, xy( 0, 0 ), ja( "d", "c" ) ).to == xy( 4, 0 ) );
        CHECK( step( n0, xy( 6, 6 ), ja( "c", "c" ) ).to == xy( 12, 12 ) );
        CHECK_THROWS_AS( step( n0, xy( 0, 0 ), ja( "c", "x" ) ), UnknownAction );
        CHECK_THROWS_AS( step( n0, xy( 0, 0 ), { { "c" } } ), UnknownAction );
    }

    TEST_CASE( "n2 keeps fractional gains exact" )
    {
        const World n2 = apply_norm( pd_world().with_actions( "alpha", { "c" } ), norm( "n2" ) );
        const World odd( { { "a", { "go" } } }, StateProps( { { "v", R( 0 ) } } ), { { { "go" }, { R( 1 ) } } } );
        const World taxed = apply_norm( odd, norm( "n2" ) );
        CHECK( taxed.successor( taxed.initial(), 0 ).at( "v" ) == R( 2, 3 ) );
        CHECK( n2.joint_action_count() == 2 );
    }

    TEST_CASE( "partial table norms are rejected" )
    {
        const World w( { { "a", { "go" } } }, StateProps( { { "v", R( 0 ) } } ), { { { "go" }, { R( 4 ) } } } );
        CHECK_THROWS_AS( apply_norm( w, norm( "n1" ) ), PartialNorm );
    }

    TEST_CASE( "world validation" )
    {
        const StateProps s( { { "v", R( 0 ) } } );
        CHECK_THROWS_AS( World( { { "a", { "p", "q" } } }, s, { { { "p" }, { R( 1 ) } } } ), InvalidWorld );
        CHECK_THROWS_AS( World( { { "a", { "p" } } }, s, { { { "p" }, { R( 1 ), R( 2 ) } } } ), InvalidWorld );
        CHECK_THROWS_AS( World( { { "a", { "p" } }, { "a", { "p" } } }, s, {} ), InvalidWorld );
        CHECK_THROWS_AS( World( {}, s, {} ), InvalidWorld );
    }

    TEST_CASE( "joint action indexing is mixed radix, first agent most significant" )
    {
        const World& w = pd_world();
        CHECK( w.joint_action_count() == 4 );
        CHECK( w.joint_action( 0 ).to_string() == "(c,c)" );
        CHECK( w.joint_action( 1 ).to_string() == "(c,d)" );
        CHECK( w.joint_action( 2 ).to_string() == "(d,c)" );
        for ( std::size_t j = 0; j < 4; ++j )
            CHECK( w.joint_index( w.joint_action( j ) ) == j );
    }

    TEST_CASE( "sample_path" )
    {
        const World n0 = apply_norm( pd_world(), norm( "n0" ) );
        const Path a = sample_path( n0, xy( 0, 0 ), 10, 7 );
        const Path b = sample_path( n0, xy( 0, 0 ), 10, 7 );
        CHECK( a.length() == 10 );
        CHECK( a == b );
        CHECK_FALSE( a == sample_path( n0, xy( 0, 0 ), 10, 8 ) );
        for ( std::size_t i = 0; i + 1 < a.length(); ++i )
            CHECK( a.final( i ) == a.initial( i + 1 ) );
        CHECK_THROWS_AS( sample_path( n0, xy( 0, 0 ), 0, 1 ), ZeroLength );

        const World fixed = pd_world().with_actions( "alpha", { "c" } ).with_actions( "beta", { "d" } );
        for ( std::uint64_t seed : { 1, 2, 3 } )
        {
            const Path p = sample_path( fixed, xy( 0, 0 ), 3, seed );
            CHECK( p.final( 2 ) == xy( 0, 27 ) );
        }

        const World empty = pd_world().with_actions( "alpha", {} );
        CHECK_THROWS_AS( sample_path( empty, xy( 0, 0 ), 1, 1 ), EmptyActionSet );
    }

    TEST_CASE( "singleton alpha never plays anything else" )
    {
        const World w = pd::build_pd( pd::standard_payoffs(), { "c" } );
        for ( std::uint64_t seed = 0; seed < 50; ++seed )
        {
            const Path p = sample_path( w, w.initial(), 10, seed );
            for ( const auto& t : p.transitions() )
                CHECK( t.action.labels[ 0 ] == "c" );
        }
    }

    TEST_CASE( "zero payoffs never move the state" )
    {
        pd::Payoffs zero;
        for ( auto& row : zero )
            for ( auto& cell : row )
                cell = { R( 0 ), R( 0 ) };
        const World w = pd::build_pd( zero );
        const Path p = sample_path( w, w.initial(), 10, 3 );
        for ( const auto& t : p.transitions() )
            CHECK( t.to == xy( 0, 0 ) );
    }

    TEST_CASE( "uniform joint actions: chi-square over 10^5 steps" )
    {
        const World& w = pd_world();
        std::map<std::string, std::size_t> counts;
        std::size_t steps = 0;
        for ( std::uint64_t seed = 0; steps < 100'000; ++seed )
        {
            const Path p = sample_path( w, w.initial(), 10, seed );
            for ( const auto& t : p.transitions() )
            {
                ++counts[ t.action.to_string() ];
                ++steps;
            }
        }
        REQUIRE( counts.size() == 4 );
        double chi2 = 0;
        const double expected = steps / 4.0;
        for ( const auto& [ label, n ] : counts )
            chi2 += ( n - expected ) * ( n - expected ) / expected;
        // 3 degrees of freedom, p = 0.001
        CHECK( chi2 < 16.27 );
    }

    TEST_CASE( "uniform_below is unbiased on small bounds" )
    {
        std::mt19937_64 rng( 11 );
        std::array<int, 3> hits{};
        for ( int i = 0; i < 30'000; ++i )
            ++hits[ uniform_below( rng, 3 ) ];
        for ( int h : hits )
            CHECK( std::abs( h - 10'000 ) < 400 );
        CHECK( uniform_below( rng, 1 ) == 0 );
    }

    TEST_CASE( "enumerate_paths" )
    {
        const World& w = pd_world();
        CHECK( enumerate_paths( w, w.initial(), 1 ).size() == 4 );
        const auto three = enumerate_paths( w, w.initial(), 3 );
        CHECK( three.size() == 64 );
        std::set<std::string> distinct;
        for ( const auto& p : three )
        {
            std::string key;
            for ( const auto& t : p.transitions() )
                key += t.action.to_string();
            distinct.insert( key );
            for ( std::size_t i = 0; i + 1 < p.length(); ++i )
                CHECK( p.final( i ) == p.initial( i + 1 ) );
        }
        CHECK( distinct.size() == 64 );

        const World single = w.with_actions( "alpha", { "d" } ).with_actions( "beta", { "c" } );
        const auto one = enumerate_paths( single, single.initial(), 5 );
        REQUIRE( one.size() == 1 );
        CHECK( one.front().final( 4 ) == xy( 45, 0 ) );

        CHECK( path_count( w, 10, kDefaultPathCap ) == std::nullopt );
        CHECK( path_count( w, 9, kDefaultPathCap ) == 262'144u );
        CHECK_THROWS_AS( enumerate_paths( w, w.initial(), 10 ), ExplosionCap );
        CHECK_THROWS_AS( enumerate_paths( w, w.initial(), 2, 15 ), ExplosionCap );
    }

    TEST_CASE( "gains are monotone along PD paths under every norm" )
    {
        for ( const auto& n : pd::pd_norms() )
        {
            const World w = apply_norm( pd_world(), n );
            for ( std::uint64_t seed = 0; seed < 100; ++seed )
            {
                const Path p = sample_path( w, w.initial(), 10, seed );
                for ( const auto& t : p.transitions() )
                {
                    CHECK( t.to.at( "x" ) >= t.from.at( "x" ) );
                    CHECK( t.to.at( "y" ) >= t.from.at( "y" ) );
                }
            }
        }
    }

    TEST_CASE( "path chaining is enforced" )
    {
        const World& w = pd_world();
        const Transition a = step( w, xy( 0, 0 ), ja( "c", "c" ) );
        const Transition b = step( w, xy( 1, 1 ), ja( "c", "c" ) );
        CHECK_THROWS_AS( Path( { a, b } ), InvalidWorld );
        CHECK( Path( { a, step( w, a.to, ja( "d", "d" ) ) } ).final( 1 ) == xy( 9, 9 ) );
    }

    TEST_CASE( "state space memoizes successors" )
    {
        const World w = apply_norm( pd_world(), norm( "n1" ) );
        StateSpace space( w, w.initial() );
        const auto s1 = space.successor( space.start(), 0 );
        CHECK( space.state( s1 ) == xy( 3, 3 ) );
        CHECK( space.successor( space.start(), 0 ) == s1 );
        const auto s2 = space.successor( s1, 3 );
        CHECK( space.state( s2 ) == xy( 6, 6 ) );
        CHECK( space.successor( space.successor( space.start(), 3 ), 0 ) == s2 );
    }
}
