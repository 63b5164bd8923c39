#include "normalign/cli.hpp"

#include "support.hpp"

#include <doctest.h>

#include <json.hpp>

#include <cstdlib>
#include <fstream>
#include <set>
#include <sstream>

namespace
{

struct Result
{
    int code;
    std::string out;
    std::string err;
};

Result run( std::vector<std::string> args )
{
    std::ostringstream out, err;
    const int code = normalign::cli::run( args, out, err );
    return { code, out.str(), err.str() };
}

std::string pd_path()
{
    return testing::scenario_path( "pd.va" ).string();
}

std::vector<std::string> lines( const std::string& text )
{
    std::vector<std::string> out;
    std::istringstream in( text );
    for ( std::string line; std::getline( in, line ); )
        out.push_back( line );
    return out;
}

std::string write_temp( const std::string& name, const std::string& text )
{
    const auto path = std::filesystem::temp_directory_path() / name;
    std::ofstream( path ) << text;
    return path.string();
}

} // namespace

TEST_SUITE( "cli" )
{
    TEST_CASE( "check" )
    {
        const auto ok = run( { "check", pd_path() } );
        CHECK( ok.code == 0 );
        CHECK( ok.out.find( "ok (2 state variables, 2 agents, 4 effects" ) != std::string::npos );

        std::ifstream in( pd_path() );
        std::stringstream text;
        text << in.rdbuf();
        std::string broken = text.str();
        broken.replace( broken.find( "effect (d, d) -> (3, 3)" ), 23, "" );
        const auto path = write_temp( "normalign_missing_dd.va", broken );
        const auto bad = run( { "check", path } );
        CHECK( bad.code == 2 );
        CHECK( bad.err.find( path + ":" ) == 0 );
        CHECK( bad.err.find( "error: effect table not total" ) != std::string::npos );
    }

    TEST_CASE( "align prints one report line with provenance" )
    {
        const auto r = run( { "align", "--scenario", pd_path(), "--norm", "n1", "--pref", "eq7", "--samples", "20000",
                              "--horizon", "10", "--seed", "42" } );
        REQUIRE( r.code == 0 );
        const auto out = lines( r.out );
        REQUIRE( out.size() == 2 );
        CHECK( out[ 0 ] == "norm  pref  score      stderr    method       samples  horizon  seed" );
        CHECK( out[ 1 ].rfind( "n1    eq7   -0.0", 0 ) == 0 );
        CHECK( out[ 1 ].find( "monte-carlo  20000    10       42" ) != std::string::npos );
        CHECK( run( { "align", "--scenario", pd_path(), "--norm", "n1", "--pref", "eq7", "--samples", "20000",
                      "--horizon", "10", "--seed", "42" } )
                   .out
               == r.out );
    }

    TEST_CASE( "exhaustive align matches the anchors" )
    {
        const auto r = run( { "align", "--scenario", pd_path(), "--norm", "n0", "--pref", "eq10,eq7", "--method",
                              "exhaustive", "--horizon", "1", "--format", "csv" } );
        REQUIRE( r.code == 0 );
        const auto out = lines( r.out );
        REQUIRE( out.size() == 3 );
        CHECK( out[ 0 ] == "norm,pref,score,stderr,method,samples,horizon,seed" );
        CHECK( out[ 1 ] == "n0,eq10,0.750000,-,exhaustive,-,1,-" );
        CHECK( out[ 2 ] == "n0,eq7,-0.500000,-,exhaustive,-,1,-" );
    }

    TEST_CASE( "formats carry the same fields" )
    {
        const std::vector<std::string> base = { "ralign", "--scenario", pd_path(), "--first", "n1", "--second", "n0",
                                                "--samples", "400", "--horizon", "5" };
        auto with = [ & ]( const char* format ) {
            auto args = base;
            args.push_back( "--format" );
            args.push_back( format );
            return run( args );
        };
        const auto table = lines( with( "table" ).out );
        const auto csv = lines( with( "csv" ).out );
        const auto json = lines( with( "json-lines" ).out );
        REQUIRE( table.size() == 5 );
        REQUIRE( csv.size() == 5 );
        REQUIRE( json.size() == 4 );

        std::vector<std::string> header;
        std::istringstream h( csv[ 0 ] );
        for ( std::string f; std::getline( h, f, ',' ); )
            header.push_back( f );
        std::istringstream t( table[ 0 ] );
        std::vector<std::string> table_header;
        for ( std::string f; t >> f; )
            table_header.push_back( f );
        CHECK( header == table_header );

        for ( std::size_t i = 0; i < json.size(); ++i )
        {
            const auto record = nlohmann::ordered_json::parse( json[ i ] );
            std::vector<std::string> keys;
            std::string joined;
            for ( const auto& [ k, v ] : record.items() )
            {
                keys.push_back( k );
                joined += ( joined.empty() ? "" : "," ) + v.get<std::string>();
            }
            CHECK( keys == header );
            CHECK( joined == csv[ i + 1 ] );
        }
    }

    TEST_CASE( "table2" )
    {
        const auto r = run( { "table2", "--scenario", pd_path(), "--seed", "42", "--samples", "2000" } );
        REQUIRE( r.code == 0 );
        const auto out = lines( r.out );
        REQUIRE( out.size() == 1 + 16 + 4 );
        std::set<std::string> rows;
        for ( std::size_t i = 1; i < out.size(); ++i )
            rows.insert( out[ i ].substr( 0, out[ i ].find( ' ' ) ) );
        CHECK( rows.size() == 17 );
        CHECK( out[ 8 ].find( "n/a" ) != std::string::npos );
        CHECK( out[ 0 ].find( "epsilon" ) != std::string::npos );

        const auto builtin = run( { "table2", "--seed", "42", "--samples", "2000" } );
        CHECK( builtin.out == r.out );
        CHECK( run( { "table2", "--epsilon", "abc" } ).code == 1 );
    }

    TEST_CASE( "table2 output does not depend on the thread count" )
    {
        const std::vector<std::string> args = { "table2", "--seed", "42", "--samples", "3000", "--format", "csv" };
        setenv( "NORMALIGN_THREADS", "1", 1 );
        const auto one = run( args );
        setenv( "NORMALIGN_THREADS", "3", 1 );
        const auto three = run( args );
        unsetenv( "NORMALIGN_THREADS" );
        CHECK( one.code == 0 );
        CHECK( one.out == three.out );
    }

    TEST_CASE( "optimize" )
    {
        const auto norms = run( { "optimize", "--scenario", pd_path(), "--pref", "eq7", "--samples", "1000" } );
        REQUIRE( norms.code == 0 );
        const auto out = lines( norms.out );
        CHECK( out.size() == 8 );
        CHECK( out[ 1 ].find( "{n1}" ) != std::string::npos );
        CHECK( out[ 1 ].find( "*" ) != std::string::npos );

        const auto agg = run( { "optimize", "--scenario", pd_path(), "--search", "aggregator", "--cell",
                                "alpha:equality=eq7", "--cell", "beta:equality=eq10", "--samples", "500", "--family",
                                "mean,min,weighted-mean", "--weights", "1/4,3/4", "--format", "csv" } );
        REQUIRE( agg.code == 0 );
        CHECK( lines( agg.out ).size() == 4 );

        const auto agents = run( { "optimize", "--scenario", pd_path(), "--search", "agents", "--cell",
                                   "alpha:equality=eq7", "--cell", "beta:equality=eq10", "--samples", "500" } );
        REQUIRE( agents.code == 0 );
        CHECK( lines( agents.out ).size() == 4 );

        const auto compose = run( { "optimize", "--scenario", pd_path(), "--pref", "eq7", "--norm", "n0,n1",
                                    "--compose", "--samples", "300" } );
        CHECK( compose.code == 0 );
        CHECK( compose.out.find( "compose" ) != std::string::npos );

        CHECK( run( { "optimize", "--scenario", pd_path(), "--search", "agents", "--cell", "nonsense" } ).code == 1 );
        CHECK( run( { "optimize", "--scenario", pd_path(), "--search", "aggregator", "--pref", "eq7", "--family",
                      "mode" } )
                   .code
               == 1 );
    }

    TEST_CASE( "enumerate" )
    {
        const auto r = run( { "enumerate", "--scenario", pd_path(), "--norm", "n1", "--horizon", "2" } );
        REQUIRE( r.code == 0 );
        const auto out = lines( r.out );
        REQUIRE( out.size() == 17 );
        CHECK( out[ 1 ].find( "(c,c) (c,c)" ) != std::string::npos );
        CHECK( out[ 1 ].find( "(x=6, y=6)" ) != std::string::npos );

        const auto capped = run( { "enumerate", "--scenario", pd_path(), "--horizon", "3", "--cap", "10" } );
        CHECK( capped.code == 3 );
        CHECK( capped.err.find( "error:" ) == 0 );
    }

    TEST_CASE( "exit codes" )
    {
        CHECK( run( {} ).code == 1 );
        CHECK( run( { "frobnicate" } ).code == 1 );
        CHECK( run( { "align", "--scenario", pd_path(), "--method", "quantum" } ).code == 1 );
        CHECK( run( { "align", "--scenario", pd_path(), "--norm", "n7" } ).code == 1 );
        CHECK( run( { "align", "--scenario", pd_path(), "--pref", "eq99" } ).code == 1 );
        CHECK( run( { "check", "/nonexistent/file.va" } ).code == 2 );
        CHECK( run( { "align", "--scenario", pd_path(), "--method", "exhaustive" } ).code == 3 );
        CHECK( run( { "--help" } ).code == 0 );

        const auto bad_range = write_temp( "normalign_range.va",
                                           "state v = 0\nagent a actions { p }\neffect (p) -> (1)\n"
                                           "norm n { tax = 0 }\npref two = 2\n" );
        const auto r = run( { "align", "--scenario", bad_range, "--samples", "5" } );
        CHECK( r.code == 3 );
        CHECK( r.err.find( "outside [-1, 1]" ) != std::string::npos );
    }
}
