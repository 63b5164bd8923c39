#include "normalign/cli.hpp"

#include "normalign/alignment.hpp"
#include "normalign/dsl/compile.hpp"
#include "normalign/error.hpp"
#include "normalign/optimizer.hpp"
#include "normalign/pd.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <cstdio>
#include <cstdlib>
#include <map>
#include <ostream>

namespace normalign::cli
{

namespace
{

struct UsageError : std::runtime_error
{
    using std::runtime_error::runtime_error;
};

struct Options
{
    std::string scenario;
    std::string check_file;
    std::vector<std::string> norms;
    std::vector<std::string> prefs;
    std::vector<std::string> cells;
    std::vector<std::string> family;
    std::vector<std::string> weights;
    std::string first;
    std::string second;
    std::string norm;
    std::string search = "norms";
    bool compose = false;
    std::size_t samples = 20'000;
    std::size_t horizon = 10;
    std::uint64_t seed = 42;
    std::uint64_t cap = kDefaultPathCap;
    std::string epsilon = "0.005";
    std::string method = "mc";
    std::string format = "table";
    unsigned threads = 0;
};

// ---------------------------------------------------------------------------
// Output

struct Table
{
    std::vector<std::string> columns;
    std::vector<std::vector<std::string>> rows;
};

std::string csv_field( const std::string& s )
{
    if ( s.find_first_of( ",\"\n" ) == std::string::npos )
        return s;
    std::string out = "\"";
    for ( char c : s )
    {
        if ( c == '"' )
            out += '"';
        out += c;
    }
    return out + '"';
}

void emit( const Table& table, const std::string& format, std::ostream& out )
{
    if ( format == "csv" )
    {
        auto line = [ & ]( const std::vector<std::string>& fields ) {
            for ( std::size_t i = 0; i < fields.size(); ++i )
                out << ( i ? "," : "" ) << csv_field( fields[ i ] );
            out << '\n';
        };
        line( table.columns );
        for ( const auto& row : table.rows )
            line( row );
    }
    else if ( format == "json-lines" )
    {
        for ( const auto& row : table.rows )
        {
            nlohmann::ordered_json record;
            for ( std::size_t i = 0; i < table.columns.size(); ++i )
                record[ table.columns[ i ] ] = row[ i ];
            out << record.dump() << '\n';
        }
    }
    else
    {
        std::vector<std::size_t> width( table.columns.size() );
        for ( std::size_t i = 0; i < width.size(); ++i )
        {
            width[ i ] = table.columns[ i ].size();
            for ( const auto& row : table.rows )
                width[ i ] = std::max( width[ i ], row[ i ].size() );
        }
        auto line = [ & ]( const std::vector<std::string>& fields ) {
            std::string text;
            for ( std::size_t i = 0; i < fields.size(); ++i )
            {
                if ( i )
                    text += "  ";
                text += fields[ i ];
                text.append( width[ i ] - fields[ i ].size(), ' ' );
            }
            while ( !text.empty() && text.back() == ' ' )
                text.pop_back();
            out << text << '\n';
        };
        line( table.columns );
        for ( const auto& row : table.rows )
            line( row );
    }
}

std::string score_text( const Rational& r )
{
    return format_fixed( r, 6 );
}

std::string stderr_text( const std::optional<double>& se )
{
    if ( !se )
        return "-";
    char buffer[ 64 ];
    std::snprintf( buffer, sizeof buffer, "%.6f", *se );
    return buffer;
}

std::string set_text( const std::vector<std::string>& items )
{
    std::string out = "{";
    for ( std::size_t i = 0; i < items.size(); ++i )
        out += ( i ? "," : "" ) + items[ i ];
    return out + "}";
}

// ---------------------------------------------------------------------------
// Inputs

SamplingParams sampling( const Options& o )
{
    SamplingParams p;
    p.samples = o.samples;
    p.horizon = o.horizon;
    p.seed = o.seed;
    p.method = o.method == "exhaustive" ? Method::exhaustive : Method::monte_carlo;
    p.threads = o.threads;
    p.path_cap = o.cap;
    return p;
}

std::vector<std::string> provenance( const SamplingParams& p )
{
    const bool mc = p.method == Method::monte_carlo;
    return { std::string( to_string( p.method ) ), mc ? std::to_string( p.samples ) : "-", std::to_string( p.horizon ),
             mc ? std::to_string( p.seed ) : "-" };
}

const std::vector<std::string> kProvenanceColumns = { "method", "samples", "horizon", "seed" };

std::vector<std::string> with_provenance( std::vector<std::string> fields, const SamplingParams& p )
{
    for ( auto& f : provenance( p ) )
        fields.push_back( std::move( f ) );
    return fields;
}

std::vector<std::string> with_provenance_columns( std::vector<std::string> columns )
{
    columns.insert( columns.end(), kProvenanceColumns.begin(), kProvenanceColumns.end() );
    return columns;
}

/// Parses and reports diagnostics; nullopt means exit 2.
std::optional<dsl::Scenario> load( const std::string& path, std::ostream& err )
{
    if ( path.empty() )
        throw UsageError( "a scenario is required (--scenario FILE)" );
    auto result = dsl::parse_file( path );
    for ( const auto& d : result.diagnostics )
        err << d.to_string( path ) << '\n';
    return std::move( result.scenario );
}

std::vector<Norm> select_norms( const dsl::CompiledScenario& compiled, const std::vector<std::string>& names )
{
    if ( names.empty() )
        return compiled.norms;
    std::vector<Norm> out;
    for ( const auto& n : names )
        out.push_back( compiled.norm( n ) );
    return out;
}

std::vector<PreferenceFunction> select_prefs( const dsl::CompiledScenario& compiled,
                                              const std::vector<std::string>& names )
{
    if ( names.empty() )
        return compiled.prefs;
    std::vector<PreferenceFunction> out;
    for ( const auto& n : names )
        out.push_back( compiled.pref( n ) );
    return out;
}

std::vector<Rational> parse_weights( const std::vector<std::string>& texts )
{
    std::vector<Rational> out;
    for ( const auto& t : texts )
    {
        const auto slash = t.find( '/' );
        std::optional<Rational> value;
        if ( slash == std::string::npos )
            value = parse_decimal( t );
        else
        {
            const auto num = parse_decimal( t.substr( 0, slash ) );
            const auto den = parse_decimal( t.substr( slash + 1 ) );
            if ( num && den && *den != 0 )
                value = *num / *den;
        }
        if ( !value )
            throw UsageError( "invalid weight '" + t + "'" );
        out.push_back( *value );
    }
    return out;
}

/// Cells come from --cell AGENT:VALUE=PREF. Without cells, a single owner
/// gets one value per preference, and several owners holding one preference
/// each share a single value column.
PreferenceMatrix build_matrix( const dsl::CompiledScenario& compiled, const Options& o )
{
    std::vector<std::string> agents;
    std::vector<std::string> values;
    std::map<std::pair<std::string, std::string>, PreferenceFunction> cells;
    auto remember = []( std::vector<std::string>& list, const std::string& name ) {
        if ( std::find( list.begin(), list.end(), name ) == list.end() )
            list.push_back( name );
    };

    if ( !o.cells.empty() )
    {
        for ( const auto& cell : o.cells )
        {
            const auto colon = cell.find( ':' );
            const auto equals = cell.find( '=' );
            if ( colon == std::string::npos || equals == std::string::npos || equals < colon )
                throw UsageError( "invalid cell '" + cell + "' (expected AGENT:VALUE=PREF)" );
            const std::string agent = cell.substr( 0, colon );
            const std::string value = cell.substr( colon + 1, equals - colon - 1 );
            const PreferenceFunction& pref = compiled.pref( cell.substr( equals + 1 ) );
            remember( agents, agent );
            remember( values, value );
            if ( !cells.emplace( std::make_pair( agent, value ), pref.with_owner( agent ) ).second )
                throw UsageError( "cell " + agent + ":" + value + " given twice" );
        }
    }
    else
    {
        const auto prefs = select_prefs( compiled, o.prefs );
        std::map<std::string, std::vector<PreferenceFunction>> by_owner;
        for ( const auto& p : prefs )
        {
            if ( !p.owner() )
                throw UsageError( "preference " + p.id() + " has no owner; use --cell" );
            remember( agents, *p.owner() );
            by_owner[ *p.owner() ].push_back( p );
        }
        if ( agents.size() == 1 )
            for ( const auto& p : prefs )
            {
                values.push_back( p.id() );
                cells.emplace( std::make_pair( agents.front(), p.id() ), p );
            }
        else
        {
            values.push_back( "value" );
            for ( const auto& [ owner, held ] : by_owner )
            {
                if ( held.size() != 1 )
                    throw UsageError( "agent " + owner + " holds several preferences; use --cell" );
                cells.emplace( std::make_pair( owner, std::string( "value" ) ), held.front() );
            }
        }
    }

    std::vector<std::vector<PreferenceFunction>> rows;
    for ( const auto& a : agents )
    {
        std::vector<PreferenceFunction> row;
        for ( const auto& v : values )
        {
            const auto it = cells.find( { a, v } );
            if ( it == cells.end() )
                throw UsageError( "no preference for agent " + a + " and value " + v );
            row.push_back( it->second );
        }
        rows.push_back( std::move( row ) );
    }
    return PreferenceMatrix( agents, values, std::move( rows ) );
}

// ---------------------------------------------------------------------------
// Subcommands

int cmd_check( const Options& o, std::ostream& out, std::ostream& err )
{
    const std::string path = o.check_file.empty() ? o.scenario : o.check_file;
    const auto scenario = load( path, err );
    if ( !scenario )
        return invalid_scenario;
    out << path << ": ok (" << scenario->state.size() << " state variables, " << scenario->agents.size()
        << " agents, " << scenario->effects.size() << " effects, " << scenario->norms.size() << " norms, "
        << scenario->prefs.size() << " preferences)\n";
    return ok;
}

int cmd_align( const Options& o, std::ostream& out, std::ostream& err )
{
    const auto scenario = load( o.scenario, err );
    if ( !scenario )
        return invalid_scenario;
    const auto compiled = dsl::compile( *scenario );
    const auto norms = select_norms( compiled, o.norms );
    const auto prefs = select_prefs( compiled, o.prefs );
    const auto params = sampling( o );

    Table table{ with_provenance_columns( { "norm", "pref", "score", "stderr" } ), {} };
    for ( const auto& norm : norms )
        for ( const auto& report : align_multi( compiled.world, norm, prefs, compiled.world.initial(), params ) )
            table.rows.push_back( with_provenance(
                { report.norm_id, report.preference_id, score_text( report.score ), stderr_text( report.standard_error ) },
                params ) );
    emit( table, o.format, out );
    return ok;
}

int cmd_ralign( const Options& o, std::ostream& out, std::ostream& err )
{
    const auto scenario = load( o.scenario, err );
    if ( !scenario )
        return invalid_scenario;
    const auto compiled = dsl::compile( *scenario );
    const Norm& first = compiled.norm( o.first );
    const Norm& second = compiled.norm( o.second );
    const auto prefs = select_prefs( compiled, o.prefs );
    const auto params = sampling( o );

    Table table{ with_provenance_columns( { "first", "second", "pref", "first_score", "second_score", "relative" } ),
                 {} };
    for ( const auto& pref : prefs )
    {
        const auto r = relative_align( first, second, pref, compiled.world, compiled.world.initial(), params );
        table.rows.push_back( with_provenance( { first.name(), second.name(), pref.id(), score_text( r.first.score ),
                                                 score_text( r.second.score ), score_text( r.score ) },
                                               params ) );
    }
    emit( table, o.format, out );
    return ok;
}

int cmd_table2( const Options& o, std::ostream& out, std::ostream& err )
{
    const auto epsilon = parse_decimal( o.epsilon );
    if ( !epsilon || *epsilon < 0 )
        throw UsageError( "invalid epsilon '" + o.epsilon + "'" );

    pd::Setup setup = pd::default_setup();
    if ( !o.scenario.empty() )
    {
        const auto scenario = load( o.scenario, err );
        if ( !scenario )
            return invalid_scenario;
        auto compiled = dsl::compile( *scenario );
        setup = { compiled.world, compiled.norms, compiled.prefs };
    }
    const auto params = sampling( o );
    const auto rows = pd::table2( setup, params, *epsilon );

    std::vector<std::string> columns = { "row", "pref", "alpha", "beta", "n0", "n0_stderr", "n1", "n1_stderr", "n2",
                                         "n2_stderr", "ordering", "expected", "match" };
    columns = with_provenance_columns( std::move( columns ) );
    columns.push_back( "epsilon" );
    Table table{ columns, {} };
    for ( const auto& row : rows )
        for ( const auto& result : row.results )
        {
            std::vector<std::string> fields = { std::to_string( row.index ), result.preference, set_text( row.alpha ),
                                                set_text( row.beta ) };
            for ( const auto& report : result.reports )
            {
                fields.push_back( score_text( report.score ) );
                fields.push_back( stderr_text( report.standard_error ) );
            }
            fields.push_back( result.ordering.to_string() );
            fields.push_back( row.expected );
            fields.push_back( !row.verifiable ? "n/a" : result.matches ? "yes" : "no" );
            fields = with_provenance( std::move( fields ), params );
            fields.push_back( format_exact( *epsilon ) );
            table.rows.push_back( std::move( fields ) );
        }
    emit( table, o.format, out );
    return ok;
}

int cmd_optimize( const Options& o, std::ostream& out, std::ostream& err )
{
    const auto scenario = load( o.scenario, err );
    if ( !scenario )
        return invalid_scenario;
    const auto compiled = dsl::compile( *scenario );
    const auto norms = select_norms( compiled, o.norms );
    const auto matrix = build_matrix( compiled, o );
    const auto params = sampling( o );
    const auto& world = compiled.world;

    SearchResult result;
    std::string semantics = "mean";
    bool subsets = true;
    if ( o.search == "norms" )
    {
        semantics = o.compose ? "compose" : "mean";
        result = best_norm_subset( norms, matrix, world, world.initial(), params, {},
                                   o.compose ? SubsetSemantics::compose : SubsetSemantics::mean );
    }
    else if ( o.search == "agents" )
        result = best_agent_subset( matrix, norms, world, world.initial(), params );
    else
    {
        subsets = false;
        std::vector<std::string> names = o.family;
        if ( names.empty() )
        {
            names = { "mean", "min", "max", "median" };
            if ( !o.weights.empty() )
                names.push_back( "weighted-mean" );
        }
        const auto weights = parse_weights( o.weights );
        std::vector<Aggregator> family;
        for ( const auto& n : names )
            family.push_back( aggregator( n, n == "weighted-mean" ? weights : std::vector<Rational>{} ) );
        result = best_aggregator( family, norms, matrix, world, world.initial(), params );
    }

    Table table{ with_provenance_columns( { "rank", "search", "semantics", "candidate", "score", "winner" } ), {} };
    for ( std::size_t i = 0; i < result.ranking.size(); ++i )
    {
        const auto& c = result.ranking[ i ];
        table.rows.push_back( with_provenance( { std::to_string( i + 1 ), o.search, semantics,
                                                 subsets ? set_text( c.members ) : c.members.front(),
                                                 score_text( c.score ), i == 0 ? "*" : "" },
                                               params ) );
    }
    emit( table, o.format, out );
    return ok;
}

int cmd_enumerate( const Options& o, std::ostream& out, std::ostream& err )
{
    const auto scenario = load( o.scenario, err );
    if ( !scenario )
        return invalid_scenario;
    const auto compiled = dsl::compile( *scenario );
    World world = compiled.world;
    if ( !o.norm.empty() )
        world = apply_norm( world, compiled.norm( o.norm ) );

    const auto paths = enumerate_paths( world, world.initial(), o.horizon, o.cap );
    Table table{ { "path", "norm", "actions", "final", "horizon" }, {} };
    for ( std::size_t i = 0; i < paths.size(); ++i )
    {
        std::string actions;
        for ( const auto& t : paths[ i ].transitions() )
            actions += ( actions.empty() ? "" : " " ) + t.action.to_string();
        table.rows.push_back( { std::to_string( i + 1 ), o.norm.empty() ? "-" : o.norm, actions,
                                paths[ i ].final( paths[ i ].length() - 1 ).to_string(),
                                std::to_string( o.horizon ) } );
    }
    emit( table, o.format, out );
    return ok;
}

void add_format( CLI::App* cmd, Options& o )
{
    cmd->add_option( "--format", o.format, "table, csv or json-lines" )
        ->check( CLI::IsMember( { "table", "csv", "json-lines" } ) );
}

void add_sampling( CLI::App* cmd, Options& o )
{
    cmd->add_option( "--samples", o.samples, "sampled paths per norm" )->check( CLI::PositiveNumber );
    cmd->add_option( "--horizon", o.horizon, "path length" )->check( CLI::PositiveNumber );
    cmd->add_option( "--seed", o.seed, "sampling seed" );
    cmd->add_option( "--method", o.method, "mc or exhaustive" )->check( CLI::IsMember( { "mc", "exhaustive" } ) );
    cmd->add_option( "--threads", o.threads, "worker threads (0 = all cores)" );
    cmd->add_option( "--cap", o.cap, "largest path count enumerated exhaustively" );
    add_format( cmd, o );
}

} // namespace

int run( const std::vector<std::string>& args, std::ostream& out, std::ostream& err )
{
    Options o;
    if ( const char* env = std::getenv( "NORMALIGN_THREADS" ) )
    {
        char* end = nullptr;
        const unsigned long n = std::strtoul( env, &end, 10 );
        if ( *env && end && *end == '\0' )
            o.threads = static_cast<unsigned>( n );
    }

    CLI::App app{ "Norm/value alignment in multi-agent worlds", "normalign" };
    app.require_subcommand( 1 );

    auto* check = app.add_subcommand( "check", "parse and validate a scenario" );
    check->add_option( "file", o.check_file, "scenario file" );
    check->add_option( "--scenario", o.scenario, "scenario file" );

    auto* align_cmd = app.add_subcommand( "align", "alignment of norms with preferences" );
    align_cmd->add_option( "--scenario", o.scenario, "scenario file" )->required();
    align_cmd->add_option( "--norm", o.norms, "norms (default: all)" )->delimiter( ',' );
    align_cmd->add_option( "--pref", o.prefs, "preferences (default: all)" )->delimiter( ',' );
    add_sampling( align_cmd, o );

    auto* ralign = app.add_subcommand( "ralign", "relative alignment of two norms" );
    ralign->add_option( "--scenario", o.scenario, "scenario file" )->required();
    ralign->add_option( "--first", o.first, "first norm" )->required();
    ralign->add_option( "--second", o.second, "second norm" )->required();
    ralign->add_option( "--pref", o.prefs, "preferences (default: all)" )->delimiter( ',' );
    add_sampling( ralign, o );

    auto* table2 = app.add_subcommand( "table2", "relative alignment orderings for the prisoner's dilemma" );
    table2->add_option( "--scenario", o.scenario, "scenario providing n0-n2 and eq7-eq10 (default: built in)" );
    table2->add_option( "--epsilon", o.epsilon, "largest score gap reported as a tie" );
    add_sampling( table2, o );

    auto* optimize = app.add_subcommand( "optimize", "search for the best norms, agents or aggregator" );
    optimize->add_option( "--scenario", o.scenario, "scenario file" )->required();
    optimize->add_option( "--search", o.search, "norms, agents or aggregator" )
        ->check( CLI::IsMember( { "norms", "agents", "aggregator" } ) );
    optimize->add_option( "--norm", o.norms, "candidate norms (default: all)" )->delimiter( ',' );
    optimize->add_option( "--pref", o.prefs, "preferences (default: all)" )->delimiter( ',' );
    optimize->add_option( "--cell", o.cells, "AGENT:VALUE=PREF matrix cell" );
    optimize->add_option( "--family", o.family, "aggregators to try" )->delimiter( ',' );
    optimize->add_option( "--weights", o.weights, "weights for weighted-mean" )->delimiter( ',' );
    optimize->add_flag( "--compose", o.compose, "apply each subset's norms together in one world" );
    add_sampling( optimize, o );

    auto* enumerate = app.add_subcommand( "enumerate", "list every path of a given length" );
    enumerate->add_option( "--scenario", o.scenario, "scenario file" )->required();
    enumerate->add_option( "--norm", o.norm, "norm to apply (default: none)" );
    enumerate->add_option( "--horizon", o.horizon, "path length" )->check( CLI::PositiveNumber );
    enumerate->add_option( "--cap", o.cap, "largest number of paths listed" );
    add_format( enumerate, o );

    std::vector<std::string> reversed( args.rbegin(), args.rend() );
    try
    {
        app.parse( reversed );
    }
    catch ( const CLI::CallForHelp& )
    {
        out << app.help();
        return ok;
    }
    catch ( const CLI::CallForAllHelp& )
    {
        out << app.help( "", CLI::AppFormatMode::All );
        return ok;
    }
    catch ( const CLI::ParseError& e )
    {
        err << "error: " << e.what() << '\n';
        return usage;
    }

    try
    {
        if ( *check )
            return cmd_check( o, out, err );
        if ( *align_cmd )
            return cmd_align( o, out, err );
        if ( *ralign )
            return cmd_ralign( o, out, err );
        if ( *table2 )
            return cmd_table2( o, out, err );
        if ( *optimize )
            return cmd_optimize( o, out, err );
        return cmd_enumerate( o, out, err );
    }
    catch ( const UsageError& e )
    {
        err << "error: " << e.what() << '\n';
        return usage;
    }
    catch ( const UnknownNorm& e )
    {
        err << "error: " << e.what() << '\n';
        return usage;
    }
    catch ( const UnknownPreference& e )
    {
        err << "error: " << e.what() << '\n';
        return usage;
    }
    catch ( const UnknownAggregator& e )
    {
        err << "error: " << e.what() << '\n';
        return usage;
    }
    catch ( const std::exception& e )
    {
        err << "error: " << e.what() << '\n';
        return runtime_failure;
    }
}

int run( int argc, const char* const* argv, std::ostream& out, std::ostream& err )
{
    std::vector<std::string> args;
    for ( int i = 1; i < argc; ++i )
        args.emplace_back( argv[ i ] );
    return run( args, out, err );
}

} // namespace normalign::cli
