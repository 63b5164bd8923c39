#include "normalign/dsl/scenario.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

namespace normalign::dsl
{

std::string Diagnostic::to_string( std::string_view origin ) const
{
    std::ostringstream out;
    out << origin << ':' << line << ':' << column << ": " << ( severity == Severity::error ? "error" : "warning" ) << ": "
        << message;
    return out.str();
}

const NormDecl* Scenario::find_norm( std::string_view name ) const
{
    const auto it = std::find_if( norms.begin(), norms.end(), [ & ]( const NormDecl& n ) { return n.name == name; } );
    return it == norms.end() ? nullptr : &*it;
}

const PrefDecl* Scenario::find_pref( std::string_view name ) const
{
    const auto it = std::find_if( prefs.begin(), prefs.end(), [ & ]( const PrefDecl& p ) { return p.name == name; } );
    return it == prefs.end() ? nullptr : &*it;
}

bool operator==( const Scenario& a, const Scenario& b )
{
    auto same_state = []( const StateDecl& x, const StateDecl& y ) { return x.name == y.name && x.initial == y.initial; };
    auto same_agent = []( const AgentDecl& x, const AgentDecl& y ) { return x.name == y.name && x.actions == y.actions; };
    auto same_effect = []( const EffectDecl& x, const EffectDecl& y ) {
        return x.actions == y.actions && x.gains == y.gains;
    };
    auto same_norm = []( const NormDecl& x, const NormDecl& y ) {
        if ( x.name != y.name || x.tax.index() != y.tax.index() )
            return false;
        if ( const auto* e = std::get_if<ExprPtr>( &x.tax ) )
            return **e == *std::get<ExprPtr>( y.tax );
        return std::get<TaxTableDecl>( x.tax ) == std::get<TaxTableDecl>( y.tax );
    };
    auto same_pref = []( const PrefDecl& x, const PrefDecl& y ) {
        return x.name == y.name && x.owner == y.owner && *x.body == *y.body;
    };
    return std::equal( a.state.begin(), a.state.end(), b.state.begin(), b.state.end(), same_state )
           && std::equal( a.agents.begin(), a.agents.end(), b.agents.begin(), b.agents.end(), same_agent )
           && std::equal( a.effects.begin(), a.effects.end(), b.effects.begin(), b.effects.end(), same_effect )
           && std::equal( a.norms.begin(), a.norms.end(), b.norms.begin(), b.norms.end(), same_norm )
           && std::equal( a.prefs.begin(), a.prefs.end(), b.prefs.begin(), b.prefs.end(), same_pref );
}

namespace
{

// ---------------------------------------------------------------------------
// Lexer

enum class Tok
{
    ident,
    number,
    punct,
    arrow,
    end,
};

struct Token
{
    Tok kind;
    std::string text;
    SourcePos pos;
};

const std::set<std::string, std::less<>> kStatementKeywords = { "state", "agent", "effect", "norm", "pref" };
const std::set<std::string, std::less<>> kReserved = { "state", "agent",  "effect", "norm", "pref", "actions", "tax",
                                                       "table", "for",    "abs",    "max",  "min",  "ratio" };

std::vector<Token> lex( std::string_view text, std::vector<Diagnostic>& diags )
{
    std::vector<Token> tokens;
    std::size_t i = 0;
    SourcePos pos;

    auto advance = [ & ] {
        if ( text[ i ] == '\n' )
        {
            ++pos.line;
            pos.column = 1;
        }
        else
            ++pos.column;
        ++i;
    };

    while ( i < text.size() )
    {
        const char c = text[ i ];
        if ( c == '#' )
        {
            while ( i < text.size() && text[ i ] != '\n' )
                advance();
            continue;
        }
        if ( std::isspace( static_cast<unsigned char>( c ) ) )
        {
            advance();
            continue;
        }

        const SourcePos start = pos;
        if ( std::isalpha( static_cast<unsigned char>( c ) ) || c == '_' )
        {
            std::string word;
            while ( i < text.size() && ( std::isalnum( static_cast<unsigned char>( text[ i ] ) ) || text[ i ] == '_' ) )
            {
                word += text[ i ];
                advance();
            }
            tokens.push_back( { Tok::ident, std::move( word ), start } );
        }
        else if ( std::isdigit( static_cast<unsigned char>( c ) ) )
        {
            std::string number;
            while ( i < text.size() && std::isdigit( static_cast<unsigned char>( text[ i ] ) ) )
            {
                number += text[ i ];
                advance();
            }
            if ( i < text.size() && text[ i ] == '.' )
            {
                number += '.';
                advance();
                while ( i < text.size() && std::isdigit( static_cast<unsigned char>( text[ i ] ) ) )
                {
                    number += text[ i ];
                    advance();
                }
            }
            tokens.push_back( { Tok::number, std::move( number ), start } );
        }
        else if ( c == '-' && i + 1 < text.size() && text[ i + 1 ] == '>' )
        {
            advance();
            advance();
            tokens.push_back( { Tok::arrow, "->", start } );
        }
        else if ( std::string_view( "(){},=:'+-*/" ).find( c ) != std::string_view::npos )
        {
            advance();
            tokens.push_back( { Tok::punct, std::string( 1, c ), start } );
        }
        else
        {
            diags.push_back( { Severity::error, std::string( "unexpected character '" ) + c + "'", start.line, start.column } );
            advance();
        }
    }
    tokens.push_back( { Tok::end, "", pos } );
    return tokens;
}

// ---------------------------------------------------------------------------
// Parser

struct SyntaxError
{
    std::string message;
    SourcePos pos;
};

class Parser
{
public:
    Parser( std::vector<Token> tokens, std::vector<Diagnostic>& diags ) : tokens_{ std::move( tokens ) }, diags_{ diags } {}

    Scenario parse_scenario()
    {
        Scenario scenario;
        while ( peek().kind != Tok::end )
        {
            const std::size_t start = index_;
            try
            {
                parse_statement( scenario );
            }
            catch ( const SyntaxError& e )
            {
                diags_.push_back( { Severity::error, e.message, e.pos.line, e.pos.column } );
                if ( index_ == start )
                    take();
                synchronize();
            }
        }
        return scenario;
    }

private:
    const Token& peek( std::size_t ahead = 0 ) const
    {
        return tokens_[ std::min( index_ + ahead, tokens_.size() - 1 ) ];
    }

    const Token& take()
    {
        const Token& t = tokens_[ index_ ];
        if ( index_ + 1 < tokens_.size() )
            ++index_;
        return t;
    }

    bool at_punct( char c ) const { return peek().kind == Tok::punct && peek().text[ 0 ] == c; }
    bool at_word( std::string_view w ) const { return peek().kind == Tok::ident && peek().text == w; }

    static std::string describe( const Token& t )
    {
        switch ( t.kind )
        {
        case Tok::end:
            return "end of input";
        case Tok::number:
            return "number " + t.text;
        default:
            return "'" + t.text + "'";
        }
    }

    [[noreturn]] void fail( const std::string& what ) const
    {
        throw SyntaxError{ "expected " + what + ", found " + describe( peek() ), peek().pos };
    }

    void expect_punct( char c )
    {
        if ( !at_punct( c ) )
            fail( std::string( "'" ) + c + "'" );
        take();
    }

    void expect_word( std::string_view w )
    {
        if ( !at_word( w ) )
            fail( "'" + std::string( w ) + "'" );
        take();
    }

    std::pair<std::string, SourcePos> expect_ident()
    {
        if ( peek().kind != Tok::ident )
            fail( "an identifier" );
        if ( kReserved.count( peek().text ) )
            throw SyntaxError{ "'" + peek().text + "' is a reserved word", peek().pos };
        const Token& t = take();
        return { t.text, t.pos };
    }

    Rational expect_number()
    {
        bool negative = false;
        if ( at_punct( '-' ) )
        {
            take();
            negative = true;
        }
        if ( peek().kind != Tok::number )
            fail( "a number" );
        const Token& t = take();
        Rational value = *parse_decimal( t.text );
        return negative ? Rational( -value ) : value;
    }

    void synchronize()
    {
        while ( peek().kind != Tok::end && !( peek().kind == Tok::ident && kStatementKeywords.count( peek().text ) ) )
            take();
    }

    void parse_statement( Scenario& scenario )
    {
        const Token& head = peek();
        if ( head.kind != Tok::ident || !kStatementKeywords.count( head.text ) )
            fail( "a declaration (state, agent, effect, norm or pref)" );
        const SourcePos pos = head.pos;
        const std::string keyword = take().text;

        if ( keyword == "state" )
        {
            do
            {
                auto [ name, name_pos ] = expect_ident();
                expect_punct( '=' );
                scenario.state.push_back( { std::move( name ), expect_number(), name_pos } );
            } while ( at_punct( ',' ) && ( take(), true ) );
        }
        else if ( keyword == "agent" )
        {
            AgentDecl agent;
            agent.pos = pos;
            agent.name = expect_ident().first;
            expect_word( "actions" );
            expect_punct( '{' );
            do
                agent.actions.push_back( expect_ident().first );
            while ( !at_punct( '}' ) );
            take();
            scenario.agents.push_back( std::move( agent ) );
        }
        else if ( keyword == "effect" )
        {
            EffectDecl effect;
            effect.pos = pos;
            expect_punct( '(' );
            do
                effect.actions.push_back( expect_ident().first );
            while ( at_punct( ',' ) && ( take(), true ) );
            expect_punct( ')' );
            if ( peek().kind != Tok::arrow )
                fail( "'->'" );
            take();
            expect_punct( '(' );
            do
                effect.gains.push_back( expect_number() );
            while ( at_punct( ',' ) && ( take(), true ) );
            expect_punct( ')' );
            scenario.effects.push_back( std::move( effect ) );
        }
        else if ( keyword == "norm" )
        {
            NormDecl norm;
            norm.pos = pos;
            norm.name = expect_ident().first;
            expect_punct( '{' );
            expect_word( "tax" );
            expect_punct( '=' );
            if ( at_word( "table" ) )
            {
                take();
                expect_punct( '{' );
                TaxTableDecl table;
                do
                {
                    Rational gain = expect_number();
                    expect_punct( ':' );
                    table.emplace_back( std::move( gain ), expect_number() );
                    if ( at_punct( ',' ) )
                        take();
                } while ( !at_punct( '}' ) );
                take();
                norm.tax = std::move( table );
            }
            else
                norm.tax = parse_expr();
            expect_punct( '}' );
            scenario.norms.push_back( std::move( norm ) );
        }
        else
        {
            PrefDecl pref;
            pref.pos = pos;
            pref.name = expect_ident().first;
            if ( at_word( "for" ) )
            {
                take();
                pref.owner = expect_ident().first;
            }
            expect_punct( '=' );
            pref.body = parse_expr();
            scenario.prefs.push_back( std::move( pref ) );
        }
    }

    ExprPtr parse_expr()
    {
        ExprPtr lhs = parse_term();
        while ( at_punct( '+' ) || at_punct( '-' ) )
        {
            const Token& op = take();
            lhs = make_binary( op.text[ 0 ], lhs, parse_term(), op.pos );
        }
        return lhs;
    }

    ExprPtr parse_term()
    {
        ExprPtr lhs = parse_factor();
        while ( at_punct( '*' ) || at_punct( '/' ) )
        {
            const Token& op = take();
            lhs = make_binary( op.text[ 0 ], lhs, parse_factor(), op.pos );
        }
        return lhs;
    }

    ExprPtr parse_factor()
    {
        const Token& t = peek();
        const SourcePos pos = t.pos;
        if ( t.kind == Tok::number )
            return make_number( *parse_decimal( take().text ), pos );
        if ( at_punct( '-' ) )
        {
            take();
            return make_negate( parse_factor(), pos );
        }
        if ( at_punct( '(' ) )
        {
            take();
            ExprPtr inner = parse_expr();
            expect_punct( ')' );
            return inner;
        }
        if ( t.kind == Tok::ident )
        {
            if ( const auto fn = function_named( t.text ) )
            {
                take();
                expect_punct( '(' );
                std::vector<ExprPtr> args;
                do
                    args.push_back( parse_expr() );
                while ( at_punct( ',' ) && ( take(), true ) );
                expect_punct( ')' );
                check_arity( *fn, args.size(), pos );
                return make_call( *fn, std::move( args ), pos );
            }
            auto [ name, name_pos ] = expect_ident();
            bool primed = false;
            if ( at_punct( '\'' ) )
            {
                take();
                primed = true;
            }
            return make_variable( std::move( name ), primed, name_pos );
        }
        fail( "an expression" );
    }

    static void check_arity( Function fn, std::size_t count, SourcePos pos )
    {
        const bool ok = ( fn == Function::abs && count == 1 ) || ( fn == Function::ratio && count == 2 )
                        || ( ( fn == Function::max || fn == Function::min ) && count >= 2 );
        if ( !ok )
        {
            const char* expected = fn == Function::abs ? "1 argument" : fn == Function::ratio ? "2 arguments" : "at least 2 arguments";
            throw SyntaxError{ std::string( to_string( fn ) ) + " takes " + expected + ", got " + std::to_string( count ), pos };
        }
    }

    std::vector<Token> tokens_;
    std::size_t index_ = 0;
    std::vector<Diagnostic>& diags_;
};

// ---------------------------------------------------------------------------
// Validation

class Validator
{
public:
    explicit Validator( std::vector<Diagnostic>& diags ) : diags_{ diags } {}

    void run( const Scenario& s )
    {
        check_identifiers( s );
        if ( s.state.empty() )
            error( "no state variables declared", {} );
        if ( s.agents.empty() )
            error( "no agents declared", {} );

        std::set<std::string> vars;
        for ( const auto& v : s.state )
            vars.insert( v.name );
        check_effects( s );

        for ( const auto& norm : s.norms )
        {
            if ( const auto* table = std::get_if<TaxTableDecl>( &norm.tax ) )
            {
                std::set<Rational> gains;
                for ( const auto& [ gain, tax ] : *table )
                    if ( !gains.insert( gain ).second )
                        error( "norm " + norm.name + " lists gain " + format_exact( gain ) + " twice", norm.pos );
            }
            else
                for ( const Expr* ref : variable_refs( *std::get<ExprPtr>( norm.tax ) ) )
                {
                    const auto& var = std::get<Expr::Variable>( ref->node );
                    if ( var.primed )
                        error( "primed variable " + var.name + "' is not allowed in a tax expression", ref->pos );
                    else if ( var.name != "g" )
                        error( "undeclared variable " + var.name + " (tax expressions may only use g)", ref->pos );
                }
        }

        std::set<std::string> agents;
        for ( const auto& a : s.agents )
            agents.insert( a.name );
        for ( const auto& pref : s.prefs )
        {
            if ( pref.owner && !agents.count( *pref.owner ) )
                error( "undeclared agent " + *pref.owner, pref.pos );
            for ( const Expr* ref : variable_refs( *pref.body ) )
            {
                const auto& var = std::get<Expr::Variable>( ref->node );
                if ( !vars.count( var.name ) )
                    error( "undeclared variable " + var.name, ref->pos );
            }
        }
    }

private:
    void error( std::string message, SourcePos pos )
    {
        diags_.push_back( { Severity::error, std::move( message ), pos.line, pos.column } );
    }

    void check_identifiers( const Scenario& s )
    {
        std::map<std::string, std::string> seen;
        auto declare = [ & ]( const std::string& name, const char* kind, SourcePos pos ) {
            const auto [ it, fresh ] = seen.emplace( name, kind );
            if ( !fresh )
                error( "duplicate identifier " + name + " (already declared as " + it->second + ")", pos );
        };
        for ( const auto& v : s.state )
            declare( v.name, "a state variable", v.pos );
        for ( const auto& a : s.agents )
        {
            declare( a.name, "an agent", a.pos );
            std::set<std::string> labels;
            for ( const auto& action : a.actions )
                if ( !labels.insert( action ).second )
                    error( "agent " + a.name + " declares action " + action + " twice", a.pos );
        }
        for ( const auto& n : s.norms )
            declare( n.name, "a norm", n.pos );
        for ( const auto& p : s.prefs )
            declare( p.name, "a preference", p.pos );
    }

    void check_effects( const Scenario& s )
    {
        if ( s.agents.empty() || s.state.empty() )
            return;
        std::set<std::vector<std::string>> covered;
        for ( const auto& effect : s.effects )
        {
            bool valid = true;
            if ( effect.actions.size() != s.agents.size() )
            {
                error( "effect names " + std::to_string( effect.actions.size() ) + " actions but "
                               + std::to_string( s.agents.size() ) + " agents are declared",
                       effect.pos );
                valid = false;
            }
            else
                for ( std::size_t a = 0; a < s.agents.size(); ++a )
                {
                    const auto& actions = s.agents[ a ].actions;
                    if ( std::find( actions.begin(), actions.end(), effect.actions[ a ] ) == actions.end() )
                    {
                        error( effect.actions[ a ] + " is not an action of agent " + s.agents[ a ].name, effect.pos );
                        valid = false;
                    }
                }
            if ( effect.gains.size() != s.state.size() )
            {
                error( "effect gives " + std::to_string( effect.gains.size() ) + " gains but "
                               + std::to_string( s.state.size() ) + " state variables are declared",
                       effect.pos );
                valid = false;
            }
            if ( valid && !covered.insert( effect.actions ).second )
                error( "duplicate effect for this joint action", effect.pos );
        }

        // Totality over the joint action space, reported once with the first gap.
        std::vector<std::size_t> digits( s.agents.size(), 0 );
        for ( const auto& a : s.agents )
            if ( a.actions.empty() )
                return;
        while ( true )
        {
            std::vector<std::string> labels;
            for ( std::size_t a = 0; a < digits.size(); ++a )
                labels.push_back( s.agents[ a ].actions[ digits[ a ] ] );
            if ( !covered.count( labels ) )
            {
                std::string joint = "(";
                for ( std::size_t a = 0; a < labels.size(); ++a )
                    joint += ( a ? "," : "" ) + labels[ a ];
                const SourcePos pos = s.effects.empty() ? s.agents.front().pos : s.effects.back().pos;
                error( "effect table not total: missing " + joint + ")", pos );
                return;
            }
            std::size_t a = digits.size();
            while ( a-- > 0 )
            {
                if ( ++digits[ a ] < s.agents[ a ].actions.size() )
                    break;
                digits[ a ] = 0;
            }
            if ( a == static_cast<std::size_t>( -1 ) )
                return;
        }
    }

    std::vector<Diagnostic>& diags_;
};

} // namespace

ParseResult parse( std::string_view text )
{
    ParseResult result;
    auto tokens = lex( text, result.diagnostics );
    Scenario scenario = Parser( std::move( tokens ), result.diagnostics ).parse_scenario();
    if ( result.diagnostics.empty() )
        Validator( result.diagnostics ).run( scenario );

    const bool failed = std::any_of( result.diagnostics.begin(), result.diagnostics.end(),
                                     []( const Diagnostic& d ) { return d.severity == Severity::error; } );
    if ( !failed )
        result.scenario = std::move( scenario );
    return result;
}

ParseResult parse_file( const std::filesystem::path& path )
{
    std::ifstream in( path, std::ios::binary );
    if ( !in )
    {
        ParseResult result;
        result.diagnostics.push_back( { Severity::error, "cannot read " + path.string(), 1, 1 } );
        return result;
    }
    std::ostringstream text;
    text << in.rdbuf();
    return parse( text.str() );
}

std::string pretty_print( const Scenario& s )
{
    std::ostringstream out;
    if ( !s.state.empty() )
    {
        out << "state ";
        for ( std::size_t i = 0; i < s.state.size(); ++i )
            out << ( i ? ", " : "" ) << s.state[ i ].name << " = " << format_exact( s.state[ i ].initial );
        out << "\n\n";
    }
    for ( const auto& a : s.agents )
    {
        out << "agent " << a.name << " actions {";
        for ( const auto& action : a.actions )
            out << ' ' << action;
        out << " }\n";
    }
    if ( !s.agents.empty() )
        out << '\n';
    for ( const auto& e : s.effects )
    {
        out << "effect (";
        for ( std::size_t i = 0; i < e.actions.size(); ++i )
            out << ( i ? ", " : "" ) << e.actions[ i ];
        out << ") -> (";
        for ( std::size_t i = 0; i < e.gains.size(); ++i )
            out << ( i ? ", " : "" ) << format_exact( e.gains[ i ] );
        out << ")\n";
    }
    if ( !s.effects.empty() )
        out << '\n';
    for ( const auto& n : s.norms )
    {
        out << "norm " << n.name << " { tax = ";
        if ( const auto* table = std::get_if<TaxTableDecl>( &n.tax ) )
        {
            out << "table {";
            for ( std::size_t i = 0; i < table->size(); ++i )
                out << ( i ? ", " : " " ) << format_exact( ( *table )[ i ].first ) << ':'
                    << format_exact( ( *table )[ i ].second );
            out << " }";
        }
        else
            out << to_source( *std::get<ExprPtr>( n.tax ) );
        out << " }\n";
    }
    if ( !s.norms.empty() )
        out << '\n';
    for ( const auto& p : s.prefs )
    {
        out << "pref " << p.name;
        if ( p.owner )
            out << " for " << *p.owner;
        out << " = " << to_source( *p.body ) << '\n';
    }
    return out.str();
}

} // namespace normalign::dsl
