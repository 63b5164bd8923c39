#include "normalign/dsl/compile.hpp"

#include "normalign/error.hpp"

#include <algorithm>

namespace normalign::dsl
{

namespace
{

class StateEnv final : public Env
{
public:
    StateEnv( const StateProps& before, const StateProps& after ) : before_{ before }, after_{ after } {}

    std::optional<Rational> lookup( std::string_view name, bool primed ) const override
    {
        const Rational* value = ( primed ? after_ : before_ ).find( name );
        if ( !value )
            return std::nullopt;
        return *value;
    }

private:
    const StateProps& before_;
    const StateProps& after_;
};

} // namespace

Norm compile_norm( const NormDecl& decl )
{
    if ( const auto* table = std::get_if<TaxTableDecl>( &decl.tax ) )
        return Norm::table( decl.name, Norm::TaxTable( table->begin(), table->end() ) );

    ExprPtr tax = std::get<ExprPtr>( decl.tax );
    return Norm::rule( decl.name, [ tax ]( const Rational& gain ) {
        MapEnv env;
        env.bind( "g", gain );
        return eval_expr( *tax, env );
    } );
}

PreferenceFunction compile_pref( const PrefDecl& decl )
{
    ExprPtr body = decl.body;
    auto evaluator = [ body ]( const StateProps& before, const StateProps& after ) {
        try
        {
            return eval_expr( *body, StateEnv( before, after ) );
        }
        catch ( const UnboundVariable& e )
        {
            throw MissingVariable( e.what() );
        }
    };
    return PreferenceFunction( decl.name, std::move( evaluator ), "", decl.owner );
}

StateProps initial_state( const Scenario& scenario )
{
    std::vector<std::pair<std::string, Rational>> vars;
    for ( const auto& v : scenario.state )
        vars.emplace_back( v.name, v.initial );
    return StateProps( std::move( vars ) );
}

World build_world( const Scenario& scenario )
{
    std::vector<AgentSpec> agents;
    for ( const auto& a : scenario.agents )
        agents.push_back( { a.name, a.actions } );
    EffectTable effects;
    for ( const auto& e : scenario.effects )
        effects.emplace( e.actions, e.gains );
    return World( std::move( agents ), initial_state( scenario ), std::move( effects ) );
}

const Norm& CompiledScenario::norm( std::string_view name ) const
{
    const auto it = std::find_if( norms.begin(), norms.end(), [ & ]( const Norm& n ) { return n.name() == name; } );
    if ( it == norms.end() )
        throw UnknownNorm( "unknown norm " + std::string( name ) );
    return *it;
}

const PreferenceFunction& CompiledScenario::pref( std::string_view name ) const
{
    const auto it = std::find_if( prefs.begin(), prefs.end(), [ & ]( const PreferenceFunction& p ) { return p.id() == name; } );
    if ( it == prefs.end() )
        throw UnknownPreference( "unknown preference " + std::string( name ) );
    return *it;
}

CompiledScenario compile( const Scenario& scenario )
{
    CompiledScenario out{ build_world( scenario ), {}, {} };
    for ( const auto& n : scenario.norms )
        out.norms.push_back( compile_norm( n ) );
    for ( const auto& p : scenario.prefs )
        out.prefs.push_back( compile_pref( p ) );
    return out;
}

} // namespace normalign::dsl
