#include "normalign/world.hpp"

#include "normalign/error.hpp"

#include <algorithm>
#include <limits>
#include <set>

namespace normalign
{

std::string JointAction::to_string() const
{
    std::string out = "(";
    for ( std::size_t i = 0; i < labels.size(); ++i )
    {
        if ( i )
            out += ",";
        out += labels[ i ];
    }
    return out + ")";
}

// ---------------------------------------------------------------------------
// Norm

Norm Norm::identity( std::string name )
{
    return rule( std::move( name ), []( const Rational& ) { return Rational( 0 ); } );
}

Norm Norm::table( std::string name, TaxTable taxes )
{
    return Norm( std::move( name ), std::move( taxes ) );
}

Norm Norm::rule( std::string name, TaxRule tax )
{
    return Norm( std::move( name ), std::move( tax ) );
}

Rational Norm::tax( const Rational& gain ) const
{
    if ( const auto* table = std::get_if<TaxTable>( &tax_ ) )
    {
        const auto it = table->find( gain );
        if ( it == table->end() )
            throw PartialNorm( "norm '" + name_ + "' has no tax entry for gain " + format_exact( gain ) );
        return it->second;
    }
    return std::get<TaxRule>( tax_ )( gain );
}

// ---------------------------------------------------------------------------
// World

World::World( std::vector<AgentSpec> agents, StateProps initial, EffectTable effects )
        : agents_{ std::move( agents ) }, initial_{ std::move( initial ) }, effects_{ std::move( effects ) }
{
    std::set<std::string> agent_names;
    for ( const auto& agent : agents_ )
    {
        if ( !agent_names.insert( agent.name ).second )
            throw InvalidWorld( "duplicate agent '" + agent.name + "'" );
        std::set<std::string> labels( agent.actions.begin(), agent.actions.end() );
        if ( labels.size() != agent.actions.size() )
            throw InvalidWorld( "agent '" + agent.name + "' declares an action twice" );
    }
    if ( agents_.empty() )
        throw InvalidWorld( "a world needs at least one agent" );

    for ( const auto& [ labels, gains ] : effects_ )
    {
        if ( labels.size() != agents_.size() )
            throw InvalidWorld( "effect for " + JointAction{ labels }.to_string() + " does not name one action per agent" );
        if ( gains.size() != initial_.size() )
            throw InvalidWorld( "effect for " + JointAction{ labels }.to_string() + " does not give one gain per state variable" );
    }
    rebuild_gains();
}

std::string World::norm_id() const
{
    std::string out;
    for ( const auto& norm : norms_ )
    {
        if ( !out.empty() )
            out += '+';
        out += norm.name();
    }
    return out;
}

JointAction World::joint_action( std::size_t index ) const
{
    JointAction action;
    action.labels.resize( agents_.size() );
    for ( std::size_t a = agents_.size(); a-- > 0; )
    {
        const auto& actions = agents_[ a ].actions;
        action.labels[ a ] = actions[ index % actions.size() ];
        index /= actions.size();
    }
    return action;
}

std::size_t World::joint_index( const JointAction& action ) const
{
    if ( action.labels.size() != agents_.size() )
        throw UnknownAction( "joint action " + action.to_string() + " does not name one action per agent" );
    std::size_t index = 0;
    for ( std::size_t a = 0; a < agents_.size(); ++a )
    {
        const auto& actions = agents_[ a ].actions;
        const auto it = std::find( actions.begin(), actions.end(), action.labels[ a ] );
        if ( it == actions.end() )
            throw UnknownAction( "'" + action.labels[ a ] + "' is not an action of agent '" + agents_[ a ].name + "'" );
        index = index * actions.size() + static_cast<std::size_t>( it - actions.begin() );
    }
    return index;
}

StateProps World::successor( const StateProps& state, std::size_t joint ) const
{
    const auto& gains = net_gains_.at( joint );
    if ( state.size() != gains.size() )
        throw MissingVariable( "state " + state.to_string() + " does not match the world's variables" );
    std::vector<Rational> next = state.values();
    for ( std::size_t i = 0; i < next.size(); ++i )
        next[ i ] += gains[ i ];
    return state.with_values( std::move( next ) );
}

World World::with_actions( std::string_view agent, std::vector<std::string> actions ) const
{
    auto agents = agents_;
    const auto it = std::find_if( agents.begin(), agents.end(), [ & ]( const AgentSpec& a ) { return a.name == agent; } );
    if ( it == agents.end() )
        throw InvalidWorld( "no agent named '" + std::string( agent ) + "'" );
    it->actions = std::move( actions );

    World out( std::move( agents ), initial_, effects_ );
    for ( const auto& norm : norms_ )
        out = apply_norm( out, norm );
    return out;
}

void World::require_actions() const
{
    for ( const auto& agent : agents_ )
        if ( agent.actions.empty() )
            throw EmptyActionSet( "agent '" + agent.name + "' has no actions" );
}

void World::rebuild_gains()
{
    std::size_t count = 1;
    for ( const auto& agent : agents_ )
        count *= agent.actions.size();

    net_gains_.clear();
    net_gains_.reserve( count );
    for ( std::size_t j = 0; j < count; ++j )
    {
        const auto action = joint_action( j );
        const auto it = effects_.find( action.labels );
        if ( it == effects_.end() )
            throw InvalidWorld( "effect table not total: no effect for " + action.to_string() );
        std::vector<Rational> gains = it->second;
        for ( const auto& norm : norms_ )
            for ( auto& g : gains )
                g = norm.rewrite( g );
        net_gains_.push_back( std::move( gains ) );
    }
}

World apply_norm( const World& base, const Norm& norm )
{
    World out = base;
    out.norms_.push_back( norm );
    out.rebuild_gains();
    return out;
}

Transition step( const World& world, const StateProps& state, const JointAction& action )
{
    const auto joint = world.joint_index( action );
    return Transition{ state, action, world.successor( state, joint ) };
}

// ---------------------------------------------------------------------------
// Paths

Path::Path( std::vector<Transition> transitions ) : transitions_{ std::move( transitions ) }
{
    for ( std::size_t i = 1; i < transitions_.size(); ++i )
        if ( transitions_[ i - 1 ].to != transitions_[ i ].from )
            throw InvalidWorld( "path transitions are not chained at index " + std::to_string( i ) );
}

bool operator==( const Path& a, const Path& b )
{
    if ( a.length() != b.length() )
        return false;
    for ( std::size_t i = 0; i < a.length(); ++i )
    {
        const auto& x = a.transitions_[ i ];
        const auto& y = b.transitions_[ i ];
        if ( x.from != y.from || x.action != y.action || x.to != y.to )
            return false;
    }
    return true;
}

std::uint64_t uniform_below( std::mt19937_64& rng, std::uint64_t bound )
{
    if ( bound <= 1 )
        return 0;
    // Reject the top partial bucket so every residue is equally likely.
    const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() - std::numeric_limits<std::uint64_t>::max() % bound;
    std::uint64_t draw;
    do
        draw = rng();
    while ( draw >= limit );
    return draw % bound;
}

std::size_t draw_joint_action( const World& world, std::mt19937_64& rng )
{
    std::size_t index = 0;
    for ( const auto& agent : world.agents() )
        index = index * agent.actions.size() + uniform_below( rng, agent.actions.size() );
    return index;
}

Path sample_path( const World& world, const StateProps& start, std::size_t length, std::uint64_t seed )
{
    if ( length == 0 )
        throw ZeroLength( "path length must be at least 1" );
    world.require_actions();

    std::mt19937_64 rng( seed );
    std::vector<Transition> transitions;
    transitions.reserve( length );
    StateProps state = start;
    for ( std::size_t d = 0; d < length; ++d )
    {
        const auto joint = draw_joint_action( world, rng );
        StateProps next = world.successor( state, joint );
        transitions.push_back( Transition{ state, world.joint_action( joint ), next } );
        state = std::move( next );
    }
    return Path( std::move( transitions ) );
}

std::optional<std::uint64_t> path_count( const World& world, std::size_t length, std::uint64_t cap )
{
    const std::uint64_t branching = world.joint_action_count();
    std::uint64_t count = 1;
    for ( std::size_t d = 0; d < length; ++d )
    {
        if ( branching != 0 && count > cap / branching )
            return std::nullopt;
        count *= branching;
    }
    if ( count > cap )
        return std::nullopt;
    return count;
}

std::vector<Path> enumerate_paths( const World& world, const StateProps& start, std::size_t length, std::uint64_t cap )
{
    if ( length == 0 )
        throw ZeroLength( "path length must be at least 1" );
    world.require_actions();
    const auto count = path_count( world, length, cap );
    if ( !count )
        throw ExplosionCap( "more than " + std::to_string( cap ) + " paths of length " + std::to_string( length ) );

    std::vector<Path> out;
    out.reserve( *count );
    std::vector<Transition> prefix;
    prefix.reserve( length );

    const std::size_t branching = world.joint_action_count();
    auto extend = [ & ]( auto&& self, const StateProps& state ) -> void {
        if ( prefix.size() == length )
        {
            out.emplace_back( prefix );
            return;
        }
        for ( std::size_t j = 0; j < branching; ++j )
        {
            prefix.push_back( Transition{ state, world.joint_action( j ), world.successor( state, j ) } );
            self( self, prefix.back().to );
            prefix.pop_back();
        }
    };
    extend( extend, start );
    return out;
}

} // namespace normalign
