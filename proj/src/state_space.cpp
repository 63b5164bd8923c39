#include "normalign/state_space.hpp"

#include "normalign/error.hpp"

namespace normalign
{

StateSpace::StateSpace( const World& world, const StateProps& start )
        : world_{ world }, branching_{ world.joint_action_count() }
{
    intern( start );
}

StateSpace::StateId StateSpace::successor( StateId from, std::size_t joint )
{
    const auto slot = transition_id( from, joint );
    if ( next_[ slot ] == kUnexplored )
    {
        const StateId to = intern( world_.successor( states_[ from ], joint ) );
        next_[ slot ] = to;
    }
    return next_[ slot ];
}

StateSpace::StateId StateSpace::intern( StateProps state )
{
    const auto it = index_.find( state );
    if ( it != index_.end() )
        return it->second;
    if ( states_.size() >= kUnexplored )
        throw ExplosionCap( "state space exceeds 2^32 states" );

    const auto id = static_cast<StateId>( states_.size() );
    index_.emplace( state, id );
    states_.push_back( std::move( state ) );
    next_.resize( next_.size() + branching_, kUnexplored );
    return id;
}

} // namespace normalign
