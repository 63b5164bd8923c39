#pragma once

#include "normalign/world.hpp"

#include <cstdint>
#include <map>
#include <vector>

namespace normalign
{

/// Explicit, lazily explored view of a world's reachable states.
///
/// States are interned on first visit and successors are memoized per
/// (state, joint action), so repeated walks over the same region of the
/// state space only touch integer tables. Not thread-safe; give each worker
/// its own instance.
class StateSpace
{
public:
    using StateId = std::uint32_t;
    using TransitionId = std::uint64_t;

    StateSpace( const World& world, const StateProps& start );

    [[nodiscard]] const World& world() const { return world_; }
    [[nodiscard]] StateId start() const { return 0; }
    [[nodiscard]] std::size_t state_count() const { return states_.size(); }
    [[nodiscard]] std::size_t joint_action_count() const { return branching_; }
    [[nodiscard]] const StateProps& state( StateId id ) const { return states_[ id ]; }

    StateId successor( StateId from, std::size_t joint );

    [[nodiscard]] TransitionId transition_id( StateId from, std::size_t joint ) const
    {
        return static_cast<TransitionId>( from ) * branching_ + joint;
    }
    [[nodiscard]] StateId transition_source( TransitionId t ) const { return static_cast<StateId>( t / branching_ ); }
    [[nodiscard]] std::size_t transition_action( TransitionId t ) const { return static_cast<std::size_t>( t % branching_ ); }

    /// Upper bound (exclusive) on transition ids issued so far.
    [[nodiscard]] TransitionId transition_bound() const { return static_cast<TransitionId>( states_.size() ) * branching_; }

private:
    static constexpr StateId kUnexplored = ~StateId{ 0 };

    StateId intern( StateProps state );

    const World& world_;
    std::size_t branching_;
    std::vector<StateProps> states_;
    std::map<StateProps, StateId> index_;
    std::vector<StateId> next_;
};

} // namespace normalign
