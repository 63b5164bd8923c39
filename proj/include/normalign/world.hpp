#pragma once

#include "normalign/rational.hpp"
#include "normalign/state.hpp"

#include <cstdint>
#include <functional>
#include <map>
#include <random>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace normalign
{

inline constexpr std::size_t kDefaultPathCap = 1'000'000;

/// One action label per agent, in agent declaration order.
struct JointAction
{
    std::vector<std::string> labels;

    [[nodiscard]] std::string to_string() const;
    friend bool operator==( const JointAction&, const JointAction& ) = default;
};

struct Transition
{
    StateProps from;
    JointAction action;
    StateProps to;
};

/// A norm rewrites each per-agent, per-step raw gain g into g - tax(g).
class Norm
{
public:
    using TaxTable = std::map<Rational, Rational>;
    using TaxRule = std::function<Rational( const Rational& gain )>;

    static Norm identity( std::string name = "n0" );
    static Norm table( std::string name, TaxTable taxes );
    static Norm rule( std::string name, TaxRule tax );

    [[nodiscard]] const std::string& name() const { return name_; }
    [[nodiscard]] const TaxTable* tax_table() const { return std::get_if<TaxTable>( &tax_ ); }

    /// Throws PartialNorm when a table norm has no entry for `gain`.
    [[nodiscard]] Rational tax( const Rational& gain ) const;
    [[nodiscard]] Rational rewrite( const Rational& gain ) const { return gain - tax( gain ); }

private:
    Norm( std::string name, std::variant<TaxTable, TaxRule> tax ) : name_{ std::move( name ) }, tax_{ std::move( tax ) } {}

    std::string name_;
    std::variant<TaxTable, TaxRule> tax_;
};

struct AgentSpec
{
    std::string name;
    std::vector<std::string> actions;
};

/// Raw (pre-norm) gain vector per joint action, keyed by action labels. Gain i
/// is added to state variable i.
using EffectTable = std::map<std::vector<std::string>, std::vector<Rational>>;

/// A generative labelled transition system: an initial state plus a
/// deterministic successor rule over simultaneous joint actions.
///
/// Worlds are immutable values. apply_norm() returns a new world whose
/// successor passes every raw gain through the attached norms, in the order
/// they were applied.
class World
{
public:
    /// Throws InvalidWorld when the effect table is not total over the joint
    /// action space, an effect has the wrong arity, or names repeat.
    World( std::vector<AgentSpec> agents, StateProps initial, EffectTable effects );

    [[nodiscard]] const std::vector<AgentSpec>& agents() const { return agents_; }
    [[nodiscard]] const StateProps& initial() const { return initial_; }
    [[nodiscard]] const EffectTable& effects() const { return effects_; }
    [[nodiscard]] const std::vector<Norm>& norms() const { return norms_; }

    /// Names of the applied norms joined with '+'; empty for the base world.
    [[nodiscard]] std::string norm_id() const;

    [[nodiscard]] std::size_t joint_action_count() const { return net_gains_.size(); }
    [[nodiscard]] JointAction joint_action( std::size_t index ) const;

    /// Throws UnknownAction.
    [[nodiscard]] std::size_t joint_index( const JointAction& action ) const;

    /// Norm-rewritten gains for a joint action index.
    [[nodiscard]] const std::vector<Rational>& gains( std::size_t joint ) const { return net_gains_[ joint ]; }

    [[nodiscard]] StateProps successor( const StateProps& state, std::size_t joint ) const;

    /// Same world with `agent` restricted to (or extended to) `actions`; the
    /// effect table must cover the new joint action space.
    [[nodiscard]] World with_actions( std::string_view agent, std::vector<std::string> actions ) const;

    /// Throws EmptyActionSet if some agent has no actions.
    void require_actions() const;

private:
    friend World apply_norm( const World& base, const Norm& norm );

    void rebuild_gains();

    std::vector<AgentSpec> agents_;
    StateProps initial_;
    EffectTable effects_;
    std::vector<Norm> norms_;
    std::vector<std::vector<Rational>> net_gains_;
};

/// Throws PartialNorm if some reachable raw gain has no rewrite.
World apply_norm( const World& base, const Norm& norm );

/// Throws UnknownAction.
Transition step( const World& world, const StateProps& state, const JointAction& action );

/// A chained sequence of transitions: final(i) == initial(i + 1).
class Path
{
public:
    Path() = default;

    /// Throws InvalidWorld if the chain is broken.
    explicit Path( std::vector<Transition> transitions );

    [[nodiscard]] std::size_t length() const { return transitions_.size(); }
    [[nodiscard]] const std::vector<Transition>& transitions() const { return transitions_; }
    [[nodiscard]] const StateProps& initial( std::size_t i ) const { return transitions_.at( i ).from; }
    [[nodiscard]] const StateProps& final( std::size_t i ) const { return transitions_.at( i ).to; }

    friend bool operator==( const Path& a, const Path& b );

private:
    std::vector<Transition> transitions_;
};

/// Unbiased draw from [0, bound) using only the raw engine output, so the
/// sequence is identical on every standard library.
std::uint64_t uniform_below( std::mt19937_64& rng, std::uint64_t bound );

/// Draws each agent's action independently and uniformly, in agent order, and
/// returns the joint action index.
std::size_t draw_joint_action( const World& world, std::mt19937_64& rng );

/// Throws ZeroLength for length 0 and EmptyActionSet.
Path sample_path( const World& world, const StateProps& start, std::size_t length, std::uint64_t seed );

/// Number of distinct length-`length` action sequences, or nullopt if it
/// exceeds `cap`.
std::optional<std::uint64_t> path_count( const World& world, std::size_t length, std::uint64_t cap );

/// All length-`length` paths in lexicographic joint-action order.
/// Throws ExplosionCap when more than `cap` paths exist.
std::vector<Path> enumerate_paths( const World& world, const StateProps& start, std::size_t length,
                                   std::uint64_t cap = kDefaultPathCap );

} // namespace normalign
