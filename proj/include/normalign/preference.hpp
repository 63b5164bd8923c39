#pragma once

#include "normalign/rational.hpp"
#include "normalign/state.hpp"

#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace normalign
{

/// 0 when `denominator` is 0, otherwise numerator / denominator. The equality
/// preferences divide by max{x, y}, which vanishes at the origin state.
Rational safe_ratio( const Rational& numerator, const Rational& denominator );

/// How much an agent prefers `after` over `before` with respect to one value,
/// scored in [-1, 1].
class PreferenceFunction
{
public:
    using Evaluator = std::function<Rational( const StateProps& before, const StateProps& after )>;

    PreferenceFunction( std::string id, Evaluator evaluator, std::string value = "", std::optional<std::string> owner = {} );

    [[nodiscard]] const std::string& id() const { return id_; }
    [[nodiscard]] const std::string& value() const { return value_; }
    [[nodiscard]] const std::optional<std::string>& owner() const { return owner_; }

    [[nodiscard]] PreferenceFunction with_owner( std::string owner ) const;
    [[nodiscard]] PreferenceFunction with_value( std::string value ) const;
    [[nodiscard]] PreferenceFunction with_id( std::string id ) const;

    /// Unchecked evaluation; use eval_pref() for the codomain check.
    [[nodiscard]] Rational raw( const StateProps& before, const StateProps& after ) const { return evaluator_( before, after ); }

private:
    std::string id_;
    std::string value_;
    std::optional<std::string> owner_;
    Evaluator evaluator_;
};

/// Evaluates and enforces the [-1, 1] codomain. Throws RangeViolation naming
/// the offending state pair, or MissingVariable.
Rational eval_pref( const PreferenceFunction& pf, const StateProps& before, const StateProps& after );

/// Maps an equality preference name or alias (equality-strict,
/// equality-own-gain, gain-equality-guard, selfish) to eq7..eq10.
/// Throws UnknownPreference.
std::string canonical_builtin( std::string_view name );
std::vector<std::string> builtin_preferences();

/// The four equality preferences over accumulated gains. `own` names the
/// owner's gain variable (x in the formulas) and `other` the counterpart (y).
PreferenceFunction builtin( std::string_view name, std::string own = "x", std::string other = "y" );

/// Degree in [0, 1] to which a state satisfies the properties tied to a value.
class SatisfactionFunction
{
public:
    using Evaluator = std::function<Rational( const StateProps& )>;

    explicit SatisfactionFunction( Evaluator evaluator ) : evaluator_{ std::move( evaluator ) } {}

    /// Throws RangeViolation outside [0, 1].
    Rational operator()( const StateProps& state ) const;

private:
    Evaluator evaluator_;
};

using Combiner = std::function<Rational( const Rational& before, const Rational& after )>;

/// Registered combiners: "difference" (after - before) and "improvement"
/// (max(0, after - before)). Registration replaces an existing name.
void register_combiner( std::string name, Combiner combiner );
std::vector<std::string> combiner_names();

/// Prf(s, s') = combiner(sat(s), sat(s')). Throws UnknownCombiner.
PreferenceFunction property_based( std::string id, SatisfactionFunction sat, std::string_view combiner = "difference" );

} // namespace normalign
