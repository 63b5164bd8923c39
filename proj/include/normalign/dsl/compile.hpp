#pragma once

#include "normalign/dsl/scenario.hpp"
#include "normalign/preference.hpp"
#include "normalign/world.hpp"

#include <string_view>
#include <vector>

namespace normalign::dsl
{

/// Table taxes become a table norm; expressions are evaluated with g bound to
/// the raw gain.
Norm compile_norm( const NormDecl& decl );

/// Unprimed names read the earlier state, primed names the later one. A name
/// missing from the state raises MissingVariable.
PreferenceFunction compile_pref( const PrefDecl& decl );

StateProps initial_state( const Scenario& scenario );
World build_world( const Scenario& scenario );

struct CompiledScenario
{
    World world;
    std::vector<Norm> norms;
    std::vector<PreferenceFunction> prefs;

    /// Throws UnknownNorm / UnknownPreference.
    [[nodiscard]] const Norm& norm( std::string_view name ) const;
    [[nodiscard]] const PreferenceFunction& pref( std::string_view name ) const;
};

CompiledScenario compile( const Scenario& scenario );

} // namespace normalign::dsl
