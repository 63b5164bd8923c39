#pragma once

#include "normalign/alignment.hpp"
#include "normalign/pd.hpp"
#include "normalign/world.hpp"

#include <filesystem>
#include <random>

namespace testing
{

using normalign::Rational;

inline Rational R( long long n, long long d = 1 )
{
    return normalign::make_rational( n, d );
}

inline normalign::StateProps xy( const Rational& x, const Rational& y )
{
    return normalign::StateProps( { { "x", x }, { "y", y } } );
}

inline std::filesystem::path scenario_path( const std::string& name )
{
    return std::filesystem::path( NORMALIGN_SOURCE_DIR ) / "scenarios" / name;
}

/// Random non-negative rational with a small denominator.
inline Rational random_gain( std::mt19937_64& rng, int max_numerator = 60, int max_denominator = 6 )
{
    std::uniform_int_distribution<int> num( 0, max_numerator );
    std::uniform_int_distribution<int> den( 1, max_denominator );
    return R( num( rng ), den( rng ) );
}

/// Mean per-transition preference over every path, computed directly from
/// enumerate_paths with no shared code from the alignment module.
inline Rational brute_force_alignment( const normalign::World& normative, const normalign::PreferenceFunction& pref,
                                       std::size_t horizon )
{
    Rational total = 0;
    std::size_t transitions = 0;
    for ( const auto& path : normalign::enumerate_paths( normative, normative.initial(), horizon ) )
        for ( std::size_t i = 0; i < path.length(); ++i )
        {
            total += normalign::eval_pref( pref, path.initial( i ), path.final( i ) );
            ++transitions;
        }
    return total / transitions;
}

} // namespace testing
