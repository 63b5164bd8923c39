#pragma once

#include <stdexcept>
#include <string>

namespace normalign
{

// Every failure the library reports derives from Error, so callers (the CLI in
// particular) can separate domain failures from programming errors.
class Error : public std::runtime_error
{
public:
    using std::runtime_error::runtime_error;
};

#define NORMALIGN_ERROR( name )                                                                                    \
    class name : public Error                                                                                      \
    {                                                                                                              \
    public:                                                                                                        \
        using Error::Error;                                                                                        \
    }

// world_core
NORMALIGN_ERROR( UnknownAction );
NORMALIGN_ERROR( PartialNorm );
NORMALIGN_ERROR( EmptyActionSet );
NORMALIGN_ERROR( ExplosionCap );
NORMALIGN_ERROR( InvalidWorld );
NORMALIGN_ERROR( UnknownNorm );

// preference
NORMALIGN_ERROR( UnknownPreference );
NORMALIGN_ERROR( UnknownCombiner );
NORMALIGN_ERROR( MissingVariable );
NORMALIGN_ERROR( RangeViolation );

// aggregation
NORMALIGN_ERROR( EmptyInput );
NORMALIGN_ERROR( UnknownAggregator );
NORMALIGN_ERROR( InvalidWeights );
NORMALIGN_ERROR( InvalidAggregator );
NORMALIGN_ERROR( InvalidMatrix );

// alignment
NORMALIGN_ERROR( ZeroLength );
NORMALIGN_ERROR( ZeroSamples );

// expression evaluation
NORMALIGN_ERROR( DivisionByZero );
NORMALIGN_ERROR( UnboundVariable );

// pd harness / optimizer
NORMALIGN_ERROR( InvalidActionSet );
NORMALIGN_ERROR( TooManyCandidates );
NORMALIGN_ERROR( EmptyFamily );

#undef NORMALIGN_ERROR

} // namespace normalign
