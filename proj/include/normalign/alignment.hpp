#pragma once

#include "normalign/aggregation.hpp"
#include "normalign/preference.hpp"
#include "normalign/world.hpp"

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace normalign
{

enum class Method
{
    exhaustive,
    monte_carlo,
};

std::string_view to_string( Method method );

struct SamplingParams
{
    std::size_t samples = 20'000;
    std::size_t horizon = 10;
    std::uint64_t seed = 42;
    Method method = Method::monte_carlo;
    /// Worker threads for sampling; 0 picks the hardware concurrency. Has no
    /// effect on results.
    unsigned threads = 0;
    std::uint64_t path_cap = kDefaultPathCap;
};

/// Degree of alignment of a norm with one preference, plus how it was
/// estimated. `score` is exact in both modes: the Monte Carlo estimate is the
/// exact mean of the sampled per-transition preferences.
struct AlignmentReport
{
    Rational score;
    Method method = Method::monte_carlo;
    std::size_t horizon = 0;
    std::optional<std::size_t> samples;
    std::optional<std::uint64_t> seed;
    /// Sample standard deviation of per-path means over sqrt(samples).
    std::optional<double> standard_error;
    std::string norm_id;
    std::string preference_id;
    StateProps initial;
};

/// Seed of the sample stream for one norm; independent of every other key.
std::uint64_t stream_seed( std::uint64_t seed, std::string_view key );

/// Seed of the `index`-th path of a stream.
std::uint64_t path_seed( std::uint64_t stream, std::uint64_t index );

// ---------------------------------------------------------------------------
// Single world, several preferences. These evaluate an already normative
// world; every preference sees the same paths.

/// Averages over every length-`horizon` path. Throws ZeroLength,
/// ExplosionCap, EmptyActionSet, RangeViolation.
std::vector<AlignmentReport> align_exhaustive_world( const World& normative, std::span<const PreferenceFunction> prefs,
                                                     const StateProps& start, std::size_t horizon,
                                                     std::uint64_t cap = kDefaultPathCap );

/// Averages over `params.samples` sampled paths; path i is
/// sample_path(normative, start, horizon, path_seed(stream_seed(seed, stream_key), i)).
/// Throws ZeroLength, ZeroSamples, EmptyActionSet, RangeViolation.
std::vector<AlignmentReport> align_mc_world( const World& normative, std::span<const PreferenceFunction> prefs,
                                             const StateProps& start, const SamplingParams& params,
                                             std::string_view stream_key );

// ---------------------------------------------------------------------------
// Alignment of a norm applied to a base world. The sample stream is keyed by
// the resulting world's norm id, so adding norms never perturbs others.

AlignmentReport align_exhaustive( const World& base, const Norm& norm, const PreferenceFunction& pref,
                                  const StateProps& start, std::size_t horizon, std::uint64_t cap = kDefaultPathCap );

AlignmentReport align_mc( const World& base, const Norm& norm, const PreferenceFunction& pref, const StateProps& start,
                          const SamplingParams& params );

/// Dispatches on params.method; one report per preference.
std::vector<AlignmentReport> align_multi( const World& base, const Norm& norm, std::span<const PreferenceFunction> prefs,
                                          const StateProps& start, const SamplingParams& params );

AlignmentReport align( const World& base, const Norm& norm, const PreferenceFunction& pref, const StateProps& start,
                       const SamplingParams& params );

struct RelativeAlignment
{
    AlignmentReport first;
    AlignmentReport second;
    Rational score; // first.score - second.score
};

/// How much more `first` is aligned with `pref` than `second`.
RelativeAlignment relative_align( const Norm& first, const Norm& second, const PreferenceFunction& pref,
                                  const World& base, const StateProps& start, const SamplingParams& params );

// ---------------------------------------------------------------------------
// Set-level alignment

/// One preference per (agent, value) cell.
class PreferenceMatrix
{
public:
    /// Throws EmptyInput or InvalidMatrix.
    PreferenceMatrix( std::vector<std::string> agents, std::vector<std::string> values,
                      std::vector<std::vector<PreferenceFunction>> cells );

    [[nodiscard]] const std::vector<std::string>& agents() const { return agents_; }
    [[nodiscard]] const std::vector<std::string>& values() const { return values_; }
    [[nodiscard]] const PreferenceFunction& at( std::size_t agent, std::size_t value ) const
    {
        return cells_[ agent ][ value ];
    }

private:
    std::vector<std::string> agents_;
    std::vector<std::string> values_;
    std::vector<std::vector<PreferenceFunction>> cells_;
};

struct SetAggregators
{
    Aggregator p = Aggregator::mean();    // across values, per agent
    Aggregator q = Aggregator::mean();    // across agents, per value
    Aggregator f = Aggregator::mean();    // across agents after p
    Aggregator g = Aggregator::mean();    // across values after q
    Aggregator norms = Aggregator::mean(); // across norms
    AggregationOrder order = AggregationOrder::values_first;
};

/// Alignment of every (norm, agent, value) triple.
struct AlignmentCube
{
    std::vector<std::string> norms;
    std::vector<std::string> agents;
    std::vector<std::string> values;
    std::vector<std::vector<std::vector<AlignmentReport>>> reports; // [norm][agent][value]

    /// Scores of one norm restricted to `agent_subset` (all agents if empty).
    [[nodiscard]] ScoreMatrix matrix( std::size_t norm, std::span<const std::size_t> agent_subset = {} ) const;
};

AlignmentCube alignment_cube( std::span<const Norm> norms, const PreferenceMatrix& prefs, const World& base,
                              const StateProps& start, const SamplingParams& params );

/// Reduces a norm subset and agent subset of the cube (empty = all): each
/// norm's matrix via agg_group, then across norms.
Rational reduce_cube( const AlignmentCube& cube, const SetAggregators& aggregators,
                      std::span<const std::size_t> norm_subset = {}, std::span<const std::size_t> agent_subset = {} );

struct SetAlignment
{
    Rational score;
    std::vector<Rational> per_norm;
    AlignmentCube cube;
};

/// Alignment of a set of norms with a set of values for a group of agents.
SetAlignment align_sets( std::span<const Norm> norms, const PreferenceMatrix& prefs, const World& base,
                         const StateProps& start, const SamplingParams& params,
                         const SetAggregators& aggregators = {} );

} // namespace normalign
