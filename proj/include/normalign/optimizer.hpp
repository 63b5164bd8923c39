#pragma once

#include "normalign/alignment.hpp"

#include <span>
#include <string>
#include <vector>

namespace normalign
{

inline constexpr std::size_t kMaxCandidates = 20;

struct Candidate
{
    std::vector<std::string> members; // sorted
    Rational score;
};

/// `ranking` holds every evaluated candidate, best first; ties are broken by
/// the lexicographic order of the sorted member ids.
struct SearchResult
{
    std::vector<std::string> winner;
    Rational score;
    std::vector<Candidate> ranking;
};

enum class SubsetSemantics
{
    mean,    // aggregate the per-norm alignments of the subset
    compose, // one world applying the subset's norms in candidate order
};

/// One norm applying `norms` in order; its id joins their names with '+'.
Norm compose_norms( std::span<const Norm> norms );

/// Throws EmptyInput for no candidates, TooManyCandidates above the cap.
SearchResult best_norm_subset( std::span<const Norm> candidates, const PreferenceMatrix& prefs, const World& base,
                               const StateProps& start, const SamplingParams& params,
                               const SetAggregators& aggregators = {},
                               SubsetSemantics semantics = SubsetSemantics::mean );

/// Searches the non-empty subsets of the matrix's agents.
SearchResult best_agent_subset( const PreferenceMatrix& prefs, std::span<const Norm> norms, const World& base,
                                const StateProps& start, const SamplingParams& params,
                                const SetAggregators& aggregators = {} );

/// Tries each aggregator in the f position. Throws EmptyFamily.
SearchResult best_aggregator( std::span<const Aggregator> family, std::span<const Norm> norms,
                              const PreferenceMatrix& prefs, const World& base, const StateProps& start,
                              const SamplingParams& params, const SetAggregators& aggregators = {} );

} // namespace normalign
