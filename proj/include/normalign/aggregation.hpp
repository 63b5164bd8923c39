#pragma once

#include "normalign/rational.hpp"

#include <functional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace normalign
{

/// Reduces a non-empty multiset of scores in [-1, 1] to one score.
class Aggregator
{
public:
    using Reduction = std::function<Rational( std::span<const Rational> )>;

    /// Probes the reduction on constant inputs; throws InvalidAggregator if it
    /// is not idempotent there. `arity` 0 accepts any input size.
    Aggregator( std::string name, Reduction reduction, std::size_t arity = 0 );

    static Aggregator mean();
    static Aggregator min();
    static Aggregator max();
    /// Even-sized inputs give the midpoint of the two central values.
    static Aggregator median();
    /// Weights must be non-negative and sum to exactly 1. Throws InvalidWeights.
    static Aggregator weighted_mean( std::vector<Rational> weights );

    [[nodiscard]] const std::string& name() const { return name_; }

    /// 0 for any input size, otherwise the only accepted size.
    [[nodiscard]] std::size_t arity() const { return arity_; }

    /// Throws EmptyInput, InvalidWeights on an arity mismatch, RangeViolation
    /// if the result leaves [-1, 1].
    [[nodiscard]] Rational operator()( std::span<const Rational> scores ) const;

private:
    std::string name_;
    Reduction reduction_;
    std::size_t arity_;
};

/// Builtin aggregators by name: mean, min, max, median. weighted-mean needs
/// explicit weights. Throws UnknownAggregator.
Aggregator aggregator( std::string_view name, std::vector<Rational> weights = {} );
std::vector<std::string> aggregator_names();

/// Scores indexed by (agent, value): one row per agent, one column per value.
class ScoreMatrix
{
public:
    /// Throws EmptyInput for no rows/columns, InvalidMatrix for ragged rows,
    /// RangeViolation for cells outside [-1, 1].
    explicit ScoreMatrix( std::vector<std::vector<Rational>> rows );

    [[nodiscard]] std::size_t agents() const { return rows_.size(); }
    [[nodiscard]] std::size_t values() const { return rows_.front().size(); }
    [[nodiscard]] const Rational& at( std::size_t agent, std::size_t value ) const { return rows_[ agent ][ value ]; }
    [[nodiscard]] const std::vector<Rational>& row( std::size_t agent ) const { return rows_[ agent ]; }
    [[nodiscard]] std::vector<Rational> column( std::size_t value ) const;

private:
    std::vector<std::vector<Rational>> rows_;
};

enum class AggregationOrder
{
    values_first, // f({p(row_a)}_a)
    agents_first, // g({q(col_v)}_v)
};

/// One agent's preference across values (p).
Rational agg_values( std::span<const Rational> row, const Aggregator& p );

/// A group's preference for one value (q).
Rational agg_agents( std::span<const Rational> column, const Aggregator& q );

Rational agg_group( const ScoreMatrix& matrix, const Aggregator& p, const Aggregator& q, const Aggregator& f,
                    const Aggregator& g, AggregationOrder order );

/// |values-first - agents-first|; 0 when the aggregation square commutes.
Rational coherence_deviation( const ScoreMatrix& matrix, const Aggregator& p, const Aggregator& q, const Aggregator& f,
                              const Aggregator& g );

} // namespace normalign
