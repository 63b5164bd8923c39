#pragma once

#include "normalign/alignment.hpp"
#include "normalign/world.hpp"

#include <array>
#include <optional>
#include <string>
#include <vector>

namespace normalign::pd
{

/// payoffs[a][b] is {alpha's gain, beta's gain} when alpha plays a and beta
/// plays b, with index 0 = c and 1 = d.
using Payoffs = std::array<std::array<std::array<Rational, 2>, 2>, 2>;

Payoffs standard_payoffs();

/// Two agents alpha and beta with state variables x and y starting at 0.
/// Action sets must be non-empty, duplicate-free subsets of {c, d}; throws
/// InvalidActionSet otherwise.
World build_pd( const Payoffs& payoffs = standard_payoffs(), std::vector<std::string> alpha = { "c", "d" },
                std::vector<std::string> beta = { "c", "d" } );

/// n0 (no tax), n1 (0:0, 3:0, 6:3, 9:5) and n2 (a third of each gain).
std::vector<Norm> pd_norms();

/// eq7..eq10 owned by alpha.
std::vector<PreferenceFunction> pd_preferences();

inline const Rational kDefaultEpsilon{ 1, 200 };

struct Scored
{
    std::string name;
    Rational score;
};

/// Names sorted by descending score (ties by name) and the relation between
/// each adjacent pair: '~' when they differ by at most epsilon, '>' otherwise.
struct Ordering
{
    std::vector<std::string> names;
    std::vector<char> relations;

    /// "n1 > n0 ~ n2"
    [[nodiscard]] std::string to_string() const;
    /// Chains agree when they have the same sequence of ~-groups; the order
    /// inside a group does not matter.
    [[nodiscard]] bool matches( std::string_view chain ) const;
    friend bool operator==( const Ordering&, const Ordering& ) = default;
};

Ordering classify( std::vector<Scored> scores, const Rational& epsilon = kDefaultEpsilon );

/// Splits "a > b ~ c" into groups {{a}, {b, c}}, each sorted.
std::vector<std::vector<std::string>> chain_groups( std::string_view chain );

struct PreferenceResult
{
    std::string preference;
    std::vector<AlignmentReport> reports; // n0, n1, n2
    Ordering ordering;
    bool matches = false;
};

struct OrderingRow
{
    int index = 0;
    std::vector<std::string> alpha;
    std::vector<std::string> beta;
    /// One entry, or all four preferences on the last row.
    std::vector<PreferenceResult> results;
    std::string expected;
    bool verifiable = true;

    /// Computed chain, or the chains joined by " | " when the preferences of
    /// the last row disagree.
    [[nodiscard]] std::string ordering() const;
    /// Every result matches the expected chain (and, on the last row, they
    /// share one ordering).
    [[nodiscard]] bool matches() const;
};

struct RowSpec
{
    int index;
    std::string preference; // empty for "any"
    std::vector<std::string> alpha;
    std::vector<std::string> beta;
    std::string expected;
    bool verifiable;
};

/// The 17 published configurations with their printed orderings.
const std::vector<RowSpec>& table2_rows();

/// What the table is computed on. `base` needs agents alpha and beta with
/// actions c and d; `norms` must contain n0, n1, n2 and `prefs` eq7..eq10.
struct Setup
{
    World base;
    std::vector<Norm> norms;
    std::vector<PreferenceFunction> prefs;
};

/// build_pd(), pd_norms() and pd_preferences().
Setup default_setup();

/// Runs every row. Rows with the same action sets share their samples.
/// Throws UnknownNorm / UnknownPreference when the setup lacks one.
std::vector<OrderingRow> table2( const Setup& setup, const SamplingParams& params,
                                 const Rational& epsilon = kDefaultEpsilon );
std::vector<OrderingRow> table2( const SamplingParams& params, const Rational& epsilon = kDefaultEpsilon );

} // namespace normalign::pd
