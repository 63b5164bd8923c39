#pragma once

#include "normalign/dsl/expr.hpp"

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

namespace normalign::dsl
{

enum class Severity
{
    error,
    warning,
};

struct Diagnostic
{
    Severity severity = Severity::error;
    std::string message;
    std::size_t line = 1;
    std::size_t column = 1;

    /// "<origin>:line:col: error: message"
    [[nodiscard]] std::string to_string( std::string_view origin = "<input>" ) const;
};

struct StateDecl
{
    std::string name;
    Rational initial;
    SourcePos pos;
};

struct AgentDecl
{
    std::string name;
    std::vector<std::string> actions;
    SourcePos pos;
};

struct EffectDecl
{
    std::vector<std::string> actions;
    std::vector<Rational> gains;
    SourcePos pos;
};

using TaxTableDecl = std::vector<std::pair<Rational, Rational>>;

struct NormDecl
{
    std::string name;
    std::variant<ExprPtr, TaxTableDecl> tax;
    SourcePos pos;
};

struct PrefDecl
{
    std::string name;
    std::optional<std::string> owner;
    ExprPtr body;
    SourcePos pos;
};

/// A parsed and validated scenario. Declarations keep their source order
/// within each kind.
struct Scenario
{
    std::vector<StateDecl> state;
    std::vector<AgentDecl> agents;
    std::vector<EffectDecl> effects;
    std::vector<NormDecl> norms;
    std::vector<PrefDecl> prefs;

    [[nodiscard]] const NormDecl* find_norm( std::string_view name ) const;
    [[nodiscard]] const PrefDecl* find_pref( std::string_view name ) const;
};

/// Structural equality; source positions are ignored.
bool operator==( const Scenario& a, const Scenario& b );

struct ParseResult
{
    std::optional<Scenario> scenario;
    std::vector<Diagnostic> diagnostics;

    [[nodiscard]] bool ok() const { return scenario.has_value(); }
};

/// Parses and validates scenario text. On failure `scenario` is empty and at
/// least one positioned error diagnostic is present.
ParseResult parse( std::string_view text );

/// Reads a file and parses it; an unreadable file yields one diagnostic.
ParseResult parse_file( const std::filesystem::path& path );

/// Canonical source text: state, agents, effects, norms, prefs.
std::string pretty_print( const Scenario& scenario );

} // namespace normalign::dsl
