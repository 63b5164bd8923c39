#pragma once

#include "normalign/rational.hpp"

#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace normalign
{

/// A world state: a fixed, ordered set of named rational variables.
///
/// States produced from one another (successors, with_values) share the same
/// name table, so copying a state only copies its values.
class StateProps
{
public:
    StateProps() = default;

    /// Throws InvalidWorld on duplicate or empty names.
    explicit StateProps( std::vector<std::pair<std::string, Rational>> vars );

    [[nodiscard]] std::size_t size() const { return values_.size(); }
    [[nodiscard]] const std::string& name( std::size_t i ) const { return ( *names_ )[ i ]; }
    [[nodiscard]] const Rational& value( std::size_t i ) const { return values_[ i ]; }
    [[nodiscard]] const std::vector<Rational>& values() const { return values_; }
    [[nodiscard]] std::vector<std::string> names() const;

    [[nodiscard]] std::optional<std::size_t> index_of( std::string_view name ) const;
    [[nodiscard]] const Rational* find( std::string_view name ) const;

    /// Throws MissingVariable.
    [[nodiscard]] const Rational& at( std::string_view name ) const;

    /// Same variable names, new values (must be the same count).
    [[nodiscard]] StateProps with_values( std::vector<Rational> values ) const;

    [[nodiscard]] bool same_schema( const StateProps& other ) const;

    /// "(x=0, y=1.5)"
    [[nodiscard]] std::string to_string() const;

    friend bool operator==( const StateProps& a, const StateProps& b );
    friend bool operator!=( const StateProps& a, const StateProps& b ) { return !( a == b ); }

    /// Orders by values only; meant for states of one world.
    friend bool operator<( const StateProps& a, const StateProps& b ) { return a.values_ < b.values_; }

private:
    std::shared_ptr<const std::vector<std::string>> names_ = std::make_shared<const std::vector<std::string>>();
    std::vector<Rational> values_;
};

} // namespace normalign
