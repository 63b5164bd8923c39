#include "normalign/rational.hpp"

#include <cctype>
#include <cmath>
#include <stdexcept>

namespace normalign
{

namespace mp = boost::multiprecision;

Rational make_rational( long long numerator, long long denominator )
{
    if ( denominator == 0 )
        throw std::invalid_argument( "make_rational: zero denominator" );
    return Rational( Integer( numerator ), Integer( denominator ) );
}

std::optional<Rational> parse_decimal( std::string_view text )
{
    bool negative = false;
    std::size_t pos = 0;
    if ( pos < text.size() && ( text[ pos ] == '-' || text[ pos ] == '+' ) )
    {
        negative = text[ pos ] == '-';
        ++pos;
    }

    Integer digits = 0;
    Integer scale = 1;
    bool any_digit = false;
    bool seen_point = false;
    for ( ; pos < text.size(); ++pos )
    {
        const char c = text[ pos ];
        if ( std::isdigit( static_cast<unsigned char>( c ) ) )
        {
            digits = digits * 10 + ( c - '0' );
            if ( seen_point )
                scale *= 10;
            any_digit = true;
        }
        else if ( c == '.' && !seen_point )
            seen_point = true;
        else
            return std::nullopt;
    }
    if ( !any_digit )
        return std::nullopt;

    Rational value( digits, scale );
    return negative ? Rational( -value ) : value;
}

std::string format_fixed( const Rational& value, int places )
{
    const Integer num = mp::numerator( value );
    const Integer den = mp::denominator( value );
    const bool negative = num < 0;

    Integer scale = 1;
    for ( int i = 0; i < places; ++i )
        scale *= 10;

    const Integer scaled = ( negative ? Integer( -num ) : num ) * scale;
    Integer quotient = scaled / den;
    const Integer twice_rem = 2 * ( scaled - quotient * den );
    if ( twice_rem > den || ( twice_rem == den && ( quotient & 1 ) != 0 ) )
        ++quotient;

    std::string digits = quotient.str();
    if ( static_cast<int>( digits.size() ) <= places )
        digits.insert( 0, static_cast<std::size_t>( places ) + 1 - digits.size(), '0' );

    std::string out;
    if ( negative && quotient != 0 )
        out += '-';
    out += digits.substr( 0, digits.size() - static_cast<std::size_t>( places ) );
    if ( places > 0 )
    {
        out += '.';
        out += digits.substr( digits.size() - static_cast<std::size_t>( places ) );
    }
    return out;
}

std::string format_exact( const Rational& value )
{
    Integer den = mp::denominator( value );
    int twos = 0;
    int fives = 0;
    while ( den % 2 == 0 )
    {
        den /= 2;
        ++twos;
    }
    while ( den % 5 == 0 )
    {
        den /= 5;
        ++fives;
    }
    if ( den != 1 )
        return mp::numerator( value ).str() + "/" + mp::denominator( value ).str();

    const int places = std::max( twos, fives );
    std::string out = format_fixed( value, places );
    return out;
}

double to_double( const Rational& value )
{
    return value.convert_to<double>();
}

Rational from_double( double value )
{
    if ( !std::isfinite( value ) )
        throw std::invalid_argument( "from_double: non-finite value" );
    return Rational( value );
}

} // namespace normalign
