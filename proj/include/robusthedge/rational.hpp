#pragma once

#include <gmpxx.h>

#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace robusthedge {

/// Exact rational scalar. mpq_class keeps the value gcd-reduced with a
/// positive denominator as long as every construction path canonicalizes,
/// which parse_rational and the arithmetic operators do.
using Rational = mpq_class;

/// A point of Q^d (price vectors, increments, hedge positions).
using Vec = std::vector<Rational>;

/// Parses "p", "-p", "p/q" or "-p/q" with q > 0. Throws ParseError.
Rational parse_rational(std::string_view text);

/// gcd-reduced "p/q", or "p" when the denominator is 1.
std::string to_string(const Rational& value);

std::string to_string(std::span<const Rational> values);

Rational dot(std::span<const Rational> a, std::span<const Rational> b);

Vec subtract(std::span<const Rational> a, std::span<const Rational> b);

bool is_zero(std::span<const Rational> v);

Vec zeros(std::size_t n);

}  // namespace robusthedge
