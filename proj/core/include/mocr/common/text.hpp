#pragma once

#include <string>
#include <string_view>

namespace mocr::text {

/// Formats `value` with at most `decimals` fractional digits, trailing zeros
/// and a bare trailing dot stripped. Negative zero collapses to "0".
/// Non-finite values format as "inf"/"-inf"/"nan".
std::string format_number(double value, int decimals = 2);

/// Collapses every run of ASCII whitespace to a single space and drops
/// leading/trailing whitespace.
std::string collapse_whitespace(std::string_view s);

/// Like collapse_whitespace but keeps one space at either edge so
/// inter-span spacing survives; idempotent.
std::string collapse_whitespace_keep_edges(std::string_view s);

std::string_view trim(std::string_view s);

bool starts_with(std::string_view s, std::string_view prefix);

/// ASCII whitespace per the XML and SVG grammars.
constexpr bool is_space(char c) {
  return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f';
}

}  // namespace mocr::text
