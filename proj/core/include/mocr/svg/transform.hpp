#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace mocr::svg {

/// One function in a transform list: translate, scale, rotate, skewX, skewY
/// or matrix, with its numeric arguments validated for arity.
struct TransformFunction {
  std::string name;
  std::vector<double> args;
};

/// Parses a transform attribute value. Throws TextParseError on unknown
/// functions, malformed numbers, or wrong argument counts.
std::vector<TransformFunction> parse_transform(std::string_view value);

/// Splits on whitespace/commas and parses every piece as a number.
/// Returns false on any malformed piece.
bool parse_number_list(std::string_view value, std::vector<double>& out);

/// Strict scalar parse of a complete token (no trailing junk).
bool parse_number(std::string_view token, double& out);

}  // namespace mocr::svg
