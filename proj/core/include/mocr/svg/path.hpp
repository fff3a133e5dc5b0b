#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace mocr::svg {

// SVG path-data grammar. Parsing resolves implicit repeats: every coordinate
// group becomes its own PathCommand, so "L1 1 2 2" yields two L commands and
// the extra pairs of a moveto become explicit linetos ("M0 0 1 1" -> M, L).

struct PathCommand {
  char op;                    // one of MmLlHhVvCcSsQqTtAaZz
  std::vector<double> args;   // arity of op: M/L/T 2, H/V 1, C 6, S/Q 4, A 7, Z 0
};

/// Number of arguments `op` takes; throws std::invalid_argument on an
/// unknown letter.
std::size_t path_arity(char op);

/// Parses path data. Throws TextParseError with the 1-based offset of the
/// offending character in the column field (line is always 1).
std::vector<PathCommand> parse_path(std::string_view d);

/// Canonical serialization: explicit command letter per group, arguments
/// rounded to `decimals` places, single spaces between tokens.
/// parse_path(serialize_path(p)) == p up to the rounding applied.
std::string serialize_path(std::span<const PathCommand> commands, int decimals = 2);

/// Command count per the grammar above (implicit repeats counted).
std::size_t count_path_commands(std::string_view d);

}  // namespace mocr::svg
