#include "mocr/svg/transform.hpp"

#include <cctype>
#include <cerrno>
#include <cstdlib>

#include "mocr/common/error.hpp"
#include "mocr/common/text.hpp"

namespace mocr::svg {

namespace {

bool arity_ok(std::string_view name, std::size_t n) {
  if (name == "translate" || name == "scale") return n == 1 || n == 2;
  if (name == "rotate") return n == 1 || n == 3;
  if (name == "skewX" || name == "skewY") return n == 1;
  if (name == "matrix") return n == 6;
  return false;
}

}  // namespace

bool parse_number(std::string_view token, double& out) {
  if (token.empty()) return false;
  std::string buf(token);
  errno = 0;
  char* end = nullptr;
  out = std::strtod(buf.c_str(), &end);
  return end == buf.c_str() + buf.size() && errno != ERANGE;
}

bool parse_number_list(std::string_view value, std::vector<double>& out) {
  out.clear();
  std::size_t i = 0;
  while (i < value.size()) {
    while (i < value.size() && (text::is_space(value[i]) || value[i] == ',')) ++i;
    if (i >= value.size()) break;
    std::size_t start = i;
    while (i < value.size() && !text::is_space(value[i]) && value[i] != ',') ++i;
    double number;
    if (!parse_number(value.substr(start, i - start), number)) return false;
    out.push_back(number);
  }
  return true;
}

std::vector<TransformFunction> parse_transform(std::string_view value) {
  auto fail = [&](const std::string& why, std::size_t at) -> void {
    throw TextParseError("bad transform: " + why, 1, at + 1);
  };
  std::vector<TransformFunction> functions;
  std::size_t i = 0;
  for (;;) {
    while (i < value.size() && (text::is_space(value[i]) || value[i] == ',')) ++i;
    if (i >= value.size()) break;
    std::size_t start = i;
    while (i < value.size() && std::isalpha(static_cast<unsigned char>(value[i]))) ++i;
    std::string name(value.substr(start, i - start));
    while (i < value.size() && text::is_space(value[i])) ++i;
    if (i >= value.size() || value[i] != '(') fail("expected '('", i);
    ++i;
    std::size_t args_start = i;
    while (i < value.size() && value[i] != ')') ++i;
    if (i >= value.size()) fail("unterminated function", i);
    TransformFunction function;
    function.name = std::move(name);
    if (!parse_number_list(value.substr(args_start, i - args_start), function.args))
      fail("malformed arguments", args_start);
    ++i;
    if (!arity_ok(function.name, function.args.size()))
      fail("wrong argument count for " + function.name, start);
    functions.push_back(std::move(function));
  }
  return functions;
}

}  // namespace mocr::svg
