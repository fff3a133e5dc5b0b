#include "mocr/svg/path.hpp"

#include <cctype>
#include <cerrno>
#include <cstdlib>
#include <stdexcept>

#include "mocr/common/error.hpp"
#include "mocr/common/text.hpp"

namespace mocr::svg {

namespace {

char to_lower(char c) { return static_cast<char>(std::tolower(static_cast<unsigned char>(c))); }

class PathScanner {
 public:
  explicit PathScanner(std::string_view d) : d_(d) {}

  std::vector<PathCommand> run() {
    std::vector<PathCommand> commands;
    skip_separators();
    while (!eof()) {
      if (!is_command(peek())) fail("expected command letter");
      char op = next();
      std::size_t arity = path_arity(op);
      bool first_group = true;
      for (;;) {
        if (!first_group) {
          // Another coordinate group repeats the command implicitly; after a
          // moveto the repeats are linetos.
          if (op == 'M') op = 'L';
          if (op == 'm') op = 'l';
        }
        PathCommand command{op, {}};
        command.args.reserve(arity);
        for (std::size_t i = 0; i < arity; ++i) {
          // Arc flags are single 0/1 digits and may run together ("0150").
          bool flag = to_lower(op) == 'a' && (i == 3 || i == 4);
          command.args.push_back(flag ? read_flag() : read_number());
        }
        commands.push_back(std::move(command));
        first_group = false;
        skip_separators();
        if (eof() || is_command(peek()) || arity == 0) break;
      }
      skip_separators();
    }
    return commands;
  }

 private:
  [[noreturn]] void fail(const std::string& message) const {
    throw TextParseError(message, 1, pos_ + 1);
  }

  bool eof() const { return pos_ >= d_.size(); }
  char peek() const { return d_[pos_]; }
  char next() { return d_[pos_++]; }

  static bool is_command(char c) {
    switch (to_lower(c)) {
      case 'm': case 'l': case 'h': case 'v': case 'c':
      case 's': case 'q': case 't': case 'a': case 'z':
        return true;
      default:
        return false;
    }
  }

  void skip_separators() {
    while (!eof() && (text::is_space(peek()) || peek() == ',')) next();
  }

  double read_flag() {
    skip_separators();
    if (eof() || (peek() != '0' && peek() != '1')) fail("expected arc flag 0 or 1");
    return next() == '1' ? 1.0 : 0.0;
  }

  double read_number() {
    skip_separators();
    if (eof()) fail("expected number");
    std::size_t start = pos_;
    if (peek() == '+' || peek() == '-') next();
    std::size_t digits_start = pos_;
    while (!eof() && std::isdigit(static_cast<unsigned char>(peek()))) next();
    if (!eof() && peek() == '.') {
      next();
      while (!eof() && std::isdigit(static_cast<unsigned char>(peek()))) next();
    }
    if (pos_ == digits_start || (pos_ == digits_start + 1 && d_[digits_start] == '.'))
      fail("expected number");
    if (!eof() && (peek() == 'e' || peek() == 'E')) {
      next();
      if (!eof() && (peek() == '+' || peek() == '-')) next();
      std::size_t exp_start = pos_;
      while (!eof() && std::isdigit(static_cast<unsigned char>(peek()))) next();
      if (pos_ == exp_start) fail("expected exponent digits");
    }
    std::string token(d_.substr(start, pos_ - start));
    errno = 0;
    char* end = nullptr;
    double value = std::strtod(token.c_str(), &end);
    if (end != token.c_str() + token.size()) fail("malformed number '" + token + "'");
    if (errno == ERANGE) fail("number out of range '" + token + "'");
    return value;
  }

  std::string_view d_;
  std::size_t pos_ = 0;
};

}  // namespace

std::size_t path_arity(char op) {
  switch (to_lower(op)) {
    case 'm': case 'l': case 't': return 2;
    case 'h': case 'v': return 1;
    case 'c': return 6;
    case 's': case 'q': return 4;
    case 'a': return 7;
    case 'z': return 0;
    default:
      throw std::invalid_argument(std::string("unknown path command '") + op + "'");
  }
}

std::vector<PathCommand> parse_path(std::string_view d) { return PathScanner(d).run(); }

std::string serialize_path(std::span<const PathCommand> commands, int decimals) {
  std::string out;
  for (const PathCommand& command : commands) {
    if (!out.empty()) out.push_back(' ');
    out.push_back(command.op);
    for (std::size_t i = 0; i < command.args.size(); ++i) {
      if (i > 0) out.push_back(' ');
      out += text::format_number(command.args[i], decimals);
    }
  }
  return out;
}

std::size_t count_path_commands(std::string_view d) { return parse_path(d).size(); }

}  // namespace mocr::svg
