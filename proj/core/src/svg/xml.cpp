#include "mocr/svg/xml.hpp"

#include <algorithm>
#include <cstdint>

#include "mocr/common/error.hpp"
#include "mocr/common/text.hpp"

namespace mocr::svg {

namespace {

bool is_name_start(char c) {
  return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || c == '_' || c == ':' ||
         static_cast<unsigned char>(c) >= 0x80;
}

bool is_name_char(char c) {
  return is_name_start(c) || (c >= '0' && c <= '9') || c == '-' || c == '.';
}

void append_utf8(std::string& out, std::uint32_t cp) {
  if (cp <= 0x7f) {
    out.push_back(static_cast<char>(cp));
  } else if (cp <= 0x7ff) {
    out.push_back(static_cast<char>(0xc0 | (cp >> 6)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3f)));
  } else if (cp <= 0xffff) {
    out.push_back(static_cast<char>(0xe0 | (cp >> 12)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3f)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3f)));
  } else {
    out.push_back(static_cast<char>(0xf0 | (cp >> 18)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 12) & 0x3f)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3f)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3f)));
  }
}

class Parser {
 public:
  explicit Parser(std::string_view input) : input_(input) {}

  XmlElement parse_document() {
    skip_prolog();
    if (eof() || peek() != '<') fail("expected root element");
    XmlElement root = parse_element();
    skip_misc();
    if (!eof()) fail("content after root element");
    return root;
  }

 private:
  [[noreturn]] void fail(const std::string& message) const {
    throw TextParseError(message, line_, column_);
  }

  bool eof() const { return pos_ >= input_.size(); }
  char peek() const { return input_[pos_]; }
  bool peek_is(std::string_view s) const { return text::starts_with(input_.substr(pos_), s); }

  char advance() {
    char c = input_[pos_++];
    if (c == '\n') {
      ++line_;
      column_ = 1;
    } else {
      ++column_;
    }
    return c;
  }

  void expect(char c, const char* what) {
    if (eof() || peek() != c) fail(std::string("expected ") + what);
    advance();
  }

  void skip_whitespace() {
    while (!eof() && text::is_space(peek())) advance();
  }

  // Scans past `terminator`, failing at end of input.
  void skip_until(std::string_view terminator, const char* what) {
    while (!eof()) {
      if (peek_is(terminator)) {
        for (std::size_t i = 0; i < terminator.size(); ++i) advance();
        return;
      }
      advance();
    }
    fail(std::string("unterminated ") + what);
  }

  // XML declaration, comments, PIs, DOCTYPE before the root element.
  void skip_prolog() {
    for (;;) {
      skip_whitespace();
      if (peek_is("<?")) {
        skip_until("?>", "processing instruction");
      } else if (peek_is("<!--")) {
        skip_comment();
      } else if (peek_is("<!DOCTYPE")) {
        skip_doctype();
      } else {
        return;
      }
    }
  }

  // Comments and PIs allowed after the root element.
  void skip_misc() {
    for (;;) {
      skip_whitespace();
      if (peek_is("<?")) {
        skip_until("?>", "processing instruction");
      } else if (peek_is("<!--")) {
        skip_comment();
      } else {
        return;
      }
    }
  }

  void skip_comment() {
    for (std::size_t i = 0; i < 4; ++i) advance();  // "<!--"
    skip_until("-->", "comment");
  }

  void skip_doctype() {
    // Internal subsets nest '[' ... ']'; entity declarations inside are not
    // supported, only skipped.
    int bracket_depth = 0;
    while (!eof()) {
      char c = advance();
      if (c == '[') ++bracket_depth;
      if (c == ']') --bracket_depth;
      if (c == '>' && bracket_depth <= 0) return;
    }
    fail("unterminated DOCTYPE");
  }

  std::string parse_name() {
    if (eof() || !is_name_start(peek())) fail("expected name");
    std::string name;
    while (!eof() && is_name_char(peek())) name.push_back(advance());
    return name;
  }

  std::string decode_reference() {
    // Caller consumed '&'.
    std::string entity;
    while (!eof() && peek() != ';') {
      entity.push_back(advance());
      if (entity.size() > 10) fail("malformed entity reference");
    }
    expect(';', "';' ending entity reference");
    if (entity == "lt") return "<";
    if (entity == "gt") return ">";
    if (entity == "amp") return "&";
    if (entity == "apos") return "'";
    if (entity == "quot") return "\"";
    if (!entity.empty() && entity[0] == '#') {
      std::uint32_t cp = 0;
      bool ok = false;
      std::size_t i = 1;
      int base = 10;
      if (i < entity.size() && (entity[i] == 'x' || entity[i] == 'X')) {
        base = 16;
        ++i;
      }
      for (; i < entity.size(); ++i) {
        char c = entity[i];
        int digit;
        if (c >= '0' && c <= '9') digit = c - '0';
        else if (base == 16 && c >= 'a' && c <= 'f') digit = c - 'a' + 10;
        else if (base == 16 && c >= 'A' && c <= 'F') digit = c - 'A' + 10;
        else fail("malformed character reference");
        cp = cp * static_cast<std::uint32_t>(base) + static_cast<std::uint32_t>(digit);
        if (cp > 0x10ffff) fail("character reference out of range");
        ok = true;
      }
      if (!ok) fail("malformed character reference");
      std::string out;
      append_utf8(out, cp);
      return out;
    }
    fail("unknown entity '&" + entity + ";'");
  }

  std::string parse_attribute_value() {
    if (eof() || (peek() != '"' && peek() != '\'')) fail("expected quoted attribute value");
    const char quote = advance();
    std::string value;
    for (;;) {
      if (eof()) fail("unterminated attribute value");
      char c = peek();
      if (c == quote) {
        advance();
        return value;
      }
      if (c == '<') fail("'<' in attribute value");
      if (c == '&') {
        advance();
        value += decode_reference();
      } else {
        value.push_back(advance());
      }
    }
  }

  XmlElement parse_element() {
    XmlElement element;
    element.line = line_;
    element.column = column_;
    expect('<', "'<'");
    element.name = parse_name();
    for (;;) {
      bool saw_space = !eof() && text::is_space(peek());
      skip_whitespace();
      if (eof()) fail("unterminated start tag");
      if (peek() == '/') {
        advance();
        expect('>', "'>' after '/'");
        return element;
      }
      if (peek() == '>') {
        advance();
        break;
      }
      if (!saw_space) fail("expected whitespace before attribute");
      std::string attr_name = parse_name();
      if (element.attribute(attr_name)) fail("duplicate attribute '" + attr_name + "'");
      skip_whitespace();
      expect('=', "'=' after attribute name");
      skip_whitespace();
      element.attributes.push_back({std::move(attr_name), parse_attribute_value()});
    }
    parse_content(element);
    return element;
  }

  void parse_content(XmlElement& element) {
    std::string pending_text;
    auto flush_text = [&] {
      if (!pending_text.empty()) {
        element.children.emplace_back(XmlText{std::move(pending_text)});
        pending_text.clear();
      }
    };
    for (;;) {
      if (eof()) fail("unterminated element '" + element.name + "'");
      char c = peek();
      if (c == '<') {
        if (peek_is("</")) {
          flush_text();
          advance();
          advance();
          std::string close_name = parse_name();
          if (close_name != element.name)
            fail("mismatched end tag '</" + close_name + ">' for '<" + element.name + ">'");
          skip_whitespace();
          expect('>', "'>' ending end tag");
          return;
        }
        if (peek_is("<!--")) {
          skip_comment();
          continue;
        }
        if (peek_is("<![CDATA[")) {
          for (std::size_t i = 0; i < 9; ++i) advance();
          while (!eof() && !peek_is("]]>")) pending_text.push_back(advance());
          if (eof()) fail("unterminated CDATA section");
          for (std::size_t i = 0; i < 3; ++i) advance();
          continue;
        }
        if (peek_is("<?")) {
          skip_until("?>", "processing instruction");
          continue;
        }
        if (peek_is("<!")) fail("unexpected markup declaration");
        flush_text();
        element.children.emplace_back(parse_element());
        continue;
      }
      if (c == '&') {
        advance();
        pending_text += decode_reference();
        continue;
      }
      pending_text.push_back(advance());
    }
  }

  std::string_view input_;
  std::size_t pos_ = 0;
  std::size_t line_ = 1;
  std::size_t column_ = 1;
};

void escape_into(std::string& out, std::string_view s, bool attribute) {
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"':
        if (attribute) {
          out += "&quot;";
        } else {
          out.push_back(c);
        }
        break;
      default: out.push_back(c);
    }
  }
}

void serialize_into(std::string& out, const XmlElement& element) {
  out.push_back('<');
  out += element.name;
  for (const XmlAttribute& attr : element.attributes) {
    out.push_back(' ');
    out += attr.name;
    out += "=\"";
    escape_into(out, attr.value, true);
    out.push_back('"');
  }
  if (element.children.empty()) {
    out += "/>";
    return;
  }
  out.push_back('>');
  for (const XmlNode& child : element.children) {
    if (const auto* text = std::get_if<XmlText>(&child)) {
      escape_into(out, text->text, false);
    } else {
      serialize_into(out, std::get<XmlElement>(child));
    }
  }
  out += "</";
  out += element.name;
  out.push_back('>');
}

}  // namespace

const std::string* XmlElement::attribute(std::string_view attr_name) const {
  for (const XmlAttribute& attr : attributes)
    if (attr.name == attr_name) return &attr.value;
  return nullptr;
}

void XmlElement::set_attribute(std::string_view attr_name, std::string value) {
  for (XmlAttribute& attr : attributes) {
    if (attr.name == attr_name) {
      attr.value = std::move(value);
      return;
    }
  }
  attributes.push_back({std::string(attr_name), std::move(value)});
}

bool XmlElement::remove_attribute(std::string_view attr_name) {
  auto it = std::find_if(attributes.begin(), attributes.end(),
                         [&](const XmlAttribute& a) { return a.name == attr_name; });
  if (it == attributes.end()) return false;
  attributes.erase(it);
  return true;
}

std::string_view XmlElement::local_name() const { return name_local(name); }

std::string_view name_prefix(std::string_view qualified) {
  std::size_t colon = qualified.find(':');
  return colon == std::string_view::npos ? std::string_view{} : qualified.substr(0, colon);
}

std::string_view name_local(std::string_view qualified) {
  std::size_t colon = qualified.find(':');
  return colon == std::string_view::npos ? qualified : qualified.substr(colon + 1);
}

XmlElement parse_xml(std::string_view input) { return Parser(input).parse_document(); }

std::string serialize_xml(const XmlElement& root) {
  std::string out;
  out.reserve(256);
  serialize_into(out, root);
  return out;
}

}  // namespace mocr::svg
