#include "z2kit/toml_lite.hpp"

#include "z2kit/error.hpp"

#include <cctype>
#include <charconv>
#include <cmath>

namespace z2kit {

namespace {

class TomlReader {
 public:
  explicit TomlReader(const std::string& text) : s_(text) {}

  Json run() {
    Json root = Json::object();
    Json* table = &root;
    for (;;) {
      skip_blank_lines();
      if (eof()) break;
      if (peek() == '[') {
        table = header(root);
      } else {
        keyval(*table);
      }
      end_of_line();
    }
    return root;
  }

 private:
  const std::string& s_;
  std::size_t pos_ = 0;
  int line_ = 1;

  [[noreturn]] void fail(const std::string& what) const {
    throw Error(ErrorKind::InvalidSpec, "toml line " + std::to_string(line_) + ": " + what);
  }

  bool eof() const { return pos_ >= s_.size(); }
  char peek() const { return eof() ? '\0' : s_[pos_]; }
  char get() {
    if (eof()) fail("unexpected end of input");
    const char c = s_[pos_++];
    if (c == '\n') ++line_;
    return c;
  }

  void skip_spaces() {
    while (!eof() && (peek() == ' ' || peek() == '\t')) ++pos_;
  }
  void skip_comment() {
    if (peek() == '#')
      while (!eof() && peek() != '\n') ++pos_;
  }
  void skip_blank_lines() {
    for (;;) {
      skip_spaces();
      skip_comment();
      if (peek() == '\r') ++pos_;
      if (peek() == '\n') {
        get();
        continue;
      }
      return;
    }
  }
  // Whitespace, comments and newlines, as allowed inside arrays.
  void skip_all() {
    for (;;) {
      skip_spaces();
      skip_comment();
      if (peek() == '\n' || peek() == '\r') {
        get();
        continue;
      }
      return;
    }
  }
  void end_of_line() {
    skip_spaces();
    skip_comment();
    if (peek() == '\r') ++pos_;
    if (eof()) return;
    if (peek() != '\n') fail(std::string("unexpected character '") + peek() + "'");
    get();
  }

  std::string key() {
    skip_spaces();
    std::string k;
    if (peek() == '"') return basic_string();
    if (peek() == '\'') return literal_string();
    while (!eof() && (std::isalnum(static_cast<unsigned char>(peek())) || peek() == '_' || peek() == '-')) k += get();
    if (k.empty()) fail("expected a key");
    skip_spaces();
    if (peek() == '.') fail("dotted keys are not supported");
    return k;
  }

  Json* header(Json& root) {
    get();
    const bool array = peek() == '[';
    if (array) get();
    const std::string name = key();
    skip_spaces();
    if (get() != ']') fail("expected ']'");
    if (array && get() != ']') fail("expected ']]'");
    if (array) {
      Json& arr = root[name];
      if (arr.is_null()) arr = Json::array();
      if (!arr.is_array()) fail("'" + name + "' is not an array of tables");
      arr.push_back(Json::object());
      return &arr.back();
    }
    if (root.contains(name)) fail("table '" + name + "' defined twice");
    root[name] = Json::object();
    return &root[name];
  }

  void keyval(Json& table) {
    const std::string k = key();
    skip_spaces();
    if (get() != '=') fail("expected '=' after key '" + k + "'");
    skip_spaces();
    if (table.contains(k)) fail("duplicate key '" + k + "'");
    table[k] = value();
  }

  Json value() {
    const char c = peek();
    if (c == '"') return basic_string();
    if (c == '\'') return literal_string();
    if (c == '[') return array();
    if (c == '{') return inline_table();
    if (s_.compare(pos_, 4, "true") == 0) {
      pos_ += 4;
      return true;
    }
    if (s_.compare(pos_, 5, "false") == 0) {
      pos_ += 5;
      return false;
    }
    return number();
  }

  std::string basic_string() {
    get();
    if (s_.compare(pos_, 2, "\"\"") == 0) fail("multi-line strings are not supported");
    std::string out;
    for (;;) {
      const char c = get();
      if (c == '"') return out;
      if (c == '\n') fail("newline in string");
      if (c != '\\') {
        out += c;
        continue;
      }
      const char e = get();
      switch (e) {
        case '"': out += '"'; break;
        case '\\': out += '\\'; break;
        case 'n': out += '\n'; break;
        case 't': out += '\t'; break;
        case 'r': out += '\r'; break;
        default: fail(std::string("unsupported escape \\") + e);
      }
    }
  }

  std::string literal_string() {
    get();
    std::string out;
    for (;;) {
      const char c = get();
      if (c == '\'') return out;
      if (c == '\n') fail("newline in string");
      out += c;
    }
  }

  Json array() {
    get();
    Json arr = Json::array();
    skip_all();
    while (peek() != ']') {
      arr.push_back(value());
      skip_all();
      if (peek() == ',') {
        get();
        skip_all();
      } else if (peek() != ']') {
        fail("expected ',' or ']' in array");
      }
    }
    get();
    return arr;
  }

  Json inline_table() {
    get();
    Json t = Json::object();
    skip_spaces();
    while (peek() != '}') {
      keyval(t);
      skip_spaces();
      if (peek() == ',') {
        get();
        skip_spaces();
      } else if (peek() != '}') {
        fail("expected ',' or '}' in inline table");
      }
    }
    get();
    return t;
  }

  Json number() {
    std::string tok;
    while (!eof() && (std::isalnum(static_cast<unsigned char>(peek())) || peek() == '+' || peek() == '-' ||
                      peek() == '.' || peek() == '_'))
      tok += get();
    if (tok.empty()) fail("expected a value");
    std::string clean;
    for (char c : tok)
      if (c != '_') clean += c;
    if (clean == "inf" || clean == "+inf" || clean == "-inf" || clean.find("nan") != std::string::npos)
      fail("non-finite numbers are not allowed");
    const bool is_float = clean.find_first_of(".eE") != std::string::npos;
    const char* b = clean.data();
    const char* e = b + clean.size();
    if (*b == '+') ++b;
    if (is_float) {
      double v = 0;
      auto r = std::from_chars(b, e, v);
      if (r.ec != std::errc() || r.ptr != e) fail("malformed number '" + tok + "'");
      return v;
    }
    long long v = 0;
    auto r = std::from_chars(b, e, v);
    if (r.ec != std::errc() || r.ptr != e) fail("malformed value '" + tok + "'");
    return v;
  }
};

}  // namespace

Json parse_toml(const std::string& text) { return TomlReader(text).run(); }

}  // namespace z2kit
