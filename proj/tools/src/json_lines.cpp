#include "json_lines.hpp"

#include <string_view>
#include <vector>

namespace subplanck::tools {

std::string pointer_token(const std::string& key) {
  std::string out;
  for (char c : key) {
    if (c == '~') {
      out += "~0";
    } else if (c == '/') {
      out += "~1";
    } else {
      out += c;
    }
  }
  return out;
}

namespace {

struct Frame {
  bool object;
  std::string path;
  std::size_t index = 0;
  bool want_key = true;
};

}  // namespace

std::map<std::string, int> json_pointer_lines(const std::string& text) {
  std::map<std::string, int> lines;
  std::vector<Frame> stack;
  std::string pending;  // pointer of the member whose value comes next
  int line = 1;
  lines[""] = 1;

  // Called where a value may start inside an array.
  auto array_value = [&] {
    if (!stack.empty() && !stack.back().object) {
      pending = stack.back().path + "/" + std::to_string(stack.back().index);
      lines.emplace(pending, line);
    }
  };
  auto value_path = [&] { return stack.empty() ? std::string() : pending; };

  for (std::size_t i = 0; i < text.size(); ++i) {
    const char c = text[i];
    switch (c) {
      case '\n':
        ++line;
        break;
      case '{':
      case '[': {
        if (!stack.empty() && !stack.back().object) array_value();
        stack.push_back({c == '{', value_path()});
        break;
      }
      case '}':
      case ']':
        stack.pop_back();
        break;
      case ',':
        if (!stack.empty()) {
          if (stack.back().object) {
            stack.back().want_key = true;
          } else {
            ++stack.back().index;
          }
        }
        break;
      case '"': {
        std::string s;
        ++i;
        while (i < text.size() && text[i] != '"') {
          if (text[i] == '\\' && i + 1 < text.size()) ++i;
          if (text[i] == '\n') ++line;
          s += text[i];
          ++i;
        }
        if (!stack.empty() && stack.back().object && stack.back().want_key) {
          pending = stack.back().path + "/" + pointer_token(s);
          lines.emplace(pending, line);
          stack.back().want_key = false;
        } else if (!stack.empty() && !stack.back().object) {
          array_value();
        }
        break;
      }
      case ' ':
      case '\t':
      case '\r':
      case ':':
        break;
      default:
        // Number or literal: consume it; record its line inside arrays.
        if (!stack.empty() && !stack.back().object) array_value();
        while (i + 1 < text.size() && std::string_view(",]}\n \t\r").find(text[i + 1]) == std::string_view::npos) ++i;
        break;
    }
  }
  return lines;
}

int line_of(const std::map<std::string, int>& lines, std::string pointer) {
  for (;;) {
    const auto it = lines.find(pointer);
    if (it != lines.end()) return it->second;
    if (pointer.empty()) return 1;
    pointer.erase(pointer.rfind('/'));
  }
}

}  // namespace subplanck::tools
