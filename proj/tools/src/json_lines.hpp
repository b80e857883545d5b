#pragma once

#include <map>
#include <string>

namespace subplanck::tools {

/// Source line of every member key and array element of a JSON text, keyed
/// by JSON pointer ("" is the root). Only meaningful for text that parses.
std::map<std::string, int> json_pointer_lines(const std::string& text);

/// Line of `pointer`, or of its nearest ancestor that has one.
int line_of(const std::map<std::string, int>& lines, std::string pointer);

/// Escapes a member name for use inside a JSON pointer.
std::string pointer_token(const std::string& key);

}  // namespace subplanck::tools
