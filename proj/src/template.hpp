#pragma once

#include <map>
#include <string>
#include <string_view>
#include <vector>

namespace diagsynth::detail {

using Bindings = std::map<std::string, std::string, std::less<>>;

// `{name}` placeholders in order of appearance.
std::vector<std::string> placeholders(std::string_view pattern);

// Throws ConfigError when a placeholder has no binding.
std::string render_template(std::string_view pattern, const Bindings& values);

// Backtracking match of text against pattern. Captures never contain '"';
// captures of {count}, {start}, {end} are digit strings.
bool match_template(std::string_view pattern, std::string_view text, Bindings& out);

}  // namespace diagsynth::detail
