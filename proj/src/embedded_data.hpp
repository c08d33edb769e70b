#pragma once

#include <string_view>

// Generated at configure time from data/*.json.
namespace diagsynth::embedded {

std::string_view keyword_bank_json();
std::string_view describe_templates_json();
std::string_view enhance_templates_json();

}  // namespace diagsynth::embedded
