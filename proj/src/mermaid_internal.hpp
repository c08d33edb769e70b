#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "diagsynth/mermaid.hpp"

namespace diagsynth::detail {

struct LineIssue {
    int line = 0;
    std::string reason;
};

// Side information the validator needs from a parse.
struct ParseTrace {
    int header_line = 0;
    std::vector<int> statement_lines;  // parallel to doc.statements
    std::vector<LineIssue> issues;     // tolerated by parse, fatal for validate
};

ParseResult parse_traced(std::string_view source, ParseTrace* trace);

std::string_view trim(std::string_view s);

}  // namespace diagsynth::detail
