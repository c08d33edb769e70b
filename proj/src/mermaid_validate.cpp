#include <algorithm>

#include "diagsynth/errors.hpp"
#include "mermaid_internal.hpp"

namespace diagsynth {

namespace {

bool header_is_clean(const MermaidDoc& doc) {
    const auto& h = doc.header;
    const auto space = h.find_first_of(" \t");
    if (space == std::string::npos) return true;
    const auto rest = detail::trim(std::string_view(h).substr(space));
    if (doc.family != DiagramFamily::Graph && doc.family != DiagramFamily::Flowchart) return false;
    return rest == "TB" || rest == "TD" || rest == "BT" || rest == "RL" || rest == "LR";
}

}  // namespace

ValidationVerdict validate(std::string_view source) {
    detail::ParseTrace trace;
    ParseResult result;
    try {
        result = detail::parse_traced(source, &trace);
    } catch (const FamilyDetectionError& e) {
        return ValidationVerdict::failure(0, e.what());
    }
    if (!header_is_clean(result.doc)) {
        return ValidationVerdict::failure(trace.header_line, "malformed header directive '" + result.doc.header + "'");
    }
    int line = 0;
    std::string reason;
    if (!result.skipped_lines.empty()) {
        line = result.skipped_lines.front();
        reason = "unrecognised statement";
    }
    for (const auto& issue : trace.issues) {
        if (line == 0 || issue.line < line) {
            line = issue.line;
            reason = issue.reason;
        }
    }
    if (!reason.empty()) return ValidationVerdict::failure(line, reason);
    return ValidationVerdict::success();
}

}  // namespace diagsynth
