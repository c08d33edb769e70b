#include "template.hpp"

#include <algorithm>
#include <cctype>

#include "diagsynth/errors.hpp"

namespace diagsynth::detail {

namespace {

struct Segment {
    bool placeholder = false;
    std::string text;  // literal text or placeholder name
};

std::vector<Segment> segments(std::string_view pattern) {
    std::vector<Segment> out;
    std::size_t pos = 0;
    while (pos < pattern.size()) {
        const auto open = pattern.find('{', pos);
        const auto close = open == std::string_view::npos ? open : pattern.find('}', open);
        if (close == std::string_view::npos) {
            out.push_back({false, std::string(pattern.substr(pos))});
            break;
        }
        if (open > pos) out.push_back({false, std::string(pattern.substr(pos, open - pos))});
        out.push_back({true, std::string(pattern.substr(open + 1, close - open - 1))});
        pos = close + 1;
    }
    return out;
}

bool numeric_key(std::string_view key) { return key == "count" || key == "start" || key == "end"; }

// False once the capture holds a character no longer capture could drop.
bool capture_viable(std::string_view key, std::string_view value) {
    if (value.find('"') != std::string_view::npos || value.find('\n') != std::string_view::npos) return false;
    if (numeric_key(key)) {
        return std::all_of(value.begin(), value.end(), [](unsigned char c) { return std::isdigit(c); });
    }
    return true;
}

bool match_from(const std::vector<Segment>& segs, std::size_t i, std::string_view text, std::size_t pos,
                Bindings& out) {
    if (i == segs.size()) return pos == text.size();
    const auto& seg = segs[i];
    if (!seg.placeholder) {
        if (text.substr(pos, seg.text.size()) != seg.text) return false;
        return match_from(segs, i + 1, text, pos + seg.text.size(), out);
    }
    for (std::size_t end = pos; end <= text.size(); ++end) {
        const auto value = text.substr(pos, end - pos);
        if (!capture_viable(seg.text, value)) break;
        if (value.empty() && numeric_key(seg.text)) continue;
        if (i + 1 < segs.size() && !segs[i + 1].placeholder &&
            text.substr(end, segs[i + 1].text.size()) != segs[i + 1].text) {
            continue;
        }
        auto previous = out.find(seg.text);
        if (previous != out.end() && previous->second != value) continue;
        const bool inserted = previous == out.end();
        if (inserted) out.emplace(seg.text, std::string(value));
        if (match_from(segs, i + 1, text, end, out)) return true;
        if (inserted) out.erase(seg.text);
    }
    return false;
}

}  // namespace

std::vector<std::string> placeholders(std::string_view pattern) {
    std::vector<std::string> out;
    for (auto& s : segments(pattern))
        if (s.placeholder) out.push_back(std::move(s.text));
    return out;
}

std::string render_template(std::string_view pattern, const Bindings& values) {
    std::string out;
    for (const auto& s : segments(pattern)) {
        if (!s.placeholder) {
            out += s.text;
            continue;
        }
        auto it = values.find(s.text);
        if (it == values.end()) throw ConfigError("template placeholder {" + s.text + "} has no value");
        out += it->second;
    }
    return out;
}

bool match_template(std::string_view pattern, std::string_view text, Bindings& out) {
    out.clear();
    return match_from(segments(pattern), 0, text, 0, out);
}

}  // namespace diagsynth::detail
