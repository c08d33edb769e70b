#include "diagsynth/summary.hpp"

#include <algorithm>
#include <cctype>
#include <unordered_map>

namespace diagsynth {

std::string canonical_name(std::string_view text, const CanonicalOptions& opts) {
    std::string out;
    out.reserve(text.size());
    bool pending_space = false;
    for (unsigned char c : text) {
        switch (c) {
            case '"': case '[': case ']': case '{': case '}': case '(': case ')': case '`':
                continue;
            default: break;
        }
        if (std::isspace(c)) {
            pending_space = !out.empty();
            continue;
        }
        if (pending_space) out.push_back(' ');
        pending_space = false;
        out.push_back(opts.case_sensitive ? static_cast<char>(c) : static_cast<char>(std::tolower(c)));
    }
    return out;
}

std::string canonical_member(const Member& member, const CanonicalOptions& opts) {
    std::string_view name = member.name;
    if (auto paren = name.find('('); paren != std::string_view::npos) name = name.substr(0, paren);
    std::string out;
    if (member.visibility) out.push_back(member.visibility);
    for (char c : canonical_name(name, opts)) {
        if (c != ' ') out.push_back(c);
    }
    if (member.is_method) out += "()";
    return out;
}

std::size_t StructuralSummary::member_count() const noexcept {
    std::size_t n = 0;
    for (const auto& [_, members] : attributes) n += members.size();
    return n;
}

bool StructuralSummary::has_block(std::string_view name) const noexcept {
    return std::find(blocks.begin(), blocks.end(), name) != blocks.end();
}

namespace {

// Undirected edges compare orientation-free.
std::vector<SummaryEdge> edge_multiset(const std::vector<SummaryEdge>& edges) {
    std::vector<SummaryEdge> out = edges;
    for (auto& e : out) {
        if (e.undirected && e.dst < e.src) std::swap(e.src, e.dst);
    }
    std::sort(out.begin(), out.end());
    return out;
}

}  // namespace

bool operator==(const StructuralSummary& a, const StructuralSummary& b) {
    if (a.family != b.family) return false;
    std::set<std::string> ba(a.blocks.begin(), a.blocks.end());
    std::set<std::string> bb(b.blocks.begin(), b.blocks.end());
    if (ba != bb) return false;
    if (edge_multiset(a.edges) != edge_multiset(b.edges)) return false;
    if (a.attributes != b.attributes) return false;
    auto fa = a.bits, fb = b.bits;
    std::sort(fa.begin(), fa.end());
    std::sort(fb.begin(), fb.end());
    return fa == fb;
}

void add_block(StructuralSummary& summary, const std::string& name) {
    if (!summary.has_block(name)) summary.blocks.push_back(name);
}

StructuralSummary summarize(const DiagramSpec& spec, const CanonicalOptions& opts) {
    StructuralSummary out;
    out.family = spec.family;
    std::unordered_map<std::string, std::string> names;
    for (const auto& c : spec.components) {
        auto name = canonical_name(c.name, opts);
        names[c.id] = name;
        add_block(out, name);
        if (spec.family == DiagramFamily::Class) {
            auto& members = out.attributes[name];
            for (const auto& m : c.members) members.insert(canonical_member(m, opts));
        }
    }
    if (spec.family == DiagramFamily::Packet) {
        const auto layout = packet_layout(spec);
        for (std::size_t i = 0; i < spec.components.size(); ++i) {
            out.bits.push_back({canonical_name(spec.components[i].name, opts), layout[i].first, layout[i].second});
        }
    }
    for (const auto& e : spec.edges) {
        SummaryEdge se;
        se.src = names.at(e.src);
        se.dst = names.at(e.dst);
        if (e.label) {
            auto label = canonical_name(*e.label, opts);
            if (!label.empty()) se.label = std::move(label);
        }
        se.undirected = is_undirected(e.arrow);
        out.edges.push_back(std::move(se));
    }
    return out;
}

}  // namespace diagsynth
