#pragma once

#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "diagsynth/family.hpp"
#include "diagsynth/genspec.hpp"

namespace diagsynth {

struct CanonicalOptions {
    bool case_sensitive = false;
};

// Lowercase (unless case_sensitive), strip "[]{}()`, collapse whitespace, trim.
// Idempotent.
std::string canonical_name(std::string_view text, const CanonicalOptions& opts = {});

// Visibility marker + canonical name with inner whitespace and argument lists
// removed, "()" appended for methods: "-startengine()".
std::string canonical_member(const Member& member, const CanonicalOptions& opts = {});

struct SummaryEdge {
    std::string src;
    std::string dst;
    std::optional<std::string> label;
    bool undirected = false;

    bool operator==(const SummaryEdge&) const = default;
    auto operator<=>(const SummaryEdge&) const = default;
};

struct BitField {
    std::string name;
    int start = 0;
    int end = 0;

    bool operator==(const BitField&) const = default;
    auto operator<=>(const BitField&) const = default;
};

/// Canonical topology of a diagram. Blocks and edges keep declaration order
/// (descriptions enumerate in that order) but equality treats blocks as a set
/// and edges as a multiset.
struct StructuralSummary {
    DiagramFamily family = DiagramFamily::Graph;
    std::vector<std::string> blocks;
    std::vector<SummaryEdge> edges;
    std::map<std::string, std::set<std::string>> attributes;  // Class only
    std::vector<BitField> bits;                               // Packet only, sorted by start

    std::size_t member_count() const noexcept;
    bool has_block(std::string_view name) const noexcept;

    friend bool operator==(const StructuralSummary& a, const StructuralSummary& b);
};

// Adds a block name if not yet present.
void add_block(StructuralSummary& summary, const std::string& name);

StructuralSummary summarize(const DiagramSpec& spec, const CanonicalOptions& opts = {});

}  // namespace diagsynth
