#pragma once

#include <filesystem>
#include <map>
#include <string>
#include <string_view>

#include "diagsynth/family.hpp"
#include "diagsynth/summary.hpp"

namespace diagsynth {

/// Sentence patterns with `{placeholder}` tokens, one set per family.
///
/// Pattern keys and their placeholders:
///   preamble                 {count}
///   component                {name}
///   edge, edge_labeled       {src} {dst} [{label}]
///   edge_undirected(_labeled) same as edge; optional, falls back to edge
///   member                   {class} {visibility} {member_kind} {member}  (Class)
///   field                    {name} {start} {end}                          (Packet)
/// plus a top-level "visibility" map from marker ("+", "-", "#", "~", "")
/// to word and a "member_kind" map for "attribute" / "method".
class DescriptionTemplateSet {
public:
    static DescriptionTemplateSet from_json(std::string_view text);
    static DescriptionTemplateSet load(const std::filesystem::path& path);
    static const DescriptionTemplateSet& builtin();

    bool supports(DiagramFamily family) const noexcept;
    const std::string& pattern(DiagramFamily family, std::string_view key) const;
    const std::string* find_pattern(DiagramFamily family, std::string_view key) const;
    const std::map<std::string, std::string>& visibility_words() const noexcept { return visibility_; }
    const std::map<std::string, std::string>& member_kind_words() const noexcept { return member_kind_; }

private:
    std::map<DiagramFamily, std::map<std::string, std::string, std::less<>>> patterns_;
    std::map<std::string, std::string> visibility_;
    std::map<std::string, std::string> member_kind_;
};

// One sentence per line: preamble, components, edges, members (Class) or
// fields (Packet, replacing component sentences).
std::string describe(const StructuralSummary& summary,
                     const DescriptionTemplateSet& templates = DescriptionTemplateSet::builtin());

// Inverse of describe on its image; throws InversionError otherwise.
StructuralSummary parse_description(std::string_view text,
                                    const DescriptionTemplateSet& templates = DescriptionTemplateSet::builtin());

}  // namespace diagsynth
