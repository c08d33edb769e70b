#pragma once

#include <filesystem>
#include <map>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include <json.hpp>

#include "diagsynth/mermaid.hpp"
#include "diagsynth/rng.hpp"
#include "diagsynth/summary.hpp"

namespace diagsynth {

// Two components joined by one edge. The endpoint declarations are copied
// from the base document; *_dropped records whether the deletion orphaned
// (and therefore removed) that endpoint.
struct Triplet {
    NodeDecl src;
    NodeDecl dst;
    EdgeStmt edge;
    bool src_dropped = false;
    bool dst_dropped = false;

    bool operator==(const Triplet&) const = default;
};

struct EnhancementSample {
    MermaidDoc base;
    MermaidDoc reduced;
    std::vector<Triplet> removed;  // removal order
    std::string prompt;
};

struct DerivationSkip {
    std::string reason;
};

using Derivation = std::variant<EnhancementSample, DerivationSkip>;

bool supports_enhancement(DiagramFamily family) noexcept;

// Removes `removals` uniformly chosen edges (one by default) and any endpoint
// left without incident edges. Requires at least removals + 1 edges and a
// family other than Packet / C4; otherwise returns a DerivationSkip. The
// returned sample has an empty prompt.
Derivation remove_triplet(const MermaidDoc& doc, Rng& rng, int removals = 1);

class EnhanceTemplateSet {
public:
    static EnhanceTemplateSet from_json(std::string_view text);
    static EnhanceTemplateSet load(const std::filesystem::path& path);
    static const EnhanceTemplateSet& builtin();

    // Keys: labeled, unlabeled, undirected_labeled, undirected_unlabeled,
    // new_members ({name} {members}). Families without an entry use "default".
    const std::string* find(DiagramFamily family, std::string_view key) const;

private:
    std::map<std::string, std::map<std::string, std::string, std::less<>>, std::less<>> patterns_;
};

std::string verbalize(const Triplet& removed, DiagramFamily family,
                      const EnhanceTemplateSet& templates = EnhanceTemplateSet::builtin());

// Prompt for a multi-removal sample: one verbalized sentence per triplet.
std::string verbalize_all(const std::vector<Triplet>& removed, DiagramFamily family,
                          const EnhanceTemplateSet& templates = EnhanceTemplateSet::builtin());

// Adds the triplets back at the summary level (dropped endpoints with their
// members, then the edge).
StructuralSummary reinsert(StructuralSummary reduced, const std::vector<Triplet>& removed,
                           const CanonicalOptions& opts = {});

nlohmann::json triplet_to_json(const Triplet& triplet);
Triplet triplet_from_json(const nlohmann::json& j);

}  // namespace diagsynth
