#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "diagsynth/family.hpp"
#include "diagsynth/genspec.hpp"
#include "diagsynth/summary.hpp"

namespace diagsynth {

struct NodeDecl {
    std::string id;
    std::optional<std::string> name;  // absent: displayed as the id
    ComponentKind kind = ComponentKind::Rect;
    std::vector<Member> members;

    std::string display_name() const { return name ? *name : id; }
    bool operator==(const NodeDecl&) const = default;
};

struct EdgeStmt {
    std::string src;
    std::string dst;
    std::optional<std::string> label;
    ArrowKind arrow = ArrowKind::Solid;

    bool operator==(const EdgeStmt&) const = default;
};

struct FieldStmt {
    int start = 0;
    int end = 0;
    std::string name;

    bool operator==(const FieldStmt&) const = default;
};

using Statement = std::variant<NodeDecl, EdgeStmt, FieldStmt>;

/// Typed Mermaid document for one of the eight supported families.
struct MermaidDoc {
    DiagramFamily family = DiagramFamily::Graph;
    std::string header;                   // "graph LR", "classDiagram", ...
    std::vector<std::string> directives;  // "columns 3", "title ..."
    std::vector<Statement> statements;

    std::string to_source() const;
    std::size_t edge_count() const noexcept;
    bool operator==(const MermaidDoc&) const = default;
};

MermaidDoc build_doc(const DiagramSpec& spec);
std::string emit(const DiagramSpec& spec);

struct ParseResult {
    MermaidDoc doc;
    std::size_t skipped = 0;         // statement lines matching no production
    std::vector<int> skipped_lines;  // 1-based
};

// Best-effort, line-oriented extraction. Throws FamilyDetectionError when no
// supported header directive precedes the body.
ParseResult parse_document(std::string_view source);

// Family from the first directive line; nullopt when unrecognised.
std::optional<DiagramFamily> detect_family(std::string_view source);

StructuralSummary summarize(const MermaidDoc& doc, const CanonicalOptions& opts = {});
StructuralSummary parse(std::string_view source, const CanonicalOptions& opts = {});

struct ValidationVerdict {
    bool ok = true;
    int line = 0;  // 1-based first failing line; 0 for whole-document errors
    std::string reason;

    static ValidationVerdict success() { return {}; }
    static ValidationVerdict failure(int line, std::string reason) {
        return {false, line, std::move(reason)};
    }
};

// Hermetic validator for the supported grammar subset.
ValidationVerdict validate(std::string_view source);

}  // namespace diagsynth
