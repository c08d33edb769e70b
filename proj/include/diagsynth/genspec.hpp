#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <json.hpp>

#include "diagsynth/family.hpp"
#include "diagsynth/keywords.hpp"

namespace diagsynth {

enum class ComponentKind {
    Rect,
    Round,
    Circle,
    Stadium,
    Subroutine,
    Decision,
    Person,
    System,
    SystemDb,
    SystemExt,
    ClassBox,
    Participant,
    Actor,
    State,
    Field,
};

enum class ArrowKind {
    Solid,        // -->
    Open,         // --- (undirected)
    Dotted,       // -.->
    Thick,        // ==>
    Association,  // class -->
    Inheritance,  // <|--
    Composition,  // *--
    Aggregation,  // o--
    Dependency,   // ..>
    Realization,  // ..|>
    Link,         // class -- (undirected)
    Sync,         // ->>
    Reply,        // -->>
    Async,        // -)
    Lost,         // -x
    Transition,   // state -->
    Relation,     // C4 Rel(...)
    BiRelation,   // C4 BiRel(...)
};

bool is_undirected(ArrowKind arrow) noexcept;
std::string_view to_string(ComponentKind kind);
std::string_view to_string(ArrowKind arrow);
ComponentKind parse_component_kind(std::string_view name);
ArrowKind parse_arrow_kind(std::string_view name);

struct Member {
    char visibility = 0;  // '+', '-', '#', '~' or 0 when absent
    std::string name;
    bool is_method = false;

    bool operator==(const Member&) const = default;
};

struct Component {
    std::string id;    // N1, N2, ...
    std::string name;  // keyword phrase
    ComponentKind kind = ComponentKind::Rect;
    std::vector<Member> members;  // Class only
    int bit_width = 0;            // Packet only

    bool operator==(const Component&) const = default;
};

struct Edge {
    std::string src;
    std::string dst;
    std::optional<std::string> label;
    ArrowKind arrow = ArrowKind::Solid;

    bool operator==(const Edge&) const = default;
};

struct DiagramSpec {
    DiagramFamily family = DiagramFamily::Graph;
    Level level = Level::Easy;
    std::string discipline;
    std::vector<Component> components;
    std::vector<Edge> edges;
    std::uint64_t seed = 0;

    bool operator==(const DiagramSpec&) const = default;
};

struct CountRange {
    int min = 0;
    int max = 0;

    bool contains(int v) const noexcept { return v >= min && v <= max; }
    bool operator==(const CountRange&) const = default;
};

struct DifficultyProfile {
    DiagramFamily family = DiagramFamily::Graph;
    Level level = Level::Easy;
    std::optional<CountRange> edge_range;
    std::optional<CountRange> block_range;
    std::optional<CountRange> attribute_range;  // Class only
    std::optional<CountRange> header_range;     // Packet only
    double label_probability = 0.5;
};

using ProfileTable = std::map<std::pair<DiagramFamily, Level>, DifficultyProfile>;

// 24 profiles; ranges are the min/max columns of the per-type statistics
// table except Packet (prose ranges 2-3 / 3-8 / 6-9) and C4 Easy blocks.
ProfileTable default_profiles();

const DifficultyProfile& profile_for(const ProfileTable& table, DiagramFamily family, Level level);

// Overrides keyed by "Family.Level", e.g.
//   {"Packet.Hard": {"header_range": [6, 17], "label_probability": 0.3}}
// Throws ConfigError on unknown keys or min > max.
void apply_profile_overrides(ProfileTable& table, const nlohmann::json& overrides);
void validate_profile(const DifficultyProfile& profile);

DiagramSpec sample_spec(DiagramFamily family, Level level, const DifficultyProfile& profile,
                        const KeywordBank& bank, std::uint64_t seed);

// Empty when the spec satisfies every DiagramSpec invariant (and the profile
// ranges, when a profile is supplied).
std::vector<std::string> spec_violations(const DiagramSpec& spec,
                                         const DifficultyProfile* profile = nullptr);

// Packet layout: (start, end) inclusive bit interval per component, in order.
std::vector<std::pair<int, int>> packet_layout(const DiagramSpec& spec);

// "power supply" -> "powerSupply"
std::string camel_case(std::string_view phrase);

}  // namespace diagsynth
