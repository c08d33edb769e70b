#pragma once

#include <array>
#include <string>
#include <string_view>

namespace diagsynth {

enum class DiagramFamily { Block, C4, Class, Flowchart, Graph, Packet, Sequence, State };

enum class Level { Easy, Medium, Hard };

inline constexpr std::array<DiagramFamily, 8> kAllFamilies{
    DiagramFamily::Block,     DiagramFamily::C4,    DiagramFamily::Class,
    DiagramFamily::Flowchart, DiagramFamily::Graph, DiagramFamily::Packet,
    DiagramFamily::Sequence,  DiagramFamily::State};

inline constexpr std::array<Level, 3> kAllLevels{Level::Easy, Level::Medium, Level::Hard};

std::string_view to_string(DiagramFamily family);
std::string_view to_string(Level level);

// Case-insensitive; throws ConfigError on unknown names.
DiagramFamily parse_family(std::string_view name);
Level parse_level(std::string_view name);

// "Block.Easy" style key used by profile configs and recipes.
std::string cell_key(DiagramFamily family, Level level);

}  // namespace diagsynth
