#include "diagsynth/family.hpp"

#include <algorithm>
#include <cctype>
#include <string>

#include "diagsynth/errors.hpp"

namespace diagsynth {

namespace {

bool iequals(std::string_view a, std::string_view b) {
    return a.size() == b.size() &&
           std::equal(a.begin(), a.end(), b.begin(), [](unsigned char x, unsigned char y) {
               return std::tolower(x) == std::tolower(y);
           });
}

}  // namespace

std::string_view to_string(DiagramFamily family) {
    switch (family) {
        case DiagramFamily::Block: return "Block";
        case DiagramFamily::C4: return "C4";
        case DiagramFamily::Class: return "Class";
        case DiagramFamily::Flowchart: return "Flowchart";
        case DiagramFamily::Graph: return "Graph";
        case DiagramFamily::Packet: return "Packet";
        case DiagramFamily::Sequence: return "Sequence";
        case DiagramFamily::State: return "State";
    }
    return "?";
}

std::string_view to_string(Level level) {
    switch (level) {
        case Level::Easy: return "Easy";
        case Level::Medium: return "Medium";
        case Level::Hard: return "Hard";
    }
    return "?";
}

DiagramFamily parse_family(std::string_view name) {
    for (auto f : kAllFamilies) {
        if (iequals(name, to_string(f))) return f;
    }
    throw ConfigError("unknown diagram family '" + std::string(name) + "'");
}

Level parse_level(std::string_view name) {
    for (auto l : kAllLevels) {
        if (iequals(name, to_string(l))) return l;
    }
    throw ConfigError("unknown difficulty level '" + std::string(name) + "'");
}

std::string cell_key(DiagramFamily family, Level level) {
    std::string key(to_string(family));
    key += '.';
    key += to_string(level);
    return key;
}

}  // namespace diagsynth
