#include "diagsynth/genspec.hpp"

#include <algorithm>
#include <cctype>
#include <numeric>
#include <set>

#include "diagsynth/errors.hpp"

namespace diagsynth {

namespace {

constexpr int kMaxPacketFieldBits = 32;

struct KindName {
    ComponentKind kind;
    std::string_view name;
};

constexpr KindName kKindNames[] = {
    {ComponentKind::Rect, "rect"},          {ComponentKind::Round, "round"},
    {ComponentKind::Circle, "circle"},      {ComponentKind::Stadium, "stadium"},
    {ComponentKind::Subroutine, "subroutine"}, {ComponentKind::Decision, "decision"},
    {ComponentKind::Person, "person"},      {ComponentKind::System, "system"},
    {ComponentKind::SystemDb, "system_db"}, {ComponentKind::SystemExt, "system_ext"},
    {ComponentKind::ClassBox, "class"},     {ComponentKind::Participant, "participant"},
    {ComponentKind::Actor, "actor"},        {ComponentKind::State, "state"},
    {ComponentKind::Field, "field"},
};

struct ArrowName {
    ArrowKind arrow;
    std::string_view name;
};

constexpr ArrowName kArrowNames[] = {
    {ArrowKind::Solid, "solid"},           {ArrowKind::Open, "open"},
    {ArrowKind::Dotted, "dotted"},         {ArrowKind::Thick, "thick"},
    {ArrowKind::Association, "association"}, {ArrowKind::Inheritance, "inheritance"},
    {ArrowKind::Composition, "composition"}, {ArrowKind::Aggregation, "aggregation"},
    {ArrowKind::Dependency, "dependency"}, {ArrowKind::Realization, "realization"},
    {ArrowKind::Link, "link"},             {ArrowKind::Sync, "sync"},
    {ArrowKind::Reply, "reply"},           {ArrowKind::Async, "async"},
    {ArrowKind::Lost, "lost"},             {ArrowKind::Transition, "transition"},
    {ArrowKind::Relation, "relation"},     {ArrowKind::BiRelation, "birelation"},
};

std::vector<ComponentKind> family_kinds(DiagramFamily family) {
    switch (family) {
        case DiagramFamily::Block: return {ComponentKind::Rect, ComponentKind::Round};
        case DiagramFamily::C4:
            return {ComponentKind::Person, ComponentKind::System, ComponentKind::SystemDb,
                    ComponentKind::SystemExt};
        case DiagramFamily::Class: return {ComponentKind::ClassBox};
        case DiagramFamily::Flowchart:
            return {ComponentKind::Rect, ComponentKind::Decision, ComponentKind::Stadium,
                    ComponentKind::Subroutine};
        case DiagramFamily::Graph: return {ComponentKind::Rect, ComponentKind::Round, ComponentKind::Circle};
        case DiagramFamily::Packet: return {ComponentKind::Field};
        case DiagramFamily::Sequence: return {ComponentKind::Participant, ComponentKind::Actor};
        case DiagramFamily::State: return {ComponentKind::State};
    }
    return {ComponentKind::Rect};
}

std::vector<ArrowKind> family_arrows(DiagramFamily family) {
    switch (family) {
        case DiagramFamily::Block: return {ArrowKind::Solid};
        case DiagramFamily::C4: return {ArrowKind::Relation};
        case DiagramFamily::Class:
            return {ArrowKind::Association, ArrowKind::Inheritance, ArrowKind::Composition,
                    ArrowKind::Aggregation, ArrowKind::Dependency, ArrowKind::Realization};
        case DiagramFamily::Flowchart: return {ArrowKind::Solid, ArrowKind::Dotted, ArrowKind::Thick};
        case DiagramFamily::Graph:
            return {ArrowKind::Solid, ArrowKind::Open, ArrowKind::Dotted, ArrowKind::Thick};
        case DiagramFamily::Packet: return {};
        case DiagramFamily::Sequence:
            return {ArrowKind::Sync, ArrowKind::Reply, ArrowKind::Async, ArrowKind::Lost};
        case DiagramFamily::State: return {ArrowKind::Transition};
    }
    return {};
}

// Largest edge count a family can place on b blocks without duplicate pairs.
int pair_capacity(DiagramFamily family, int blocks) {
    if (family == DiagramFamily::State) return blocks * blocks;
    if (family == DiagramFamily::Graph) return blocks * (blocks - 1) / 2;
    return blocks * (blocks - 1);
}

bool forced_labels(DiagramFamily family) {
    return family == DiagramFamily::C4 || family == DiagramFamily::Sequence;
}

CountRange parse_range(const nlohmann::json& j, const std::string& where) {
    if (!j.is_array() || j.size() != 2 || !j[0].is_number_integer() || !j[1].is_number_integer()) {
        throw ConfigError(where + " must be a [min, max] integer pair");
    }
    return CountRange{j[0].get<int>(), j[1].get<int>()};
}

}  // namespace

bool is_undirected(ArrowKind arrow) noexcept {
    return arrow == ArrowKind::Open || arrow == ArrowKind::Link || arrow == ArrowKind::BiRelation;
}

std::string_view to_string(ComponentKind kind) {
    for (const auto& k : kKindNames)
        if (k.kind == kind) return k.name;
    return "?";
}

std::string_view to_string(ArrowKind arrow) {
    for (const auto& a : kArrowNames)
        if (a.arrow == arrow) return a.name;
    return "?";
}

ComponentKind parse_component_kind(std::string_view name) {
    for (const auto& k : kKindNames)
        if (k.name == name) return k.kind;
    throw ConfigError("unknown component kind '" + std::string(name) + "'");
}

ArrowKind parse_arrow_kind(std::string_view name) {
    for (const auto& a : kArrowNames)
        if (a.name == name) return a.arrow;
    throw ConfigError("unknown arrow kind '" + std::string(name) + "'");
}

ProfileTable default_profiles() {
    using R = CountRange;
    using F = DiagramFamily;
    using L = Level;
    struct Row {
        F family;
        L level;
        std::optional<R> edges, blocks, attrs, headers;
    };
    // min/max columns of the per-type statistics table; Packet from the
    // prose header ranges; C4 Easy blocks raised to 2 (one element cannot
    // carry a relation without a self-loop).
    const Row rows[] = {
        {F::Block, L::Easy, R{1, 1}, R{2, 3}, {}, {}},
        {F::Block, L::Medium, R{1, 6}, R{4, 7}, {}, {}},
        {F::Block, L::Hard, R{1, 9}, R{4, 9}, {}, {}},
        {F::C4, L::Easy, R{1, 1}, R{2, 2}, {}, {}},
        {F::C4, L::Medium, R{4, 6}, R{3, 6}, {}, {}},
        {F::C4, L::Hard, R{4, 6}, R{3, 6}, {}, {}},
        {F::Class, L::Easy, R{1, 1}, R{2, 2}, R{4, 10}, {}},
        {F::Class, L::Medium, R{3, 5}, R{4, 6}, R{9, 33}, {}},
        {F::Class, L::Hard, R{5, 5}, R{6, 6}, R{14, 34}, {}},
        {F::Flowchart, L::Easy, R{3, 4}, R{4, 5}, {}, {}},
        {F::Flowchart, L::Medium, R{4, 9}, R{5, 7}, {}, {}},
        {F::Flowchart, L::Hard, R{4, 9}, R{5, 7}, {}, {}},
        {F::Graph, L::Easy, R{1, 2}, R{3, 5}, {}, {}},
        {F::Graph, L::Medium, R{3, 5}, R{2, 8}, {}, {}},
        {F::Graph, L::Hard, R{3, 7}, R{2, 8}, {}, {}},
        {F::Packet, L::Easy, {}, {}, {}, R{2, 3}},
        {F::Packet, L::Medium, {}, {}, {}, R{3, 8}},
        {F::Packet, L::Hard, {}, {}, {}, R{6, 9}},
        {F::Sequence, L::Easy, R{1, 4}, R{2, 4}, {}, {}},
        {F::Sequence, L::Medium, R{3, 4}, R{2, 4}, {}, {}},
        {F::Sequence, L::Hard, R{5, 8}, R{6, 9}, {}, {}},
        {F::State, L::Easy, R{1, 4}, R{2, 8}, {}, {}},
        {F::State, L::Medium, R{5, 12}, R{5, 19}, {}, {}},
        {F::State, L::Hard, R{5, 8}, R{3, 13}, {}, {}},
    };
    ProfileTable table;
    for (const auto& r : rows) {
        DifficultyProfile p;
        p.family = r.family;
        p.level = r.level;
        p.edge_range = r.edges;
        p.block_range = r.blocks;
        p.attribute_range = r.attrs;
        p.header_range = r.headers;
        p.label_probability = forced_labels(r.family) ? 1.0 : 0.5;
        table.emplace(std::make_pair(r.family, r.level), p);
    }
    return table;
}

const DifficultyProfile& profile_for(const ProfileTable& table, DiagramFamily family, Level level) {
    auto it = table.find({family, level});
    if (it == table.end()) throw ConfigError("no profile for " + cell_key(family, level));
    return it->second;
}

void validate_profile(const DifficultyProfile& p) {
    const std::string where = cell_key(p.family, p.level);
    auto check = [&](const std::optional<CountRange>& r, std::string_view name) {
        if (!r) return;
        if (r->min < 0 || r->min > r->max) {
            throw ConfigError(where + "." + std::string(name) + " must satisfy 0 <= min <= max");
        }
    };
    check(p.edge_range, "edge_range");
    check(p.block_range, "block_range");
    check(p.attribute_range, "attribute_range");
    check(p.header_range, "header_range");
    if (!(p.label_probability >= 0.0 && p.label_probability <= 1.0)) {
        throw ConfigError(where + ".label_probability must be in [0, 1]");
    }
    if (p.family == DiagramFamily::Packet) {
        if (!p.header_range || p.header_range->min < 1) throw ConfigError(where + " needs header_range with min >= 1");
    } else {
        if (!p.block_range || !p.edge_range) throw ConfigError(where + " needs block_range and edge_range");
        if (p.block_range->min < 1) throw ConfigError(where + ".block_range min must be >= 1");
        if (p.family == DiagramFamily::Class && !p.attribute_range) {
            throw ConfigError(where + " needs attribute_range");
        }
    }
}

void apply_profile_overrides(ProfileTable& table, const nlohmann::json& overrides) {
    if (overrides.is_null()) return;
    if (!overrides.is_object()) throw ConfigError("profile overrides must be a JSON object");
    for (const auto& [key, value] : overrides.items()) {
        auto dot = key.find('.');
        if (dot == std::string::npos) throw ConfigError("profile key '" + key + "' is not Family.Level");
        const auto family = parse_family(key.substr(0, dot));
        const auto level = parse_level(key.substr(dot + 1));
        auto& p = table.at({family, level});
        if (!value.is_object()) throw ConfigError("profile '" + key + "' must be an object");
        for (const auto& [field, v] : value.items()) {
            const std::string where = key + "." + field;
            if (field == "edge_range") p.edge_range = parse_range(v, where);
            else if (field == "block_range") p.block_range = parse_range(v, where);
            else if (field == "attribute_range") p.attribute_range = parse_range(v, where);
            else if (field == "header_range") p.header_range = parse_range(v, where);
            else if (field == "label_probability") {
                if (!v.is_number()) throw ConfigError(where + " must be a number");
                p.label_probability = v.get<double>();
            } else {
                throw ConfigError("unknown profile field '" + where + "'");
            }
        }
        validate_profile(p);
    }
}

std::string camel_case(std::string_view phrase) {
    std::string out;
    bool upper_next = false;
    for (unsigned char c : phrase) {
        if (!std::isalnum(c)) {
            upper_next = !out.empty();
            continue;
        }
        if (out.empty()) {
            out.push_back(static_cast<char>(std::tolower(c)));
        } else {
            out.push_back(static_cast<char>(upper_next ? std::toupper(c) : c));
        }
        upper_next = false;
    }
    if (!out.empty() && std::isdigit(static_cast<unsigned char>(out.front()))) out.insert(out.begin(), 'm');
    return out;
}

DiagramSpec sample_spec(DiagramFamily family, Level level, const DifficultyProfile& profile,
                        const KeywordBank& bank, std::uint64_t seed) {
    if (profile.family != family || profile.level != level) {
        throw ConfigError("profile " + cell_key(profile.family, profile.level) + " does not match " +
                          cell_key(family, level));
    }
    validate_profile(profile);

    Rng rng(seed);
    DiagramSpec spec;
    spec.family = family;
    spec.level = level;
    spec.seed = seed;

    if (family == DiagramFamily::Packet) {
        const int headers = uniform_int(rng, profile.header_range->min, profile.header_range->max);
        std::vector<int> widths(static_cast<std::size_t>(headers));
        for (int& w : widths) w = uniform_int(rng, 1, kMaxPacketFieldBits);
        spec.discipline = sample_discipline(bank, rng);
        auto names = sample_keywords(bank, spec.discipline, static_cast<std::size_t>(headers), rng);
        for (int i = 0; i < headers; ++i) {
            Component c;
            c.id = "N" + std::to_string(i + 1);
            c.name = std::move(names[static_cast<std::size_t>(i)]);
            c.kind = ComponentKind::Field;
            c.bit_width = widths[static_cast<std::size_t>(i)];
            spec.components.push_back(std::move(c));
        }
        return spec;
    }

    const auto& br = *profile.block_range;
    const auto& er = *profile.edge_range;
    std::vector<int> feasible;
    for (int b = br.min; b <= br.max; ++b) {
        if (pair_capacity(family, b) >= er.min) feasible.push_back(b);
    }
    if (feasible.empty()) {
        throw ConfigError(cell_key(family, level) + ": no block count in range can host " +
                          std::to_string(er.min) + " distinct edges");
    }
    const int blocks = feasible[uniform_index(rng, feasible.size())];
    const int edges = uniform_int(rng, er.min, std::min(er.max, pair_capacity(family, blocks)));
    int attributes = 0;
    if (family == DiagramFamily::Class) {
        attributes = uniform_int(rng, profile.attribute_range->min, profile.attribute_range->max);
    }

    spec.discipline = sample_discipline(bank, rng);
    auto names = sample_keywords(bank, spec.discipline, static_cast<std::size_t>(blocks), rng);
    const auto kinds = family_kinds(family);
    for (int i = 0; i < blocks; ++i) {
        Component c;
        c.id = "N" + std::to_string(i + 1);
        c.name = std::move(names[static_cast<std::size_t>(i)]);
        c.kind = kinds[uniform_index(rng, kinds.size())];
        spec.components.push_back(std::move(c));
    }

    // Shuffled candidate pairs, accepted greedily under the duplicate policy.
    std::vector<std::pair<int, int>> candidates;
    for (int i = 0; i < blocks; ++i) {
        for (int j = 0; j < blocks; ++j) {
            if (i != j || family == DiagramFamily::State) candidates.emplace_back(i, j);
        }
    }
    for (std::size_t i = candidates.size(); i > 1; --i) {
        std::swap(candidates[i - 1], candidates[uniform_index(rng, i)]);
    }
    const auto arrows = family_arrows(family);
    const double label_p = forced_labels(family) ? 1.0 : profile.label_probability;
    std::set<std::pair<int, int>> used;
    std::set<std::pair<int, int>> used_undirected;
    for (const auto& [s, d] : candidates) {
        if (static_cast<int>(spec.edges.size()) == edges) break;
        const ArrowKind arrow = arrows[uniform_index(rng, arrows.size())];
        const bool clash = used.count({s, d}) || used_undirected.count({d, s}) ||
                           (is_undirected(arrow) && used.count({d, s}));
        if (clash) continue;
        used.insert({s, d});
        if (is_undirected(arrow)) used_undirected.insert({s, d});
        Edge e;
        e.src = spec.components[static_cast<std::size_t>(s)].id;
        e.dst = spec.components[static_cast<std::size_t>(d)].id;
        e.arrow = arrow;
        if (bernoulli(rng, label_p)) e.label = sample_keywords(bank, spec.discipline, 1, rng).front();
        spec.edges.push_back(std::move(e));
    }
    if (static_cast<int>(spec.edges.size()) != edges) {
        throw ConfigError(cell_key(family, level) + ": could not place " + std::to_string(edges) + " edges");
    }

    if (family == DiagramFamily::Class) {
        std::vector<int> per_class(static_cast<std::size_t>(blocks), 0);
        int remaining = attributes;
        for (int i = 0; i < blocks && remaining > 0; ++i, --remaining) per_class[static_cast<std::size_t>(i)] = 1;
        for (; remaining > 0; --remaining) ++per_class[uniform_index(rng, per_class.size())];
        static constexpr char kVisibility[] = {'+', '-', '#'};
        for (int i = 0; i < blocks; ++i) {
            auto& comp = spec.components[static_cast<std::size_t>(i)];
            auto member_names = sample_keywords(bank, spec.discipline,
                                                static_cast<std::size_t>(per_class[static_cast<std::size_t>(i)]), rng);
            for (auto& phrase : member_names) {
                Member m;
                m.visibility = kVisibility[uniform_index(rng, 3)];
                m.name = camel_case(phrase);
                m.is_method = bernoulli(rng, 0.5);
                comp.members.push_back(std::move(m));
            }
        }
    }
    return spec;
}

std::vector<std::pair<int, int>> packet_layout(const DiagramSpec& spec) {
    std::vector<std::pair<int, int>> out;
    int next = 0;
    for (const auto& c : spec.components) {
        out.emplace_back(next, next + c.bit_width - 1);
        next += c.bit_width;
    }
    return out;
}

std::vector<std::string> spec_violations(const DiagramSpec& spec, const DifficultyProfile* profile) {
    std::vector<std::string> out;
    std::set<std::string> ids;
    std::set<std::string> names;
    for (const auto& c : spec.components) {
        if (c.id.empty() || !ids.insert(c.id).second) out.push_back("duplicate or empty component id '" + c.id + "'");
        if (c.name.empty()) out.push_back("component " + c.id + " has an empty name");
        if (!names.insert(normalize_phrase(c.name)).second) out.push_back("duplicate component name '" + c.name + "'");
        if (spec.family == DiagramFamily::Packet && (c.bit_width < 1 || c.bit_width > kMaxPacketFieldBits)) {
            out.push_back("packet field " + c.id + " has width " + std::to_string(c.bit_width));
        }
    }
    std::set<std::pair<std::string, std::string>> pairs;
    for (const auto& e : spec.edges) {
        if (!ids.count(e.src) || !ids.count(e.dst)) out.push_back("edge " + e.src + "->" + e.dst + " has a dangling endpoint");
        if (e.src == e.dst && spec.family != DiagramFamily::State) out.push_back("self-loop on " + e.src);
        if (!pairs.insert({e.src, e.dst}).second) out.push_back("duplicate edge " + e.src + "->" + e.dst);
    }
    if (spec.family == DiagramFamily::Packet && !spec.edges.empty()) out.push_back("packet spec has edges");

    if (profile) {
        const auto n = static_cast<int>(spec.components.size());
        const auto m = static_cast<int>(spec.edges.size());
        if (spec.family == DiagramFamily::Packet) {
            if (profile->header_range && !profile->header_range->contains(n)) out.push_back("header count out of range");
        } else {
            if (profile->block_range && !profile->block_range->contains(n)) out.push_back("block count out of range");
            if (profile->edge_range && !profile->edge_range->contains(m)) out.push_back("edge count out of range");
        }
        if (spec.family == DiagramFamily::Class && profile->attribute_range) {
            int attrs = 0;
            for (const auto& c : spec.components) attrs += static_cast<int>(c.members.size());
            if (!profile->attribute_range->contains(attrs)) out.push_back("attribute count out of range");
        }
    }
    return out;
}

}  // namespace diagsynth
