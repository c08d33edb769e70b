#include "diagsynth/enhance.hpp"

#include <algorithm>
#include <fstream>
#include <set>
#include <sstream>

#include "diagsynth/errors.hpp"
#include "embedded_data.hpp"
#include "template.hpp"

namespace diagsynth {

namespace {

using nlohmann::json;

// Declaration for id with members merged across all of its declarations.
NodeDecl merged_decl(const MermaidDoc& doc, const std::string& id) {
    NodeDecl out;
    out.id = id;
    bool first = true;
    for (const auto& s : doc.statements) {
        const auto* n = std::get_if<NodeDecl>(&s);
        if (!n || n->id != id) continue;
        if (first) {
            out.kind = n->kind;
            first = false;
        }
        if (!out.name && n->name) out.name = n->name;
        out.members.insert(out.members.end(), n->members.begin(), n->members.end());
    }
    return out;
}

bool has_incident_edge(const MermaidDoc& doc, const std::string& id) {
    return std::any_of(doc.statements.begin(), doc.statements.end(), [&](const Statement& s) {
        const auto* e = std::get_if<EdgeStmt>(&s);
        return e && (e->src == id || e->dst == id);
    });
}

void drop_decls(MermaidDoc& doc, const std::string& id) {
    std::erase_if(doc.statements, [&](const Statement& s) {
        const auto* n = std::get_if<NodeDecl>(&s);
        return n && n->id == id;
    });
}

std::string member_text(const Member& m) {
    std::string out;
    if (m.visibility) out.push_back(m.visibility);
    out += m.name;
    if (m.is_method) out += "()";
    return out;
}

json node_to_json(const NodeDecl& n) {
    json members = json::array();
    for (const auto& m : n.members) {
        members.push_back({{"visibility", m.visibility ? std::string(1, m.visibility) : std::string()},
                           {"name", m.name},
                           {"method", m.is_method}});
    }
    return {{"id", n.id},
            {"name", n.name ? json(*n.name) : json(nullptr)},
            {"kind", std::string(to_string(n.kind))},
            {"members", members}};
}

NodeDecl node_from_json(const json& j) {
    NodeDecl n;
    n.id = j.at("id").get<std::string>();
    if (j.contains("name") && !j["name"].is_null()) n.name = j["name"].get<std::string>();
    n.kind = parse_component_kind(j.at("kind").get<std::string>());
    for (const auto& m : j.value("members", json::array())) {
        const auto vis = m.value("visibility", std::string());
        n.members.push_back({vis.empty() ? char(0) : vis[0], m.at("name").get<std::string>(), m.value("method", false)});
    }
    return n;
}

const std::set<std::string> kEdgeKeys = {"labeled", "unlabeled", "undirected_labeled", "undirected_unlabeled"};

}  // namespace

bool supports_enhancement(DiagramFamily family) noexcept {
    return family != DiagramFamily::Packet && family != DiagramFamily::C4;
}

Derivation remove_triplet(const MermaidDoc& doc, Rng& rng, int removals) {
    if (removals < 1) return DerivationSkip{"removals must be at least 1"};
    if (!supports_enhancement(doc.family)) {
        return DerivationSkip{std::string(to_string(doc.family)) + " diagrams are not enhanced"};
    }
    const auto edges = doc.edge_count();
    if (edges < static_cast<std::size_t>(removals) + 1) {
        return DerivationSkip{"needs at least " + std::to_string(removals + 1) + " edges, has " + std::to_string(edges)};
    }
    EnhancementSample out;
    out.base = doc;
    out.reduced = doc;
    for (int k = 0; k < removals; ++k) {
        auto& stmts = out.reduced.statements;
        std::vector<std::size_t> at;
        for (std::size_t i = 0; i < stmts.size(); ++i)
            if (std::holds_alternative<EdgeStmt>(stmts[i])) at.push_back(i);
        const auto pick = at[uniform_index(rng, at.size())];
        Triplet t;
        t.edge = std::get<EdgeStmt>(stmts[pick]);
        t.src = merged_decl(out.reduced, t.edge.src);
        t.dst = merged_decl(out.reduced, t.edge.dst);
        stmts.erase(stmts.begin() + static_cast<std::ptrdiff_t>(pick));
        if (!has_incident_edge(out.reduced, t.edge.src)) {
            t.src_dropped = true;
            drop_decls(out.reduced, t.edge.src);
        }
        if (!has_incident_edge(out.reduced, t.edge.dst)) {
            t.dst_dropped = true;
            drop_decls(out.reduced, t.edge.dst);
        }
        out.removed.push_back(std::move(t));
    }
    return out;
}

EnhanceTemplateSet EnhanceTemplateSet::from_json(std::string_view text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::exception& e) {
        throw ConfigError(std::string("enhance templates: ") + e.what());
    }
    if (!j.is_object()) throw ConfigError("enhance templates must be a JSON object");
    EnhanceTemplateSet out;
    for (const auto& [group, patterns] : j.items()) {
        if (group != "default") parse_family(group);
        if (!patterns.is_object()) throw ConfigError("enhance templates for " + group + " must be an object");
        for (const auto& [key, value] : patterns.items()) {
            std::set<std::string> allowed;
            if (kEdgeKeys.count(key)) allowed = {"src", "dst", "label"};
            else if (key == "new_members") allowed = {"name", "members"};
            else throw ConfigError("unknown enhance template key " + group + "." + key);
            const auto pattern = value.get<std::string>();
            for (const auto& p : detail::placeholders(pattern)) {
                if (!allowed.count(p)) throw ConfigError("enhance template " + group + "." + key + " uses {" + p + "}");
            }
            out.patterns_[group][key] = pattern;
        }
    }
    const auto def = out.patterns_.find("default");
    if (def == out.patterns_.end() || !def->second.count("labeled") || !def->second.count("unlabeled")) {
        throw ConfigError("enhance templates need default.labeled and default.unlabeled");
    }
    return out;
}

EnhanceTemplateSet EnhanceTemplateSet::load(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot read " + path.string());
    std::stringstream ss;
    ss << in.rdbuf();
    return from_json(ss.str());
}

const EnhanceTemplateSet& EnhanceTemplateSet::builtin() {
    static const EnhanceTemplateSet set = from_json(embedded::enhance_templates_json());
    return set;
}

const std::string* EnhanceTemplateSet::find(DiagramFamily family, std::string_view key) const {
    for (std::string_view group : {to_string(family), std::string_view("default")}) {
        auto g = patterns_.find(group);
        if (g == patterns_.end()) continue;
        auto p = g->second.find(key);
        if (p != g->second.end()) return &p->second;
    }
    return nullptr;
}

std::string verbalize(const Triplet& removed, DiagramFamily family, const EnhanceTemplateSet& templates) {
    const std::string base_key = removed.edge.label ? "labeled" : "unlabeled";
    const std::string* pattern = nullptr;
    if (is_undirected(removed.edge.arrow)) pattern = templates.find(family, "undirected_" + base_key);
    if (!pattern) pattern = templates.find(family, base_key);
    detail::Bindings b{{"src", removed.src.display_name()}, {"dst", removed.dst.display_name()}};
    if (removed.edge.label) b["label"] = *removed.edge.label;
    std::string out = detail::render_template(*pattern, b);

    const auto* members_pattern = templates.find(family, "new_members");
    if (!members_pattern) return out;
    auto add_members = [&](const NodeDecl& n, bool dropped) {
        if (!dropped || n.members.empty()) return;
        std::string list;
        for (const auto& m : n.members) {
            if (!list.empty()) list += ", ";
            list += member_text(m);
        }
        out += ' ';
        out += detail::render_template(*members_pattern, {{"name", n.display_name()}, {"members", list}});
    };
    add_members(removed.src, removed.src_dropped);
    if (removed.dst.id != removed.src.id) add_members(removed.dst, removed.dst_dropped);
    return out;
}

std::string verbalize_all(const std::vector<Triplet>& removed, DiagramFamily family,
                          const EnhanceTemplateSet& templates) {
    std::string out;
    for (const auto& t : removed) {
        if (!out.empty()) out += ' ';
        out += verbalize(t, family, templates);
    }
    return out;
}

StructuralSummary reinsert(StructuralSummary reduced, const std::vector<Triplet>& removed,
                           const CanonicalOptions& opts) {
    const bool is_class = reduced.family == DiagramFamily::Class;
    for (auto it = removed.rbegin(); it != removed.rend(); ++it) {
        const auto src = canonical_name(it->src.display_name(), opts);
        const auto dst = canonical_name(it->dst.display_name(), opts);
        for (const auto* n : {&it->src, &it->dst}) {
            const auto name = canonical_name(n->display_name(), opts);
            add_block(reduced, name);
            if (!is_class) continue;
            auto& members = reduced.attributes[name];
            for (const auto& m : n->members) members.insert(canonical_member(m, opts));
        }
        SummaryEdge e{src, dst, std::nullopt, is_undirected(it->edge.arrow)};
        if (it->edge.label) {
            auto label = canonical_name(*it->edge.label, opts);
            if (!label.empty()) e.label = std::move(label);
        }
        reduced.edges.push_back(std::move(e));
    }
    return reduced;
}

json triplet_to_json(const Triplet& t) {
    return {{"src", node_to_json(t.src)},
            {"dst", node_to_json(t.dst)},
            {"edge",
             {{"src", t.edge.src},
              {"dst", t.edge.dst},
              {"label", t.edge.label ? json(*t.edge.label) : json(nullptr)},
              {"arrow", std::string(to_string(t.edge.arrow))}}},
            {"src_dropped", t.src_dropped},
            {"dst_dropped", t.dst_dropped}};
}

Triplet triplet_from_json(const json& j) {
    try {
        Triplet t;
        t.src = node_from_json(j.at("src"));
        t.dst = node_from_json(j.at("dst"));
        const auto& e = j.at("edge");
        t.edge.src = e.at("src").get<std::string>();
        t.edge.dst = e.at("dst").get<std::string>();
        if (e.contains("label") && !e["label"].is_null()) t.edge.label = e["label"].get<std::string>();
        t.edge.arrow = parse_arrow_kind(e.at("arrow").get<std::string>());
        t.src_dropped = j.value("src_dropped", false);
        t.dst_dropped = j.value("dst_dropped", false);
        return t;
    } catch (const json::exception& e) {
        throw ConfigError(std::string("malformed triplet: ") + e.what());
    }
}

}  // namespace diagsynth
