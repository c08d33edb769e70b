#include "diagsynth/describe.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

#include "diagsynth/errors.hpp"
#include "embedded_data.hpp"
#include "template.hpp"

namespace diagsynth {

namespace {

using detail::Bindings;

// Allowed placeholders per pattern key.
const std::map<std::string, std::set<std::string>, std::less<>>& pattern_keys() {
    static const std::map<std::string, std::set<std::string>, std::less<>> keys = {
        {"preamble", {"count"}},
        {"component", {"name"}},
        {"edge", {"src", "dst"}},
        {"edge_labeled", {"src", "dst", "label"}},
        {"edge_undirected", {"src", "dst"}},
        {"edge_undirected_labeled", {"src", "dst", "label"}},
        {"member", {"class", "visibility", "member_kind", "member"}},
        {"field", {"name", "start", "end"}},
    };
    return keys;
}

std::vector<std::string_view> required_keys(DiagramFamily f) {
    if (f == DiagramFamily::Packet) return {"preamble", "field"};
    if (f == DiagramFamily::Class) return {"preamble", "component", "edge", "edge_labeled", "member"};
    return {"preamble", "component", "edge", "edge_labeled"};
}

std::string read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot read " + path.string());
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::string word_for(const std::map<std::string, std::string>& words, const std::string& key) {
    auto it = words.find(key);
    if (it == words.end()) throw ConfigError("no template word for '" + key + "'");
    return it->second;
}

std::string edge_key(const SummaryEdge& e, const DescriptionTemplateSet& t, DiagramFamily f) {
    std::string key = "edge";
    if (e.undirected && t.find_pattern(f, "edge_undirected")) key += "_undirected";
    if (e.label) key += "_labeled";
    return key;
}

}  // namespace

DescriptionTemplateSet DescriptionTemplateSet::from_json(std::string_view text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError(std::string("description templates: ") + e.what());
    }
    DescriptionTemplateSet out;
    if (!j.is_object() || !j.contains("families") || !j["families"].is_object()) {
        throw ConfigError("description templates need a \"families\" object");
    }
    for (const auto& [name, patterns] : j["families"].items()) {
        const auto family = parse_family(name);
        auto& slot = out.patterns_[family];
        for (const auto& [key, value] : patterns.items()) {
            auto allowed = pattern_keys().find(key);
            if (allowed == pattern_keys().end()) throw ConfigError("unknown template key " + name + "." + key);
            if (!value.is_string()) throw ConfigError("template " + name + "." + key + " must be a string");
            const auto pattern = value.get<std::string>();
            for (const auto& p : detail::placeholders(pattern)) {
                if (!allowed->second.count(p)) {
                    throw ConfigError("template " + name + "." + key + " uses unknown placeholder {" + p + "}");
                }
            }
            slot.emplace(key, pattern);
        }
        for (auto key : required_keys(family)) {
            if (!slot.count(key)) throw ConfigError("template set for " + name + " lacks '" + std::string(key) + "'");
        }
    }
    auto words = [&](const char* field, std::map<std::string, std::string>& into) {
        if (!j.contains(field)) return;
        std::set<std::string> seen;
        for (const auto& [k, v] : j[field].items()) {
            into[k] = v.get<std::string>();
            if (!seen.insert(into[k]).second) throw ConfigError(std::string(field) + " words must be distinct");
        }
    };
    words("visibility", out.visibility_);
    words("member_kind", out.member_kind_);
    if (out.patterns_.count(DiagramFamily::Class)) {
        for (const char* k : {"+", "-", "#", "~", ""}) word_for(out.visibility_, k);
        word_for(out.member_kind_, "attribute");
        word_for(out.member_kind_, "method");
    }
    return out;
}

DescriptionTemplateSet DescriptionTemplateSet::load(const std::filesystem::path& path) {
    return from_json(read_file(path));
}

const DescriptionTemplateSet& DescriptionTemplateSet::builtin() {
    static const DescriptionTemplateSet set = from_json(embedded::describe_templates_json());
    return set;
}

bool DescriptionTemplateSet::supports(DiagramFamily family) const noexcept { return patterns_.count(family) > 0; }

const std::string* DescriptionTemplateSet::find_pattern(DiagramFamily family, std::string_view key) const {
    auto f = patterns_.find(family);
    if (f == patterns_.end()) return nullptr;
    auto p = f->second.find(key);
    return p == f->second.end() ? nullptr : &p->second;
}

const std::string& DescriptionTemplateSet::pattern(DiagramFamily family, std::string_view key) const {
    if (const auto* p = find_pattern(family, key)) return *p;
    throw ConfigError("no '" + std::string(key) + "' template for " + std::string(to_string(family)));
}

std::string describe(const StructuralSummary& s, const DescriptionTemplateSet& t) {
    const auto f = s.family;
    std::string out;
    auto line = [&](std::string_view key, const Bindings& b) {
        out += detail::render_template(t.pattern(f, key), b);
        out += '\n';
    };
    if (f == DiagramFamily::Packet) {
        line("preamble", {{"count", std::to_string(s.bits.size())}});
        for (const auto& b : s.bits) {
            line("field", {{"name", b.name}, {"start", std::to_string(b.start)}, {"end", std::to_string(b.end)}});
        }
        return out;
    }
    line("preamble", {{"count", std::to_string(s.blocks.size())}});
    for (const auto& b : s.blocks) line("component", {{"name", b}});
    for (const auto& e : s.edges) {
        Bindings b{{"src", e.src}, {"dst", e.dst}};
        if (e.label) b["label"] = *e.label;
        line(edge_key(e, t, f), b);
    }
    if (f == DiagramFamily::Class) {
        for (const auto& cls : s.blocks) {
            auto it = s.attributes.find(cls);
            if (it == s.attributes.end()) continue;
            for (const auto& sig : it->second) {
                std::string name = sig;
                std::string vis;
                if (!name.empty() && std::string_view("+-#~").find(name.front()) != std::string_view::npos) {
                    vis = name.substr(0, 1);
                    name.erase(0, 1);
                }
                const bool method = name.size() >= 2 && name.compare(name.size() - 2, 2, "()") == 0;
                if (method) name.resize(name.size() - 2);
                line("member", {{"class", cls},
                                {"visibility", word_for(t.visibility_words(), vis)},
                                {"member_kind", word_for(t.member_kind_words(), method ? "method" : "attribute")},
                                {"member", name}});
            }
        }
    }
    return out;
}

StructuralSummary parse_description(std::string_view text, const DescriptionTemplateSet& t) {
    std::vector<std::string_view> lines;
    for (std::size_t pos = 0; pos < text.size();) {
        auto nl = text.find('\n', pos);
        if (nl == std::string_view::npos) nl = text.size();
        auto l = text.substr(pos, nl - pos);
        if (!l.empty() && l.back() == '\r') l.remove_suffix(1);
        if (!l.empty()) lines.push_back(l);
        pos = nl + 1;
    }
    if (lines.empty()) throw InversionError("empty description");

    StructuralSummary s;
    Bindings b;
    bool found = false;
    for (auto f : kAllFamilies) {
        const auto* p = t.find_pattern(f, "preamble");
        if (p && detail::match_template(*p, lines.front(), b)) {
            s.family = f;
            found = true;
            break;
        }
    }
    if (!found) throw InversionError("first sentence is not a known preamble");
    const auto f = s.family;

    auto reverse = [](const std::map<std::string, std::string>& words, const std::string& w) -> const std::string* {
        for (const auto& [k, v] : words)
            if (v == w) return &k;
        return nullptr;
    };

    static constexpr std::string_view kKeys[] = {"component", "edge_labeled", "edge", "edge_undirected_labeled",
                                                 "edge_undirected", "member", "field"};
    for (std::size_t i = 1; i < lines.size(); ++i) {
        std::string_view matched;
        for (auto key : kKeys) {
            const auto* p = t.find_pattern(f, key);
            if (p && detail::match_template(*p, lines[i], b)) {
                matched = key;
                break;
            }
        }
        if (matched.empty()) throw InversionError("sentence " + std::to_string(i + 1) + " matches no template");
        if (matched == "component") {
            add_block(s, b["name"]);
            if (f == DiagramFamily::Class) s.attributes[b["name"]];
        } else if (matched == "field") {
            add_block(s, b["name"]);
            s.bits.push_back({b["name"], std::stoi(b["start"]), std::stoi(b["end"])});
        } else if (matched == "member") {
            const auto* vis = reverse(t.visibility_words(), b["visibility"]);
            const auto* kind = reverse(t.member_kind_words(), b["member_kind"]);
            if (!vis || !kind) throw InversionError("unknown member wording in sentence " + std::to_string(i + 1));
            s.attributes[b["class"]].insert(*vis + b["member"] + (*kind == "method" ? "()" : ""));
        } else {
            SummaryEdge e{b["src"], b["dst"], std::nullopt, matched.find("undirected") != std::string_view::npos};
            if (b.count("label")) e.label = b["label"];
            s.edges.push_back(std::move(e));
        }
    }
    return s;
}

}  // namespace diagsynth
