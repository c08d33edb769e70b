#include <algorithm>
#include <cctype>
#include <charconv>
#include <set>
#include <unordered_map>

#include "diagsynth/errors.hpp"
#include "mermaid_internal.hpp"

namespace diagsynth {

namespace detail {

std::string_view trim(std::string_view s) {
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
    return s;
}

}  // namespace detail

namespace {

using detail::trim;

bool is_id_char(char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_'; }

bool starts_word(std::string_view line, std::string_view word) {
    if (line.substr(0, word.size()) != word) return false;
    return line.size() == word.size() || !is_id_char(line[word.size()]);
}

std::string unquote(std::string_view s) {
    s = trim(s);
    if (s.size() >= 2 && s.front() == '"' && s.back() == '"') s = trim(s.substr(1, s.size() - 2));
    return std::string(s);
}

std::optional<std::string> label_of(std::string_view s) {
    auto text = unquote(s);
    if (text.empty()) return std::nullopt;
    return text;
}

void skip_ws(std::string_view s, std::size_t& i) {
    while (i < s.size() && (s[i] == ' ' || s[i] == '\t')) ++i;
}

std::string_view read_id(std::string_view s, std::size_t& i) {
    const std::size_t start = i;
    while (i < s.size() && is_id_char(s[i])) ++i;
    return s.substr(start, i - start);
}

bool all_id_chars(std::string_view s) {
    return !s.empty() && std::all_of(s.begin(), s.end(), is_id_char);
}

bool read_int(std::string_view s, std::size_t& i, int& value) {
    const auto* first = s.data() + i;
    auto [ptr, ec] = std::from_chars(first, s.data() + s.size(), value);
    if (ec != std::errc() || ptr == first) return false;
    i += static_cast<std::size_t>(ptr - first);
    return true;
}

struct Line {
    int number = 0;
    std::string_view text;
};

// Trimmed, non-empty lines with frontmatter and %% comments removed.
std::vector<Line> body_lines(std::string_view source) {
    std::vector<Line> out;
    int number = 0;
    bool in_frontmatter = false;
    bool seen_content = false;
    std::size_t pos = 0;
    while (pos <= source.size()) {
        auto nl = source.find('\n', pos);
        if (nl == std::string_view::npos) nl = source.size();
        auto text = trim(source.substr(pos, nl - pos));
        ++number;
        pos = nl + 1;
        if (text.empty()) continue;
        if (!seen_content && text == "---") {
            in_frontmatter = !in_frontmatter;
            continue;
        }
        if (in_frontmatter) continue;
        if (text.substr(0, 2) == "%%") continue;
        seen_content = true;
        out.push_back({number, text});
    }
    return out;
}

std::optional<DiagramFamily> family_of_header(std::string_view line) {
    const auto token = line.substr(0, line.find_first_of(" \t"));
    if (token == "block-beta" || token == "block") return DiagramFamily::Block;
    if (token == "C4Context" || token == "C4Container" || token == "C4Component" || token == "C4Dynamic" ||
        token == "C4Deployment") {
        return DiagramFamily::C4;
    }
    if (token == "classDiagram" || token == "classDiagram-v2") return DiagramFamily::Class;
    if (token == "flowchart" || token == "flowchart-elk") return DiagramFamily::Flowchart;
    if (token == "graph") return DiagramFamily::Graph;
    if (token == "packet-beta" || token == "packet") return DiagramFamily::Packet;
    if (token == "sequenceDiagram") return DiagramFamily::Sequence;
    if (token == "stateDiagram" || token == "stateDiagram-v2") return DiagramFamily::State;
    return std::nullopt;
}

struct Shape {
    std::string_view open;
    std::string_view close;
    ComponentKind kind;
};

constexpr Shape kShapes[] = {
    {"(((", ")))", ComponentKind::Circle},    {"((", "))", ComponentKind::Circle},
    {"([", "])", ComponentKind::Stadium},     {"[[", "]]", ComponentKind::Subroutine},
    {"[(", ")]", ComponentKind::Rect},        {"{{", "}}", ComponentKind::Rect},
    {"[/", "/]", ComponentKind::Rect},        {"[/", "\\]", ComponentKind::Rect},
    {"[\\", "\\]", ComponentKind::Rect},      {"[\\", "/]", ComponentKind::Rect},
    {">", "]", ComponentKind::Rect},          {"(", ")", ComponentKind::Round},
    {"[", "]", ComponentKind::Rect},          {"{", "}", ComponentKind::Decision},
};

struct ClassOp {
    std::string_view text;
    ArrowKind arrow;
};

// Longest spellings first so prefixes do not shadow them.
constexpr ClassOp kClassOps[] = {
    {"<|--", ArrowKind::Inheritance}, {"--|>", ArrowKind::Inheritance}, {"<|..", ArrowKind::Realization},
    {"..|>", ArrowKind::Realization}, {"<-->", ArrowKind::Link},        {"*--", ArrowKind::Composition},
    {"--*", ArrowKind::Composition},  {"o--", ArrowKind::Aggregation},  {"--o", ArrowKind::Aggregation},
    {"-->", ArrowKind::Association},  {"<--", ArrowKind::Association},  {"..>", ArrowKind::Dependency},
    {"<..", ArrowKind::Dependency},   {"--", ArrowKind::Link},          {"..", ArrowKind::Link},
};

struct SeqOp {
    std::string_view text;
    ArrowKind arrow;
};

constexpr SeqOp kSeqOps[] = {
    {"<<-->>", ArrowKind::Reply}, {"<<->>", ArrowKind::Sync}, {"-->>", ArrowKind::Reply},
    {"->>", ArrowKind::Sync},     {"--x", ArrowKind::Lost},   {"-x", ArrowKind::Lost},
    {"--)", ArrowKind::Async},    {"-)", ArrowKind::Async},   {"-->", ArrowKind::Reply},
    {"->", ArrowKind::Sync},
};

constexpr std::string_view kC4Elements[] = {
    "Person",       "Person_Ext",       "System",          "System_Ext",     "SystemDb",
    "SystemDb_Ext", "SystemQueue",      "SystemQueue_Ext", "Container",      "Container_Ext",
    "ContainerDb",  "ContainerDb_Ext",  "ContainerQueue",  "ContainerQueue_Ext", "Component",
    "Component_Ext", "ComponentDb",     "ComponentDb_Ext", "ComponentQueue", "ComponentQueue_Ext",
    "Node",         "Node_L",           "Node_R",          "Deployment_Node",
};

constexpr std::string_view kC4Relations[] = {
    "Rel", "Rel_Back", "Rel_U", "Rel_Up", "Rel_D", "Rel_Down", "Rel_L", "Rel_Left", "Rel_R", "Rel_Right", "BiRel",
};

constexpr std::string_view kC4Directives[] = {
    "Boundary", "Enterprise_Boundary", "System_Boundary", "Container_Boundary", "UpdateElementStyle",
    "UpdateRelStyle", "UpdateLayoutConfig", "UpdateBoundaryStyle", "AddElementTag", "AddRelTag",
};

template <std::size_t N>
bool one_of(std::string_view word, const std::string_view (&list)[N]) {
    return std::find(std::begin(list), std::end(list), word) != std::end(list);
}

bool any_word(std::string_view line, std::initializer_list<std::string_view> words) {
    for (auto w : words)
        if (starts_word(line, w)) return true;
    return false;
}

std::vector<std::string> split_args(std::string_view inner) {
    std::vector<std::string> out;
    bool quoted = false;
    std::size_t start = 0;
    for (std::size_t i = 0; i <= inner.size(); ++i) {
        if (i < inner.size() && inner[i] == '"') quoted = !quoted;
        if (i == inner.size() || (inner[i] == ',' && !quoted)) {
            out.push_back(unquote(inner.substr(start, i - start)));
            start = i + 1;
        }
    }
    return out;
}

bool parse_member(std::string_view text, Member& m) {
    auto t = trim(text);
    if (t.empty() || t.substr(0, 2) == "<<") return false;
    char vis = 0;
    if (t.front() == '+' || t.front() == '-' || t.front() == '#' || t.front() == '~') {
        vis = t.front();
        t = trim(t.substr(1));
    }
    while (!t.empty() && (t.back() == '$' || t.back() == '*')) t = trim(t.substr(0, t.size() - 1));
    const auto paren = t.find('(');
    const bool method = paren != std::string_view::npos;
    auto name = method ? trim(t.substr(0, paren)) : trim(t.substr(0, t.find(':')));
    if (auto sp = name.find_last_of(" \t"); sp != std::string_view::npos) name = name.substr(sp + 1);
    if (name.empty()) return false;
    m.visibility = vis;
    m.name = std::string(name);
    m.is_method = method;
    return true;
}

class Parser {
public:
    Parser(DiagramFamily family, ParseResult& out, detail::ParseTrace* trace)
        : family_(family), out_(out), trace_(trace) {}

    void line(const Line& l) {
        line_ = l.number;
        bool ok = false;
        switch (family_) {
            case DiagramFamily::Block:
            case DiagramFamily::Flowchart:
            case DiagramFamily::Graph: ok = flow_line(l.text); break;
            case DiagramFamily::C4: ok = c4_line(l.text); break;
            case DiagramFamily::Class: ok = class_line(l.text); break;
            case DiagramFamily::Packet: ok = packet_line(l.text); break;
            case DiagramFamily::Sequence: ok = sequence_line(l.text); break;
            case DiagramFamily::State: ok = state_line(l.text); break;
        }
        if (!ok) {
            ++out_.skipped;
            out_.skipped_lines.push_back(l.number);
        }
    }

    void finish() {
        if (class_body_) issue(class_open_line_, "class body is never closed");
        if (in_note_) issue(note_line_, "note is never closed");
        if (family_ == DiagramFamily::C4) {
            std::set<std::string> declared;
            for (const auto& s : out_.doc.statements)
                if (const auto* n = std::get_if<NodeDecl>(&s)) declared.insert(n->id);
            for (std::size_t i = 0; i < out_.doc.statements.size(); ++i) {
                const auto* e = std::get_if<EdgeStmt>(&out_.doc.statements[i]);
                if (!e) continue;
                for (const auto* id : {&e->src, &e->dst}) {
                    if (!declared.count(*id)) issue(line_of(i), "relation endpoint '" + *id + "' is not declared");
                }
            }
        }
    }

private:
    void push(Statement s) {
        out_.doc.statements.push_back(std::move(s));
        if (trace_) trace_->statement_lines.push_back(line_);
    }

    void directive(std::string_view text) { out_.doc.directives.emplace_back(text); }

    void issue(int line, std::string reason) {
        if (trace_) trace_->issues.push_back({line, std::move(reason)});
    }

    int line_of(std::size_t statement) const {
        return trace_ && statement < trace_->statement_lines.size() ? trace_->statement_lines[statement] : 0;
    }

    // --- flowchart / graph / block -------------------------------------

    bool scan_node(std::string_view s, std::size_t& i, NodeDecl& out, bool& shaped) const {
        std::size_t j = i;
        const auto id = read_id(s, j);
        if (id.empty()) return false;
        out = NodeDecl{};
        out.id = std::string(id);
        shaped = false;
        for (const auto& shape : kShapes) {
            if (s.substr(j, shape.open.size()) != shape.open) continue;
            std::size_t k = j + shape.open.size();
            std::size_t q = k;
            skip_ws(s, q);
            std::size_t close = std::string_view::npos;
            std::string_view text;
            if (q < s.size() && s[q] == '"') {
                const auto end_quote = s.find('"', q + 1);
                if (end_quote == std::string_view::npos) return false;
                std::size_t after = end_quote + 1;
                skip_ws(s, after);
                if (s.substr(after, shape.close.size()) != shape.close) continue;
                close = after;
                text = s.substr(q + 1, end_quote - q - 1);
            } else {
                close = s.find(shape.close, k);
                if (close == std::string_view::npos) continue;
                text = s.substr(k, close - k);
                if (text.find('"') != std::string_view::npos) return false;
            }
            out.name = std::string(trim(text));
            out.kind = shape.kind;
            shaped = true;
            j = close + shape.close.size();
            break;
        }
        if (!shaped && j < s.size() && std::string_view("([{>").find(s[j]) != std::string_view::npos) return false;
        if (s.substr(j, 3) == ":::") {
            j += 3;
            read_id(s, j);
        }
        if (family_ == DiagramFamily::Block && j + 1 < s.size() && s[j] == ':' &&
            std::isdigit(static_cast<unsigned char>(s[j + 1]))) {
            ++j;
            while (j < s.size() && std::isdigit(static_cast<unsigned char>(s[j]))) ++j;
        }
        i = j;
        return true;
    }

    static bool scan_arrow(std::string_view s, std::size_t& i, ArrowKind& kind, std::optional<std::string>& label) {
        std::size_t j = i;
        skip_ws(s, j);
        const bool left = j < s.size() && s[j] == '<';
        if (left) ++j;
        const std::size_t run_start = j;
        auto is_run = [](char c) { return c == '-' || c == '=' || c == '.'; };
        while (j < s.size() && is_run(s[j])) ++j;
        auto run = s.substr(run_start, j - run_start);
        if (run.size() < 2) return false;
        auto head_at = [&](std::size_t p) {
            if (p >= s.size()) return false;
            if (s[p] == '>') return true;
            return (s[p] == 'o' || s[p] == 'x') && (p + 1 == s.size() || s[p + 1] == ' ' || s[p + 1] == '|');
        };
        bool head = head_at(j);
        if (head) ++j;
        std::string shape(run);
        label.reset();
        if (!head && !left && (run == "--" || run == "==" || run == "-.") && j < s.size() && s[j] == ' ') {
            // "A -- text --> B" style inline label
            std::string_view closers[2];
            if (run == "--") closers[0] = "-->", closers[1] = "---";
            else if (run == "==") closers[0] = "==>", closers[1] = "===";
            else closers[0] = ".->", closers[1] = ".-";
            std::size_t best = std::string_view::npos;
            for (auto c : closers) best = std::min(best, s.find(c, j));
            if (best == std::string_view::npos) return false;
            label = label_of(s.substr(j, best - j));
            j = best;
            while (j < s.size() && is_run(s[j])) shape.push_back(s[j++]);
            head = head_at(j);
            if (head) ++j;
        }
        if (left || !head) kind = ArrowKind::Open;
        else if (shape.find('=') != std::string::npos) kind = ArrowKind::Thick;
        else if (shape.find('.') != std::string::npos) kind = ArrowKind::Dotted;
        else kind = ArrowKind::Solid;
        std::size_t p = j;
        skip_ws(s, p);
        if (p < s.size() && s[p] == '|') {
            const auto end = s.find('|', p + 1);
            if (end == std::string_view::npos) return false;
            label = label_of(s.substr(p + 1, end - p - 1));
            j = end + 1;
        }
        i = j;
        return true;
    }

    bool flow_line(std::string_view s) {
        while (!s.empty() && s.back() == ';') s = trim(s.substr(0, s.size() - 1));
        if (family_ == DiagramFamily::Block) {
            if (starts_word(s, "columns")) {
                directive(s);
                return true;
            }
            if (any_word(s, {"space", "block", "end", "classDef", "class", "style"})) return true;
        } else if (any_word(s, {"subgraph", "end", "direction", "classDef", "class", "style", "linkStyle", "click"})) {
            directive(s);
            return true;
        }

        std::vector<Statement> pending;
        std::vector<std::string> bare;
        std::size_t i = 0;
        auto read_group = [&](std::vector<std::string>& ids) {
            ids.clear();
            while (true) {
                NodeDecl d;
                bool shaped = false;
                skip_ws(s, i);
                if (!scan_node(s, i, d, shaped)) return false;
                ids.push_back(d.id);
                if (shaped) pending.emplace_back(std::move(d));
                else bare.push_back(ids.back());
                std::size_t p = i;
                skip_ws(s, p);
                if (p < s.size() && s[p] == '&') {
                    i = p + 1;
                    continue;
                }
                return true;
            }
        };

        std::vector<std::string> left;
        std::vector<std::string> right;
        if (!read_group(left)) return false;
        bool any_edge = false;
        while (true) {
            skip_ws(s, i);
            if (i >= s.size()) break;
            ArrowKind kind{};
            std::optional<std::string> label;
            if (scan_arrow(s, i, kind, label)) {
                if (!read_group(right)) return false;
                for (const auto& a : left)
                    for (const auto& b : right) pending.emplace_back(EdgeStmt{a, b, label, kind});
                left = right;
                any_edge = true;
                continue;
            }
            if (family_ == DiagramFamily::Block && !any_edge) {
                std::vector<std::string> more;
                if (!read_group(more)) return false;
                continue;
            }
            return false;
        }
        if (!any_edge) {
            for (const auto& id : bare) pending.emplace_back(NodeDecl{id, std::nullopt, ComponentKind::Rect, {}});
        }
        for (auto& st : pending) push(std::move(st));
        return true;
    }

    // --- C4 ---------------------------------------------------------------

    bool c4_line(std::string_view s) {
        if (s == "}") return true;
        if (starts_word(s, "title")) {
            directive(s);
            return true;
        }
        std::size_t i = 0;
        const auto macro = read_id(s, i);
        if (macro.empty()) return false;
        skip_ws(s, i);
        if (i >= s.size() || s[i] != '(') return false;
        const auto close = s.rfind(')');
        if (close == std::string_view::npos || close < i) return false;
        const auto tail = trim(s.substr(close + 1));
        if (!tail.empty() && tail != "{") return false;
        const auto inner = s.substr(i + 1, close - i - 1);
        if (std::count(inner.begin(), inner.end(), '"') % 2 != 0) return false;
        auto args = split_args(inner);
        args.erase(std::remove_if(args.begin(), args.end(), [](const std::string& a) { return !a.empty() && a[0] == '$'; }),
                   args.end());
        if (one_of(macro, kC4Directives)) {
            directive(s);
            return true;
        }
        if (one_of(macro, kC4Elements)) {
            if (args.empty() || !all_id_chars(args[0])) return false;
            NodeDecl n;
            n.id = args[0];
            if (args.size() > 1) n.name = args[1];
            if (macro.substr(0, 6) == "Person") n.kind = ComponentKind::Person;
            else if (macro == "System_Ext") n.kind = ComponentKind::SystemExt;
            else if (macro.find("Db") != std::string_view::npos) n.kind = ComponentKind::SystemDb;
            else n.kind = ComponentKind::System;
            push(std::move(n));
            return true;
        }
        if (one_of(macro, kC4Relations)) {
            if (args.size() < 2 || !all_id_chars(args[0]) || !all_id_chars(args[1])) return false;
            EdgeStmt e;
            e.src = args[0];
            e.dst = args[1];
            if (macro == "Rel_Back") std::swap(e.src, e.dst);
            if (args.size() > 2 && !args[2].empty()) e.label = args[2];
            e.arrow = macro == "BiRel" ? ArrowKind::BiRelation : ArrowKind::Relation;
            push(std::move(e));
            return true;
        }
        return false;
    }

    // --- class ------------------------------------------------------------

    bool class_line(std::string_view s) {
        if (class_body_) {
            if (s == "}") {
                class_body_ = false;
                return true;
            }
            if (s.substr(0, 2) == "<<") return true;
            Member m;
            if (!parse_member(s, m)) return false;
            std::get<NodeDecl>(out_.doc.statements[class_stmt_]).members.push_back(std::move(m));
            return true;
        }
        if (s == "}") return true;
        if (s.substr(0, 2) == "<<") return true;
        if (any_word(s, {"classDef", "style", "cssClass", "callback", "click", "link", "direction", "note"})) {
            directive(s);
            return true;
        }
        if (starts_word(s, "namespace")) return true;
        if (starts_word(s, "class")) return class_decl(s);
        if (relation(s)) return true;

        std::size_t i = 0;
        const auto id = read_id(s, i);
        skip_ws(s, i);
        if (id.empty() || i >= s.size() || s[i] != ':') return false;
        Member m;
        if (!parse_member(s.substr(i + 1), m)) return false;
        push(NodeDecl{std::string(id), std::nullopt, ComponentKind::ClassBox, {std::move(m)}});
        return true;
    }

    bool class_decl(std::string_view s) {
        std::size_t i = 5;
        skip_ws(s, i);
        const auto id = read_id(s, i);
        if (id.empty()) return false;
        NodeDecl n;
        n.id = std::string(id);
        n.kind = ComponentKind::ClassBox;
        if (i < s.size() && s[i] == '~') {
            const auto end = s.find('~', i + 1);
            if (end == std::string_view::npos) return false;
            i = end + 1;
        }
        if (i < s.size() && s[i] == '[') {
            const auto end = s.find(']', i + 1);
            if (end == std::string_view::npos) return false;
            auto text = trim(s.substr(i + 1, end - i - 1));
            if (text.size() < 2 || text.front() != '"' || text.back() != '"') return false;
            n.name = unquote(text);
            i = end + 1;
        }
        if (s.substr(i, 3) == ":::") {
            i += 3;
            read_id(s, i);
        }
        const auto rest = trim(s.substr(i));
        if (rest == "{") {
            class_body_ = true;
            class_open_line_ = line_;
            class_stmt_ = out_.doc.statements.size();
        } else if (!rest.empty() && rest != "{}" && rest != "{ }") {
            return false;
        }
        push(std::move(n));
        return true;
    }

    bool relation(std::string_view s) {
        std::size_t i = 0;
        const auto a = read_id(s, i);
        if (a.empty()) return false;
        auto cardinality = [&] {
            skip_ws(s, i);
            if (i < s.size() && s[i] == '"') {
                const auto end = s.find('"', i + 1);
                if (end == std::string_view::npos) return false;
                i = end + 1;
                skip_ws(s, i);
            }
            return true;
        };
        if (!cardinality()) return false;
        const ClassOp* op = nullptr;
        for (const auto& candidate : kClassOps) {
            if (s.substr(i, candidate.text.size()) != candidate.text) continue;
            const auto after = i + candidate.text.size();
            if (after < s.size() && s[after] != ' ' && s[after] != '"') continue;
            op = &candidate;
            break;
        }
        if (!op) return false;
        i += op->text.size();
        if (!cardinality()) return false;
        const auto b = read_id(s, i);
        if (b.empty()) return false;
        skip_ws(s, i);
        EdgeStmt e{std::string(a), std::string(b), std::nullopt, op->arrow};
        if (i < s.size()) {
            if (s[i] != ':') return false;
            e.label = label_of(s.substr(i + 1));
        }
        push(std::move(e));
        return true;
    }

    // --- packet -----------------------------------------------------------

    bool packet_line(std::string_view s) {
        if (starts_word(s, "title")) {
            directive(s);
            return true;
        }
        std::size_t i = 0;
        int start = 0;
        int end = 0;
        if (s.front() == '+') {
            int width = 0;
            i = 1;
            if (!read_int(s, i, width) || width < 1) return false;
            start = next_bit_;
            end = start + width - 1;
        } else {
            if (!read_int(s, i, start)) return false;
            end = start;
            if (i < s.size() && s[i] == '-') {
                ++i;
                if (!read_int(s, i, end)) return false;
            }
        }
        skip_ws(s, i);
        if (i >= s.size() || s[i] != ':') return false;
        const auto raw = trim(s.substr(i + 1));
        if (std::count(raw.begin(), raw.end(), '"') % 2 != 0) return false;
        if (end < start) issue(line_, "field ends before it starts");
        if (start != next_bit_) {
            issue(line_, "field starts at bit " + std::to_string(start) + ", expected " + std::to_string(next_bit_));
        }
        next_bit_ = std::max(next_bit_, end + 1);
        push(FieldStmt{start, end, unquote(raw)});
        return true;
    }

    // --- sequence ---------------------------------------------------------

    bool sequence_line(std::string_view s) {
        if (any_word(s, {"autonumber", "activate", "deactivate", "loop", "alt", "else", "opt", "par", "and",
                         "critical", "break", "rect", "end", "Note", "note", "box", "title", "destroy", "links",
                         "link", "properties", "details"})) {
            directive(s);
            return true;
        }
        auto body = s;
        if (starts_word(body, "create")) body = trim(body.substr(6));
        if (starts_word(body, "participant") || starts_word(body, "actor")) {
            const bool actor = starts_word(body, "actor");
            auto rest = trim(body.substr(actor ? 5 : 11));
            std::size_t i = 0;
            const auto id = read_id(rest, i);
            if (id.empty()) return false;
            NodeDecl n{std::string(id), std::nullopt, actor ? ComponentKind::Actor : ComponentKind::Participant, {}};
            auto tail = trim(rest.substr(i));
            if (!tail.empty()) {
                if (!starts_word(tail, "as")) return false;
                auto name = trim(tail.substr(2));
                if (name.empty()) return false;
                n.name = std::string(name);
            }
            push(std::move(n));
            return true;
        }
        std::size_t i = 0;
        const auto a = read_id(s, i);
        if (a.empty()) return false;
        skip_ws(s, i);
        const SeqOp* op = nullptr;
        for (const auto& candidate : kSeqOps) {
            if (s.substr(i, candidate.text.size()) == candidate.text) {
                op = &candidate;
                break;
            }
        }
        if (!op) return false;
        i += op->text.size();
        skip_ws(s, i);
        if (i < s.size() && (s[i] == '+' || s[i] == '-')) ++i;
        skip_ws(s, i);
        const auto b = read_id(s, i);
        if (b.empty()) return false;
        skip_ws(s, i);
        if (i >= s.size() || s[i] != ':') return false;
        push(EdgeStmt{std::string(a), std::string(b), label_of(s.substr(i + 1)), op->arrow});
        return true;
    }

    // --- state ------------------------------------------------------------

    bool state_line(std::string_view s) {
        if (in_note_) {
            if (starts_word(s, "end") && s.find("note") != std::string_view::npos) in_note_ = false;
            return true;
        }
        if (s == "}" || s == "--") return true;
        if (any_word(s, {"direction", "classDef", "class", "style"})) {
            directive(s);
            return true;
        }
        if (starts_word(s, "note")) {
            if (s.find(':') == std::string_view::npos) {
                in_note_ = true;
                note_line_ = line_;
            }
            return true;
        }
        if (starts_word(s, "state")) return state_decl(trim(s.substr(5)));

        if (const auto arrow = s.find("-->"); arrow != std::string_view::npos) {
            const auto a = trim(s.substr(0, arrow));
            auto rest = s.substr(arrow + 3);
            std::optional<std::string> label;
            if (const auto colon = rest.find(':'); colon != std::string_view::npos) {
                label = label_of(rest.substr(colon + 1));
                rest = rest.substr(0, colon);
            }
            const auto b = trim(rest);
            const bool a_star = a == "[*]";
            const bool b_star = b == "[*]";
            if ((!a_star && !all_id_chars(a)) || (!b_star && !all_id_chars(b))) return false;
            if (a_star || b_star) {
                // pseudo-states carry no structure; keep the real endpoint
                if (!a_star) push(NodeDecl{std::string(a), std::nullopt, ComponentKind::State, {}});
                if (!b_star) push(NodeDecl{std::string(b), std::nullopt, ComponentKind::State, {}});
                return true;
            }
            push(EdgeStmt{std::string(a), std::string(b), std::move(label), ArrowKind::Transition});
            return true;
        }

        const auto colon = s.find(':');
        if (colon == std::string_view::npos) return false;
        const auto id = trim(s.substr(0, colon));
        if (!all_id_chars(id)) return false;
        push(NodeDecl{std::string(id), label_of(s.substr(colon + 1)), ComponentKind::State, {}});
        return true;
    }

    bool state_decl(std::string_view rest) {
        NodeDecl n;
        n.kind = ComponentKind::State;
        std::size_t i = 0;
        if (!rest.empty() && rest.front() == '"') {
            const auto end = rest.find('"', 1);
            if (end == std::string_view::npos) return false;
            n.name = std::string(trim(rest.substr(1, end - 1)));
            i = end + 1;
            skip_ws(rest, i);
            if (!starts_word(rest.substr(i), "as")) return false;
            i += 2;
            skip_ws(rest, i);
        }
        const auto id = read_id(rest, i);
        if (id.empty()) return false;
        n.id = std::string(id);
        auto tail = trim(rest.substr(i));
        if (!tail.empty() && tail != "{" && !(tail.substr(0, 2) == "<<" && tail.substr(tail.size() - 2) == ">>")) {
            if (tail.front() != ':') return false;
            if (!n.name) n.name = label_of(tail.substr(1));
        }
        push(std::move(n));
        return true;
    }

    DiagramFamily family_;
    ParseResult& out_;
    detail::ParseTrace* trace_;
    int line_ = 0;
    bool class_body_ = false;
    int class_open_line_ = 0;
    std::size_t class_stmt_ = 0;
    bool in_note_ = false;
    int note_line_ = 0;
    int next_bit_ = 0;
};

}  // namespace

namespace detail {

ParseResult parse_traced(std::string_view source, ParseTrace* trace) {
    const auto lines = body_lines(source);
    if (lines.empty()) throw FamilyDetectionError("no diagram header directive");
    const auto family = family_of_header(lines.front().text);
    if (!family) {
        throw FamilyDetectionError("unrecognised diagram header '" + std::string(lines.front().text) + "'");
    }
    ParseResult out;
    out.doc.family = *family;
    out.doc.header = std::string(lines.front().text);
    if (trace) trace->header_line = lines.front().number;
    Parser parser(*family, out, trace);
    for (std::size_t i = 1; i < lines.size(); ++i) parser.line(lines[i]);
    parser.finish();
    return out;
}

}  // namespace detail

ParseResult parse_document(std::string_view source) { return detail::parse_traced(source, nullptr); }

std::optional<DiagramFamily> detect_family(std::string_view source) {
    const auto lines = body_lines(source);
    if (lines.empty()) return std::nullopt;
    return family_of_header(lines.front().text);
}

StructuralSummary summarize(const MermaidDoc& doc, const CanonicalOptions& opts) {
    StructuralSummary out;
    out.family = doc.family;
    std::unordered_map<std::string, std::string> names;
    for (const auto& s : doc.statements) {
        const auto* n = std::get_if<NodeDecl>(&s);
        if (n && n->name) names.try_emplace(n->id, *n->name);
    }
    auto resolve = [&](const std::string& id) {
        auto it = names.find(id);
        return canonical_name(it == names.end() ? id : it->second, opts);
    };
    const bool is_class = doc.family == DiagramFamily::Class;
    for (const auto& s : doc.statements) {
        if (const auto* n = std::get_if<NodeDecl>(&s)) {
            const auto name = resolve(n->id);
            add_block(out, name);
            if (is_class) {
                auto& members = out.attributes[name];
                for (const auto& m : n->members) members.insert(canonical_member(m, opts));
            }
        } else if (const auto* e = std::get_if<EdgeStmt>(&s)) {
            SummaryEdge se{resolve(e->src), resolve(e->dst), std::nullopt, is_undirected(e->arrow)};
            if (e->label) {
                auto label = canonical_name(*e->label, opts);
                if (!label.empty()) se.label = std::move(label);
            }
            add_block(out, se.src);
            add_block(out, se.dst);
            if (is_class) {
                out.attributes[se.src];
                out.attributes[se.dst];
            }
            out.edges.push_back(std::move(se));
        } else if (const auto* f = std::get_if<FieldStmt>(&s)) {
            auto name = canonical_name(f->name, opts);
            add_block(out, name);
            out.bits.push_back({std::move(name), f->start, f->end});
        }
    }
    std::stable_sort(out.bits.begin(), out.bits.end(),
                     [](const BitField& a, const BitField& b) { return a.start < b.start; });
    return out;
}

StructuralSummary parse(std::string_view source, const CanonicalOptions& opts) {
    return summarize(parse_document(source).doc, opts);
}

}  // namespace diagsynth
