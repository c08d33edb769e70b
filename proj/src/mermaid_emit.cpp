#include "diagsynth/mermaid.hpp"

#include <sstream>

#include "diagsynth/errors.hpp"

namespace diagsynth {

namespace {

constexpr std::string_view kIndent = "    ";

std::string_view header_for(DiagramFamily family) {
    switch (family) {
        case DiagramFamily::Block: return "block-beta";
        case DiagramFamily::C4: return "C4Context";
        case DiagramFamily::Class: return "classDiagram";
        case DiagramFamily::Flowchart: return "flowchart TD";
        case DiagramFamily::Graph: return "graph LR";
        case DiagramFamily::Packet: return "packet-beta";
        case DiagramFamily::Sequence: return "sequenceDiagram";
        case DiagramFamily::State: return "stateDiagram-v2";
    }
    return "graph LR";
}

std::string in_quotes(std::string_view s) { return "\"" + std::string(s) + "\""; }

// Flowchart, graph and block node shapes.
std::string shaped(const NodeDecl& n) {
    const std::string q = in_quotes(n.display_name());
    switch (n.kind) {
        case ComponentKind::Round: return n.id + "(" + q + ")";
        case ComponentKind::Circle: return n.id + "((" + q + "))";
        case ComponentKind::Stadium: return n.id + "([" + q + "])";
        case ComponentKind::Subroutine: return n.id + "[[" + q + "]]";
        case ComponentKind::Decision: return n.id + "{" + q + "}";
        default: return n.id + "[" + q + "]";
    }
}

std::string_view flow_arrow(ArrowKind a) {
    switch (a) {
        case ArrowKind::Open: return "---";
        case ArrowKind::Dotted: return "-.->";
        case ArrowKind::Thick: return "==>";
        default: return "-->";
    }
}

std::string_view class_arrow(ArrowKind a) {
    switch (a) {
        case ArrowKind::Inheritance: return "<|--";
        case ArrowKind::Composition: return "*--";
        case ArrowKind::Aggregation: return "o--";
        case ArrowKind::Dependency: return "..>";
        case ArrowKind::Realization: return "..|>";
        case ArrowKind::Link: return "--";
        default: return "-->";
    }
}

std::string_view sequence_arrow(ArrowKind a) {
    switch (a) {
        case ArrowKind::Reply: return "-->>";
        case ArrowKind::Async: return "-)";
        case ArrowKind::Lost: return "-x";
        default: return "->>";
    }
}

std::string_view c4_macro(ComponentKind k) {
    switch (k) {
        case ComponentKind::Person: return "Person";
        case ComponentKind::SystemDb: return "SystemDb";
        case ComponentKind::SystemExt: return "System_Ext";
        default: return "System";
    }
}

std::string member_text(const Member& m) {
    std::string out;
    if (m.visibility) out.push_back(m.visibility);
    out += m.name;
    if (m.is_method) out += "()";
    return out;
}

void render_node(std::ostream& os, DiagramFamily family, const NodeDecl& n) {
    switch (family) {
        case DiagramFamily::Block:
        case DiagramFamily::Flowchart:
        case DiagramFamily::Graph:
            os << kIndent << shaped(n) << '\n';
            break;
        case DiagramFamily::C4:
            os << kIndent << c4_macro(n.kind) << '(' << n.id << ", " << in_quotes(n.display_name()) << ")\n";
            break;
        case DiagramFamily::Class:
            os << kIndent << "class " << n.id;
            if (n.name) os << '[' << in_quotes(*n.name) << ']';
            if (n.members.empty()) {
                os << '\n';
                break;
            }
            os << " {\n";
            for (const auto& m : n.members) os << kIndent << kIndent << member_text(m) << '\n';
            os << kIndent << "}\n";
            break;
        case DiagramFamily::Sequence:
            os << kIndent << (n.kind == ComponentKind::Actor ? "actor " : "participant ") << n.id;
            if (n.name) os << " as " << *n.name;
            os << '\n';
            break;
        case DiagramFamily::State:
            os << kIndent << "state ";
            if (n.name) os << in_quotes(*n.name) << " as ";
            os << n.id << '\n';
            break;
        case DiagramFamily::Packet:
            break;
    }
}

void render_edge(std::ostream& os, DiagramFamily family, const EdgeStmt& e) {
    os << kIndent;
    switch (family) {
        case DiagramFamily::Block:
            if (e.label) os << e.src << " -- " << in_quotes(*e.label) << " --> " << e.dst;
            else os << e.src << " --> " << e.dst;
            break;
        case DiagramFamily::Flowchart:
        case DiagramFamily::Graph:
            os << e.src << ' ' << flow_arrow(e.arrow);
            if (e.label) os << '|' << in_quotes(*e.label) << '|';
            os << ' ' << e.dst;
            break;
        case DiagramFamily::C4:
            os << (e.arrow == ArrowKind::BiRelation ? "BiRel(" : "Rel(") << e.src << ", " << e.dst << ", "
               << in_quotes(e.label.value_or("")) << ')';
            break;
        case DiagramFamily::Class:
            os << e.src << ' ' << class_arrow(e.arrow) << ' ' << e.dst;
            if (e.label) os << " : " << *e.label;
            break;
        case DiagramFamily::Sequence:
            os << e.src << sequence_arrow(e.arrow) << e.dst << ':';
            if (e.label) os << ' ' << *e.label;
            break;
        case DiagramFamily::State:
            os << e.src << " --> " << e.dst;
            if (e.label) os << " : " << *e.label;
            break;
        case DiagramFamily::Packet:
            break;
    }
    os << '\n';
}

}  // namespace

std::size_t MermaidDoc::edge_count() const noexcept {
    std::size_t n = 0;
    for (const auto& s : statements) n += std::holds_alternative<EdgeStmt>(s) ? 1 : 0;
    return n;
}

std::string MermaidDoc::to_source() const {
    std::ostringstream os;
    os << header << '\n';
    for (const auto& d : directives) os << kIndent << d << '\n';
    bool previous_was_block = false;
    for (const auto& s : statements) {
        if (const auto* n = std::get_if<NodeDecl>(&s)) {
            // block-beta lays blocks out on a grid; a spacer keeps neighbours apart
            if (family == DiagramFamily::Block && previous_was_block) os << kIndent << "space\n";
            render_node(os, family, *n);
            previous_was_block = true;
            continue;
        }
        previous_was_block = false;
        if (const auto* e = std::get_if<EdgeStmt>(&s)) {
            render_edge(os, family, *e);
        } else if (const auto* f = std::get_if<FieldStmt>(&s)) {
            os << kIndent << f->start;
            if (f->end != f->start) os << '-' << f->end;
            os << ": " << in_quotes(f->name) << '\n';
        }
    }
    return os.str();
}

MermaidDoc build_doc(const DiagramSpec& spec) {
    MermaidDoc doc;
    doc.family = spec.family;
    doc.header = std::string(header_for(spec.family));
    if (spec.family == DiagramFamily::Packet) {
        const auto layout = packet_layout(spec);
        for (std::size_t i = 0; i < spec.components.size(); ++i) {
            doc.statements.emplace_back(FieldStmt{layout[i].first, layout[i].second, spec.components[i].name});
        }
        return doc;
    }
    if (spec.family == DiagramFamily::Block) {
        // blocks and spacers share a single row
        doc.directives.push_back("columns " + std::to_string(2 * spec.components.size() - 1));
    }
    for (const auto& c : spec.components) {
        NodeDecl n;
        n.id = c.id;
        n.name = c.name;
        n.kind = c.kind;
        n.members = c.members;
        doc.statements.emplace_back(std::move(n));
    }
    for (const auto& e : spec.edges) {
        doc.statements.emplace_back(EdgeStmt{e.src, e.dst, e.label, e.arrow});
    }
    return doc;
}

std::string emit(const DiagramSpec& spec) { return build_doc(spec).to_source(); }

}  // namespace diagsynth
