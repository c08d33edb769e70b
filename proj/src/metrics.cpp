#include "diagsynth/metrics.hpp"

#include <cstdio>
#include <set>
#include <sstream>
#include <tuple>

#include "diagsynth/errors.hpp"
#include "diagsynth/mermaid.hpp"

namespace diagsynth {

namespace {

using EdgeKey = std::tuple<std::string, std::string, std::optional<std::string>>;

// Greedy multiset matching: exact orientation first, then reversed
// orientation against undirected gold edges. Keys are exact, so greedy is
// maximum-cardinality.
std::size_t match_edges(const std::vector<SummaryEdge>& predicted, const std::vector<SummaryEdge>& gold,
                        bool with_label) {
    auto key = [&](const SummaryEdge& e, bool flip) {
        return EdgeKey{flip ? e.dst : e.src, flip ? e.src : e.dst, with_label ? e.label : std::nullopt};
    };
    std::vector<bool> used(gold.size(), false);
    std::vector<bool> done(predicted.size(), false);
    std::size_t matched = 0;
    for (int pass = 0; pass < 2; ++pass) {
        for (std::size_t i = 0; i < predicted.size(); ++i) {
            if (done[i]) continue;
            const auto want = key(predicted[i], false);
            for (std::size_t g = 0; g < gold.size(); ++g) {
                if (used[g] || (pass == 1 && !gold[g].undirected)) continue;
                if (key(gold[g], pass == 1) != want) continue;
                used[g] = done[i] = true;
                ++matched;
                break;
            }
        }
    }
    return matched;
}

std::size_t match_bits(const std::vector<BitField>& predicted, const std::vector<BitField>& gold) {
    std::multiset<BitField> pool(gold.begin(), gold.end());
    std::size_t matched = 0;
    for (const auto& b : predicted) {
        const auto it = pool.find(b);
        if (it == pool.end()) continue;
        pool.erase(it);
        ++matched;
    }
    return matched;
}

Prf score_category(Category c, const StructuralSummary& pred, const StructuralSummary& gold) {
    switch (c) {
        case Category::CBl: {
            std::size_t m = 0;
            for (const auto& b : pred.blocks) m += gold.has_block(b);
            return Prf::from_counts(m, pred.blocks.size(), gold.blocks.size());
        }
        case Category::CEd:
            return Prf::from_counts(match_edges(pred.edges, gold.edges, false), pred.edges.size(), gold.edges.size());
        case Category::CLE:
            return Prf::from_counts(match_edges(pred.edges, gold.edges, true), pred.edges.size(), gold.edges.size());
        case Category::CAM: {
            std::size_t m = 0;
            for (const auto& [cls, members] : pred.attributes) {
                const auto it = gold.attributes.find(cls);
                if (it == gold.attributes.end()) continue;
                for (const auto& sig : members) m += it->second.count(sig);
            }
            return Prf::from_counts(m, pred.member_count(), gold.member_count());
        }
        case Category::CBi:
            return Prf::from_counts(match_bits(pred.bits, gold.bits), pred.bits.size(), gold.bits.size());
    }
    return {};
}

std::string fmt(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.4f", v);
    return buf;
}

nlohmann::json prf_json(const Prf& p) {
    return {{"precision", p.precision}, {"recall", p.recall}, {"f1", p.f1}};
}

}  // namespace

std::string_view to_string(Category category) {
    switch (category) {
        case Category::CBl: return "CBl";
        case Category::CEd: return "CEd";
        case Category::CLE: return "CLE";
        case Category::CAM: return "CAM";
        case Category::CBi: return "CBi";
    }
    return "?";
}

bool is_applicable(Category category, DiagramFamily family) noexcept {
    switch (category) {
        case Category::CBl: return true;
        case Category::CEd: return family != DiagramFamily::Sequence && family != DiagramFamily::Packet;
        case Category::CLE:
            return family != DiagramFamily::C4 && family != DiagramFamily::Class && family != DiagramFamily::Packet;
        case Category::CAM: return family == DiagramFamily::Class;
        case Category::CBi: return family == DiagramFamily::Packet;
    }
    return false;
}

Prf Prf::from_counts(std::size_t matched, std::size_t predicted, std::size_t gold) {
    if (predicted == 0 && gold == 0) return {1.0, 1.0, 1.0};
    Prf p;
    p.precision = predicted ? static_cast<double>(matched) / predicted : 0.0;
    p.recall = gold ? static_cast<double>(matched) / gold : 0.0;
    const double s = p.precision + p.recall;
    p.f1 = s > 0 ? 2 * p.precision * p.recall / s : 0.0;
    return p;
}

const Prf* ScoreReport::find(Category category) const {
    const auto it = scores.find(category);
    return it == scores.end() ? nullptr : &it->second;
}

ScoreReport score_structural(std::string_view predicted, const StructuralSummary& gold, DiagramFamily family,
                             const ScoreOptions& opts) {
    if (gold.family != family) throw ConfigError("gold summary family does not match the declared family");
    ScoreReport r;
    r.family = family;
    const auto verdict = validate_with(predicted, opts.bridge);
    if (!verdict.ok) {
        r.error = verdict.line > 0 ? "line " + std::to_string(verdict.line) + ": " + verdict.reason : verdict.reason;
        return r;
    }
    r.compiled = true;
    const auto detected = detect_family(predicted);
    if (detected != family) {
        r.wrong_family = true;
        for (auto c : kAllCategories)
            if (is_applicable(c, family)) r.scores[c] = Prf{};
        return r;
    }
    const auto pred = parse(predicted, opts.canonical);
    for (auto c : kAllCategories)
        if (is_applicable(c, family)) r.scores[c] = score_category(c, pred, gold);
    return r;
}

ScoreReport missing_report(DiagramFamily family) {
    ScoreReport r;
    r.family = family;
    r.missing = true;
    r.error = "missing prediction";
    return r;
}

TextScores score_text(std::string_view predicted, std::string_view reference) {
    return {bleu(predicted, reference), chrf(predicted, reference), rouge_l(predicted, reference)};
}

const TableRow* CorpusTable::find(std::string_view family) const {
    for (const auto& row : rows)
        if (row.family == family) return &row;
    return nullptr;
}

std::string CorpusTable::to_csv() const {
    std::ostringstream out;
    out << "family,n,CEr,CBl,CEd,CLE,CAM,CBi,BLEU,chrF,ROUGE-L\n";
    for (const auto& row : rows) {
        out << row.family << ',' << row.count << ',' << fmt(row.cer);
        for (auto c : kAllCategories) {
            const auto it = row.means.find(c);
            out << ',' << (it == row.means.end() ? "NA" : fmt(it->second.f1));
        }
        if (row.text) {
            out << ',' << fmt(row.text->bleu) << ',' << fmt(row.text->chrf) << ',' << fmt(row.text->rouge.f1);
        } else {
            out << ",NA,NA,NA";
        }
        out << '\n';
    }
    return out.str();
}

CorpusTable aggregate(const std::vector<ScoreReport>& reports, const std::vector<TextScores>& text) {
    if (!text.empty() && text.size() != reports.size()) throw ConfigError("text scores must pair up with reports");
    auto build = [&](std::string name, auto&& include) {
        TableRow row;
        row.family = std::move(name);
        std::size_t failed = 0;
        std::map<Category, std::pair<Prf, std::size_t>> sums;
        TextScores tsum;
        for (std::size_t i = 0; i < reports.size(); ++i) {
            const auto& r = reports[i];
            if (!include(r)) continue;
            ++row.count;
            failed += !r.compiled;
            for (const auto& [c, p] : r.scores) {
                auto& [acc, n] = sums[c];
                acc.precision += p.precision;
                acc.recall += p.recall;
                acc.f1 += p.f1;
                ++n;
            }
            if (!text.empty()) {
                tsum.bleu += text[i].bleu;
                tsum.chrf += text[i].chrf;
                tsum.rouge.precision += text[i].rouge.precision;
                tsum.rouge.recall += text[i].rouge.recall;
                tsum.rouge.f1 += text[i].rouge.f1;
            }
        }
        if (row.count == 0) return row;
        row.cer = static_cast<double>(failed) / row.count;
        for (const auto& [c, s] : sums) {
            const auto n = static_cast<double>(s.second);
            row.means[c] = {s.first.precision / n, s.first.recall / n, s.first.f1 / n};
        }
        if (!text.empty()) {
            const auto n = static_cast<double>(row.count);
            row.text = TextScores{tsum.bleu / n, tsum.chrf / n,
                                  {tsum.rouge.precision / n, tsum.rouge.recall / n, tsum.rouge.f1 / n}};
        }
        return row;
    };
    CorpusTable table;
    for (auto f : kAllFamilies) {
        auto row = build(std::string(to_string(f)), [f](const ScoreReport& r) { return r.family == f; });
        if (row.count > 0) table.rows.push_back(std::move(row));
    }
    if (!reports.empty()) table.rows.push_back(build("overall", [](const ScoreReport&) { return true; }));
    return table;
}

nlohmann::json to_json(const ScoreReport& report) {
    nlohmann::json scores = nlohmann::json::object();
    for (const auto& [c, p] : report.scores) scores[std::string(to_string(c))] = prf_json(p);
    return {{"family", to_string(report.family)}, {"compiled", report.compiled},   {"missing", report.missing},
            {"wrong_family", report.wrong_family}, {"error", report.error},      {"scores", scores}};
}

nlohmann::json to_json(const TextScores& s) {
    return {{"bleu", s.bleu}, {"chrf", s.chrf}, {"rouge_l", prf_json(Prf{s.rouge.precision, s.rouge.recall, s.rouge.f1})}};
}

}  // namespace diagsynth
