#pragma once

#include <array>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "diagsynth/compiler_bridge.hpp"
#include "diagsynth/family.hpp"
#include "diagsynth/summary.hpp"
#include "diagsynth/text_metrics.hpp"

namespace diagsynth {

enum class Category { CBl, CEd, CLE, CAM, CBi };

inline constexpr std::array<Category, 5> kAllCategories{Category::CBl, Category::CEd, Category::CLE,
                                                        Category::CAM, Category::CBi};

std::string_view to_string(Category category);
bool is_applicable(Category category, DiagramFamily family) noexcept;

struct Prf {
    double precision = 0.0;
    double recall = 0.0;
    double f1 = 0.0;

    // Both sets empty scores 1; otherwise matched / size, 0 for an empty side.
    static Prf from_counts(std::size_t matched, std::size_t predicted, std::size_t gold);
};

struct ScoreReport {
    DiagramFamily family = DiagramFamily::Graph;
    bool compiled = false;
    bool missing = false;       // no prediction file
    bool wrong_family = false;  // compiled, but another diagram type
    std::string error;          // validator reason when not compiled
    std::map<Category, Prf> scores;  // only applicable categories, only when compiled

    const Prf* find(Category category) const;
};

struct ScoreOptions {
    CanonicalOptions canonical;
    const CompilerBridge* bridge = nullptr;  // external compile check when set
};

// Strict node-edge-node scoring of predicted Mermaid against a gold summary.
// Throws ConfigError when gold.family != family.
ScoreReport score_structural(std::string_view predicted, const StructuralSummary& gold,
                             DiagramFamily family, const ScoreOptions& opts = {});

ScoreReport missing_report(DiagramFamily family);

struct TextScores {
    double bleu = 0.0;
    double chrf = 0.0;
    RougeL rouge;
};

TextScores score_text(std::string_view predicted, std::string_view reference);

struct TableRow {
    std::string family;  // family name or "overall"
    std::size_t count = 0;
    double cer = 0.0;
    std::map<Category, Prf> means;  // over compiled reports carrying the category
    std::optional<TextScores> text;
};

struct CorpusTable {
    std::vector<TableRow> rows;  // families in enum order, then "overall"

    const TableRow* find(std::string_view family) const;
    // family,n,CEr,CBl,CEd,CLE,CAM,CBi,BLEU,chrF,ROUGE-L (F1 means; NA when absent)
    std::string to_csv() const;
};

// text may be empty, or one entry per report.
CorpusTable aggregate(const std::vector<ScoreReport>& reports, const std::vector<TextScores>& text = {});

nlohmann::json to_json(const ScoreReport& report);
nlohmann::json to_json(const TextScores& scores);

}  // namespace diagsynth
