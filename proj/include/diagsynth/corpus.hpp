#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "diagsynth/augment.hpp"
#include "diagsynth/compiler_bridge.hpp"
#include "diagsynth/describe.hpp"
#include "diagsynth/enhance.hpp"
#include "diagsynth/genspec.hpp"
#include "diagsynth/keywords.hpp"
#include "diagsynth/metrics.hpp"
#include "diagsynth/tasks.hpp"

namespace diagsynth {

inline constexpr int kManifestVersion = 1;

struct RowStats {
    int blocks = 0;
    int edges = 0;
    int labeled_edges = 0;
    int attrs = 0;
    int headers = 0;
    int code_length = 0;

    bool operator==(const RowStats&) const = default;
};

RowStats compute_stats(std::string_view code);

struct Recipe {
    std::map<std::pair<DiagramFamily, Level>, int> counts;
    std::uint64_t seed = 0;
    nlohmann::json profile_overrides = nlohmann::json::object();

    int total() const;
};

// Corpus counts of the published distribution divided by 10, rounded.
Recipe default_desk_recipe(std::uint64_t seed = 0);
// per_family rows per family, split across levels as evenly as possible
// (remainder to Easy first).
Recipe eval_recipe(int per_family, std::uint64_t seed = 0);
// {"seed": 7, "counts": {"Graph.Easy": 5, ...}, "profiles": {...}}
Recipe recipe_from_json(const nlohmann::json& j);
nlohmann::json to_json(const Recipe& recipe);

struct ManifestRow {
    std::string id;
    DiagramFamily family = DiagramFamily::Graph;
    Level level = Level::Easy;
    std::string discipline;
    std::uint64_t seed = 0;
    std::string code_path;  // relative to the manifest directory
    std::string description_path;
    std::optional<std::string> image_path;
    std::vector<std::string> augmented_paths;
    bool render_failed = false;
    RowStats stats;
};

struct CorpusManifest {
    int version = kManifestVersion;
    Recipe recipe;
    std::vector<ManifestRow> rows;
};

// JSONL: a header object {"v":1,"type":"header","recipe":{...}} then one
// object per row.
void write_manifest(const CorpusManifest& manifest, const std::filesystem::path& path);
CorpusManifest read_manifest(const std::filesystem::path& path);

struct D2Row {
    std::string id;
    std::string base_id;
    DiagramFamily family = DiagramFamily::Graph;
    std::string reduced_code_path;
    std::optional<std::string> reduced_image_path;
    std::string prompt;
    std::vector<Triplet> removed;
};

struct D2Manifest {
    int version = kManifestVersion;
    std::uint64_t seed = 0;
    std::vector<D2Row> rows;
};

void write_d2_manifest(const D2Manifest& manifest, const std::filesystem::path& path);
D2Manifest read_d2_manifest(const std::filesystem::path& path);

struct GenerationContext {
    const KeywordBank* bank = nullptr;
    const DescriptionTemplateSet* templates = nullptr;
    ProfileTable profiles;
    // Worker threads for row generation; 0 uses the OpenMP default.
    int threads = 0;
};

GenerationContext default_context();

// Row id: "<family>-<level>-<index>", lowercase, 6-digit index.
std::string row_id(DiagramFamily family, Level level, int index);

// Writes code/<id>.mmd, desc/<id>.txt and manifest.d1.jsonl under out_dir.
// Rows are generated in parallel; every byte depends only on the recipe,
// bank, templates and profiles. Throws CapacityError / IoError; on I/O
// failure the partial manifest is removed.
CorpusManifest gen_corpus(const Recipe& recipe, const GenerationContext& ctx,
                          const std::filesystem::path& out_dir);

struct EnhanceOptions {
    std::uint64_t seed = 0;
    int removals = 1;
    // Per-family cap on derived rows; absent families are uncapped.
    std::map<DiagramFamily, int> caps;
    const EnhanceTemplateSet* templates = nullptr;
    // Optional external verbalizer: reads triplet JSON on stdin, prints prompt.
    std::string verbalizer_command;

    static EnhanceOptions desk_defaults(std::uint64_t seed = 0);  // Flowchart capped at 0
};

struct EnhanceLog {
    std::vector<std::pair<std::string, std::string>> skipped;  // (row id, reason)
};

// Reads code files relative to d1_dir; writes reduced/<id>.mmd and
// manifest.d2.jsonl under out_dir.
D2Manifest gen_enhance(const CorpusManifest& d1, const std::filesystem::path& d1_dir,
                       const std::filesystem::path& out_dir, const EnhanceOptions& opts,
                       EnhanceLog* log = nullptr);

// Loads manifests into a task pool (code/description read from disk).
TaskPool load_task_pool(const CorpusManifest& d1, const std::filesystem::path& d1_dir,
                        const D2Manifest* d2, const std::filesystem::path& d2_dir);

MixReport build_tasks(const TaskPool& pool, std::size_t n, std::uint64_t seed,
                      const std::filesystem::path& out, const TaskOptions& opts = {});

struct RenderOptions {
    const CompilerBridge* bridge = nullptr;  // render step skipped when null
    double scale = 1.0;
    int passes = 0;  // augmented variants per image
    AugmentConfig augment;
    std::uint64_t seed = 0;
};

struct RenderLog {
    int rendered = 0;
    int render_failed = 0;
    int augmented = 0;
};

// Renders images/<id>.png per row (when a bridge is given) and writes
// images/<id>.aug<k>.png variants for every row that has an image.
RenderLog render_and_augment(CorpusManifest& manifest, const std::filesystem::path& dir,
                             const RenderOptions& opts);

// Augments one PNG into out_dir/<stem>.aug<k>.png; returns written paths.
std::vector<std::filesystem::path> augment_file(const std::filesystem::path& input,
                                                const std::filesystem::path& out_dir, int passes,
                                                const AugmentConfig& cfg, std::uint64_t seed);

struct ScoreRunOptions {
    ScoreOptions structural;
    bool text_metrics = true;
};

struct ScoreRun {
    std::vector<std::string> ids;
    std::vector<ScoreReport> reports;
    std::vector<TextScores> text;
    CorpusTable table;
};

// Predictions are <pred_dir>/<sample-id>.mmd. Writes <id>.scores.json per row
// and scores.csv into out_dir when it is non-empty.
ScoreRun score_predictions(const std::filesystem::path& pred_dir, const CorpusManifest& manifest,
                           const std::filesystem::path& manifest_dir, const std::filesystem::path& out_dir,
                           const ScoreRunOptions& opts = {});

struct StatsCell {
    int count = 0;
    // (min, mean, std, max) per stat name
    std::map<std::string, std::array<double, 4>> values;
};

struct StatsReport {
    std::map<std::pair<DiagramFamily, Level>, StatsCell> cells;
    std::vector<std::string> inconsistent;  // row ids whose stored stats differ
    std::vector<std::string> invalid;       // row ids whose code fails validation
};

StatsReport corpus_stats(const CorpusManifest& manifest, const std::filesystem::path& dir);

}  // namespace diagsynth
