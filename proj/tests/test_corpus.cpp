#include <gtest/gtest.h>

#include <cstdlib>
#include <fstream>
#include <sstream>

#include "diagsynth/corpus.hpp"
#include "diagsynth/errors.hpp"
#include "diagsynth/mermaid.hpp"

using namespace diagsynth;
namespace fs = std::filesystem;

namespace {

// Fresh scratch directory per test, removed afterwards.
class Scratch {
public:
    explicit Scratch(const std::string& name) : path_(fs::temp_directory_path() / ("diagsynth_" + name)) {
        fs::remove_all(path_);
        fs::create_directories(path_);
    }
    ~Scratch() {
        std::error_code ec;
        fs::remove_all(path_, ec);
    }
    const fs::path& path() const { return path_; }
    fs::path operator/(const std::string& p) const { return path_ / p; }

private:
    fs::path path_;
};

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void spit(const fs::path& p, const std::string& text) {
    fs::create_directories(p.parent_path());
    std::ofstream(p, std::ios::binary) << text;
}

Recipe one_cell(DiagramFamily f, Level l, int n, std::uint64_t seed = 1) {
    Recipe r;
    r.seed = seed;
    r.counts[{f, l}] = n;
    return r;
}

}  // namespace

TEST(Corpus, StatsOfHandWrittenCode) {
    const auto s = compute_stats("graph LR\n    A -->|\"go\"| B\n    B --> C\n");
    EXPECT_EQ(s.blocks, 3);
    EXPECT_EQ(s.edges, 2);
    EXPECT_EQ(s.labeled_edges, 1);
    EXPECT_EQ(s.attrs, 0);
    EXPECT_EQ(s.code_length, 9 + 18 + 12);
    const auto p = compute_stats("packet-beta\n    0-7: \"a\"\n    8-15: \"b\"\n");
    EXPECT_EQ(p.headers, 2);
    EXPECT_EQ(p.blocks, 0);
}

TEST(Corpus, DeskRecipeIsPublishedCountsOverTen) {
    const auto r = default_desk_recipe();
    EXPECT_EQ((r.counts.at({DiagramFamily::Block, Level::Easy})), 440);
    EXPECT_EQ((r.counts.at({DiagramFamily::Graph, Level::Easy})), 370);    // 3695 / 10, half rounds up
    EXPECT_EQ((r.counts.at({DiagramFamily::Graph, Level::Medium})), 500);  // 5001
    EXPECT_EQ((r.counts.at({DiagramFamily::Packet, Level::Medium})), 298);
    EXPECT_EQ((r.counts.at({DiagramFamily::Sequence, Level::Hard})), 179);
    // Easy 3284 + Medium 2198 + Hard 2002
    EXPECT_EQ(r.total(), 7484);
}

TEST(Corpus, EvalRecipeSplitsAcrossLevels) {
    const auto r = eval_recipe(500);
    EXPECT_EQ(r.total(), 4000);
    EXPECT_EQ((r.counts.at({DiagramFamily::State, Level::Easy})), 167);
    EXPECT_EQ((r.counts.at({DiagramFamily::State, Level::Medium})), 167);
    EXPECT_EQ((r.counts.at({DiagramFamily::State, Level::Hard})), 166);
    EXPECT_THROW(eval_recipe(-1), ConfigError);
}

TEST(Corpus, RecipeJson) {
    const auto r = recipe_from_json(nlohmann::json::parse(
        R"({"seed": 7, "counts": {"Graph.Easy": 5, "class.hard": 2}, "profiles": {"Graph.Easy": {"label_probability": 1.0}}})"));
    EXPECT_EQ(r.seed, 7u);
    EXPECT_EQ(r.total(), 7);
    EXPECT_EQ(recipe_from_json(to_json(r)).counts, r.counts);
    EXPECT_THROW(recipe_from_json(nlohmann::json::parse(R"({"counts": {"Graph.Easy": -1}})")), ConfigError);
    EXPECT_THROW(recipe_from_json(nlohmann::json::parse(R"({"counts": {"Graph": 1}})")), ConfigError);
    EXPECT_THROW(recipe_from_json(nlohmann::json::parse(R"({"count": {}})")), ConfigError);
    EXPECT_THROW(recipe_from_json(nlohmann::json::parse(R"({"profiles": {"Graph.Easy": {"edge_range": [5, 1]}}})")),
                 ConfigError);
}

TEST(Corpus, RowIds) {
    EXPECT_EQ(row_id(DiagramFamily::Flowchart, Level::Medium, 42), "flowchart-medium-000042");
}

TEST(Corpus, GenCorpusCountContractAndReadback) {
    Scratch dir("gen_count");
    const auto m = gen_corpus(one_cell(DiagramFamily::Graph, Level::Easy, 5), default_context(), dir.path());
    ASSERT_EQ(m.rows.size(), 5u);
    for (const auto& r : m.rows) {
        EXPECT_EQ(r.family, DiagramFamily::Graph);
        EXPECT_EQ(r.level, Level::Easy);
        EXPECT_TRUE(fs::exists(dir.path() / r.code_path));
        EXPECT_TRUE(fs::exists(dir.path() / r.description_path));
        EXPECT_TRUE(validate(slurp(dir.path() / r.code_path)).ok);
    }
    const auto back = read_manifest(dir / "manifest.d1.jsonl");
    ASSERT_EQ(back.rows.size(), 5u);
    EXPECT_EQ(back.rows[3].id, m.rows[3].id);
    EXPECT_EQ(back.rows[3].seed, m.rows[3].seed);
    EXPECT_EQ(back.rows[3].stats, m.rows[3].stats);
    EXPECT_EQ(back.recipe.counts, m.recipe.counts);
    const auto stats = corpus_stats(back, dir.path());
    EXPECT_TRUE(stats.invalid.empty());
    EXPECT_TRUE(stats.inconsistent.empty());
}

TEST(Corpus, GenCorpusIsByteReproducibleAcrossThreadCounts) {
    Scratch a("gen_det_a"), b("gen_det_b");
    Recipe r;
    r.seed = 99;
    for (auto f : kAllFamilies) r.counts[{f, Level::Medium}] = 12;
    auto ctx = default_context();
    ctx.threads = 1;
    const auto ma = gen_corpus(r, ctx, a.path());
    ctx.threads = 4;
    gen_corpus(r, ctx, b.path());
    EXPECT_EQ(slurp(a / "manifest.d1.jsonl"), slurp(b / "manifest.d1.jsonl"));
    for (const auto& row : ma.rows) {
        ASSERT_EQ(slurp(a.path() / row.code_path), slurp(b.path() / row.code_path));
        ASSERT_EQ(slurp(a.path() / row.description_path), slurp(b.path() / row.description_path));
    }
}

TEST(Corpus, CellSeedsAreIndependentOfOtherCells) {
    Scratch a("gen_cells_a"), b("gen_cells_b");
    Recipe small = one_cell(DiagramFamily::State, Level::Hard, 3, 5);
    Recipe big = small;
    big.counts[{DiagramFamily::Block, Level::Easy}] = 20;
    gen_corpus(small, default_context(), a.path());
    gen_corpus(big, default_context(), b.path());
    EXPECT_EQ(slurp(a / "code/state-hard-000002.mmd"), slurp(b / "code/state-hard-000002.mmd"));
}

TEST(Corpus, ManifestRejectsDuplicatesAndMissingHeader) {
    Scratch dir("manifest_bad");
    spit(dir / "m.jsonl", "{\"v\":1,\"type\":\"row\"}\n");
    EXPECT_THROW(read_manifest(dir / "m.jsonl"), ConfigError);
    const std::string header = "{\"v\":1,\"type\":\"header\",\"recipe\":{}}\n";
    const std::string row =
        "{\"id\":\"x\",\"family\":\"Graph\",\"level\":\"Easy\",\"code_path\":\"code/x.mmd\"}\n";
    spit(dir / "d.jsonl", header + row + row);
    EXPECT_THROW(read_manifest(dir / "d.jsonl"), ConfigError);
    spit(dir / "v.jsonl", "{\"v\":2,\"type\":\"header\"}\n");
    EXPECT_THROW(read_manifest(dir / "v.jsonl"), ConfigError);
    EXPECT_THROW(read_manifest(dir / "absent.jsonl"), IoError);
}

TEST(Corpus, EnhanceSkipsPacketOnly) {
    Scratch dir("enh_packet");
    const auto m = gen_corpus(one_cell(DiagramFamily::Packet, Level::Medium, 6), default_context(), dir.path());
    EnhanceLog log;
    const auto d2 = gen_enhance(m, dir.path(), dir.path(), EnhanceOptions{}, &log);
    EXPECT_TRUE(d2.rows.empty());
    EXPECT_EQ(log.skipped.size(), 6u);
    EXPECT_TRUE(read_d2_manifest(dir / "manifest.d2.jsonl").rows.empty());
}

TEST(Corpus, EnhanceGraphRowsAreReinsertionClosed) {
    Scratch dir("enh_graph");
    // Graph Medium has at least 3 edges, so every row is eligible.
    const auto m = gen_corpus(one_cell(DiagramFamily::Graph, Level::Medium, 100), default_context(), dir.path());
    EnhanceLog log;
    const auto d2 = gen_enhance(m, dir.path(), dir.path(), EnhanceOptions{}, &log);
    ASSERT_EQ(d2.rows.size(), 100u);
    EXPECT_TRUE(log.skipped.empty());
    const auto back = read_d2_manifest(dir / "manifest.d2.jsonl");
    ASSERT_EQ(back.rows.size(), 100u);
    for (std::size_t i = 0; i < back.rows.size(); ++i) {
        const auto& r = back.rows[i];
        EXPECT_EQ(r.base_id, m.rows[i].id);
        EXPECT_FALSE(r.prompt.empty());
        const auto reduced = slurp(dir.path() / r.reduced_code_path);
        ASSERT_TRUE(validate(reduced).ok) << reduced;
        EXPECT_EQ(reinsert(parse(reduced), r.removed), parse(slurp(dir.path() / m.rows[i].code_path)));
    }
    Scratch again("enh_graph_again");
    gen_enhance(m, dir.path(), again.path(), EnhanceOptions{});
    EXPECT_EQ(slurp(dir / "manifest.d2.jsonl"), slurp(again / "manifest.d2.jsonl"));
}

TEST(Corpus, EnhanceCapsAndExternalVerbalizer) {
    Scratch dir("enh_caps");
    const auto m = gen_corpus(one_cell(DiagramFamily::Flowchart, Level::Medium, 4), default_context(), dir.path());
    EnhanceLog log;
    EXPECT_TRUE(gen_enhance(m, dir.path(), dir.path(), EnhanceOptions::desk_defaults(), &log).rows.empty());
    EXPECT_EQ(log.skipped.front().second, "family cap reached");

    EnhanceOptions opts;
    opts.verbalizer_command = "cat > /dev/null; echo 'Please add the missing step.'";
    const auto d2 = gen_enhance(m, dir.path(), dir.path(), opts);
    ASSERT_EQ(d2.rows.size(), 4u);
    EXPECT_EQ(d2.rows[0].prompt, "Please add the missing step.");
    opts.verbalizer_command = "false";
    EnhanceLog failed;
    EXPECT_TRUE(gen_enhance(m, dir.path(), dir.path(), opts, &failed).rows.empty());
    EXPECT_EQ(failed.skipped.size(), 4u);
}

TEST(Corpus, BuildTasksWritesOneLinePerInstance) {
    Scratch dir("tasks");
    Recipe r;
    r.seed = 3;
    for (auto f : kAllFamilies) r.counts[{f, Level::Hard}] = 6;
    const auto m = gen_corpus(r, default_context(), dir.path());
    const auto d2 = gen_enhance(m, dir.path(), dir.path(), EnhanceOptions{});
    const auto pool = load_task_pool(m, dir.path(), &d2, dir.path());
    TaskOptions opts;
    opts.codeless = true;
    build_tasks(pool, 9, 17, dir / "out.tasks.jsonl", opts);
    std::ifstream in(dir / "out.tasks.jsonl");
    int lines = 0;
    for (std::string line; std::getline(in, line); ++lines) {
        const auto j = nlohmann::json::parse(line);
        EXPECT_EQ(j["v"], 1);
    }
    EXPECT_EQ(lines, 9);
    const auto first = slurp(dir / "out.tasks.jsonl");
    build_tasks(pool, 9, 17, dir / "out.tasks.jsonl", opts);
    EXPECT_EQ(slurp(dir / "out.tasks.jsonl"), first);

    const auto no_d2 = load_task_pool(m, dir.path(), nullptr, {});
    const auto report = build_tasks(no_d2, 20, 1, dir / "reduced.tasks.jsonl", opts);
    EXPECT_FALSE(report.warnings.empty());
    EXPECT_EQ(report.counts.size(), 4u);
}

TEST(Corpus, AugmentFileZeroProbabilityIsIdentityAndCountsPasses) {
    Scratch dir("augfile");
    RasterImage img(30, 20, Rgb{10, 200, 40});
    img.at(5, 5)[0] = 255;
    write_png(img, dir / "diagram.png");
    const auto same = augment_file(dir / "diagram.png", dir / "out", 1, AugmentConfig::disabled(), 0);
    ASSERT_EQ(same.size(), 1u);
    EXPECT_EQ(read_png(same[0]), img);
    const auto three = augment_file(dir / "diagram.png", dir / "three", 3, AugmentConfig{}, 8);
    EXPECT_EQ(three.size(), 3u);
    for (const auto& p : three) EXPECT_TRUE(fs::exists(p));
    EXPECT_EQ(std::distance(fs::directory_iterator(dir / "three"), fs::directory_iterator{}), 3);
}

TEST(Corpus, RenderWithFakeCompilerAndAugment) {
    Scratch dir("render");
    auto m = gen_corpus(one_cell(DiagramFamily::Sequence, Level::Easy, 4), default_context(), dir.path());
    write_png(RasterImage(24, 16, Rgb{250, 250, 250}), dir / "stub.png");
    // mmdc-compatible argv: -i <in> -o <out> -s <scale>
    spit(dir / "fake_mmdc.sh", "#!/bin/sh\ncase \"$2\" in *000002*) exit 1;; esac\ncp '" +
                                   (dir / "stub.png").string() + "' \"$4\"\n");
    fs::permissions(dir / "fake_mmdc.sh", fs::perms::owner_all);
    const CompilerBridge bridge(dir / "fake_mmdc.sh");
    RenderOptions opts;
    opts.bridge = &bridge;
    opts.passes = 2;
    opts.seed = 4;
    const auto log = render_and_augment(m, dir.path(), opts);
    EXPECT_EQ(log.rendered, 3);
    EXPECT_EQ(log.render_failed, 1);
    EXPECT_EQ(log.augmented, 6);
    const auto back = read_manifest(dir / "manifest.d1.jsonl");
    EXPECT_TRUE(back.rows[2].render_failed);
    EXPECT_FALSE(back.rows[2].image_path);
    ASSERT_TRUE(back.rows[0].image_path);
    EXPECT_EQ(back.rows[0].augmented_paths.size(), 2u);
    for (const auto& p : back.rows[1].augmented_paths) EXPECT_TRUE(fs::exists(dir.path() / p));
}

TEST(Corpus, ScorePredictionsIdentityGarbageAndMissing) {
    Scratch gold("score_gold"), pred("score_pred"), out("score_out");
    Recipe r;
    r.seed = 12;
    for (auto f : kAllFamilies) r.counts[{f, Level::Medium}] = 5;
    const auto m = gen_corpus(r, default_context(), gold.path());
    for (const auto& row : m.rows) fs::copy_file(gold.path() / row.code_path, pred / (row.id + ".mmd"));

    const auto perfect = score_predictions(pred.path(), m, gold.path(), out.path());
    const auto* overall = perfect.table.find("overall");
    ASSERT_NE(overall, nullptr);
    EXPECT_EQ(overall->cer, 0.0);
    for (const auto& [c, p] : overall->means) EXPECT_EQ(p.f1, 1.0) << to_string(c);
    EXPECT_DOUBLE_EQ(overall->text->bleu, 1.0);
    EXPECT_TRUE(fs::exists(out / "scores.csv"));
    EXPECT_TRUE(fs::exists(out / (m.rows[0].id + ".scores.json")));

    // 4 of 40 replaced by garbage -> CEr exactly 0.10.
    for (int i : {0, 9, 18, 27}) spit(pred / (m.rows[i].id + ".mmd"), "this is not mermaid\n");
    const auto garbled = score_predictions(pred.path(), m, gold.path(), {});
    EXPECT_DOUBLE_EQ(garbled.table.find("overall")->cer, 0.10);

    fs::remove(pred / (m.rows[5].id + ".mmd"));
    const auto missing = score_predictions(pred.path(), m, gold.path(), {});
    EXPECT_TRUE(missing.reports[5].missing);
    EXPECT_FALSE(missing.reports[5].compiled);
    EXPECT_DOUBLE_EQ(missing.table.find("overall")->cer, 0.125);
}

TEST(Corpus, StatsFlagTamperedRows) {
    Scratch dir("stats_tamper");
    auto m = gen_corpus(one_cell(DiagramFamily::Class, Level::Easy, 3), default_context(), dir.path());
    m.rows[1].stats.edges += 1;
    spit(dir.path() / m.rows[2].code_path, "classDiagram\n    class A {\n");
    const auto s = corpus_stats(m, dir.path());
    EXPECT_EQ(s.inconsistent.size(), 2u);
    ASSERT_EQ(s.invalid.size(), 1u);
    EXPECT_EQ(s.invalid[0], m.rows[2].id);
    EXPECT_EQ((s.cells.at({DiagramFamily::Class, Level::Easy}).count), 3);
}

// ---- command line ----

namespace {

int run_cli(const std::string& args) {
    const std::string cmd = std::string(DIAGSYNTH_CLI) + " " + args + " > /dev/null 2>&1";
    const int status = std::system(cmd.c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

}  // namespace

TEST(Cli, ExitCodes) {
    Scratch dir("cli_codes");
    const auto d = dir.path().string();
    EXPECT_EQ(run_cli("gen-corpus --out " + d + " --count Graph.Easy=4 --seed 2"), 0);
    EXPECT_EQ(read_manifest(dir / "manifest.d1.jsonl").rows.size(), 4u);
    EXPECT_EQ(run_cli("stats --d1 " + d), 0);
    EXPECT_EQ(run_cli("validate " + d + "/code/graph-easy-000000.mmd"), 0);
    spit(dir / "broken.mmd", "graph LR\n    A -->\n");
    EXPECT_EQ(run_cli("validate " + d + "/broken.mmd"), 2);
    EXPECT_EQ(run_cli("gen-corpus --out " + d + " --count Nope.Easy=1"), 3);
    EXPECT_EQ(run_cli("gen-enhance"), 3);
    EXPECT_EQ(run_cli("--no-such-flag"), 3);
    spit(dir / "bad_aug.json", R"({"blur": {"gate": 2}})");
    write_png(RasterImage(8, 8), dir / "tiny.png");
    EXPECT_EQ(run_cli("augment " + d + "/tiny.png --config " + d + "/bad_aug.json"), 3);
    EXPECT_EQ(run_cli("augment " + d + "/tiny.png --passes 2 --out " + d + "/aug"), 0);
    EXPECT_TRUE(fs::exists(dir / "aug/tiny.aug1.png"));
}

TEST(Cli, SettingsFileFillsUnsetFlags) {
    Scratch dir("cli_settings");
    const auto d = dir.path().string();
    spit(dir / "settings.json",
         R"({"gen-corpus": {"count": ["State.Easy=3", "Packet.Hard=2"], "seed": 11, "out": ")" + d + R"(/a"}})");
    EXPECT_EQ(run_cli("--config " + d + "/settings.json gen-corpus"), 0);
    EXPECT_EQ(read_manifest(dir / "a/manifest.d1.jsonl").rows.size(), 5u);
    EXPECT_EQ(read_manifest(dir / "a/manifest.d1.jsonl").recipe.seed, 11u);
    // The command line wins over the settings file.
    EXPECT_EQ(run_cli("--config " + d + "/settings.json gen-corpus --seed 12 --out " + d + "/b"), 0);
    EXPECT_EQ(read_manifest(dir / "b/manifest.d1.jsonl").recipe.seed, 12u);
    spit(dir / "typo.json", R"({"gen-corpus": {"sed": 1}})");
    EXPECT_EQ(run_cli("--config " + d + "/typo.json gen-corpus --out " + d + "/c"), 3);
}

TEST(Cli, EndToEndPipeline) {
    Scratch dir("cli_e2e");
    const auto d = dir.path().string();
    ASSERT_EQ(run_cli("gen-eval --per-family 6 --out " + d + "/eval --seed 1"), 0);
    EXPECT_EQ(read_manifest(dir / "eval/manifest.d1.jsonl").rows.size(), 48u);
    ASSERT_EQ(run_cli("gen-enhance --d1 " + d + "/eval --uncapped"), 0);
    ASSERT_EQ(run_cli("build-tasks --d1 " + d + "/eval --d2 " + d + "/eval --n 30 --codeless --out " + d + "/t.tasks.jsonl"), 0);
    ASSERT_EQ(run_cli("score --pred " + d + "/eval/code --d1 " + d + "/eval --out " + d + "/scores"), 0);
    const auto csv = slurp(dir / "scores/scores.csv");
    EXPECT_NE(csv.find("overall,48,0.0000,1.0000,1.0000,1.0000,1.0000,1.0000,1.0000,100.0000,1.0000"), std::string::npos)
        << csv;
    EXPECT_EQ(run_cli("render --d1 " + d + "/eval --augment-only --passes 1"), 0);
}
