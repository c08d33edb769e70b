// diagsynth: corpus generation, task assembly, augmentation and scoring.
//
// Exit codes: 0 ok, 2 validation failures present, 3 configuration error,
// 1 anything else (I/O, internal).

#include <CLI11.hpp>

#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include "diagsynth/compiler_bridge.hpp"
#include "diagsynth/corpus.hpp"
#include "diagsynth/errors.hpp"
#include "diagsynth/mermaid.hpp"

namespace fs = std::filesystem;
using namespace diagsynth;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitInvalid = 2;
constexpr int kExitConfig = 3;

nlohmann::json load_json(const fs::path& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot read " + path.string());
    try {
        return nlohmann::json::parse(in);
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError(path.string() + ": " + e.what());
    }
}

std::string read_file(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot read " + path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

// Values from the settings file fill options the command line left unset.
void merge_settings(CLI::App& sub, const nlohmann::json& settings) {
    const auto it = settings.find(sub.get_name());
    if (it == settings.end()) return;
    if (!it->is_object()) throw ConfigError("settings for " + sub.get_name() + " must be an object");
    for (const auto& [key, value] : it->items()) {
        auto* opt = sub.get_option_no_throw("--" + key);
        if (!opt) throw ConfigError("unknown setting " + sub.get_name() + "." + key);
        if (opt->count() > 0) continue;
        auto add = [&](const nlohmann::json& v) { opt->add_result(v.is_string() ? v.get<std::string>() : v.dump()); };
        if (value.is_array()) {
            for (const auto& v : value) add(v);
        } else {
            add(value);
        }
        opt->run_callback();
    }
}

void require(const std::string& value, const char* flag) {
    if (value.empty()) throw ConfigError(std::string(flag) + " is required");
}

std::pair<std::string, int> split_assignment(const std::string& text) {
    const auto eq = text.find('=');
    if (eq == std::string::npos) throw ConfigError("expected KEY=N, got " + text);
    try {
        return {text.substr(0, eq), std::stoi(text.substr(eq + 1))};
    } catch (const std::exception&) {
        throw ConfigError("expected an integer in " + text);
    }
}

struct GenArgs {
    std::string out;
    std::string recipe;
    std::string bank;
    std::string templates;
    std::string profiles;
    std::vector<std::string> counts;
    std::uint64_t seed = 0;
    bool seed_given = false;
    int threads = 0;
};

void add_generation_flags(CLI::App* cmd, GenArgs& a) {
    cmd->add_option("--out", a.out, "Output directory");
    cmd->add_option("--seed", a.seed, "Base seed");
    cmd->add_option("--bank", a.bank, "Keyword bank JSON (default: built-in)");
    cmd->add_option("--templates", a.templates, "Description template JSON (default: built-in)");
    cmd->add_option("--profiles", a.profiles, "Profile overrides JSON keyed by Family.Level");
    cmd->add_option("--threads", a.threads, "Worker threads (0 = OpenMP default)");
}

struct LoadedContext {
    std::optional<KeywordBank> bank;
    std::optional<DescriptionTemplateSet> templates;
    GenerationContext ctx = default_context();
};

void load_context(const GenArgs& a, LoadedContext& lc) {
    if (!a.bank.empty()) {
        lc.bank = KeywordBank::load(a.bank);
        lc.ctx.bank = &*lc.bank;
    }
    if (!a.templates.empty()) {
        lc.templates = DescriptionTemplateSet::load(a.templates);
        lc.ctx.templates = &*lc.templates;
    }
    lc.ctx.threads = a.threads;
}

int finish_corpus(const CorpusManifest& m, const fs::path& out) {
    const auto stats = corpus_stats(m, out);
    std::printf("wrote %zu rows to %s\n", m.rows.size(), (out / "manifest.d1.jsonl").c_str());
    if (!stats.invalid.empty()) {
        std::fprintf(stderr, "%zu rows failed validation (first: %s)\n", stats.invalid.size(), stats.invalid[0].c_str());
        return kExitInvalid;
    }
    return kExitOk;
}

int run_gen(const GenArgs& a, Recipe recipe) {
    require(a.out, "--out");
    LoadedContext lc;
    load_context(a, lc);
    if (!a.profiles.empty()) {
        const auto overrides = load_json(a.profiles);
        for (const auto& [key, v] : overrides.items()) recipe.profile_overrides[key] = v;
    }
    const auto m = gen_corpus(recipe, lc.ctx, a.out);
    return finish_corpus(m, a.out);
}

void print_stats(const StatsReport& r) {
    for (const auto& [cell, s] : r.cells) {
        std::printf("%-20s n=%-5d", cell_key(cell.first, cell.second).c_str(), s.count);
        for (const auto& [name, v] : s.values) std::printf("  %s (%g, %.2f ± %.2f, %g)", name.c_str(), v[0], v[1], v[2], v[3]);
        std::printf("\n");
    }
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Synthetic Mermaid diagram corpora: generation, tasks, augmentation, scoring"};
    app.require_subcommand(1);
    std::string settings_path;
    app.add_option("--config", settings_path, "JSON settings keyed by subcommand; command-line flags win");

    // gen-corpus
    GenArgs gen;
    bool desk = false;
    auto* gen_cmd = app.add_subcommand("gen-corpus", "Generate a D1 corpus (code + descriptions + manifest)");
    add_generation_flags(gen_cmd, gen);
    gen_cmd->add_option("--recipe", gen.recipe, "Recipe JSON {seed, counts, profiles}");
    gen_cmd->add_option("--count", gen.counts, "Family.Level=N (repeatable)");
    gen_cmd->add_flag("--desk", desk, "Default desk recipe (published counts / 10)");

    // gen-eval
    GenArgs eval;
    int per_family = 500;
    auto* eval_cmd = app.add_subcommand("gen-eval", "Generate an evaluation set, N rows per family");
    add_generation_flags(eval_cmd, eval);
    eval_cmd->add_option("--per-family", per_family, "Rows per family, split across levels");

    // gen-enhance
    std::string enh_d1, enh_out, enh_templates, enh_verbalizer;
    std::uint64_t enh_seed = 0;
    int removals = 1;
    std::vector<std::string> caps;
    bool uncapped = false;
    auto* enh_cmd = app.add_subcommand("gen-enhance", "Derive the D2 enhancement corpus from a D1 corpus");
    enh_cmd->add_option("--d1", enh_d1, "D1 corpus directory");
    enh_cmd->add_option("--out", enh_out, "Output directory (default: the D1 directory)");
    enh_cmd->add_option("--seed", enh_seed, "Seed");
    enh_cmd->add_option("--removals", removals, "Triplets removed per sample");
    enh_cmd->add_option("--cap", caps, "Family=N cap on derived rows (repeatable)");
    enh_cmd->add_flag("--uncapped", uncapped, "Drop the default Flowchart cap of 0");
    enh_cmd->add_option("--templates", enh_templates, "Enhancement template JSON");
    enh_cmd->add_option("--verbalizer", enh_verbalizer, "External command: triplet JSON on stdin, prompt on stdout");

    // build-tasks
    std::string bt_d1, bt_d2, bt_out;
    std::size_t bt_n = 0;
    std::uint64_t bt_seed = 0;
    bool codeless = false;
    double positive_rate = 0.5;
    auto* bt_cmd = app.add_subcommand("build-tasks", "Sample a uniform task mix into JSONL");
    bt_cmd->add_option("--d1", bt_d1, "D1 corpus directory");
    bt_cmd->add_option("--d2", bt_d2, "D2 corpus directory (optional)");
    bt_cmd->add_option("--n", bt_n, "Number of instances");
    bt_cmd->add_option("--seed", bt_seed, "Seed");
    bt_cmd->add_option("--out", bt_out, "Output .tasks.jsonl");
    bt_cmd->add_flag("--codeless", codeless, "Use code paths as image references");
    bt_cmd->add_option("--positive-rate", positive_rate, "PairQA positive rate");

    // render
    std::string rd_d1, rd_augcfg;
    double scale = 1.0;
    int rd_passes = 0;
    std::uint64_t rd_seed = 0;
    bool augment_only = false;
    auto* rd_cmd = app.add_subcommand("render", "Render every row with MERMAID_CLI, then augment");
    rd_cmd->add_option("--d1", rd_d1, "D1 corpus directory");
    rd_cmd->add_option("--scale", scale, "Renderer scale");
    rd_cmd->add_option("--passes", rd_passes, "Augmented variants per image");
    rd_cmd->add_option("--seed", rd_seed, "Augmentation seed");
    rd_cmd->add_option("--augment-config", rd_augcfg, "Augmentation config JSON");
    rd_cmd->add_flag("--augment-only", augment_only, "Skip rendering; augment existing images");

    // augment
    std::string ag_in, ag_out, ag_cfg;
    int ag_passes = 1;
    std::uint64_t ag_seed = 0;
    auto* ag_cmd = app.add_subcommand("augment", "Augment one PNG");
    ag_cmd->add_option("input", ag_in, "Input PNG");
    ag_cmd->add_option("--out", ag_out, "Output directory (default: next to the input)");
    ag_cmd->add_option("--passes", ag_passes, "Number of variants");
    ag_cmd->add_option("--seed", ag_seed, "Seed");
    ag_cmd->add_option("--config", ag_cfg, "Augmentation config JSON");

    // score
    std::string sc_pred, sc_d1, sc_out;
    bool strict = false, no_text = false, use_compiler = false;
    auto* sc_cmd = app.add_subcommand("score", "Score predicted Mermaid files against a corpus");
    sc_cmd->add_option("--pred", sc_pred, "Directory of <sample-id>.mmd predictions");
    sc_cmd->add_option("--d1", sc_d1, "Gold corpus directory");
    sc_cmd->add_option("--out", sc_out, "Directory for per-sample JSON and scores.csv");
    sc_cmd->add_flag("--strict", strict, "Case-sensitive block and label matching");
    sc_cmd->add_flag("--no-text", no_text, "Skip BLEU / chrF / ROUGE-L");
    sc_cmd->add_flag("--compiler", use_compiler, "Use MERMAID_CLI as the compile check");

    // validate
    std::vector<std::string> va_files;
    bool va_compiler = false;
    auto* va_cmd = app.add_subcommand("validate", "Validate Mermaid files");
    va_cmd->add_option("files", va_files, "Mermaid sources");
    va_cmd->add_flag("--compiler", va_compiler, "Use MERMAID_CLI instead of the built-in validator");

    // stats
    std::string st_d1;
    auto* st_cmd = app.add_subcommand("stats", "Per-cell structural statistics and manifest consistency");
    st_cmd->add_option("--d1", st_d1, "D1 corpus directory");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitConfig;
    }

    try {
        if (!settings_path.empty()) {
            const auto settings = load_json(settings_path);
            if (!settings.is_object()) throw ConfigError("settings file must hold a JSON object");
            for (const auto& [name, v] : settings.items())
                if (!app.get_subcommand_no_throw(name)) throw ConfigError("unknown subcommand in settings: " + name);
            for (auto* sub : app.get_subcommands()) merge_settings(*sub, settings);
        }

        if (gen_cmd->parsed()) {
            Recipe recipe;
            if (!gen.recipe.empty()) {
                recipe = recipe_from_json(load_json(gen.recipe));
            } else if (desk || gen.counts.empty()) {
                recipe = default_desk_recipe();
            }
            for (const auto& c : gen.counts) {
                const auto [key, n] = split_assignment(c);
                if (n < 0) throw ConfigError("negative count for " + key);
                const auto dot = key.find('.');
                if (dot == std::string::npos) throw ConfigError("expected Family.Level=N, got " + c);
                recipe.counts[{parse_family(key.substr(0, dot)), parse_level(key.substr(dot + 1))}] = n;
            }
            if (gen_cmd->count("--seed") || recipe.seed == 0) recipe.seed = gen.seed;
            return run_gen(gen, recipe);
        }
        if (eval_cmd->parsed()) return run_gen(eval, eval_recipe(per_family, eval.seed));

        if (enh_cmd->parsed()) {
            require(enh_d1, "--d1");
            auto opts = uncapped ? EnhanceOptions{} : EnhanceOptions::desk_defaults();
            opts.seed = enh_seed;
            opts.removals = removals;
            if (removals < 1) throw ConfigError("--removals must be >= 1");
            for (const auto& c : caps) {
                const auto [fam, n] = split_assignment(c);
                opts.caps[parse_family(fam)] = n;
            }
            std::optional<EnhanceTemplateSet> templates;
            if (!enh_templates.empty()) {
                templates = EnhanceTemplateSet::load(enh_templates);
                opts.templates = &*templates;
            }
            opts.verbalizer_command = enh_verbalizer;
            const fs::path out = enh_out.empty() ? fs::path(enh_d1) : fs::path(enh_out);
            const auto d1 = read_manifest(fs::path(enh_d1) / "manifest.d1.jsonl");
            EnhanceLog log;
            const auto d2 = gen_enhance(d1, enh_d1, out, opts, &log);
            std::map<std::string, int> reasons;
            for (const auto& [id, why] : log.skipped) ++reasons[why];
            std::printf("derived %zu D2 rows, skipped %zu\n", d2.rows.size(), log.skipped.size());
            for (const auto& [why, n] : reasons) std::printf("  skipped %d: %s\n", n, why.c_str());
            return kExitOk;
        }

        if (bt_cmd->parsed()) {
            require(bt_d1, "--d1");
            require(bt_out, "--out");
            const auto d1 = read_manifest(fs::path(bt_d1) / "manifest.d1.jsonl");
            std::optional<D2Manifest> d2;
            if (!bt_d2.empty()) d2 = read_d2_manifest(fs::path(bt_d2) / "manifest.d2.jsonl");
            const auto pool = load_task_pool(d1, bt_d1, d2 ? &*d2 : nullptr, bt_d2);
            TaskOptions opts;
            opts.codeless = codeless;
            opts.pair_positive_rate = positive_rate;
            const auto report = build_tasks(pool, bt_n, bt_seed, bt_out, opts);
            for (const auto& w : report.warnings) std::fprintf(stderr, "warning: %s\n", w.c_str());
            for (const auto& [kind, n] : report.counts) std::printf("%-26s %zu\n", std::string(to_string(kind)).c_str(), n);
            return kExitOk;
        }

        if (rd_cmd->parsed()) {
            require(rd_d1, "--d1");
            RenderOptions opts;
            std::optional<CompilerBridge> bridge;
            if (!augment_only) {
                bridge = CompilerBridge::from_env();
                if (!bridge) throw ConfigError("MERMAID_CLI is not set (use --augment-only for pre-rendered images)");
                opts.bridge = &*bridge;
            }
            opts.scale = scale;
            opts.passes = rd_passes;
            opts.seed = rd_seed;
            if (!rd_augcfg.empty()) opts.augment = augment_config_from_json(load_json(rd_augcfg));
            auto manifest = read_manifest(fs::path(rd_d1) / "manifest.d1.jsonl");
            const auto log = render_and_augment(manifest, rd_d1, opts);
            std::printf("rendered %d, render failures %d, augmented variants %d\n", log.rendered, log.render_failed,
                        log.augmented);
            return kExitOk;
        }

        if (ag_cmd->parsed()) {
            require(ag_in, "input");
            AugmentConfig cfg;
            if (!ag_cfg.empty()) cfg = augment_config_from_json(load_json(ag_cfg));
            const fs::path out = ag_out.empty() ? fs::path(ag_in).parent_path() : fs::path(ag_out);
            for (const auto& p : augment_file(ag_in, out, ag_passes, cfg, ag_seed)) std::printf("%s\n", p.c_str());
            return kExitOk;
        }

        if (sc_cmd->parsed()) {
            require(sc_pred, "--pred");
            require(sc_d1, "--d1");
            ScoreRunOptions opts;
            opts.structural.canonical.case_sensitive = strict;
            opts.text_metrics = !no_text;
            std::optional<CompilerBridge> bridge;
            if (use_compiler) {
                bridge = CompilerBridge::from_env();
                if (!bridge) throw ConfigError("--compiler needs MERMAID_CLI");
                opts.structural.bridge = &*bridge;
            }
            const auto manifest = read_manifest(fs::path(sc_d1) / "manifest.d1.jsonl");
            const auto run = score_predictions(sc_pred, manifest, sc_d1, sc_out, opts);
            std::fputs(run.table.to_csv().c_str(), stdout);
            return kExitOk;
        }

        if (va_cmd->parsed()) {
            if (va_files.empty()) throw ConfigError("no files given");
            std::optional<CompilerBridge> bridge;
            if (va_compiler) {
                bridge = CompilerBridge::from_env();
                if (!bridge) throw ConfigError("--compiler needs MERMAID_CLI");
            }
            int failed = 0;
            for (const auto& f : va_files) {
                const auto v = validate_with(read_file(f), bridge ? &*bridge : nullptr);
                if (v.ok) {
                    std::printf("%s: ok\n", f.c_str());
                } else {
                    ++failed;
                    std::printf("%s:%d: %s\n", f.c_str(), v.line, v.reason.c_str());
                }
            }
            return failed ? kExitInvalid : kExitOk;
        }

        if (st_cmd->parsed()) {
            require(st_d1, "--d1");
            const auto manifest = read_manifest(fs::path(st_d1) / "manifest.d1.jsonl");
            const auto report = corpus_stats(manifest, st_d1);
            print_stats(report);
            for (const auto& id : report.inconsistent) std::fprintf(stderr, "stats mismatch: %s\n", id.c_str());
            for (const auto& id : report.invalid) std::fprintf(stderr, "invalid code: %s\n", id.c_str());
            return report.inconsistent.empty() && report.invalid.empty() ? kExitOk : kExitInvalid;
        }
    } catch (const ConfigError& e) {
        std::fprintf(stderr, "config error: %s\n", e.what());
        return kExitConfig;
    } catch (const ParameterError& e) {
        std::fprintf(stderr, "config error: %s\n", e.what());
        return kExitConfig;
    } catch (const CLI::ParseError& e) {
        std::fprintf(stderr, "config error: %s\n", e.what());
        return kExitConfig;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
    return kExitOk;
}
