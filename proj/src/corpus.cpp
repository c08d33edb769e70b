#include "diagsynth/corpus.hpp"

#include <omp.h>

#include <algorithm>
#include <atomic>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <exception>
#include <fstream>
#include <set>
#include <sstream>

#include "diagsynth/errors.hpp"
#include "diagsynth/mermaid.hpp"

namespace diagsynth {

namespace fs = std::filesystem;

namespace {

// Published D1 counts (Block, C4, Class, Flowchart, Graph, Packet, Sequence, State).
constexpr int kPublishedCounts[3][8] = {
    {4402, 4738, 6000, 1500, 3695, 1500, 6000, 5000},
    {2000, 3000, 2000, 3000, 5001, 2981, 1500, 2500},
    {2500, 2500, 2500, 3500, 1729, 3500, 1786, 2000},
};

std::string read_text(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot read " + path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_text(const fs::path& path, std::string_view text) {
    std::error_code ec;
    if (path.has_parent_path()) fs::create_directories(path.parent_path(), ec);
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot write " + path.string());
    out.write(text.data(), static_cast<std::streamsize>(text.size()));
    if (!out) throw IoError("short write to " + path.string());
}

// Writes next to the target and renames, so readers never see half a manifest.
void write_atomically(const fs::path& path, std::string_view text) {
    fs::path tmp = path;
    tmp += ".tmp";
    try {
        write_text(tmp, text);
        fs::rename(tmp, path);
    } catch (...) {
        std::error_code ec;
        fs::remove(tmp, ec);
        throw;
    }
}

std::vector<nlohmann::json> read_jsonl(const fs::path& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot read " + path.string());
    std::vector<nlohmann::json> out;
    std::string line;
    int n = 0;
    while (std::getline(in, line)) {
        ++n;
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
        try {
            out.push_back(nlohmann::json::parse(line));
        } catch (const nlohmann::json::exception& e) {
            throw ConfigError(path.string() + ":" + std::to_string(n) + ": " + e.what());
        }
    }
    if (out.empty() || out.front().value("type", "") != "header") throw ConfigError(path.string() + ": missing header line");
    if (out.front().value("v", 0) != kManifestVersion) throw ConfigError(path.string() + ": unsupported manifest version");
    return out;
}

std::pair<DiagramFamily, Level> parse_cell(const std::string& key) {
    const auto dot = key.find('.');
    if (dot == std::string::npos) throw ConfigError("cell key must look like Family.Level: " + key);
    return {parse_family(key.substr(0, dot)), parse_level(key.substr(dot + 1))};
}

nlohmann::json stats_json(const RowStats& s) {
    return {{"blocks", s.blocks}, {"edges", s.edges}, {"labeled_edges", s.labeled_edges},
            {"attrs", s.attrs},   {"headers", s.headers}, {"code_length", s.code_length}};
}

RowStats stats_from_json(const nlohmann::json& j) {
    RowStats s;
    s.blocks = j.value("blocks", 0);
    s.edges = j.value("edges", 0);
    s.labeled_edges = j.value("labeled_edges", 0);
    s.attrs = j.value("attrs", 0);
    s.headers = j.value("headers", 0);
    s.code_length = j.value("code_length", 0);
    return s;
}

// Runs body(i) for i in [0, n) across OpenMP threads and rethrows the first
// exception on the calling thread.
template <typename F>
void parallel_rows(std::size_t n, int threads, F&& body) {
    std::exception_ptr failure;
    std::atomic<bool> failed{false};
    const int nt = threads > 0 ? threads : omp_get_max_threads();
#pragma omp parallel for schedule(dynamic, 16) num_threads(nt)
    for (std::ptrdiff_t i = 0; i < static_cast<std::ptrdiff_t>(n); ++i) {
        if (failed.load(std::memory_order_relaxed)) continue;
        try {
            body(static_cast<std::size_t>(i));
        } catch (...) {
#pragma omp critical(diagsynth_row_failure)
            if (!failure) failure = std::current_exception();
            failed = true;
        }
    }
    if (failure) std::rethrow_exception(failure);
}

std::string lower(std::string_view s) {
    std::string out(s);
    for (auto& c : out) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    return out;
}

// Pipes the triplet JSON through an external command; nullopt on failure.
std::optional<std::string> run_verbalizer(const std::string& command, const nlohmann::json& payload,
                                          const fs::path& scratch) {
    write_text(scratch, payload.dump());
    const std::string cmd = "(" + command + ") < '" + scratch.string() + "'";
    std::FILE* pipe = ::popen(cmd.c_str(), "r");
    if (!pipe) return std::nullopt;
    std::string out;
    char buf[4096];
    std::size_t got;
    while ((got = std::fread(buf, 1, sizeof buf, pipe)) > 0) out.append(buf, got);
    const int status = ::pclose(pipe);
    std::error_code ec;
    fs::remove(scratch, ec);
    if (status != 0) return std::nullopt;
    while (!out.empty() && (out.back() == '\n' || out.back() == '\r')) out.pop_back();
    if (out.empty()) return std::nullopt;
    return out;
}

}  // namespace

RowStats compute_stats(std::string_view code) {
    const auto summary = summarize(parse_document(code).doc);
    RowStats s;
    s.code_length = static_cast<int>(code.size());
    if (summary.family == DiagramFamily::Packet) {
        s.headers = static_cast<int>(summary.bits.size());
        return s;
    }
    s.blocks = static_cast<int>(summary.blocks.size());
    s.edges = static_cast<int>(summary.edges.size());
    s.labeled_edges = static_cast<int>(
        std::count_if(summary.edges.begin(), summary.edges.end(), [](const SummaryEdge& e) { return e.label.has_value(); }));
    s.attrs = static_cast<int>(summary.member_count());
    return s;
}

int Recipe::total() const {
    int n = 0;
    for (const auto& [cell, c] : counts) n += c;
    return n;
}

Recipe default_desk_recipe(std::uint64_t seed) {
    Recipe r;
    r.seed = seed;
    for (std::size_t l = 0; l < kAllLevels.size(); ++l)
        for (std::size_t f = 0; f < kAllFamilies.size(); ++f)
            r.counts[{kAllFamilies[f], kAllLevels[l]}] = static_cast<int>(std::lround(kPublishedCounts[l][f] / 10.0));
    return r;
}

Recipe eval_recipe(int per_family, std::uint64_t seed) {
    if (per_family < 0) throw ConfigError("per-family count must be >= 0");
    Recipe r;
    r.seed = seed;
    for (auto f : kAllFamilies) {
        for (std::size_t l = 0; l < kAllLevels.size(); ++l) {
            const int rem = per_family % 3;
            r.counts[{f, kAllLevels[l]}] = per_family / 3 + (static_cast<int>(l) < rem ? 1 : 0);
        }
    }
    return r;
}

Recipe recipe_from_json(const nlohmann::json& j) {
    if (!j.is_object()) throw ConfigError("recipe must be a JSON object");
    for (const auto& [key, v] : j.items())
        if (key != "seed" && key != "counts" && key != "profiles") throw ConfigError("unknown recipe key: " + key);
    Recipe r;
    try {
        r.seed = j.value("seed", std::uint64_t{0});
        const auto counts = j.value("counts", nlohmann::json::object());
        for (const auto& [key, v] : counts.items()) {
            const int c = v.get<int>();
            if (c < 0) throw ConfigError("negative count for " + key);
            r.counts[parse_cell(key)] = c;
        }
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError(std::string("recipe: ") + e.what());
    }
    r.profile_overrides = j.value("profiles", nlohmann::json::object());
    ProfileTable probe = default_profiles();
    apply_profile_overrides(probe, r.profile_overrides);
    return r;
}

nlohmann::json to_json(const Recipe& recipe) {
    nlohmann::json counts = nlohmann::json::object();
    for (const auto& [cell, c] : recipe.counts) counts[cell_key(cell.first, cell.second)] = c;
    return {{"seed", recipe.seed}, {"counts", counts}, {"profiles", recipe.profile_overrides}};
}

void write_manifest(const CorpusManifest& m, const fs::path& path) {
    std::ostringstream out;
    out << nlohmann::json{{"v", m.version}, {"type", "header"}, {"recipe", to_json(m.recipe)}}.dump() << '\n';
    for (const auto& r : m.rows) {
        nlohmann::json j{{"v", m.version},
                         {"type", "row"},
                         {"id", r.id},
                         {"family", to_string(r.family)},
                         {"level", to_string(r.level)},
                         {"discipline", r.discipline},
                         {"seed", r.seed},
                         {"code_path", r.code_path},
                         {"description_path", r.description_path},
                         {"stats", stats_json(r.stats)}};
        if (r.image_path) j["image_path"] = *r.image_path;
        if (!r.augmented_paths.empty()) j["augmented_paths"] = r.augmented_paths;
        if (r.render_failed) j["render_failed"] = true;
        out << j.dump() << '\n';
    }
    write_atomically(path, out.str());
}

CorpusManifest read_manifest(const fs::path& path) {
    const auto lines = read_jsonl(path);
    CorpusManifest m;
    std::set<std::string> seen;
    try {
        m.recipe = recipe_from_json(lines.front().value("recipe", nlohmann::json::object()));
        for (std::size_t i = 1; i < lines.size(); ++i) {
            const auto& j = lines[i];
            ManifestRow r;
            r.id = j.at("id").get<std::string>();
            if (!seen.insert(r.id).second) throw ConfigError("duplicate sample id " + r.id);
            r.family = parse_family(j.at("family").get<std::string>());
            r.level = parse_level(j.at("level").get<std::string>());
            r.discipline = j.value("discipline", "");
            r.seed = j.value("seed", std::uint64_t{0});
            r.code_path = j.at("code_path").get<std::string>();
            r.description_path = j.value("description_path", "");
            if (j.contains("image_path")) r.image_path = j["image_path"].get<std::string>();
            r.augmented_paths = j.value("augmented_paths", std::vector<std::string>{});
            r.render_failed = j.value("render_failed", false);
            r.stats = stats_from_json(j.value("stats", nlohmann::json::object()));
            m.rows.push_back(std::move(r));
        }
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError(path.string() + ": " + e.what());
    }
    return m;
}

void write_d2_manifest(const D2Manifest& m, const fs::path& path) {
    std::ostringstream out;
    out << nlohmann::json{{"v", m.version}, {"type", "header"}, {"seed", m.seed}}.dump() << '\n';
    for (const auto& r : m.rows) {
        nlohmann::json removed = nlohmann::json::array();
        for (const auto& t : r.removed) removed.push_back(triplet_to_json(t));
        nlohmann::json j{{"v", m.version},
                         {"type", "row"},
                         {"id", r.id},
                         {"base_id", r.base_id},
                         {"family", to_string(r.family)},
                         {"reduced_code_path", r.reduced_code_path},
                         {"prompt", r.prompt},
                         {"removed", removed}};
        if (r.reduced_image_path) j["reduced_image_path"] = *r.reduced_image_path;
        out << j.dump() << '\n';
    }
    write_atomically(path, out.str());
}

D2Manifest read_d2_manifest(const fs::path& path) {
    const auto lines = read_jsonl(path);
    D2Manifest m;
    try {
        m.seed = lines.front().value("seed", std::uint64_t{0});
        for (std::size_t i = 1; i < lines.size(); ++i) {
            const auto& j = lines[i];
            D2Row r;
            r.id = j.at("id").get<std::string>();
            r.base_id = j.at("base_id").get<std::string>();
            r.family = parse_family(j.at("family").get<std::string>());
            r.reduced_code_path = j.at("reduced_code_path").get<std::string>();
            if (j.contains("reduced_image_path")) r.reduced_image_path = j["reduced_image_path"].get<std::string>();
            r.prompt = j.value("prompt", "");
            for (const auto& t : j.value("removed", nlohmann::json::array())) r.removed.push_back(triplet_from_json(t));
            m.rows.push_back(std::move(r));
        }
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError(path.string() + ": " + e.what());
    }
    return m;
}

GenerationContext default_context() {
    GenerationContext ctx;
    ctx.bank = &KeywordBank::builtin();
    ctx.templates = &DescriptionTemplateSet::builtin();
    ctx.profiles = default_profiles();
    return ctx;
}

std::string row_id(DiagramFamily family, Level level, int index) {
    char num[16];
    std::snprintf(num, sizeof num, "%06d", index);
    return lower(to_string(family)) + "-" + lower(to_string(level)) + "-" + num;
}

CorpusManifest gen_corpus(const Recipe& recipe, const GenerationContext& ctx, const fs::path& out_dir) {
    if (!ctx.bank || !ctx.templates) throw ConfigError("generation context needs a keyword bank and templates");
    ProfileTable profiles = ctx.profiles;
    apply_profile_overrides(profiles, recipe.profile_overrides);

    CorpusManifest m;
    m.recipe = recipe;
    // Each row's seed depends on its cell and index only, so editing one
    // cell's count never perturbs another cell.
    for (std::size_t f = 0; f < kAllFamilies.size(); ++f) {
        for (std::size_t l = 0; l < kAllLevels.size(); ++l) {
            const auto cell = std::make_pair(kAllFamilies[f], kAllLevels[l]);
            const auto it = recipe.counts.find(cell);
            if (it == recipe.counts.end()) continue;
            if (it->second < 0) throw ConfigError("negative count for " + cell_key(cell.first, cell.second));
            const auto cell_seed = derive_seed(recipe.seed, f * kAllLevels.size() + l);
            for (int i = 0; i < it->second; ++i) {
                ManifestRow r;
                r.family = cell.first;
                r.level = cell.second;
                r.id = row_id(r.family, r.level, i);
                r.seed = derive_seed(cell_seed, static_cast<std::uint64_t>(i));
                r.code_path = "code/" + r.id + ".mmd";
                r.description_path = "desc/" + r.id + ".txt";
                m.rows.push_back(std::move(r));
            }
        }
    }

    std::error_code ec;
    fs::create_directories(out_dir / "code", ec);
    fs::create_directories(out_dir / "desc", ec);
    const fs::path manifest_path = out_dir / "manifest.d1.jsonl";
    try {
        parallel_rows(m.rows.size(), ctx.threads, [&](std::size_t i) {
            auto& r = m.rows[i];
            const auto& profile = profile_for(profiles, r.family, r.level);
            const auto spec = sample_spec(r.family, r.level, profile, *ctx.bank, r.seed);
            const auto code = emit(spec);
            r.discipline = spec.discipline;
            r.stats = compute_stats(code);
            write_text(out_dir / r.code_path, code);
            write_text(out_dir / r.description_path, describe(summarize(spec), *ctx.templates));
        });
        write_manifest(m, manifest_path);
    } catch (const IoError&) {
        fs::remove(manifest_path, ec);
        throw;
    }
    return m;
}

EnhanceOptions EnhanceOptions::desk_defaults(std::uint64_t seed) {
    EnhanceOptions o;
    o.seed = seed;
    o.caps[DiagramFamily::Flowchart] = 0;
    return o;
}

D2Manifest gen_enhance(const CorpusManifest& d1, const fs::path& d1_dir, const fs::path& out_dir,
                       const EnhanceOptions& opts, EnhanceLog* log) {
    const auto& templates = opts.templates ? *opts.templates : EnhanceTemplateSet::builtin();
    D2Manifest m;
    m.seed = opts.seed;
    std::map<DiagramFamily, int> produced;
    auto skip = [&](const std::string& id, std::string reason) {
        if (log) log->skipped.emplace_back(id, std::move(reason));
    };
    std::error_code ec;
    fs::create_directories(out_dir / "reduced", ec);
    for (const auto& row : d1.rows) {
        if (const auto cap = opts.caps.find(row.family); cap != opts.caps.end() && produced[row.family] >= cap->second) {
            skip(row.id, "family cap reached");
            continue;
        }
        const auto parsed = parse_document(read_text(d1_dir / row.code_path));
        Rng rng(derive_seed(opts.seed, row.seed));
        auto derived = remove_triplet(parsed.doc, rng, opts.removals);
        if (const auto* s = std::get_if<DerivationSkip>(&derived)) {
            skip(row.id, s->reason);
            continue;
        }
        auto& sample = std::get<EnhancementSample>(derived);
        D2Row r;
        r.id = row.id + "-e";
        r.base_id = row.id;
        r.family = row.family;
        r.reduced_code_path = "reduced/" + r.id + ".mmd";
        r.removed = sample.removed;
        if (opts.verbalizer_command.empty()) {
            r.prompt = verbalize_all(sample.removed, row.family, templates);
        } else {
            nlohmann::json payload = nlohmann::json::array();
            for (const auto& t : sample.removed) payload.push_back(triplet_to_json(t));
            auto prompt = run_verbalizer(opts.verbalizer_command, payload, out_dir / ("." + r.id + ".triplet.json"));
            if (!prompt) {
                skip(row.id, "external verbalizer failed");
                continue;
            }
            r.prompt = std::move(*prompt);
        }
        write_text(out_dir / r.reduced_code_path, sample.reduced.to_source());
        ++produced[row.family];
        m.rows.push_back(std::move(r));
    }
    write_d2_manifest(m, out_dir / "manifest.d2.jsonl");
    return m;
}

TaskPool load_task_pool(const CorpusManifest& d1, const fs::path& d1_dir, const D2Manifest* d2,
                        const fs::path& d2_dir) {
    TaskPool pool;
    pool.d1.reserve(d1.rows.size());
    for (const auto& row : d1.rows) {
        D1Sample s;
        s.id = row.id;
        s.family = row.family;
        s.level = row.level;
        s.code = read_text(d1_dir / row.code_path);
        s.description = read_text(d1_dir / row.description_path);
        s.code_path = row.code_path;
        s.image_path = row.image_path;
        pool.d1.push_back(std::move(s));
    }
    if (d2) {
        for (const auto& row : d2->rows) {
            D2Sample s;
            s.id = row.id;
            s.base_id = row.base_id;
            s.reduced_code = read_text(d2_dir / row.reduced_code_path);
            s.reduced_code_path = row.reduced_code_path;
            s.reduced_image_path = row.reduced_image_path;
            s.prompt = row.prompt;
            s.removed = row.removed;
            pool.d2.push_back(std::move(s));
        }
    }
    pool.reindex();
    return pool;
}

MixReport build_tasks(const TaskPool& pool, std::size_t n, std::uint64_t seed, const fs::path& out,
                      const TaskOptions& opts) {
    std::error_code ec;
    if (out.has_parent_path()) fs::create_directories(out.parent_path(), ec);
    fs::path tmp = out;
    tmp += ".tmp";
    std::ofstream file(tmp, std::ios::trunc);
    if (!file) throw IoError("cannot write " + tmp.string());
    MixReport report;
    try {
        report = sample_mix(pool, n, seed, [&](const TaskInstance& inst) { file << to_json(inst).dump() << '\n'; }, opts);
        file.close();
        if (!file) throw IoError("short write to " + tmp.string());
        fs::rename(tmp, out);
    } catch (...) {
        fs::remove(tmp, ec);
        throw;
    }
    return report;
}

std::vector<fs::path> augment_file(const fs::path& input, const fs::path& out_dir, int passes,
                                   const AugmentConfig& cfg, std::uint64_t seed) {
    if (passes < 0) throw ParameterError("passes must be >= 0");
    const auto image = read_png(input);
    std::error_code ec;
    fs::create_directories(out_dir, ec);
    std::vector<fs::path> written;
    for (int k = 0; k < passes; ++k) {
        Rng rng(derive_seed(seed, static_cast<std::uint64_t>(k)));
        const auto path = out_dir / (input.stem().string() + ".aug" + std::to_string(k) + ".png");
        write_png(augment(image, cfg, rng), path);
        written.push_back(path);
    }
    return written;
}

RenderLog render_and_augment(CorpusManifest& manifest, const fs::path& dir, const RenderOptions& opts) {
    if (opts.passes < 0) throw ParameterError("passes must be >= 0");
    opts.augment.check();
    std::error_code ec;
    fs::create_directories(dir / "images", ec);
    auto& rows = manifest.rows;
    std::vector<int> rendered(rows.size(), 0), augmented(rows.size(), 0);

    if (opts.bridge) {
        parallel_rows(rows.size(), 0, [&](std::size_t i) {
            auto& r = rows[i];
            const std::string rel = "images/" + r.id + ".png";
            const int status = opts.bridge->compile(dir / r.code_path, dir / rel, opts.scale);
            r.render_failed = status != 0;
            if (status == 0) {
                r.image_path = rel;
                rendered[i] = 1;
            } else {
                r.image_path.reset();
            }
        });
    }
    parallel_rows(rows.size(), 0, [&](std::size_t i) {
        auto& r = rows[i];
        r.augmented_paths.clear();
        if (!r.image_path || opts.passes == 0) return;
        const auto image = read_png(dir / *r.image_path);
        for (int k = 0; k < opts.passes; ++k) {
            Rng rng(derive_seed(derive_seed(opts.seed, r.seed), static_cast<std::uint64_t>(k)));
            const std::string rel = "images/" + r.id + ".aug" + std::to_string(k) + ".png";
            write_png(augment(image, opts.augment, rng), dir / rel);
            r.augmented_paths.push_back(rel);
            ++augmented[i];
        }
    });
    write_manifest(manifest, dir / "manifest.d1.jsonl");

    RenderLog log;
    for (std::size_t i = 0; i < rows.size(); ++i) {
        log.rendered += rendered[i];
        log.render_failed += rows[i].render_failed;
        log.augmented += augmented[i];
    }
    return log;
}

ScoreRun score_predictions(const fs::path& pred_dir, const CorpusManifest& manifest, const fs::path& manifest_dir,
                           const fs::path& out_dir, const ScoreRunOptions& opts) {
    ScoreRun run;
    const auto n = manifest.rows.size();
    run.ids.resize(n);
    run.reports.resize(n);
    if (opts.text_metrics) run.text.resize(n);
    std::error_code ec;
    if (!out_dir.empty()) fs::create_directories(out_dir, ec);
    parallel_rows(n, 0, [&](std::size_t i) {
        const auto& row = manifest.rows[i];
        run.ids[i] = row.id;
        const auto gold_code = read_text(manifest_dir / row.code_path);
        const auto gold = parse(gold_code, opts.structural.canonical);
        const auto pred_path = pred_dir / (row.id + ".mmd");
        std::optional<std::string> predicted;
        if (fs::exists(pred_path)) predicted = read_text(pred_path);
        run.reports[i] = predicted ? score_structural(*predicted, gold, row.family, opts.structural)
                                   : missing_report(row.family);
        nlohmann::json j = to_json(run.reports[i]);
        j["id"] = row.id;
        if (opts.text_metrics) {
            run.text[i] = score_text(predicted.value_or(""), gold_code);
            j["text"] = to_json(run.text[i]);
        }
        if (!out_dir.empty()) write_text(out_dir / (row.id + ".scores.json"), j.dump(2) + "\n");
    });
    run.table = aggregate(run.reports, run.text);
    if (!out_dir.empty()) write_text(out_dir / "scores.csv", run.table.to_csv());
    return run;
}

StatsReport corpus_stats(const CorpusManifest& manifest, const fs::path& dir) {
    StatsReport report;
    std::map<std::pair<DiagramFamily, Level>, std::map<std::string, std::vector<double>>> samples;
    for (const auto& row : manifest.rows) {
        std::string code;
        RowStats stats;
        try {
            code = read_text(dir / row.code_path);
            stats = compute_stats(code);
        } catch (const Error&) {
            report.invalid.push_back(row.id);
            continue;
        }
        if (!validate(code).ok) report.invalid.push_back(row.id);
        if (stats != row.stats) report.inconsistent.push_back(row.id);
        auto& cell = samples[{row.family, row.level}];
        if (row.family == DiagramFamily::Packet) {
            cell["headers"].push_back(stats.headers);
        } else {
            cell["edges"].push_back(stats.edges);
            cell["blocks"].push_back(stats.blocks);
            cell["labeled_edges"].push_back(stats.labeled_edges);
            if (row.family == DiagramFamily::Class) cell["attrs"].push_back(stats.attrs);
        }
        cell["code_length"].push_back(stats.code_length);
    }
    for (const auto& [key, values] : samples) {
        auto& out = report.cells[key];
        for (const auto& [name, v] : values) {
            out.count = static_cast<int>(v.size());
            double sum = 0.0, sq = 0.0;
            for (double x : v) sum += x;
            const double mean = sum / v.size();
            for (double x : v) sq += (x - mean) * (x - mean);
            out.values[name] = {*std::min_element(v.begin(), v.end()), mean, std::sqrt(sq / v.size()),
                                *std::max_element(v.begin(), v.end())};
        }
    }
    return report;
}

}  // namespace diagsynth
