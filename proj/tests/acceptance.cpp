// Acceptance suite: one PASS / FAIL / SKIP line per criterion, nonzero exit on
// any FAIL. Runs standalone or under ctest.
#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include <unistd.h>

#include <json.hpp>

#include "diagsynth/augment.hpp"
#include "diagsynth/compiler_bridge.hpp"
#include "diagsynth/corpus.hpp"
#include "diagsynth/describe.hpp"
#include "diagsynth/enhance.hpp"
#include "diagsynth/genspec.hpp"
#include "diagsynth/kernels.hpp"
#include "diagsynth/mermaid.hpp"
#include "diagsynth/metrics.hpp"
#include "diagsynth/tasks.hpp"
#include "diagsynth/text_metrics.hpp"

namespace fs = std::filesystem;
using namespace diagsynth;
using Clock = std::chrono::steady_clock;

namespace {

struct Outcome {
    enum Kind { Pass, Fail, Skip } kind = Pass;
    std::string detail;
};

Outcome pass(std::string d) { return {Outcome::Pass, std::move(d)}; }
Outcome fail(std::string d) { return {Outcome::Fail, std::move(d)}; }
Outcome skip(std::string d) { return {Outcome::Skip, std::move(d)}; }
Outcome verdict(bool ok, std::string d) { return ok ? pass(std::move(d)) : fail(std::move(d)); }

double seconds_since(Clock::time_point t0) {
    return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::string fmt(const char* f, double a, double b = 0, double c = 0) {
    char buf[256];
    std::snprintf(buf, sizeof buf, f, a, b, c);
    return buf;
}

const ProfileTable& profiles() {
    static const ProfileTable t = default_profiles();
    return t;
}

DiagramSpec sample(DiagramFamily f, Level l, std::uint64_t seed) {
    return sample_spec(f, l, profile_for(profiles(), f, l), KeywordBank::builtin(), seed);
}

Outcome round_trip() {
    const auto t0 = Clock::now();
    int bad = 0, total = 0;
    for (auto f : kAllFamilies)
        for (auto l : kAllLevels)
            for (int i = 0; i < 1000; ++i, ++total) {
                const auto spec = sample(f, l, derive_seed(11, static_cast<std::uint64_t>(total)));
                if (!(parse(emit(spec)) == summarize(spec))) ++bad;
            }
    const double s = seconds_since(t0);
    return verdict(bad == 0 && s < 60.0,
                   std::to_string(total) + " specs, " + std::to_string(bad) + " mismatches, " + fmt("%.1f s", s));
}

Outcome structural_ranges() {
    int violations = 0, checked = 0;
    std::string first;
    auto note = [&](const std::string& what) {
        if (violations++ == 0) first = what;
    };
    for (auto f : kAllFamilies)
        for (auto l : kAllLevels) {
            const auto& prof = profile_for(profiles(), f, l);
            for (int i = 0; i < 200; ++i, ++checked) {
                const auto spec = sample(f, l, derive_seed(22, static_cast<std::uint64_t>(checked)));
                const auto v = spec_violations(spec, &prof);
                if (!v.empty()) note(cell_key(f, l) + ": " + v.front());
                const auto st = compute_stats(emit(spec));
                if (f == DiagramFamily::Packet && l == Level::Easy && (st.headers < 2 || st.headers > 3))
                    note("Packet.Easy headers " + std::to_string(st.headers));
                if (f == DiagramFamily::Block && l == Level::Easy &&
                    (st.blocks < 2 || st.blocks > 3 || st.edges != 1))
                    note("Block.Easy blocks/edges " + std::to_string(st.blocks) + "/" + std::to_string(st.edges));
                if (f == DiagramFamily::Class && l == Level::Hard && (st.blocks != 6 || st.edges != 5))
                    note("Class.Hard classes/relations " + std::to_string(st.blocks) + "/" + std::to_string(st.edges));
            }
        }
    return verdict(violations == 0, std::to_string(checked) + " samples, " + std::to_string(violations) +
                                         " violations" + (first.empty() ? "" : " (first: " + first + ")"));
}

Outcome code_length() {
    const int n = 2000;
    int inside = 0;
    for (int i = 0; i < n; ++i) {
        const auto len = emit(sample(DiagramFamily::Block, Level::Easy, derive_seed(33, i))).size();
        if (len >= 80 && len <= 237) ++inside;
    }
    const double frac = static_cast<double>(inside) / n;
    return verdict(frac >= 0.95, fmt("%.4f of Block.Easy emissions within [80, 237]", frac));
}

bool all_f1(const ScoreReport& r, double value) {
    for (const auto& [c, p] : r.scores)
        if (p.f1 != value || (value == 0.0 && (p.precision != 0.0 || p.recall != 0.0))) return false;
    return !r.scores.empty();
}

Outcome scoring_identities() {
    int bad = 0, n = 0;
    for (auto f : kAllFamilies)
        for (auto l : kAllLevels)
            for (int i = 0; i < 20; ++i, ++n) {
                const auto spec = sample(f, l, derive_seed(44, n));
                const auto r = score_structural(emit(spec), summarize(spec), f);
                if (!r.compiled || !all_f1(r, 1.0)) ++bad;
                for (auto c : kAllCategories)
                    if (is_applicable(c, f) != (r.find(c) != nullptr)) ++bad;
            }
    const auto gold = summarize(sample(DiagramFamily::Graph, Level::Medium, 5));
    const auto broken = score_structural("graph LR\n    A -->\n", gold, DiagramFamily::Graph);
    const auto wrong = score_structural(emit(sample(DiagramFamily::Sequence, Level::Easy, 6)), gold,
                                        DiagramFamily::Graph);
    const bool ok = bad == 0 && !broken.compiled && broken.scores.empty() && wrong.compiled && all_f1(wrong, 0.0);
    return verdict(ok, std::to_string(n) + " gold-vs-gold reports, " + std::to_string(bad) +
                           " imperfect; broken compiled=" + (broken.compiled ? "true" : "false") +
                           "; wrong family zeroed=" + (all_f1(wrong, 0.0) ? "true" : "false"));
}

Outcome mutation_sensitivity() {
    const std::string head = "graph LR\n    A[alpha] --> B[beta]\n    B --> C[gamma]\n    C --> D[delta]\n";
    const std::string gold_src = head + "    D --> E[epsilon]\n    E --> A\n";
    const auto gold = parse(gold_src);
    if (gold.edges.size() != 5) return fail("gold graph has " + std::to_string(gold.edges.size()) + " edges");
    const auto deleted = score_structural(head + "    D --> E[epsilon]\n", gold, DiagramFamily::Graph);
    const auto added = score_structural(gold_src + "    A --> C\n", gold, DiagramFamily::Graph);
    const auto* d = deleted.find(Category::CEd);
    const auto* a = added.find(Category::CEd);
    if (!d || !a) return fail("CEd missing");
    const bool ok = d->recall == 0.8 && d->precision == 1.0 && a->precision == 5.0 / 6.0 && a->recall == 1.0;
    return verdict(ok, fmt("deleted: R=%.6f P=%.6f; spurious: P=%.6f", d->recall, d->precision, a->precision));
}

Outcome enhancement_closure() {
    int derived = 0, bad = 0, invalid = 0;
    std::uint64_t k = 0;
    while (derived < 500 && k < 100000) {
        const auto f = kAllFamilies[k % kAllFamilies.size()];
        const auto l = kAllLevels[(k / kAllFamilies.size()) % 3];
        const auto spec = sample(f, l, derive_seed(66, k));
        Rng rng(derive_seed(67, k));
        ++k;
        const auto base = build_doc(spec);
        auto d = remove_triplet(base, rng);
        const auto* e = std::get_if<EnhancementSample>(&d);
        if (!e) continue;
        ++derived;
        const auto reduced_src = e->reduced.to_source();
        if (!validate(reduced_src).ok) ++invalid;
        if (!(reinsert(parse(reduced_src), e->removed) == parse(base.to_source()))) ++bad;
    }
    return verdict(derived == 500 && bad == 0 && invalid == 0,
                   std::to_string(derived) + " D2 samples, " + std::to_string(bad) + " not reconstructed, " +
                       std::to_string(invalid) + " reduced docs invalid");
}

TaskPool mixed_pool() {
    TaskPool pool;
    int n = 0;
    for (auto f : kAllFamilies)
        for (int i = 0; i < 30; ++i, ++n) {
            const auto l = kAllLevels[static_cast<std::size_t>(i % 3)];
            const auto spec = sample(f, l, derive_seed(77, n));
            D1Sample s;
            s.id = "s" + std::to_string(n);
            s.family = f;
            s.level = l;
            s.code = emit(spec);
            s.description = describe(summarize(spec));
            s.code_path = "code/" + s.id + ".mmd";
            s.image_path = "images/" + s.id + ".png";
            pool.d1.push_back(s);
            Rng rng(derive_seed(78, n));
            auto d = remove_triplet(build_doc(spec), rng);
            if (auto* e = std::get_if<EnhancementSample>(&d)) {
                D2Sample x;
                x.id = s.id + "-e";
                x.base_id = s.id;
                x.reduced_code = e->reduced.to_source();
                x.reduced_code_path = "reduced/" + x.id + ".mmd";
                x.reduced_image_path = "images/" + x.id + ".png";
                x.removed = e->removed;
                x.prompt = verbalize_all(e->removed, f);
                pool.d2.push_back(x);
            }
        }
    pool.reindex();
    return pool;
}

Outcome task_mix() {
    const auto pool = mixed_pool();
    std::size_t pairs = 0, positives = 0;
    const auto report = sample_mix(pool, 90000, 2024, [&](const TaskInstance& x) {
        if (x.kind != TaskKind::PairQA) return;
        ++pairs;
        if (x.target.label.value_or(false)) ++positives;
    });
    bool ok = report.excluded.empty();
    std::size_t lo = SIZE_MAX, hi = 0;
    for (auto k : kAllTaskKinds) {
        const auto it = report.counts.find(k);
        const std::size_t c = it == report.counts.end() ? 0 : it->second;
        lo = std::min(lo, c);
        hi = std::max(hi, c);
        ok = ok && c >= 9700 && c <= 10300;
    }
    const double rate = pairs ? static_cast<double>(positives) / static_cast<double>(pairs) : 0.0;
    ok = ok && std::abs(rate - 0.5) <= 0.02;
    return verdict(ok, fmt("kind counts in [%.0f, %.0f]; PairQA positive rate %.4f", static_cast<double>(lo),
                           static_cast<double>(hi), rate));
}

RasterImage test_card() {
    RasterImage img(96, 64);
    for (int y = 0; y < img.height; ++y)
        for (int x = 0; x < img.width; ++x) {
            auto* p = img.at(x, y);
            if (x % 16 < 2 || y % 16 < 2) p[0] = p[1] = p[2] = 20;
            else if (x > 40 && x < 70 && y > 20 && y < 40) { p[0] = 40; p[1] = 90; p[2] = 200; }
        }
    return img;
}

Outcome augment_gates() {
    const AugmentConfig cfg;
    const auto img = test_card();
    const int runs = 10000;
    int blur = 0, color = 0, weather = 0, clahe = 0;
    for (int i = 0; i < runs; ++i) {
        Rng rng(derive_seed(88, i));
        AugmentTrace t;
        augment(img, cfg, rng, &t);
        blur += t.blur_gate;
        color += t.color_gate;
        weather += t.weather_gate;
        clahe += t.ran(TransformKind::Clahe);
    }
    auto f = [&](int c) { return static_cast<double>(c) / runs; };
    bool ok = std::abs(f(blur) - 0.7) <= 0.02 && std::abs(f(color) - 0.9) <= 0.02 &&
              std::abs(f(weather) - 0.4) <= 0.02 && std::abs(f(clahe) - 0.3) <= 0.02;

    bool identity = true;
    for (int i = 0; i < 50; ++i) {
        Rng rng(i);
        identity = identity && augment(img, AugmentConfig::disabled(), rng) == img;
    }
    Rng r1(99), r2(99);
    const bool repro = augment(img, cfg, r1).pixels == augment(img, cfg, r2).pixels;
    ok = ok && identity && repro;
    return verdict(ok, fmt("blur %.4f, color %.4f, weather %.4f", f(blur), f(color), f(weather)) +
                           fmt(", CLAHE %.4f", f(clahe)) + "; zero config identity=" + (identity ? "true" : "false") +
                           ", reproducible=" + (repro ? "true" : "false"));
}

Outcome text_metrics() {
    bool ok = bleu("the api reads the cache .", "the api reads the cache .") == 1.0 &&
              chrf("the api reads the cache", "the api reads the cache") == 100.0;
    const auto self = rouge_l("the api reads the cache", "the api reads the cache");
    ok = ok && self.precision == 1.0 && self.recall == 1.0 && self.f1 == 1.0;

    std::ifstream in(fs::path(DIAGSYNTH_FIXTURES) / "text_metric_oracles.json");
    if (!in) return fail("oracle fixture not found");
    const auto cases = nlohmann::json::parse(in);
    double worst = 0.0;
    for (const auto& c : cases) {
        const auto p = c.at("predicted").get<std::string>();
        const auto r = c.at("reference").get<std::string>();
        const auto rl = rouge_l(p, r);
        const auto exp_rl = c.at("rouge_l");
        // chrF is on a 0-100 scale; compare it as a fraction.
        for (double d : {bleu(p, r) - c.at("bleu").get<double>(), (chrf(p, r) - c.at("chrf").get<double>()) / 100.0,
                         rl.precision - exp_rl[0].get<double>(), rl.recall - exp_rl[1].get<double>(),
                         rl.f1 - exp_rl[2].get<double>()})
            worst = std::max(worst, std::abs(d));
    }
    ok = ok && worst <= 1e-9 && !cases.empty();
    return verdict(ok, std::to_string(cases.size()) + " oracle cases, max deviation " + fmt("%.3g", worst));
}

Outcome desk_build() {
    const fs::path dir = fs::temp_directory_path() / ("diagsynth-accept-" + std::to_string(::getpid()));
    fs::remove_all(dir);
    const auto recipe = default_desk_recipe(0);
    auto ctx = default_context();
    const auto t0 = Clock::now();
    const auto manifest = gen_corpus(recipe, ctx, dir);
    int invalid = 0;
    std::map<std::pair<DiagramFamily, Level>, int> counts;
    for (const auto& row : manifest.rows) {
        ++counts[{row.family, row.level}];
        std::ifstream in(dir / row.code_path);
        std::stringstream ss;
        ss << in.rdbuf();
        if (!validate(ss.str()).ok) ++invalid;
    }
    const double s = seconds_since(t0);
    fs::remove_all(dir);
    bool counts_ok = true;
    for (const auto& [cell, c] : recipe.counts) {
        const auto it = counts.find(cell);
        counts_ok = counts_ok && (it == counts.end() ? 0 : it->second) == c;
    }
    counts_ok = counts_ok && static_cast<int>(manifest.rows.size()) == recipe.total();
    return verdict(invalid == 0 && counts_ok && s < 300.0,
                   std::to_string(manifest.rows.size()) + " rows, " + std::to_string(invalid) +
                       " invalid, per-cell counts " + (counts_ok ? "match" : "DIFFER") + ", " + fmt("%.1f s", s) +
                       " on " + std::to_string(kernels::max_threads()) + " thread(s)");
}

Outcome model_tables() {
    return skip("fine-tuned model metric tables need GPU training and human raters; the scoring harness "
                "(diagsynth score) produces them from model predictions");
}

Outcome external_compiler() {
    const auto bridge = CompilerBridge::from_env();
    if (!bridge) return skip("MERMAID_CLI not set");
    int failures = 0, n = 0;
    std::string first;
    for (auto f : kAllFamilies)
        for (int i = 0; i < 50; ++i, ++n) {
            const auto src = emit(sample(f, kAllLevels[static_cast<std::size_t>(i % 3)], derive_seed(120, n)));
            const auto v = bridge->validate(src);
            if (!v.ok && failures++ == 0) first = std::string(to_string(f)) + ": " + v.reason;
        }
    return verdict(failures == 0, std::to_string(n) + " samples, " + std::to_string(failures) + " nonzero exits" +
                                      (first.empty() ? "" : " (first: " + first + ")"));
}

}  // namespace

int main() {
    const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria{
        {"round-trip oracle", round_trip},
        {"structural ranges", structural_ranges},
        {"code-length envelope", code_length},
        {"scoring identities", scoring_identities},
        {"mutation sensitivity", mutation_sensitivity},
        {"enhancement closure", enhancement_closure},
        {"task-mix uniformity", task_mix},
        {"augmentation gates", augment_gates},
        {"text metrics", text_metrics},
        {"desk-scale corpus build", desk_build},
        {"model metric tables", model_tables},
        {"external compiler", external_compiler},
    };
    int failed = 0;
    for (std::size_t i = 0; i < criteria.size(); ++i) {
        Outcome o;
        try {
            o = criteria[i].second();
        } catch (const std::exception& e) {
            o = fail(std::string("exception: ") + e.what());
        }
        const char* tag = o.kind == Outcome::Pass ? "PASS" : o.kind == Outcome::Fail ? "FAIL" : "SKIP";
        if (o.kind == Outcome::Fail) ++failed;
        std::printf("%s %2zu %-24s %s\n", tag, i + 1, criteria[i].first, o.detail.c_str());
        std::fflush(stdout);
    }
    return failed == 0 ? EXIT_SUCCESS : EXIT_FAILURE;
}
