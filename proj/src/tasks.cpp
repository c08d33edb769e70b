#include "diagsynth/tasks.hpp"

#include <algorithm>

#include "diagsynth/errors.hpp"

namespace diagsynth {

namespace {

constexpr std::pair<TaskKind, std::string_view> kTaskNames[] = {
    {TaskKind::Image2Code, "Image2Code"},
    {TaskKind::Description2Code, "Description2Code"},
    {TaskKind::Image2Description, "Image2Description"},
    {TaskKind::ImageEnhancePrompt, "ImageEnhancePrompt"},
    {TaskKind::ImageEnhanceDescription, "ImageEnhanceDescription"},
    {TaskKind::CodeEnhancePrompt, "CodeEnhancePrompt"},
    {TaskKind::CodeEnhanceDescription, "CodeEnhanceDescription"},
    {TaskKind::PairQA, "PairQA"},
    {TaskKind::PartialMatchQA, "PartialMatchQA"},
};

bool needs_image(TaskKind k) {
    return k != TaskKind::Description2Code && k != TaskKind::CodeEnhancePrompt && k != TaskKind::CodeEnhanceDescription;
}

std::string missing(TaskKind kind, std::string_view what) {
    return std::string(to_string(kind)) + " needs " + std::string(what);
}

std::string image_of(TaskKind kind, const std::optional<std::string>& image, const std::string& code_path,
                     const TaskOptions& opts, std::string_view what) {
    if (image) return *image;
    if (opts.codeless && !code_path.empty()) return code_path;
    throw ConstructionError(missing(kind, what));
}

}  // namespace

std::string_view to_string(TaskKind kind) {
    for (const auto& [k, name] : kTaskNames)
        if (k == kind) return name;
    return "?";
}

TaskKind parse_task_kind(std::string_view name) {
    for (const auto& [k, n] : kTaskNames)
        if (n == name) return k;
    throw ConfigError("unknown task kind '" + std::string(name) + "'");
}

bool needs_enhancement_sample(TaskKind kind) noexcept {
    switch (kind) {
        case TaskKind::ImageEnhancePrompt:
        case TaskKind::ImageEnhanceDescription:
        case TaskKind::CodeEnhancePrompt:
        case TaskKind::CodeEnhanceDescription:
        case TaskKind::PartialMatchQA: return true;
        default: return false;
    }
}

const D1Sample* TaskPool::find_d1(std::string_view id) const {
    auto it = by_id_.find(id);
    return it == by_id_.end() ? nullptr : &d1[it->second];
}

void TaskPool::reindex() {
    by_id_.clear();
    by_family_.clear();
    for (std::size_t i = 0; i < d1.size(); ++i) {
        by_id_.emplace(d1[i].id, i);
        by_family_[d1[i].family].push_back(i);
    }
}

const std::vector<std::size_t>& TaskPool::family_members(DiagramFamily family) const {
    static const std::vector<std::size_t> none;
    auto it = by_family_.find(family);
    return it == by_family_.end() ? none : it->second;
}

TaskInstance build_instance(TaskKind kind, const InstanceSources& src, Rng& rng, const TaskOptions& opts) {
    TaskInstance out;
    out.kind = kind;
    out.codeless = opts.codeless;

    const D1Sample* s = src.sample;
    const D2Sample* e = src.enhancement;
    if (needs_enhancement_sample(kind)) {
        if (!e) throw ConstructionError(missing(kind, "an enhancement sample"));
        if (!s && src.pool) s = src.pool->find_d1(e->base_id);
        if (!s) throw ConstructionError(missing(kind, "the base sample " + e->base_id));
        out.sample_ids = {s->id, e->id};
    } else {
        if (!s) throw ConstructionError(missing(kind, "a sample"));
        out.sample_ids = {s->id};
    }
    auto& in = out.inputs;
    auto& t = out.target;

    switch (kind) {
        case TaskKind::Image2Code:
            in.image = image_of(kind, s->image_path, s->code_path, opts, "an image");
            t.code = s->code;
            break;
        case TaskKind::Description2Code:
            if (s->description.empty()) throw ConstructionError(missing(kind, "a description"));
            in.description = s->description;
            t.code = s->code;
            break;
        case TaskKind::Image2Description:
            if (s->description.empty()) throw ConstructionError(missing(kind, "a description"));
            in.image = image_of(kind, s->image_path, s->code_path, opts, "an image");
            t.description = s->description;
            break;
        case TaskKind::ImageEnhancePrompt:
            in.image = image_of(kind, e->reduced_image_path, e->reduced_code_path, opts, "a reduced image");
            in.prompt = e->prompt;
            t.code = s->code;
            break;
        case TaskKind::ImageEnhanceDescription:
            in.image = image_of(kind, e->reduced_image_path, e->reduced_code_path, opts, "a reduced image");
            in.description = s->description;
            t.code = s->code;
            break;
        case TaskKind::CodeEnhancePrompt:
            in.code = e->reduced_code;
            in.prompt = e->prompt;
            t.code = s->code;
            break;
        case TaskKind::CodeEnhanceDescription:
            in.code = e->reduced_code;
            in.description = s->description;
            t.code = s->code;
            break;
        case TaskKind::PairQA: {
            in.image = image_of(kind, s->image_path, s->code_path, opts, "an image");
            if (!src.pool) throw ConstructionError(missing(kind, "a sample pool for negatives"));
            bool positive = bernoulli(rng, opts.pair_positive_rate);
            std::vector<std::size_t> others;
            for (auto i : src.pool->family_members(s->family))
                if (src.pool->d1[i].id != s->id) others.push_back(i);
            if (others.empty()) positive = true;  // lone sample in its family
            if (positive) {
                in.code = s->code;
            } else {
                const auto& other = src.pool->d1[others[uniform_index(rng, others.size())]];
                in.code = other.code;
                out.sample_ids.push_back(other.id);
            }
            t.label = positive;
            break;
        }
        case TaskKind::PartialMatchQA:
            in.image = image_of(kind, s->image_path, s->code_path, opts, "an image");
            in.code = e->reduced_code;
            t.partial = true;
            t.missing = e->removed;
            break;
    }
    return out;
}

MixReport sample_mix(const TaskPool& pool, std::size_t n, std::uint64_t seed,
                     const std::function<void(const TaskInstance&)>& sink, const TaskOptions& opts) {
    MixReport report;
    const bool d1_images = opts.codeless || std::all_of(pool.d1.begin(), pool.d1.end(),
                                                        [](const D1Sample& s) { return s.image_path.has_value(); });
    std::vector<const D2Sample*> d2;
    for (const auto& e : pool.d2) {
        const auto* base = pool.find_d1(e.base_id);
        if (base) d2.push_back(&e);
    }
    const bool d2_images = opts.codeless || std::all_of(d2.begin(), d2.end(), [&](const D2Sample* e) {
                               return e->reduced_image_path && pool.find_d1(e->base_id)->image_path;
                           });
    if (d2.size() < pool.d2.size()) {
        report.warnings.push_back(std::to_string(pool.d2.size() - d2.size()) +
                                  " enhancement samples reference a missing base sample and were ignored");
    }

    std::vector<TaskKind> kinds;
    for (auto k : kAllTaskKinds) {
        std::string why;
        if (needs_enhancement_sample(k) && d2.empty()) why = "no enhancement samples";
        else if (!needs_enhancement_sample(k) && pool.d1.empty()) why = "no base samples";
        else if (needs_image(k) && !(needs_enhancement_sample(k) ? d2_images : d1_images)) why = "no rendered images";
        if (why.empty()) {
            kinds.push_back(k);
        } else {
            report.excluded.push_back(k);
            report.warnings.push_back(std::string(to_string(k)) + " excluded: " + why);
        }
    }
    if (kinds.empty() || n == 0) return report;

    Rng stream(seed);
    for (std::size_t i = 0; i < n; ++i) {
        const auto kind = kinds[uniform_index(stream, kinds.size())];
        InstanceSources src;
        src.pool = &pool;
        if (needs_enhancement_sample(kind)) {
            src.enhancement = d2[uniform_index(stream, d2.size())];
        } else {
            src.sample = &pool.d1[uniform_index(stream, pool.d1.size())];
        }
        const auto instance_seed = derive_seed(seed, i);
        Rng rng(instance_seed);
        auto instance = build_instance(kind, src, rng, opts);
        instance.seed = instance_seed;
        ++report.counts[kind];
        sink(instance);
    }
    return report;
}

nlohmann::json to_json(const TaskInstance& x) {
    using nlohmann::json;
    json inputs = json::object();
    if (x.inputs.image) inputs["image"] = *x.inputs.image;
    if (x.inputs.code) inputs["code"] = *x.inputs.code;
    if (x.inputs.description) inputs["description"] = *x.inputs.description;
    if (x.inputs.prompt) inputs["prompt"] = *x.inputs.prompt;
    json target = json::object();
    if (x.target.code) target["code"] = *x.target.code;
    if (x.target.description) target["description"] = *x.target.description;
    if (x.target.label) target["label"] = *x.target.label;
    if (x.target.partial) {
        target["partial"] = *x.target.partial;
        json missing = json::array();
        for (const auto& t : x.target.missing) missing.push_back(triplet_to_json(t));
        target["missing"] = missing;
    }
    return {{"v", 1},
            {"kind", std::string(to_string(x.kind))},
            {"inputs", inputs},
            {"target", target},
            {"provenance", {{"sample_ids", x.sample_ids}, {"seed", x.seed}, {"codeless", x.codeless}}}};
}

}  // namespace diagsynth
