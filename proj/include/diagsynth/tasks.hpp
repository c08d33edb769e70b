#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "diagsynth/enhance.hpp"
#include "diagsynth/family.hpp"
#include "diagsynth/rng.hpp"

namespace diagsynth {

enum class TaskKind {
    Image2Code,
    Description2Code,
    Image2Description,
    ImageEnhancePrompt,
    ImageEnhanceDescription,
    CodeEnhancePrompt,
    CodeEnhanceDescription,
    PairQA,
    PartialMatchQA,
};

inline constexpr std::array<TaskKind, 9> kAllTaskKinds{
    TaskKind::Image2Code,          TaskKind::Description2Code,
    TaskKind::Image2Description,   TaskKind::ImageEnhancePrompt,
    TaskKind::ImageEnhanceDescription, TaskKind::CodeEnhancePrompt,
    TaskKind::CodeEnhanceDescription,  TaskKind::PairQA,
    TaskKind::PartialMatchQA};

std::string_view to_string(TaskKind kind);
TaskKind parse_task_kind(std::string_view name);
bool needs_enhancement_sample(TaskKind kind) noexcept;

struct D1Sample {
    std::string id;
    DiagramFamily family = DiagramFamily::Graph;
    Level level = Level::Easy;
    std::string code;
    std::string description;
    std::string code_path;
    std::optional<std::string> image_path;
};

struct D2Sample {
    std::string id;
    std::string base_id;
    std::string reduced_code;
    std::string reduced_code_path;
    std::optional<std::string> reduced_image_path;
    std::string prompt;
    std::vector<Triplet> removed;
};

struct TaskPool {
    std::vector<D1Sample> d1;
    std::vector<D2Sample> d2;

    const D1Sample* find_d1(std::string_view id) const;
    // Rebuilds the id and family indexes; call after filling d1.
    void reindex();
    const std::vector<std::size_t>& family_members(DiagramFamily family) const;

private:
    std::map<std::string, std::size_t, std::less<>> by_id_;
    std::map<DiagramFamily, std::vector<std::size_t>> by_family_;
};

struct TaskInputs {
    std::optional<std::string> image;  // path reference
    std::optional<std::string> code;
    std::optional<std::string> description;
    std::optional<std::string> prompt;
};

struct TaskTarget {
    std::optional<std::string> code;
    std::optional<std::string> description;
    std::optional<bool> label;    // PairQA
    std::optional<bool> partial;  // PartialMatchQA
    std::vector<Triplet> missing;  // PartialMatchQA
};

struct TaskInstance {
    TaskKind kind = TaskKind::Image2Code;
    TaskInputs inputs;
    TaskTarget target;
    std::vector<std::string> sample_ids;
    std::uint64_t seed = 0;
    bool codeless = false;
};

struct TaskOptions {
    // Use the code path as the image reference when no rendered image exists.
    bool codeless = false;
    double pair_positive_rate = 0.5;
};

// What one instance is built from: a D1 sample (or the D2 sample plus its
// base), and for PairQA the pool to draw a same-family negative from.
struct InstanceSources {
    const D1Sample* sample = nullptr;
    const D2Sample* enhancement = nullptr;
    const TaskPool* pool = nullptr;
};

// Throws ConstructionError naming the missing payload.
TaskInstance build_instance(TaskKind kind, const InstanceSources& sources, Rng& rng,
                            const TaskOptions& opts = {});

struct MixReport {
    std::map<TaskKind, std::size_t> counts;
    std::vector<TaskKind> excluded;
    std::vector<std::string> warnings;
};

// n instances, kind uniform over the kinds whose backing corpus is present,
// sample uniform within the kind. Deterministic under seed.
MixReport sample_mix(const TaskPool& pool, std::size_t n, std::uint64_t seed,
                     const std::function<void(const TaskInstance&)>& sink,
                     const TaskOptions& opts = {});

nlohmann::json to_json(const TaskInstance& instance);

}  // namespace diagsynth
