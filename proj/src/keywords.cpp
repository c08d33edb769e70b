#include "diagsynth/keywords.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <numeric>
#include <set>
#include <sstream>

#include <json.hpp>

#include "diagsynth/errors.hpp"
#include "embedded_data.hpp"

namespace diagsynth {

namespace {

constexpr std::string_view kReservedChars = "\"[]{}():;|#%<>`,&\r\n\t";

std::string collapse_whitespace(std::string_view text) {
    std::string out;
    out.reserve(text.size());
    bool pending_space = false;
    for (unsigned char c : text) {
        if (std::isspace(c)) {
            pending_space = !out.empty();
            continue;
        }
        if (pending_space) out.push_back(' ');
        pending_space = false;
        out.push_back(static_cast<char>(c));
    }
    return out;
}

}  // namespace

std::string sanitize_phrase(std::string_view raw) {
    std::string text(raw);
    for (std::size_t pos; (pos = text.find("-->")) != std::string::npos;) text.replace(pos, 3, " ");
    for (char& c : text) {
        if (kReservedChars.find(c) != std::string_view::npos) c = ' ';
    }
    return collapse_whitespace(text);
}

std::string normalize_phrase(std::string_view phrase) {
    std::string out = collapse_whitespace(phrase);
    std::transform(out.begin(), out.end(), out.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return out;
}

KeywordBank KeywordBank::from_json(std::string_view text) {
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw ConfigError(std::string("keyword bank is not valid JSON: ") + e.what());
    }
    if (!doc.is_object()) throw ConfigError("keyword bank must be a JSON object");

    KeywordBank bank;
    for (const auto& [discipline, list] : doc.items()) {
        if (!list.is_array()) throw ConfigError("discipline '" + discipline + "' must map to an array");
        std::vector<std::string> phrases;
        std::set<std::string> seen;
        for (const auto& item : list) {
            if (!item.is_string()) throw ConfigError("discipline '" + discipline + "' has a non-string phrase");
            std::string phrase = sanitize_phrase(item.get<std::string>());
            if (phrase.empty()) continue;
            // Member names are camel-cased, so uniqueness also ignores spacing.
            std::string key = normalize_phrase(phrase);
            key.erase(std::remove(key.begin(), key.end(), ' '), key.end());
            if (!seen.insert(key).second) continue;
            phrases.push_back(std::move(phrase));
        }
        if (phrases.size() < kMinPhrasesPerDiscipline) {
            throw ConfigError("discipline '" + discipline + "' has " + std::to_string(phrases.size()) +
                              " usable phrases; at least " + std::to_string(kMinPhrasesPerDiscipline) +
                              " are required");
        }
        bank.ids_.push_back(discipline);
        bank.phrases_.emplace(discipline, std::move(phrases));
    }
    if (bank.ids_.empty()) throw ConfigError("keyword bank has no disciplines");
    return bank;
}

KeywordBank KeywordBank::load(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError("cannot open keyword bank " + path.string());
    std::ostringstream buf;
    buf << in.rdbuf();
    return from_json(buf.str());
}

const KeywordBank& KeywordBank::builtin() {
    static const KeywordBank bank = from_json(embedded::keyword_bank_json());
    return bank;
}

const std::vector<std::string>& KeywordBank::phrases(std::string_view discipline) const {
    auto it = phrases_.find(discipline);
    if (it == phrases_.end()) throw ConfigError("unknown discipline '" + std::string(discipline) + "'");
    return it->second;
}

std::size_t KeywordBank::smallest_discipline() const noexcept {
    std::size_t smallest = 0;
    for (const auto& [id, list] : phrases_) {
        if (smallest == 0 || list.size() < smallest) smallest = list.size();
    }
    return smallest;
}

std::string sample_discipline(const KeywordBank& bank, Rng& rng) {
    if (bank.empty()) throw ConfigError("cannot sample from an empty keyword bank");
    return bank.disciplines()[uniform_index(rng, bank.disciplines().size())];
}

std::vector<std::string> sample_keywords(const KeywordBank& bank, std::string_view discipline,
                                         std::size_t n, Rng& rng) {
    const auto& pool = bank.phrases(discipline);
    if (n > pool.size()) {
        throw CapacityError("discipline '" + std::string(discipline) + "' holds " + std::to_string(pool.size()) +
                            " phrases; cannot draw n=" + std::to_string(n));
    }
    // Partial Fisher-Yates over an index permutation.
    std::vector<std::size_t> order(pool.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::vector<std::string> out;
    out.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
        std::size_t j = i + uniform_index(rng, pool.size() - i);
        std::swap(order[i], order[j]);
        out.push_back(pool[order[i]]);
    }
    return out;
}

}  // namespace diagsynth
