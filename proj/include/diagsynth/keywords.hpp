#pragma once

#include <cstddef>
#include <filesystem>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "diagsynth/rng.hpp"

namespace diagsynth {

inline constexpr std::size_t kMinPhrasesPerDiscipline = 30;

/// Discipline-specific phrase lists that populate diagram content.
///
/// Phrases are sanitised when the bank is built: Mermaid delimiters are
/// stripped, whitespace is collapsed and duplicates (after lowercase and
/// whitespace normalisation) are dropped, keeping the first occurrence. A
/// discipline left with fewer than kMinPhrasesPerDiscipline phrases is a
/// ConfigError. Banks are immutable once constructed.
class KeywordBank {
public:
    KeywordBank() = default;

    static KeywordBank from_json(std::string_view text);
    static KeywordBank load(const std::filesystem::path& path);
    static const KeywordBank& builtin();

    bool empty() const noexcept { return ids_.empty(); }
    const std::vector<std::string>& disciplines() const noexcept { return ids_; }
    const std::vector<std::string>& phrases(std::string_view discipline) const;
    std::size_t smallest_discipline() const noexcept;

private:
    std::vector<std::string> ids_;
    std::map<std::string, std::vector<std::string>, std::less<>> phrases_;
};

// Removes reserved characters ("[]{}():;|#%<>`,& and newlines, plus "-->"),
// collapses whitespace and trims. May return an empty string.
std::string sanitize_phrase(std::string_view raw);

// Lowercase + whitespace-collapsed form used for the uniqueness invariant.
std::string normalize_phrase(std::string_view phrase);

std::string sample_discipline(const KeywordBank& bank, Rng& rng);

// n distinct phrases drawn uniformly without replacement, in draw order.
// Throws CapacityError when n exceeds the discipline's phrase count.
std::vector<std::string> sample_keywords(const KeywordBank& bank, std::string_view discipline,
                                         std::size_t n, Rng& rng);

}  // namespace diagsynth
