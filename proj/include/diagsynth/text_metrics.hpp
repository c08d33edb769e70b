#pragma once

#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace diagsynth {

struct RougeL {
    double precision = 0.0;
    double recall = 0.0;
    double f1 = 0.0;
};

// Whitespace split, then every ASCII punctuation character becomes its own token.
std::vector<std::string> bleu_tokenize(std::string_view text);

// BLEU-4, uniform weights, brevity penalty. An order with zero matched
// n-grams uses (0 + 1) / (total + 1). Empty prediction or reference -> 0.
double bleu(std::string_view predicted, std::string_view reference);
// Corpus BLEU: n-gram statistics and lengths summed over all pairs first.
double corpus_bleu(const std::vector<std::pair<std::string, std::string>>& pairs);

// Character n-gram F-score, n = 1..6, beta = 2, whitespace removed; precision
// and recall are averaged over the orders both sides have n-grams for.
// Range [0, 100].
double chrf(std::string_view predicted, std::string_view reference);

// LCS over whitespace tokens.
RougeL rouge_l(std::string_view predicted, std::string_view reference);

}  // namespace diagsynth
