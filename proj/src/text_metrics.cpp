#include "diagsynth/text_metrics.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <cmath>
#include <map>
#include <sstream>

namespace diagsynth {

namespace {

constexpr int kBleuOrder = 4;
constexpr int kChrfOrder = 6;
constexpr double kChrfBeta = 2.0;

std::vector<std::string> split_ws(std::string_view text) {
    std::vector<std::string> out;
    std::istringstream in{std::string(text)};
    for (std::string tok; in >> tok;) out.push_back(std::move(tok));
    return out;
}

template <typename Seq>
std::map<Seq, int> ngram_counts(const std::vector<typename Seq::value_type>& items, int n) {
    std::map<Seq, int> counts;
    for (std::size_t i = 0; i + static_cast<std::size_t>(n) <= items.size(); ++i)
        ++counts[Seq(items.begin() + static_cast<std::ptrdiff_t>(i), items.begin() + static_cast<std::ptrdiff_t>(i + n))];
    return counts;
}

template <typename Seq>
int clipped_matches(const std::map<Seq, int>& pred, const std::map<Seq, int>& ref) {
    int m = 0;
    for (const auto& [gram, c] : pred) {
        const auto it = ref.find(gram);
        if (it != ref.end()) m += std::min(c, it->second);
    }
    return m;
}

struct BleuStats {
    std::array<long, kBleuOrder> matched{};
    std::array<long, kBleuOrder> total{};
    long pred_len = 0;
    long ref_len = 0;

    void add(std::string_view predicted, std::string_view reference) {
        const auto p = bleu_tokenize(predicted);
        const auto r = bleu_tokenize(reference);
        pred_len += static_cast<long>(p.size());
        ref_len += static_cast<long>(r.size());
        for (int n = 1; n <= kBleuOrder; ++n) {
            using Gram = std::vector<std::string>;
            matched[n - 1] += clipped_matches(ngram_counts<Gram>(p, n), ngram_counts<Gram>(r, n));
            total[n - 1] += std::max<long>(0, static_cast<long>(p.size()) - n + 1);
        }
    }

    double score() const {
        if (pred_len == 0 || ref_len == 0) return 0.0;
        double log_sum = 0.0;
        for (int n = 0; n < kBleuOrder; ++n) {
            const double p = matched[n] > 0 ? static_cast<double>(matched[n]) / total[n] : 1.0 / (total[n] + 1.0);
            log_sum += std::log(p) / kBleuOrder;
        }
        const double bp = pred_len >= ref_len ? 1.0 : std::exp(1.0 - static_cast<double>(ref_len) / pred_len);
        return bp * std::exp(log_sum);
    }
};

std::vector<char> strip_ws(std::string_view text) {
    std::vector<char> out;
    for (char c : text)
        if (!std::isspace(static_cast<unsigned char>(c))) out.push_back(c);
    return out;
}

}  // namespace

std::vector<std::string> bleu_tokenize(std::string_view text) {
    std::vector<std::string> out;
    for (const auto& word : split_ws(text)) {
        std::string run;
        for (char c : word) {
            if (std::ispunct(static_cast<unsigned char>(c))) {
                if (!run.empty()) out.push_back(std::move(run));
                run.clear();
                out.emplace_back(1, c);
            } else {
                run.push_back(c);
            }
        }
        if (!run.empty()) out.push_back(std::move(run));
    }
    return out;
}

double bleu(std::string_view predicted, std::string_view reference) {
    BleuStats s;
    s.add(predicted, reference);
    return s.score();
}

double corpus_bleu(const std::vector<std::pair<std::string, std::string>>& pairs) {
    BleuStats s;
    for (const auto& [p, r] : pairs) s.add(p, r);
    return s.score();
}

double chrf(std::string_view predicted, std::string_view reference) {
    const auto p = strip_ws(predicted);
    const auto r = strip_ws(reference);
    double prec = 0.0, rec = 0.0;
    int orders = 0;
    for (int n = 1; n <= kChrfOrder; ++n) {
        const long pt = static_cast<long>(p.size()) - n + 1;
        const long rt = static_cast<long>(r.size()) - n + 1;
        if (pt <= 0 || rt <= 0) continue;
        const int m = clipped_matches(ngram_counts<std::string>(p, n), ngram_counts<std::string>(r, n));
        prec += static_cast<double>(m) / pt;
        rec += static_cast<double>(m) / rt;
        ++orders;
    }
    if (orders == 0) return 0.0;
    prec /= orders;
    rec /= orders;
    const double b2 = kChrfBeta * kChrfBeta;
    if (prec + rec <= 0.0) return 0.0;
    return 100.0 * (1 + b2) * prec * rec / (b2 * prec + rec);
}

RougeL rouge_l(std::string_view predicted, std::string_view reference) {
    const auto p = split_ws(predicted);
    const auto r = split_ws(reference);
    if (p.empty() || r.empty()) return {};
    std::vector<int> prev(r.size() + 1, 0), cur(r.size() + 1, 0);
    for (const auto& tok : p) {
        for (std::size_t j = 1; j <= r.size(); ++j)
            cur[j] = tok == r[j - 1] ? prev[j - 1] + 1 : std::max(prev[j], cur[j - 1]);
        std::swap(prev, cur);
    }
    const double lcs = prev[r.size()];
    RougeL out;
    out.precision = lcs / p.size();
    out.recall = lcs / r.size();
    out.f1 = lcs > 0 ? 2 * out.precision * out.recall / (out.precision + out.recall) : 0.0;
    return out;
}

}  // namespace diagsynth
