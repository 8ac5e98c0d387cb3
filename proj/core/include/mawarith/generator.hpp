#pragma once

#include <algorithm>
#include <cstdint>
#include <functional>
#include <map>
#include <random>
#include <string>
#include <vector>

#include "mawarith/document.hpp"
#include "mawarith/render.hpp"

namespace mawarith {

enum class Difficulty : std::uint8_t { simple, moderate, complex, very_complex };

std::string_view to_string(Difficulty d) noexcept;
std::optional<Difficulty> difficulty_from_string(std::string_view s) noexcept;

/// Weights of the 0-10 difficulty score. The defaults reach exactly 10 at the caps.
struct DifficultyWeights {
    double per_kind = 1.0;
    int kind_cap = 5;
    double per_blocked = 1.0;
    int blocked_cap = 2;
    double awl = 2.0;
    double radd = 2.0;
    double tashih = 1.0;  // base had to be scaled for head counts
};

double difficulty_score(const SolvedCase& solved, const DifficultyWeights& w = {});

struct GenSpec {
    std::size_t target_count = 1000;
    std::map<Category, double> category_targets;
    std::map<Difficulty, double> difficulty_mix;
    std::uint64_t seed = 0;
    std::string profile_id = "majority-sunni";
    int max_heads = 12;                 // upper bound for multi-head kinds other than wives
    std::size_t max_attempts = 4000;    // per document and regime before relaxing the regime
    double estate_rate = 0.5;
    DifficultyWeights weights;

    /// Throws InputError when the proportions do not sum to 1 or the count is zero.
    void validate() const;
};

/// Train-split category mix (5531/288/81 of 5900) and the dev difficulty buckets (61/67/33/39 of 200).
GenSpec default_gen_spec();

/// Dev-split category mix (125/4/71 of 200).
std::map<Category, double> dev_category_mix();

/// Largest-remainder apportionment of `total` over the proportions. Ties go to the smaller key.
template <class K>
std::map<K, std::size_t> apportion(const std::map<K, double>& proportions, std::size_t total) {
    std::map<K, std::size_t> out;
    std::vector<std::pair<double, K>> remainders;
    std::size_t assigned = 0;
    for (const auto& [k, p] : proportions) {
        const double exact = p * static_cast<double>(total);
        const auto whole = static_cast<std::size_t>(exact);
        out[k] = whole;
        assigned += whole;
        remainders.emplace_back(exact - static_cast<double>(whole), k);
    }
    std::stable_sort(remainders.begin(), remainders.end(),
                     [](const auto& a, const auto& b) { return a.first > b.first; });
    for (std::size_t i = 0; assigned < total && !remainders.empty(); ++i, ++assigned) {
        ++out[remainders[i % remainders.size()].second];
    }
    return out;
}

/// Samples one configuration steered toward `target` with a heir-kind count set by `regime`.
CaseInput sample_config(const GenSpec& spec, Category target, Difficulty regime, std::mt19937_64& rng);

/// Draws target category and regime from the spec's proportions, then samples.
CaseInput sample_config(const GenSpec& spec, std::mt19937_64& rng);

/// Emits exactly spec.target_count documents with distinct fingerprints and
/// exact per-category quotas. Throws CapacityError naming the category that
/// ran out of unique cases.
void generate_corpus(const GenSpec& spec, const std::function<void(Document&&)>& sink);
std::vector<Document> generate_corpus(const GenSpec& spec);

/// A held-out question about an indexed case, phrased with the query templates.
struct QueryItem {
    std::string id;
    std::string question;
    std::string doc_id;
    Category category = Category::simple;
};

/// Picks n documents per the category mix and phrases each as a query.
/// Throws CapacityError when the corpus lacks enough documents of a category.
std::vector<QueryItem> make_query_split(const std::vector<Document>& corpus, std::size_t n,
                                        const std::map<Category, double>& mix, std::uint64_t seed,
                                        const TemplateBank& bank = default_templates());

}  // namespace mawarith
