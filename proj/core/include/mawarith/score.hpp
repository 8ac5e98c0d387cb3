#pragma once

#include <map>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "mawarith/dense.hpp"
#include "mawarith/document.hpp"
#include "mawarith/frac.hpp"
#include "mawarith/prediction.hpp"

namespace mawarith {

/// Stage weights, held exactly so that they sum to 1 without rounding.
struct MireWeights {
    Frac heirs{3, 10};
    Frac blocked{2, 10};
    Frac shares{2, 10};
    Frac awl{1, 10};
    Frac final_distribution{2, 10};

    Frac sum() const { return heirs + blocked + shares + awl + final_distribution; }
};

struct ScoreConfig {
    MireWeights weights;
    Frac fraction_epsilon{1, 100};  // shares and bases
    Frac percent_epsilon{1, 2};     // per-head percentage points

    /// Throws ConfigError unless the weights are non-negative and sum to exactly 1.
    void validate() const;
};

/// Per-stage scores in [0, 1], exact.
struct StageScores {
    Frac heirs;
    Frac blocked;
    Frac shares;
    Frac awl;
    Frac final_distribution;
    std::vector<std::string> diagnostics;
};

/// 2|G ∩ P| / (|G| + |P|); two empty sets agree perfectly.
template <typename T>
Frac score_set_exact(const std::set<T>& gold, const std::set<T>& pred) {
    if (gold.empty() && pred.empty()) return Frac(1);
    std::size_t common = 0;
    for (const T& g : gold) common += pred.count(g);
    return Frac(static_cast<std::int64_t>(2 * common), static_cast<std::int64_t>(gold.size() + pred.size()));
}

template <typename T>
double score_set(const std::set<T>& gold, const std::set<T>& pred) {
    return score_set_exact(gold, pred).to_double();
}

using Scalar = std::variant<Number, std::string>;

/// 1 when numeric values lie within epsilon (inclusive) or labels are equal,
/// else 0. A numeric value against a label scores 0 and explains why in
/// `diagnostic`.
int score_value(const Scalar& gold, const Scalar& pred, const Frac& epsilon, std::string* diagnostic = nullptr);

/// Weighted sum of the stage scores.
Frac weighted_score(const StageScores& s, const MireWeights& w = {});

/// Stage scores of one prediction. heirs and blocked use score_set over heir
/// kinds; shares and final distribution average a per-heir score_value over
/// the union of gold and predicted heirs; the adjustment stage averages the
/// label match and the adjusted-base match. A null prediction scores 0.
StageScores score_case(const SolvedCase& gold, const Prediction* pred, const ScoreConfig& config = {});

struct GoldCase {
    std::string id;
    SolvedCase solved;
    Category category = Category::simple;
};

struct CaseScore {
    std::string id;
    Category category = Category::simple;
    StageScores stages;
    Frac score;
    bool missing = false;
};

struct MireReport {
    std::vector<CaseScore> cases;  // gold order
    double mean = 0.0;
    std::size_t missing = 0;
    std::map<Category, double> per_category;
    std::map<Category, std::size_t> category_counts;
    std::vector<std::string> unmatched_predictions;  // prediction ids absent from gold
};

/// Aligns predictions to gold by id. Missing predictions score 0 and are
/// counted. Throws InputError on duplicate gold or prediction ids.
MireReport score_run(std::span<const GoldCase> gold, std::span<const Prediction> preds, const ScoreConfig& config = {});

ordered_json to_json(const MireReport& report);
/// Fixed-width text table: run mean, missing count, per-category and per-stage means.
std::string summary_table(const MireReport& report);

// ---------------------------------------------------------------------------
// Retrieval quality for the knowledge-source ablation.

enum class QualityBin : std::uint8_t { excellent, good, fair, poor };
std::string_view to_string(QualityBin b) noexcept;

struct AblationConfig {
    double w_sem = 0.5;
    double w_kw = 0.3;
    double w_tfidf = 0.2;
    double success_threshold = 0.5;
    double excellent = 0.75;
    double good = 0.60;
    double fair = 0.40;
};

struct AblationRow {
    double s_sem = 0.0;
    double s_kw = 0.0;
    double s_tfidf = 0.0;
    double s_comb = 0.0;
    bool success = false;
    QualityBin bin = QualityBin::poor;
};

/// Fills s_comb, success and bin from the three component scores.
AblationRow make_ablation_row(double s_sem, double s_kw, double s_tfidf, const AblationConfig& config = {});
QualityBin quality_bin(double s_comb, const AblationConfig& config = {});

/// Smoothed tf-idf over analyzed tokens: idf = ln((1 + N) / (1 + df)) + 1.
class TfidfModel {
public:
    void fit(std::span<const std::string_view> texts);
    std::map<std::string, double> vector(std::string_view text) const;
    /// Cosine of the two tf-idf vectors, clamped to [0, 1].
    double similarity(std::string_view a, std::string_view b) const;
    std::size_t documents() const noexcept { return docs_; }

private:
    std::size_t docs_ = 0;
    std::map<std::string, std::uint32_t> df_;
};

/// Means over the contexts: s_sem of embedding cosines (negatives clamped to
/// 0), s_kw of Jaccard overlaps of analyzed token sets, s_tfidf of tf-idf
/// cosines. No contexts gives an all-zero row.
AblationRow ablation_metrics(std::string_view question, std::span<const std::string_view> contexts,
                             const Embedder& embedder, const TfidfModel& tfidf, const AblationConfig& config = {});

}  // namespace mawarith
