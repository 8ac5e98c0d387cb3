#pragma once

#include <map>
#include <span>
#include <string>
#include <vector>

#include "mawarith/document.hpp"
#include "mawarith/retriever.hpp"
#include "mawarith/score.hpp"

namespace mawarith {

struct AblationQuestion {
    std::string id;
    std::string question;
};

struct AblationSourceReport {
    std::string source;  // a source tag, or "all"
    std::size_t documents = 0;
    std::vector<std::pair<std::string, AblationRow>> rows;  // question id, row
    double mean_sem = 0.0;
    double mean_kw = 0.0;
    double mean_tfidf = 0.0;
    double mean_comb = 0.0;
    double success_rate = 0.0;
    std::map<QualityBin, std::size_t> bins;  // every bin present, possibly 0
};

struct AblationReport {
    std::vector<AblationSourceReport> sources;  // tags in enum order, then "all"
};

/// For each source tag present in the corpus and for the whole corpus: builds
/// an index over that slice, retrieves the top K per question and scores the
/// contexts against the question. Deterministic for equal inputs.
AblationReport run_ablation(const std::vector<Document>& corpus, std::span<const AblationQuestion> questions,
                            const Embedder& embedder, const RetrievalConfig& retrieval = {},
                            const AblationConfig& config = {});

ordered_json to_json(const AblationReport& report);
std::string summary_table(const AblationReport& report);

}  // namespace mawarith
