#include "mawarith/ablation.hpp"

#include <cstdio>

#include "mawarith/fusion.hpp"

namespace mawarith {

namespace {

AblationSourceReport score_slice(std::string source, const std::vector<Document>& docs,
                                 std::span<const AblationQuestion> questions, const Embedder& embedder,
                                 const RetrievalConfig& retrieval, const AblationConfig& config) {
    AblationSourceReport rep;
    rep.source = std::move(source);
    rep.documents = docs.size();
    for (QualityBin b : {QualityBin::excellent, QualityBin::good, QualityBin::fair, QualityBin::poor}) rep.bins[b] = 0;

    const HybridIndex index = HybridIndex::build(docs, embedder);
    const auto texts = index.texts();
    TokenOverlapReranker reranker;
    reranker.fit(texts);
    TfidfModel tfidf;
    tfidf.fit(texts);
    const Retriever retriever(index, embedder, reranker, retrieval);

    for (const AblationQuestion& q : questions) {
        std::vector<std::string_view> contexts;
        if (index.size() > 0) {
            for (const FusedHit& h : retriever.retrieve(q.question)) contexts.push_back(index.text(h.doc_id));
        }
        const AblationRow row = ablation_metrics(q.question, contexts, embedder, tfidf, config);
        rep.mean_sem += row.s_sem;
        rep.mean_kw += row.s_kw;
        rep.mean_tfidf += row.s_tfidf;
        rep.mean_comb += row.s_comb;
        rep.success_rate += row.success ? 1.0 : 0.0;
        ++rep.bins[row.bin];
        rep.rows.emplace_back(q.id, row);
    }
    if (!questions.empty()) {
        const double n = static_cast<double>(questions.size());
        rep.mean_sem /= n;
        rep.mean_kw /= n;
        rep.mean_tfidf /= n;
        rep.mean_comb /= n;
        rep.success_rate /= n;
    }
    return rep;
}

}  // namespace

AblationReport run_ablation(const std::vector<Document>& corpus, std::span<const AblationQuestion> questions,
                            const Embedder& embedder, const RetrievalConfig& retrieval, const AblationConfig& config) {
    std::map<SourceTag, std::vector<Document>> by_tag;
    for (const Document& d : corpus) by_tag[d.source_tag].push_back(d);
    AblationReport report;
    for (const auto& [tag, docs] : by_tag) {
        report.sources.push_back(score_slice(std::string(to_string(tag)), docs, questions, embedder, retrieval, config));
    }
    report.sources.push_back(score_slice("all", corpus, questions, embedder, retrieval, config));
    return report;
}

ordered_json to_json(const AblationReport& report) {
    ordered_json out = ordered_json::array();
    for (const AblationSourceReport& s : report.sources) {
        ordered_json j;
        j["source"] = s.source;
        j["documents"] = s.documents;
        j["questions"] = s.rows.size();
        j["mean_sem"] = s.mean_sem;
        j["mean_kw"] = s.mean_kw;
        j["mean_tfidf"] = s.mean_tfidf;
        j["mean_comb"] = s.mean_comb;
        j["success_rate"] = s.success_rate;
        ordered_json bins;
        for (const auto& [b, n] : s.bins) bins[std::string(to_string(b))] = n;
        j["bins"] = bins;
        ordered_json rows = ordered_json::array();
        for (const auto& [id, r] : s.rows) {
            rows.push_back({{"id", id},
                            {"s_sem", r.s_sem},
                            {"s_kw", r.s_kw},
                            {"s_tfidf", r.s_tfidf},
                            {"s_comb", r.s_comb},
                            {"success", r.success},
                            {"bin", to_string(r.bin)}});
        }
        j["rows"] = rows;
        out.push_back(std::move(j));
    }
    return {{"sources", out}};
}

std::string summary_table(const AblationReport& report) {
    std::string out = "source       docs  questions  s_sem  s_kw   s_tfidf  s_comb  success  exc/good/fair/poor\n";
    char buf[256];
    for (const AblationSourceReport& s : report.sources) {
        std::snprintf(buf, sizeof buf, "%-10s %6zu %10zu  %.3f  %.3f  %.3f    %.3f   %5.1f%%   %zu/%zu/%zu/%zu\n",
                      s.source.c_str(), s.documents, s.rows.size(), s.mean_sem, s.mean_kw, s.mean_tfidf, s.mean_comb,
                      100.0 * s.success_rate, s.bins.at(QualityBin::excellent), s.bins.at(QualityBin::good),
                      s.bins.at(QualityBin::fair), s.bins.at(QualityBin::poor));
        out += buf;
    }
    return out;
}

}  // namespace mawarith
