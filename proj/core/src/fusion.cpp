#include "mawarith/fusion.hpp"

#include <algorithm>
#include <unordered_map>

#include "mawarith/text.hpp"

namespace mawarith {

namespace {

std::string_view first_line(std::string_view text) { return text.substr(0, text.find('\n')); }

std::vector<std::string> features(std::string_view text, int max_n) {
    const std::vector<std::string> toks = analyze_ar(first_line(text));
    std::vector<std::string> out;
    for (std::size_t i = 0; i < toks.size(); ++i) {
        std::string gram = toks[i];
        out.push_back(gram);
        for (std::size_t j = i + 1; j < toks.size() && j < i + static_cast<std::size_t>(max_n); ++j) {
            gram += ' ';
            gram += toks[j];
            out.push_back(gram);
        }
    }
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

}  // namespace

std::vector<FusedCandidate> rrf_fuse(const RankedList& dense, const RankedList& bm25, const RrfParams& p) {
    std::unordered_map<std::string, double> score;
    for (const RankedEntry& e : dense.entries) score[e.doc_id] += p.alpha / (p.k + static_cast<double>(e.rank));
    for (const RankedEntry& e : bm25.entries) score[e.doc_id] += p.beta / (p.k + static_cast<double>(e.rank));
    std::vector<FusedCandidate> out;
    out.reserve(score.size());
    for (auto& [id, s] : score) out.push_back({id, s});
    std::sort(out.begin(), out.end(), [](const FusedCandidate& a, const FusedCandidate& b) {
        return a.rrf_score != b.rrf_score ? a.rrf_score > b.rrf_score : a.doc_id < b.doc_id;
    });
    return out;
}

void TokenOverlapReranker::fit(const std::vector<std::string_view>& texts) {
    df_.clear();
    fitted_docs_ = texts.size();
    for (std::string_view t : texts) {
        for (const std::string& f : features(t, max_n_)) ++df_[f];
    }
}

double TokenOverlapReranker::weight(const std::string& feature) const {
    if (fitted_docs_ == 0) return 1.0;
    auto it = df_.find(feature);
    return bm25_idf(fitted_docs_, it == df_.end() ? 0 : it->second);
}

// Both feature lists are sorted and unique, so one merge pass finds the intersection.
double TokenOverlapReranker::overlap(const std::vector<std::string>& q, std::string_view doc_text) const {
    const auto d = features(doc_text, max_n_);
    double common = 0.0;
    double all = 0.0;
    auto qi = q.begin();
    auto di = d.begin();
    while (qi != q.end() || di != d.end()) {
        if (di == d.end() || (qi != q.end() && *qi < *di)) {
            all += weight(*qi++);
        } else if (qi == q.end() || *di < *qi) {
            all += weight(*di++);
        } else {
            const double w = weight(*qi);
            common += w;
            all += w;
            ++qi;
            ++di;
        }
    }
    return all > 0.0 ? common / all : 0.0;
}

double TokenOverlapReranker::score(std::string_view query, std::string_view doc_text) const {
    return overlap(features(query, max_n_), doc_text);
}

std::function<double(std::string_view)> TokenOverlapReranker::prepare(std::string_view query) const {
    return [this, q = features(query, max_n_)](std::string_view doc) { return overlap(q, doc); };
}

std::vector<FusedHit> rerank(std::string_view query, const std::vector<FusedCandidate>& candidates,
                             const std::function<std::string_view(const std::string&)>& text_of, const Reranker& scorer,
                             std::size_t k, std::vector<std::string>* diagnostics) {
    std::vector<FusedHit> hits;
    hits.reserve(candidates.size());
    const auto score = scorer.prepare(query);
    for (const FusedCandidate& c : candidates) {
        try {
            hits.push_back({c.doc_id, c.rrf_score, score(text_of(c.doc_id)), 0});
        } catch (const std::exception& e) {
            if (diagnostics) diagnostics->push_back("reranker dropped " + c.doc_id + ": " + e.what());
        }
    }
    std::sort(hits.begin(), hits.end(), [](const FusedHit& a, const FusedHit& b) {
        if (a.rerank_score != b.rerank_score) return a.rerank_score > b.rerank_score;
        if (a.rrf_score != b.rrf_score) return a.rrf_score > b.rrf_score;
        return a.doc_id < b.doc_id;
    });
    if (hits.size() > k) hits.resize(k);
    for (std::size_t i = 0; i < hits.size(); ++i) hits[i].rank = i + 1;
    return hits;
}

}  // namespace mawarith
