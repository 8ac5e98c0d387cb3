#pragma once

#include <functional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "mawarith/bm25.hpp"

namespace mawarith {

struct RrfParams {
    double alpha = 0.7;  // dense weight
    double beta = 0.3;   // bm25 weight
    double k = 60.0;
};

struct FusedCandidate {
    std::string doc_id;
    double rrf_score = 0.0;
};

/// alpha / (k + r_dense) + beta / (k + r_bm25); a channel that misses the
/// document contributes nothing. Sorted by score descending, then doc id.
std::vector<FusedCandidate> rrf_fuse(const RankedList& dense, const RankedList& bm25, const RrfParams& p = {});

class Reranker {
public:
    virtual ~Reranker() = default;
    virtual double score(std::string_view query, std::string_view doc_text) const = 0;
    /// Scores a prepared query against many documents; override to reuse query-side work.
    virtual std::function<double(std::string_view)> prepare(std::string_view query) const {
        return [this, q = std::string(query)](std::string_view doc) { return score(q, doc); };
    }
};

/// Weighted Jaccard overlap of analyzed word 1..3-gram sets, in [0, 1].
///
/// Unfitted, every feature weighs 1. After fit(), a feature weighs its
/// BM25-style idf over the fitted texts, so boilerplate shared by every
/// document counts for little. Only the first line of the query and of the
/// document is read, which for a Q&A rendering is the question.
class TokenOverlapReranker final : public Reranker {
public:
    explicit TokenOverlapReranker(int max_n = 3) : max_n_(max_n) {}

    void fit(const std::vector<std::string_view>& texts);
    double score(std::string_view query, std::string_view doc_text) const override;
    std::function<double(std::string_view)> prepare(std::string_view query) const override;

private:
    double overlap(const std::vector<std::string>& q, std::string_view doc_text) const;
    double weight(const std::string& feature) const;

    int max_n_;
    std::size_t fitted_docs_ = 0;
    std::unordered_map<std::string, std::uint32_t> df_;
};

struct FusedHit {
    std::string doc_id;
    double rrf_score = 0.0;
    double rerank_score = 0.0;
    std::size_t rank = 0;  // 1-based final position
};

/// Scores each candidate, then keeps the top k by rerank score, ties broken
/// by rrf_score and then doc id. A candidate whose scoring throws is dropped
/// and a message is appended to `diagnostics` when given.
std::vector<FusedHit> rerank(std::string_view query, const std::vector<FusedCandidate>& candidates,
                             const std::function<std::string_view(const std::string&)>& text_of, const Reranker& scorer,
                             std::size_t k, std::vector<std::string>* diagnostics = nullptr);

}  // namespace mawarith
