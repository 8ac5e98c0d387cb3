#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace mawarith {

enum class Channel : std::uint8_t { dense, bm25 };

struct RankedEntry {
    std::string doc_id;
    double score = 0.0;
    std::size_t rank = 0;  // 1-based
};

/// One channel's ranking: scores non-increasing, ranks 1..n. Equal scores are ordered by doc id.
struct RankedList {
    Channel channel = Channel::bm25;
    std::vector<RankedEntry> entries;
};

struct Bm25Params {
    double k1 = 1.2;
    double b = 0.75;
};

/// ln((N - df + 0.5) / (df + 0.5) + 1); never negative.
double bm25_idf(std::size_t n_docs, std::size_t df);

/// Contribution of one query term: idf * tf (k1 + 1) / (tf + k1 (1 - b + b |d| / avgdl)).
double bm25_term(double idf, double tf, double doc_len, double avgdl, const Bm25Params& p = {});

struct Posting {
    std::uint32_t doc;  // internal document number, insertion order
    std::uint32_t tf;
};

class InvertedIndex {
public:
    /// Appends a document. Throws InputError on a repeated id.
    void add(std::string doc_id, const std::vector<std::string>& tokens);

    std::size_t size() const noexcept { return ids_.size(); }
    double avgdl() const noexcept;
    std::size_t df(std::string_view term) const;
    std::uint32_t doc_length(std::string_view doc_id) const;
    const std::string& doc_id(std::uint32_t doc) const { return ids_.at(doc); }
    std::uint32_t doc_number(std::string_view doc_id) const;

    /// BM25 of the query tokens (duplicates count once per occurrence) against one document.
    /// Throws LookupError for an unknown id.
    double score(const std::vector<std::string>& query, std::string_view doc_id, const Bm25Params& p = {}) const;

    /// The `depth` best-scoring documents with a positive score.
    RankedList search(const std::vector<std::string>& query, std::size_t depth, const Bm25Params& p = {}) const;

    const std::unordered_map<std::string, std::vector<Posting>>& postings() const noexcept { return postings_; }
    const std::vector<std::uint32_t>& lengths() const noexcept { return lengths_; }

    /// Rebuilds from persisted parts. Postings must be sorted by doc number.
    static InvertedIndex from_parts(std::vector<std::string> ids, std::vector<std::uint32_t> lengths,
                                    std::unordered_map<std::string, std::vector<Posting>> postings);

private:
    std::vector<std::string> ids_;
    std::unordered_map<std::string, std::uint32_t> number_;
    std::vector<std::uint32_t> lengths_;
    std::uint64_t total_length_ = 0;
    std::unordered_map<std::string, std::vector<Posting>> postings_;
};

/// Sorts (doc id, score) pairs into a ranked list: score descending, then doc id.
RankedList make_ranked_list(Channel channel, std::vector<std::pair<std::string, double>> scored, std::size_t depth);

}  // namespace mawarith
