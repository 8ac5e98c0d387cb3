#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "mawarith/bm25.hpp"
#include "mawarith/dense.hpp"
#include "mawarith/document.hpp"
#include "mawarith/fusion.hpp"

namespace mawarith {

struct RetrievalConfig {
    Bm25Params bm25;
    RrfParams rrf;
    std::size_t dense_depth = 100;
    std::size_t bm25_depth = 100;
    std::size_t k = 3;
};

/// Lexical and dense structures over one set of texts. Immutable once built.
class HybridIndex {
public:
    static HybridIndex build(const std::vector<std::pair<std::string, std::string>>& docs, const Embedder& embedder);
    /// Indexes the qa_text view.
    static HybridIndex build(const std::vector<Document>& docs, const Embedder& embedder);

    std::size_t size() const noexcept { return ids_.size(); }
    const InvertedIndex& lexical() const noexcept { return lexical_; }
    const DenseStore& dense() const noexcept { return dense_; }
    const std::string& embedder_name() const noexcept { return embedder_name_; }
    const std::vector<std::string>& ids() const noexcept { return ids_; }
    /// Throws LookupError for an unknown id.
    std::string_view text(const std::string& doc_id) const;
    /// All texts in insertion order.
    std::vector<std::string_view> texts() const;

    /// Binary layout: "MAWRIDX" magic, a format version byte, then the embedder
    /// name, documents (id, text, vector) and sorted postings, little-endian.
    void save(const std::filesystem::path& path) const;
    static HybridIndex load(const std::filesystem::path& path);

    static constexpr std::uint8_t kFormatVersion = 1;

private:
    std::vector<std::string> ids_;
    std::unordered_map<std::string, std::string> texts_;
    InvertedIndex lexical_;
    DenseStore dense_;
    std::string embedder_name_;
};

class Retriever {
public:
    /// Throws ConfigError when the embedder does not match the one the index was built with.
    Retriever(const HybridIndex& index, const Embedder& embedder, const Reranker& reranker, RetrievalConfig config = {});

    RankedList dense_channel(std::string_view query) const;
    RankedList bm25_channel(std::string_view query) const;

    /// analyze -> both channels -> RRF -> rerank -> top k (config.k when unset).
    /// Throws LookupError on an empty index.
    std::vector<FusedHit> retrieve(std::string_view query, std::optional<std::size_t> k = std::nullopt,
                                   std::vector<std::string>* diagnostics = nullptr) const;

    const RetrievalConfig& config() const noexcept { return config_; }
    const HybridIndex& index() const noexcept { return index_; }

private:
    const HybridIndex& index_;
    const Embedder& embedder_;
    const Reranker& reranker_;
    RetrievalConfig config_;
};

}  // namespace mawarith
