#pragma once

#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <unordered_set>
#include <vector>

#include "mawarith/bm25.hpp"

namespace mawarith {

/// Maps text to a unit vector (or the zero vector when the text has no features).
class Embedder {
public:
    virtual ~Embedder() = default;
    virtual std::vector<float> embed(std::string_view text) const = 0;
    virtual std::size_t dim() const = 0;
    /// Identifies the embedding space; persisted with the index.
    virtual std::string name() const = 0;
};

/// Signed feature hashing of character n-grams over the normalized text, L2-normalized.
class HashedNgramEmbedder final : public Embedder {
public:
    explicit HashedNgramEmbedder(std::size_t dim = 1024, int min_n = 3, int max_n = 5);
    std::vector<float> embed(std::string_view text) const override;
    std::size_t dim() const override { return dim_; }
    std::string name() const override;

private:
    std::size_t dim_;
    int min_n_;
    int max_n_;
};

double cosine(const std::vector<float>& a, const std::vector<float>& b);

/// Exact-scan vector store. Every stored vector has unit norm.
class DenseStore {
public:
    explicit DenseStore(std::size_t dim = 0) : dim_(dim) {}

    /// Throws InputError on a dimension mismatch, a non-unit vector or a repeated id.
    void add(std::string doc_id, std::vector<float> vec);

    std::size_t size() const noexcept { return ids_.size(); }
    std::size_t dim() const noexcept { return dim_; }
    const std::string& doc_id(std::size_t i) const { return ids_.at(i); }
    std::span<const float> vector(std::size_t i) const;

    RankedList search(const std::vector<float>& query, std::size_t depth) const;

private:
    std::size_t dim_;
    std::vector<std::string> ids_;
    std::vector<float> data_;  // row-major, size() x dim()
    std::unordered_set<std::string> known_;
};

}  // namespace mawarith
