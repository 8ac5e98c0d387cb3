#include "mawarith/dense.hpp"

#include <algorithm>
#include <cmath>

#include "mawarith/error.hpp"
#include "mawarith/text.hpp"

namespace mawarith {

namespace {

constexpr std::uint64_t kFnvOffset = 1469598103934665603ULL;
constexpr std::uint64_t kFnvPrime = 1099511628211ULL;

std::uint64_t fnv1a(const char32_t* data, std::size_t n, std::uint64_t seed) {
    std::uint64_t h = kFnvOffset ^ seed;
    for (std::size_t i = 0; i < n; ++i) {
        for (int shift = 0; shift < 32; shift += 8) {
            h ^= (static_cast<std::uint32_t>(data[i]) >> shift) & 0xFFu;
            h *= kFnvPrime;
        }
    }
    return h;
}

}  // namespace

HashedNgramEmbedder::HashedNgramEmbedder(std::size_t dim, int min_n, int max_n) : dim_(dim), min_n_(min_n), max_n_(max_n) {
    if (dim == 0 || min_n < 1 || max_n < min_n) throw ConfigError("invalid hashed n-gram embedder shape");
}

std::string HashedNgramEmbedder::name() const {
    return "hashed-char-ngram/" + std::to_string(dim_) + "/" + std::to_string(min_n_) + "-" + std::to_string(max_n_);
}

std::vector<float> HashedNgramEmbedder::embed(std::string_view text) const {
    // Tokens joined by single spaces, with a boundary space on each side.
    std::u32string s = U" ";
    for (const std::string& tok : analyze_ar(text)) {
        s += utf8_decode(tok);
        s += U' ';
    }
    std::vector<double> acc(dim_, 0.0);
    for (int n = min_n_; n <= max_n_; ++n) {
        const auto len = static_cast<std::size_t>(n);
        for (std::size_t i = 0; i + len <= s.size(); ++i) {
            const std::uint64_t h = fnv1a(s.data() + i, len, static_cast<std::uint64_t>(n));
            acc[h % dim_] += (h >> 63) ? -1.0 : 1.0;
        }
    }
    double norm = 0.0;
    for (double v : acc) norm += v * v;
    norm = std::sqrt(norm);
    std::vector<float> out(dim_, 0.0f);
    if (norm > 0.0) {
        for (std::size_t i = 0; i < dim_; ++i) out[i] = static_cast<float>(acc[i] / norm);
    }
    return out;
}

double cosine(const std::vector<float>& a, const std::vector<float>& b) {
    if (a.size() != b.size()) throw InputError("cosine of vectors with different dimensions");
    double dot = 0.0, na = 0.0, nb = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        dot += static_cast<double>(a[i]) * b[i];
        na += static_cast<double>(a[i]) * a[i];
        nb += static_cast<double>(b[i]) * b[i];
    }
    if (na == 0.0 || nb == 0.0) return 0.0;
    return dot / std::sqrt(na * nb);
}

void DenseStore::add(std::string doc_id, std::vector<float> vec) {
    if (dim_ == 0) dim_ = vec.size();
    if (vec.size() != dim_) throw InputError("vector for '" + doc_id + "' has the wrong dimension");
    double norm = 0.0;
    for (float v : vec) norm += static_cast<double>(v) * v;
    if (std::abs(std::sqrt(norm) - 1.0) > 1e-6) throw InputError("vector for '" + doc_id + "' is not unit norm");
    if (!known_.insert(doc_id).second) throw InputError("duplicate document id '" + doc_id + "'");
    ids_.push_back(std::move(doc_id));
    data_.insert(data_.end(), vec.begin(), vec.end());
}

std::span<const float> DenseStore::vector(std::size_t i) const {
    if (i >= ids_.size()) throw LookupError("dense store row out of range");
    return {data_.data() + i * dim_, dim_};
}

RankedList DenseStore::search(const std::vector<float>& query, std::size_t depth) const {
    if (query.size() != dim_) throw InputError("query vector has the wrong dimension");
    double qnorm = 0.0;
    for (float v : query) qnorm += static_cast<double>(v) * v;
    qnorm = qnorm > 0.0 ? std::sqrt(qnorm) : 1.0;

    std::vector<std::pair<double, std::size_t>> scored(ids_.size());
    for (std::size_t i = 0; i < ids_.size(); ++i) {
        const float* v = data_.data() + i * dim_;
        // Eight independent lanes keep the loop pipelined; the order is fixed, so results are reproducible.
        float lane[8] = {};
        std::size_t j = 0;
        for (; j + 8 <= dim_; j += 8) {
            for (int l = 0; l < 8; ++l) lane[l] += query[j + l] * v[j + l];
        }
        double dot = 0.0;
        for (float x : lane) dot += x;
        for (; j < dim_; ++j) dot += static_cast<double>(query[j]) * v[j];
        scored[i] = {dot / qnorm, i};
    }
    const std::size_t n = std::min(depth, scored.size());
    std::partial_sort(scored.begin(), scored.begin() + static_cast<std::ptrdiff_t>(n), scored.end(),
                      [this](const auto& a, const auto& b) {
                          return a.first != b.first ? a.first > b.first : ids_[a.second] < ids_[b.second];
                      });
    RankedList out{Channel::dense, {}};
    out.entries.reserve(n);
    for (std::size_t i = 0; i < n; ++i) out.entries.push_back({ids_[scored[i].second], scored[i].first, i + 1});
    return out;
}

}  // namespace mawarith
