#include "mawarith/bm25.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "mawarith/error.hpp"

namespace mawarith {

double bm25_idf(std::size_t n_docs, std::size_t df) {
    const double n = static_cast<double>(n_docs);
    const double d = static_cast<double>(df);
    return std::log((n - d + 0.5) / (d + 0.5) + 1.0);
}

double bm25_term(double idf, double tf, double doc_len, double avgdl, const Bm25Params& p) {
    if (tf <= 0.0) return 0.0;
    const double norm = avgdl > 0.0 ? doc_len / avgdl : 1.0;
    return idf * tf * (p.k1 + 1.0) / (tf + p.k1 * (1.0 - p.b + p.b * norm));
}

void InvertedIndex::add(std::string doc_id, const std::vector<std::string>& tokens) {
    if (number_.contains(doc_id)) throw InputError("duplicate document id '" + doc_id + "'");
    const auto doc = static_cast<std::uint32_t>(ids_.size());
    std::map<std::string_view, std::uint32_t> tf;
    for (const std::string& t : tokens) ++tf[t];
    for (const auto& [term, n] : tf) postings_[std::string(term)].push_back({doc, n});
    number_.emplace(doc_id, doc);
    ids_.push_back(std::move(doc_id));
    lengths_.push_back(static_cast<std::uint32_t>(tokens.size()));
    total_length_ += tokens.size();
}

double InvertedIndex::avgdl() const noexcept {
    return ids_.empty() ? 0.0 : static_cast<double>(total_length_) / static_cast<double>(ids_.size());
}

std::size_t InvertedIndex::df(std::string_view term) const {
    auto it = postings_.find(std::string(term));
    return it == postings_.end() ? 0 : it->second.size();
}

std::uint32_t InvertedIndex::doc_number(std::string_view doc_id) const {
    auto it = number_.find(std::string(doc_id));
    if (it == number_.end()) throw LookupError("unknown document id '" + std::string(doc_id) + "'");
    return it->second;
}

std::uint32_t InvertedIndex::doc_length(std::string_view doc_id) const { return lengths_[doc_number(doc_id)]; }

double InvertedIndex::score(const std::vector<std::string>& query, std::string_view doc_id, const Bm25Params& p) const {
    const std::uint32_t doc = doc_number(doc_id);
    const double avg = avgdl();
    double total = 0.0;
    for (const std::string& t : query) {
        auto it = postings_.find(t);
        if (it == postings_.end()) continue;
        const auto& list = it->second;
        auto hit = std::lower_bound(list.begin(), list.end(), doc,
                                    [](const Posting& x, std::uint32_t d) { return x.doc < d; });
        if (hit == list.end() || hit->doc != doc) continue;
        total += bm25_term(bm25_idf(size(), list.size()), hit->tf, lengths_[doc], avg, p);
    }
    return total;
}

RankedList InvertedIndex::search(const std::vector<std::string>& query, std::size_t depth, const Bm25Params& p) const {
    std::vector<double> acc(ids_.size(), 0.0);
    std::vector<std::uint32_t> touched;
    const double avg = avgdl();
    for (const std::string& t : query) {
        auto it = postings_.find(t);
        if (it == postings_.end()) continue;
        const double idf = bm25_idf(size(), it->second.size());
        for (const Posting& post : it->second) {
            if (acc[post.doc] == 0.0) touched.push_back(post.doc);
            acc[post.doc] += bm25_term(idf, post.tf, lengths_[post.doc], avg, p);
        }
    }
    std::vector<std::pair<std::string, double>> scored;
    scored.reserve(touched.size());
    for (std::uint32_t d : touched) {
        if (acc[d] > 0.0) scored.emplace_back(ids_[d], acc[d]);
    }
    return make_ranked_list(Channel::bm25, std::move(scored), depth);
}

InvertedIndex InvertedIndex::from_parts(std::vector<std::string> ids, std::vector<std::uint32_t> lengths,
                                        std::unordered_map<std::string, std::vector<Posting>> postings) {
    if (ids.size() != lengths.size()) throw FormatError("index has mismatched id and length tables");
    InvertedIndex idx;
    for (std::uint32_t i = 0; i < ids.size(); ++i) {
        if (!idx.number_.emplace(ids[i], i).second) throw FormatError("index repeats document id '" + ids[i] + "'");
        idx.total_length_ += lengths[i];
    }
    for (const auto& [term, list] : postings) {
        for (std::size_t i = 0; i < list.size(); ++i) {
            if (list[i].doc >= ids.size() || (i > 0 && list[i - 1].doc >= list[i].doc)) {
                throw FormatError("postings for '" + term + "' are out of order or out of range");
            }
        }
    }
    idx.ids_ = std::move(ids);
    idx.lengths_ = std::move(lengths);
    idx.postings_ = std::move(postings);
    return idx;
}

RankedList make_ranked_list(Channel channel, std::vector<std::pair<std::string, double>> scored, std::size_t depth) {
    auto better = [](const auto& a, const auto& b) { return a.second != b.second ? a.second > b.second : a.first < b.first; };
    const std::size_t n = std::min(depth, scored.size());
    std::partial_sort(scored.begin(), scored.begin() + static_cast<std::ptrdiff_t>(n), scored.end(), better);
    RankedList out{channel, {}};
    out.entries.reserve(n);
    for (std::size_t i = 0; i < n; ++i) out.entries.push_back({std::move(scored[i].first), scored[i].second, i + 1});
    return out;
}

}  // namespace mawarith
