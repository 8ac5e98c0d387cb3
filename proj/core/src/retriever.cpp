#include "mawarith/retriever.hpp"

#include <algorithm>
#include <bit>
#include <cstring>
#include <fstream>

#include "mawarith/error.hpp"
#include "mawarith/text.hpp"

namespace mawarith {

namespace {

constexpr char kMagic[7] = {'M', 'A', 'W', 'R', 'I', 'D', 'X'};

static_assert(std::endian::native == std::endian::little, "index IO assumes a little-endian host");

class Writer {
public:
    explicit Writer(std::ostream& out) : out_(out) {}
    template <class T>
    void pod(T v) {
        out_.write(reinterpret_cast<const char*>(&v), sizeof v);
    }
    void str(std::string_view s) {
        pod(static_cast<std::uint32_t>(s.size()));
        out_.write(s.data(), static_cast<std::streamsize>(s.size()));
    }

private:
    std::ostream& out_;
};

class Reader {
public:
    explicit Reader(std::istream& in) : in_(in) {}
    template <class T>
    T pod() {
        T v{};
        in_.read(reinterpret_cast<char*>(&v), sizeof v);
        if (!in_) throw FormatError("index file is truncated");
        return v;
    }
    std::string str() {
        const auto n = pod<std::uint32_t>();
        std::string s(n, '\0');
        in_.read(s.data(), n);
        if (!in_) throw FormatError("index file is truncated");
        return s;
    }

private:
    std::istream& in_;
};

}  // namespace

HybridIndex HybridIndex::build(const std::vector<std::pair<std::string, std::string>>& docs, const Embedder& embedder) {
    HybridIndex idx;
    idx.embedder_name_ = embedder.name();
    idx.dense_ = DenseStore(embedder.dim());
    idx.ids_.reserve(docs.size());
    for (const auto& [id, text] : docs) {
        idx.lexical_.add(id, analyze_ar(text));
        std::vector<float> v = embedder.embed(text);
        if (std::all_of(v.begin(), v.end(), [](float x) { return x == 0.0f; })) {
            throw InputError("document '" + id + "' has no text features to embed");
        }
        idx.dense_.add(id, std::move(v));
        idx.ids_.push_back(id);
        idx.texts_.emplace(id, text);
    }
    return idx;
}

HybridIndex HybridIndex::build(const std::vector<Document>& docs, const Embedder& embedder) {
    std::vector<std::pair<std::string, std::string>> texts;
    texts.reserve(docs.size());
    for (const Document& d : docs) texts.emplace_back(d.id, d.qa_text);
    return build(texts, embedder);
}

std::string_view HybridIndex::text(const std::string& doc_id) const {
    auto it = texts_.find(doc_id);
    if (it == texts_.end()) throw LookupError("unknown document id '" + doc_id + "'");
    return it->second;
}

std::vector<std::string_view> HybridIndex::texts() const {
    std::vector<std::string_view> out;
    out.reserve(ids_.size());
    for (const std::string& id : ids_) out.push_back(texts_.at(id));
    return out;
}

void HybridIndex::save(const std::filesystem::path& path) const {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw InputError("cannot write index file " + path.string());
    Writer w(out);
    out.write(kMagic, sizeof kMagic);
    w.pod(kFormatVersion);
    w.str(embedder_name_);
    w.pod(static_cast<std::uint64_t>(dense_.dim()));
    w.pod(static_cast<std::uint64_t>(ids_.size()));
    for (std::size_t i = 0; i < ids_.size(); ++i) {
        w.str(ids_[i]);
        w.str(texts_.at(ids_[i]));
        w.pod(lexical_.lengths()[i]);
        for (float f : dense_.vector(i)) w.pod(f);
    }
    std::vector<const std::string*> terms;
    terms.reserve(lexical_.postings().size());
    for (const auto& [term, list] : lexical_.postings()) terms.push_back(&term);
    std::sort(terms.begin(), terms.end(), [](const std::string* a, const std::string* b) { return *a < *b; });
    w.pod(static_cast<std::uint64_t>(terms.size()));
    for (const std::string* term : terms) {
        const auto& list = lexical_.postings().at(*term);
        w.str(*term);
        w.pod(static_cast<std::uint32_t>(list.size()));
        for (const Posting& p : list) {
            w.pod(p.doc);
            w.pod(p.tf);
        }
    }
    if (!out) throw InputError("failed writing index file " + path.string());
}

HybridIndex HybridIndex::load(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw InputError("cannot open index file " + path.string());
    char magic[sizeof kMagic];
    in.read(magic, sizeof magic);
    if (!in || std::memcmp(magic, kMagic, sizeof kMagic) != 0) throw FormatError(path.string() + " is not an index file");
    Reader r(in);
    const auto version = r.pod<std::uint8_t>();
    if (version != kFormatVersion) {
        throw FormatError("index format version " + std::to_string(version) + " is not supported");
    }
    HybridIndex idx;
    idx.embedder_name_ = r.str();
    const auto dim = r.pod<std::uint64_t>();
    const auto n = r.pod<std::uint64_t>();
    idx.dense_ = DenseStore(dim);
    std::vector<std::string> ids;
    std::vector<std::uint32_t> lengths;
    for (std::uint64_t i = 0; i < n; ++i) {
        std::string id = r.str();
        std::string text = r.str();
        lengths.push_back(r.pod<std::uint32_t>());
        std::vector<float> v(dim);
        for (float& f : v) f = r.pod<float>();
        try {
            idx.dense_.add(id, std::move(v));
        } catch (const InputError& e) {
            throw FormatError(std::string("index file: ") + e.what());
        }
        idx.texts_.emplace(id, std::move(text));
        ids.push_back(id);
    }
    idx.ids_ = ids;
    std::unordered_map<std::string, std::vector<Posting>> postings;
    const auto terms = r.pod<std::uint64_t>();
    for (std::uint64_t t = 0; t < terms; ++t) {
        std::string term = r.str();
        const auto count = r.pod<std::uint32_t>();
        std::vector<Posting> list(count);
        for (Posting& p : list) {
            p.doc = r.pod<std::uint32_t>();
            p.tf = r.pod<std::uint32_t>();
        }
        postings.emplace(std::move(term), std::move(list));
    }
    idx.lexical_ = InvertedIndex::from_parts(std::move(ids), std::move(lengths), std::move(postings));
    return idx;
}

Retriever::Retriever(const HybridIndex& index, const Embedder& embedder, const Reranker& reranker,
                     RetrievalConfig config)
    : index_(index), embedder_(embedder), reranker_(reranker), config_(config) {
    if (index.size() > 0 && index.embedder_name() != embedder.name()) {
        throw ConfigError("index was built with embedder " + index.embedder_name() + ", not " + embedder.name());
    }
}

RankedList Retriever::dense_channel(std::string_view query) const {
    return index_.dense().search(embedder_.embed(query), config_.dense_depth);
}

RankedList Retriever::bm25_channel(std::string_view query) const {
    return index_.lexical().search(analyze_ar(query), config_.bm25_depth, config_.bm25);
}

std::vector<FusedHit> Retriever::retrieve(std::string_view query, std::optional<std::size_t> k,
                                          std::vector<std::string>* diagnostics) const {
    if (index_.size() == 0) throw LookupError("retrieval index is empty");
    const auto fused = rrf_fuse(dense_channel(query), bm25_channel(query), config_.rrf);
    return rerank(
        query, fused, [this](const std::string& id) { return index_.text(id); }, reranker_, k.value_or(config_.k),
        diagnostics);
}

}  // namespace mawarith
