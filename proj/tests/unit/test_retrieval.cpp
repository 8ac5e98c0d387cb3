#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <random>

#include "doctest.h"
#include "mawarith/error.hpp"
#include "mawarith/generator.hpp"
#include "mawarith/retriever.hpp"
#include "mawarith/text.hpp"

using namespace mawarith;

namespace {

RankedList ranked(Channel ch, std::vector<std::string> ids) {
    RankedList out{ch, {}};
    for (std::size_t i = 0; i < ids.size(); ++i) out.entries.push_back({ids[i], 1.0 / static_cast<double>(i + 1), i + 1});
    return out;
}

double fused_score(const std::vector<FusedCandidate>& f, const std::string& id) {
    for (const auto& c : f) {
        if (c.doc_id == id) return c.rrf_score;
    }
    return 0.0;
}

struct ConstantScorer final : Reranker {
    double score(std::string_view, std::string_view) const override { return 0.5; }
};

struct FailingScorer final : Reranker {
    double score(std::string_view, std::string_view doc) const override {
        if (doc.find("bad") != std::string_view::npos) throw std::runtime_error("scorer failed");
        return static_cast<double>(doc.size());
    }
};

std::filesystem::path temp_path(const std::string& name) {
    return std::filesystem::temp_directory_path() / ("mawarith_test_" + name);
}

}  // namespace

TEST_CASE("analyze_ar normalizes and tokenizes") {
    CHECK(analyze_ar("الأَب") == analyze_ar("الاب"));
    CHECK(analyze_ar("الأَب").size() == 1);
    CHECK(analyze_ar("").empty());
    CHECK(analyze_ar("زوجة وبنت").size() == 2);
    CHECK(analyze_ar("زوجة وبنت")[1] == analyze_ar("بنت")[0]);
    CHECK(analyze_ar("زوجة") == analyze_ar("زوجه"));
    CHECK(analyze_ar("مسـتوى") == analyze_ar("مستوي"));
    CHECK(analyze_ar("٣ بنات") == analyze_ar("3 بنات"));
    CHECK(analyze_ar("Son, daughter!") == std::vector<std::string>{"son", "daughter"});
    CHECK(analyze_ar("و") == std::vector<std::string>{"و"});
}

TEST_CASE("BM25 formula with the standard constants") {
    CHECK(bm25_term(1.0, 2.0, 10.0, 10.0) == doctest::Approx(1.375).epsilon(1e-12));
    CHECK(bm25_term(1.0, 2.0, 10.0, 10.0) + bm25_term(1.0, 2.0, 10.0, 10.0) == doctest::Approx(2.75).epsilon(1e-12));
    CHECK(std::abs(bm25_term(1.0, 2.0, 10.0, 10.0) - 1.375) <= 1e-9);
    CHECK(bm25_term(3.0, 0.0, 10.0, 10.0) == 0.0);
    CHECK(bm25_idf(10, 2) == doctest::Approx(std::log(8.5 / 2.5 + 1.0)));
    CHECK(bm25_idf(1, 1) > 0.0);
}

TEST_CASE("inverted index statistics and scoring") {
    InvertedIndex idx;
    idx.add("a", {"x", "y", "x"});
    idx.add("b", {"y", "z"});
    idx.add("c", {"z", "z", "z", "w", "q"});
    CHECK(idx.size() == 3);
    CHECK(idx.avgdl() == doctest::Approx(10.0 / 3.0));
    CHECK(idx.df("x") == 1);
    CHECK(idx.df("z") == 2);
    CHECK(idx.doc_length("c") == 5);
    for (const auto& [term, list] : idx.postings()) {
        for (std::size_t i = 1; i < list.size(); ++i) CHECK(list[i - 1].doc < list[i].doc);
    }
    const double expected = bm25_term(bm25_idf(3, 1), 2, 3, 10.0 / 3.0);
    CHECK(std::abs(idx.score({"x"}, "a") - expected) <= 1e-12);
    CHECK(idx.score({"x"}, "b") == 0.0);
    CHECK(idx.score({"nothing"}, "a") == 0.0);
    CHECK_THROWS_AS(idx.score({"x"}, "missing"), LookupError);
    CHECK_THROWS_AS(idx.add("a", {"dup"}), InputError);

    const RankedList r = idx.search({"z"}, 10);
    REQUIRE(r.entries.size() == 2);
    CHECK(r.entries[0].rank == 1);
    CHECK(r.entries[0].score >= r.entries[1].score);
    CHECK(r.entries[0].score == doctest::Approx(idx.score({"z"}, r.entries[0].doc_id)));
}

TEST_CASE("BM25 length normalization favours the shorter matching document") {
    InvertedIndex idx;
    idx.add("short", {"t", "a"});
    idx.add("long", {"t", "a", "b", "c", "d", "e"});
    idx.add("other", {"x", "y", "z"});
    CHECK(idx.score({"t"}, "short") > idx.score({"t"}, "long"));
}

TEST_CASE("RRF values") {
    const auto both = rrf_fuse(ranked(Channel::dense, {"d"}), ranked(Channel::bm25, {"d"}));
    CHECK(std::abs(both[0].rrf_score - 1.0 / 61.0) <= 1e-9);
    CHECK(std::abs(both[0].rrf_score - 0.0163934) <= 1e-7);

    const auto mixed = rrf_fuse(ranked(Channel::dense, {"d", "e"}), ranked(Channel::bm25, {"x", "y", "d"}));
    CHECK(std::abs(fused_score(mixed, "d") - (0.7 / 61 + 0.3 / 63)) <= 1e-9);
    CHECK(std::abs(fused_score(mixed, "d") - 0.0162373) <= 1e-7);
    CHECK(std::abs(fused_score(mixed, "e") - 0.7 / 62) <= 1e-9);
    CHECK(std::abs(fused_score(mixed, "e") - 0.0112903) <= 1e-7);
    for (std::size_t i = 1; i < mixed.size(); ++i) CHECK(mixed[i - 1].rrf_score >= mixed[i].rrf_score);
}

TEST_CASE("property: improving a rank never lowers the fused score") {
    std::mt19937_64 rng(17);
    std::vector<std::string> ids;
    for (int i = 0; i < 20; ++i) ids.push_back("d" + std::to_string(i));
    for (int trial = 0; trial < 500; ++trial) {
        auto dense = ids;
        auto lex = ids;
        std::shuffle(dense.begin(), dense.end(), rng);
        std::shuffle(lex.begin(), lex.end(), rng);
        const std::size_t pos = std::uniform_int_distribution<std::size_t>(1, 19)(rng);
        const std::string target = dense[pos];
        const double before = fused_score(rrf_fuse(ranked(Channel::dense, dense), ranked(Channel::bm25, lex)), target);
        std::swap(dense[pos], dense[pos - 1]);
        const double after = fused_score(rrf_fuse(ranked(Channel::dense, dense), ranked(Channel::bm25, lex)), target);
        REQUIRE(after >= before);
    }
}

TEST_CASE("rerank truncation and tie-breaking") {
    const std::vector<FusedCandidate> cands{{"a", 0.03}, {"b", 0.02}, {"c", 0.01}};
    auto text = [](const std::string& id) -> std::string_view { return id == "b" ? "bad" : "fine text"; };
    const ConstantScorer constant;
    const auto top1 = rerank("q", cands, text, constant, 1);
    REQUIRE(top1.size() == 1);
    CHECK(top1[0].doc_id == "a");
    const auto all = rerank("q", cands, text, constant, 10);
    REQUIRE(all.size() == 3);
    CHECK(all[1].doc_id == "b");
    CHECK(all[2].rank == 3);

    const FailingScorer failing;
    std::vector<std::string> diag;
    const auto kept = rerank("q", cands, text, failing, 10, &diag);
    CHECK(kept.size() == 2);
    REQUIRE(diag.size() == 1);
    CHECK(diag[0].find("b") != std::string::npos);
}

TEST_CASE("token-overlap reranker") {
    TokenOverlapReranker r;
    CHECK(r.score("زوج وبنت", "زوج وبنت") == doctest::Approx(1.0));
    CHECK(r.score("زوج", "بنت") == 0.0);
    CHECK(r.score("a b\nignored tail", "a b") == doctest::Approx(1.0));
    const double partial = r.score("a b c", "a b d");
    CHECK(partial > 0.0);
    CHECK(partial < 1.0);
    r.fit({"a b c", "a b d", "a b e"});
    // Shared boilerplate carries little weight once fitted.
    CHECK(r.score("a b c", "a b d") < partial);
    CHECK(r.prepare("a b c")("a b d") == r.score("a b c", "a b d"));
}

TEST_CASE("hashed n-gram embedder") {
    const HashedNgramEmbedder e(256);
    const auto v = e.embed("توفي رجل وترك ابنا");
    REQUIRE(v.size() == 256);
    double norm = 0;
    for (float x : v) norm += static_cast<double>(x) * x;
    CHECK(std::abs(std::sqrt(norm) - 1.0) <= 1e-6);
    CHECK(e.embed("الأَب") == e.embed("الاب"));
    CHECK(cosine(v, e.embed("توفي رجل وترك ابنا")) == doctest::Approx(1.0));
    CHECK(cosine(v, e.embed("")) == 0.0);
    CHECK_THROWS_AS(HashedNgramEmbedder(0), ConfigError);

    DenseStore store(256);
    store.add("x", v);
    CHECK_THROWS_AS(store.add("y", std::vector<float>(256, 1.0f)), InputError);
    CHECK_THROWS_AS(store.add("x", v), InputError);
    CHECK_THROWS_AS(store.add("z", std::vector<float>(3, 0.0f)), InputError);
}

TEST_CASE("retriever composition") {
    const HashedNgramEmbedder emb;
    TokenOverlapReranker rr;
    const std::vector<std::pair<std::string, std::string>> docs{
        {"d1", "توفي رجل وترك زوجة وابنا"},
        {"d2", "توفيت امرأة وتركت زوجا وأختين شقيقتين"},
        {"d3", "هلك هالك عن بنت وأم"},
    };
    const HybridIndex idx = HybridIndex::build(docs, emb);
    rr.fit(idx.texts());
    const Retriever ret(idx, emb, rr);
    for (const auto& [id, text] : docs) CHECK(ret.retrieve(text, 1)[0].doc_id == id);
    CHECK(ret.retrieve("زوجة وابن", 5).size() == 3);
    CHECK(ret.retrieve("بنت وأم").size() == 3);
    CHECK(ret.retrieve("بنت وأم")[0].doc_id == "d3");

    std::vector<std::string> first_ids, second_ids;
    for (const auto& h : ret.retrieve("أخت شقيقة", 3)) first_ids.push_back(h.doc_id);
    for (const auto& h : ret.retrieve("أخت شقيقة", 3)) second_ids.push_back(h.doc_id);
    CHECK(first_ids == second_ids);

    const HybridIndex empty = HybridIndex::build(std::vector<std::pair<std::string, std::string>>{}, emb);
    CHECK_THROWS_AS(Retriever(empty, emb, rr).retrieve("x"), LookupError);
    const HashedNgramEmbedder other(64);
    CHECK_THROWS_AS(Retriever(idx, other, rr), ConfigError);
}

TEST_CASE("channel fusion matches an exhaustive recomputation on small corpora") {
    GenSpec spec = default_gen_spec();
    spec.target_count = 50;
    spec.seed = 77;
    const auto corpus = generate_corpus(spec);
    const HashedNgramEmbedder emb;
    const HybridIndex idx = HybridIndex::build(corpus, emb);
    const TokenOverlapReranker rr;
    const Retriever ret(idx, emb, rr);

    for (std::size_t qi = 0; qi < 10; ++qi) {
        const std::string& query = corpus[qi * 5].problem_text_ar;
        // Oracle: score every document in both channels, rank, fuse by the formula.
        const auto qtok = analyze_ar(query);
        const auto qvec = emb.embed(query);
        std::vector<std::pair<std::string, double>> lex, dense;
        for (const Document& d : corpus) {
            const double s = idx.lexical().score(qtok, d.id);
            if (s > 0) lex.emplace_back(d.id, s);
            dense.emplace_back(d.id, cosine(qvec, emb.embed(d.qa_text)));
        }
        auto order = [](auto& v) {
            std::sort(v.begin(), v.end(), [](const auto& a, const auto& b) {
                return a.second != b.second ? a.second > b.second : a.first < b.first;
            });
        };
        order(lex);
        order(dense);
        std::map<std::string, double> fused;
        for (std::size_t i = 0; i < dense.size(); ++i) fused[dense[i].first] += 0.7 / (60.0 + static_cast<double>(i + 1));
        for (std::size_t i = 0; i < lex.size(); ++i) fused[lex[i].first] += 0.3 / (60.0 + static_cast<double>(i + 1));
        std::vector<std::pair<std::string, double>> expected(fused.begin(), fused.end());
        order(expected);

        const auto got = rrf_fuse(ret.dense_channel(query), ret.bm25_channel(query));
        REQUIRE(got.size() == expected.size());
        for (std::size_t i = 0; i < got.size(); ++i) {
            CHECK(got[i].doc_id == expected[i].first);
            CHECK(std::abs(got[i].rrf_score - expected[i].second) <= 1e-12);
        }
    }
}

TEST_CASE("index persistence round-trips and rejects foreign files") {
    GenSpec spec = default_gen_spec();
    spec.target_count = 120;
    const auto corpus = generate_corpus(spec);
    const HashedNgramEmbedder emb;
    const HybridIndex idx = HybridIndex::build(corpus, emb);
    const auto path = temp_path("index.bin");
    idx.save(path);
    const HybridIndex back = HybridIndex::load(path);
    CHECK(back.size() == idx.size());
    CHECK(back.ids() == idx.ids());
    CHECK(back.embedder_name() == emb.name());
    TokenOverlapReranker rr;
    rr.fit(idx.texts());
    const Retriever a(idx, emb, rr), b(back, emb, rr);
    for (std::size_t i = 0; i < 20; ++i) {
        const auto ha = a.retrieve(corpus[i].problem_text_ar, 3);
        const auto hb = b.retrieve(corpus[i].problem_text_ar, 3);
        REQUIRE(ha.size() == hb.size());
        for (std::size_t j = 0; j < ha.size(); ++j) {
            CHECK(ha[j].doc_id == hb[j].doc_id);
            CHECK(ha[j].rrf_score == hb[j].rrf_score);
        }
    }
    const auto again = temp_path("index2.bin");
    back.save(again);
    std::ifstream f1(path, std::ios::binary), f2(again, std::ios::binary);
    const std::string s1((std::istreambuf_iterator<char>(f1)), {}), s2((std::istreambuf_iterator<char>(f2)), {});
    CHECK(s1 == s2);
    CHECK(s1.substr(0, 7) == "MAWRIDX");
    CHECK(static_cast<int>(s1[7]) == HybridIndex::kFormatVersion);

    const auto bad = temp_path("bad.bin");
    {
        std::ofstream out(bad, std::ios::binary);
        out << "NOTANINDEX";
    }
    CHECK_THROWS_AS(HybridIndex::load(bad), FormatError);
    {
        std::string wrong = s1;
        wrong[7] = 9;
        std::ofstream out(bad, std::ios::binary);
        out << wrong;
    }
    CHECK_THROWS_AS(HybridIndex::load(bad), FormatError);
    {
        std::ofstream out(bad, std::ios::binary);
        out << s1.substr(0, s1.size() / 2);
    }
    CHECK_THROWS_AS(HybridIndex::load(bad), FormatError);
    CHECK_THROWS_AS(HybridIndex::load(temp_path("does-not-exist.bin")), InputError);
    std::filesystem::remove(path);
    std::filesystem::remove(again);
    std::filesystem::remove(bad);
}
