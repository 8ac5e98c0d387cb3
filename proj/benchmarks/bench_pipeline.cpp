#include <benchmark/benchmark.h>

#include <random>

#include "mawarith/archive.hpp"
#include "mawarith/extract.hpp"
#include "mawarith/generator.hpp"
#include "mawarith/llm.hpp"
#include "mawarith/retriever.hpp"
#include "mawarith/score.hpp"
#include "mawarith/solver.hpp"
#include "mawarith/text.hpp"

using namespace mawarith;

namespace {

const std::vector<Document>& corpus() {
    static const std::vector<Document> docs = [] {
        GenSpec spec = default_gen_spec();
        spec.target_count = 5000;
        spec.seed = 1;
        return generate_corpus(spec);
    }();
    return docs;
}

struct Stack {
    HashedNgramEmbedder embedder;
    HybridIndex index;
    TokenOverlapReranker reranker;
    Stack() : index(HybridIndex::build(corpus(), embedder)) { reranker.fit(index.texts()); }
};

const Stack& stack() {
    static const Stack s;
    return s;
}

void BM_SolveCase(benchmark::State& state) {
    using enum HeirKind;
    const CaseInput in{{{wife, 2}, {mother, 1}, {daughter, 3}, {full_brother, 2}, {full_sister, 1}}, std::nullopt};
    for (auto _ : state) benchmark::DoNotOptimize(solve_case(in));
}
BENCHMARK(BM_SolveCase);

void BM_GenerateCorpus(benchmark::State& state) {
    GenSpec spec = default_gen_spec();
    spec.target_count = static_cast<std::size_t>(state.range(0));
    for (auto _ : state) {
        ++spec.seed;
        benchmark::DoNotOptimize(generate_corpus(spec));
    }
    state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_GenerateCorpus)->Arg(1000)->Unit(benchmark::kMillisecond);

void BM_AnalyzeArabic(benchmark::State& state) {
    const std::string& text = corpus()[0].qa_text;
    for (auto _ : state) benchmark::DoNotOptimize(analyze_ar(text));
    state.SetBytesProcessed(state.iterations() * static_cast<std::int64_t>(text.size()));
}
BENCHMARK(BM_AnalyzeArabic);

void BM_Bm25Search(benchmark::State& state) {
    const Stack& s = stack();
    const auto q = analyze_ar(corpus()[17].problem_text_ar);
    for (auto _ : state) benchmark::DoNotOptimize(s.index.lexical().search(q, 100));
}
BENCHMARK(BM_Bm25Search)->Unit(benchmark::kMicrosecond);

void BM_DenseSearch(benchmark::State& state) {
    const Stack& s = stack();
    const auto q = s.embedder.embed(corpus()[17].problem_text_ar);
    for (auto _ : state) benchmark::DoNotOptimize(s.index.dense().search(q, 100));
}
BENCHMARK(BM_DenseSearch)->Unit(benchmark::kMicrosecond);

void BM_Retrieve(benchmark::State& state) {
    const Stack& s = stack();
    const Retriever retriever(s.index, s.embedder, s.reranker);
    std::size_t i = 0;
    for (auto _ : state) benchmark::DoNotOptimize(retriever.retrieve(corpus()[i++ % 500].problem_text_ar));
}
BENCHMARK(BM_Retrieve)->Unit(benchmark::kMillisecond);

void BM_ExtractDirect(benchmark::State& state) {
    const std::string text = to_canonical_string(corpus()[3].structured_output);
    for (auto _ : state) benchmark::DoNotOptimize(extract_structured(text));
}
BENCHMARK(BM_ExtractDirect);

void BM_ExtractHarvest(benchmark::State& state) {
    const std::string text =
        "The heirs are as follows.\nheirs: husband, 2 full sisters\nblocked: none\n"
        "shares: husband 1/2, full sister 2/3\nawl_or_radd: awl\ntasil_stage: 6 then 7\n";
    for (auto _ : state) benchmark::DoNotOptimize(extract_structured(text));
}
BENCHMARK(BM_ExtractHarvest);

void BM_SplitThinkAnswer(benchmark::State& state) {
    const std::string raw = "<think>" + std::string(4000, 'x') + "</think><answer>" +
                            to_canonical_string(corpus()[3].structured_output) + "</answer>";
    for (auto _ : state) benchmark::DoNotOptimize(split_think_answer(raw));
}
BENCHMARK(BM_SplitThinkAnswer);

void BM_ScoreCase(benchmark::State& state) {
    const SolvedCase& gold = corpus()[9].structured_output;
    const Prediction pred = prediction_from_solved(gold);
    for (auto _ : state) benchmark::DoNotOptimize(score_case(gold, &pred));
}
BENCHMARK(BM_ScoreCase);

void BM_MakeZip(benchmark::State& state) {
    const std::vector<ArchiveMember> m{{"submission.json", std::string(static_cast<std::size_t>(state.range(0)), 'a')}};
    for (auto _ : state) benchmark::DoNotOptimize(make_zip(m));
    state.SetBytesProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_MakeZip)->Arg(1 << 20);

}  // namespace

BENCHMARK_MAIN();
