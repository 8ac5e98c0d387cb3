#include "cli.hpp"

#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <random>
#include <unordered_map>

#include "mawarith/ablation.hpp"
#include "mawarith/answer.hpp"
#include "mawarith/config.hpp"
#include "mawarith/corpus_io.hpp"
#include "mawarith/error.hpp"
#include "mawarith/generator.hpp"
#include "mawarith/score.hpp"
#include "mawarith/submission.hpp"

namespace mawarith::cli {

namespace {

namespace fs = std::filesystem;

class UsageError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Values given on the command line. Unset ones leave the config alone.
struct Flags {
    std::string config;
    std::optional<std::string> corpus, index, queries, gold, predictions, reports, submission;
    std::optional<double> alpha, beta, rrf_k;
    std::optional<std::size_t> k, dense_depth, bm25_depth, corpus_size, parallelism;
    std::optional<std::uint64_t> seed;
    std::optional<std::string> endpoint_url, api_key, model;
    std::vector<std::string> renames;
};

RunConfig resolve(const Flags& f) {
    RunConfig c;
    if (!f.config.empty()) c = load_run_config(f.config);
    apply_env(c);
    auto path = [](fs::path& dst, const std::optional<std::string>& v) {
        if (v) dst = *v;
    };
    path(c.paths.corpus, f.corpus);
    path(c.paths.index, f.index);
    path(c.paths.queries, f.queries);
    path(c.paths.gold, f.gold);
    path(c.paths.predictions, f.predictions);
    path(c.paths.reports, f.reports);
    path(c.paths.submission, f.submission);
    if (f.alpha) c.retrieval.rrf.alpha = *f.alpha;
    if (f.beta) c.retrieval.rrf.beta = *f.beta;
    if (f.rrf_k) c.retrieval.rrf.k = *f.rrf_k;
    if (f.k) c.retrieval.k = *f.k;
    if (f.dense_depth) c.retrieval.dense_depth = *f.dense_depth;
    if (f.bm25_depth) c.retrieval.bm25_depth = *f.bm25_depth;
    if (f.corpus_size) c.corpus_size = *f.corpus_size;
    if (f.parallelism) c.parallelism = *f.parallelism;
    if (f.seed) c.seed = *f.seed;
    if (f.endpoint_url) c.endpoint.base_url = *f.endpoint_url;
    if (f.api_key) c.endpoint.api_key = *f.api_key;
    if (f.model) c.endpoint.model = *f.model;
    for (const std::string& r : f.renames) {
        const auto eq = r.find('=');
        if (eq == std::string::npos || eq == 0) throw UsageError("--rename expects from=to, got '" + r + "'");
        set_config_value(c, "rename." + r.substr(0, eq), r.substr(eq + 1));
    }
    return c;
}

const fs::path& need(const fs::path& p, std::string_view flag) {
    if (p.empty()) throw UsageError("missing --" + std::string(flag) + " (or " + std::string(flag) + " = in the config file)");
    return p;
}

const fs::path& need_existing(const fs::path& p, std::string_view flag) {
    need(p, flag);
    if (!fs::exists(p)) throw InputError("no such file: " + p.string());
    return p;
}

void report_errors(const std::vector<LineError>& errors, std::ostream& err) {
    for (const LineError& e : errors) err << "warning: " << e.str() << '\n';
}

std::vector<Document> load_corpus(const fs::path& path, std::ostream& err) {
    auto r = read_corpus(need_existing(path, "corpus"));
    report_errors(r.errors, err);
    return std::move(r.docs);
}

std::vector<AnswerItem> load_questions(const fs::path& path, std::ostream& err) {
    std::vector<AnswerItem> out;
    report_errors(read_jsonl(need_existing(path, "queries"),
                             [&](const ordered_json& j, std::size_t) {
                                 out.push_back({j.at("id").get<std::string>(), j.at("question").get<std::string>()});
                             }),
                  err);
    return out;
}

std::vector<GoldCase> load_gold(const fs::path& path) {
    std::vector<GoldCase> out;
    const auto errors = read_jsonl(need_existing(path, "gold"), [&](const ordered_json& j, std::size_t) {
        GoldCase g;
        g.id = j.at("id").get<std::string>();
        g.solved = solved_case_from_json(j.at("structured_output"));
        const auto cat = j.contains("category") ? category_from_string(j["category"].get<std::string>()) : std::nullopt;
        g.category = cat ? *cat : category_of(g.solved.adjustment.kind);
        out.push_back(std::move(g));
    });
    if (!errors.empty()) throw InputError("gold file has malformed lines, first: " + errors.front().str());
    return out;
}

std::map<Category, double> parse_mix(const std::string& text) {
    std::map<Category, double> mix;
    std::stringstream ss(text);
    std::string part;
    while (std::getline(ss, part, ',')) {
        const auto eq = part.find('=');
        const auto cat = eq == std::string::npos ? std::nullopt : category_from_string(part.substr(0, eq));
        if (!cat) throw UsageError("bad mix entry '" + part + "'; expected simple=P,awl=P,radd=P");
        try {
            mix[*cat] = std::stod(part.substr(eq + 1));
        } catch (const std::exception&) {
            throw UsageError("bad proportion in '" + part + "'");
        }
    }
    return mix;
}

struct IndexBundle {
    HashedNgramEmbedder embedder;
    std::optional<HybridIndex> index;
    TokenOverlapReranker reranker;
};

// Loads the saved index when one is given, otherwise builds it from the corpus.
void open_index(IndexBundle& b, const RunConfig& c, const std::vector<Document>* docs, std::ostream& err) {
    if (!c.paths.index.empty() && fs::exists(c.paths.index)) {
        b.index = HybridIndex::load(c.paths.index);
    } else if (docs) {
        if (!c.paths.index.empty()) err << "note: " << c.paths.index.string() << " not found; indexing the corpus\n";
        b.index = HybridIndex::build(*docs, b.embedder);
    } else {
        need_existing(c.paths.index, "index");
    }
    b.reranker.fit(b.index->texts());
}

void write_json_file(const fs::path& path, const ordered_json& j) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw InputError("cannot write " + path.string());
    out << j.dump(2) << '\n';
}

// ---------------------------------------------------------------------------

struct GenerateOpts {
    std::string mix;
    std::size_t queries = 0;
    std::string queries_mix = "dev";
    std::optional<std::uint64_t> query_seed;
};

void cmd_generate(const Flags& f, const GenerateOpts& o, std::ostream& out, std::ostream& err) {
    const RunConfig c = resolve(f);
    GenSpec spec = default_gen_spec();
    spec.target_count = c.corpus_size;
    spec.seed = c.seed;
    spec.profile_id = c.profile_id;
    if (!o.mix.empty()) spec.category_targets = parse_mix(o.mix);
    spec.validate();
    const fs::path& corpus_path = need(c.paths.corpus, "corpus");

    std::map<Category, std::size_t> counts;
    std::vector<Document> docs;
    {
        JsonlWriter writer(corpus_path);
        generate_corpus(spec, [&](Document&& d) {
            ++counts[d.category];
            writer.write(to_json(d));
            if (o.queries > 0) docs.push_back(std::move(d));
        });
    }
    out << "wrote " << c.corpus_size << " documents to " << corpus_path.string() << " (";
    for (auto it = counts.begin(); it != counts.end(); ++it) {
        out << (it == counts.begin() ? "" : ", ") << to_string(it->first) << ' ' << it->second;
    }
    out << ")\n";
    if (o.queries == 0) return;

    const auto mix = o.queries_mix == "dev"     ? dev_category_mix()
                     : o.queries_mix == "train" ? default_gen_spec().category_targets
                                                : parse_mix(o.queries_mix);
    const auto split = make_query_split(docs, o.queries, mix, o.query_seed.value_or(c.seed + 1));
    std::unordered_map<std::string, const Document*> by_id;
    for (const Document& d : docs) by_id[d.id] = &d;
    JsonlWriter q(need(c.paths.queries, "queries"));
    std::optional<JsonlWriter> g;
    if (!c.paths.gold.empty()) g.emplace(c.paths.gold);
    for (const QueryItem& item : split) {
        q.write({{"id", item.id}, {"question", item.question}, {"doc_id", item.doc_id}, {"category", to_string(item.category)}});
        if (g) {
            g->write({{"id", item.id},
                      {"category", to_string(item.category)},
                      {"structured_output", to_json(by_id.at(item.doc_id)->structured_output)}});
        }
    }
    out << "wrote " << split.size() << " queries to " << c.paths.queries.string();
    if (g) out << " and their gold records to " << c.paths.gold.string();
    out << '\n';
    (void)err;
}

void cmd_index(const Flags& f, std::ostream& out, std::ostream& err) {
    const RunConfig c = resolve(f);
    const auto docs = load_corpus(c.paths.corpus, err);
    const fs::path& dst = need(c.paths.index, "index");
    const HashedNgramEmbedder emb;
    const HybridIndex index = HybridIndex::build(docs, emb);
    index.save(dst);
    out << "indexed " << index.size() << " documents into " << dst.string() << '\n';
}

struct RetrieveOpts {
    std::string query;
};

void cmd_retrieve(const Flags& f, const RetrieveOpts& o, std::ostream& out, std::ostream& err) {
    const RunConfig c = resolve(f);
    std::optional<std::vector<Document>> docs;
    if (c.paths.index.empty() || !fs::exists(c.paths.index)) {
        if (c.paths.corpus.empty()) need_existing(c.paths.index, "index");
        docs = load_corpus(c.paths.corpus, err);
    }
    IndexBundle b;
    open_index(b, c, docs ? &*docs : nullptr, err);
    const Retriever retriever(*b.index, b.embedder, b.reranker, c.retrieval);

    auto hits_json = [&](const std::string& q) {
        std::vector<std::string> diag;
        ordered_json hits = ordered_json::array();
        for (const FusedHit& h : retriever.retrieve(q, std::nullopt, &diag)) {
            hits.push_back({{"rank", h.rank}, {"doc_id", h.doc_id}, {"rrf_score", h.rrf_score}, {"rerank_score", h.rerank_score}});
        }
        for (const std::string& d : diag) err << "warning: " << d << '\n';
        return hits;
    };
    if (!o.query.empty()) {
        for (const auto& h : hits_json(o.query)) {
            out << h["rank"].get<std::size_t>() << '\t' << h["doc_id"].get<std::string>() << '\t'
                << h["rerank_score"].get<double>() << '\t' << h["rrf_score"].get<double>() << '\n';
        }
        return;
    }
    if (c.paths.queries.empty()) throw UsageError("retrieve needs --query or --queries");
    const auto questions = load_questions(c.paths.queries, err);
    std::optional<JsonlWriter> file;
    if (!c.paths.reports.empty()) file.emplace(c.paths.reports);
    for (const AnswerItem& q : questions) {
        const ordered_json rec{{"id", q.id}, {"hits", hits_json(q.question)}};
        if (file) {
            file->write(rec);
        } else {
            out << dump_line(rec) << '\n';
        }
    }
}

struct AnswerOpts {
    bool mock = false;
};

void cmd_answer(const Flags& f, const AnswerOpts& o, std::ostream& out, std::ostream& err) {
    const RunConfig c = resolve(f);
    const auto docs = load_corpus(c.paths.corpus, err);
    const auto questions = load_questions(c.paths.queries, err);
    const fs::path& dst = need(c.paths.predictions, "predictions");
    IndexBundle b;
    open_index(b, c, &docs, err);
    const Retriever retriever(*b.index, b.embedder, b.reranker, c.retrieval);
    std::unordered_map<std::string, const Document*> by_id;
    for (const Document& d : docs) by_id[d.id] = &d;

    std::unique_ptr<ChatClient> client;
    AnswerBackend backend;
    if (o.mock) {
        backend = oracle_mock;
    } else {
        if (c.endpoint.base_url.empty()) {
            throw UsageError("no endpoint: pass --mock, or set --endpoint-url, MAWARITH_ENDPOINT_URL or endpoint.url");
        }
        client = std::make_unique<ChatClient>(c.endpoint);
        backend = [&client](const PromptBundle& bundle, std::span<const Document>) { return client->complete(bundle); };
    }
    const auto records = run_answers(questions, retriever, by_id, backend, c.parallelism);

    JsonlWriter writer(dst);
    std::size_t valid = 0, failed = 0;
    std::map<Route, std::size_t> routes;
    for (const AnswerRecord& r : records) {
        writer.write(to_json(r));
        valid += r.validation.overall ? 1 : 0;
        if (!r.error.empty()) {
            ++failed;
            err << "warning: " << r.id << ": " << r.error << '\n';
        }
        ++routes[r.prediction.route];
    }
    out << "answered " << records.size() << " questions into " << dst.string() << ": " << valid << " valid, " << failed
        << " failed; routes";
    for (const auto& [route, n] : routes) out << ' ' << to_string(route) << '=' << n;
    out << '\n';
}

struct ValidateOpts {
    std::string in;
    bool strict = false;
};

void cmd_validate(const Flags& f, const ValidateOpts& o, std::ostream& out, std::ostream& err) {
    const RunConfig c = resolve(f);
    std::optional<JsonlWriter> writer;
    if (!c.paths.reports.empty()) writer.emplace(c.paths.reports);
    std::size_t total = 0, ok = 0;
    std::map<std::string, std::size_t> failures;
    const auto errors = read_jsonl(need_existing(o.in, "in"), [&](const ordered_json& j, std::size_t line) {
        const std::string id = j.contains("id") && j["id"].is_string() ? j["id"].get<std::string>() : "line-" + std::to_string(line);
        std::string text;
        for (const char* key : {"answer_text", "text", "output", "raw_text"}) {
            if (j.contains(key) && j[key].is_string()) {
                text = j[key].get<std::string>();
                if (std::string_view(key) == "raw_text") text = split_think_answer(text).second;
                break;
            }
        }
        const Prediction p = interpret_answer(id, text);
        const ValidationReport v = validate(p);
        ++total;
        ok += v.overall ? 1 : 0;
        ordered_json rec = prediction_record(p);
        ordered_json checks;
        const std::pair<const char*, const CheckResult*> named[] = {
            {"c_keys", &v.c_keys}, {"c_types", &v.c_types}, {"c_labels", &v.c_labels}, {"c_mass", &v.c_mass}};
        for (const auto& [name, check] : named) {
            if (!check->pass) ++failures[name];
            checks[name] = {{"pass", check->pass}, {"diagnostics", check->diagnostics}};
        }
        rec["valid"] = v.overall;
        rec["checks"] = checks;
        if (writer) writer->write(rec);
    });
    report_errors(errors, err);
    out << "validated " << total << " outputs: " << ok << " pass, " << (total - ok) << " fail";
    for (const auto& [name, n] : failures) out << "; " << name << ' ' << n;
    out << '\n';
    if (o.strict && (ok != total || !errors.empty())) throw InputError("some outputs failed validation");
}

void cmd_score(const Flags& f, std::ostream& out, std::ostream& err) {
    const RunConfig c = resolve(f);
    const auto gold = load_gold(c.paths.gold);
    std::vector<Prediction> preds;
    const auto errors = read_jsonl(need_existing(c.paths.predictions, "pred"), [&](const ordered_json& j, std::size_t) {
        Prediction p = prediction_from_line(j);
        if (p.id.empty()) throw InputError("prediction without id");
        preds.push_back(std::move(p));
    });
    report_errors(errors, err);
    const MireReport report = score_run(gold, preds);
    char line[64];
    std::snprintf(line, sizeof line, "MIR-E mean: %.4f\n", report.mean);
    out << line << summary_table(report);
    if (!report.unmatched_predictions.empty()) {
        err << "warning: " << report.unmatched_predictions.size() << " predictions have no gold record\n";
    }
    if (!c.paths.reports.empty()) write_json_file(c.paths.reports, to_json(report));
}

struct AblateOpts {
    std::size_t sample = 0;
};

void cmd_ablate(const Flags& f, const AblateOpts& o, std::ostream& out, std::ostream& err) {
    const RunConfig c = resolve(f);
    const auto docs = load_corpus(c.paths.corpus, err);
    std::vector<AblationQuestion> questions;
    if (!c.paths.queries.empty()) {
        for (const AnswerItem& q : load_questions(c.paths.queries, err)) questions.push_back({q.id, q.question});
    } else if (o.sample > 0) {
        std::mt19937_64 rng(c.seed);
        std::vector<std::size_t> order(docs.size());
        std::iota(order.begin(), order.end(), 0);
        std::shuffle(order.begin(), order.end(), rng);
        order.resize(std::min(o.sample, order.size()));
        std::sort(order.begin(), order.end());
        for (std::size_t i : order) questions.push_back({docs[i].id, docs[i].problem_text_ar});
    } else {
        throw UsageError("ablate needs --queries or --sample N");
    }
    const HashedNgramEmbedder emb;
    const AblationReport report = run_ablation(docs, questions, emb, c.retrieval);
    out << summary_table(report);
    if (!c.paths.reports.empty()) write_json_file(c.paths.reports, to_json(report));
}

void cmd_package(const Flags& f, std::ostream& out, std::ostream& err) {
    const RunConfig c = resolve(f);
    std::map<std::string, std::string> question_of;
    if (!c.paths.queries.empty()) {
        for (const AnswerItem& q : load_questions(c.paths.queries, err)) question_of[q.id] = q.question;
    }
    std::vector<SubmissionEntry> entries;
    const auto errors = read_jsonl(need_existing(c.paths.predictions, "pred"), [&](const ordered_json& j, std::size_t) {
        SubmissionEntry e;
        e.output = prediction_from_line(j);
        e.id = e.output.id;
        if (e.id.empty()) throw InputError("prediction without id");
        auto q = question_of.find(e.id);
        if (q != question_of.end()) {
            e.question = q->second;
        } else if (j.contains("question") && j["question"].is_string()) {
            e.question = j["question"].get<std::string>();
        }
        entries.push_back(std::move(e));
    });
    if (!errors.empty()) {
        report_errors(errors, err);
        throw InputError("prediction file has malformed lines; nothing packaged");
    }
    const PackageResult r = package_submission(entries, c.rename_map, need(c.paths.submission, "out"));
    for (const std::string& w : r.warnings) err << "warning: " << w << '\n';
    out << "packaged " << r.entries << " entries into " << c.paths.submission.string() << '\n';
}

void add_config(CLI::App* sub, Flags& f) {
    sub->add_option("--config", f.config, "key = value run configuration file");
}

void add_retrieval(CLI::App* sub, Flags& f) {
    sub->add_option("--k", f.k, "contexts kept after reranking");
    sub->add_option("--alpha", f.alpha, "dense channel weight in the fusion");
    sub->add_option("--beta", f.beta, "BM25 channel weight in the fusion");
    sub->add_option("--rrf-k", f.rrf_k, "rank offset in the fusion");
    sub->add_option("--dense-depth", f.dense_depth, "candidates taken from the dense channel");
    sub->add_option("--bm25-depth", f.bm25_depth, "candidates taken from the BM25 channel");
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Retrieval-augmented inheritance case pipeline", "mawarith"};
    app.require_subcommand(1);
    app.set_version_flag("--version", "mawarith 0.1.0");

    Flags f;
    GenerateOpts gen;
    RetrieveOpts ret;
    AnswerOpts ans;
    ValidateOpts val;
    AblateOpts abl;

    auto* generate = app.add_subcommand("generate", "synthesize a corpus, optionally with a query split and gold");
    add_config(generate, f);
    generate->add_option("--out,--corpus", f.corpus, "corpus file to write");
    generate->add_option("--count", f.corpus_size, "documents to generate");
    generate->add_option("--seed", f.seed, "generator seed");
    generate->add_option("--mix", gen.mix, "category proportions, e.g. simple=0.9,awl=0.05,radd=0.05");
    generate->add_option("--queries", gen.queries, "number of paraphrased queries to draw from the corpus");
    generate->add_option("--queries-out", f.queries, "query file to write");
    generate->add_option("--gold-out", f.gold, "gold file for the queries");
    generate->add_option("--query-mix", gen.queries_mix, "dev, train, or explicit proportions");
    generate->add_option("--query-seed", gen.query_seed, "seed of the query split (default: seed + 1)");

    auto* index = app.add_subcommand("index", "build and save the retrieval index");
    add_config(index, f);
    index->add_option("--corpus", f.corpus, "corpus file");
    index->add_option("--out,--index", f.index, "index file to write");

    auto* retrieve = app.add_subcommand("retrieve", "top-K contexts for a query or a query file");
    add_config(retrieve, f);
    retrieve->add_option("--index", f.index, "saved index");
    retrieve->add_option("--corpus", f.corpus, "corpus to index when no saved index is given");
    retrieve->add_option("--query", ret.query, "one question");
    retrieve->add_option("--queries", f.queries, "query file");
    retrieve->add_option("--out", f.reports, "hits file for --queries (default stdout)");
    add_retrieval(retrieve, f);

    auto* answer = app.add_subcommand("answer", "retrieve, prompt, extract and validate every query");
    add_config(answer, f);
    answer->add_option("--corpus", f.corpus, "corpus file");
    answer->add_option("--index", f.index, "saved index (built from the corpus when absent)");
    answer->add_option("--queries", f.queries, "query file");
    answer->add_option("--out", f.predictions, "prediction file to write");
    answer->add_flag("--mock", ans.mock, "answer with the oracle mock instead of an endpoint");
    answer->add_option("--endpoint-url", f.endpoint_url, "chat-completions base URL");
    answer->add_option("--api-key", f.api_key, "endpoint credential");
    answer->add_option("--model", f.model, "model name sent to the endpoint");
    answer->add_option("--parallelism", f.parallelism, "questions in progress at once");
    add_retrieval(answer, f);

    auto* validate_cmd = app.add_subcommand("validate", "extract and validate raw model outputs");
    add_config(validate_cmd, f);
    validate_cmd->add_option("--in", val.in, "lines with answer_text, text, output or raw_text")->required();
    validate_cmd->add_option("--out", f.reports, "per-output validation records");
    validate_cmd->add_flag("--strict", val.strict, "exit 1 when any output fails");

    auto* score = app.add_subcommand("score", "MIR-E of predictions against gold");
    add_config(score, f);
    score->add_option("--gold", f.gold, "gold file (corpus or gold records)");
    score->add_option("--pred", f.predictions, "prediction file");
    score->add_option("--report", f.reports, "JSON report to write");

    auto* ablate = app.add_subcommand("ablate", "retrieval quality per source tag");
    add_config(ablate, f);
    ablate->add_option("--corpus", f.corpus, "corpus file with source tags");
    ablate->add_option("--queries", f.queries, "query file");
    ablate->add_option("--sample", abl.sample, "use N corpus problems as questions when no query file is given");
    ablate->add_option("--seed", f.seed, "sampling seed");
    ablate->add_option("--report", f.reports, "JSON report to write");
    add_retrieval(ablate, f);

    auto* package = app.add_subcommand("package", "submission archive from predictions");
    add_config(package, f);
    package->add_option("--pred", f.predictions, "prediction file");
    package->add_option("--queries", f.queries, "query file supplying the question text");
    package->add_option("--out", f.submission, "archive to write");
    package->add_option("--rename", f.renames, "output key rename from=to (repeatable)");

    try {
        std::vector<std::string> args;
        for (int i = argc - 1; i > 0; --i) args.emplace_back(argv[i]);
        app.parse(args);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return 0;
    } catch (const CLI::CallForAllHelp&) {
        out << app.help("", CLI::AppFormatMode::All);
        return 0;
    } catch (const CLI::CallForVersion&) {
        out << "mawarith 0.1.0\n";
        return 0;
    } catch (const CLI::ParseError& e) {
        err << "usage error: " << e.what() << "\n";
        err << "run 'mawarith --help' for usage\n";
        return 2;
    }

    try {
        if (generate->parsed()) cmd_generate(f, gen, out, err);
        else if (index->parsed()) cmd_index(f, out, err);
        else if (retrieve->parsed()) cmd_retrieve(f, ret, out, err);
        else if (answer->parsed()) cmd_answer(f, ans, out, err);
        else if (validate_cmd->parsed()) cmd_validate(f, val, out, err);
        else if (score->parsed()) cmd_score(f, out, err);
        else if (ablate->parsed()) cmd_ablate(f, abl, out, err);
        else if (package->parsed()) cmd_package(f, out, err);
    } catch (const UsageError& e) {
        err << "usage error: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}

}  // namespace mawarith::cli
