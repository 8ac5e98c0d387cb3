#include "mawarith/answer.hpp"

#include <atomic>
#include <thread>

#include "mawarith/error.hpp"

namespace mawarith {

Prediction interpret_answer(const std::string& id, std::string_view answer_text) {
    Prediction p = extract_structured(answer_text).value_or(default_fill());
    try {
        p = apply_defaults(std::move(p));
    } catch (const InputError&) {
        // critical keys missing; leave it for the validator to report
    }
    p.id = id;
    return p;
}

namespace {

AnswerRecord answer_one(const AnswerItem& item, const Retriever& retriever,
                        const std::unordered_map<std::string, const Document*>& docs, const AnswerBackend& backend) {
    AnswerRecord rec;
    rec.id = item.id;
    rec.question = item.question;
    try {
        std::vector<Document> contexts;
        for (const FusedHit& h : retriever.retrieve(item.question)) {
            auto it = docs.find(h.doc_id);
            if (it == docs.end()) throw LookupError("retrieved id " + h.doc_id + " is not in the corpus");
            contexts.push_back(*it->second);
            rec.context_ids.push_back(h.doc_id);
        }
        rec.gen = backend(build_prompt(item.question, contexts), contexts);
        rec.prediction = interpret_answer(item.id, rec.gen.answer_text);
    } catch (const Error& e) {
        rec.error = e.what();
        rec.prediction = default_fill();
        rec.prediction.id = item.id;
    }
    rec.validation = validate(rec.prediction);
    return rec;
}

}  // namespace

std::vector<AnswerRecord> run_answers(std::span<const AnswerItem> items, const Retriever& retriever,
                                      const std::unordered_map<std::string, const Document*>& docs,
                                      const AnswerBackend& backend, std::size_t parallelism) {
    std::vector<AnswerRecord> out(items.size());
    std::atomic<std::size_t> next{0};
    auto work = [&] {
        for (std::size_t i = next++; i < items.size(); i = next++) out[i] = answer_one(items[i], retriever, docs, backend);
    };
    const std::size_t n = std::clamp<std::size_t>(parallelism, 1, std::max<std::size_t>(items.size(), 1));
    if (n == 1) {
        work();
        return out;
    }
    std::vector<std::jthread> pool;
    for (std::size_t t = 0; t < n; ++t) pool.emplace_back(work);
    pool.clear();
    return out;
}

ordered_json to_json(const AnswerRecord& r) {
    ordered_json j = prediction_record(r.prediction);
    ordered_json out;
    out["id"] = r.id;
    out["question"] = r.question;
    out["context_ids"] = r.context_ids;
    out["think_text"] = r.gen.think_text;
    out["answer_text"] = r.gen.answer_text;
    out["attempts"] = r.gen.attempts;
    out["latency_ms"] = r.gen.latency_ms;
    out["valid"] = r.validation.overall;
    if (!r.error.empty()) out["error"] = r.error;
    for (const auto& [k, v] : j.items()) {
        if (k != "id") out[k] = v;
    }
    return out;
}

Prediction prediction_from_line(const ordered_json& line) {
    const std::string id = line.contains("id") && line["id"].is_string() ? line["id"].get<std::string>() : "";
    if (line.contains("prediction")) return prediction_from_record(line);
    if (line.contains("structured_output") && line["structured_output"].is_object()) {
        Prediction p = prediction_from_json(line["structured_output"]);
        p.id = id;
        return p;
    }
    if (line.contains("answer_text") && line["answer_text"].is_string()) {
        return interpret_answer(id, line["answer_text"].get<std::string>());
    }
    throw InputError("line has none of prediction, structured_output, answer_text");
}

}  // namespace mawarith
