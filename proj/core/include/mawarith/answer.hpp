#pragma once

#include <functional>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "mawarith/extract.hpp"
#include "mawarith/llm.hpp"
#include "mawarith/retriever.hpp"

namespace mawarith {

struct AnswerItem {
    std::string id;
    std::string question;
};

struct AnswerRecord {
    std::string id;
    std::string question;
    std::vector<std::string> context_ids;
    GenResult gen;
    Prediction prediction;
    ValidationReport validation;
    std::string error;  // set when retrieval or generation failed
};

/// Produces a reply for a prompt. Must be safe to call from several threads.
using AnswerBackend = std::function<GenResult(const PromptBundle&, std::span<const Document> contexts)>;

/// Extracts the structured answer (or an empty default-filled one), fills
/// non-critical defaults when the critical keys are there, and sets the id.
Prediction interpret_answer(const std::string& id, std::string_view answer_text);

/// retrieve -> prompt -> backend -> extract -> validate for every item, with
/// at most `parallelism` items in progress. Results come back in input
/// order. A failing item is recorded with its error and a default-filled
/// prediction; the run goes on.
std::vector<AnswerRecord> run_answers(std::span<const AnswerItem> items, const Retriever& retriever,
                                      const std::unordered_map<std::string, const Document*>& docs,
                                      const AnswerBackend& backend, std::size_t parallelism);

/// prediction_record plus question, context ids, think and answer text,
/// attempts, latency, validity and error.
ordered_json to_json(const AnswerRecord& record);

/// Reads a prediction line in any of the shapes the tools write: a record
/// with "prediction", a gold-like record with "structured_output", or a raw
/// reply with "answer_text". Throws InputError when none is present.
Prediction prediction_from_line(const ordered_json& line);

}  // namespace mawarith
