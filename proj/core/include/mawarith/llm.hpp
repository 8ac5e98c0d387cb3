#pragma once

#include <chrono>
#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "mawarith/document.hpp"

namespace mawarith {

struct PromptBundle {
    std::string system_text;
    std::string user_text;
    std::vector<std::string> context_ids;  // in the order they appear in user_text

    friend bool operator==(const PromptBundle&, const PromptBundle&) = default;
};

struct GenResult {
    std::string raw_text;
    std::string think_text;
    std::string answer_text;  // empty when the reply carried no answer segment
    double latency_ms = 0.0;
    int attempts = 0;
};

/// Arabic grounded prompt. Contexts are quoted by their qa_text, in the given
/// order. With no contexts the user text says so and still carries the
/// output directive.
PromptBundle build_prompt(std::string_view question, std::span<const Document> contexts);

/// The output directive appended to every user prompt.
std::string_view output_directive();

/// Splits a reply into its think and answer segments. Total: never throws.
///
/// The answer is the last complete segment: the last <answer> tag that has a
/// </answer> after it, up to the first such closing tag. Without
/// one, answer_text is empty and think_text holds the whole reply. Otherwise
/// think_text is the first complete <think> segment, or the text before the
/// answer when no think segment is closed.
std::pair<std::string, std::string> split_think_answer(std::string_view raw_text);

struct EndpointConfig {
    std::string base_url;  // e.g. http://127.0.0.1:8080/v1
    std::string api_key;
    std::string model;
    double temperature = 0.0;
    int max_tokens = 4096;
    std::chrono::milliseconds timeout{120000};
    int max_attempts = 4;
    std::chrono::milliseconds backoff_initial{500};
    std::chrono::milliseconds backoff_max{8000};
    std::size_t max_in_flight = 4;
};

/// Chat-completions client. Safe to share between threads; at most
/// max_in_flight requests are open at any time.
class ChatClient {
public:
    /// Throws ConfigError on an empty or unsupported base URL.
    explicit ChatClient(EndpointConfig config);
    ~ChatClient();
    ChatClient(const ChatClient&) = delete;
    ChatClient& operator=(const ChatClient&) = delete;

    /// POSTs {base_url}/chat/completions. 429, 408, 5xx and connection
    /// failures are retried with exponential backoff up to max_attempts;
    /// other statuses fail at once. Throws TransportError (with the last
    /// HTTP status, 0 for connection failures) or ProtocolError.
    GenResult complete(const PromptBundle& bundle) const;

    const EndpointConfig& config() const noexcept { return config_; }

private:
    struct Impl;
    EndpointConfig config_;
    std::unique_ptr<Impl> impl_;
};

/// Test double: answers with the top context's canonical record inside
/// answer tags. Throws InputError with no contexts.
GenResult oracle_mock(const PromptBundle& bundle, std::span<const Document> contexts);

}  // namespace mawarith
