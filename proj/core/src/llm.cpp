#include "mawarith/llm.hpp"

#include <algorithm>
#include <semaphore>
#include <thread>

#include <httplib.h>

#include "mawarith/error.hpp"

namespace mawarith {

namespace {

constexpr std::string_view kSystemText =
    "أنت خبير في علم الفرائض (المواريث) على مذهب الجمهور. تحل المسألة على مراحل: "
    "تحديد الورثة والمحجوبين، ثم الفروض والتعصيب، ثم العول أو الرد، ثم التأصيل والتصحيح. "
    "استند إلى المسائل المحلولة المرفقة إن وجدت، ولا تخترع ورثة غير مذكورين في السؤال.";

constexpr std::string_view kDirective =
    "اكتب خطوات تفكيرك بين الوسمين <think> و</think>، ثم اكتب الإجابة النهائية بين الوسمين <answer> و</answer> "
    "على شكل كائن JSON واحد بالمفاتيح: heirs, blocked, shares, awl_or_radd, tasil_stage, post_tasil.\n"
    "مثال على الشكل: {\"heirs\": [{\"heir\": \"husband\", \"count\": 1}], \"blocked\": [], "
    "\"shares\": [{\"heir\": \"husband\", \"fraction\": \"1/2\"}], \"awl_or_radd\": \"none\", "
    "\"tasil_stage\": {\"asl\": 2, \"adjusted\": 2, \"final\": 2}, "
    "\"post_tasil\": {\"base\": 2, \"distribution\": [{\"heir\": \"husband\", \"count\": 1, \"siham\": 1, "
    "\"per_head_percent\": \"50\"}]}}\n"
    "قيمة awl_or_radd واحدة من: none, awl, radd.";

std::string trim(std::string_view s) {
    const auto first = s.find_first_not_of(" \t\r\n");
    if (first == std::string_view::npos) return {};
    const auto last = s.find_last_not_of(" \t\r\n");
    return std::string(s.substr(first, last - first + 1));
}

struct ParsedUrl {
    std::string origin;  // scheme://host[:port]
    std::string prefix;  // path without trailing slash
};

ParsedUrl parse_base_url(const std::string& url) {
    const auto scheme_end = url.find("://");
    if (url.empty() || scheme_end == std::string::npos) throw ConfigError("endpoint base URL is not set or not absolute");
    const std::string scheme = url.substr(0, scheme_end);
    if (scheme != "http" && scheme != "https") throw ConfigError("unsupported endpoint scheme '" + scheme + "'");
#ifndef CPPHTTPLIB_OPENSSL_SUPPORT
    if (scheme == "https") throw ConfigError("this build has no TLS support; use an http:// endpoint");
#endif
    const auto path_start = url.find('/', scheme_end + 3);
    ParsedUrl out;
    out.origin = url.substr(0, path_start);
    if (path_start != std::string::npos) out.prefix = url.substr(path_start);
    while (!out.prefix.empty() && out.prefix.back() == '/') out.prefix.pop_back();
    return out;
}

bool transient(int status) { return status == 408 || status == 429 || (status >= 500 && status <= 599); }

}  // namespace

std::string_view output_directive() { return kDirective; }

PromptBundle build_prompt(std::string_view question, std::span<const Document> contexts) {
    PromptBundle b;
    b.system_text = std::string(kSystemText);
    std::string& u = b.user_text;
    u += "السؤال:\n";
    u += trim(question);
    u += "\n\n";
    if (contexts.empty()) {
        u += "لم يُعثر على مسائل محلولة مشابهة، فاعتمد على قواعد الفرائض وحدها.\n\n";
    } else {
        u += "مسائل محلولة مشابهة مرتبة حسب الصلة:\n";
        for (std::size_t i = 0; i < contexts.size(); ++i) {
            u += "[" + std::to_string(i + 1) + "]\n";
            u += contexts[i].qa_text;
            u += "\n\n";
            b.context_ids.push_back(contexts[i].id);
        }
    }
    u += kDirective;
    return b;
}

std::pair<std::string, std::string> split_think_answer(std::string_view raw) {
    static constexpr std::string_view open_a = "<answer>", close_a = "</answer>";
    static constexpr std::string_view open_t = "<think>", close_t = "</think>";

    // Walk opening tags from the end; the first one followed by a closing tag wins.
    auto open = std::string_view::npos;
    auto close = std::string_view::npos;
    for (auto pos = raw.rfind(open_a); pos != std::string_view::npos; pos = pos == 0 ? std::string_view::npos : raw.rfind(open_a, pos - 1)) {
        close = raw.find(close_a, pos + open_a.size());
        if (close != std::string_view::npos) {
            open = pos;
            break;
        }
    }
    if (open == std::string_view::npos) return {std::string(raw), std::string()};

    std::string answer = trim(raw.substr(open + open_a.size(), close - open - open_a.size()));
    const std::string_view before = raw.substr(0, open);
    std::string think;
    const auto t_open = before.find(open_t);
    const auto t_close = t_open == std::string_view::npos ? before.find(close_t) : before.find(close_t, t_open);
    if (t_close != std::string_view::npos) {
        const auto start = t_open == std::string_view::npos ? 0 : t_open + open_t.size();
        think = trim(before.substr(start, t_close - start));
    } else {
        std::string rest(before);
        if (auto p = rest.find(open_t); p != std::string::npos) rest.erase(p, open_t.size());
        think = trim(rest);
    }
    return {std::move(think), std::move(answer)};
}

struct ChatClient::Impl {
    explicit Impl(std::size_t slots) : limiter(static_cast<std::ptrdiff_t>(slots)) {}
    std::counting_semaphore<> limiter;
    ParsedUrl url;
};

ChatClient::ChatClient(EndpointConfig config) : config_(std::move(config)) {
    if (config_.max_in_flight == 0) throw ConfigError("max_in_flight must be positive");
    if (config_.max_attempts < 1) throw ConfigError("max_attempts must be at least 1");
    impl_ = std::make_unique<Impl>(config_.max_in_flight);
    impl_->url = parse_base_url(config_.base_url);
}

ChatClient::~ChatClient() = default;

GenResult ChatClient::complete(const PromptBundle& bundle) const {
    const nlohmann::json body{
        {"model", config_.model},
        {"messages",
         nlohmann::json::array({{{"role", "system"}, {"content", bundle.system_text}},
                                {{"role", "user"}, {"content", bundle.user_text}}})},
        {"temperature", config_.temperature},
        {"max_tokens", config_.max_tokens},
        {"stream", false},
    };
    const std::string payload = body.dump();
    const std::string path = impl_->url.prefix + "/chat/completions";

    impl_->limiter.acquire();
    struct Release {
        std::counting_semaphore<>& s;
        ~Release() { s.release(); }
    } release{impl_->limiter};

    const auto started = std::chrono::steady_clock::now();
    int last_status = 0;
    std::string last_error;
    auto delay = config_.backoff_initial;
    for (int attempt = 1; attempt <= config_.max_attempts; ++attempt) {
        httplib::Client cli(impl_->url.origin);
        const auto secs = std::chrono::duration_cast<std::chrono::seconds>(config_.timeout);
        const auto usecs = std::chrono::duration_cast<std::chrono::microseconds>(config_.timeout - secs);
        cli.set_connection_timeout(secs.count(), usecs.count());
        cli.set_read_timeout(secs.count(), usecs.count());
        cli.set_write_timeout(secs.count(), usecs.count());
        httplib::Headers headers;
        if (!config_.api_key.empty()) headers.emplace("Authorization", "Bearer " + config_.api_key);

        auto res = cli.Post(path, headers, payload, "application/json");
        if (!res) {
            last_status = 0;
            last_error = httplib::to_string(res.error());
        } else if (res->status == 200) {
            nlohmann::json reply = nlohmann::json::parse(res->body, nullptr, false);
            if (reply.is_discarded()) throw ProtocolError("endpoint reply is not JSON");
            const nlohmann::json* content = nullptr;
            if (reply.is_object() && reply.contains("choices") && reply["choices"].is_array() &&
                !reply["choices"].empty()) {
                const auto& choice = reply["choices"][0];
                if (choice.is_object() && choice.contains("message") && choice["message"].is_object() &&
                    choice["message"].contains("content") && choice["message"]["content"].is_string()) {
                    content = &choice["message"]["content"];
                }
            }
            if (!content) throw ProtocolError("endpoint reply has no choices[0].message.content string");
            GenResult out;
            out.raw_text = content->get<std::string>();
            std::tie(out.think_text, out.answer_text) = split_think_answer(out.raw_text);
            out.attempts = attempt;
            out.latency_ms =
                std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - started).count();
            return out;
        } else {
            last_status = res->status;
            last_error = "HTTP " + std::to_string(res->status);
            if (!transient(res->status)) {
                throw TransportError("endpoint refused the request: " + last_error, last_status);
            }
        }
        if (attempt < config_.max_attempts) {
            std::this_thread::sleep_for(delay);
            delay = std::min(delay * 2, config_.backoff_max);
        }
    }
    throw TransportError("endpoint failed after " + std::to_string(config_.max_attempts) + " attempts: " + last_error,
                         last_status);
}

GenResult oracle_mock(const PromptBundle&, std::span<const Document> contexts) {
    if (contexts.empty()) throw InputError("oracle mock needs at least one context");
    const Document& top = contexts.front();
    GenResult out;
    out.think_text = "mock: answer copied from context " + top.id;
    out.answer_text = to_canonical_string(top.structured_output);
    out.raw_text = "<think>" + out.think_text + "</think>\n<answer>" + out.answer_text + "</answer>";
    out.attempts = 1;
    return out;
}

}  // namespace mawarith
