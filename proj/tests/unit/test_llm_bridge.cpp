#include <atomic>
#include <random>
#include <thread>

#include <httplib.h>

#include "doctest.h"
#include "mawarith/case_json.hpp"
#include "mawarith/error.hpp"
#include "mawarith/generator.hpp"
#include "mawarith/llm.hpp"

using namespace mawarith;

namespace {

std::vector<Document> small_corpus(std::size_t n) {
    GenSpec spec = default_gen_spec();
    spec.target_count = n;
    spec.seed = 5;
    return generate_corpus(spec);
}

std::string completion(const std::string& content) {
    return nlohmann::json{{"choices", {{{"index", 0}, {"message", {{"role", "assistant"}, {"content", content}}}}}}}
        .dump();
}

// Local endpoint whose behaviour is scripted per request.
class FakeEndpoint {
public:
    using Handler = std::function<void(const httplib::Request&, httplib::Response&)>;

    explicit FakeEndpoint(Handler h) {
        server_.Post("/v1/chat/completions", std::move(h));
        port_ = server_.bind_to_any_port("127.0.0.1");
        thread_ = std::thread([this] { server_.listen_after_bind(); });
        server_.wait_until_ready();
    }
    ~FakeEndpoint() {
        server_.stop();
        thread_.join();
    }

    EndpointConfig config() const {
        EndpointConfig c;
        c.base_url = "http://127.0.0.1:" + std::to_string(port_) + "/v1/";
        c.api_key = "test-key";
        c.model = "test-model";
        c.backoff_initial = std::chrono::milliseconds(1);
        c.backoff_max = std::chrono::milliseconds(4);
        c.timeout = std::chrono::milliseconds(5000);
        return c;
    }

private:
    httplib::Server server_;
    int port_ = 0;
    std::thread thread_;
};

}  // namespace

TEST_CASE("prompt carries contexts in order and the directive") {
    const auto docs = small_corpus(3);
    const PromptBundle b = build_prompt("توفي رجل عن ابن", docs);
    CHECK(b.context_ids == std::vector<std::string>{docs[0].id, docs[1].id, docs[2].id});
    std::size_t last = 0;
    for (const Document& d : docs) {
        const auto pos = b.user_text.find(d.qa_text);
        REQUIRE(pos != std::string::npos);
        CHECK(pos >= last);
        last = pos;
    }
    CHECK(b.user_text.find(output_directive()) != std::string::npos);
    CHECK(b.user_text.find("<answer>") != std::string::npos);
    CHECK(b.user_text.find("awl_or_radd") != std::string::npos);
    CHECK(build_prompt("توفي رجل عن ابن", docs) == b);

    const PromptBundle none = build_prompt("توفي رجل عن ابن", {});
    CHECK(none.context_ids.empty());
    CHECK(none.user_text.find(output_directive()) != std::string::npos);
    CHECK(none.user_text.find("لم يُعثر") != std::string::npos);
    CHECK(none.user_text != b.user_text);
}

TEST_CASE("split_think_answer") {
    CHECK(split_think_answer("<think>A</think><answer>B</answer>") == std::pair<std::string, std::string>{"A", "B"});
    CHECK(split_think_answer("full text") == std::pair<std::string, std::string>{"full text", ""});
    CHECK(split_think_answer("") == std::pair<std::string, std::string>{"", ""});
    CHECK(split_think_answer("<answer>one</answer> then <answer>two</answer>").second == "two");
    CHECK(split_think_answer("<answer>outer <answer>inner</answer></answer>").second == "inner");
    CHECK(split_think_answer("<answer>done</answer><answer>unclosed").second == "done");
    CHECK(split_think_answer("reasoning only</think><answer>x</answer>") ==
          std::pair<std::string, std::string>{"reasoning only", "x"});
    CHECK(split_think_answer("<think>no close <answer> x </answer>") ==
          std::pair<std::string, std::string>{"no close", "x"});
    CHECK(split_think_answer("<think>A</think> no answer tag").first == "<think>A</think> no answer tag");
    CHECK(split_think_answer("</answer><answer>").second.empty());
}

TEST_CASE("property: split_think_answer is total over tag soup") {
    const std::vector<std::string> pieces{"<think>", "</think>", "<answer>", "</answer>", "x", " ", "{}", "<", ">", "ب"};
    std::mt19937_64 rng(11);
    std::uniform_int_distribution<std::size_t> pick(0, pieces.size() - 1), len(0, 12);
    for (int i = 0; i < 20000; ++i) {
        std::string s;
        for (std::size_t n = len(rng); n > 0; --n) s += pieces[pick(rng)];
        const auto [think, answer] = split_think_answer(s);
        if (answer.empty() && s.find("</answer>") == std::string::npos) CHECK(think == s);
        REQUIRE(answer.find("</answer>") == std::string::npos);
    }
}

TEST_CASE("oracle mock echoes the top context") {
    const auto docs = small_corpus(4);
    const PromptBundle b = build_prompt("سؤال", docs);
    const GenResult r = oracle_mock(b, docs);
    CHECK(solved_case_from_json(ordered_json::parse(r.answer_text)) == docs[0].structured_output);
    CHECK(split_think_answer(r.raw_text).second == r.answer_text);
    const std::vector<Document> swapped{docs[2], docs[0]};
    CHECK(solved_case_from_json(ordered_json::parse(oracle_mock(b, swapped).answer_text)) ==
          docs[2].structured_output);
    CHECK(oracle_mock(b, docs).raw_text == r.raw_text);
    CHECK_THROWS_AS(oracle_mock(b, {}), InputError);
}

TEST_CASE("chat client transport contract") {
    const auto docs = small_corpus(1);
    const PromptBundle bundle = build_prompt("سؤال", docs);
    const std::string reply = "<think>خطوات</think><answer>{\"awl_or_radd\": \"radd\"}</answer>";

    SUBCASE("payload passes through unchanged") {
        std::string seen_auth, seen_body;
        FakeEndpoint ep([&](const httplib::Request& req, httplib::Response& res) {
            seen_auth = req.get_header_value("Authorization");
            seen_body = req.body;
            res.set_content(completion(reply), "application/json");
        });
        const ChatClient client(ep.config());
        const GenResult r = client.complete(bundle);
        CHECK(r.raw_text == reply);
        CHECK(r.answer_text == "{\"awl_or_radd\": \"radd\"}");
        CHECK(r.think_text == "خطوات");
        CHECK(r.attempts == 1);
        CHECK(seen_auth == "Bearer test-key");
        const auto body = nlohmann::json::parse(seen_body);
        CHECK(body["model"] == "test-model");
        CHECK(body["temperature"] == 0.0);
        CHECK(body["messages"][0]["role"] == "system");
        CHECK(body["messages"][1]["content"] == bundle.user_text);
    }
    SUBCASE("429 twice then success") {
        std::atomic<int> calls{0};
        FakeEndpoint ep([&](const httplib::Request&, httplib::Response& res) {
            if (++calls <= 2) {
                res.status = 429;
                return;
            }
            res.set_content(completion(reply), "application/json");
        });
        const GenResult r = ChatClient(ep.config()).complete(bundle);
        CHECK(r.attempts == 3);
        CHECK(r.raw_text == reply);
    }
    SUBCASE("always 500 exhausts the retry cap") {
        std::atomic<int> calls{0};
        FakeEndpoint ep([&](const httplib::Request&, httplib::Response& res) {
            ++calls;
            res.status = 500;
        });
        EndpointConfig c = ep.config();
        c.max_attempts = 3;
        try {
            ChatClient(c).complete(bundle);
            FAIL("expected TransportError");
        } catch (const TransportError& e) {
            CHECK(e.last_status() == 500);
        }
        CHECK(calls == 3);
    }
    SUBCASE("client errors are not retried") {
        std::atomic<int> calls{0};
        FakeEndpoint ep([&](const httplib::Request&, httplib::Response& res) {
            ++calls;
            res.status = 401;
        });
        CHECK_THROWS_AS(ChatClient(ep.config()).complete(bundle), TransportError);
        CHECK(calls == 1);
    }
    SUBCASE("malformed replies are protocol errors") {
        FakeEndpoint ep([&](const httplib::Request& req, httplib::Response& res) {
            res.set_content(req.body.size() % 2 ? "not json" : R"({"choices": []})", "application/json");
        });
        CHECK_THROWS_AS(ChatClient(ep.config()).complete(bundle), ProtocolError);
    }
    SUBCASE("in-flight requests stay under the limit") {
        std::atomic<int> open{0}, peak{0};
        FakeEndpoint ep([&](const httplib::Request&, httplib::Response& res) {
            const int now = ++open;
            int seen = peak.load();
            while (now > seen && !peak.compare_exchange_weak(seen, now)) {
            }
            std::this_thread::sleep_for(std::chrono::milliseconds(20));
            --open;
            res.set_content(completion(reply), "application/json");
        });
        EndpointConfig c = ep.config();
        c.max_in_flight = 2;
        const ChatClient client(c);
        std::vector<std::thread> workers;
        for (int i = 0; i < 8; ++i) workers.emplace_back([&] { client.complete(bundle); });
        for (auto& w : workers) w.join();
        CHECK(peak.load() <= 2);
        CHECK(peak.load() >= 1);
    }
}

TEST_CASE("connection failures exhaust retries with status 0") {
    EndpointConfig c;
    c.base_url = "http://127.0.0.1:1";
    c.max_attempts = 2;
    c.backoff_initial = std::chrono::milliseconds(1);
    c.timeout = std::chrono::milliseconds(500);
    try {
        ChatClient(c).complete(PromptBundle{});
        FAIL("expected TransportError");
    } catch (const TransportError& e) {
        CHECK(e.last_status() == 0);
    }
    CHECK_THROWS_AS(ChatClient(EndpointConfig{}), ConfigError);
    EndpointConfig bad;
    bad.base_url = "ftp://host";
    CHECK_THROWS_AS(ChatClient{bad}, ConfigError);
}
