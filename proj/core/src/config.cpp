#include "mawarith/config.hpp"

#include <charconv>
#include <cstdlib>
#include <fstream>

#include "mawarith/error.hpp"

namespace mawarith {

namespace {

std::string_view trim(std::string_view s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string_view::npos) return {};
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

template <typename T>
T parse_as(std::string_view key, std::string_view value) {
    T out{};
    const char* end = value.data() + value.size();
    auto [ptr, ec] = std::from_chars(value.data(), end, out);
    if (ec != std::errc{} || ptr != end || value.empty()) {
        throw ConfigError("bad value for " + std::string(key) + ": '" + std::string(value) + "'");
    }
    return out;
}

}  // namespace

void set_config_value(RunConfig& c, std::string_view key, std::string_view value) {
    const std::string v(value);
    if (key.starts_with("rename.")) {
        const std::string from(key.substr(7));
        if (from.empty()) throw ConfigError("rename needs a source key");
        if (v.empty()) {
            c.rename_map.erase(from);
        } else {
            c.rename_map[from] = v;
        }
        return;
    }
    if (key == "corpus") c.paths.corpus = v;
    else if (key == "index") c.paths.index = v;
    else if (key == "queries") c.paths.queries = v;
    else if (key == "gold") c.paths.gold = v;
    else if (key == "predictions") c.paths.predictions = v;
    else if (key == "reports") c.paths.reports = v;
    else if (key == "submission") c.paths.submission = v;
    else if (key == "alpha") c.retrieval.rrf.alpha = parse_as<double>(key, value);
    else if (key == "beta") c.retrieval.rrf.beta = parse_as<double>(key, value);
    else if (key == "rrf_k") c.retrieval.rrf.k = parse_as<double>(key, value);
    else if (key == "k") c.retrieval.k = parse_as<std::size_t>(key, value);
    else if (key == "dense_depth") c.retrieval.dense_depth = parse_as<std::size_t>(key, value);
    else if (key == "bm25_depth") c.retrieval.bm25_depth = parse_as<std::size_t>(key, value);
    else if (key == "corpus_size") c.corpus_size = parse_as<std::size_t>(key, value);
    else if (key == "seed") c.seed = parse_as<std::uint64_t>(key, value);
    else if (key == "profile") c.profile_id = v;
    else if (key == "parallelism") c.parallelism = parse_as<std::size_t>(key, value);
    else if (key == "endpoint.url") c.endpoint.base_url = v;
    else if (key == "endpoint.api_key") c.endpoint.api_key = v;
    else if (key == "endpoint.model") c.endpoint.model = v;
    else if (key == "endpoint.temperature") c.endpoint.temperature = parse_as<double>(key, value);
    else if (key == "endpoint.max_tokens") c.endpoint.max_tokens = parse_as<int>(key, value);
    else if (key == "endpoint.timeout_ms") c.endpoint.timeout = std::chrono::milliseconds(parse_as<long>(key, value));
    else if (key == "endpoint.max_attempts") c.endpoint.max_attempts = parse_as<int>(key, value);
    else if (key == "endpoint.max_in_flight") c.endpoint.max_in_flight = parse_as<std::size_t>(key, value);
    else throw ConfigError("unknown config key '" + std::string(key) + "'");
}

RunConfig load_run_config(const std::filesystem::path& path, RunConfig base) {
    std::ifstream in(path);
    if (!in) throw InputError("cannot read config file " + path.string());
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        // '#' at the start of a line, or after whitespace, starts a comment.
        for (std::size_t i = 1; i < line.size(); ++i) {
            if (line[i] == '#' && (line[i - 1] == ' ' || line[i - 1] == '\t')) {
                line.resize(i);
                break;
            }
        }
        const std::string_view t = trim(line);
        if (t.empty() || t.front() == '#') continue;
        const auto eq = t.find('=');
        if (eq == std::string_view::npos) {
            throw ConfigError(path.string() + ":" + std::to_string(line_no) + ": expected key = value");
        }
        try {
            set_config_value(base, trim(t.substr(0, eq)), trim(t.substr(eq + 1)));
        } catch (const ConfigError& e) {
            throw ConfigError(path.string() + ":" + std::to_string(line_no) + ": " + e.what());
        }
    }
    return base;
}

void apply_env(RunConfig& c, const EnvLookup& lookup) {
    auto get = [&](const char* name) -> std::optional<std::string> {
        if (lookup) return lookup(name);
        const char* v = std::getenv(name);
        return v ? std::optional<std::string>(v) : std::nullopt;
    };
    if (auto v = get("MAWARITH_ENDPOINT_URL")) c.endpoint.base_url = *v;
    if (auto v = get("MAWARITH_API_KEY")) c.endpoint.api_key = *v;
    if (auto v = get("MAWARITH_MODEL")) c.endpoint.model = *v;
}

}  // namespace mawarith
