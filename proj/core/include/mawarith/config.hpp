#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <string_view>

#include "mawarith/llm.hpp"
#include "mawarith/retriever.hpp"

namespace mawarith {

struct RunPaths {
    std::filesystem::path corpus;
    std::filesystem::path index;
    std::filesystem::path queries;
    std::filesystem::path gold;
    std::filesystem::path predictions;
    std::filesystem::path reports;
    std::filesystem::path submission;
};

/// Everything a run needs. Defaults match the library defaults.
struct RunConfig {
    RunPaths paths;
    RetrievalConfig retrieval;
    std::size_t corpus_size = 1000;
    std::uint64_t seed = 0;
    std::string profile_id = "majority-sunni";
    EndpointConfig endpoint;
    /// Top-level output keys renamed when packaging. The default target name
    /// is a guess at what the task evaluator expects.
    std::map<std::string, std::string> rename_map{{"tasil_stage", "awl_stage"}};
    std::size_t parallelism = 4;
};

/// Sets one key. Keys:
///   corpus index queries gold predictions reports submission   paths
///   alpha beta rrf_k k dense_depth bm25_depth                    retrieval
///   corpus_size seed profile parallelism
///   endpoint.url endpoint.api_key endpoint.model endpoint.temperature
///   endpoint.max_tokens endpoint.timeout_ms endpoint.max_attempts endpoint.max_in_flight
///   rename.<from>     target key name; an empty value removes the entry
/// Throws ConfigError on an unknown key or a value that does not parse.
void set_config_value(RunConfig& config, std::string_view key, std::string_view value);

/// Flat "key = value" file. '#' at the start of a line or after whitespace
/// starts a comment. Later lines win.
/// Throws InputError naming the file when it cannot be read, ConfigError
/// with the line number on a bad line.
RunConfig load_run_config(const std::filesystem::path& path, RunConfig base = {});

/// Environment overrides for the endpoint: MAWARITH_ENDPOINT_URL,
/// MAWARITH_API_KEY, MAWARITH_MODEL. `lookup` defaults to std::getenv.
using EnvLookup = std::function<std::optional<std::string>(const char*)>;
void apply_env(RunConfig& config, const EnvLookup& lookup = {});

}  // namespace mawarith
