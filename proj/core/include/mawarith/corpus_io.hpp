#pragma once

#include <filesystem>
#include <fstream>
#include <functional>
#include <mutex>
#include <span>
#include <string>
#include <vector>

#include "mawarith/document.hpp"

namespace mawarith {

/// A line that could not be decoded. Lines are 1-based.
struct LineError {
    std::filesystem::path file;
    std::size_t line = 0;
    std::string message;

    std::string str() const;
};

/// Reads one JSON object per line. Blank lines are skipped. A line that does
/// not parse, or that `on_record` rejects by throwing mawarith::Error, is
/// reported and reading goes on. Throws InputError when the file cannot be opened.
std::vector<LineError> read_jsonl(const std::filesystem::path& path,
                                  const std::function<void(const ordered_json&, std::size_t line)>& on_record);

struct CorpusReadResult {
    std::vector<Document> docs;
    std::vector<LineError> errors;
};

CorpusReadResult read_corpus(const std::filesystem::path& path);

/// One record per line, compact, UTF-8. Overwrites the file.
void write_corpus(const std::filesystem::path& path, std::span<const Document> docs);

/// Serializes writers of one line-delimited file. Lines from concurrent
/// callers never interleave.
class JsonlWriter {
public:
    /// Throws InputError when the file cannot be created.
    explicit JsonlWriter(const std::filesystem::path& path);
    void write(const ordered_json& record);
    void flush();

private:
    std::mutex mu_;
    std::ofstream out_;
    std::filesystem::path path_;
};

/// Compact single-line dump used by every line-delimited file.
std::string dump_line(const ordered_json& record);

}  // namespace mawarith
