#include "mawarith/corpus_io.hpp"

#include "mawarith/error.hpp"

namespace mawarith {

std::string LineError::str() const {
    return file.string() + ":" + std::to_string(line) + ": " + message;
}

std::string dump_line(const ordered_json& record) {
    return record.dump(-1, ' ', false, ordered_json::error_handler_t::replace);
}

std::vector<LineError> read_jsonl(const std::filesystem::path& path,
                                  const std::function<void(const ordered_json&, std::size_t)>& on_record) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw InputError("cannot read " + path.string());
    std::vector<LineError> errors;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.find_first_not_of(" \t") == std::string::npos) continue;
        ordered_json j;
        try {
            j = ordered_json::parse(line);
        } catch (const ordered_json::exception& e) {
            errors.push_back({path, line_no, e.what()});
            continue;
        }
        if (!j.is_object()) {
            errors.push_back({path, line_no, "record is not an object"});
            continue;
        }
        try {
            on_record(j, line_no);
        } catch (const Error& e) {
            errors.push_back({path, line_no, e.what()});
        } catch (const ordered_json::exception& e) {
            errors.push_back({path, line_no, e.what()});
        }
    }
    return errors;
}

CorpusReadResult read_corpus(const std::filesystem::path& path) {
    CorpusReadResult out;
    out.errors = read_jsonl(path, [&](const ordered_json& j, std::size_t) { out.docs.push_back(document_from_json(j)); });
    return out;
}

void write_corpus(const std::filesystem::path& path, std::span<const Document> docs) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw InputError("cannot write " + path.string());
    for (const Document& d : docs) out << dump_line(to_json(d)) << '\n';
    if (!out) throw InputError("write failed: " + path.string());
}

JsonlWriter::JsonlWriter(const std::filesystem::path& path)
    : out_(path, std::ios::binary | std::ios::trunc), path_(path) {
    if (!out_) throw InputError("cannot write " + path.string());
}

void JsonlWriter::write(const ordered_json& record) {
    std::string line = dump_line(record);
    line.push_back('\n');
    std::lock_guard lock(mu_);
    out_ << line;
    if (!out_) throw InputError("write failed: " + path_.string());
}

void JsonlWriter::flush() {
    std::lock_guard lock(mu_);
    out_.flush();
}

}  // namespace mawarith
