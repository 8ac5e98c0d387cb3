#include "mawarith/submission.hpp"

#include <algorithm>
#include <set>

#include "mawarith/archive.hpp"
#include "mawarith/error.hpp"
#include "mawarith/extract.hpp"

namespace mawarith {

namespace {

constexpr std::string_view kMember = "submission.json";

ordered_json renamed(const ordered_json& object, const std::map<std::string, std::string>& rename_map,
                     const std::string& id) {
    ordered_json out = ordered_json::object();
    for (const auto& [key, value] : object.items()) {
        auto it = rename_map.find(key);
        const std::string& name = it == rename_map.end() ? key : it->second;
        if (out.contains(name)) throw InputError("renaming " + key + " to " + name + " collides in " + id);
        out[name] = value;
    }
    return out;
}

}  // namespace

ordered_json submission_document(std::span<const SubmissionEntry> entries,
                                 const std::map<std::string, std::string>& rename_map) {
    std::vector<const SubmissionEntry*> sorted;
    std::set<std::string> ids;
    for (const SubmissionEntry& e : entries) {
        if (!ids.insert(e.id).second) throw InputError("duplicate submission id " + e.id);
        const ValidationReport report = validate(e.output);
        if (!report.overall) {
            std::string why;
            for (const CheckResult* c : {&report.c_keys, &report.c_types, &report.c_labels, &report.c_mass}) {
                for (const std::string& d : c->diagnostics) why += (why.empty() ? "" : "; ") + d;
            }
            throw InputError("prediction " + e.id + " does not pass validation: " + why);
        }
        sorted.push_back(&e);
    }
    std::sort(sorted.begin(), sorted.end(), [](const auto* a, const auto* b) { return a->id < b->id; });
    ordered_json doc = ordered_json::array();
    for (const SubmissionEntry* e : sorted) {
        ordered_json entry;
        entry["id"] = e->id;
        entry["question"] = e->question;
        entry["output"] = renamed(to_json(e->output), rename_map, e->id);
        doc.push_back(std::move(entry));
    }
    return doc;
}

PackageResult build_submission(std::span<const SubmissionEntry> entries,
                               const std::map<std::string, std::string>& rename_map) {
    PackageResult result;
    const ordered_json doc = submission_document(entries, rename_map);
    result.entries = doc.size();
    if (entries.empty()) result.warnings.push_back("submission is empty");
    const ArchiveMember member{std::string(kMember), doc.dump(2, ' ', false, ordered_json::error_handler_t::strict) + "\n"};
    result.archive_bytes = make_zip(std::span(&member, 1));
    return result;
}

PackageResult package_submission(std::span<const SubmissionEntry> entries,
                                 const std::map<std::string, std::string>& rename_map,
                                 const std::filesystem::path& out_path) {
    PackageResult result = build_submission(entries, rename_map);
    write_file(out_path, result.archive_bytes);
    return result;
}

std::vector<SubmissionEntry> unpack_submission(std::string_view archive_bytes,
                                               const std::map<std::string, std::string>& rename_map) {
    const auto members = read_zip(archive_bytes);
    if (members.size() != 1 || members.front().name != kMember) {
        throw FormatError("submission archive must hold exactly one member named submission.json");
    }
    ordered_json doc;
    try {
        doc = ordered_json::parse(members.front().data);
    } catch (const ordered_json::exception& e) {
        throw FormatError(std::string("submission.json: ") + e.what());
    }
    if (!doc.is_array()) throw FormatError("submission.json is not a list");
    std::map<std::string, std::string> reverse;
    for (const auto& [from, to] : rename_map) reverse[to] = from;
    std::vector<SubmissionEntry> out;
    for (const ordered_json& entry : doc) {
        if (!entry.is_object() || !entry.contains("id") || !entry["id"].is_string() || !entry.contains("output") ||
            !entry["output"].is_object()) {
            throw FormatError("submission entry lacks id or output");
        }
        SubmissionEntry e;
        e.id = entry["id"].get<std::string>();
        if (entry.contains("question") && entry["question"].is_string()) e.question = entry["question"].get<std::string>();
        e.output = prediction_from_json(renamed(entry["output"], reverse, e.id));
        e.output.id = e.id;
        out.push_back(std::move(e));
    }
    return out;
}

}  // namespace mawarith
