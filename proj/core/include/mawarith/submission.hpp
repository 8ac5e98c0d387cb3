#pragma once

#include <filesystem>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "mawarith/prediction.hpp"

namespace mawarith {

struct SubmissionEntry {
    std::string id;
    std::string question;
    Prediction output;
};

struct PackageResult {
    std::string archive_bytes;
    std::size_t entries = 0;
    std::vector<std::string> warnings;
};

/// The submission.json document: entries sorted by id, each
/// {id, question, output} with the output's top-level keys renamed.
/// Throws InputError on a duplicate id, on an output that fails validation,
/// or when a rename would collide with an existing key.
ordered_json submission_document(std::span<const SubmissionEntry> entries,
                                 const std::map<std::string, std::string>& rename_map);

/// Builds the archive with the single member submission.json. An empty
/// entry list is packaged with a warning.
PackageResult build_submission(std::span<const SubmissionEntry> entries,
                               const std::map<std::string, std::string>& rename_map);

/// build_submission, then writes the archive to out_path.
PackageResult package_submission(std::span<const SubmissionEntry> entries,
                                 const std::map<std::string, std::string>& rename_map,
                                 const std::filesystem::path& out_path);

/// Reads back an archive: exactly one member, submission.json, holding a
/// list. Renamed keys are mapped back before decoding. Throws FormatError.
std::vector<SubmissionEntry> unpack_submission(std::string_view archive_bytes,
                                               const std::map<std::string, std::string>& rename_map);

}  // namespace mawarith
