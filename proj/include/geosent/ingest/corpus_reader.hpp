#pragma once

#include "geosent/ingest/post_record.hpp"

#include <cstddef>
#include <filesystem>
#include <istream>
#include <ostream>
#include <span>
#include <string>
#include <vector>

namespace geosent::ingest {

struct LineIssue {
    std::size_t line = 0;
    std::string message;
    std::string raw;
};

struct CorpusReadResult {
    std::vector<PostRecord> records;   ///< file order, first occurrence of each id
    std::vector<LineIssue> malformed;  ///< skipped lines
    std::vector<LineIssue> duplicates; ///< later occurrences of an id, rejected
};

/// One JSON object per line. Blank lines are ignored. Throws InputError when
/// the file cannot be opened.
CorpusReadResult read_corpus(const std::filesystem::path& path);
CorpusReadResult read_corpus(std::istream& in);

void write_corpus(std::ostream& out, std::span<const PostRecord> records);

/// Quarantine side file: {"line": n, "error": "...", "raw": "..."} per line.
void write_quarantine(std::ostream& out, std::span<const LineIssue> issues);

}  // namespace geosent::ingest
