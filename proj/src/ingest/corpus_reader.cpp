#include "geosent/ingest/corpus_reader.hpp"

#include "geosent/core/error.hpp"

#include <fstream>
#include <unordered_set>

namespace geosent::ingest {

CorpusReadResult read_corpus(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw InputError("cannot read corpus file " + path.string());
    return read_corpus(in);
}

CorpusReadResult read_corpus(std::istream& in) {
    CorpusReadResult result;
    std::unordered_set<std::string> seen;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.find_first_not_of(" \t") == std::string::npos) continue;
        try {
            PostRecord record = post_from_json(nlohmann::json::parse(line));
            if (!seen.insert(record.id).second) {
                result.duplicates.push_back({line_no, "duplicate id '" + record.id + "'", line});
                continue;
            }
            result.records.push_back(std::move(record));
        } catch (const std::exception& e) {
            result.malformed.push_back({line_no, e.what(), line});
        }
    }
    if (in.bad()) throw InputError("I/O error while reading corpus");
    return result;
}

void write_corpus(std::ostream& out, std::span<const PostRecord> records) {
    for (const auto& r : records) out << to_json(r).dump() << '\n';
}

void write_quarantine(std::ostream& out, std::span<const LineIssue> issues) {
    for (const auto& issue : issues) {
        nlohmann::ordered_json j;
        j["line"] = issue.line;
        j["error"] = issue.message;
        j["raw"] = issue.raw;
        out << j.dump(-1, ' ', false, nlohmann::json::error_handler_t::replace) << '\n';
    }
}

}  // namespace geosent::ingest
