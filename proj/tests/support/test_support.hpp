#pragma once

#include "geosent/ingest/post_record.hpp"

#include <filesystem>
#include <fstream>
#include <random>
#include <string>
#include <string_view>

namespace geosent::testing {

/// Fresh directory under the system temp dir, removed on destruction.
class TempDir {
public:
    explicit TempDir(std::string_view tag) {
        static std::mt19937_64 salt{std::random_device{}()};
        path_ = std::filesystem::temp_directory_path() /
                ("geosent-" + std::string(tag) + "-" + std::to_string(salt()));
        std::filesystem::create_directories(path_);
    }
    ~TempDir() {
        std::error_code ec;
        std::filesystem::remove_all(path_, ec);
    }
    TempDir(const TempDir&) = delete;
    TempDir& operator=(const TempDir&) = delete;

    const std::filesystem::path& path() const noexcept { return path_; }
    std::filesystem::path operator/(std::string_view name) const { return path_ / name; }

private:
    std::filesystem::path path_;
};

inline void write_file(const std::filesystem::path& path, std::string_view content) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    out << content;
}

inline std::string read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

inline ingest::PostRecord make_post(std::string id, std::string author, std::string handle, std::string created_at,
                                    std::string text) {
    ingest::PostRecord r;
    r.id = std::move(id);
    r.author_id = std::move(author);
    r.author_handle = std::move(handle);
    r.created_at = parse_rfc3339(created_at);
    r.text = std::move(text);
    r.kind = ingest::PostKind::original;
    return r;
}

}  // namespace geosent::testing
