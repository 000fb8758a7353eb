#pragma once

#include "geosent/classify/prediction.hpp"

#include <chrono>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace geosent::classify {

/// Bidirectional newline-delimited text channel.
class LineChannel {
public:
    virtual ~LineChannel() = default;
    virtual void write_line(std::string_view line) = 0;
    /// nullopt on timeout. Throws AdapterError when the peer closed the stream.
    virtual std::optional<std::string> read_line(std::chrono::milliseconds timeout) = 0;
};

/// Standard streams of a spawned child process.
std::unique_ptr<LineChannel> spawn_process_channel(const std::vector<std::string>& argv);

/// TCP connection to a listening adapter.
std::unique_ptr<LineChannel> connect_tcp_channel(const std::string& host, int port);

/// "exec:<command line>" (split on whitespace) or "tcp:<host>:<port>".
std::unique_ptr<LineChannel> open_adapter(std::string_view address);

struct AdapterOptions {
    std::chrono::milliseconds timeout{30000};
    std::size_t batch_size = 64;
};

struct AdapterDocument {
    std::string id;
    std::string text;
};

/// Client side of the external classifier protocol: the adapter first sends
/// {"ready": true}; each request {"id", "text"} is answered exactly once by
/// {"id", "scores": [neg, neu, pos]} in any order.
class AdapterClient {
public:
    AdapterClient(std::unique_ptr<LineChannel> channel, AdapterOptions options = {});

    /// Blocks until the readiness line. Throws AdapterError on anything else.
    void await_ready();

    /// One prediction per document, sorted by id. A batch that times out or
    /// violates the protocol is re-sent once; a second failure throws
    /// AdapterError carrying the offending payload.
    std::vector<Prediction> classify(std::span<const AdapterDocument> documents);

    /// Human-readable notes about retries.
    const std::vector<std::string>& log() const noexcept { return log_; }

private:
    std::vector<Prediction> run_batch(std::span<const AdapterDocument> batch);

    std::unique_ptr<LineChannel> channel_;
    AdapterOptions options_;
    bool ready_ = false;
    std::vector<std::string> log_;
};

}  // namespace geosent::classify
