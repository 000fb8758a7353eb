#include "geosent/classify/adapter_client.hpp"

#include "geosent/core/error.hpp"

#include <json.hpp>

#include <netdb.h>
#include <poll.h>
#include <signal.h>
#include <spawn.h>
#include <sys/socket.h>
#include <sys/wait.h>
#include <unistd.h>

#include <algorithm>
#include <cerrno>
#include <cmath>
#include <cstring>
#include <map>
#include <sstream>

extern char** environ;

namespace geosent::classify {

namespace {

class FdChannel : public LineChannel {
public:
    FdChannel(int read_fd, int write_fd) : read_fd_(read_fd), write_fd_(write_fd) {}

    ~FdChannel() override { close_fds(); }

    void write_line(std::string_view line) override {
        std::string data(line);
        data.push_back('\n');
        std::size_t offset = 0;
        while (offset < data.size()) {
            const ssize_t n = send_bytes(data.data() + offset, data.size() - offset);
            if (n < 0) {
                if (errno == EINTR) continue;
                throw AdapterError(std::string("adapter write failed: ") + std::strerror(errno));
            }
            offset += static_cast<std::size_t>(n);
        }
    }

    std::optional<std::string> read_line(std::chrono::milliseconds timeout) override {
        const auto deadline = std::chrono::steady_clock::now() + timeout;
        for (;;) {
            if (const auto pos = buffer_.find('\n'); pos != std::string::npos) {
                std::string line = buffer_.substr(0, pos);
                buffer_.erase(0, pos + 1);
                if (!line.empty() && line.back() == '\r') line.pop_back();
                return line;
            }
            if (eof_) throw AdapterError("adapter closed the stream");
            const auto remaining = std::chrono::duration_cast<std::chrono::milliseconds>(
                deadline - std::chrono::steady_clock::now());
            if (remaining.count() <= 0) return std::nullopt;
            pollfd pfd{read_fd_, POLLIN, 0};
            const int ready = ::poll(&pfd, 1, static_cast<int>(std::min<long long>(remaining.count(), 1 << 30)));
            if (ready < 0) {
                if (errno == EINTR) continue;
                throw AdapterError(std::string("adapter poll failed: ") + std::strerror(errno));
            }
            if (ready == 0) return std::nullopt;
            char chunk[4096];
            const ssize_t n = ::read(read_fd_, chunk, sizeof chunk);
            if (n < 0) {
                if (errno == EINTR) continue;
                throw AdapterError(std::string("adapter read failed: ") + std::strerror(errno));
            }
            if (n == 0) {
                eof_ = true;
                continue;
            }
            buffer_.append(chunk, static_cast<std::size_t>(n));
        }
    }

protected:
    virtual ssize_t send_bytes(const char* data, std::size_t size) { return ::write(write_fd_, data, size); }

    void close_fds() {
        if (write_fd_ >= 0 && write_fd_ != read_fd_) ::close(write_fd_);
        if (read_fd_ >= 0) ::close(read_fd_);
        read_fd_ = write_fd_ = -1;
    }

    int read_fd_;
    int write_fd_;

private:
    std::string buffer_;
    bool eof_ = false;
};

class ProcessChannel : public FdChannel {
public:
    ProcessChannel(int read_fd, int write_fd, pid_t pid) : FdChannel(read_fd, write_fd), pid_(pid) {}

    ~ProcessChannel() override {
        close_fds();
        for (int i = 0; i < 50; ++i) {
            int status = 0;
            if (::waitpid(pid_, &status, WNOHANG) != 0) return;
            ::usleep(20000);
        }
        ::kill(pid_, SIGTERM);
        int status = 0;
        ::waitpid(pid_, &status, 0);
    }

private:
    pid_t pid_;
};

class SocketChannel : public FdChannel {
public:
    explicit SocketChannel(int fd) : FdChannel(fd, fd) {}

protected:
    ssize_t send_bytes(const char* data, std::size_t size) override {
        return ::send(write_fd_, data, size, MSG_NOSIGNAL);
    }
};

std::vector<std::string> split_words(std::string_view text) {
    std::vector<std::string> words;
    std::istringstream in{std::string(text)};
    for (std::string w; in >> w;) words.push_back(w);
    return words;
}

}  // namespace

std::unique_ptr<LineChannel> spawn_process_channel(const std::vector<std::string>& argv) {
    if (argv.empty()) throw AdapterError("empty adapter command");
    // A dead child must surface as a write error, not terminate us.
    ::signal(SIGPIPE, SIG_IGN);

    int to_child[2];
    int from_child[2];
    if (::pipe(to_child) != 0) throw AdapterError("pipe failed");
    if (::pipe(from_child) != 0) {
        ::close(to_child[0]);
        ::close(to_child[1]);
        throw AdapterError("pipe failed");
    }
    posix_spawn_file_actions_t actions;
    posix_spawn_file_actions_init(&actions);
    posix_spawn_file_actions_adddup2(&actions, to_child[0], STDIN_FILENO);
    posix_spawn_file_actions_adddup2(&actions, from_child[1], STDOUT_FILENO);
    posix_spawn_file_actions_addclose(&actions, to_child[1]);
    posix_spawn_file_actions_addclose(&actions, from_child[0]);

    std::vector<char*> args;
    for (const auto& a : argv) args.push_back(const_cast<char*>(a.c_str()));
    args.push_back(nullptr);

    pid_t pid = 0;
    const int rc = ::posix_spawnp(&pid, args[0], &actions, nullptr, args.data(), environ);
    posix_spawn_file_actions_destroy(&actions);
    ::close(to_child[0]);
    ::close(from_child[1]);
    if (rc != 0) {
        ::close(to_child[1]);
        ::close(from_child[0]);
        throw AdapterError("cannot start adapter '" + argv[0] + "': " + std::strerror(rc));
    }
    return std::make_unique<ProcessChannel>(from_child[0], to_child[1], pid);
}

std::unique_ptr<LineChannel> connect_tcp_channel(const std::string& host, int port) {
    addrinfo hints{};
    hints.ai_family = AF_UNSPEC;
    hints.ai_socktype = SOCK_STREAM;
    addrinfo* result = nullptr;
    const std::string service = std::to_string(port);
    if (const int rc = ::getaddrinfo(host.c_str(), service.c_str(), &hints, &result); rc != 0) {
        throw AdapterError("cannot resolve adapter host " + host + ": " + ::gai_strerror(rc));
    }
    int fd = -1;
    for (addrinfo* ai = result; ai; ai = ai->ai_next) {
        fd = ::socket(ai->ai_family, ai->ai_socktype, ai->ai_protocol);
        if (fd < 0) continue;
        if (::connect(fd, ai->ai_addr, ai->ai_addrlen) == 0) break;
        ::close(fd);
        fd = -1;
    }
    ::freeaddrinfo(result);
    if (fd < 0) throw AdapterError("cannot connect to adapter at " + host + ":" + service);
    return std::make_unique<SocketChannel>(fd);
}

std::unique_ptr<LineChannel> open_adapter(std::string_view address) {
    if (address.starts_with("exec:")) return spawn_process_channel(split_words(address.substr(5)));
    if (address.starts_with("tcp:")) {
        const std::string_view rest = address.substr(4);
        const auto colon = rest.rfind(':');
        if (colon == std::string_view::npos) throw ConfigError("adapter address needs tcp:<host>:<port>");
        int port = 0;
        try {
            port = std::stoi(std::string(rest.substr(colon + 1)));
        } catch (const std::exception&) {
            throw ConfigError("bad adapter port in '" + std::string(address) + "'");
        }
        return connect_tcp_channel(std::string(rest.substr(0, colon)), port);
    }
    throw ConfigError("adapter address must start with exec: or tcp:");
}

AdapterClient::AdapterClient(std::unique_ptr<LineChannel> channel, AdapterOptions options)
    : channel_(std::move(channel)), options_(options) {
    if (options_.batch_size == 0) options_.batch_size = 1;
}

void AdapterClient::await_ready() {
    if (ready_) return;
    const auto line = channel_->read_line(options_.timeout);
    if (!line) throw AdapterError("adapter did not signal readiness in time");
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(*line);
    } catch (const std::exception&) {
        throw AdapterError("expected readiness line, got: " + *line);
    }
    if (!j.is_object() || j.size() != 1 || !j.contains("ready") || j["ready"] != true) {
        throw AdapterError("expected readiness line, got: " + *line);
    }
    ready_ = true;
}

namespace {

struct BatchFailure {
    std::string reason;
    std::string payload;
};

}  // namespace

std::vector<Prediction> AdapterClient::run_batch(std::span<const AdapterDocument> batch) {
    std::optional<BatchFailure> failure;
    for (int attempt = 0; attempt < 2; ++attempt) {
        failure.reset();
        if (attempt > 0) {
            // Replies still in flight from the failed attempt must not be
            // matched against the resent batch.
            while (channel_->read_line(std::chrono::milliseconds(100))) {
            }
        }
        std::map<std::string, std::optional<Prediction>> pending;
        for (const auto& doc : batch) pending.emplace(doc.id, std::nullopt);
        for (const auto& doc : batch) {
            nlohmann::ordered_json request;
            request["id"] = doc.id;
            request["text"] = doc.text;
            channel_->write_line(request.dump(-1, ' ', false, nlohmann::json::error_handler_t::replace));
        }

        std::size_t answered = 0;
        while (answered < pending.size()) {
            const auto line = channel_->read_line(options_.timeout);
            if (!line) {
                failure = BatchFailure{"timeout waiting for " + std::to_string(pending.size() - answered) + " responses",
                                       batch.front().id};
                break;
            }
            try {
                const auto j = nlohmann::json::parse(*line);
                if (!j.is_object() || !j.contains("id") || !j["id"].is_string()) {
                    throw std::invalid_argument("response without a string id");
                }
                if (j.contains("error")) throw std::invalid_argument("adapter reported an error");
                const auto id = j["id"].get<std::string>();
                const auto it = pending.find(id);
                if (it == pending.end()) throw std::invalid_argument("response for unknown id '" + id + "'");
                if (it->second) throw std::invalid_argument("second response for id '" + id + "'");
                const auto& scores = j.at("scores");
                if (!scores.is_array() || scores.size() != kSentimentClasses) {
                    throw std::invalid_argument("scores must be an array of three numbers");
                }
                Scores raw{};
                for (std::size_t k = 0; k < kSentimentClasses; ++k) {
                    if (!scores[k].is_number()) throw std::invalid_argument("non-numeric score");
                    raw[k] = scores[k].get<double>();
                }
                double sum = 0.0;
                for (double s : raw) sum += s;
                if (std::abs(sum - 1.0) > 1e-6) throw std::invalid_argument("scores do not sum to 1");
                it->second = make_prediction(id, raw);
                ++answered;
            } catch (const std::exception& e) {
                failure = BatchFailure{e.what(), *line};
                break;
            }
        }
        if (!failure) {
            std::vector<Prediction> out;
            for (auto& [id, p] : pending) out.push_back(std::move(*p));
            return out;
        }
        log_.push_back("batch starting at '" + batch.front().id + "' failed (" + failure->reason + ")" +
                       (attempt == 0 ? ", retrying" : ""));
    }
    throw AdapterError("adapter protocol failure: " + failure->reason + "; payload: " + failure->payload);
}

std::vector<Prediction> AdapterClient::classify(std::span<const AdapterDocument> documents) {
    std::vector<Prediction> out;
    if (documents.empty()) return out;
    await_ready();
    for (std::size_t start = 0; start < documents.size(); start += options_.batch_size) {
        const auto batch = documents.subspan(start, std::min(options_.batch_size, documents.size() - start));
        auto predictions = run_batch(batch);
        out.insert(out.end(), std::make_move_iterator(predictions.begin()), std::make_move_iterator(predictions.end()));
    }
    std::sort(out.begin(), out.end(), [](const Prediction& a, const Prediction& b) { return a.post_id < b.post_id; });
    return out;
}

}  // namespace geosent::classify
