#include "geosent/classify/adapter_client.hpp"
#include "geosent/classify/classifier.hpp"
#include "geosent/core/error.hpp"

#include <doctest.h>

#include <arpa/inet.h>
#include <netinet/in.h>
#include <sys/socket.h>
#include <unistd.h>

#include <thread>

using namespace geosent;
using namespace geosent::classify;

namespace {

AdapterClient fake(const std::string& mode, std::size_t batch = 8, int timeout_ms = 2000) {
    return AdapterClient(open_adapter("exec:" FAKE_ADAPTER_PATH " " + mode),
                         {std::chrono::milliseconds(timeout_ms), batch});
}

std::vector<AdapterDocument> documents(std::size_t n, const std::string& text = "tekst") {
    std::vector<AdapterDocument> docs;
    for (std::size_t i = 0; i < n; ++i) docs.push_back({"id" + std::to_string(100 + i), text});
    return docs;
}

}  // namespace

TEST_CASE("adapter: fixed scores give the argmax label") {
    auto client = fake("fixed 0.1 0.2 0.7");
    const auto out = client.classify(documents(20));
    REQUIRE(out.size() == 20);
    for (const auto& p : out) CHECK(p.label == Sentiment::positive);
    CHECK(out.front().post_id == "id100");
}

TEST_CASE("adapter: tied scores resolve to the lower index") {
    auto client = fake("fixed 0.4 0.4 0.2");
    for (const auto& p : client.classify(documents(5))) CHECK(p.label == Sentiment::negative);
}

TEST_CASE("adapter: empty input sends nothing") {
    auto client = fake("fixed 0.1 0.2 0.7");
    CHECK(client.classify({}).empty());
}

TEST_CASE("adapter: out-of-order replies are matched by id") {
    auto client = fake("reverse", 16);
    std::vector<AdapterDocument> docs;
    for (int i = 0; i < 50; ++i) docs.push_back({"d" + std::to_string(1000 + i), i % 3 == 0 ? "neg" : "pos"});
    const auto out = client.classify(docs);
    REQUIRE(out.size() == 50);
    for (int i = 0; i < 50; ++i) {
        CHECK(out[i].post_id == "d" + std::to_string(1000 + i));
        CHECK(out[i].label == (i % 3 == 0 ? Sentiment::negative : Sentiment::positive));
    }
}

TEST_CASE("adapter: a garbled reply is retried once") {
    auto client = fake("garble-first", 4);
    const auto out = client.classify(documents(9));
    CHECK(out.size() == 9);
    CHECK_FALSE(client.log().empty());
}

TEST_CASE("adapter: persistent protocol violations raise adapter errors") {
    for (const char* mode : {"garble", "unknown-id", "bad-sum"}) {
        CAPTURE(mode);
        auto client = fake(mode, 4);
        CHECK_THROWS_AS(client.classify(documents(3)), AdapterError);
    }
    auto silent = fake("silent", 4, 200);
    CHECK_THROWS_AS(silent.classify(documents(2)), AdapterError);
    auto rude = fake("no-ready");
    CHECK_THROWS_AS(rude.await_ready(), AdapterError);
}

TEST_CASE("adapter: bad addresses") {
    CHECK_THROWS_AS(open_adapter("carrier-pigeon:coop"), ConfigError);
    CHECK_THROWS_AS(open_adapter("tcp:localhost"), ConfigError);
    CHECK_THROWS_AS(open_adapter("exec:/nonexistent/adapter-binary"), AdapterError);
}

TEST_CASE("adapter: classify_corpus sends the cleaned text") {
    auto client = fake("lexical");
    std::vector<textprep::CleanedDocument> docs(2);
    docs[0].post_id = "b";
    docs[0].tokens = {"veldig", "neg"};
    docs[1].post_id = "a";
    docs[1].tokens = {"nøytral", "tekst"};
    const auto out = classify_corpus(client, docs);
    REQUIRE(out.size() == 2);
    CHECK(out[0].post_id == "a");
    CHECK(out[0].label == Sentiment::neutral);
    CHECK(out[1].label == Sentiment::negative);
}

TEST_CASE("adapter: tcp transport") {
    const int server = ::socket(AF_INET, SOCK_STREAM, 0);
    REQUIRE(server >= 0);
    sockaddr_in addr{};
    addr.sin_family = AF_INET;
    addr.sin_addr.s_addr = htonl(INADDR_LOOPBACK);
    addr.sin_port = 0;
    REQUIRE(::bind(server, reinterpret_cast<sockaddr*>(&addr), sizeof addr) == 0);
    REQUIRE(::listen(server, 1) == 0);
    socklen_t len = sizeof addr;
    ::getsockname(server, reinterpret_cast<sockaddr*>(&addr), &len);
    const int port = ntohs(addr.sin_port);

    std::thread responder([server] {
        const int conn = ::accept(server, nullptr, nullptr);
        const std::string ready = "{\"ready\": true}\n";
        (void)!::write(conn, ready.data(), ready.size());
        std::string buffer;
        char chunk[1024];
        int answered = 0;
        while (answered < 3) {
            const ssize_t n = ::read(conn, chunk, sizeof chunk);
            if (n <= 0) break;
            buffer.append(chunk, static_cast<std::size_t>(n));
            for (auto pos = buffer.find('\n'); pos != std::string::npos; pos = buffer.find('\n')) {
                const auto request = nlohmann::json::parse(buffer.substr(0, pos));
                buffer.erase(0, pos + 1);
                const std::string reply =
                    nlohmann::json{{"id", request["id"]}, {"scores", {0.6, 0.3, 0.1}}}.dump() + "\n";
                (void)!::write(conn, reply.data(), reply.size());
                ++answered;
            }
        }
        ::close(conn);
    });

    AdapterClient client(open_adapter("tcp:127.0.0.1:" + std::to_string(port)), {std::chrono::seconds(5), 8});
    const auto out = client.classify(documents(3));
    responder.join();
    ::close(server);
    REQUIRE(out.size() == 3);
    for (const auto& p : out) CHECK(p.label == Sentiment::negative);
}
