#include "corpus_gen.hpp"
#include "geosent/core/random.hpp"
#include "geosent/pipeline/filtration.hpp"

#include <doctest.h>

using namespace geosent;
using namespace geosent::pipeline;

namespace {

textprep::CleanerConfig cleaner() {
    textprep::CleanerConfig c;
    c.stopwords = textprep::TermSet({"og", "er", "blir"});
    c.keywords = textprep::TermSet({"vindkraft", "havvind"});
    return c;
}

}  // namespace

TEST_CASE("filtration ledger is conserved and the retained set is consistent") {
    const auto gazetteer = testing::small_gazetteer();
    for (std::uint64_t seed = 1; seed <= 15; ++seed) {
        const std::size_t size = seed == 1 ? 0 : seed * 37;
        const auto corpus = testing::random_corpus(seed, size);
        const auto result = run_filtration(corpus, gazetteer, cleaner());
        CHECK(result.ledger.total_in == corpus.size());
        CHECK(result.ledger.conserved());
        CHECK(result.ledger.retained == result.retained.size());
        CHECK(result.documents.size() == result.retained.size());
        for (std::size_t i = 0; i < result.retained.size(); ++i) {
            CHECK(result.documents[i].post_id == result.retained[i].post.id);
            if (i > 0) CHECK(ingest::chronological_less(result.retained[i - 1].post, result.retained[i].post));
        }
    }
}

TEST_CASE("filtration does not depend on input order") {
    const auto gazetteer = testing::small_gazetteer();
    for (std::uint64_t seed = 40; seed < 45; ++seed) {
        const auto corpus = testing::random_corpus(seed, 300);
        auto shuffled = corpus;
        Rng rng(seed * 13);
        rng.shuffle(std::span<ingest::PostRecord>(shuffled));
        const auto a = run_filtration(corpus, gazetteer, cleaner());
        const auto b = run_filtration(shuffled, gazetteer, cleaner());
        CHECK(a.ledger == b.ledger);
        REQUIRE(a.retained.size() == b.retained.size());
        for (std::size_t i = 0; i < a.retained.size(); ++i) {
            CHECK(a.retained[i].post == b.retained[i].post);
            CHECK(a.documents[i].tokens == b.documents[i].tokens);
        }
    }
}
