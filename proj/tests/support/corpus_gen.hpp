#pragma once

#include "geosent/core/random.hpp"
#include "geosent/geocode/gazetteer.hpp"
#include "geosent/ingest/post_record.hpp"
#include "geosent/textprep/unicode.hpp"

#include <cstdint>
#include <map>
#include <string>
#include <vector>

namespace geosent::testing {

inline std::string timestamp_at(std::uint64_t offset_seconds) {
    // 2010-01-01T00:00:00Z plus the offset.
    return format_rfc3339(Timestamp{std::chrono::seconds{1262304000 + static_cast<long long>(offset_seconds)}});
}

inline geocode::Gazetteer small_gazetteer() {
    std::vector<geocode::GazetteerEntry> entries{
        geocode::Gazetteer::make_entry("Oslo", "NO081", 709037),
        geocode::Gazetteer::make_entry("Bergen", "NO0A2", 286930),
        geocode::Gazetteer::make_entry("Trondheim", "NO060", 207595),
        geocode::Gazetteer::make_entry("Tromsø", "NO074", 77544),
        geocode::Gazetteer::make_entry("Stavanger", "NO0A1", 144699),
        geocode::Gazetteer::make_entry("Mo i Rana", "NO071", 26000),
    };
    return geocode::Gazetteer(std::move(entries), geocode::default_regions());
}

/// Random corpus with geodata noise (missing, illegible, resolvable),
/// complete and truncated retweets with and without originals, quotes,
/// URL-only and very short posts. Deterministic in the seed.
inline std::vector<ingest::PostRecord> random_corpus(std::uint64_t seed, std::size_t size) {
    static const std::vector<std::string> words{
        "turbinene", "ødelegger", "naturen", "strømmen", "blir", "billigere", "fjellet", "kysten",
        "konsesjon", "protest", "arbeidsplasser", "fornybar", "fremtid", "fugler", "støy", "utsikt",
        "vindkraft", "havvind", "bra", "dårlig", "kommunen", "Oslo", "Bergen", "#energi", "😀"};
    static const std::vector<std::string> places{"Oslo", "Bergen", "trondheim", "TROMSØ", "Mo i Rana",
                                                 "Stavanger, Norge", "the couch", "Middle Earth", "", "   "};
    Rng rng(seed);
    const std::size_t author_count = 1 + size / 8;
    std::vector<ingest::PostRecord> out;
    out.reserve(size);
    for (std::size_t i = 0; i < size; ++i) {
        ingest::PostRecord r;
        r.id = std::to_string(1000000 + i);
        const auto author = rng.below(author_count);
        r.author_id = "a" + std::to_string(author);
        r.author_handle = "h" + std::to_string(author);
        r.created_at = parse_rfc3339(timestamp_at(rng.below(400'000'000)));
        r.like_count = rng.below(50);
        r.retweet_count = rng.below(10);

        const auto geo_roll = rng.below(10);
        if (geo_roll < 3) {
            r.post_geo = places[rng.below(places.size())];
        }
        if (geo_roll >= 2 && geo_roll < 9) {
            r.user_location = places[rng.below(places.size())];
        }

        std::string body;
        const std::size_t n_words = 1 + rng.below(14);
        for (std::size_t w = 0; w < n_words; ++w) {
            if (w) body += ' ';
            body += words[rng.below(words.size())];
        }

        const auto kind_roll = rng.below(20);
        if (kind_roll < 3 && !out.empty()) {
            // Retweet of an earlier post, possibly truncated.
            const auto& src = out[rng.below(out.size())];
            r.kind = ingest::PostKind::retweet;
            std::string text = src.text;
            if (text.rfind("RT", 0) == 0) text = body;
            if (rng.below(2) == 0 && text.size() > 24) {
                std::size_t cut = 20 + rng.below(text.size() - 20);
                while (cut < text.size() && (static_cast<unsigned char>(text[cut]) & 0xC0) == 0x80) ++cut;
                text = text.substr(0, cut) + (rng.below(2) ? "..." : "…");
            }
            r.text = (rng.below(4) == 0 ? "RT : @" + src.author_handle + " " : "RT @" + src.author_handle + ": ") + text;
        } else if (kind_roll < 5) {
            // Truncated retweet whose original is not in the corpus.
            r.kind = ingest::PostKind::retweet;
            r.text = "RT @h" + std::to_string(rng.below(author_count)) + ": gone " + body + "...";
        } else if (kind_roll < 6) {
            r.kind = ingest::PostKind::quote;
            r.text = body + " https://twitter.com/h" + std::to_string(rng.below(author_count)) + "/status/42";
        } else if (kind_roll < 7) {
            r.text = "https://t.co/" + std::to_string(rng.below(100000));
        } else if (kind_roll < 8) {
            r.text = "ok";
        } else {
            r.text = body;
        }
        out.push_back(std::move(r));
    }
    return out;
}

struct RepairFixture {
    std::vector<ingest::PostRecord> corpus;
    /// Truncated retweet id -> exact expected repaired text.
    std::map<std::string, std::string> expected;
    std::vector<std::string> orphans;
};

/// Originals with distinct prefixes; each truncated retweet cuts an original
/// at 20 or more code points, or quotes text that is absent from the corpus.
inline RepairFixture repair_fixture(std::uint64_t seed, std::size_t originals) {
    static const std::vector<std::string> words{"vindkraft", "på", "land", "er", "en", "dårlig", "idé", "for",
                                                "naturen", "og", "fuglelivet", "i", "Trøndelag", "økonomi"};
    Rng rng(seed);
    RepairFixture f;
    std::vector<std::size_t> original_index;
    std::size_t next_id = 1;
    const auto id = [&] { return "p" + std::to_string(100000 + next_id++); };

    for (std::size_t i = 0; i < originals; ++i) {
        ingest::PostRecord r;
        r.id = id();
        r.author_id = "u" + std::to_string(i % 17);
        r.author_handle = "user" + std::to_string(i % 17);
        r.created_at = parse_rfc3339(timestamp_at(i * 60));
        r.text = "Melding " + std::to_string(10000 + i) + ":";
        const std::size_t n = 6 + rng.below(20);
        for (std::size_t w = 0; w < n; ++w) r.text += " " + words[rng.below(words.size())];
        original_index.push_back(f.corpus.size());
        f.corpus.push_back(std::move(r));
    }

    for (std::size_t i = 0; i < originals; ++i) {
        const ingest::PostRecord src = f.corpus[original_index[i]];
        ingest::PostRecord rt;
        rt.id = id();
        rt.author_id = "r" + std::to_string(rng.below(9));
        rt.author_handle = "retweeter" + rt.author_id;
        rt.created_at = parse_rfc3339(timestamp_at(originals * 60 + i * 7));
        rt.kind = ingest::PostKind::retweet;
        const std::u32string body = textprep::decode_utf8(src.text);
        const std::size_t cut = 20 + rng.below(body.size() - 20);
        const std::string prefix = (rng.below(3) == 0) ? "RT : @" + src.author_handle + " "
                                                       : "RT @" + src.author_handle + ": ";
        rt.text = prefix + textprep::encode_utf8(body.substr(0, cut)) + (rng.below(2) ? "..." : "…");
        f.expected[rt.id] = prefix + src.text;
        f.corpus.push_back(std::move(rt));

        if (rng.below(3) == 0) {
            ingest::PostRecord orphan;
            orphan.id = id();
            orphan.author_id = "o" + std::to_string(i);
            orphan.author_handle = "orphan" + std::to_string(i % 50);
            orphan.created_at = parse_rfc3339(timestamp_at(originals * 90 + i));
            orphan.kind = ingest::PostKind::retweet;
            orphan.text = "RT @" + src.author_handle + ": Slettet " + std::to_string(i) + " melding som ikke finnes...";
            f.orphans.push_back(orphan.id);
            f.corpus.push_back(std::move(orphan));
        }
    }
    Rng shuffle(seed ^ 0x5eedULL);
    shuffle.shuffle(std::span<ingest::PostRecord>(f.corpus));
    return f;
}

}  // namespace geosent::testing
