#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <set>

#include <json.hpp>

#include "emotrend/corpus.hpp"
#include "emotrend/errors.hpp"

using namespace emotrend;
namespace fs = std::filesystem;

namespace {

fs::path scratch_file(const std::string& name) {
    const fs::path dir = fs::temp_directory_path() / "emotrend_corpus_tests";
    fs::create_directories(dir);
    return dir / name;
}

void write_lines(const fs::path& path, const std::vector<std::string>& lines) {
    std::ofstream out(path);
    for (const auto& line : lines) out << line << '\n';
}

DayWindow may_window() {
    return make_window(CivilDay{2020, 5, 1}, CivilDay{2020, 5, 31});
}

std::string record(const std::string& id, const std::string& text, const std::string& ts) {
    return "{\"id\": \"" + id + "\", \"text\": \"" + text + "\", \"created_at\": \"" + ts + "\"}";
}

}  // namespace

TEST_CASE("ingest keeps in-window records sorted by time") {
    const auto path = scratch_file("basic.jsonl");
    write_lines(path, {
                          record("b", "second tweet", "2020-05-02T10:00:00Z"),
                          record("a", "first tweet", "2020-05-01T09:00:00Z"),
                          record("c", "third tweet", "2020-05-03T11:30:00Z"),
                      });
    IngestStats stats;
    const Corpus corpus = ingest_jsonl(path.string(), may_window(), &stats);
    REQUIRE(corpus.size() == 3);
    CHECK(corpus.tweets[0].id == "a");
    CHECK(corpus.tweets[1].id == "b");
    CHECK(corpus.tweets[2].id == "c");
    CHECK(stats.malformed == 0);
}

TEST_CASE("ingest drops records outside the window") {
    const auto path = scratch_file("window.jsonl");
    write_lines(path, {
                          record("a", "in window", "2020-05-01T09:00:00Z"),
                          record("b", "also in window", "2020-05-30T09:00:00Z"),
                          record("c", "before window", "2020-04-30T23:59:59Z"),
                      });
    IngestStats stats;
    const Corpus corpus = ingest_jsonl(path.string(), may_window(), &stats);
    CHECK(corpus.size() == 2);
    CHECK(stats.out_of_window == 1);
}

TEST_CASE("ingest counts malformed lines without failing") {
    const auto path = scratch_file("malformed.jsonl");
    write_lines(path, {
                          record("a", "ok", "2020-05-01T09:00:00Z"),
                          "{\"id\": \"broken\"",
                          record("b", "ok too", "2020-05-02T09:00:00Z"),
                          record("c", "fine", "2020-05-03T09:00:00Z"),
                          record("d", "still fine", "2020-05-04T09:00:00Z"),
                      });
    IngestStats stats;
    const Corpus corpus = ingest_jsonl(path.string(), may_window(), &stats);
    CHECK(corpus.size() == 4);
    CHECK(stats.malformed == 1);
}

TEST_CASE("ingest rejects bad timestamps, empty text and duplicate ids as malformed") {
    const auto path = scratch_file("bad_records.jsonl");
    write_lines(path, {
                          record("a", "ok", "2020-05-01T09:00:00Z"),
                          record("b", "bad time", "2020-13-01T09:00:00Z"),
                          record("c", "   ", "2020-05-02T09:00:00Z"),
                          record("a", "duplicate id", "2020-05-03T09:00:00Z"),
                      });
    IngestStats stats;
    const Corpus corpus = ingest_jsonl(path.string(), may_window(), &stats);
    CHECK(corpus.size() == 1);
    CHECK(stats.malformed == 3);
}

TEST_CASE("ingest errors") {
    CHECK_THROWS_AS(ingest_jsonl("/nonexistent/nowhere.jsonl", may_window(), nullptr), IoError);

    const auto path = scratch_file("all_out.jsonl");
    write_lines(path, {record("a", "text", "2019-01-01T00:00:00Z")});
    CHECK_THROWS_AS(ingest_jsonl(path.string(), may_window(), nullptr), DataError);
}

TEST_CASE("ingest accepts timestamp variants") {
    const auto path = scratch_file("timestamps.jsonl");
    write_lines(path, {
                          record("a", "zulu", "2020-05-01T10:00:00Z"),
                          record("b", "offset", "2020-05-01T12:00:00+02:00"),
                          record("c", "fractional", "2020-05-01T10:00:00.123Z"),
                          record("d", "date only", "2020-05-02"),
                      });
    const Corpus corpus = ingest_jsonl(path.string(), may_window(), nullptr);
    REQUIRE(corpus.size() == 4);
    // b's offset timestamp is the same instant as a's.
    CHECK(corpus.tweets[0].timestamp == corpus.tweets[1].timestamp);
}

TEST_CASE("round trip: ingest, serialize, ingest again") {
    const auto path = scratch_file("roundtrip.jsonl");
    write_lines(path, {
                          record("a", "hello world", "2020-05-01T09:00:00Z"),
                          record("b", "another tweet", "2020-05-02T10:30:00Z"),
                          record("c", "third one", "2020-05-03T11:00:00Z"),
                      });
    const Corpus first = ingest_jsonl(path.string(), may_window(), nullptr);
    const auto out = scratch_file("roundtrip_out.jsonl");
    write_jsonl(first, out.string());
    const Corpus second = ingest_jsonl(out.string(), may_window(), nullptr);
    CHECK(first.tweets == second.tweets);
}

namespace {

Corpus corpus_of(std::vector<Tweet> tweets) {
    Corpus c;
    c.window = may_window();
    c.tweets = std::move(tweets);
    return c;
}

}  // namespace

TEST_CASE("deduplicate keeps distinct texts") {
    const Corpus corpus = corpus_of({
        {"a", "first text", 1588323600},
        {"b", "second text", 1588410000},
    });
    const Corpus out = deduplicate(corpus);
    CHECK(out.tweets == corpus.tweets);
}

TEST_CASE("deduplicate keeps the earliest of case/whitespace variants") {
    const Corpus corpus = corpus_of({
        {"a", "Stay Home  Stay Safe", 1588323600},
        {"b", "stay home stay safe", 1588410000},
    });
    std::size_t removed = 0;
    const Corpus out = deduplicate(corpus, &removed);
    REQUIRE(out.size() == 1);
    CHECK(out.tweets[0].id == "a");
    CHECK(removed == 1);
}

TEST_CASE("deduplicate strips urls before comparing") {
    const Corpus corpus = corpus_of({
        {"a", "read this https://a.example/x", 1588323600},
        {"b", "read this https://b.example/y", 1588410000},
    });
    const Corpus out = deduplicate(corpus);
    REQUIRE(out.size() == 1);
    CHECK(out.tweets[0].id == "a");
}

TEST_CASE("deduplicate agrees with brute-force pairwise comparison") {
    const Corpus corpus = corpus_of({
        {"a", "Stay home", 100},
        {"b", "totally different", 200},
        {"c", "stay  HOME", 300},
        {"d", "one more text", 400},
        {"e", "Totally Different", 500},
        {"f", "unique words here", 600},
    });
    // Oracle: mark every tweet that normalizes equal to an earlier one.
    std::vector<std::string> expected_ids;
    for (std::size_t i = 0; i < corpus.tweets.size(); ++i) {
        bool duplicate = false;
        for (std::size_t j = 0; j < i; ++j) {
            if (normalize_for_dedup(corpus.tweets[i].text) ==
                normalize_for_dedup(corpus.tweets[j].text)) {
                duplicate = true;
                break;
            }
        }
        if (!duplicate) expected_ids.push_back(corpus.tweets[i].id);
    }
    const Corpus out = deduplicate(corpus);
    std::vector<std::string> actual_ids;
    for (const auto& t : out.tweets) actual_ids.push_back(t.id);
    CHECK(actual_ids == expected_ids);
}

TEST_CASE("deduplicate is idempotent") {
    const Corpus corpus = corpus_of({
        {"a", "same text", 100},
        {"b", "Same Text", 200},
        {"c", "other", 300},
    });
    const Corpus once = deduplicate(corpus);
    const Corpus twice = deduplicate(once);
    CHECK(once.tweets == twice.tweets);
}

TEST_CASE("filter_relevant keeps tweets with keep terms and no drop terms") {
    const Corpus corpus = corpus_of({
        {"a", "please #StayAtHome everyone", 100},
        {"b", "nothing to see", 200},
    });
    const Corpus out = filter_relevant(corpus, {"stayathome"}, {});
    REQUIRE(out.size() == 1);
    CHECK(out.tweets[0].id == "a");
}

TEST_CASE("filter_relevant fixture: 6 keep, 1 of those dropped") {
    std::vector<Tweet> tweets;
    for (int i = 0; i < 10; ++i) {
        std::string text = i < 6 ? "message about stayathome order" : "unrelated chatter";
        if (i == 3) text += " spam";
        tweets.push_back({"t" + std::to_string(i), text, 100 + i});
    }
    const Corpus corpus = corpus_of(std::move(tweets));
    std::size_t removed = 0;
    const Corpus out = filter_relevant(corpus, {"stayathome"}, {"spam"}, &removed);

    // Oracle: per-tweet containment over the fixture.
    std::size_t expected = 0;
    for (const auto& t : corpus.tweets) {
        const bool keep = t.text.find("stayathome") != std::string::npos &&
                          t.text.find("spam") == std::string::npos;
        expected += keep ? 1 : 0;
    }
    CHECK(out.size() == expected);
    CHECK(out.size() == 5);
    CHECK(removed == 5);
}

TEST_CASE("filter_relevant properties and errors") {
    const Corpus corpus = corpus_of({
        {"a", "alpha beta", 100},
        {"b", "beta gamma", 200},
        {"c", "gamma delta", 300},
    });
    CHECK_THROWS_AS(filter_relevant(corpus, {}, {}), ConfigError);

    const Corpus keep_beta = filter_relevant(corpus, {"beta"}, {});
    CHECK(keep_beta.size() <= corpus.size());

    // A keep term present in every text is the identity.
    const Corpus corpus2 = corpus_of({
        {"a", "word common", 100},
        {"b", "common thing", 200},
    });
    CHECK(filter_relevant(corpus2, {"common"}, {}).tweets == corpus2.tweets);

    // Matching is on whole tokens: a keep term embedded in a longer word is no hit.
    const Corpus corpus3 = corpus_of({{"a", "the stayathomeorder", 100}});
    CHECK(filter_relevant(corpus3, {"stayathome"}, {}).empty());
    CHECK(filter_relevant(corpus3, {"StAyAtHoMeOrDeR"}, {}).size() == 1);
}

TEST_CASE("bucket_by_day: one day of tweets, explicit empty buckets") {
    Corpus corpus = corpus_of({
        {"a", "x", 1588323600},  // 2020-05-01
        {"b", "y", 1588325600},
        {"c", "z", 1588327600},
    });
    const auto buckets = bucket_by_day(corpus);
    CHECK(buckets.size() == static_cast<std::size_t>(corpus.window.length()));
    std::size_t non_empty = 0, total = 0;
    for (const auto& b : buckets) {
        total += b.tweet_ids.size();
        non_empty += b.tweet_ids.empty() ? 0 : 1;
    }
    CHECK(non_empty == 1);
    CHECK(total == 3);
}

TEST_CASE("bucket_by_day: consecutive days") {
    const Corpus corpus = corpus_of({
        {"a", "x", 1588323600},            // 2020-05-01
        {"b", "y", 1588323600 + 86400},    // 2020-05-02
    });
    const auto buckets = bucket_by_day(corpus);
    CHECK(buckets[0].tweet_ids == std::vector<std::string>{"a"});
    CHECK(buckets[1].tweet_ids == std::vector<std::string>{"b"});
}

TEST_CASE("bucket_by_day partition property on the bundled fixture") {
    const auto fixture = fs::path(EMOTREND_REPO_DIR) / "tests/fixtures/tweets200.jsonl";
    const auto manifest_path = fs::path(EMOTREND_REPO_DIR) / "tests/fixtures/tweets200_manifest.json";
    const DayWindow window = make_window(CivilDay{2020, 4, 28}, CivilDay{2020, 5, 27});
    const Corpus corpus = ingest_jsonl(fixture.string(), window, nullptr);
    REQUIRE(corpus.size() == 200);

    const auto buckets = bucket_by_day(corpus);
    REQUIRE(buckets.size() == 30);

    // Contiguous days and exact partition.
    std::set<std::string> seen;
    for (std::size_t i = 0; i < buckets.size(); ++i) {
        CHECK(buckets[i].day == window.start_day + static_cast<std::int64_t>(i));
        for (const auto& id : buckets[i].tweet_ids) CHECK(seen.insert(id).second);
    }
    CHECK(seen.size() == corpus.size());

    // Per-day counts match the fixture manifest.
    std::ifstream in(manifest_path);
    REQUIRE(in.good());
    const auto manifest = nlohmann::json::parse(in);
    for (const auto& bucket : buckets) {
        const std::string day = format_civil_day(civil_from_days(bucket.day));
        CHECK(bucket.tweet_ids.size() == manifest.at("per_day").at(day).get<std::size_t>());
    }
}
