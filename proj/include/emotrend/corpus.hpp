#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "emotrend/calendar.hpp"

namespace emotrend {

struct Tweet {
    std::string id;
    std::string text;
    std::int64_t timestamp = 0;  // epoch seconds, UTC

    bool operator==(const Tweet&) const = default;
};

// Inclusive study window, in whole calendar days.
struct DayWindow {
    std::int64_t start_day = 0;
    std::int64_t end_day = 0;

    bool contains(std::int64_t day) const { return day >= start_day && day <= end_day; }
    std::int64_t length() const { return end_day - start_day + 1; }
};

DayWindow make_window(const CivilDay& start, const CivilDay& end);

// Tweets sorted by timestamp ascending (ties by id).
struct Corpus {
    std::vector<Tweet> tweets;
    DayWindow window;

    std::size_t size() const { return tweets.size(); }
    bool empty() const { return tweets.empty(); }
};

struct DayBucket {
    std::int64_t day = 0;
    std::vector<std::string> tweet_ids;
};

struct IngestStats {
    std::size_t ingested = 0;     // valid in-window records
    std::size_t malformed = 0;    // unparseable / invalid lines
    std::size_t out_of_window = 0;
    std::size_t deduplicated = 0; // removed as duplicates
    std::size_t filtered = 0;     // removed by relevance / language filters
    std::size_t retained = 0;
};

// One JSON object per line: {"id": str, "text": str, "created_at": ISO-8601 UTC}.
// Malformed lines are counted in stats, not fatal. Unreadable file throws
// IoError; zero valid in-window records throws DataError.
Corpus ingest_jsonl(const std::string& path, const DayWindow& window, IngestStats* stats = nullptr);

// Serialize back to the ingest schema (sorted order preserved).
void write_jsonl(const Corpus& corpus, const std::string& path);

// Duplicate key: lowercased, URL-stripped, whitespace-collapsed text. The
// earliest-timestamp instance of each key survives; order is preserved.
Corpus deduplicate(const Corpus& corpus, std::size_t* removed = nullptr);
std::string normalize_for_dedup(const std::string& text);

// Keeps tweets containing at least one keep term and no drop term
// (case-insensitive whole-token match, '#'/'@' prefixes ignored).
Corpus filter_relevant(const Corpus& corpus, const std::vector<std::string>& keep_terms,
                       const std::vector<std::string>& drop_terms,
                       std::size_t* removed = nullptr);

// Contiguous buckets covering the whole window; empty days are explicit.
std::vector<DayBucket> bucket_by_day(const Corpus& corpus);

}  // namespace emotrend
