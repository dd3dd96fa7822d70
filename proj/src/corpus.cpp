#include "emotrend/corpus.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <unordered_map>
#include <unordered_set>

#include <json.hpp>

#include "emotrend/errors.hpp"

namespace emotrend {

namespace {

std::string to_lower_ascii(std::string s) {
    for (char& c : s) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    return s;
}

bool is_url_start(const std::string& s, std::size_t i) {
    return s.compare(i, 7, "http://") == 0 || s.compare(i, 8, "https://") == 0 ||
           s.compare(i, 4, "www.") == 0;
}

void sort_corpus(Corpus& c) {
    std::stable_sort(c.tweets.begin(), c.tweets.end(), [](const Tweet& a, const Tweet& b) {
        if (a.timestamp != b.timestamp) return a.timestamp < b.timestamp;
        return a.id < b.id;
    });
}

}  // namespace

DayWindow make_window(const CivilDay& start, const CivilDay& end) {
    DayWindow w{days_from_civil(start), days_from_civil(end)};
    if (w.start_day > w.end_day) throw ConfigError("window start is after window end");
    return w;
}

Corpus ingest_jsonl(const std::string& path, const DayWindow& window, IngestStats* stats) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open input file: " + path);

    Corpus corpus;
    corpus.window = window;
    IngestStats local;
    std::unordered_set<std::string> seen_ids;

    std::string line;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        nlohmann::json obj = nlohmann::json::parse(line, nullptr, false);
        if (obj.is_discarded() || !obj.is_object() || !obj.contains("id") ||
            !obj.contains("text") || !obj.contains("created_at") ||
            !obj["id"].is_string() || !obj["text"].is_string() ||
            !obj["created_at"].is_string()) {
            ++local.malformed;
            continue;
        }
        Tweet t;
        t.id = obj["id"].get<std::string>();
        t.text = obj["text"].get<std::string>();
        auto ts = parse_timestamp(obj["created_at"].get<std::string>());

        // Trim for the non-empty check only; scoring sees the raw text.
        const auto first = t.text.find_first_not_of(" \t\r\n");
        if (!ts || t.id.empty() || first == std::string::npos || seen_ids.count(t.id)) {
            ++local.malformed;
            continue;
        }
        t.timestamp = *ts;
        if (!window.contains(day_of_epoch_seconds(t.timestamp))) {
            ++local.out_of_window;
            continue;
        }
        seen_ids.insert(t.id);
        corpus.tweets.push_back(std::move(t));
        ++local.ingested;
    }

    if (corpus.tweets.empty()) {
        throw DataError("no valid records in window while ingesting " + path);
    }
    sort_corpus(corpus);
    local.retained = corpus.tweets.size();
    if (stats) *stats = local;
    return corpus;
}

void write_jsonl(const Corpus& corpus, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw IoError("cannot open output file: " + path);
    for (const Tweet& t : corpus.tweets) {
        nlohmann::json obj;
        obj["id"] = t.id;
        obj["text"] = t.text;
        obj["created_at"] = format_timestamp(t.timestamp);
        out << obj.dump() << '\n';
    }
    if (!out) throw IoError("write failed: " + path);
}

std::string normalize_for_dedup(const std::string& text) {
    std::string lowered = to_lower_ascii(text);
    std::string out;
    out.reserve(lowered.size());
    bool pending_space = false;
    std::size_t i = 0;
    while (i < lowered.size()) {
        if (is_url_start(lowered, i)) {
            while (i < lowered.size() &&
                   !std::isspace(static_cast<unsigned char>(lowered[i]))) {
                ++i;
            }
            continue;
        }
        const char c = lowered[i++];
        if (std::isspace(static_cast<unsigned char>(c))) {
            pending_space = !out.empty();
            continue;
        }
        if (pending_space) {
            out.push_back(' ');
            pending_space = false;
        }
        out.push_back(c);
    }
    return out;
}

Corpus deduplicate(const Corpus& corpus, std::size_t* removed) {
    // Corpus order is timestamp-ascending, so first occurrence == earliest.
    std::unordered_set<std::string> seen;
    Corpus out;
    out.window = corpus.window;
    out.tweets.reserve(corpus.tweets.size());
    for (const Tweet& t : corpus.tweets) {
        if (seen.insert(normalize_for_dedup(t.text)).second) {
            out.tweets.push_back(t);
        }
    }
    if (removed) *removed = corpus.tweets.size() - out.tweets.size();
    return out;
}

namespace {

// Whole tokens of [a-z0-9_]+ with leading '#'/'@' dropped, lowercased.
std::unordered_set<std::string> text_token_set(const std::string& text) {
    std::unordered_set<std::string> tokens;
    std::string current;
    auto flush = [&] {
        if (!current.empty()) {
            tokens.insert(current);
            current.clear();
        }
    };
    for (char raw : text) {
        const char c = static_cast<char>(std::tolower(static_cast<unsigned char>(raw)));
        if (std::isalnum(static_cast<unsigned char>(c)) || c == '_') {
            current.push_back(c);
        } else if (c == '#' || c == '@') {
            flush();
        } else {
            flush();
        }
    }
    flush();
    return tokens;
}

}  // namespace

Corpus filter_relevant(const Corpus& corpus, const std::vector<std::string>& keep_terms,
                       const std::vector<std::string>& drop_terms, std::size_t* removed) {
    if (keep_terms.empty()) throw ConfigError("filter_relevant requires at least one keep term");

    std::vector<std::string> keep;
    keep.reserve(keep_terms.size());
    for (const auto& t : keep_terms) keep.push_back(to_lower_ascii(t));
    std::vector<std::string> drop;
    drop.reserve(drop_terms.size());
    for (const auto& t : drop_terms) drop.push_back(to_lower_ascii(t));

    Corpus out;
    out.window = corpus.window;
    for (const Tweet& t : corpus.tweets) {
        const auto tokens = text_token_set(t.text);
        const bool has_keep = std::any_of(keep.begin(), keep.end(),
                                          [&](const std::string& k) { return tokens.count(k); });
        const bool has_drop = std::any_of(drop.begin(), drop.end(),
                                          [&](const std::string& d) { return tokens.count(d); });
        if (has_keep && !has_drop) out.tweets.push_back(t);
    }
    if (removed) *removed = corpus.tweets.size() - out.tweets.size();
    return out;
}

std::vector<DayBucket> bucket_by_day(const Corpus& corpus) {
    std::vector<DayBucket> buckets;
    buckets.reserve(static_cast<std::size_t>(corpus.window.length()));
    for (std::int64_t d = corpus.window.start_day; d <= corpus.window.end_day; ++d) {
        buckets.push_back(DayBucket{d, {}});
    }
    for (const Tweet& t : corpus.tweets) {
        const std::int64_t day = day_of_epoch_seconds(t.timestamp);
        if (!corpus.window.contains(day)) continue;
        buckets[static_cast<std::size_t>(day - corpus.window.start_day)].tweet_ids.push_back(t.id);
    }
    return buckets;
}

}  // namespace emotrend
