#pragma once

#include <cstddef>
#include <string>
#include <unordered_set>
#include <vector>

#include "emotrend/corpus.hpp"

namespace emotrend {

struct PrepConfig {
    std::unordered_set<std::string> stopwords;       // empty set disables removal
    std::unordered_set<std::string> function_words;  // for is_english
    bool strip_hashtags = true;
    bool strip_urls = true;
    bool strip_mentions = true;
    bool apply_stemming = true;
    std::size_t min_token_len = 2;
    double english_threshold = 0.15;

    void validate() const;  // throws ConfigError
};

struct TokenDoc {
    std::string tweet_id;
    std::vector<std::string> tokens;      // lowercase stems, filtered
    std::size_t raw_token_count = 0;      // tokens before stopword/length filters

    bool empty() const { return tokens.empty(); }
};

// Pipeline, in order: HTML entity/tag strip -> URL/mention/hashtag strip ->
// apostrophe strip -> lowercase -> tokenize -> stopword removal -> min-length
// filter -> stem. Deterministic for a fixed config.
TokenDoc preprocess(const Tweet& tweet, const PrepConfig& config);
std::vector<std::string> preprocess_text(const std::string& text, const PrepConfig& config,
                                         std::size_t* raw_count = nullptr);

std::string stem(const std::string& token);  // porter_stem under its public name

// Function-word ratio heuristic: fraction of raw tokens present in
// config.function_words >= english_threshold. Empty text is not English.
bool is_english(const std::string& text, const PrepConfig& config);

// Term list file: one lowercase term per line, '#' starts a comment.
std::unordered_set<std::string> load_term_set(const std::string& path);

// tweet_id <TAB> space-joined tokens <TAB> raw token count.
void write_token_docs(const std::vector<TokenDoc>& docs, const std::string& path);
std::vector<TokenDoc> read_token_docs(const std::string& path);

// Flat key = value file. stopwords/function words are referenced by path.
PrepConfig load_prep_config(const std::string& path);
void save_prep_config(const PrepConfig& config, const std::string& path,
                      const std::string& stopwords_path, const std::string& function_words_path);

}  // namespace emotrend
