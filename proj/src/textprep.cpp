#include "emotrend/textprep.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <sstream>

#include "emotrend/errors.hpp"
#include "emotrend/porter.hpp"

namespace emotrend {

void PrepConfig::validate() const {
    if (english_threshold < 0.0 || english_threshold > 1.0) {
        throw ConfigError("english_threshold must lie in [0,1]");
    }
    if (min_token_len < 1) throw ConfigError("min_token_len must be >= 1");
}

namespace {

bool is_word_byte(unsigned char c) {
    // Bytes >= 0x80 are UTF-8 continuation/lead bytes; keeping them as word
    // characters preserves accented words as single tokens.
    return std::isalnum(c) || c == '_' || c >= 0x80;
}

std::string decode_html_entities(const std::string& text) {
    std::string out;
    out.reserve(text.size());
    std::size_t i = 0;
    while (i < text.size()) {
        if (text[i] != '&') {
            out.push_back(text[i++]);
            continue;
        }
        const std::size_t semi = text.find(';', i + 1);
        if (semi == std::string::npos || semi - i > 10) {
            out.push_back(text[i++]);
            continue;
        }
        const std::string entity = text.substr(i + 1, semi - i - 1);
        if (entity == "amp") out.push_back('&');
        else if (entity == "lt") out.push_back('<');
        else if (entity == "gt") out.push_back('>');
        else if (entity == "quot") out.push_back('"');
        else if (entity == "apos" || entity == "#39") out.push_back('\'');
        else if (entity == "nbsp") out.push_back(' ');
        else if (entity.size() > 1 && entity[0] == '#') {
            int code = 0;
            bool numeric = true;
            for (std::size_t k = 1; k < entity.size(); ++k) {
                if (!std::isdigit(static_cast<unsigned char>(entity[k]))) {
                    numeric = false;
                    break;
                }
                code = code * 10 + (entity[k] - '0');
            }
            if (numeric && code >= 32 && code < 127) out.push_back(static_cast<char>(code));
            else out.push_back(' ');
        } else {
            out.push_back(text[i]);
            ++i;
            continue;
        }
        i = semi + 1;
    }
    return out;
}

std::string strip_html_tags(const std::string& text) {
    std::string out;
    out.reserve(text.size());
    bool in_tag = false;
    for (char c : text) {
        if (c == '<') {
            in_tag = true;
        } else if (c == '>') {
            if (in_tag) in_tag = false;
            else out.push_back(c);
        } else if (!in_tag) {
            out.push_back(c);
        }
    }
    return out;
}

bool url_starts_at(const std::string& s, std::size_t i) {
    return s.compare(i, 7, "http://") == 0 || s.compare(i, 8, "https://") == 0 ||
           s.compare(i, 4, "www.") == 0;
}

}  // namespace

std::vector<std::string> preprocess_text(const std::string& text, const PrepConfig& config,
                                         std::size_t* raw_count) {
    std::string s = strip_html_tags(decode_html_entities(text));

    std::string cleaned;
    cleaned.reserve(s.size());
    std::size_t i = 0;
    while (i < s.size()) {
        if (config.strip_urls && url_starts_at(s, i)) {
            while (i < s.size() && !std::isspace(static_cast<unsigned char>(s[i]))) ++i;
            cleaned.push_back(' ');
            continue;
        }
        const char c = s[i];
        if ((c == '#' && config.strip_hashtags) || (c == '@' && config.strip_mentions)) {
            ++i;
            while (i < s.size() && is_word_byte(static_cast<unsigned char>(s[i]))) ++i;
            cleaned.push_back(' ');
            continue;
        }
        if (c == '\'' || (static_cast<unsigned char>(c) == 0xE2 && s.compare(i, 3, "\xE2\x80\x99") == 0)) {
            // Apostrophes vanish before tokenization: who's -> whos.
            i += (c == '\'') ? 1 : 3;
            continue;
        }
        cleaned.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
        ++i;
    }

    std::vector<std::string> raw_tokens;
    std::string current;
    for (char c : cleaned) {
        if (is_word_byte(static_cast<unsigned char>(c))) {
            current.push_back(c);
        } else if (!current.empty()) {
            raw_tokens.push_back(std::move(current));
            current.clear();
        }
    }
    if (!current.empty()) raw_tokens.push_back(std::move(current));
    if (raw_count) *raw_count = raw_tokens.size();

    std::vector<std::string> tokens;
    tokens.reserve(raw_tokens.size());
    for (std::string& tok : raw_tokens) {
        if (!config.stopwords.empty() && config.stopwords.count(tok)) continue;
        if (tok.size() < config.min_token_len) continue;
        std::string out = config.apply_stemming ? porter_stem(tok) : std::move(tok);
        // A stem can land on a stopword ("whos" -> "who") or under the length
        // floor; the output filters apply to the final form as well.
        if (!config.stopwords.empty() && config.stopwords.count(out)) continue;
        if (out.size() < config.min_token_len) continue;
        tokens.push_back(std::move(out));
    }
    return tokens;
}

TokenDoc preprocess(const Tweet& tweet, const PrepConfig& config) {
    TokenDoc doc;
    doc.tweet_id = tweet.id;
    doc.tokens = preprocess_text(tweet.text, config, &doc.raw_token_count);
    return doc;
}

std::string stem(const std::string& token) { return porter_stem(token); }

bool is_english(const std::string& text, const PrepConfig& config) {
    PrepConfig raw = config;
    raw.stopwords.clear();  // function words must survive tokenization
    raw.min_token_len = 1;
    raw.apply_stemming = false;
    const auto tokens = preprocess_text(text, raw, nullptr);
    if (tokens.empty()) return false;
    std::size_t hits = 0;
    for (const auto& tok : tokens) {
        if (config.function_words.count(tok)) ++hits;
    }
    return static_cast<double>(hits) / static_cast<double>(tokens.size()) >=
           config.english_threshold;
}

std::unordered_set<std::string> load_term_set(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open term list: " + path);
    std::unordered_set<std::string> terms;
    std::string line;
    while (std::getline(in, line)) {
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        std::size_t b = line.find_first_not_of(" \t\r");
        if (b == std::string::npos) continue;
        std::size_t e = line.find_last_not_of(" \t\r");
        terms.insert(line.substr(b, e - b + 1));
    }
    return terms;
}

void write_token_docs(const std::vector<TokenDoc>& docs, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw IoError("cannot open token file for writing: " + path);
    for (const TokenDoc& doc : docs) {
        out << doc.tweet_id << '\t';
        for (std::size_t i = 0; i < doc.tokens.size(); ++i) {
            if (i > 0) out << ' ';
            out << doc.tokens[i];
        }
        out << '\t' << doc.raw_token_count << '\n';
    }
    if (!out) throw IoError("write failed: " + path);
}

std::vector<TokenDoc> read_token_docs(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open token file: " + path);
    std::vector<TokenDoc> docs;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        const auto tab1 = line.find('\t');
        const auto tab2 = tab1 == std::string::npos ? std::string::npos : line.find('\t', tab1 + 1);
        if (tab1 == std::string::npos || tab2 == std::string::npos) {
            throw ParseError(path + ":" + std::to_string(lineno) + ": expected 3 tab-separated fields");
        }
        TokenDoc doc;
        doc.tweet_id = line.substr(0, tab1);
        std::istringstream ts(line.substr(tab1 + 1, tab2 - tab1 - 1));
        std::string tok;
        while (ts >> tok) doc.tokens.push_back(tok);
        doc.raw_token_count = std::stoul(line.substr(tab2 + 1));
        docs.push_back(std::move(doc));
    }
    return docs;
}

namespace {

bool parse_bool(const std::string& v, const std::string& key) {
    if (v == "true" || v == "1") return true;
    if (v == "false" || v == "0") return false;
    throw ConfigError("bad boolean for " + key + ": " + v);
}

}  // namespace

PrepConfig load_prep_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open prep config: " + path);
    PrepConfig config;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos) {
            throw ParseError(path + ":" + std::to_string(lineno) + ": expected key = value");
        }
        auto trim = [](std::string s) {
            const auto b = s.find_first_not_of(" \t\r");
            const auto e = s.find_last_not_of(" \t\r");
            return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
        };
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (key == "stopwords_file") config.stopwords = load_term_set(value);
        else if (key == "function_words_file") config.function_words = load_term_set(value);
        else if (key == "strip_hashtags") config.strip_hashtags = parse_bool(value, key);
        else if (key == "strip_urls") config.strip_urls = parse_bool(value, key);
        else if (key == "strip_mentions") config.strip_mentions = parse_bool(value, key);
        else if (key == "apply_stemming") config.apply_stemming = parse_bool(value, key);
        else if (key == "min_token_len") config.min_token_len = std::stoul(value);
        else if (key == "english_threshold") config.english_threshold = std::stod(value);
        else throw ParseError(path + ":" + std::to_string(lineno) + ": unknown key " + key);
    }
    config.validate();
    return config;
}

void save_prep_config(const PrepConfig& config, const std::string& path,
                      const std::string& stopwords_path,
                      const std::string& function_words_path) {
    std::ofstream out(path);
    if (!out) throw IoError("cannot open prep config for writing: " + path);
    out << "stopwords_file = " << stopwords_path << '\n'
        << "function_words_file = " << function_words_path << '\n'
        << "strip_hashtags = " << (config.strip_hashtags ? "true" : "false") << '\n'
        << "strip_urls = " << (config.strip_urls ? "true" : "false") << '\n'
        << "strip_mentions = " << (config.strip_mentions ? "true" : "false") << '\n'
        << "apply_stemming = " << (config.apply_stemming ? "true" : "false") << '\n'
        << "min_token_len = " << config.min_token_len << '\n'
        << "english_threshold = " << config.english_threshold << '\n';
}

}  // namespace emotrend
