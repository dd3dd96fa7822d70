#include "emotrend/lexicon.hpp"

#include <cctype>
#include <fstream>
#include <sstream>

#include "emotrend/errors.hpp"
#include "emotrend/numfmt.hpp"
#include "emotrend/porter.hpp"

namespace emotrend {

namespace {

constexpr const char* kEmotionNames[kNumEmotions] = {
    "anger", "anticipation", "disgust", "fear", "joy", "sadness", "surprise", "trust",
};

std::string to_lower_ascii(std::string s) {
    for (char& c : s) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    return s;
}

}  // namespace

const char* emotion_name(Emotion e) { return kEmotionNames[static_cast<int>(e)]; }

std::optional<Emotion> parse_emotion(const std::string& name) {
    for (int i = 0; i < kNumEmotions; ++i) {
        if (name == kEmotionNames[i]) return static_cast<Emotion>(i);
    }
    return std::nullopt;
}

void EmotionLexicon::add(const std::string& word, Emotion e) {
    const EmotionMask bit = static_cast<EmotionMask>(1u << static_cast<int>(e));
    auto [it, inserted] = surface_.try_emplace(word, 0);
    if (inserted) ++surface_words_;
    it->second |= bit;
    index_[word] |= bit;
    index_[porter_stem(word)] |= bit;
}

EmotionMask EmotionLexicon::lookup(const std::string& token) const {
    const auto it = index_.find(token);
    return it == index_.end() ? 0 : it->second;
}

void IntensifierTable::add(const std::string& token, double multiplier) {
    if (!(multiplier > 0.0) || multiplier > 10.0) {
        throw ConfigError("intensifier multiplier for '" + token + "' must lie in (0,10]");
    }
    index_[token] = multiplier;
    index_.emplace(porter_stem(token), multiplier);  // keep explicit surface value on collision
}

std::optional<double> IntensifierTable::lookup(const std::string& token) const {
    const auto it = index_.find(token);
    if (it == index_.end()) return std::nullopt;
    return it->second;
}

std::optional<Emotion> derive_label(const std::array<double, kNumEmotions>& scores) {
    double best = 0.0;
    int best_idx = -1;
    for (int i = 0; i < kNumEmotions; ++i) {
        if (scores[static_cast<std::size_t>(i)] > best) {
            best = scores[static_cast<std::size_t>(i)];
            best_idx = i;
        }
    }
    if (best_idx < 0) return std::nullopt;
    return static_cast<Emotion>(best_idx);
}

EmotionLexicon load_nrc(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open lexicon: " + path);

    EmotionLexicon lexicon;
    lexicon.set_source(path);
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;

        const auto tab1 = line.find('\t');
        const auto tab2 = tab1 == std::string::npos ? std::string::npos : line.find('\t', tab1 + 1);
        if (tab1 == std::string::npos || tab2 == std::string::npos) {
            throw ParseError(path + ":" + std::to_string(lineno) +
                             ": expected word<TAB>affect<TAB>flag");
        }
        const std::string word = to_lower_ascii(line.substr(0, tab1));
        const std::string affect = to_lower_ascii(line.substr(tab1 + 1, tab2 - tab1 - 1));
        const std::string flag = line.substr(tab2 + 1);
        if (word.empty()) {
            throw ParseError(path + ":" + std::to_string(lineno) + ": empty word");
        }
        if (flag != "0" && flag != "1") {
            throw ParseError(path + ":" + std::to_string(lineno) + ": flag must be 0 or 1, got '" +
                             flag + "'");
        }
        if (affect == "positive" || affect == "negative") continue;
        const auto emotion = parse_emotion(affect);
        if (!emotion) {
            throw ParseError(path + ":" + std::to_string(lineno) + ": unknown affect '" + affect +
                             "'");
        }
        if (flag == "1") lexicon.add(word, *emotion);
    }
    return lexicon;
}

IntensifierTable load_intensifiers(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open intensifier table: " + path);
    IntensifierTable table;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty() || line[0] == '#') continue;
        const auto tab = line.find('\t');
        if (tab == std::string::npos) {
            throw ParseError(path + ":" + std::to_string(lineno) +
                             ": expected token<TAB>multiplier");
        }
        const std::string token = to_lower_ascii(line.substr(0, tab));
        double multiplier = 0.0;
        try {
            multiplier = std::stod(line.substr(tab + 1));
        } catch (const std::exception&) {
            throw ParseError(path + ":" + std::to_string(lineno) + ": bad multiplier");
        }
        table.add(token, multiplier);
    }
    return table;
}

IntensifierTable default_intensifiers() {
    IntensifierTable table;
    table.add("very", 1.5);
    table.add("extremely", 2.0);
    table.add("really", 1.5);
    table.add("slightly", 0.5);
    table.add("barely", 0.5);
    return table;
}

EmotionVector score_tweet(const TokenDoc& doc, const EmotionLexicon& lexicon,
                          const IntensifierTable& intensifiers) {
    EmotionVector out;
    for (std::size_t i = 0; i < doc.tokens.size(); ++i) {
        const EmotionMask mask = lexicon.lookup(doc.tokens[i]);
        if (mask == 0) continue;
        double contribution = 1.0;
        if (i > 0) {
            if (const auto mult = intensifiers.lookup(doc.tokens[i - 1])) {
                contribution *= *mult;
            }
        }
        for (int e = 0; e < kNumEmotions; ++e) {
            if ((mask >> e) & 1) out.scores[static_cast<std::size_t>(e)] += contribution;
        }
    }
    out.label = derive_label(out.scores);
    return out;
}

std::vector<Annotation> annotate_corpus(const Corpus& corpus, const PrepConfig& config,
                                        const EmotionLexicon& lexicon,
                                        const IntensifierTable& intensifiers) {
    std::vector<Annotation> out;
    out.reserve(corpus.tweets.size());
    for (const Tweet& tweet : corpus.tweets) {
        const TokenDoc doc = preprocess(tweet, config);
        out.push_back(Annotation{tweet.id, score_tweet(doc, lexicon, intensifiers)});
    }
    return out;
}

void write_annotations_csv(const std::vector<Annotation>& annotations, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw IoError("cannot open annotations file for writing: " + path);
    out << "tweet_id";
    for (int e = 0; e < kNumEmotions; ++e) out << ',' << kEmotionNames[e];
    out << ",label\n";
    for (const Annotation& a : annotations) {
        out << a.tweet_id;
        for (int e = 0; e < kNumEmotions; ++e) {
            out << ',' << format_double(a.vector.scores[static_cast<std::size_t>(e)]);
        }
        out << ',' << (a.vector.label ? emotion_name(*a.vector.label) : "") << '\n';
    }
    if (!out) throw IoError("write failed: " + path);
}

std::vector<Annotation> read_annotations_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open annotations file: " + path);
    std::vector<Annotation> out;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (lineno == 1 || line.empty()) continue;  // header
        std::stringstream ss(line);
        std::string field;
        Annotation a;
        if (!std::getline(ss, a.tweet_id, ',')) {
            throw ParseError(path + ":" + std::to_string(lineno) + ": missing tweet_id");
        }
        for (int e = 0; e < kNumEmotions; ++e) {
            if (!std::getline(ss, field, ',')) {
                throw ParseError(path + ":" + std::to_string(lineno) + ": missing score column");
            }
            a.vector.scores[static_cast<std::size_t>(e)] = std::stod(field);
        }
        std::getline(ss, field, ',');
        if (!field.empty()) {
            const auto label = parse_emotion(field);
            if (!label) {
                throw ParseError(path + ":" + std::to_string(lineno) + ": unknown label " + field);
            }
            a.vector.label = label;
        }
        out.push_back(std::move(a));
    }
    return out;
}

}  // namespace emotrend
