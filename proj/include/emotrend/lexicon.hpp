#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "emotrend/corpus.hpp"
#include "emotrend/textprep.hpp"

namespace emotrend {

// Plutchik's eight basic emotions. The enumerator order is the canonical
// order everywhere: vector layout, CSV columns, argmax tie-breaking.
enum class Emotion : int {
    anger = 0,
    anticipation,
    disgust,
    fear,
    joy,
    sadness,
    surprise,
    trust,
};

inline constexpr int kNumEmotions = 8;

const char* emotion_name(Emotion e);
std::optional<Emotion> parse_emotion(const std::string& name);

using EmotionMask = std::uint8_t;  // bit i set <=> emotion i associated

inline bool mask_has(EmotionMask mask, Emotion e) {
    return (mask >> static_cast<int>(e)) & 1;
}

// Word -> associated-emotion set, indexed under both the surface form and its
// Porter stem so that lookups on stemmed TokenDocs still hit; stem collisions
// union their emotion sets.
class EmotionLexicon {
  public:
    void add(const std::string& word, Emotion e);
    EmotionMask lookup(const std::string& token) const;

    bool empty() const { return index_.empty(); }
    std::size_t surface_entry_count() const { return surface_words_; }
    std::size_t index_size() const { return index_.size(); }

    const std::string& source() const { return source_; }
    void set_source(std::string s) { source_ = std::move(s); }

    const std::unordered_map<std::string, EmotionMask>& index() const { return index_; }

  private:
    std::unordered_map<std::string, EmotionMask> index_;
    std::unordered_map<std::string, EmotionMask> surface_;  // pre-stem view
    std::size_t surface_words_ = 0;
    std::string source_;
};

// Multiplier applied to the following token's emotion contributions.
// >1 amplifies, <1 diminishes; valid multipliers lie in (0, 10].
class IntensifierTable {
  public:
    void add(const std::string& token, double multiplier);  // throws ConfigError
    std::optional<double> lookup(const std::string& token) const;
    bool empty() const { return index_.empty(); }
    std::size_t size() const { return index_.size(); }

  private:
    std::unordered_map<std::string, double> index_;
};

struct EmotionVector {
    std::array<double, kNumEmotions> scores{};
    std::optional<Emotion> label;

    double& operator[](Emotion e) { return scores[static_cast<std::size_t>(e)]; }
    double operator[](Emotion e) const { return scores[static_cast<std::size_t>(e)]; }
};

// First emotion in canonical order attaining the maximum; absent when all
// scores are zero.
std::optional<Emotion> derive_label(const std::array<double, kNumEmotions>& scores);

// NRC v0.92 TSV: word TAB affect TAB flag(0|1); affect is one of the eight
// emotions or positive/negative (sentiment rows are skipped). Malformed lines
// and unknown affect names throw ParseError with the line number.
EmotionLexicon load_nrc(const std::string& path);

IntensifierTable load_intensifiers(const std::string& path);
IntensifierTable default_intensifiers();

// Each lexicon token contributes 1 per associated emotion; a preceding
// intensifier token scales that contribution.
EmotionVector score_tweet(const TokenDoc& doc, const EmotionLexicon& lexicon,
                          const IntensifierTable& intensifiers);

struct Annotation {
    std::string tweet_id;
    EmotionVector vector;
};

// One record per tweet, in corpus order. Records with a label form the
// classifier training corpus; zero-score tweets stay, unlabeled.
std::vector<Annotation> annotate_corpus(const Corpus& corpus, const PrepConfig& config,
                                        const EmotionLexicon& lexicon,
                                        const IntensifierTable& intensifiers);

// tweet_id, eight score columns in canonical order, label (empty when absent).
void write_annotations_csv(const std::vector<Annotation>& annotations, const std::string& path);
std::vector<Annotation> read_annotations_csv(const std::string& path);

}  // namespace emotrend
