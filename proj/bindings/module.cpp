#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "emotrend/corpus.hpp"
#include "emotrend/embed.hpp"
#include "emotrend/lexicon.hpp"
#include "emotrend/nn.hpp"
#include "emotrend/textprep.hpp"
#include "emotrend/topics.hpp"
#include "emotrend/trends.hpp"

namespace py = pybind11;
using namespace emotrend;

namespace {

std::vector<TokenDoc> docs_from_lists(const std::vector<std::vector<std::string>>& docs) {
    std::vector<TokenDoc> out;
    out.reserve(docs.size());
    for (std::size_t i = 0; i < docs.size(); ++i) {
        TokenDoc doc;
        doc.tweet_id = "doc" + std::to_string(i);
        doc.tokens = docs[i];
        doc.raw_token_count = docs[i].size();
        out.push_back(std::move(doc));
    }
    return out;
}

PrepConfig config_from_args(const std::vector<std::string>& stopwords, bool apply_stemming,
                            std::size_t min_token_len) {
    PrepConfig config;
    config.stopwords.insert(stopwords.begin(), stopwords.end());
    config.apply_stemming = apply_stemming;
    config.min_token_len = min_token_len;
    return config;
}

DailySeries series_from_values(const std::vector<double>& values) {
    DailySeries s;
    s.name = "series";
    for (std::size_t i = 0; i < values.size(); ++i) {
        s.points.push_back({static_cast<std::int64_t>(i), values[i]});
    }
    return s;
}

py::dict scores_to_dict(const EmotionVector& v) {
    py::dict out;
    for (int e = 0; e < kNumEmotions; ++e) {
        out[emotion_name(static_cast<Emotion>(e))] = v.scores[static_cast<std::size_t>(e)];
    }
    return out;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "emotion/semantic trend pipeline core";

    // --- text preparation ---
    m.def("stem", &stem, py::arg("token"), "Porter stem of a lowercase token");
    m.def(
        "preprocess",
        [](const std::string& text, const std::vector<std::string>& stopwords,
           bool apply_stemming, std::size_t min_token_len) {
            return preprocess_text(text, config_from_args(stopwords, apply_stemming, min_token_len),
                                   nullptr);
        },
        py::arg("text"), py::arg("stopwords") = std::vector<std::string>{},
        py::arg("apply_stemming") = true, py::arg("min_token_len") = 2,
        "Clean, tokenize, filter and stem one text");
    m.def(
        "is_english",
        [](const std::string& text, const std::vector<std::string>& function_words,
           double threshold) {
            PrepConfig config;
            config.function_words.insert(function_words.begin(), function_words.end());
            config.english_threshold = threshold;
            return is_english(text, config);
        },
        py::arg("text"), py::arg("function_words"), py::arg("threshold") = 0.15);
    m.def("load_term_set", [](const std::string& path) {
        const auto set = load_term_set(path);
        return std::vector<std::string>(set.begin(), set.end());
    });

    // --- lexicon scoring ---
    py::class_<EmotionLexicon>(m, "EmotionLexicon")
        .def("surface_entry_count", &EmotionLexicon::surface_entry_count)
        .def("__len__", &EmotionLexicon::surface_entry_count);
    m.def("load_nrc", &load_nrc, py::arg("path"), "Load an NRC-format emotion lexicon");
    m.def(
        "score_tokens",
        [](const std::vector<std::string>& tokens, const EmotionLexicon& lexicon,
           bool use_default_intensifiers) {
            TokenDoc doc;
            doc.tweet_id = "doc";
            doc.tokens = tokens;
            doc.raw_token_count = tokens.size();
            const auto table =
                use_default_intensifiers ? default_intensifiers() : IntensifierTable{};
            const auto v = score_tweet(doc, lexicon, table);
            return py::make_tuple(scores_to_dict(v),
                                  v.label ? py::cast(std::string(emotion_name(*v.label)))
                                          : py::none());
        },
        py::arg("tokens"), py::arg("lexicon"), py::arg("use_default_intensifiers") = false,
        "Score a token list; returns (scores dict, label or None)");

    // --- topic models ---
    py::class_<LdaModel>(m, "LdaModel")
        .def_readonly("k", &LdaModel::k)
        .def_readonly("alpha", &LdaModel::alpha)
        .def_readonly("beta", &LdaModel::beta)
        .def_property_readonly("vocabulary", [](const LdaModel& m) { return m.vocab.terms; })
        .def("top_words", [](const LdaModel& m, int topic, int n) { return top_words(m, topic, n); },
             py::arg("topic"), py::arg("n"))
        .def("perplexity",
             [](const LdaModel& m, const std::vector<std::vector<std::string>>& docs) {
                 return perplexity(m, docs_from_lists(docs));
             })
        .def("cluster_precision",
             [](const LdaModel& m, const std::unordered_map<std::string, std::string>& reference,
                int n) { return cluster_precision(m, reference, n); });
    py::class_<PlsaModel>(m, "PlsaModel")
        .def_readonly("k", &PlsaModel::k)
        .def_readonly("log_likelihood", &PlsaModel::log_likelihood)
        .def_property_readonly("vocabulary", [](const PlsaModel& m) { return m.vocab.terms; })
        .def("top_words",
             [](const PlsaModel& m, int topic, int n) { return top_words(m, topic, n); })
        .def("cluster_precision",
             [](const PlsaModel& m, const std::unordered_map<std::string, std::string>& reference,
                int n) { return cluster_precision(m, reference, n); });
    m.def(
        "lda_fit",
        [](const std::vector<std::vector<std::string>>& docs, int k, double alpha, double beta,
           int iters, std::uint64_t seed) {
            return lda_fit(docs_from_lists(docs), k, alpha > 0 ? alpha : default_lda_alpha(k),
                           beta, iters, seed);
        },
        py::arg("docs"), py::arg("k"), py::arg("alpha") = 0.0, py::arg("beta") = 0.01,
        py::arg("iters") = 1000, py::arg("seed") = 1);
    m.def(
        "plsa_fit",
        [](const std::vector<std::vector<std::string>>& docs, int k, int iters,
           std::uint64_t seed) { return plsa_fit(docs_from_lists(docs), k, iters, seed); },
        py::arg("docs"), py::arg("k"), py::arg("iters") = 200, py::arg("seed") = 1);

    // --- trend statistics ---
    m.def(
        "ols_fit",
        [](const std::vector<double>& values) {
            const TrendFit fit = ols_fit(series_from_values(values));
            py::dict out;
            out["slope"] = fit.slope;
            out["intercept"] = fit.intercept;
            out["stderr"] = fit.slope_stderr;
            out["t"] = fit.t_stat;
            out["p"] = fit.p_value;
            out["n"] = fit.n;
            return out;
        },
        py::arg("values"), "OLS of values against 0..n-1 with a two-sided slope t-test");
    m.def(
        "mean_ci",
        [](const std::vector<double>& values, double level) {
            const MeanCi ci = mean_ci(series_from_values(values), level);
            py::dict out;
            out["mean"] = ci.mean;
            out["lower"] = ci.lower;
            out["upper"] = ci.upper;
            out["level"] = ci.level;
            return out;
        },
        py::arg("values"), py::arg("level") = 0.95);

    // --- embeddings ---
    py::class_<EmbeddingTable>(m, "EmbeddingTable")
        .def_readonly("dim", &EmbeddingTable::dim)
        .def_property_readonly("vocabulary",
                               [](const EmbeddingTable& t) { return t.vocab.terms; })
        .def("cosine", &EmbeddingTable::cosine, py::arg("a"), py::arg("b"));
    m.def(
        "train_word2vec",
        [](const std::vector<std::vector<std::string>>& docs, int dim, int window, int negatives,
           int epochs, std::uint64_t seed) {
            Word2VecConfig config;
            config.dim = dim;
            config.window = window;
            config.negatives = negatives;
            config.epochs = epochs;
            config.seed = seed;
            return train_word2vec(docs_from_lists(docs), config);
        },
        py::arg("docs"), py::arg("dim") = 100, py::arg("window") = 5, py::arg("negatives") = 5,
        py::arg("epochs") = 5, py::arg("seed") = 1);

    // --- classifier metrics ---
    m.def(
        "compute_metrics",
        [](const std::vector<int>& truth, const std::vector<int>& predicted) {
            const EvalMetrics metrics = compute_metrics(truth, predicted);
            py::dict out;
            out["accuracy"] = metrics.accuracy;
            out["macro_f1"] = metrics.macro_f1;
            py::dict per_class;
            for (int e = 0; e < kNumEmotions; ++e) {
                per_class[emotion_name(static_cast<Emotion>(e))] =
                    metrics.per_class_f1[static_cast<std::size_t>(e)];
            }
            out["per_class_f1"] = per_class;
            return out;
        },
        py::arg("truth"), py::arg("predicted"));

    m.attr("EMOTIONS") = std::vector<std::string>{
        "anger", "anticipation", "disgust", "fear", "joy", "sadness", "surprise", "trust"};
}
