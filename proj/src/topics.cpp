#include "emotrend/topics.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>

#include <json.hpp>

#include "emotrend/errors.hpp"

namespace emotrend {

int Vocabulary::add(const std::string& term) {
    const auto it = index.find(term);
    if (it != index.end()) return it->second;
    const int id = static_cast<int>(terms.size());
    terms.push_back(term);
    index.emplace(term, id);
    return id;
}

std::size_t EncodedCorpus::total_tokens() const {
    std::size_t n = 0;
    for (const auto& d : docs) n += d.size();
    return n;
}

EncodedCorpus encode_docs(const std::vector<TokenDoc>& docs) {
    EncodedCorpus out;
    for (const TokenDoc& doc : docs) {
        if (doc.tokens.empty()) continue;
        std::vector<int> ids;
        ids.reserve(doc.tokens.size());
        for (const std::string& tok : doc.tokens) ids.push_back(out.vocab.add(tok));
        out.doc_ids.push_back(doc.tweet_id);
        out.docs.push_back(std::move(ids));
    }
    return out;
}

namespace {

std::vector<std::string> top_words_impl(const std::vector<std::vector<double>>& word_dist,
                                        const Vocabulary& vocab, int topic, int n) {
    if (topic < 0 || topic >= static_cast<int>(word_dist.size())) {
        throw ConfigError("topic index out of range");
    }
    const auto& row = word_dist[static_cast<std::size_t>(topic)];
    const int v = static_cast<int>(row.size());
    if (n > v) throw ConfigError("requested more top words than vocabulary size");
    std::vector<int> order(static_cast<std::size_t>(v));
    std::iota(order.begin(), order.end(), 0);
    std::partial_sort(order.begin(), order.begin() + n, order.end(), [&](int a, int b) {
        if (row[static_cast<std::size_t>(a)] != row[static_cast<std::size_t>(b)]) {
            return row[static_cast<std::size_t>(a)] > row[static_cast<std::size_t>(b)];
        }
        return a < b;
    });
    std::vector<std::string> words;
    words.reserve(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
        words.push_back(vocab.terms[static_cast<std::size_t>(order[static_cast<std::size_t>(i)])]);
    }
    return words;
}

// Re-estimate a document's topic mixture against fixed phi. `prior` is the
// Dirichlet smoothing term (0 for PLSA).
std::vector<double> fold_in_mixture(const std::vector<std::vector<double>>& phi, int k,
                                    const std::vector<int>& doc, double prior) {
    std::vector<double> theta(static_cast<std::size_t>(k), 1.0 / k);
    std::vector<double> acc(static_cast<std::size_t>(k));
    constexpr int kFoldInIters = 50;
    for (int iter = 0; iter < kFoldInIters; ++iter) {
        std::fill(acc.begin(), acc.end(), prior);
        for (const int w : doc) {
            double denom = 0.0;
            for (int t = 0; t < k; ++t) {
                denom += theta[static_cast<std::size_t>(t)] *
                         phi[static_cast<std::size_t>(t)][static_cast<std::size_t>(w)];
            }
            if (denom <= 0.0) continue;
            for (int t = 0; t < k; ++t) {
                acc[static_cast<std::size_t>(t)] +=
                    theta[static_cast<std::size_t>(t)] *
                    phi[static_cast<std::size_t>(t)][static_cast<std::size_t>(w)] / denom;
            }
        }
        const double total = std::accumulate(acc.begin(), acc.end(), 0.0);
        if (total <= 0.0) break;
        for (int t = 0; t < k; ++t) theta[static_cast<std::size_t>(t)] = acc[static_cast<std::size_t>(t)] / total;
    }
    return theta;
}

double perplexity_impl(const std::vector<std::vector<double>>& phi, int k, const Vocabulary& vocab,
                       const std::vector<TokenDoc>& docs, double prior,
                       std::size_t* skipped_docs) {
    double log_likelihood = 0.0;
    std::size_t tokens = 0;
    std::size_t skipped = 0;
    for (const TokenDoc& doc : docs) {
        std::vector<int> ids;
        ids.reserve(doc.tokens.size());
        for (const std::string& tok : doc.tokens) {
            const int id = vocab.lookup(tok);
            if (id >= 0) ids.push_back(id);
        }
        if (ids.empty()) {
            ++skipped;
            continue;
        }
        const auto theta = fold_in_mixture(phi, k, ids, prior);
        for (const int w : ids) {
            double p = 0.0;
            for (int t = 0; t < k; ++t) {
                p += theta[static_cast<std::size_t>(t)] *
                     phi[static_cast<std::size_t>(t)][static_cast<std::size_t>(w)];
            }
            log_likelihood += std::log(p);
            ++tokens;
        }
    }
    if (skipped_docs) *skipped_docs = skipped;
    if (tokens == 0) throw DataError("perplexity undefined: no in-vocabulary tokens");
    return std::exp(-log_likelihood / static_cast<double>(tokens));
}

double cluster_precision_impl(const std::vector<std::vector<double>>& word_dist,
                              const Vocabulary& vocab,
                              const std::unordered_map<std::string, std::string>& reference,
                              int n) {
    const int k = static_cast<int>(word_dist.size());
    double sum = 0.0;
    int counted_topics = 0;
    for (int topic = 0; topic < k; ++topic) {
        const auto words = top_words_impl(word_dist, vocab, topic, n);
        std::unordered_map<std::string, int> cluster_counts;
        int covered = 0;
        for (const auto& w : words) {
            const auto it = reference.find(w);
            if (it == reference.end()) continue;
            ++covered;
            ++cluster_counts[it->second];
        }
        if (covered == 0) continue;
        int majority = 0;
        for (const auto& [cluster, count] : cluster_counts) majority = std::max(majority, count);
        sum += static_cast<double>(majority) / static_cast<double>(covered);
        ++counted_topics;
    }
    if (counted_topics == 0) {
        throw DataError("cluster precision undefined: reference covers no top words");
    }
    return sum / static_cast<double>(counted_topics);
}

}  // namespace

std::vector<std::string> top_words(const LdaModel& model, int topic, int n) {
    return top_words_impl(model.phi, model.vocab, topic, n);
}

std::vector<std::string> top_words(const PlsaModel& model, int topic, int n) {
    return top_words_impl(model.p_w_given_z, model.vocab, topic, n);
}

double perplexity(const LdaModel& model, const std::vector<TokenDoc>& docs,
                  std::size_t* skipped_docs) {
    return perplexity_impl(model.phi, model.k, model.vocab, docs, model.alpha, skipped_docs);
}

double perplexity(const PlsaModel& model, const std::vector<TokenDoc>& docs,
                  std::size_t* skipped_docs) {
    return perplexity_impl(model.p_w_given_z, model.k, model.vocab, docs, 0.0, skipped_docs);
}

double cluster_precision(const LdaModel& model,
                         const std::unordered_map<std::string, std::string>& reference, int n) {
    return cluster_precision_impl(model.phi, model.vocab, reference, n);
}

double cluster_precision(const PlsaModel& model,
                         const std::unordered_map<std::string, std::string>& reference, int n) {
    return cluster_precision_impl(model.p_w_given_z, model.vocab, reference, n);
}

std::vector<int> rank_topics_by_mass(const LdaModel& model) {
    std::vector<double> mass(static_cast<std::size_t>(model.k), 0.0);
    for (std::size_t d = 0; d < model.docs.size(); ++d) {
        const double len = static_cast<double>(model.docs[d].size());
        for (int t = 0; t < model.k; ++t) {
            mass[static_cast<std::size_t>(t)] += model.theta[d][static_cast<std::size_t>(t)] * len;
        }
    }
    std::vector<int> order(static_cast<std::size_t>(model.k));
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](int a, int b) {
        if (mass[static_cast<std::size_t>(a)] != mass[static_cast<std::size_t>(b)]) {
            return mass[static_cast<std::size_t>(a)] > mass[static_cast<std::size_t>(b)];
        }
        return a < b;
    });
    return order;
}

namespace {

nlohmann::json vocab_to_json(const Vocabulary& vocab) { return vocab.terms; }

Vocabulary vocab_from_json(const nlohmann::json& j) {
    Vocabulary v;
    for (const auto& term : j) v.add(term.get<std::string>());
    return v;
}

nlohmann::json load_model_json(const std::string& path, const char* expected_format) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open model file: " + path);
    nlohmann::json j = nlohmann::json::parse(in, nullptr, false);
    if (j.is_discarded()) throw ParseError("model file is not valid JSON: " + path);
    if (j.value("format", "") != expected_format || j.value("version", 0) != 1) {
        throw ParseError("unsupported model format in " + path);
    }
    return j;
}

}  // namespace

void save_lda(const LdaModel& model, const std::string& path) {
    nlohmann::json j;
    j["format"] = "emotrend-lda";
    j["version"] = 1;
    j["k"] = model.k;
    j["alpha"] = model.alpha;
    j["beta"] = model.beta;
    j["seed"] = model.seed;
    j["vocabulary"] = vocab_to_json(model.vocab);
    j["doc_ids"] = model.doc_ids;
    j["phi"] = model.phi;
    j["theta"] = model.theta;
    std::ofstream out(path);
    if (!out) throw IoError("cannot open model file for writing: " + path);
    out << j.dump() << '\n';
}

LdaModel load_lda(const std::string& path) {
    const auto j = load_model_json(path, "emotrend-lda");
    LdaModel m;
    m.k = j.at("k").get<int>();
    m.alpha = j.at("alpha").get<double>();
    m.beta = j.at("beta").get<double>();
    m.seed = j.at("seed").get<std::uint64_t>();
    m.vocab = vocab_from_json(j.at("vocabulary"));
    m.doc_ids = j.at("doc_ids").get<std::vector<std::string>>();
    m.phi = j.at("phi").get<std::vector<std::vector<double>>>();
    m.theta = j.at("theta").get<std::vector<std::vector<double>>>();
    return m;
}

void save_plsa(const PlsaModel& model, const std::string& path) {
    nlohmann::json j;
    j["format"] = "emotrend-plsa";
    j["version"] = 1;
    j["k"] = model.k;
    j["seed"] = model.seed;
    j["vocabulary"] = vocab_to_json(model.vocab);
    j["doc_ids"] = model.doc_ids;
    j["p_w_given_z"] = model.p_w_given_z;
    j["p_z_given_d"] = model.p_z_given_d;
    j["log_likelihood"] = model.log_likelihood;
    std::ofstream out(path);
    if (!out) throw IoError("cannot open model file for writing: " + path);
    out << j.dump() << '\n';
}

PlsaModel load_plsa(const std::string& path) {
    const auto j = load_model_json(path, "emotrend-plsa");
    PlsaModel m;
    m.k = j.at("k").get<int>();
    m.seed = j.at("seed").get<std::uint64_t>();
    m.vocab = vocab_from_json(j.at("vocabulary"));
    m.doc_ids = j.at("doc_ids").get<std::vector<std::string>>();
    m.p_w_given_z = j.at("p_w_given_z").get<std::vector<std::vector<double>>>();
    m.p_z_given_d = j.at("p_z_given_d").get<std::vector<std::vector<double>>>();
    m.log_likelihood = j.at("log_likelihood").get<std::vector<double>>();
    return m;
}

}  // namespace emotrend
