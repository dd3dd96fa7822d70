#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <unordered_map>
#include <vector>

#include "emotrend/textprep.hpp"

namespace emotrend {

struct Vocabulary {
    std::vector<std::string> terms;             // dense index -> term
    std::unordered_map<std::string, int> index; // term -> index

    int size() const { return static_cast<int>(terms.size()); }
    int lookup(const std::string& term) const {
        const auto it = index.find(term);
        return it == index.end() ? -1 : it->second;
    }
    int add(const std::string& term);
};

// Token-id view of a TokenDoc list. Zero-token docs are dropped; vocabulary
// indices follow first appearance order, so encoding is deterministic.
struct EncodedCorpus {
    Vocabulary vocab;
    std::vector<std::string> doc_ids;
    std::vector<std::vector<int>> docs;

    std::size_t total_tokens() const;
};

EncodedCorpus encode_docs(const std::vector<TokenDoc>& docs);

struct LdaModel {
    int k = 0;
    double alpha = 0.0;
    double beta = 0.0;
    std::uint64_t seed = 0;
    Vocabulary vocab;
    std::vector<std::string> doc_ids;
    std::vector<std::vector<int>> docs;

    // Sampler state: topic assignment per token and the three count views.
    std::vector<std::vector<int>> assignments;
    std::vector<std::vector<int>> n_dk;  // D x K
    std::vector<std::vector<int>> n_kw;  // K x V
    std::vector<int> n_k;                // K

    // Prior-smoothed estimates from the final counts.
    std::vector<std::vector<double>> phi;    // K x V, rows sum to 1
    std::vector<std::vector<double>> theta;  // D x K, rows sum to 1
};

struct PlsaModel {
    int k = 0;
    std::uint64_t seed = 0;
    Vocabulary vocab;
    std::vector<std::string> doc_ids;
    std::vector<std::vector<int>> docs;

    std::vector<std::vector<double>> p_w_given_z;  // K x V
    std::vector<std::vector<double>> p_z_given_d;  // D x K
    std::vector<double> log_likelihood;            // one entry per EM iteration
};

inline double default_lda_alpha(int k) { return 50.0 / k; }
inline constexpr double kDefaultLdaBeta = 0.01;

// Collapsed Gibbs sampling. Full conditional for token w in doc d:
//   p(z = t | rest) proportional to (n_dk + alpha) * (n_kw + beta) / (n_k + V*beta)
// with all counts excluding the token being resampled.
LdaModel lda_fit(const std::vector<TokenDoc>& docs, int k, double alpha, double beta, int iters,
                 std::uint64_t seed);

// Same sampler with a diagnostic hook: after every `checkpoint_every` sweeps
// the callback sees the model with counts, assignments and current phi/theta.
using LdaCheckpointFn = std::function<void(const LdaModel&, int sweep)>;
LdaModel lda_fit(const std::vector<TokenDoc>& docs, int k, double alpha, double beta, int iters,
                 std::uint64_t seed, int checkpoint_every, const LdaCheckpointFn& on_checkpoint);

// EM on the aspect model; p_z_given_d / p_w_given_z start uniform with seeded
// noise in [0, 0.01) and renormalized. iters = 0 returns the initialization.
PlsaModel plsa_fit(const std::vector<TokenDoc>& docs, int k, int iters, std::uint64_t seed);

// n most probable terms of topic `k`, descending; ties break on term index.
std::vector<std::string> top_words(const LdaModel& model, int topic, int n);
std::vector<std::string> top_words(const PlsaModel& model, int topic, int n);

// exp(-LL / tokens) with per-doc mixtures re-estimated by deterministic
// EM fold-in against the fixed topic-word distribution. Docs with no
// in-vocabulary tokens are skipped (counted in *skipped_docs).
double perplexity(const LdaModel& model, const std::vector<TokenDoc>& docs,
                  std::size_t* skipped_docs = nullptr);
double perplexity(const PlsaModel& model, const std::vector<TokenDoc>& docs,
                  std::size_t* skipped_docs = nullptr);

// Mean over topics of the fraction of reference-covered top-n words that fall
// in the topic's majority reference cluster. Topics with no covered words are
// excluded; a reference covering nothing is an error.
double cluster_precision(const LdaModel& model,
                         const std::unordered_map<std::string, std::string>& reference, int n);
double cluster_precision(const PlsaModel& model,
                         const std::unordered_map<std::string, std::string>& reference, int n);

// Rank topics by corpus-wide expected token mass: sum_d theta_dk * len(d).
std::vector<int> rank_topics_by_mass(const LdaModel& model);

void save_lda(const LdaModel& model, const std::string& path);
LdaModel load_lda(const std::string& path);
void save_plsa(const PlsaModel& model, const std::string& path);
PlsaModel load_plsa(const std::string& path);

}  // namespace emotrend
