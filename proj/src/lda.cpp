#include <algorithm>
#include <cmath>
#include <vector>

#include "emotrend/errors.hpp"
#include "emotrend/rng.hpp"
#include "emotrend/topics.hpp"

namespace emotrend {

namespace {

void validate_fit_inputs(const EncodedCorpus& corpus, int k, int iters) {
    if (k < 2) throw ConfigError("topic count must be >= 2");
    if (iters < 1) throw ConfigError("iteration count must be >= 1");
    if (corpus.vocab.size() == 0) throw DataError("empty vocabulary: no non-empty docs");
    if (static_cast<std::size_t>(k) > corpus.total_tokens()) {
        throw ConfigError("topic count exceeds total token count");
    }
}

void estimate_distributions(LdaModel& model) {
    const int k = model.k;
    const int v = model.vocab.size();
    const double v_beta = v * model.beta;
    const auto ku = static_cast<std::size_t>(k);
    model.phi.assign(ku, std::vector<double>(static_cast<std::size_t>(v)));
    for (int t = 0; t < k; ++t) {
        const auto tu = static_cast<std::size_t>(t);
        const double denom = model.n_k[tu] + v_beta;
        for (int w = 0; w < v; ++w) {
            model.phi[tu][static_cast<std::size_t>(w)] =
                (model.n_kw[tu][static_cast<std::size_t>(w)] + model.beta) / denom;
        }
    }
    model.theta.assign(model.docs.size(), std::vector<double>(ku));
    for (std::size_t d = 0; d < model.docs.size(); ++d) {
        const double denom = static_cast<double>(model.docs[d].size()) + k * model.alpha;
        for (int t = 0; t < k; ++t) {
            const auto tu = static_cast<std::size_t>(t);
            model.theta[d][tu] = (model.n_dk[d][tu] + model.alpha) / denom;
        }
    }
}

}  // namespace

LdaModel lda_fit(const std::vector<TokenDoc>& docs, int k, double alpha, double beta, int iters,
                 std::uint64_t seed) {
    return lda_fit(docs, k, alpha, beta, iters, seed, 0, nullptr);
}

LdaModel lda_fit(const std::vector<TokenDoc>& docs, int k, double alpha, double beta, int iters,
                 std::uint64_t seed, int checkpoint_every, const LdaCheckpointFn& on_checkpoint) {
    if (alpha <= 0.0 || beta <= 0.0) throw ConfigError("alpha and beta must be positive");
    EncodedCorpus corpus = encode_docs(docs);
    validate_fit_inputs(corpus, k, iters);

    LdaModel model;
    model.k = k;
    model.alpha = alpha;
    model.beta = beta;
    model.seed = seed;
    model.vocab = std::move(corpus.vocab);
    model.doc_ids = std::move(corpus.doc_ids);
    model.docs = std::move(corpus.docs);

    const int v = model.vocab.size();
    const std::size_t d_count = model.docs.size();
    const auto ku = static_cast<std::size_t>(k);
    model.n_dk.assign(d_count, std::vector<int>(ku, 0));
    model.n_kw.assign(ku, std::vector<int>(static_cast<std::size_t>(v), 0));
    model.n_k.assign(ku, 0);
    model.assignments.resize(d_count);

    Rng rng(seed);
    for (std::size_t d = 0; d < d_count; ++d) {
        model.assignments[d].resize(model.docs[d].size());
        for (std::size_t i = 0; i < model.docs[d].size(); ++i) {
            const int t = static_cast<int>(rng.uniform_int(static_cast<std::uint64_t>(k)));
            const int w = model.docs[d][i];
            model.assignments[d][i] = t;
            ++model.n_dk[d][static_cast<std::size_t>(t)];
            ++model.n_kw[static_cast<std::size_t>(t)][static_cast<std::size_t>(w)];
            ++model.n_k[static_cast<std::size_t>(t)];
        }
    }

    const double v_beta = v * beta;
    std::vector<double> cumulative(ku);
    for (int sweep = 0; sweep < iters; ++sweep) {
        for (std::size_t d = 0; d < d_count; ++d) {
            auto& doc = model.docs[d];
            auto& z = model.assignments[d];
            auto& dk = model.n_dk[d];
            for (std::size_t i = 0; i < doc.size(); ++i) {
                const int w = doc[i];
                const int old_t = z[i];
                --dk[static_cast<std::size_t>(old_t)];
                --model.n_kw[static_cast<std::size_t>(old_t)][static_cast<std::size_t>(w)];
                --model.n_k[static_cast<std::size_t>(old_t)];

                double total = 0.0;
                for (int t = 0; t < k; ++t) {
                    const auto tu = static_cast<std::size_t>(t);
                    total += (dk[tu] + alpha) *
                             (model.n_kw[tu][static_cast<std::size_t>(w)] + beta) /
                             (model.n_k[tu] + v_beta);
                    cumulative[tu] = total;
                }
                const double u = rng.uniform() * total;
                int new_t = k - 1;
                for (int t = 0; t < k; ++t) {
                    if (cumulative[static_cast<std::size_t>(t)] > u) {
                        new_t = t;
                        break;
                    }
                }
                z[i] = new_t;
                ++dk[static_cast<std::size_t>(new_t)];
                ++model.n_kw[static_cast<std::size_t>(new_t)][static_cast<std::size_t>(w)];
                ++model.n_k[static_cast<std::size_t>(new_t)];
            }
        }
        if (on_checkpoint && checkpoint_every > 0 && (sweep + 1) % checkpoint_every == 0) {
            estimate_distributions(model);
            on_checkpoint(model, sweep + 1);
        }
    }

    estimate_distributions(model);
    return model;
}

PlsaModel plsa_fit(const std::vector<TokenDoc>& docs, int k, int iters, std::uint64_t seed) {
    if (iters < 0) throw ConfigError("iteration count must be >= 0");
    EncodedCorpus corpus = encode_docs(docs);
    validate_fit_inputs(corpus, k, iters == 0 ? 1 : iters);

    PlsaModel model;
    model.k = k;
    model.seed = seed;
    model.vocab = std::move(corpus.vocab);
    model.doc_ids = std::move(corpus.doc_ids);
    model.docs = std::move(corpus.docs);

    const int v = model.vocab.size();
    const std::size_t d_count = model.docs.size();
    const auto ku = static_cast<std::size_t>(k);

    // Uniform rows perturbed by seeded noise in [0, 0.01), renormalized.
    Rng rng(seed);
    auto init_rows = [&](std::size_t rows, std::size_t cols) {
        std::vector<std::vector<double>> m(rows, std::vector<double>(cols));
        for (auto& row : m) {
            double total = 0.0;
            for (auto& cell : row) {
                cell = 1.0 / static_cast<double>(cols) + rng.uniform() * 0.01;
                total += cell;
            }
            for (auto& cell : row) cell /= total;
        }
        return m;
    };
    model.p_w_given_z = init_rows(ku, static_cast<std::size_t>(v));
    model.p_z_given_d = init_rows(d_count, ku);

    // Sparse doc-term counts.
    std::vector<std::vector<std::pair<int, int>>> counts(d_count);
    for (std::size_t d = 0; d < d_count; ++d) {
        std::vector<int> freq(static_cast<std::size_t>(v), 0);
        for (const int w : model.docs[d]) ++freq[static_cast<std::size_t>(w)];
        for (int w = 0; w < v; ++w) {
            if (freq[static_cast<std::size_t>(w)] > 0) {
                counts[d].emplace_back(w, freq[static_cast<std::size_t>(w)]);
            }
        }
    }

    std::vector<std::vector<double>> acc_wz(ku, std::vector<double>(static_cast<std::size_t>(v)));
    std::vector<double> responsibility(ku);
    for (int iter = 0; iter < iters; ++iter) {
        for (auto& row : acc_wz) std::fill(row.begin(), row.end(), 0.0);

        for (std::size_t d = 0; d < d_count; ++d) {
            auto& dz = model.p_z_given_d[d];
            std::vector<double> acc_dz(ku, 0.0);
            double doc_tokens = 0.0;
            for (const auto& [w, count] : counts[d]) {
                double denom = 0.0;
                for (int t = 0; t < k; ++t) {
                    const auto tu = static_cast<std::size_t>(t);
                    responsibility[tu] = model.p_w_given_z[tu][static_cast<std::size_t>(w)] * dz[tu];
                    denom += responsibility[tu];
                }
                if (denom <= 0.0) continue;
                for (int t = 0; t < k; ++t) {
                    const auto tu = static_cast<std::size_t>(t);
                    const double expected = count * responsibility[tu] / denom;
                    acc_wz[tu][static_cast<std::size_t>(w)] += expected;
                    acc_dz[tu] += expected;
                }
                doc_tokens += count;
            }
            if (doc_tokens > 0.0) {
                for (int t = 0; t < k; ++t) {
                    dz[static_cast<std::size_t>(t)] = acc_dz[static_cast<std::size_t>(t)] / doc_tokens;
                }
            }
        }

        for (int t = 0; t < k; ++t) {
            auto& row = acc_wz[static_cast<std::size_t>(t)];
            double total = 0.0;
            for (const double cell : row) total += cell;
            if (total <= 0.0) continue;
            for (int w = 0; w < v; ++w) {
                model.p_w_given_z[static_cast<std::size_t>(t)][static_cast<std::size_t>(w)] =
                    row[static_cast<std::size_t>(w)] / total;
            }
        }

        double ll = 0.0;
        for (std::size_t d = 0; d < d_count; ++d) {
            const auto& dz = model.p_z_given_d[d];
            for (const auto& [w, count] : counts[d]) {
                double p = 0.0;
                for (int t = 0; t < k; ++t) {
                    const auto tu = static_cast<std::size_t>(t);
                    p += model.p_w_given_z[tu][static_cast<std::size_t>(w)] * dz[tu];
                }
                ll += count * std::log(p);
            }
        }
        model.log_likelihood.push_back(ll);
    }
    return model;
}

}  // namespace emotrend
