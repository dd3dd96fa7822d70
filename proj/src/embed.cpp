#include "emotrend/embed.hpp"

#include <atomic>
#include <cmath>
#include <fstream>
#include <sstream>
#include <thread>

#include "emotrend/errors.hpp"
#include "emotrend/numfmt.hpp"
#include "emotrend/rng.hpp"

namespace emotrend {

namespace {

double sigmoid(double x) { return 1.0 / (1.0 + std::exp(-x)); }

double dot(const double* a, const double* b, int n) {
    double s = 0.0;
    for (int i = 0; i < n; ++i) s += a[i] * b[i];
    return s;
}

}  // namespace

double EmbeddingTable::cosine(const std::string& a, const std::string& b) const {
    const int ia = vocab.lookup(a);
    const int ib = vocab.lookup(b);
    if (ia < 0 || ib < 0) throw DataError("cosine: token not in embedding vocabulary");
    const double* va = row(ia);
    const double* vb = row(ib);
    const double na = std::sqrt(dot(va, va, dim));
    const double nb = std::sqrt(dot(vb, vb, dim));
    if (na == 0.0 || nb == 0.0) return 0.0;
    return dot(va, vb, dim) / (na * nb);
}

double sgns_loss_and_grad(const double* center, const double* const* outputs, int n_outputs,
                          int dim, double* grad_center, double* const* grad_outputs) {
    double loss = 0.0;
    for (int i = 0; i < dim; ++i) grad_center[i] = 0.0;
    for (int j = 0; j < n_outputs; ++j) {
        const double label = j == 0 ? 1.0 : 0.0;
        const double f = sigmoid(dot(center, outputs[j], dim));
        loss += j == 0 ? -std::log(std::max(f, 1e-300))
                       : -std::log(std::max(1.0 - f, 1e-300));
        const double g = f - label;  // d loss / d (center . output_j)
        for (int i = 0; i < dim; ++i) {
            grad_center[i] += g * outputs[j][i];
            grad_outputs[j][i] = g * center[i];
        }
    }
    return loss;
}

EmbeddingTable train_word2vec(const std::vector<TokenDoc>& docs, const Word2VecConfig& config) {
    if (config.dim < 2) throw ConfigError("embedding dimension must be >= 2");
    if (config.window < 1) throw ConfigError("window must be >= 1");
    if (config.negatives < 1) throw ConfigError("negatives must be >= 1");
    if (config.epochs < 0) throw ConfigError("epochs must be >= 0");
    if (config.threads < 1) throw ConfigError("threads must be >= 1");

    EncodedCorpus corpus = encode_docs(docs);
    if (corpus.docs.empty()) throw DataError("word2vec: no non-empty docs");
    const int v = corpus.vocab.size();
    if (v < 2 * config.negatives) {
        throw ConfigError("vocabulary smaller than twice the negative sample count");
    }

    EmbeddingTable table;
    table.vocab = std::move(corpus.vocab);
    table.dim = config.dim;
    table.config = config;

    const int dim = config.dim;
    Rng rng(config.seed);
    table.vectors.resize(static_cast<std::size_t>(v) * dim);
    for (auto& x : table.vectors) x = (rng.uniform() - 0.5) / dim;
    table.context_vectors.assign(static_cast<std::size_t>(v) * dim, 0.0);

    if (config.epochs == 0) return table;

    // Unigram^0.75 negative-sampling table.
    std::vector<double> freq(static_cast<std::size_t>(v), 0.0);
    std::size_t total_tokens = 0;
    for (const auto& doc : corpus.docs) {
        for (const int w : doc) ++freq[static_cast<std::size_t>(w)];
        total_tokens += doc.size();
    }
    constexpr std::size_t kTableSize = 1 << 20;
    std::vector<int> negative_table(kTableSize);
    {
        double norm = 0.0;
        for (const double f : freq) norm += std::pow(f, 0.75);
        double cumulative = std::pow(freq[0], 0.75) / norm;
        int word = 0;
        for (std::size_t i = 0; i < kTableSize; ++i) {
            negative_table[i] = word;
            if (static_cast<double>(i) / kTableSize > cumulative && word < v - 1) {
                ++word;
                cumulative += std::pow(freq[static_cast<std::size_t>(word)], 0.75) / norm;
            }
        }
    }

    const double total_updates =
        static_cast<double>(config.epochs) * static_cast<double>(total_tokens) + 1.0;
    std::atomic<std::size_t> processed{0};

    auto train_docs = [&](std::size_t first_doc, std::size_t last_doc, Rng& worker_rng) {
        std::vector<double> center_grad(static_cast<std::size_t>(dim));
        for (int epoch = 0; epoch < config.epochs; ++epoch) {
            for (std::size_t d = first_doc; d < last_doc; ++d) {
                const auto& doc = corpus.docs[d];
                const int len = static_cast<int>(doc.size());
                for (int pos = 0; pos < len; ++pos) {
                    const double done = static_cast<double>(
                        processed.fetch_add(1, std::memory_order_relaxed));
                    const double lr =
                        config.learning_rate * std::max(1e-4, 1.0 - done / total_updates);
                    const int span = 1 + static_cast<int>(worker_rng.uniform_int(
                                             static_cast<std::uint64_t>(config.window)));
                    const int center = doc[static_cast<std::size_t>(pos)];
                    double* center_vec =
                        table.vectors.data() + static_cast<std::size_t>(center) * dim;
                    for (int off = -span; off <= span; ++off) {
                        const int ctx_pos = pos + off;
                        if (off == 0 || ctx_pos < 0 || ctx_pos >= len) continue;
                        const int target = doc[static_cast<std::size_t>(ctx_pos)];

                        std::fill(center_grad.begin(), center_grad.end(), 0.0);
                        for (int sample = 0; sample <= config.negatives; ++sample) {
                            int out_word;
                            double label;
                            if (sample == 0) {
                                out_word = target;
                                label = 1.0;
                            } else {
                                out_word = negative_table[worker_rng.uniform_int(kTableSize)];
                                for (int tries = 0; out_word == target && tries < 100; ++tries) {
                                    out_word = negative_table[worker_rng.uniform_int(kTableSize)];
                                }
                                if (out_word == target) continue;
                                label = 0.0;
                            }
                            double* out_vec = table.context_vectors.data() +
                                              static_cast<std::size_t>(out_word) * dim;
                            const double g =
                                (label - sigmoid(dot(center_vec, out_vec, dim))) * lr;
                            for (int i = 0; i < dim; ++i) {
                                center_grad[static_cast<std::size_t>(i)] += g * out_vec[i];
                                out_vec[i] += g * center_vec[i];
                            }
                        }
                        for (int i = 0; i < dim; ++i) {
                            center_vec[i] += center_grad[static_cast<std::size_t>(i)];
                        }
                    }
                }
            }
        }
    };

    if (config.threads <= 1) {
        train_docs(0, corpus.docs.size(), rng);
        return table;
    }

    // Hogwild: workers share the tables without synchronization.
    const auto n_threads = static_cast<std::size_t>(config.threads);
    std::vector<Rng> worker_rngs;
    for (std::size_t t = 0; t < n_threads; ++t) worker_rngs.emplace_back(config.seed + 1 + t);
    std::vector<std::thread> workers;
    const std::size_t per_worker = (corpus.docs.size() + n_threads - 1) / n_threads;
    for (std::size_t t = 0; t < n_threads; ++t) {
        const std::size_t first = std::min(corpus.docs.size(), t * per_worker);
        const std::size_t last = std::min(corpus.docs.size(), first + per_worker);
        workers.emplace_back(train_docs, first, last, std::ref(worker_rngs[t]));
    }
    for (auto& w : workers) w.join();
    return table;
}

DocMatrix embed_doc(const TokenDoc& doc, const EmbeddingTable& table, int max_len) {
    if (max_len < 1) throw ConfigError("document matrix length must be >= 1");
    DocMatrix m;
    m.data = Tensor::zeros({max_len, table.dim});
    m.valid.assign(static_cast<std::size_t>(max_len), false);
    const int len = std::min<int>(max_len, static_cast<int>(doc.tokens.size()));
    for (int i = 0; i < len; ++i) {
        m.valid[static_cast<std::size_t>(i)] = true;
        const int id = table.vocab.lookup(doc.tokens[static_cast<std::size_t>(i)]);
        if (id < 0) continue;  // OOV stays a zero row
        const double* src = table.row(id);
        double* dst = m.data.values.data() + static_cast<std::size_t>(i) * table.dim;
        for (int c = 0; c < table.dim; ++c) dst[c] = src[c];
    }
    return m;
}

void save_embeddings(const EmbeddingTable& table, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw IoError("cannot open embedding file for writing: " + path);
    out << table.vocab.size() << ' ' << table.dim << ' ' << table.config.seed << '\n';
    for (int w = 0; w < table.vocab.size(); ++w) {
        out << table.vocab.terms[static_cast<std::size_t>(w)];
        const double* row = table.row(w);
        for (int c = 0; c < table.dim; ++c) out << ' ' << format_double(row[c]);
        out << '\n';
    }
    if (!out) throw IoError("write failed: " + path);
}

EmbeddingTable load_embeddings(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open embedding file: " + path);
    std::string header;
    if (!std::getline(in, header)) throw ParseError("empty embedding file: " + path);
    std::istringstream hs(header);
    std::size_t v = 0;
    int dim = 0;
    std::uint64_t seed = 0;
    if (!(hs >> v >> dim)) throw ParseError("bad embedding header: " + path);
    hs >> seed;  // optional third field

    EmbeddingTable table;
    table.dim = dim;
    table.config.dim = dim;
    table.config.seed = seed;
    table.vectors.resize(v * static_cast<std::size_t>(dim));
    std::string line;
    for (std::size_t w = 0; w < v; ++w) {
        if (!std::getline(in, line)) throw ParseError("truncated embedding file: " + path);
        std::istringstream ls(line);
        std::string term;
        if (!(ls >> term)) throw ParseError("bad embedding line in " + path);
        if (table.vocab.add(term) != static_cast<int>(w)) {
            throw ParseError("duplicate term in embedding file: " + term);
        }
        for (int c = 0; c < dim; ++c) {
            if (!(ls >> table.vectors[w * static_cast<std::size_t>(dim) + c])) {
                throw ParseError("bad embedding value for term " + term);
            }
        }
    }
    table.context_vectors.assign(v * static_cast<std::size_t>(dim), 0.0);
    return table;
}

}  // namespace emotrend
