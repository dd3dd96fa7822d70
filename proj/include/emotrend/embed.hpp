#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "emotrend/tensor.hpp"
#include "emotrend/textprep.hpp"
#include "emotrend/topics.hpp"

namespace emotrend {

struct Word2VecConfig {
    int dim = 100;
    int window = 5;
    int negatives = 5;
    int epochs = 5;
    double learning_rate = 0.025;
    std::uint64_t seed = 1;
    // 1 = deterministic single-threaded training. More threads switch to
    // lock-free hogwild updates, which are not reproducible run to run.
    int threads = 1;
};

struct EmbeddingTable {
    Vocabulary vocab;
    int dim = 0;
    Word2VecConfig config;
    std::vector<double> vectors;         // V x dim, row-major input embeddings
    std::vector<double> context_vectors; // V x dim, output side

    const double* row(int word) const { return vectors.data() + static_cast<std::size_t>(word) * dim; }
    double* row(int word) { return vectors.data() + static_cast<std::size_t>(word) * dim; }
    double cosine(const std::string& a, const std::string& b) const;
};

// L x dim document matrix: row i holds the embedding of token i (zero row for
// out-of-vocabulary tokens); rows past the doc length are zero and masked out.
struct DocMatrix {
    Tensor data;                // shape {L, dim}
    std::vector<bool> valid;    // true for rows inside the doc

    int rows() const { return data.shape.empty() ? 0 : data.shape[0]; }
    int cols() const { return data.shape.size() < 2 ? 0 : data.shape[1]; }
    double at(int r, int c) const { return data.at(r, c); }
};

// Skip-gram with negative sampling, single-threaded SGD; the negative table,
// initialization and update order all derive from the seed.
EmbeddingTable train_word2vec(const std::vector<TokenDoc>& docs, const Word2VecConfig& config);

DocMatrix embed_doc(const TokenDoc& doc, const EmbeddingTable& table, int max_len);

// One SGNS example: loss and analytic gradients, exposed for verification.
// Gradients are accumulated into grad_in (center row) and grad_out (context
// and negative rows).
double sgns_loss_and_grad(const double* center, const double* const* outputs, int n_outputs,
                          int dim, double* grad_center, double* const* grad_outputs);

// word2vec text format: "V dim" header then one "term v1 .. v_dim" line each.
void save_embeddings(const EmbeddingTable& table, const std::string& path);
EmbeddingTable load_embeddings(const std::string& path);

}  // namespace emotrend
