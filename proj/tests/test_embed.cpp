#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <filesystem>

#include "emotrend/embed.hpp"
#include "emotrend/errors.hpp"
#include "emotrend/rng.hpp"

using namespace emotrend;
namespace fs = std::filesystem;

namespace {

TokenDoc doc_of(std::string id, std::vector<std::string> tokens) {
    TokenDoc doc;
    doc.tweet_id = std::move(id);
    doc.tokens = std::move(tokens);
    doc.raw_token_count = doc.tokens.size();
    return doc;
}

// A and B always co-occur; C and D always co-occur; never across.
std::vector<TokenDoc> cooccurrence_corpus(int docs_per_pair = 60) {
    std::vector<TokenDoc> docs;
    for (int i = 0; i < docs_per_pair; ++i) {
        docs.push_back(doc_of("ab" + std::to_string(i), {"aa", "bb", "aa", "bb", "aa", "bb"}));
        docs.push_back(doc_of("cd" + std::to_string(i), {"cc", "dd", "cc", "dd", "cc", "dd"}));
    }
    return docs;
}

Word2VecConfig small_config() {
    Word2VecConfig config;
    config.dim = 16;
    config.window = 2;
    config.negatives = 2;
    config.epochs = 10;
    config.seed = 77;
    return config;
}

}  // namespace

TEST_CASE("word2vec separates co-occurrence pairs") {
    const auto table = train_word2vec(cooccurrence_corpus(), small_config());
    CHECK(table.cosine("aa", "bb") > table.cosine("aa", "cc"));
    CHECK(table.cosine("cc", "dd") > table.cosine("cc", "bb"));
}

TEST_CASE("word2vec with zero epochs returns the seeded initialization") {
    Word2VecConfig config = small_config();
    config.epochs = 0;
    const auto table = train_word2vec(cooccurrence_corpus(10), config);
    // Context vectors start at zero; input vectors are the seeded init.
    for (const double v : table.context_vectors) CHECK(v == 0.0);
    Rng rng(config.seed);
    for (const double v : table.vectors) {
        CHECK(v == (rng.uniform() - 0.5) / config.dim);
    }
}

TEST_CASE("word2vec is deterministic per seed") {
    const auto corpus = cooccurrence_corpus(20);
    Word2VecConfig config = small_config();
    config.epochs = 3;
    const auto a = train_word2vec(corpus, config);
    const auto b = train_word2vec(corpus, config);
    CHECK(a.vectors == b.vectors);
    CHECK(a.context_vectors == b.context_vectors);

    config.seed = 78;
    const auto c = train_word2vec(corpus, config);
    CHECK(a.vectors != c.vectors);
}

TEST_CASE("word2vec validation") {
    Word2VecConfig config = small_config();
    config.negatives = 3;  // vocab of 4 < 2*3
    CHECK_THROWS_AS(train_word2vec(cooccurrence_corpus(5), config), ConfigError);

    config = small_config();
    config.dim = 1;
    CHECK_THROWS_AS(train_word2vec(cooccurrence_corpus(5), config), ConfigError);

    CHECK_THROWS_AS(train_word2vec({doc_of("a", {})}, small_config()), DataError);
}

TEST_CASE("embedding matrix stays finite after training") {
    const auto table = train_word2vec(cooccurrence_corpus(), small_config());
    for (const double v : table.vectors) CHECK(std::isfinite(v));
    for (const double v : table.context_vectors) CHECK(std::isfinite(v));
}

TEST_CASE("hogwild mode still learns the co-occurrence structure") {
    Word2VecConfig config = small_config();
    config.threads = 2;
    const auto table = train_word2vec(cooccurrence_corpus(), config);
    for (const double v : table.vectors) CHECK(std::isfinite(v));
    CHECK(table.cosine("aa", "bb") > table.cosine("aa", "cc"));
    CHECK(table.cosine("cc", "dd") > table.cosine("cc", "bb"));
}

TEST_CASE("embed_doc maps tokens, pads and truncates") {
    const auto table = train_word2vec(cooccurrence_corpus(10), small_config());

    SUBCASE("empty doc is all zero and fully masked out") {
        const DocMatrix m = embed_doc(doc_of("e", {}), table, 4);
        CHECK(m.rows() == 4);
        CHECK(m.cols() == table.dim);
        for (const double v : m.data.values) CHECK(v == 0.0);
        for (const bool valid : m.valid) CHECK(!valid);
    }
    SUBCASE("two known tokens at L=4: rows 0-1 embedded, 2-3 padding") {
        const DocMatrix m = embed_doc(doc_of("d", {"aa", "cc"}), table, 4);
        const int id_aa = table.vocab.lookup("aa");
        const int id_cc = table.vocab.lookup("cc");
        for (int c = 0; c < table.dim; ++c) {
            CHECK(m.at(0, c) == table.row(id_aa)[c]);
            CHECK(m.at(1, c) == table.row(id_cc)[c]);
            CHECK(m.at(2, c) == 0.0);
            CHECK(m.at(3, c) == 0.0);
        }
        CHECK(m.valid == std::vector<bool>{true, true, false, false});
    }
    SUBCASE("longer doc truncates to L rows") {
        const DocMatrix m = embed_doc(doc_of("d", {"aa", "bb", "cc", "dd", "aa"}), table, 3);
        CHECK(m.rows() == 3);
        CHECK(m.valid == std::vector<bool>{true, true, true});
    }
    SUBCASE("out-of-vocabulary token occupies a zero row inside the doc") {
        const DocMatrix m = embed_doc(doc_of("d", {"zebra", "aa"}), table, 3);
        for (int c = 0; c < table.dim; ++c) CHECK(m.at(0, c) == 0.0);
        CHECK(m.valid[0]);  // the token exists even though its vector is zero
        CHECK(m.valid[1]);
    }
    SUBCASE("lookup is pure: repeated calls agree") {
        const auto doc = doc_of("d", {"aa", "bb"});
        const DocMatrix m1 = embed_doc(doc, table, 4);
        const DocMatrix m2 = embed_doc(doc, table, 4);
        CHECK(m1.data.values == m2.data.values);
    }
}

TEST_CASE("sgns analytic gradient matches central finite differences") {
    const int dim = 4;
    Rng rng(31);
    std::vector<double> center(dim);
    for (auto& v : center) v = rng.uniform() - 0.5;

    // One positive context and three negatives over a 5-word toy vocabulary.
    const int n_outputs = 4;
    std::vector<std::vector<double>> outputs(n_outputs, std::vector<double>(dim));
    for (auto& row : outputs) {
        for (auto& v : row) v = rng.uniform() - 0.5;
    }
    std::vector<const double*> output_ptrs;
    std::vector<std::vector<double>> grad_outputs(n_outputs, std::vector<double>(dim, 0.0));
    std::vector<double*> grad_output_ptrs;
    for (int j = 0; j < n_outputs; ++j) {
        output_ptrs.push_back(outputs[static_cast<std::size_t>(j)].data());
        grad_output_ptrs.push_back(grad_outputs[static_cast<std::size_t>(j)].data());
    }
    std::vector<double> grad_center(dim, 0.0);
    sgns_loss_and_grad(center.data(), output_ptrs.data(), n_outputs, dim, grad_center.data(),
                       grad_output_ptrs.data());

    const double h = 1e-4;
    double max_rel = 0.0;
    auto loss_at = [&]() {
        std::vector<double> tmp_center_grad(dim);
        std::vector<std::vector<double>> tmp_grads(n_outputs, std::vector<double>(dim));
        std::vector<double*> tmp_ptrs;
        for (auto& g : tmp_grads) tmp_ptrs.push_back(g.data());
        return sgns_loss_and_grad(center.data(), output_ptrs.data(), n_outputs, dim,
                                  tmp_center_grad.data(), tmp_ptrs.data());
    };
    auto check_param = [&](double* p, double analytic) {
        const double saved = *p;
        *p = saved + h;
        const double hi = loss_at();
        *p = saved - h;
        const double lo = loss_at();
        *p = saved;
        const double numeric = (hi - lo) / (2.0 * h);
        const double rel =
            std::fabs(analytic - numeric) / std::max(std::fabs(analytic) + std::fabs(numeric), 1e-6);
        max_rel = std::max(max_rel, rel);
    };
    for (int i = 0; i < dim; ++i) check_param(&center[static_cast<std::size_t>(i)], grad_center[static_cast<std::size_t>(i)]);
    for (int j = 0; j < n_outputs; ++j) {
        for (int i = 0; i < dim; ++i) {
            check_param(&outputs[static_cast<std::size_t>(j)][static_cast<std::size_t>(i)],
                        grad_outputs[static_cast<std::size_t>(j)][static_cast<std::size_t>(i)]);
        }
    }
    CHECK(max_rel < 1e-4);
}

TEST_CASE("embedding save/load round trip") {
    const auto table = train_word2vec(cooccurrence_corpus(10), small_config());
    const fs::path path = fs::temp_directory_path() / "emotrend_embeddings.txt";
    save_embeddings(table, path.string());
    const auto loaded = load_embeddings(path.string());
    CHECK(loaded.dim == table.dim);
    CHECK(loaded.vocab.terms == table.vocab.terms);
    CHECK(loaded.vectors == table.vectors);  // shortest round-trip formatting is exact
    CHECK(loaded.config.seed == table.config.seed);

    CHECK_THROWS_AS(load_embeddings("/nonexistent/embeddings.txt"), IoError);
}
