"""Emotion and semantic trend analysis for timestamped short texts.

The heavy lifting lives in the compiled extension; this package re-exports
its public surface.
"""

from ._core import (  # noqa: F401
    EMOTIONS,
    EmbeddingTable,
    EmotionLexicon,
    LdaModel,
    PlsaModel,
    compute_metrics,
    is_english,
    lda_fit,
    load_nrc,
    load_term_set,
    mean_ci,
    ols_fit,
    plsa_fit,
    preprocess,
    score_tokens,
    stem,
    train_word2vec,
)

__all__ = [
    "EMOTIONS",
    "EmbeddingTable",
    "EmotionLexicon",
    "LdaModel",
    "PlsaModel",
    "compute_metrics",
    "is_english",
    "lda_fit",
    "load_nrc",
    "load_term_set",
    "mean_ci",
    "ols_fit",
    "plsa_fit",
    "preprocess",
    "score_tokens",
    "stem",
    "train_word2vec",
]
