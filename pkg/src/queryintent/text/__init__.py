from queryintent.text.wordpiece import (
    UNK,
    Vocab,
    WordpieceTokenizer,
    learn_vocab,
    normalize_words,
    tokenize,
)
from queryintent.text.urls import extract_domain, url_words
from queryintent.text.embeddings import (
    EmbeddingTable,
    SkipGramEmbeddings,
    embed_text,
    load_embeddings,
    save_embeddings,
    train_embeddings,
)

__all__ = [
    "UNK",
    "Vocab",
    "WordpieceTokenizer",
    "learn_vocab",
    "normalize_words",
    "tokenize",
    "extract_domain",
    "url_words",
    "EmbeddingTable",
    "SkipGramEmbeddings",
    "embed_text",
    "load_embeddings",
    "save_embeddings",
    "train_embeddings",
]
