"""Fixtures and random corpus generators shared by the test modules."""

import json
import random

FIX_A = [
    ("D1", "apple fruit"),
    ("D2", "apple pie fruit"),
    ("D3", "banana fruit"),
    ("D4", "car engine"),
]


def jsonl(pairs):
    return [json.dumps({"id": i, "text": t}) for i, t in pairs]


def random_corpus(rng: random.Random, n_docs=None, vocab_size=None):
    """Documents over a planted hierarchy, so subsumption edges actually appear.

    Each vocabulary word may get a "parent" word that is added to a
    document with high probability whenever the word itself is drawn.
    """
    n_docs = n_docs or rng.randint(5, 50)
    vocab_size = vocab_size or rng.randint(10, 100)
    vocab = [f"w{k:03d}" for k in range(vocab_size)]
    parent = {}
    for k in range(1, vocab_size):
        if rng.random() < 0.6:
            parent[vocab[k]] = vocab[rng.randrange(0, k)]
    weights = [1.0 / (k + 1) for k in range(vocab_size)]
    docs = []
    for d in range(n_docs):
        length = rng.randint(1, 15)
        words = rng.choices(vocab, weights=weights, k=length)
        extra = []
        for w in words:
            while w in parent and rng.random() < 0.85:
                w = parent[w]
                extra.append(w)
        tokens = words + extra
        rng.shuffle(tokens)
        docs.append((f"d{d:03d}", " ".join(tokens)))
    return docs


def synthetic_corpus(n_docs=10_000, avg_len=100, vocab_size=5_000, seed=7):
    """Large Zipfian corpus for throughput checks."""
    rng = random.Random(seed)
    vocab = [f"t{k:05d}" for k in range(vocab_size)]
    cum = []
    total = 0.0
    for k in range(vocab_size):
        total += 1.0 / (k + 1) ** 1.05
        cum.append(total)
    docs = []
    for d in range(n_docs):
        length = rng.randint(avg_len // 2, avg_len * 3 // 2)
        words = rng.choices(vocab, cum_weights=cum, k=length)
        docs.append((f"doc{d:05d}", " ".join(words)))
    return docs
