"""Toy text-classification task for the end-to-end curriculum demo.

Three topics with distinctive vocabularies plus shared filler words; the
filler ratio varies per sample, so some texts are nearly unambiguous and
others mostly noise. The model is deliberately minimal: bag-of-words
features into full-batch softmax regression. The point of the demo is the
protocol boundary with the scheduler, not model quality.
"""

from __future__ import annotations

import random
from dataclasses import dataclass

import numpy as np

TOPIC_WORDS = {
    "orbit": ["rocket", "thruster", "orbit", "capsule", "telemetry", "booster", "apogee"],
    "garden": ["compost", "seedling", "trellis", "mulch", "pruning", "pollinator", "loam"],
    "pastry": ["croissant", "laminate", "proof", "ganache", "crumb", "levain", "glaze"],
}
FILLER_WORDS = [
    "the", "a", "today", "update", "note", "report", "general", "item",
    "status", "check", "team", "plan", "review", "next", "week", "open",
]
CLASSES = sorted(TOPIC_WORDS)


@dataclass
class ToySample:
    id: str
    text: str
    label: str


def make_toy_dataset(n_per_class: int = 40, seed: int = 11) -> list[ToySample]:
    """Deterministic synthetic corpus, n_per_class texts per topic."""
    rng = random.Random(seed)
    samples = []
    for label in CLASSES:
        topical = TOPIC_WORDS[label]
        for i in range(n_per_class):
            length = rng.randint(8, 14)
            # filler share ramps up across the class: later samples are murkier
            filler_share = 0.2 + 0.6 * (i / max(1, n_per_class - 1))
            words = [
                rng.choice(FILLER_WORDS)
                if rng.random() < filler_share
                else rng.choice(topical)
                for _ in range(length)
            ]
            samples.append(ToySample(f"{label}-{i:03d}", " ".join(words), label))
    return samples


class BagOfWordsClassifier:
    """Full-batch softmax regression over a fixed corpus vocabulary."""

    def __init__(self, corpus_texts: list[str], learning_rate: float = 2.0):
        vocab = sorted({w for text in corpus_texts for w in text.split()})
        self.vocab = {w: i for i, w in enumerate(vocab)}
        self.learning_rate = learning_rate
        self.weights = np.zeros((len(CLASSES), len(vocab)))
        self.bias = np.zeros(len(CLASSES))

    def featurize(self, texts: list[str]) -> np.ndarray:
        out = np.zeros((len(texts), len(self.vocab)))
        for row, text in enumerate(texts):
            for word in text.split():
                col = self.vocab.get(word)
                if col is not None:
                    out[row, col] += 1.0
        norms = out.sum(axis=1, keepdims=True)
        return out / np.maximum(norms, 1.0)

    def train_epoch(self, texts: list[str], labels: list[str]) -> None:
        features = self.featurize(texts)
        targets = np.array([CLASSES.index(lbl) for lbl in labels])
        logits = features @ self.weights.T + self.bias
        logits -= logits.max(axis=1, keepdims=True)
        probs = np.exp(logits)
        probs /= probs.sum(axis=1, keepdims=True)
        grad = probs.copy()
        grad[np.arange(len(targets)), targets] -= 1.0
        grad /= len(targets)
        self.weights -= self.learning_rate * grad.T @ features
        self.bias -= self.learning_rate * grad.sum(axis=0)

    def predict(self, texts: list[str]) -> list[str]:
        logits = self.featurize(texts) @ self.weights.T + self.bias
        return [CLASSES[i] for i in np.argmax(logits, axis=1)]


def macro_f1(truths: list[str], predictions: list[str]) -> float:
    """Unweighted mean of per-class F1; zero-denominator classes score 0."""
    total = 0.0
    for cls in CLASSES:
        tp = sum(1 for t, p in zip(truths, predictions) if t == cls and p == cls)
        fp = sum(1 for t, p in zip(truths, predictions) if t != cls and p == cls)
        fn = sum(1 for t, p in zip(truths, predictions) if t == cls and p != cls)
        denom = 2 * tp + fp + fn
        total += 2 * tp / denom if denom else 0.0
    return total / len(CLASSES)
