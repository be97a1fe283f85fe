#!/usr/bin/env python3
"""Generates vectors.txt for the fixture KG.

Every word gets a private random direction; words listed in CONCEPTS also
get weighted shared axes so that related words end up close in cosine, and the
tokens of a multi-word entity name share one direction per name.
Output is fully deterministic (seeded per word).

    python3 make_vectors.py > vectors.txt
"""

import hashlib
import json
import re
from pathlib import Path

import numpy as np

DIM = 300
HERE = Path(__file__).resolve().parent

AXES = [
    "voice", "character", "acting", "score", "compose", "song", "perform",
    "album", "genre", "band", "direct", "produce", "film", "occupation",
    "write", "book", "marry", "publish", "label", "company", "member",
    "notable", "country", "music",
]

# word -> {axis: weight}; the private direction has weight OWN unless given.
CONCEPTS = {
    "voice": {"voice": 1.0},
    "voiced": {"voice": 1.0},
    "behind": {"voice": 0.8, "character": 0.8},
    "character": {"character": 1.0},
    "role": {"character": 0.9},
    "actor": {"acting": 1.0, "voice": 0.3},
    "actress": {"acting": 1.0},
    "score": {"score": 1.0},
    "composer": {"score": 0.9, "compose": 0.7},
    "composed": {"compose": 1.0, "score": 0.5},
    "music": {"music": 1.0, "score": 0.4, "genre": 0.4},
    "soundtrack": {"score": 0.5, "album": 0.7},
    "songwriter": {"compose": 0.5, "song": 0.4, "occupation": 0.3},
    "songs": {"song": 1.0, "perform": 0.3},
    "performed": {"perform": 1.0},
    "performer": {"perform": 1.0},
    "perform": {"perform": 1.0},
    "album": {"album": 1.0},
    "genre": {"genre": 1.0},
    "play": {"perform": 0.4, "genre": 0.3},
    "rock": {"genre": 0.5},
    "folk": {"genre": 0.3},
    "soft": {"genre": 0.1},
    "band": {"band": 1.0},
    "musical": {"band": 0.5, "music": 0.4},
    "group": {"band": 0.5},
    "america": {"band": 0.3, "country": 0.3},
    "member": {"member": 1.0, "band": 0.3},
    "director": {"direct": 1.0},
    "directed": {"direct": 1.0},
    "producer": {"produce": 1.0},
    "produced": {"produce": 1.0},
    "production": {"produce": 0.5, "company": 0.6},
    "company": {"company": 1.0},
    "made": {"produce": 0.5, "company": 0.4},
    "film": {"film": 1.0},
    "animated": {"film": 0.5},
    "feature": {"film": 0.4},
    "occupation": {"occupation": 1.0},
    "job": {"occupation": 1.0},
    "conductor": {"occupation": 0.3, "music": 0.3},
    "novelist": {"occupation": 0.3, "write": 0.5, "book": 0.3},
    "wrote": {"write": 1.0},
    "write": {"write": 1.0},
    "screenwriter": {"write": 0.8, "film": 0.4},
    "author": {"write": 0.8, "book": 0.4},
    "novel": {"book": 1.0},
    "book": {"book": 1.0},
    "based": {"book": 0.5},
    "married": {"marry": 1.0},
    "spouse": {"marry": 1.0},
    "published": {"publish": 1.0},
    "publication": {"publish": 1.0},
    "released": {"publish": 0.6, "label": 0.4},
    "record": {"label": 0.8, "album": 0.2},
    "label": {"label": 1.0},
    "notable": {"notable": 1.0},
    "work": {"notable": 0.7},
    "country": {"country": 1.0},
    "citizenship": {"country": 0.7},
    "origin": {"country": 0.6},
}
OWN = 0.6
OWN_PLAIN = 1.0
# Tokens of one multi-word proper name share a direction.
NAME_SHARE = 2.0

STOPWORDS = {
    "a", "an", "and", "are", "as", "at", "be", "but", "by", "did", "do", "does",
    "for", "from", "had", "has", "have", "he", "her", "his", "how", "i", "in",
    "is", "it", "its", "me", "my", "of", "on", "or", "she", "so", "that", "the",
    "their", "them", "then", "there", "these", "they", "this", "those", "to",
    "was", "were", "what", "when", "where", "which", "who", "whom", "whose",
    "why", "will", "with", "you", "about", "also", "any",
}


def tokenize(text):
    text = text.replace("’", "'").lower()
    out = []
    for raw in re.split(r"[^\w'\x80-\U0010ffff]+", text):
        raw = raw.replace("_", "")
        if raw.endswith("'s"):
            raw = raw[:-2]
        raw = raw.replace("'", "")
        if raw:
            out.append(raw)
    return out


def unit(seed_text):
    seed = int.from_bytes(hashlib.sha256(seed_text.encode()).digest()[:8], "little")
    v = np.random.default_rng(seed).standard_normal(DIM)
    return v / np.linalg.norm(v)


def name_groups():
    """word -> shared direction ids, one per multi-word entity name it occurs in."""
    groups = {}
    for line in (HERE / "labels.tsv").read_text(encoding="utf-8").splitlines():
        if not line.startswith("Q"):
            continue
        key, label = line.split("\t", 1)
        tokens = [t for t in tokenize(label) if t not in STOPWORDS and t not in CONCEPTS]
        if len(tokens) >= 2:
            for t in tokens:
                groups.setdefault(t, []).append(key)
    return groups


def vocabulary():
    words = set()
    for line in (HERE / "labels.tsv").read_text(encoding="utf-8").splitlines():
        if line and not line.startswith("#"):
            words.update(tokenize(line.split("\t", 1)[1]))
    for line in (HERE / "last_unicorn.tsv").read_text(encoding="utf-8").splitlines():
        for lit in re.findall(r'"([^"]*)"', line):
            words.update(tokenize(lit))
    for conv in json.loads((HERE / "benchmark.json").read_text(encoding="utf-8")):
        for turn in conv["turns"]:
            words.update(tokenize(turn["question"]))
            if turn.get("paraphrase"):
                words.update(tokenize(turn["paraphrase"]))
    words.update(CONCEPTS)
    return sorted(w for w in words if w not in STOPWORDS)


def main():
    axes = {name: unit("axis:" + name) for name in AXES}
    words = vocabulary()
    groups = name_groups()
    print(len(words), DIM)
    for w in words:
        concept = CONCEPTS.get(w)
        v = unit("word:" + w) * (OWN if concept else OWN_PLAIN)
        for axis, weight in (concept or {}).items():
            v = v + weight * axes[axis]
        for key in groups.get(w, []):
            v = v + NAME_SHARE * unit("name:" + key)
        v = v / np.linalg.norm(v)
        print(w, " ".join(f"{x:.6f}" for x in v))


if __name__ == "__main__":
    main()
