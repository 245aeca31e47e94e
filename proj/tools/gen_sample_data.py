#!/usr/bin/env python3
"""Regenerates the bundled sample data under data/.

sample_corpus.txt  1,000 template sentences, one per line
sample_pairs.tsv   anchor<TAB>positive pairs (light rewrites of corpus lines)
sample_sts.tsv     sentence_a<TAB>sentence_b<TAB>gold scored pairs
"""

import random
from pathlib import Path

SUBJECTS = ["the doctor", "the engineer", "a farmer", "my neighbour", "the committee",
            "our teacher", "the pilot", "a journalist", "the old man", "the children", "the mayor",
            "a student", "the chef", "the captain", "the nurse", "the band", "the company",
            "a tourist", "the referee", "the scientist"]
VERBS = ["visited", "repaired", "painted", "discussed", "ignored", "measured", "sold", "found",
         "built", "described", "cleaned", "photographed", "delivered", "borrowed", "studied",
         "praised", "criticised", "moved", "opened", "watched"]
OBJECTS = ["the bridge", "a violin", "the harbour", "an old map", "the garden", "a letter",
           "the museum", "a bicycle", "the contract", "the engine", "a painting", "the budget",
           "the river bank", "a telescope", "the library", "the festival", "a recipe",
           "the railway", "an island", "the stadium", "a lantern", "the vaccine", "a kite",
           "the orchard", "a glacier", "the cathedral", "a mosaic", "the archive"]
PLACES = ["in the morning", "after the storm", "near the station", "during the winter",
          "before dinner", "on monday", "at the market", "in lisbon", "outside the school",
          "with great care", "without permission", "for the second time", "at midnight",
          "in the valley", "by the lake"]
RARE = ["x-45c", "caffeine", "quasar", "marzipan", "obsidian", "zeppelin", "saffron", "tundra",
        "gazebo", "nebula", "accordion", "turquoise", "hieroglyph", "monsoon", "sundial"]
EXTRAS = ["Apparently,", "Yesterday", "Once again,", "Surprisingly,", "Finally,", "Meanwhile,"]


def sentence(rng):
    parts = []
    if rng.random() < 0.3:
        parts.append(rng.choice(EXTRAS))
    subject = rng.choice(SUBJECTS)
    parts.append(subject if parts else subject.capitalize())
    parts.append(rng.choice(VERBS))
    obj = rng.choice(OBJECTS)
    if rng.random() < 0.35:
        obj += " made of " + rng.choice(RARE)
    parts.append(obj)
    if rng.random() < 0.7:
        parts.append(rng.choice(PLACES))
    return " ".join(parts) + rng.choice([".", ".", ".", "!", "?"])


def rewrite(rng, text):
    words = text.rstrip(".!?").split()
    op = rng.randrange(3)
    if op == 0 and len(words) > 4:
        del words[rng.randrange(1, len(words))]
    elif op == 1:
        words.insert(rng.randrange(1, len(words) + 1), rng.choice(["really", "quietly", "also"]))
    else:
        words = words[:]
        i = rng.randrange(len(words))
        words[i] = words[i].upper()
    return " ".join(words) + "."


def main():
    rng = random.Random(20240601)
    out = Path(__file__).resolve().parent.parent / "data"
    out.mkdir(exist_ok=True)
    corpus = [sentence(rng) for _ in range(1000)]
    (out / "sample_corpus.txt").write_text("\n".join(corpus) + "\n", encoding="utf-8")

    pairs = [f"{s}\t{rewrite(rng, s)}" for s in rng.sample(corpus, 200)]
    (out / "sample_pairs.tsv").write_text("\n".join(pairs) + "\n", encoding="utf-8")

    sts = []
    for _ in range(300):
        a = rng.choice(corpus)
        kind = rng.randrange(3)
        if kind == 0:
            b, gold = rewrite(rng, a), 4.0 + rng.random()
        elif kind == 1:
            words = a.split()
            words[-1] = rng.choice(PLACES).split()[-1] + "."
            b, gold = " ".join(words), 2.0 + rng.random()
        else:
            b, gold = rng.choice(corpus), rng.random() * 1.5
        sts.append(f"{a}\t{b}\t{gold:.2f}")
    (out / "sample_sts.tsv").write_text("\n".join(sts) + "\n", encoding="utf-8")


if __name__ == "__main__":
    main()
