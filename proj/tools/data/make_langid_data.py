"""Builds the language-identification training and held-out slices from CLDR.

Items (display names, zone names, unit names, ...) are split 70/30 by a stable
hash so the held-out slice never shares an item with training. Held-out
sentences join randomly drawn held-out items until they reach a sampled
target length of at least 20 characters.

Usage: python3 tools/data/make_langid_data.py data/langid
"""

import collections
import hashlib
import os
import random
import sys

from cldr_text import CORE_LANGS, clean, keyed_strings

HELDOUT_SENTENCES = 1012


def main(out_dir):
    items = {}
    for lang in CORE_LANGS:
        items[lang] = sorted({v for v in keyed_strings(lang).values() if clean(lang, v)})
    owners = collections.Counter(v for lang in CORE_LANGS for v in items[lang])
    os.makedirs(os.path.join(out_dir, "train"), exist_ok=True)
    os.makedirs(os.path.join(out_dir, "heldout"), exist_ok=True)
    for lang in CORE_LANGS:
        train, held = [], []
        for v in items[lang]:
            h = int(hashlib.sha256((lang + "\0" + v).encode()).hexdigest()[:8], 16)
            (held if h % 10 < 3 else train).append(v)
        # Strings shared by several languages are ambiguous as test material.
        held = [v for v in held if owners[v] == 1]
        rng = random.Random("langid-heldout-" + lang)
        sep = "" if lang == "zh" else " "
        sentences = []
        while len(sentences) < HELDOUT_SENTENCES:
            target = rng.randint(20, 90)
            parts = []
            while len(sep.join(parts)) < target:
                parts.append(rng.choice(held))
            sentences.append(sep.join(parts))
        with open(os.path.join(out_dir, "train", lang + ".txt"), "w", encoding="utf-8") as f:
            f.write("\n".join(train) + "\n")
        with open(os.path.join(out_dir, "heldout", lang + ".txt"), "w", encoding="utf-8") as f:
            f.write("\n".join(sentences) + "\n")
        print(lang, len(train), "train items,", len(held), "held-out items")


if __name__ == "__main__":
    main(sys.argv[1] if len(sys.argv) > 1 else "data/langid")
