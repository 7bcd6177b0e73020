"""Synthetic mFTI-16 grid: ICL cells shifted by one offset per data condition.

Only the per-condition means of this model are published, so the offsets are chosen
to make the bucket means land on them. Cells keep two decimals.
"""
import json
import os

ROOT = os.path.join(os.path.dirname(__file__), "..", "..")
TARGETS = {
    "same_direction": 15.7,
    "reversed_direction": 13.7,
    "unseen_direction": 12.6,
    "unseen_src": 14.9,
    "unseen_tgt": 14.5,
    "unseen_both": 15.3,
}


def read_grid(path):
    with open(path) as f:
        rows = [line.rstrip("\n").split("\t") for line in f if line.strip()]
    langs = rows[0][1:]
    cells = {}
    for row in rows[1:]:
        for t, v in zip(langs, row[1:]):
            if v:
                cells[(row[0], t)] = float(v)
    return langs, cells


def classify(p, s, t):
    if (s, t) in p["pairs"]:
        return "same_direction"
    if (t, s) in p["pairs"]:
        return "reversed_direction"
    seen_src = s not in p["unseen"]
    seen_tgt = t not in p["unseen"]
    if seen_src and seen_tgt:
        return "unseen_direction"
    if seen_tgt:
        return "unseen_src"
    if seen_src:
        return "unseen_tgt"
    return "unseen_both"


def main():
    langs, icl = read_grid(os.path.join(ROOT, "data/fixtures/icl8_bleu.tsv"))
    with open(os.path.join(ROOT, "data/partitions/mfti16.json")) as f:
        p = json.load(f)
    p["pairs"] = {tuple(x.split("-")) for x in p["train_pairs"]}
    buckets = {}
    for (s, t), v in icl.items():
        buckets.setdefault(classify(p, s, t), []).append((s, t))
    out = {}
    for cond, dirs in buckets.items():
        base = sum(icl[d] for d in dirs) / len(dirs)
        delta = TARGETS[cond] - base
        for d in dirs:
            out[d] = round(icl[d] + delta, 2)
        mean = sum(out[d] for d in dirs) / len(dirs)
        assert abs(mean - TARGETS[cond]) < 0.01, (cond, mean)
    lines = ["\t" + "\t".join(langs)]
    for s in langs:
        lines.append(s + "\t" + "\t".join("" if s == t else f"{out[(s, t)]:.2f}" for t in langs))
    with open(os.path.join(ROOT, "data/fixtures/mfti16_synthetic_bleu.tsv"), "w") as f:
        f.write("\n".join(lines) + "\n")


if __name__ == "__main__":
    main()
