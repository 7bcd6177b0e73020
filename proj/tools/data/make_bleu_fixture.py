"""Builds tests/fixtures/bleu_parity.json: hypothesis/reference sets scored once by sacreBLEU.

Sentences are assembled from the aligned CLDR strings in data/corpus plus a set of
hand-written segments exercising 13a edge cases (punctuation, numbers, entities,
Unicode spaces). Hypotheses are seeded perturbations of the references.

usage: python3 make_bleu_fixture.py  (run from tools/data; needs sacrebleu)
"""

import csv
import json
import random
from pathlib import Path

import sacrebleu
from sacrebleu.metrics import BLEU

ROOT = Path(__file__).resolve().parents[2]
SEED = 20240517

EDGE_SEGMENTS = [
    "It costs $5.50, or 1,000 yen.",
    "Pages 10-20 (see fig. 3).",
    "AT&amp;T said &quot;no&quot; &lt;today&gt;.",
    "e.g. the U.S. and U.K.",
    "50% of 3.14 is 1.57!",
    "He said: \"Don't!\"",
    "x+y=z; a/b*c",
    "a{b}c [d] ~e~ `f` ^g^ |h| _i_ @j #k",
    "1990-2000, 2001-",
    "Hello, world!",
    "C'est l'été, n'est-ce pas ?",
    "¿Qué? ¡Sí!",
    "“Quoted” text — with dashes…",
    "tabs\tand nbsp　ideographic",
    "ends with dot.",
    ".leading dot and,comma",
    "1.5.6 3,4,5 7.x x.7",
    "<skipped> token removed",
]

TOKENIZATION_CASES = EDGE_SEGMENTS + [
    "",
    "   ",
    "trailing spaces   ",
    "line-\nbreak and\nnewline",
    "你好，世界！",
    "மொழிபெயர்ப்பு சோதனை.",
    "Привет, мир. 12.5-3",
    "مرحبا، عالم.",
    "&amp;&amp;",
    "x y\u0085z",
    "\u000bvt\u001cfs",
    "2-3-4",
    "a.b,c",
    ",.,.",
]


def load_rows():
    with open(ROOT / "data/corpus/cldr_multiparallel.tsv", encoding="utf-8") as f:
        reader = csv.reader(f, delimiter="\t", quoting=csv.QUOTE_NONE)
        header = next(reader)
        return header[1:], [dict(zip(header, row)) for row in reader]


def perturb(rng, ref, pool):
    words = ref.split(" ")
    kind = rng.choice(["copy", "drop", "swap", "replace", "truncate", "extend", "mix", "disjoint"])
    if kind == "copy":
        return ref
    if kind == "drop" and len(words) > 1:
        del words[rng.randrange(len(words))]
    elif kind == "swap" and len(words) > 2:
        i = rng.randrange(len(words) - 1)
        words[i], words[i + 1] = words[i + 1], words[i]
    elif kind == "replace":
        words[rng.randrange(len(words))] = rng.choice(pool).split(" ")[0]
    elif kind == "truncate" and len(words) > 2:
        words = words[: max(1, len(words) // 2)]
    elif kind == "extend":
        words += rng.choice(pool).split(" ")
    elif kind == "mix":
        other = rng.choice(pool).split(" ")
        words = [w if rng.random() < 0.6 else rng.choice(other) for w in words]
    elif kind == "disjoint":
        return rng.choice(pool)
    return " ".join(words)


def build_set(rng, langs, rows, n, lang_filter):
    hyps, refs, langs_out = [], [], []
    for i in range(n):
        lang = lang_filter[i % len(lang_filter)]
        pool = [r[lang] for r in rows if r[lang]]
        parts = [rng.choice(pool) for _ in range(rng.randint(2, 5))]
        if lang != "zh" and rng.random() < 0.5:
            parts.insert(rng.randrange(len(parts) + 1), rng.choice(EDGE_SEGMENTS))
        sep = "" if lang == "zh" else rng.choice([" ", ", ", " ; ", ". "])
        ref = sep.join(parts)
        hyp = perturb(rng, ref, pool)
        if rng.random() < 0.1:
            hyp += rng.choice(["  ", " ", " 　"])
        hyps.append(hyp)
        refs.append(ref)
        langs_out.append(lang)
    return hyps, refs, langs_out


def score_set(name, tokenize, hyps, refs, langs):
    out = {"name": name, "tokenize": tokenize, "langs": langs, "hyps": hyps, "refs": refs}
    for smooth in ("none", "exp", "floor"):
        out[f"corpus_bleu_{smooth}"] = BLEU(tokenize=tokenize, smooth_method=smooth).corpus_score(hyps, [refs]).score
    for smooth in ("exp", "floor"):
        out[f"sentence_bleu_{smooth}"] = [
            sacrebleu.sentence_bleu(h, [r], tokenize=tokenize, smooth_method=smooth).score for h, r in zip(hyps, refs)
        ]
    return out


def main():
    rng = random.Random(SEED)
    langs, rows = load_rows()
    non_zh = [l for l in langs if l != "zh"]
    h, r, l = build_set(rng, langs, rows, 100, non_zh)
    sets = [score_set("multilingual-13a", "13a", h, r, l)]
    h, r, l = build_set(rng, langs, rows, 30, ["zh"])
    sets.append(score_set("zh-char", "char", h, r, l))

    tok13a = sacrebleu.tokenizers.tokenizer_13a.Tokenizer13a()
    tokchar = sacrebleu.tokenizers.tokenizer_char.TokenizerChar()
    cases = [{"text": t, "13a": tok13a(t.rstrip()).split(), "char": tokchar(t.rstrip()).split()} for t in TOKENIZATION_CASES]

    # No n-gram overlap at any order under exp smoothing.
    no_overlap = {"hyp": "alpha beta gamma delta", "ref": "one two three four five",
                  "sentence_bleu_exp": sacrebleu.sentence_bleu("alpha beta gamma delta", ["one two three four five"]).score}
    fixture = {
        "oracle": f"sacrebleu {sacrebleu.__version__}",
        "sets": sets,
        "tokenization": cases,
        "no_overlap": no_overlap,
    }
    dest = ROOT / "tests/fixtures/bleu_parity.json"
    dest.write_text(json.dumps(fixture, ensure_ascii=False, indent=1) + "\n", encoding="utf-8")
    print("wrote", dest, [(s["name"], round(s["corpus_bleu_none"], 4)) for s in sets])


if __name__ == "__main__":
    main()
