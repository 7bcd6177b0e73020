"""Exports URIEL typological vectors (via lang2vec) for the core languages.

Categories map to lang2vec feature sets as follows (k-NN imputed variants for
the typological sets, so the file carries few undefined entries):
  geography -> geo, syntax -> syntax_knn, phylogeny -> fam,
  phonology -> phonology_knn, inventory -> inventory_knn
Undefined entries are written as '?'.

Usage: python3 tools/data/make_features.py data/features/uriel_knn.tsv
"""

import sys

import lang2vec.lang2vec as l2v

ISO3 = dict(en="eng", de="deu", fr="fra", ca="cat", fi="fin", ru="rus", bg="bul",
            zh="zho", ko="kor", ar="arb", sw="swh", hi="hin", ta="tam")
CATEGORIES = [("geography", "geo"), ("syntax", "syntax_knn"), ("phylogeny", "fam"),
              ("phonology", "phonology_knn"), ("inventory", "inventory_knn")]


def fmt(v):
    if v == "--":
        return "?"
    return ("%.6f" % float(v)).rstrip("0").rstrip(".") or "0"


def main(path):
    with open(path, "w", encoding="utf-8") as f:
        f.write("# URIEL feature vectors exported with lang2vec %s\n" % "1.1.2")
        f.write("# variant: " + ", ".join(f"{c}={s}" for c, s in CATEGORIES) + "\n")
        for cat, fs in CATEGORIES:
            feats = l2v.get_features(list(ISO3.values()), fs)
            for lang, iso in ISO3.items():
                f.write(f"{lang}\t{cat}\t" + ",".join(fmt(v) for v in feats[iso]) + "\n")


if __name__ == "__main__":
    main(sys.argv[1])
