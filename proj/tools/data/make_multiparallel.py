"""Writes a 13-way aligned phrase table from CLDR display names.

Each row holds the same CLDR key (territory, language, script or currency)
rendered in every core language. Tests and examples assemble synthetic
parallel corpora from it.

Usage: python3 tools/data/make_multiparallel.py data/corpus/cldr_multiparallel.tsv
"""

import sys

from cldr_text import CORE_LANGS, keyed_strings

KINDS = ("territory:", "language:", "script:", "currency:")


def main(path):
    tables = {lang: keyed_strings(lang) for lang in CORE_LANGS}
    keys = sorted(k for k in set.intersection(*(set(t) for t in tables.values()))
                  if k.startswith(KINDS))
    rows = []
    for k in keys:
        cells = [tables[lang][k] for lang in CORE_LANGS]
        if any("\t" in c or not c.strip() for c in cells):
            continue
        rows.append([k] + cells)
    with open(path, "w", encoding="utf-8") as f:
        f.write("\t".join(["key"] + CORE_LANGS) + "\n")
        for r in rows:
            f.write("\t".join(r) + "\n")
    print(len(rows), "rows")


if __name__ == "__main__":
    main(sys.argv[1])
