"""Shared helpers for extracting language-tagged text from Unicode CLDR via Babel."""

import unicodedata

from babel import Locale

CORE_LANGS = "en de fr ca fi ru bg zh ko ar sw hi ta".split()

# Expected script per language (Unicode character-name prefix).
SCRIPTS = {
    "en": "LATIN", "de": "LATIN", "fr": "LATIN", "ca": "LATIN", "fi": "LATIN",
    "sw": "LATIN", "ru": "CYRILLIC", "bg": "CYRILLIC", "zh": "CJK",
    "ko": "HANGUL", "ar": "ARABIC", "hi": "DEVANAGARI", "ta": "TAMIL",
}


def keyed_strings(code):
    """Returns {key: display string} for the CLDR display-name tables of a locale."""
    loc = Locale.parse(code)
    out = {}
    for k, v in loc.territories.items():
        out["territory:" + k] = v
    for k, v in loc.languages.items():
        out["language:" + k] = v
    for k, v in loc.scripts.items():
        out["script:" + k] = v
    for k, v in loc.currencies.items():
        out["currency:" + k] = v
    for k, v in loc.time_zones.items():
        if isinstance(v, dict):
            for kk, vv in v.items():
                if isinstance(vv, str):
                    out[f"tz:{k}:{kk}"] = vv
                elif isinstance(vv, dict):
                    for k3, v3 in vv.items():
                        out[f"tz:{k}:{kk}:{k3}"] = v3
    for k, v in loc.meta_zones.items():
        if isinstance(v, dict):
            for kk, vv in v.items():
                if isinstance(vv, dict):
                    for k3, v3 in vv.items():
                        out[f"mz:{k}:{kk}:{k3}"] = v3
    for k, v in loc._data.get("unit_display_names", {}).items():
        if isinstance(v, dict):
            for kk, vv in v.items():
                if isinstance(vv, str):
                    out[f"unit:{k}:{kk}"] = vv
    for ctx in ("format", "stand-alone"):
        for width in ("wide",):
            for k, v in loc.months.get(ctx, {}).get(width, {}).items():
                out[f"month:{ctx}:{k}"] = v
            for k, v in loc.days.get(ctx, {}).get(width, {}).items():
                out[f"day:{ctx}:{k}"] = v
    return {k: " ".join(v.split()) for k, v in out.items() if isinstance(v, str)}


def script_ok(lang, text):
    """True when every letter of text belongs to the language's expected script."""
    want = SCRIPTS[lang]
    letters = [c for c in text if unicodedata.category(c).startswith("L")]
    if not letters:
        return False
    for c in letters:
        name = unicodedata.name(c, "")
        if want == "CJK":
            if not name.startswith("CJK"):
                return False
        elif not name.startswith(want):
            return False
    return True


def clean(lang, text):
    if len(text) < 3 or "{" in text or "\t" in text:
        return False
    if any(ch.isdigit() for ch in text):
        return False
    return script_ok(lang, text)
