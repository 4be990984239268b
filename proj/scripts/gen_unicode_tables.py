#!/usr/bin/env python3
"""Regenerate src/unicode_tables.inc from Python's unicodedata.

Emits two tables:
  * kPunctSymbolRanges: closed code point ranges whose general category is P* or S*
  * kLowerMap: simple one-to-one lowercase mappings (code point -> code point)
"""
import sys
import unicodedata
from pathlib import Path


def ranges(pred):
    out = []
    start = None
    for cp in range(0x110000):
        hit = pred(cp)
        if hit and start is None:
            start = cp
        elif not hit and start is not None:
            out.append((start, cp - 1))
            start = None
    if start is not None:
        out.append((start, 0x10FFFF))
    return out


def main():
    punct = ranges(lambda cp: unicodedata.category(chr(cp))[0] in "PS")
    lower = []
    for cp in range(0x110000):
        ch = chr(cp)
        lo = ch.lower()
        if len(lo) == 1 and lo != ch:
            lower.append((cp, ord(lo)))

    lines = [
        "// Generated by scripts/gen_unicode_tables.py from Unicode "
        + unicodedata.unidata_version + ". Do not edit.",
        "",
        "struct CodePointRange {",
        "  char32_t first;",
        "  char32_t last;",
        "};",
        "",
        "struct CaseMapping {",
        "  char32_t from;",
        "  char32_t to;",
        "};",
        "",
        "inline constexpr CodePointRange kPunctSymbolRanges[] = {",
    ]
    lines += [f"    {{0x{a:04X}, 0x{b:04X}}}," for a, b in punct]
    lines += ["};", "", "inline constexpr CaseMapping kLowerMap[] = {"]
    lines += [f"    {{0x{a:04X}, 0x{b:04X}}}," for a, b in lower]
    lines += ["};", ""]

    target = Path(sys.argv[1]) if len(sys.argv) > 1 else (
        Path(__file__).resolve().parent.parent / "src" / "unicode_tables.inc")
    target.write_text("\n".join(lines))


if __name__ == "__main__":
    main()
