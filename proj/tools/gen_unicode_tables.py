#!/usr/bin/env python3
"""Regenerates src/unicode_tables.inc from Python's unicodedata.

Usage: python3 tools/gen_unicode_tables.py > src/unicode_tables.inc
"""
import sys
import unicodedata

MAX = 0x110000


def punct_ranges():
    ranges = []
    start = None
    for cp in range(MAX):
        is_p = unicodedata.category(chr(cp)).startswith("P")
        if is_p and start is None:
            start = cp
        elif not is_p and start is not None:
            ranges.append((start, cp - 1))
            start = None
    if start is not None:
        ranges.append((start, MAX - 1))
    return ranges


def fold_entries():
    out = []
    for cp in range(MAX):
        c = chr(cp)
        if 0xD800 <= cp <= 0xDFFF:
            continue
        f = c.casefold()
        if f != c:
            cps = [ord(x) for x in f]
            assert len(cps) <= 3
            out.append((cp, cps + [0] * (3 - len(cps))))
    return out


def main():
    w = sys.stdout.write
    w("// Generated by tools/gen_unicode_tables.py (Unicode %s). Do not edit.\n\n"
      % unicodedata.unidata_version)
    w("constexpr CodeRange kPunctuationRanges[] = {\n")
    for a, b in punct_ranges():
        w("    {0x%04X, 0x%04X},\n" % (a, b))
    w("};\n\n")
    w("constexpr FoldEntry kCaseFold[] = {\n")
    for cp, cps in fold_entries():
        w("    {0x%04X, {0x%04X, 0x%04X, 0x%04X}},\n" % (cp, *cps))
    w("};\n")


if __name__ == "__main__":
    main()
