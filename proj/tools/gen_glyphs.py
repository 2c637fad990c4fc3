#!/usr/bin/env python3
"""Rasterizes printable ASCII from a monospace TrueType font into the glyph
table compiled into the synthetic line renderer (src/data/glyphs.inc).

Usage: gen_glyphs.py FONT.ttf > src/data/glyphs.inc
"""
import sys

from PIL import Image, ImageDraw, ImageFont

CELL_W, CELL_H, SIZE, BASELINE = 12, 24, 20, 18


def main():
    font = ImageFont.truetype(sys.argv[1], SIZE)
    ascent, _ = font.getmetrics()
    print("// Generated by tools/gen_glyphs.py; do not edit.")
    print(f"constexpr int kGlyphWidth = {CELL_W};")
    print(f"constexpr int kGlyphHeight = {CELL_H};")
    print(f"constexpr int kGlyphBaseline = {BASELINE};")
    print("constexpr char32_t kFirstGlyph = 32;")
    print("constexpr char32_t kLastGlyph = 126;")
    print(f"constexpr unsigned char kGlyphs[95][{CELL_H * CELL_W}] = {{")
    for code in range(32, 127):
        img = Image.new("L", (CELL_W, CELL_H), 0)
        draw = ImageDraw.Draw(img)
        left = (CELL_W - font.getlength(chr(code))) / 2
        draw.text((left, BASELINE - ascent), chr(code), fill=255, font=font)
        px = list(img.tobytes())
        print("  {" + ",".join(str(v) for v in px) + "},  // " + repr(chr(code)))
    print("};")


if __name__ == "__main__":
    main()
