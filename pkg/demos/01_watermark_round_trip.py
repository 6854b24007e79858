"""
Fragile watermarking round trip
===============================

Embed a binary watermark into a grayscale cover frame, measure exactly
how little of the cover changes, and recover the watermark bit for bit.
"""

import os

import numpy as np

from vidmark import binarize, capacity, correlation, embed, extract, save_pgm_image, ssim

out_dir = os.path.join(os.path.dirname(__file__), "out")
os.makedirs(out_dir, exist_ok=True)

rng = np.random.default_rng(42)

# A 256x256 cover frame holds one watermark pair per 8x8 block.
cover = rng.integers(0, 256, size=(256, 256), dtype=np.uint8)
print(f"cover 256x256, capacity {capacity(256, 256)} pairs "
      f"({2 * capacity(256, 256)} watermark pixels)")

# The watermark is any binary image; binarize() maps grayscale to {0, 255}.
wm = binarize(rng.integers(0, 256, size=(31, 64), dtype=np.uint8))
print(f"watermark {wm.shape[1]}x{wm.shape[0]} ({wm.size} pixels)")

stego = embed(cover, wm)

# How invasive was that? Each used block had exactly 2 of its 64 pixels
# rewritten, 3.125% of the block, and unused blocks are untouched.
changed = stego != cover
n_pairs = (wm.size + 1) // 2
per_block = changed.reshape(32, 8, 32, 8).sum(axis=(1, 3)).reshape(-1)
print(f"pixels changed: {int(changed.sum())} of {cover.size} "
      f"({changed.mean() * 100:.3f}% of the frame)")
print(f"used blocks: {n_pairs}, each with {per_block[:n_pairs].max()} changed pixels "
      f"({per_block[:n_pairs].max() / 64 * 100:.3f}% of the block)")
print(f"untouched blocks: {(per_block == 0).sum()} of {per_block.size}")

recovered = extract(stego, wm.shape[1], wm.shape[0])
print(f"bit-exact recovery: {np.array_equal(recovered, wm)}")
print(f"correlation: {correlation(wm, recovered)}")
print(f"ssim: {ssim(wm, recovered)}")

for name, image in (("stego.pgm", stego), ("wm_recovered.pgm", recovered)):
    with open(os.path.join(out_dir, name), "wb") as fh:
        fh.write(save_pgm_image(image))
print(f"wrote stego.pgm and wm_recovered.pgm under {out_dir}")
