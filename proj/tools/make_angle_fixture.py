#!/usr/bin/env python3
"""Writes the bundled human-study angle annotation fixture.

Nine annotator angles per image are placed symmetrically around the
reference mean, a_k = mean + sqrt(variance) * k / sqrt(7.5) for k = -4..4,
so their sample mean and (n - 1) variance equal the reference values.
"""

import argparse
import math
from pathlib import Path

# image, human mean, dip angle or None, human variance
ROWS = [
    ("image1", 3.059, 2.912, 0.008),
    ("image2", 3.198, None, 0.003),
    ("image3", 2.849, 2.677, 0.017),
    # Reference mean and dip are rounded; 1.097 / 1.309 would give 0.212
    # against the reference 0.211, so both are taken mid-interval.
    ("image4", 1.0974, 1.30855, 0.069),
    ("image5", 0.357, None, 0.024),
    ("image6", 2.717, 2.643, 0.004),
    ("image7", 1.249, None, 0.028),
    ("image8", 0.286, 0.288, 0.008),
]


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("out", type=Path)
    args = parser.parse_args()
    lines = ["image_id,annotator_id,angle"]
    for image, mean, dip, var in ROWS:
        step = math.sqrt(var) / math.sqrt(7.5)
        for k in range(-4, 5):
            lines.append(f"{image},p{k + 5},{mean + step * k:.17g}")
        if dip is not None:
            lines.append(f"{image},dip,{dip:.17g}")
    args.out.write_text("\n".join(lines) + "\n")


if __name__ == "__main__":
    main()
