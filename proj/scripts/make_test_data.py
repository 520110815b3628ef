"""Regenerates tests/data: five downscaled natural images, a degraded copy of
each, and scikit-image SSIM reference values for the pairs."""
import json
import os

import numpy as np
from PIL import Image
from skimage import data
from skimage.metrics import structural_similarity

OUT = os.path.join(os.path.dirname(__file__), "..", "tests", "data")
NAMES = ["astronaut", "coffee", "chelsea", "rocket", "motorcycle_left"]


def luma(rgb):
    rgb = rgb.astype(np.float64)
    return 0.299 * rgb[..., 0] + 0.587 * rgb[..., 1] + 0.114 * rgb[..., 2]


def main():
    rng = np.random.default_rng(7)
    refs = {}
    for name in NAMES:
        if name == "motorcycle_left":
            img = data.stereo_motorcycle()[0]
        else:
            img = getattr(data, name)()
        im = Image.fromarray(img).convert("RGB")
        w, h = im.size
        scale = 192.0 / max(w, h)
        im = im.resize((max(11, round(w * scale)), max(11, round(h * scale))), Image.BILINEAR)
        a = np.asarray(im)
        noise = rng.normal(0.0, 12.0, a.shape)
        shifted = np.roll(a.astype(np.float64), 1, axis=1) * 0.5 + a * 0.5
        b = np.clip(np.rint(shifted + noise), 0, 255).astype(np.uint8)
        Image.fromarray(a).save(os.path.join(OUT, f"{name}.png"))
        Image.fromarray(b).save(os.path.join(OUT, f"{name}_degraded.png"))
        ga, gb = luma(a), luma(b)
        refs[name] = structural_similarity(
            ga, gb, gaussian_weights=True, sigma=1.5, use_sample_covariance=False,
            data_range=255.0)
    with open(os.path.join(OUT, "ssim_reference.json"), "w") as f:
        json.dump(refs, f, indent=2)
        f.write("\n")


if __name__ == "__main__":
    main()
