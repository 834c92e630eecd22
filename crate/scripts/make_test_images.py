"""Generate the bundled 64x64 8-bit grayscale test images (binary PGM).

The images are synthetic but photo-like: smooth illumination, edges, and
fine texture, so adjacent pixels are strongly correlated and histograms are
broad. Output is deterministic for a fixed numpy version.
"""
import pathlib

import numpy as np

SIZE = 64
OUT = pathlib.Path(__file__).resolve().parent.parent / "data" / "images"


def spectral_noise(rng, beta):
    fy = np.fft.fftfreq(SIZE)[:, None]
    fx = np.fft.fftfreq(SIZE)[None, :]
    f = np.sqrt(fx**2 + fy**2)
    f[0, 0] = 1.0
    phase = rng.uniform(0, 2 * np.pi, (SIZE, SIZE))
    spec = f ** (-beta / 2) * np.exp(1j * phase)
    spec[0, 0] = 0
    field = np.real(np.fft.ifft2(spec))
    return (field - field.mean()) / field.std()


def to_u8(x, lo=1.0, hi=99.0):
    x = (x - np.percentile(x, lo)) / (np.percentile(x, hi) - np.percentile(x, lo))
    return np.clip(np.round(x * 255), 0, 255).astype(np.uint8)


def terrain(rng):
    return to_u8(spectral_noise(rng, 3.0) + 0.15 * spectral_noise(rng, 1.5))


def blobs(rng):
    y, x = np.mgrid[0:SIZE, 0:SIZE].astype(float)
    img = 0.6 * x / SIZE + 0.3 * y / SIZE
    for _ in range(9):
        cx, cy = rng.uniform(0, SIZE, 2)
        r = rng.uniform(4, 14)
        a = rng.uniform(-1, 1)
        img += a * np.exp(-((x - cx) ** 2 + (y - cy) ** 2) / (2 * r * r))
    img += 0.08 * spectral_noise(rng, 2.0)
    return to_u8(img)


def portrait(rng):
    y, x = np.mgrid[0:SIZE, 0:SIZE].astype(float)
    img = 0.35 + 0.25 * np.sin(x / 9.0) * np.cos(y / 13.0)
    face = ((x - 32) / 15) ** 2 + ((y - 30) / 20) ** 2
    img = np.where(face < 1, 0.75 - 0.3 * face, img)
    for ex in (26, 38):
        eye = ((x - ex) / 3.0) ** 2 + ((y - 26) / 2.0) ** 2
        img = np.where(eye < 1, 0.1, img)
    mouth = ((x - 32) / 7.0) ** 2 + ((y - 40) / 1.6) ** 2
    img = np.where(mouth < 1, 0.25, img)
    hair = (((x - 32) / 18) ** 2 + ((y - 22) / 16) ** 2 < 1) & (y < 16)
    img = np.where(hair, 0.15 + 0.05 * np.sin(x), img)
    img += 0.07 * spectral_noise(rng, 2.2)
    return to_u8(img)


def rings(rng):
    y, x = np.mgrid[0:SIZE, 0:SIZE].astype(float)
    r = np.hypot(x - 22, y - 40)
    img = np.cos(r / 3.5) * np.exp(-r / 40) + 0.4 * (y / SIZE)
    img += 0.25 * spectral_noise(rng, 2.5)
    return to_u8(img)


def write_pgm(path, img):
    h, w = img.shape
    path.write_bytes(f"P5\n{w} {h}\n255\n".encode() + img.tobytes())


def main():
    OUT.mkdir(parents=True, exist_ok=True)
    rng = np.random.default_rng(20251015)
    for name, gen in [("terrain", terrain), ("blobs", blobs), ("portrait", portrait), ("rings", rings)]:
        img = gen(rng)
        write_pgm(OUT / f"{name}.pgm", img)
        a = img.astype(float)
        ch = np.corrcoef(a[:, :-1].ravel(), a[:, 1:].ravel())[0, 1]
        cv = np.corrcoef(a[:-1, :].ravel(), a[1:, :].ravel())[0, 1]
        hist = np.bincount(img.ravel(), minlength=256) / img.size
        ent = -np.sum(hist[hist > 0] * np.log2(hist[hist > 0]))
        print(f"{name}: ch={ch:.4f} cv={cv:.4f} entropy={ent:.4f}")


if __name__ == "__main__":
    main()
