"""Independent dense-matrix reference for the cycle walk.

Builds the 2N x 2N step operator entry by entry (coin, then conditional
shift j -> j + 2s - 1 mod N) and applies it step by step. Used to freeze
golden vectors consumed by the Rust test-suite.
"""
import json
import sys

import numpy as np


def coin(theta):
    c, s = np.cos(theta), np.sin(theta)
    return np.array([[c, s], [s, -c]], dtype=complex)


def step_matrix(n_pos, c):
    u = np.zeros((2 * n_pos, 2 * n_pos), dtype=complex)
    for s_in in range(2):
        for j in range(n_pos):
            for s_out in range(2):
                # (C x 1): |s_in, j> -> sum_s_out C[s_out, s_in] |s_out, j>
                # S: |s_out, j> -> |s_out, j + 2 s_out - 1>
                dest = (j + 2 * s_out - 1) % n_pos
                u[s_out * n_pos + dest, s_in * n_pos + j] += c[s_out, s_in]
    return u


def run(n, steps, message, thetas, coin_init=(1, 0)):
    n_pos = 2 ** n
    mats = [step_matrix(n_pos, coin(t)) for t in thetas]
    psi = np.zeros(2 * n_pos, dtype=complex)
    psi[0] = coin_init[0]
    psi[n_pos] = coin_init[1]
    for t in range(steps):
        idx = int(message[t]) if t < len(message) else 2
        psi = mats[idx] @ psi
    amp2 = np.abs(psi) ** 2
    return amp2[:n_pos] + amp2[n_pos:]


if __name__ == "__main__":
    which = sys.argv[1]
    if which == "hadamard8":
        p = run(3, 3, "", (np.pi / 4,) * 3)
        print(json.dumps([float(x) for x in p]))
    elif which == "baseline":
        p = run(8, 128, "0011" * 32, (0.1, 0.2, 0.3))
        print(json.dumps([float(x) for x in p]))
    elif which == "paradox":
        p = run(8, 128, "0011" * 32, (157 / 150, 157 / 900, 157 / 900))
        print(json.dumps([float(x) for x in p]))
