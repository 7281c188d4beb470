"""Independent brute-force oracles, written straight from the definitions.

Everything here is deliberately scalar and loop-based, sharing no code with
the library paths it checks.
"""

from __future__ import annotations

import math


def latent_track_scalar(points, f_t, f_s):
    """Pixel trajectory -> latent coordinates, one scalar at a time.

    points: list of (row, col); length 1+T with T divisible by f_t.
    Returns list of (row, col) latent positions of length 1 + T/f_t.
    """
    T = len(points) - 1
    out = [(points[0][0] / f_s, points[0][1] / f_s)]
    for n in range(1, T // f_t + 1):
        sr = 0.0
        sc = 0.0
        for i in range((n - 1) * f_t + 1, n * f_t + 1):
            sr += points[i][0]
            sc += points[i][1]
        out.append((sr / (f_t * f_s), sc / (f_t * f_s)))
    return out


def round_half_up_clamped(value, upper):
    cell = math.floor(value + 0.5)
    return min(max(cell, 0), upper)


def quantized_track_scalar(points, f_t, f_s, lat_h, lat_w):
    """latent_track_scalar followed by half-up rounding and clamping."""
    lat = latent_track_scalar(points, f_t, f_s)
    return [
        (round_half_up_clamped(r, lat_h - 1), round_half_up_clamped(c, lat_w - 1))
        for r, c in lat
    ]


def block_mean_video_scalar(video, f_t, f_s):
    """Block-mean encoding by explicit loops over pixels.

    video: nested lists or ndarray indexed [frame][row][col][channel].
    """
    frames = len(video)
    T = frames - 1
    H = len(video[0])
    W = len(video[0][0])
    C = len(video[0][0][0])
    Hl, Wl = H // f_s, W // f_s
    latent = []
    frame0 = [[[0.0] * C for _ in range(Wl)] for _ in range(Hl)]
    for r in range(Hl):
        for c in range(Wl):
            for ch in range(C):
                s = 0.0
                for i in range(f_s):
                    for j in range(f_s):
                        s += float(video[0][r * f_s + i][c * f_s + j][ch])
                frame0[r][c][ch] = s / (f_s * f_s)
    latent.append(frame0)
    for n in range(1, T // f_t + 1):
        frame = [[[0.0] * C for _ in range(Wl)] for _ in range(Hl)]
        for r in range(Hl):
            for c in range(Wl):
                for ch in range(C):
                    s = 0.0
                    for t in range((n - 1) * f_t + 1, n * f_t + 1):
                        for i in range(f_s):
                            for j in range(f_s):
                                s += float(video[t][r * f_s + i][c * f_s + j][ch])
                    frame[r][c][ch] = s / (f_t * f_s * f_s)
        latent.append(frame)
    return latent


def zbuffer_visibility_scalar(cells, depths, height, width):
    """All-pairs occlusion check for one frame.

    cells: list of (row, col) integer pixel cells per point (already rounded);
    depths: camera-space depth per point.  A point is visible when its depth is
    positive, its cell lies inside the image, and no other positive-depth point
    shares the cell with strictly smaller depth.  Equal depths keep both.
    """
    n = len(cells)
    visible = []
    for i in range(n):
        r, c = cells[i]
        if depths[i] <= 0 or r < 0 or r >= height or c < 0 or c >= width:
            visible.append(False)
            continue
        ok = True
        for j in range(n):
            if j == i or depths[j] <= 0:
                continue
            if cells[j] == cells[i] and depths[j] < depths[i]:
                ok = False
                break
        visible.append(ok)
    return visible


def ssim_scalar(a, b, window):
    """SSIM between two 2-D float lists/arrays with an explicit window loop.

    window: 2-D normalized weights (e.g. 11x11 Gaussian).  Valid-mode: the map
    is evaluated only where the window fits, then averaged.
    """
    K1, K2 = 0.01, 0.03
    c1, c2 = (K1 * 1.0) ** 2, (K2 * 1.0) ** 2
    H = len(a)
    W = len(a[0])
    win = len(window)
    half = win // 2
    values = []
    for r in range(half, H - half):
        for c in range(half, W - half):
            mu_a = mu_b = 0.0
            for i in range(win):
                for j in range(win):
                    w = window[i][j]
                    mu_a += w * a[r - half + i][c - half + j]
                    mu_b += w * b[r - half + i][c - half + j]
            va = vb = vab = 0.0
            for i in range(win):
                for j in range(win):
                    w = window[i][j]
                    da = a[r - half + i][c - half + j] - mu_a
                    db = b[r - half + i][c - half + j] - mu_b
                    va += w * da * da
                    vb += w * db * db
                    vab += w * da * db
            num = (2 * mu_a * mu_b + c1) * (2 * vab + c2)
            den = (mu_a * mu_a + mu_b * mu_b + c1) * (va + vb + c2)
            values.append(num / den)
    return sum(values) / len(values)


def psnr_scalar(a, b):
    """Frame-averaged PSNR for [0,1] data via explicit loops."""
    frames = len(a)
    total = 0.0
    for f in range(frames):
        se = 0.0
        count = 0
        fa, fb = a[f], b[f]
        for r in range(len(fa)):
            for c in range(len(fa[0])):
                for ch in range(len(fa[0][0])):
                    d = float(fa[r][c][ch]) - float(fb[r][c][ch])
                    se += d * d
                    count += 1
        mse = se / count
        total += math.inf if mse == 0.0 else 10.0 * math.log10(1.0 / mse)
    return total / frames
