"""Hot loops for orbit expansion and rasterization.

Two interchangeable implementations live here: numba-compiled loops and plain
numpy.  Setting the environment variable MDC_NO_NUMBA to a non-empty value other
than "0" selects numpy.  Both paths use the same real arithmetic (complex
products and quotients written out by hand) so their outputs agree bit for bit.
"""
from __future__ import annotations

import os

import numpy as np

try:
    import numba
except ImportError:  # pragma: no cover - numba is a declared dependency
    numba = None


def use_numba() -> bool:
    flag = os.environ.get("MDC_NO_NUMBA", "")
    return numba is not None and flag in ("", "0")


def backend_name() -> str:
    return "numba" if use_numba() else "numpy"


def pack_matrices(entries) -> np.ndarray:
    """(k, 8) float64 rows: re/im of a, b, c, d."""
    out = np.empty((len(entries), 8), dtype=np.float64)
    for i, row in enumerate(entries):
        for j, v in enumerate(row):
            v = complex(v)
            out[i, 2 * j] = v.real
            out[i, 2 * j + 1] = v.imag
    return out


# ---------------------------------------------------------------------------
# numpy path


def _expand_numpy(xr, xi, inf, last, mats, inv):
    outs = []
    for j in range(mats.shape[0]):
        keep = last != inv[j]
        zr, zi, zinf = xr[keep], xi[keep], inf[keep]
        ar, ai, br, bi, cr, ci, dr, di = mats[j]
        nr = ar * zr - ai * zi + br
        ni = ar * zi + ai * zr + bi
        er = cr * zr - ci * zi + dr
        ei = cr * zi + ci * zr + di
        s = er * er + ei * ei
        pole = s == 0.0
        with np.errstate(divide="ignore", invalid="ignore"):
            yr = (nr * er + ni * ei) / s
            yi = (ni * er - nr * ei) / s
        yinf = pole & ~zinf
        # image of infinity is a/c, or infinity when c = 0
        cs = cr * cr + ci * ci
        if cs == 0.0:
            yinf = yinf | zinf
            yr = np.where(zinf, 0.0, yr)
            yi = np.where(zinf, 0.0, yi)
        else:
            yr = np.where(zinf, (ar * cr + ai * ci) / cs, yr)
            yi = np.where(zinf, (ai * cr - ar * ci) / cs, yi)
        yr = np.where(yinf, 0.0, yr)
        yi = np.where(yinf, 0.0, yi)
        outs.append((yr, yi, yinf, np.full(yr.shape, j, dtype=np.int64)))
    return tuple(np.concatenate(parts) for parts in zip(*outs))


def _raster_numpy(xr, xi, x0, y0, x1, y1, width, height, buf):
    fx = (xr - x0) * (width / (x1 - x0))
    fy = (y1 - xi) * (height / (y1 - y0))
    ok = (fx >= 0) & (fx < width) & (fy >= 0) & (fy < height)
    cols = np.floor(fx[ok]).astype(np.int64)
    rows = np.floor(fy[ok]).astype(np.int64)
    buf[rows, cols] = 1
    return buf


# ---------------------------------------------------------------------------
# numba path

if numba is not None:

    @numba.njit(cache=True)
    def _expand_numba(xr, xi, inf, last, mats, inv):
        n = xr.shape[0]
        k = mats.shape[0]
        total = 0
        for j in range(k):
            for p in range(n):
                if last[p] != inv[j]:
                    total += 1
        yr = np.empty(total, dtype=np.float64)
        yi = np.empty(total, dtype=np.float64)
        yinf = np.zeros(total, dtype=np.bool_)
        ylast = np.empty(total, dtype=np.int64)
        q = 0
        for j in range(k):
            ar, ai, br, bi = mats[j, 0], mats[j, 1], mats[j, 2], mats[j, 3]
            cr, ci, dr, di = mats[j, 4], mats[j, 5], mats[j, 6], mats[j, 7]
            cs = cr * cr + ci * ci
            for p in range(n):
                if last[p] == inv[j]:
                    continue
                ylast[q] = j
                if inf[p]:
                    if cs == 0.0:
                        yinf[q] = True
                        yr[q] = 0.0
                        yi[q] = 0.0
                    else:
                        yr[q] = (ar * cr + ai * ci) / cs
                        yi[q] = (ai * cr - ar * ci) / cs
                else:
                    zr, zi = xr[p], xi[p]
                    nr = ar * zr - ai * zi + br
                    ni = ar * zi + ai * zr + bi
                    er = cr * zr - ci * zi + dr
                    ei = cr * zi + ci * zr + di
                    s = er * er + ei * ei
                    if s == 0.0:
                        yinf[q] = True
                        yr[q] = 0.0
                        yi[q] = 0.0
                    else:
                        yr[q] = (nr * er + ni * ei) / s
                        yi[q] = (ni * er - nr * ei) / s
                q += 1
        return yr, yi, yinf, ylast

    @numba.njit(cache=True)
    def _raster_numba(xr, xi, x0, y0, x1, y1, width, height, buf):
        sx = width / (x1 - x0)
        sy = height / (y1 - y0)
        for p in range(xr.shape[0]):
            fx = (xr[p] - x0) * sx
            fy = (y1 - xi[p]) * sy
            if fx >= 0 and fx < width and fy >= 0 and fy < height:
                buf[int(np.floor(fy)), int(np.floor(fx))] = 1
        return buf


def expand_level(xr, xi, inf, last, mats, inv):
    """Apply every letter whose inverse is not the last letter used."""
    args = (
        np.ascontiguousarray(xr, dtype=np.float64),
        np.ascontiguousarray(xi, dtype=np.float64),
        np.ascontiguousarray(inf, dtype=np.bool_),
        np.ascontiguousarray(last, dtype=np.int64),
        np.ascontiguousarray(mats, dtype=np.float64),
        np.ascontiguousarray(inv, dtype=np.int64),
    )
    if use_numba():
        return _expand_numba(*args)
    return _expand_numpy(*args)


def rasterize(xr, xi, viewport, width, height):
    buf = np.zeros((height, width), dtype=np.uint8)
    xr = np.ascontiguousarray(xr, dtype=np.float64)
    xi = np.ascontiguousarray(xi, dtype=np.float64)
    x0, y0, x1, y1 = (float(v) for v in viewport)
    if use_numba():
        return _raster_numba(xr, xi, x0, y0, x1, y1, width, height, buf)
    return _raster_numpy(xr, xi, x0, y0, x1, y1, width, height, buf)
