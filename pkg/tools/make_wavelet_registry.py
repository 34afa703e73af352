#!/usr/bin/env python3
"""Generate the wavelet filter-bank registry asset.

Offline development tool: computes canonical filter coefficients for the
default 92-wavelet registry and writes them to
``src/aural/wavelets/data/registry.json`` after validating, for every
bank, perfect reconstruction under the package's own transform and (for
orthogonal banks) the filter identities.

Construction methods:
  * Daubechies db1-db38: spectral factorization of the Daubechies
    half-band polynomial, minimum-phase root selection, in high-precision
    arithmetic (mpmath) so the long banks stay exact to double precision.
  * Symlets sym2-sym20: same polynomial, root selection chosen per
    conjugate-reciprocal group to minimize phase nonlinearity
    (near-linear-phase / "least asymmetric" selection).
  * Coiflets coif1-coif5: Gauss-Newton solve of the orthogonality system
    for the filter family with equal vanishing moments on the wavelet and
    scaling sides, polished in high precision.
  * Biorthogonal bior/rbio (15 standard orders each): exact rational
    spline construction (binomial primal filter, complementary dual from
    the half-band Bezout polynomial); rbio swaps the two sides.

Requires mpmath (development-time only; the shipped package does not).

Usage:  python tools/make_wavelet_registry.py [--out PATH]
"""

from __future__ import annotations

import argparse
import json
import math
import sys
from fractions import Fraction
from pathlib import Path

import numpy as np
from mpmath import mp, mpf, mpc

sys.path.insert(0, str(Path(__file__).resolve().parent.parent / "src"))

from aural.wavelets.bank import (  # noqa: E402
    FilterBank, _family_sort_key, filter_identity_errors)
from aural.wavelets.transform import dwt_batch, idwt_batch  # noqa: E402

SQRT2 = math.sqrt(2.0)

BIOR_ORDERS = [(1, 1), (1, 3), (1, 5), (2, 2), (2, 4), (2, 6), (2, 8),
               (3, 1), (3, 3), (3, 5), (3, 7), (3, 9), (4, 4), (5, 5), (6, 8)]


# ---------------------------------------------------------------------------
# polynomial helpers (mpmath, coefficient lists lowest power first)
# ---------------------------------------------------------------------------

def poly_mul(a: list, b: list) -> list:
    out = [mpc(0)] * (len(a) + len(b) - 1)
    for i, ai in enumerate(a):
        for j, bj in enumerate(b):
            out[i + j] += ai * bj
    return out


def daubechies_y_roots(n_zeros: int) -> list:
    """Roots of P(y) = sum_{k<N} C(N-1+k, k) y^k for N vanishing moments."""
    if n_zeros == 1:
        return []
    coeffs = [mpf(math.comb(n_zeros - 1 + k, k)) for k in range(n_zeros)]
    # polyroots wants highest power first
    return mp.polyroots(coeffs[::-1], maxsteps=200, extraprec=300)


def y_root_to_inner_z(y) -> mpc:
    """Map a half-band root y to the z-plane root inside the unit circle.

    y = (2 - z - 1/z)/4  <=>  z^2 + (4y - 2) z + 1 = 0; the two solutions
    are reciprocal, pick |z| < 1.
    """
    b = 4 * y - 2
    disc = mp.sqrt(b * b - 4)
    z1 = (-b + disc) / 2
    z2 = (-b - disc) / 2
    return z1 if abs(z1) < 1 else z2


def scaling_filter_from_selection(n_zeros: int, z_roots: list) -> np.ndarray:
    """Expand sqrt(2) * ((1+z)/2)^N * prod (z - r)/(1 - r) into float64."""
    poly = [mpf(1)]
    for _ in range(n_zeros):
        poly = poly_mul(poly, [mpf("0.5"), mpf("0.5")])
    # multiply conjugate pairs as real quadratics, real roots as linear
    used = [False] * len(z_roots)
    for i, r in enumerate(z_roots):
        if used[i]:
            continue
        if abs(mp.im(r)) < mpf(10) ** (-mp.dps + 10):
            rr = mp.re(r)
            poly = poly_mul(poly, [-rr / (1 - rr), mpf(1) / (1 - rr)])
            used[i] = True
        else:
            # find the conjugate partner
            j = min((k for k in range(len(z_roots))
                     if not used[k] and k != i),
                    key=lambda k: abs(z_roots[k] - mp.conj(r)))
            s = z_roots[j]
            denom = (1 - r) * (1 - s)
            poly = poly_mul(poly, [r * s / denom, -(r + s) / denom,
                                   mpf(1) / denom])
            used[i] = used[j] = True
    h = np.array([float(mp.re(c)) for c in poly]) * SQRT2
    assert max(abs(float(mp.im(c))) for c in poly) < 1e-20
    return h


def min_phase_selection(n_zeros: int) -> list:
    return [y_root_to_inner_z(y) for y in daubechies_y_roots(n_zeros)]


# ---------------------------------------------------------------------------
# symlets: near-linear-phase root selection
# ---------------------------------------------------------------------------

def _root_groups(y_roots: list) -> list[list]:
    """Group inner z-roots into real singletons / conjugate pairs."""
    inner = [y_root_to_inner_z(y) for y in y_roots]
    groups, used = [], [False] * len(inner)
    for i, r in enumerate(inner):
        if used[i]:
            continue
        if abs(mp.im(r)) < mpf(10) ** (-mp.dps + 10):
            groups.append([r])
            used[i] = True
        else:
            j = min((k for k in range(len(inner)) if not used[k] and k != i),
                    key=lambda k: abs(inner[k] - mp.conj(r)))
            groups.append([r, inner[j]])
            used[i] = used[j] = True
    return groups


def _phase_metric(n_zeros: int, roots: list[complex]) -> float:
    """Weighted deviation of the filter phase from linear phase."""
    omega = np.linspace(1e-3, np.pi - 0.15, 256)
    z = np.exp(-1j * omega)
    resp = np.full_like(z, SQRT2, dtype=complex) * ((1 + z) / 2) ** n_zeros
    for r in roots:
        resp *= (z - r) / (1 - r)
    phase = np.unwrap(np.angle(resp))
    w = np.abs(resp) ** 2
    slope = np.sum(w * omega * phase) / np.sum(w * omega**2)
    return float(np.sum(w * (phase - slope * omega) ** 2))


def symlet_selection(n_zeros: int) -> list:
    """Choose inside/outside per root group to minimize phase nonlinearity."""
    groups = _root_groups(daubechies_y_roots(n_zeros))
    best_sel, best_metric = 0, np.inf
    for sel in range(1 << len(groups)):
        roots = []
        for g, group in enumerate(groups):
            flip = (sel >> g) & 1
            roots.extend((1 / r if flip else r) for r in group)
        metric = _phase_metric(n_zeros, [complex(r) for r in roots])
        if metric < best_metric - 1e-12:
            best_metric, best_sel = metric, sel
    roots = []
    for g, group in enumerate(groups):
        flip = (best_sel >> g) & 1
        roots.extend((1 / r if flip else r) for r in group)
    return roots


# ---------------------------------------------------------------------------
# coiflets: Gauss-Newton on the orthogonality system
# ---------------------------------------------------------------------------

def _laurent(coeffs: list, min_exp: int) -> tuple[list, int]:
    return coeffs, min_exp


def _lmul(a: tuple[list, int], b: tuple[list, int]) -> tuple[list, int]:
    ca, ma = a
    cb, mb = b
    out = [mpf(0)] * (len(ca) + len(cb) - 1)
    for i, x in enumerate(ca):
        for j, y in enumerate(cb):
            out[i + j] += x * y
    return out, ma + mb


def _lpow(a: tuple[list, int], k: int) -> tuple[list, int]:
    out = _laurent([mpf(1)], 0)
    for _ in range(k):
        out = _lmul(out, a)
    return out


def _laurent_to_array(l: tuple[list, int], lo: int, hi: int) -> np.ndarray:
    coeffs, mn = l
    out = np.zeros(hi - lo + 1)
    for i, c in enumerate(coeffs):
        e = mn + i
        if lo <= e <= hi:
            out[e - lo] += float(c)
    return out


def coiflet_filter(order: int) -> np.ndarray:
    """Coiflet scaling filter of length 6*order.

    The transfer function is cos^{2K}(w/2) * [interpolating part +
    sin^{2K}(w/2) * f(w)] with f a one-sided degree 2K-1 polynomial in
    e^{-iw}; f is the unique small solution of the quadratic
    orthonormality system, found by Gauss-Newton from f = 0 and polished
    at high precision.
    """
    k = order
    c = _laurent([mpf(1) / 4, mpf(1) / 2, mpf(1) / 4], -1)     # cos^2(w/2)
    s = _laurent([mpf(-1) / 4, mpf(1) / 2, mpf(-1) / 4], -1)   # sin^2(w/2)
    ck = _lpow(c, k)
    interp = _laurent([mpf(0)], 0)
    for j in range(k):
        term = _lpow(s, j)
        term = (
            [x * math.comb(k - 1 + j, j) for x in term[0]], term[1])
        interp = _ladd(interp, term)
    lo, hi = -2 * k, 4 * k - 1
    base = _laurent_to_array(_lmul(ck, interp), lo, hi)
    cksk = _lmul(ck, _lpow(s, k))
    n_unknown = 2 * k
    basis = np.stack([
        _laurent_to_array((cksk[0], cksk[1] + m), lo, hi)
        for m in range(n_unknown)])

    length = 6 * k
    n_res = length // 2

    def residual(g: np.ndarray) -> np.ndarray:
        r = np.empty(n_res)
        for m in range(n_res):
            r[m] = g[: length - 2 * m] @ g[2 * m :] - (0.5 if m == 0 else 0.0)
        return r

    def jacobian(g: np.ndarray) -> np.ndarray:
        jac = np.empty((n_res, n_unknown))
        for m in range(n_res):
            for j in range(n_unknown):
                a = basis[j]
                jac[m, j] = a[: length - 2 * m] @ g[2 * m :] + \
                    g[: length - 2 * m] @ a[2 * m :]
        return jac

    rng = np.random.default_rng(12345)
    f = np.zeros(n_unknown)
    for attempt in range(40):
        g = base + basis.T @ f
        converged = False
        for _ in range(200):
            r = residual(g)
            if np.max(np.abs(r)) < 1e-13:
                converged = True
                break
            step, *_ = np.linalg.lstsq(jacobian(g), -r, rcond=None)
            f = f + step
            g = base + basis.T @ f
        if converged:
            break
        f = rng.normal(scale=0.1 * (attempt + 1) / 10, size=n_unknown)
    else:
        raise RuntimeError(f"coif{order}: Gauss-Newton did not converge")

    # high-precision polish via normal equations
    mp_base = mp.matrix([mp.mpf(x) for x in base])
    mp_basis = mp.matrix(n_unknown, length)
    for j in range(n_unknown):
        for t in range(length):
            mp_basis[j, t] = mp.mpf(basis[j, t])
    mf = mp.matrix([mp.mpf(x) for x in f])
    for _ in range(60):
        g = mp.matrix([mp_base[t] + sum(mp_basis[j, t] * mf[j]
                                        for j in range(n_unknown))
                       for t in range(length)])
        r = mp.matrix([sum(g[t] * g[t + 2 * m] for t in range(length - 2 * m))
                       - (mp.mpf("0.5") if m == 0 else 0) for m in range(n_res)])
        if max(abs(x) for x in r) < mp.mpf(10) ** (-mp.dps + 8):
            break
        jac = mp.matrix(n_res, n_unknown)
        for m in range(n_res):
            for j in range(n_unknown):
                jac[m, j] = sum(mp_basis[j, t] * g[t + 2 * m] +
                                g[t] * mp_basis[j, t + 2 * m]
                                for t in range(length - 2 * m))
        jt = jac.T
        step = mp.lu_solve(jt * jac, jt * (-1 * r))
        mf = mf + step
    g = [mp_base[t] + sum(mp_basis[j, t] * mf[j] for j in range(n_unknown))
         for t in range(length)]
    return np.array([float(x) for x in g]) * SQRT2


def _ladd(a: tuple[list, int], b: tuple[list, int]) -> tuple[list, int]:
    ca, ma = a
    cb, mb = b
    mn = min(ma, mb)
    mx = max(ma + len(ca), mb + len(cb))
    out = [mpf(0)] * (mx - mn)
    for i, x in enumerate(ca):
        out[ma + i - mn] += x
    for i, x in enumerate(cb):
        out[mb + i - mn] += x
    return out, mn


# ---------------------------------------------------------------------------
# biorthogonal spline (CDF) families, exact rational construction
# ---------------------------------------------------------------------------

def _frac_conv(a: list[Fraction], b: list[Fraction]) -> list[Fraction]:
    out = [Fraction(0)] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        for j, y in enumerate(b):
            out[i + j] += x * y
    return out


def bior_lowpass_pair(nr: int, nd: int) -> tuple[np.ndarray, np.ndarray]:
    """(primal, dual) lowpass filters, m0(0)-normalized, exact rationals.

    Primal = binomial B-spline filter of order nr (synthesis side);
    dual carries nd further vanishing moments through the Bezout
    half-band complement P_N, N = (nr + nd) / 2.
    """
    if (nr + nd) % 2:
        raise ValueError("nr and nd must have equal parity")
    n_total = (nr + nd) // 2
    primal = [Fraction(math.comb(nr, i), 2**nr) for i in range(nr + 1)]
    dual = [Fraction(math.comb(nd, i), 2**nd) for i in range(nd + 1)]
    # multiply dual by P_N evaluated at y = (2 - z - 1/z)/4
    sin2 = [Fraction(-1, 4), Fraction(1, 2), Fraction(-1, 4)]
    acc = [Fraction(0)] * (2 * (n_total - 1) + 1)
    power = [Fraction(1)]
    center = n_total - 1
    for kk in range(n_total):
        coef = Fraction(math.comb(n_total - 1 + kk, kk))
        off = center - kk
        for i, x in enumerate(power):
            acc[off + i] += coef * x
        power = _frac_conv(power, sin2)
    dual = _frac_conv(dual, acc)
    return (np.array([float(x) for x in primal]),
            np.array([float(x) for x in dual]))


# ---------------------------------------------------------------------------
# bank assembly and validation
# ---------------------------------------------------------------------------

def orthogonal_bank(name: str, h: np.ndarray) -> FilterBank:
    """Standard conjugate-quadrature assembly from a scaling filter."""
    flen = h.size
    rec_lo = h
    rec_hi = np.array([(-1) ** k * h[flen - 1 - k] for k in range(flen)])
    return FilterBank(name=name, dec_lo=rec_lo[::-1], dec_hi=rec_hi[::-1],
                      rec_lo=rec_lo, rec_hi=rec_hi, orthogonal=True)


def reconstruction_error(fb: FilterBank, lengths=(16, 33, 64, 101),
                         levels=(1, 2, 5)) -> float:
    rng = np.random.default_rng(7)
    worst = 0.0
    for n in lengths:
        x = rng.standard_normal((2, n))
        for lev in levels:
            if n < 2 ** lev:
                continue
            approx, details = dwt_batch(x, fb, lev)
            y = idwt_batch(approx, details, fb, n)
            worst = max(worst, float(np.max(np.abs(y - x)) /
                                     np.max(np.abs(x))))
    return worst


def _pad_to(arr: np.ndarray, length: int, left: int) -> np.ndarray:
    out = np.zeros(length)
    out[left : left + arr.size] = arr
    return out


def biorthogonal_bank(name: str, primal: np.ndarray,
                      dual: np.ndarray) -> FilterBank:
    """Assemble and validate a biorthogonal bank from its lowpass pair.

    The alias-cancelling highpass filters are modulated copies of the
    opposite side's lowpass; the exact shift and padding that realize
    perfect reconstruction under the engine's conventions are found by a
    small deterministic search and then verified.
    """
    base = max(primal.size, dual.size)
    length = base + (base % 2)

    candidates = []
    for pad_shift in (0, 1):
        lp = (length - primal.size) // 2
        ld = (length - dual.size) // 2
        for extra_p in range(-1, 2):
            for extra_d in range(-1, 2):
                a, b = lp + extra_p + pad_shift, ld + extra_d + pad_shift
                if a < 0 or b < 0:
                    continue
                if a + primal.size > length or b + dual.size > length:
                    continue
                candidates.append((_pad_to(primal * SQRT2, length, a),
                                   _pad_to(dual * SQRT2, length, b)))

    alt = np.array([(-1) ** k for k in range(length)], dtype=float)
    for rec_lo, dual_lo in candidates:
        for sign_hi in (1.0, -1.0):
            for roll_hi in (0, 1):
                rec_hi = sign_hi * alt * np.roll(dual_lo, roll_hi)
                for sign_dh in (1.0, -1.0):
                    for roll_dh in (0, 1):
                        dec_hi_corr = sign_dh * alt * np.roll(rec_lo, roll_dh)
                        fb = FilterBank(
                            name=name,
                            dec_lo=dual_lo[::-1].copy(),
                            dec_hi=dec_hi_corr[::-1].copy(),
                            rec_lo=rec_lo, rec_hi=rec_hi,
                            orthogonal=False)
                        if reconstruction_error(fb, lengths=(16, 33),
                                                levels=(1, 2)) < 1e-9:
                            if reconstruction_error(fb) < 1e-9:
                                return fb
    raise RuntimeError(f"{name}: no perfect-reconstruction assembly found")


def build_registry() -> dict[str, FilterBank]:
    banks: dict[str, FilterBank] = {}

    for n in range(1, 39):
        mp.dps = 50 + 5 * n
        # reverse puts the minimum-phase energy at the filter front
        banks[f"db{n}"] = orthogonal_bank(
            f"db{n}",
            scaling_filter_from_selection(n, min_phase_selection(n))[::-1])
        print(f"db{n}: ok")

    for n in range(2, 21):
        mp.dps = 50 + 5 * n
        banks[f"sym{n}"] = orthogonal_bank(
            f"sym{n}", scaling_filter_from_selection(n, symlet_selection(n)))
        print(f"sym{n}: ok")

    for k in range(1, 6):
        mp.dps = 60
        banks[f"coif{k}"] = orthogonal_bank(f"coif{k}", coiflet_filter(k))
        print(f"coif{k}: ok")

    for nr, nd in BIOR_ORDERS:
        primal, dual = bior_lowpass_pair(nr, nd)
        banks[f"bior{nr}.{nd}"] = biorthogonal_bank(
            f"bior{nr}.{nd}", primal, dual)
        banks[f"rbio{nr}.{nd}"] = biorthogonal_bank(
            f"rbio{nr}.{nd}", dual, primal)
        print(f"bior{nr}.{nd} / rbio{nr}.{nd}: ok")
    return banks


def validate(banks: dict[str, FilterBank]) -> None:
    worst_pr, worst_id = 0.0, 0.0
    for name, fb in banks.items():
        err = reconstruction_error(fb)
        worst_pr = max(worst_pr, err)
        if err > 1e-9:
            raise RuntimeError(f"{name}: reconstruction error {err:.2e}")
        if fb.orthogonal:
            ids = filter_identity_errors(fb)
            worst = max(ids.values())
            worst_id = max(worst_id, worst)
            if worst > 1e-11:
                raise RuntimeError(f"{name}: identity error {ids}")
    print(f"validation: worst reconstruction {worst_pr:.2e}, "
          f"worst orthogonal identity {worst_id:.2e}")


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument(
        "--out", type=Path,
        default=Path(__file__).resolve().parent.parent /
        "src/aural/wavelets/data/registry.json")
    args = parser.parse_args()

    banks = build_registry()
    validate(banks)

    doc = {"version": 1, "wavelets": {}}
    for name in sorted(banks, key=_family_sort_key):
        fb = banks[name]
        doc["wavelets"][name] = {
            "dec_lo": fb.dec_lo.tolist(), "dec_hi": fb.dec_hi.tolist(),
            "rec_lo": fb.rec_lo.tolist(), "rec_hi": fb.rec_hi.tolist(),
            "orthogonal": fb.orthogonal,
        }
    args.out.parent.mkdir(parents=True, exist_ok=True)
    args.out.write_text(json.dumps(doc, indent=1), encoding="utf-8")
    print(f"wrote {args.out} ({len(banks)} wavelets)")


if __name__ == "__main__":
    main()
