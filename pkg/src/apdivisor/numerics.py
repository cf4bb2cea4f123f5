"""Quadrature for the current of integration of a model divisor d[lam, mu].

Points of C^m are stored as real vectors ``(x_1..x_m, y_1..y_m)``. The linear
map ``w(z) = <z, lam> + i<z, mu>`` has real Jacobian

    G = [[lam, -mu],
         [mu,   lam]]

whose rows are orthogonal with equal squared norm s = |lam|^2 + |mu|^2, so
the normal Jacobian of w is s. The support of d[lam, mu] is the union of the
affine sheets {w = rho}, rho in Z + iZ, and by the co-area formula

    <(2/pi) d^2 log|g(w)| / dz_j dzbar_k, phi>
        = c_j conj(c_k) / s * sum_rho int_{w = rho} phi dS,    c = lam + i mu.

No derivatives of log|g| are ever taken numerically.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field as dc_field, replace
from itertools import product

import numpy as np
from scipy import integrate, linalg

from .errors import QuadratureError, SupportExceedsBoxError, ZeroPairError


def _vec(v) -> np.ndarray:
    return np.array([float(x) for x in v], dtype=float)


@dataclass(frozen=True)
class QuadratureParams:
    """Knobs for the sheet and mean-value quadratures.

    ``half_width`` is the half-width N of the cube [-N, N]^(2m) in which zero
    sheets are enumerated; every translate of the test function must stay
    inside it. ``nodes`` is the midpoint-rule node count per axis, used both
    on sheets and over the period cell. ``cube_half_width`` and ``cube_nodes``
    drive the expanding-cube mean estimator. ``lattice_radius`` of None means
    the smallest radius covering the cube.
    """

    half_width: float = 4.0
    nodes: int = 24
    lattice_radius: float | None = None
    tolerance: float = 1e-2
    cube_half_width: float = 1.0
    cube_nodes: int = 8

    def __post_init__(self):
        if self.half_width <= 0:
            raise ValueError("half_width must be positive")
        if self.nodes < 2 or self.cube_nodes < 2:
            raise ValueError("node counts must be >= 2")
        if self.cube_half_width <= 0:
            raise ValueError("cube_half_width must be positive")

    def as_dict(self) -> dict:
        return {
            "half_width": self.half_width,
            "nodes": self.nodes,
            "lattice_radius": self.lattice_radius,
            "tolerance": self.tolerance,
            "cube_half_width": self.cube_half_width,
            "cube_nodes": self.cube_nodes,
        }


def _radial_profile(r2: np.ndarray, eps: float) -> np.ndarray:
    t = r2 / (eps * eps)
    out = np.zeros_like(t)
    inside = t < 1.0
    out[inside] = np.exp(-1.0 / (1.0 - t[inside]))
    return out


@dataclass(frozen=True)
class BumpFunction:
    """phi(z) = C exp(-1 / (1 - |z - center|^2 / eps^2)) on the eps-ball, total mass ``mass``."""

    center: tuple
    radius: float
    mass: float = 1.0
    norm: float = dc_field(init=False)

    def __post_init__(self):
        object.__setattr__(self, "center", tuple(float(c) for c in self.center))
        if self.radius <= 0:
            raise ValueError("bump radius must be positive")
        if len(self.center) % 2:
            raise ValueError("center must live in R^(2m)")
        n = len(self.center)
        eps = self.radius
        radial, _ = integrate.quad(
            lambda r: math.exp(-1.0 / (1.0 - (r / eps) ** 2)) * r ** (n - 1) if r < eps else 0.0,
            0.0,
            eps,
            epsabs=0.0,
            epsrel=1e-13,
            limit=200,
        )
        sphere = 2.0 * math.pi ** (n / 2) / math.gamma(n / 2)
        object.__setattr__(self, "norm", self.mass / (sphere * radial))

    @property
    def m(self) -> int:
        return len(self.center) // 2

    def __call__(self, points) -> np.ndarray:
        pts = np.asarray(points, dtype=float)
        d = pts - np.asarray(self.center)
        return self.norm * _radial_profile(np.sum(d * d, axis=-1), self.radius)

    def translated(self, t) -> "BumpFunction":
        """phi(z - t) for a real shift t in R^m (x-directions only)."""
        t = np.asarray(t, dtype=float)
        c = np.asarray(self.center).copy()
        c[: self.m] += t
        return BumpFunction(tuple(c), self.radius, self.mass)

    def scaled(self, factor: float) -> "BumpFunction":
        return BumpFunction(self.center, self.radius, self.mass * factor)

    def tensor_integral(self, nodes: int) -> float:
        """Midpoint-rule integral over the bounding cube; independent of ``norm``'s quadrature."""
        eps, n = self.radius, len(self.center)
        h = 2.0 * eps / nodes
        axis = -eps + h * (np.arange(nodes) + 0.5)
        total = 0.0
        # slab over the first axis keeps memory bounded for 2m = 6
        rest = np.stack(np.meshgrid(*([axis] * (n - 1)), indexing="ij"), axis=-1).reshape(-1, n - 1)
        rest2 = np.sum(rest * rest, axis=1)
        for a in axis:
            total += _radial_profile(rest2 + a * a, eps).sum()
        return float(self.norm * total * h**n)


@dataclass(frozen=True)
class ZeroSheet:
    lattice: tuple
    base: np.ndarray = dc_field(compare=False)
    tangent: np.ndarray = dc_field(compare=False)


def gradient_rows(lam, mu) -> np.ndarray:
    lam, mu = _vec(lam), _vec(mu)
    return np.array([np.concatenate([lam, -mu]), np.concatenate([mu, lam])])


def eval_g(w: complex, R: float = 10.0) -> complex:
    """Truncated Weierstrass product w * prod_{0<|rho|<=R} E2(w/rho) over Z + iZ."""
    if R < 5:
        raise ValueError("truncation radius must be >= 5")
    w = complex(w)
    if w == 0:
        return 0j
    if w.real == round(w.real) and w.imag == round(w.imag) and abs(w) <= R:
        return 0j
    rho = _gaussian_integers(0j, R)
    rho = rho[rho != 0]
    u = w / rho
    factors = (1.0 - u) * np.exp(u + 0.5 * u * u)
    return complex(w * np.prod(factors))


def _gaussian_integers(center: complex, radius: float) -> np.ndarray:
    lo_re, hi_re = math.floor(center.real - radius), math.ceil(center.real + radius)
    lo_im, hi_im = math.floor(center.imag - radius), math.ceil(center.imag + radius)
    re, im = np.meshgrid(np.arange(lo_re, hi_re + 1), np.arange(lo_im, hi_im + 1), indexing="ij")
    pts = (re + 1j * im).ravel()
    return pts[np.abs(pts - center) <= radius]


def _zonotope_contains(points: np.ndarray, w0: complex, gens: np.ndarray, tol=1e-12) -> np.ndarray:
    """Membership in w0 + sum_k [-1, 1] gens[k] (exact for planar zonotopes)."""
    gens = gens[np.hypot(gens[:, 0], gens[:, 1]) > 0]
    rel = np.stack([points.real - w0.real, points.imag - w0.imag], axis=1)
    inside = np.ones(len(points), dtype=bool)
    for g in gens:
        n = np.array([-g[1], g[0]])
        h = np.abs(gens @ n).sum()
        inside &= np.abs(rel @ n) <= h * (1 + tol) + tol
    return inside


def zero_sheets(
    lam, mu, half_width: float, lattice_radius: float | None = None, center=None, strict: bool = False
) -> list[ZeroSheet]:
    """Sheets {w = p + iq} with |p + iq| <= R meeting the cube center + [-N, N]^(2m).

    With ``strict``, raise QuadratureError when some sheet beyond R still
    meets the cube, i.e. when R is too small for the box.
    """
    lam, mu = _vec(lam), _vec(mu)
    m = len(lam)
    if not (lam.any() or mu.any()):
        raise ZeroPairError("lambda = mu = 0")
    G = gradient_rows(lam, mu)
    s = float(lam @ lam + mu @ mu)
    c = np.zeros(2 * m) if center is None else np.asarray(center, dtype=float)
    wc = G @ c
    w0 = complex(wc[0], wc[1])
    gens = (G * half_width).T  # 2m generators in the w-plane
    reach = abs(w0) + float(np.hypot(gens[:, 0], gens[:, 1]).sum())
    cand = _gaussian_integers(0j, reach)
    cand = cand[_zonotope_contains(cand, w0, gens)]
    R = reach if lattice_radius is None else float(lattice_radius)
    beyond = np.abs(cand) > R
    if strict and beyond.any():
        raise QuadratureError(
            f"lattice radius {R} too small: sheets up to |rho| = {np.abs(cand).max():.3f} meet the box"
        )
    cand = cand[~beyond]
    T = linalg.null_space(G)
    order = np.lexsort((cand.imag, cand.real))
    sheets = []
    for rho in cand[order]:
        base = G.T @ np.array([rho.real, rho.imag]) / s
        sheets.append(ZeroSheet((int(rho.real), int(rho.imag)), base, T))
    return sheets


class _SheetGeometry:
    """Shared data for integrating a bump over the parallel sheets of one pair."""

    def __init__(self, lam, mu, params: QuadratureParams):
        self.lam, self.mu = _vec(lam), _vec(mu)
        if not (self.lam.any() or self.mu.any()):
            raise ZeroPairError("lambda = mu = 0")
        self.m = len(self.lam)
        self.params = params
        self.G = gradient_rows(self.lam, self.mu)
        self.s = float(self.lam @ self.lam + self.mu @ self.mu)
        self.sheets = zero_sheets(self.lam, self.mu, params.half_width, params.lattice_radius, strict=True)
        self.rho = np.array([complex(*sh.lattice) for sh in self.sheets])
        self.T = linalg.null_space(self.G)
        n = params.nodes
        unit = -1.0 + (2.0 * np.arange(n) + 1.0) / n  # midpoints of [-1, 1]
        d = 2 * self.m - 2
        self.unit_grid = np.stack(np.meshgrid(*([unit] * d), indexing="ij"), axis=-1).reshape(-1, d)
        self.unit_weight = (2.0 / n) ** d

    def check_support(self, phi: BumpFunction):
        N = self.params.half_width
        c = np.asarray(phi.center)
        if len(c) != 2 * self.m:
            raise ValueError(f"bump lives in R^{len(c)}, pair needs R^{2 * self.m}")
        if np.any(np.abs(c) + phi.radius > N):
            raise SupportExceedsBoxError(
                f"bump support (center {tuple(c)}, radius {phi.radius}) leaves the box of half-width {N}"
            )

    def sheet_mass(self, phi: BumpFunction) -> float:
        """sum_rho int_{w = rho} phi dS."""
        c = np.asarray(phi.center)
        eps = phi.radius
        wc = self.G @ c
        off = np.stack([self.rho.real - wc[0], self.rho.imag - wc[1]], axis=1)
        dist2 = np.sum(off * off, axis=1) / self.s
        near = np.nonzero(dist2 < eps * eps)[0]
        total = 0.0
        for i in near:
            foot = c + self.G.T @ off[i] / self.s
            r = math.sqrt(eps * eps - dist2[i])
            pts = foot + (r * self.unit_grid) @ self.T.T
            total += float(phi(pts).sum()) * self.unit_weight * r ** self.unit_grid.shape[1]
        return total

    def prefactors(self) -> np.ndarray:
        cvec = self.lam + 1j * self.mu
        return np.outer(cvec, np.conj(cvec)) / self.s

    def r_independent(self) -> bool:
        ll, mm, lm = self.lam @ self.lam, self.mu @ self.mu, self.lam @ self.mu
        return ll * mm - lm * lm > 1e-12 * max(ll * mm, 1e-300)

    def cell_translates(self) -> np.ndarray:
        ll, mm, lm = self.lam @ self.lam, self.mu @ self.mu, self.lam @ self.mu
        den = ll * mm - lm * lm
        p1 = (mm * self.lam - lm * self.mu) / den
        p2 = (ll * self.mu - lm * self.lam) / den
        n = self.params.nodes
        # cell centred at 0 keeps the translates short
        s_axis = -0.5 + (np.arange(n) + 0.5) / n
        s1, s2 = np.meshgrid(s_axis, s_axis, indexing="ij")
        return s1.reshape(-1, 1) * p1 + s2.reshape(-1, 1) * p2

    def cube_translates(self) -> np.ndarray:
        N, n = self.params.cube_half_width, self.params.cube_nodes
        axis = -N + (2.0 * N / n) * (np.arange(n) + 0.5)
        return np.array(list(product(axis, repeat=self.m)))

    def mean_sheet_mass(self, phi: BumpFunction, method: str = "auto") -> float:
        if method == "auto":
            method = "cell" if self.r_independent() else "cube"
        if method == "cell":
            if not self.r_independent():
                raise QuadratureError("period-cell average needs lambda, mu independent over R")
            shifts = self.cell_translates()
        elif method == "cube":
            shifts = self.cube_translates()
        else:
            raise ValueError(f"unknown mean-value method {method!r}")
        reach = np.abs(shifts).max(axis=0) if len(shifts) else 0.0
        c = np.asarray(phi.center)
        N = self.params.half_width
        if np.any(np.abs(c[: self.m]) + reach + phi.radius > N) or np.any(np.abs(c[self.m :]) + phi.radius > N):
            raise SupportExceedsBoxError(
                f"translated bump leaves the box of half-width {N}; increase half_width"
            )
        return float(np.mean([self.sheet_mass(phi.translated(t)) for t in shifts]))


def pair_current(j: int, k: int, lam, mu, phi: BumpFunction, params: QuadratureParams | None = None) -> complex:
    """<(2/pi) d^2 log|g(w)| / dz_j dzbar_k, phi>; j, k are 0-based."""
    geo = _SheetGeometry(lam, mu, params or QuadratureParams())
    geo.check_support(phi)
    return complex(geo.prefactors()[j, k] * geo.sheet_mass(phi))


def mean_value_pairing(
    j: int, k: int, lam, mu, phi: BumpFunction, params: QuadratureParams | None = None, method: str = "auto"
) -> complex:
    """Mean over real translates t of the pairing with phi(z - t).

    ``method="cell"`` averages over one period cell (lam, mu independent over R);
    ``"cube"`` uses (2N)^-m times the integral over the cube |t_i| < N;
    ``"auto"`` picks the cell whenever it exists.
    """
    geo = _SheetGeometry(lam, mu, params or QuadratureParams())
    geo.check_support(phi)
    return complex(geo.prefactors()[j, k] * geo.mean_sheet_mass(phi, method))


def mean_value_matrix(lam, mu, phi: BumpFunction, params: QuadratureParams | None = None, method: str = "auto") -> np.ndarray:
    """All mean pairings at once; they share one sheet-mass average."""
    geo = _SheetGeometry(lam, mu, params or QuadratureParams())
    geo.check_support(phi)
    return geo.prefactors() * geo.mean_sheet_mass(phi, method)


def a_matrix_numeric(lam, mu, phi: BumpFunction | None = None, params: QuadratureParams | None = None, method: str = "auto") -> np.ndarray:
    """Im of the mean current coefficients divided by the mass of phi."""
    lam = _vec(lam)
    if len(lam) < 2:
        raise ValueError("A-matrix needs m >= 2")
    if phi is None:
        phi = default_bump(len(lam))
    return mean_value_matrix(lam, mu, phi, params, method).imag / phi.mass


def default_bump(m: int, radius: float = 0.4) -> BumpFunction:
    """A unit-mass bump at a fixed off-lattice point."""
    base = [0.13, -0.21, 0.37, 0.05, -0.11, 0.17, 0.07, -0.29]
    return BumpFunction(tuple(base[i % len(base)] for i in range(2 * m)), radius)


@dataclass(frozen=True)
class NumericReport:
    value: float
    reference: float
    abs_error: float
    rel_error: float
    error_estimate: float
    params: dict

    def passed(self, tolerance: float) -> bool:
        return bool(self.rel_error <= tolerance)

    def as_dict(self) -> dict:
        return {
            "value": self.value,
            "reference": self.reference,
            "abs_error": self.abs_error,
            "rel_error": self.rel_error,
            "error_estimate": self.error_estimate,
            "params": self.params,
        }


def _lemma_dis_value(phi: BumpFunction, params: QuadratureParams) -> float:
    # L_z = (2/pi) Im d^2 / dzbar_1 dz_2 is the (j, k) = (2, 1) coefficient
    return mean_value_pairing(1, 0, (1.0, 0.0), (0.0, 1.0), phi, params, method="cell").imag


def lemma_dis_check(phi: BumpFunction | None = None, params: QuadratureParams | None = None) -> NumericReport:
    """Period-cell mean of L_z log|g(z_1 + i z_2)| against phi versus int phi over R^4."""
    params = params or QuadratureParams()
    phi = phi or default_bump(2)
    if phi.m != 2:
        raise ValueError("the base-case check lives in C^2")
    value = _lemma_dis_value(phi, params)
    if params.nodes >= 4:
        coarse = _lemma_dis_value(phi, replace(params, nodes=params.nodes // 2))
        estimate = abs(value - coarse) + 1e-12 * abs(value)
    else:
        estimate = math.inf  # no coarser rule to compare against
    reference = phi.tensor_integral(max(params.nodes, 16))
    abs_err = abs(value - reference)
    return NumericReport(
        value=value,
        reference=reference,
        abs_error=abs_err,
        rel_error=abs_err / abs(reference),
        error_estimate=estimate,
        params={**params.as_dict(), "epsilon": phi.radius, "center": list(phi.center)},
    )
