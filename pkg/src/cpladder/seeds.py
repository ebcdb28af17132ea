"""Holomorphic polynomial seed vectors: construction, regularization and JSON I/O."""

from __future__ import annotations

import json
from dataclasses import dataclass
from decimal import Decimal, InvalidOperation
from math import comb, sqrt
from pathlib import Path

import numpy as np
from numpy.polynomial import polynomial as npoly

from .errors import InvalidDimension, ParseError
from .jets import Jet, n_coeffs, _tables

ROOT_MATCH_TOL = 1e-9


def _trim(coeffs):
    c = [complex(x) for x in coeffs]
    while len(c) > 1 and c[-1] == 0:
        c.pop()
    return tuple(c) if c else (0j,)


@dataclass(frozen=True)
class SeedVector:
    """N polynomials in xi, coefficients in ascending powers."""

    components: tuple
    label: str = ""

    def __post_init__(self):
        comps = tuple(_trim(c) for c in self.components)
        object.__setattr__(self, "components", comps)
        if len(comps) < 2:
            raise InvalidDimension(f"seed needs N >= 2 components, got {len(comps)}")
        if all(all(x == 0 for x in c) for c in comps):
            raise ValueError("seed has no nonzero component")

    @property
    def dim(self):
        return len(self.components)

    @property
    def degree(self):
        return max(len(c) - 1 for c in self.components if any(x != 0 for x in c))

    def coefficient_matrix(self):
        """(N, degree + 1) complex array, zero padded."""
        out = np.zeros((self.dim, self.degree + 1), dtype=complex)
        for j, c in enumerate(self.components):
            out[j, : len(c)] = c[: self.degree + 1]
        return out

    def __call__(self, xi):
        """Plain evaluation, returns shape ``(*xi.shape, N)``."""
        xi = np.asarray(xi, dtype=complex)
        return np.stack([npoly.polyval(xi, c) for c in self.components], axis=-1)

    def inverted(self):
        """Seed in the chart eta = 1/xi, i.e. eta^d f(1/eta); same projectors."""
        c = self.coefficient_matrix()[:, ::-1]
        return SeedVector(tuple(map(tuple, c)), label=self.label + "@inf")


def veronese_seed(n):
    if n < 2:
        raise InvalidDimension(f"Veronese seed needs N >= 2, got {n}")
    comps = []
    for j in range(n):
        c = [0.0] * (j + 1)
        c[j] = sqrt(comb(n - 1, j))
        comps.append(tuple(c))
    return SeedVector(tuple(comps), label=f"veronese-{n}")


def evaluate_seed(seed, base, order):
    """Jets of every component at ``base``; returns a list of N :class:`Jet`.

    Taylor shift by Horner's rule in the single holomorphic direction, so the
    xibar coefficients are exactly zero.
    """
    if order < 0:
        raise ValueError("order must be >= 0")
    base = np.asarray(base, dtype=complex)
    holo = [_tables(order).index[(a, 0)] for a in range(order + 1)]
    jets = []
    for comp in seed.components:
        # r[a] = coefficient of h^a in comp(base + h)
        r = np.zeros((order + 1,) + base.shape, dtype=complex)
        for c in reversed(comp):
            shifted = r * base
            shifted[1:] += r[:-1]
            shifted[0] += c
            r = shifted
        coeffs = np.zeros((n_coeffs(order),) + base.shape, dtype=complex)
        coeffs[holo] = r
        jets.append(Jet(coeffs, base, order))
    return jets


def seed_vector_jet(seed, base, order):
    """The seed as an N x 1 :class:`~cpladder.jets.MatrixJet`."""
    from .jets import MatrixJet

    jets = evaluate_seed(seed, base, order)
    return MatrixJet(np.stack([j.coeffs for j in jets], axis=-1)[..., None], jets[0].base, order)


def regularize_seed(seed, pole, p):
    """Multiply every component by (xi - pole)^p."""
    if p < 0:
        raise ValueError("p must be >= 0")
    factor = npoly.polypow([-complex(pole), 1.0], p) if p else np.array([1.0])
    comps = tuple(tuple(npoly.polymul(c, factor)) for c in seed.components)
    return SeedVector(comps, label=seed.label)


def scale_seed(seed, phi):
    """Multiply by a scalar polynomial phi (ascending coefficients)."""
    comps = tuple(tuple(npoly.polymul(c, phi)) for c in seed.components)
    return SeedVector(comps, label=seed.label)


def _roots(c):
    c = np.trim_zeros(np.asarray(c, dtype=complex), "b")
    if len(c) <= 1:
        return np.array([], dtype=complex)
    return npoly.polyroots(c)


def common_roots(seed, tol=ROOT_MATCH_TOL):
    """Roots (with multiplicity) shared by every nonzero component."""
    nonzero = [c for c in seed.components if any(x != 0 for x in c)]
    shared = list(_roots(nonzero[0]))
    for c in nonzero[1:]:
        pool = list(_roots(c))
        kept = []
        for r in shared:
            if not pool:
                break
            d = np.abs(np.asarray(pool) - r)
            i = int(np.argmin(d))
            if d[i] <= tol * max(1.0, abs(r)):
                kept.append(r)
                pool.pop(i)
        shared = kept
    return np.array(shared, dtype=complex)


def normalize_common_factor(seed, tol=ROOT_MATCH_TOL):
    """Divide out the polynomial GCD of the components."""
    roots = common_roots(seed, tol)
    if roots.size == 0:
        return seed
    gcd = npoly.polyfromroots(roots)
    comps = []
    for c in seed.components:
        if all(x == 0 for x in c):
            comps.append((0j,))
            continue
        q, r = npoly.polydiv(np.asarray(c, dtype=complex), gcd)
        if r.size and np.max(np.abs(r)) > 1e-6 * max(1.0, np.max(np.abs(c))):
            raise ArithmeticError("common-factor division left a remainder")
        q = np.where(np.abs(q) < 1e-12 * np.max(np.abs(q)), 0, q)
        comps.append(tuple(q))
    return SeedVector(tuple(comps), label=seed.label)


# -- JSON ---------------------------------------------------------------------


def _fmt(x):
    return repr(float(x))


def seed_to_dict(seed):
    return {
        "n": seed.dim,
        "label": seed.label,
        "components": [
            [{"re": _fmt(z.real), "im": _fmt(z.imag)} for z in comp] for comp in seed.components
        ],
    }


def _parse_number(value, where):
    if isinstance(value, (int, float)) and not isinstance(value, bool):
        return float(value)
    if not isinstance(value, str):
        raise ParseError(f"expected decimal string, got {type(value).__name__}", where)
    try:
        return float(Decimal(value.strip()))
    except InvalidOperation:
        raise ParseError(f"not a decimal number: {value!r}", where) from None


def seed_from_dict(data, source="<seed>"):
    if not isinstance(data, dict):
        raise ParseError("top level must be an object", source)
    for key in ("n", "components"):
        if key not in data:
            raise ParseError(f"missing field {key!r}", source)
    n = data["n"]
    if not isinstance(n, int) or isinstance(n, bool):
        raise ParseError("field 'n' must be an integer", f"{source}: n")
    if n < 2:
        raise InvalidDimension(f"seed needs N >= 2, got n={n}")
    comps = data["components"]
    if not isinstance(comps, list) or len(comps) != n:
        raise ParseError(f"'components' must be a list of {n} coefficient lists", f"{source}: components")
    parsed = []
    for j, comp in enumerate(comps):
        if not isinstance(comp, list) or not comp:
            raise ParseError("component must be a non-empty list", f"{source}: components[{j}]")
        row = []
        for d, z in enumerate(comp):
            where = f"{source}: components[{j}][{d}]"
            if not isinstance(z, dict) or "re" not in z or "im" not in z:
                raise ParseError("coefficient must be {\"re\": ..., \"im\": ...}", where)
            row.append(complex(_parse_number(z["re"], where + ".re"), _parse_number(z["im"], where + ".im")))
        parsed.append(tuple(row))
    label = data.get("label", "")
    if not isinstance(label, str):
        raise ParseError("field 'label' must be a string", f"{source}: label")
    try:
        return SeedVector(tuple(parsed), label=label)
    except ValueError as exc:
        if isinstance(exc, InvalidDimension):
            raise
        raise ParseError(str(exc), source) from None


def load_seed(path):
    path = Path(path)
    text = path.read_text()
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(exc.msg, f"{path}:{exc.lineno}:{exc.colno}") from None
    return seed_from_dict(data, source=str(path))


def save_seed(seed, path):
    Path(path).write_text(json.dumps(seed_to_dict(seed), indent=2) + "\n")


def seed_io(path, mode, seed=None):
    if mode == "load":
        return load_seed(path)
    if mode == "save":
        if seed is None:
            raise ValueError("save needs a seed")
        save_seed(seed, path)
        return seed
    raise ValueError(f"unknown mode {mode!r}")
