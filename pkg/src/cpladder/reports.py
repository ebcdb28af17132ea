"""Verification suite, geometry report and mesh export, with deterministic serialization."""

from __future__ import annotations

import csv
import io
import json
import math
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from . import __version__
from .errors import (
    ConfigError,
    CPLadderError,
    ParseError,
    QuadratureError,
)
from .geometry import QUAD_TOL, curvature_at, global_invariants_all, metric_at
from .ladder import build_ladder, el_residual, p_plus_ladder, pi_minus, pi_plus
from .seeds import SeedVector, load_seed, veronese_seed
from .spectral import (
    DEFAULT_LAMBDA_PANEL,
    lambda_minus,
    lambda_plus,
    lax_residual,
    phi_k,
    psi_k,
    psi_negate,
)
from .surfaces import (
    chi_minus,
    chi_plus,
    embed_coordinates,
    gell_mann_basis,
    projector_from_surface,
    x_k_gy,
    x_k_limit,
    x_k_sym_tafel,
)

VERIFY_ORDER = 3
DEFAULT_TOL = 1e-8


# -- serialization ------------------------------------------------------------


def _num(x):
    x = float(x)
    if math.isnan(x) or math.isinf(x):
        return "null"
    if x.is_integer() and abs(x) < 1e15:
        return str(int(x))
    return format(x, ".17g")


def to_json(obj, indent=2, _level=0):
    """JSON text with 17-significant-digit floats and complex as {re, im}."""
    pad = " " * (indent * (_level + 1))
    end = " " * (indent * _level)
    if isinstance(obj, dict):
        if not obj:
            return "{}"
        items = [f"{pad}{_quote(k)}: {to_json(v, indent, _level + 1)}" for k, v in obj.items()]
        return "{\n" + ",\n".join(items) + "\n" + end + "}"
    if isinstance(obj, (list, tuple)):
        if not obj:
            return "[]"
        items = [pad + to_json(v, indent, _level + 1) for v in obj]
        return "[\n" + ",\n".join(items) + "\n" + end + "]"
    if isinstance(obj, np.ndarray):
        return to_json(obj.tolist(), indent, _level)
    if isinstance(obj, (bool, np.bool_)):
        return "true" if obj else "false"
    if obj is None:
        return "null"
    if isinstance(obj, (complex, np.complexfloating)):
        return to_json({"re": obj.real, "im": obj.imag}, indent, _level)
    if isinstance(obj, (int, np.integer)):
        return str(int(obj))
    if isinstance(obj, (float, np.floating)):
        return _num(obj)
    return _quote(str(obj))


def _quote(s):
    return json.dumps(str(s), ensure_ascii=False)


def _write(text, out):
    if out is None:
        return text
    Path(out).write_text(text)
    return text


# -- inputs -------------------------------------------------------------------


def resolve_seed(source):
    """A SeedVector, a path to seed JSON, or the shorthand ``veronese:N``."""
    if isinstance(source, SeedVector):
        return source
    source = str(source)
    if source.startswith("veronese:"):
        try:
            n = int(source.split(":", 1)[1])
        except ValueError:
            raise ConfigError(f"bad seed shorthand {source!r}") from None
        return veronese_seed(n)
    return load_seed(source)


def parse_lambda_panel(text):
    try:
        return tuple(complex(t.strip().replace("i", "j")) for t in text.split(",") if t.strip())
    except ValueError:
        raise ConfigError(f"cannot parse lambda panel {text!r}") from None


def parse_rungs(text, n):
    if text in (None, "all"):
        return list(range(n))
    try:
        rungs = [int(t) for t in str(text).split(",") if t.strip()]
    except ValueError:
        raise ConfigError(f"cannot parse rungs {text!r}") from None
    bad = [k for k in rungs if not 0 <= k < n]
    if bad:
        raise ConfigError(f"rungs {bad} outside 0..{n - 1}")
    return rungs


def sample_points(count=8, radius=1.5, seed=0):
    """Fixed pseudo-random points in the disc |xi| < radius."""
    rng = np.random.default_rng(seed)
    r = radius * np.sqrt(rng.uniform(0.0, 1.0, count))
    t = rng.uniform(0.0, 2 * math.pi, count)
    return r * np.exp(1j * t)


# -- verification -------------------------------------------------------------


@dataclass
class VerificationReport:
    label: str
    dim: int
    checks: list = field(default_factory=list)
    environment: dict = field(default_factory=dict)

    @property
    def passed(self):
        return all(c["pass"] for c in self.checks)

    def record(self, name, rung, residual, tol, lam=None, error=None):
        rec = {"check": name, "rung": rung}
        if lam is not None:
            rec["lambda"] = complex(lam)
        residual = float("nan") if residual is None else float(residual)
        rec["max_residual"] = residual
        rec["tolerance"] = tol
        rec["pass"] = error is None and residual <= tol
        if error is not None:
            rec["error"] = error
        self.checks.append(rec)

    def to_dict(self):
        return {
            "seed": self.label,
            "N": self.dim,
            "pass": self.passed,
            "environment": self.environment,
            "checks": self.checks,
        }

    def to_json(self):
        return to_json(self.to_dict()) + "\n"


def _err(exc):
    return f"{type(exc).__name__}: {exc}"


def _run(report, name, rung, tol, fn, lam=None):
    try:
        residual = fn()
    except CPLadderError as exc:
        report.record(name, rung, None, tol, lam, _err(exc))
    else:
        report.record(name, rung, residual, tol, lam)


def _diff(a, b):
    order = min(a.order, b.order)
    return (a.truncate(order) - b.truncate(order)).max_abs()


def run_verify(seed, tol=DEFAULT_TOL, lambda_panel=DEFAULT_LAMBDA_PANEL, points=None, order=VERIFY_ORDER):
    """Run the identity suite on ``seed`` at ``points``; never raises on check failures."""
    points = sample_points() if points is None else np.asarray(points, dtype=complex)
    env = {
        "tool_version": __version__,
        "jet_order": order,
        "lambda_panel": [complex(l) for l in lambda_panel],
        "tolerance": tol,
        "points": len(points),
    }
    try:
        seed = resolve_seed(seed)
    except (ParseError, ConfigError, OSError, CPLadderError) as exc:
        report = VerificationReport(str(seed), 0, environment=env)
        report.record("seed_load", None, None, tol, error=_err(exc))
        return report
    n = seed.dim
    report = VerificationReport(seed.label, n, environment=env)
    try:
        ladder = build_ladder(seed, points, order)
    except CPLadderError as exc:
        report.record("ladder_build", None, None, tol, error=_err(exc))
        return report

    eye = np.eye(n)
    total = ladder[0].matrix
    for P in ladder[1:]:
        total = total + P.matrix
    report.record("partition_of_unity", None, (total - eye).max_abs(), tol)
    alt = p_plus_ladder(seed, points, order)

    for k, P in enumerate(ladder):
        _run(report, "projector_defects", k, tol, lambda: max(P.defects().values()))
        _run(report, "ladder_route_p_plus", k, tol, lambda: _diff(P.matrix, alt[k].matrix))
        _run(report, "euler_lagrange", k, tol, lambda: el_residual(P).max_abs())
        if k < n - 1:
            _run(report, "pi_plus_step", k, tol, lambda: _diff(pi_plus(P).matrix, ladder[k + 1].matrix))
            _run(report, "pi_minus_pi_plus", k, tol, lambda: _diff(pi_minus(pi_plus(P)).matrix, P.matrix))

        def conformal():
            m = metric_at(ladder, k)
            return max(np.max(np.abs(a)) for a in (m.J, m.Jbar, m.J_entry, m.Jbar_entry))

        def metric_routes():
            m = metric_at(ladder, k)
            return float(np.max(np.abs(m.g12 - m.g12_entry)))

        _run(report, "conformal_gauge", k, tol, conformal)
        _run(report, "metric_two_routes", k, tol, metric_routes)
        X = x_k_gy(ladder, k)
        _run(report, "surface_defects", k, tol, lambda: max(X.defects().values()))
        _run(report, "x_limit_route", k, tol, lambda: _diff(x_k_limit(ladder, k).matrix, X.matrix))
        _run(report, "projector_from_surface", k, tol, lambda: _diff(projector_from_surface(X).matrix, P.matrix))
        if k > 0:
            _run(report, "chi_minus_step", k, tol, lambda: _diff(chi_minus(X).matrix, x_k_gy(ladder, k - 1).matrix))
        if k < n - 1:
            _run(report, "chi_plus_step", k, tol, lambda: _diff(chi_plus(X).matrix, x_k_gy(ladder, k + 1).matrix))

        for lam in lambda_panel:
            _spectral_checks(report, ladder, k, lam, tol, eye)
    return report


def _spectral_checks(report, ladder, k, lam, tol, eye):
    n = len(ladder)
    P = ladder[k]

    def lax():
        r1, r2 = lax_residual(P, k, lam, ladder)
        return max(r1.max_abs(), r2.max_abs())

    def phi_pair():
        a, b = phi_k(ladder, k, lam).matrix, phi_k(ladder, k, -lam).matrix
        return ((a @ b) - eye).max_abs()

    def psi_sum():
        psi = psi_k(ladder, k, lam)
        return _diff(psi.matrix + psi_negate(psi).matrix, P.matrix * 4.0)

    checks = [
        ("lax_residual", lax),
        ("phi_inverse", phi_pair),
        ("psi_sum_rule", psi_sum),
        ("x_sym_tafel_route", lambda: _diff(x_k_sym_tafel(ladder, k, lam).matrix, x_k_gy(ladder, k).matrix)),
    ]
    if k < n - 1:
        checks.append(
            ("lambda_plus_step", lambda: _diff(lambda_plus(psi_k(ladder, k, lam)).matrix, psi_k(ladder, k + 1, lam).matrix))
        )
    if k > 0:
        checks.append(
            ("lambda_minus_step", lambda: _diff(lambda_minus(psi_k(ladder, k, lam)).matrix, psi_k(ladder, k - 1, lam).matrix))
        )
    for name, fn in checks:
        try:
            residual = fn()
        except CPLadderError as exc:
            report.record(name, k, None, tol, lam, _err(exc))
        else:
            report.record(name, k, residual, tol, lam)


# -- geometry -----------------------------------------------------------------

CSV_COLUMNS = ("k", "K_min", "K_max", "Hnorm_min", "Hnorm_max", "W", "Q", "Delta", "quad_err")


@dataclass
class GeometryReport:
    label: str
    dim: int
    rows: list = field(default_factory=list)
    samples: list = field(default_factory=list)
    errors: list = field(default_factory=list)
    environment: dict = field(default_factory=dict)

    def to_dict(self):
        return {
            "seed": self.label,
            "N": self.dim,
            "environment": self.environment,
            "rows": self.rows,
            "samples": self.samples,
            "errors": self.errors,
        }

    def to_json(self):
        return to_json(self.to_dict()) + "\n"

    def to_csv(self):
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(CSV_COLUMNS)
        for row in self.rows:
            w.writerow([row["k"]] + [_num(row[c]) if row[c] is not None else "" for c in CSV_COLUMNS[1:]])
        return buf.getvalue()


def run_geometry(seed, rungs=None, quad_tol=QUAD_TOL, points=None, integrals=True):
    """Local samples and global invariants per rung."""
    seed = resolve_seed(seed)
    n = seed.dim
    rungs = list(range(n)) if rungs is None else list(rungs)
    points = sample_points() if points is None else np.asarray(points, dtype=complex)
    report = GeometryReport(
        seed.label,
        n,
        environment={"tool_version": __version__, "jet_order": 3, "quad_tol": quad_tol, "points": len(points)},
    )
    ladder = build_ladder(seed, points, 3)
    invariants = {}
    if integrals:
        try:
            for inv in global_invariants_all(seed, rungs, quad_tol):
                invariants[inv.rung] = inv
        except QuadratureError as exc:
            report.errors.append({"rung": None, "error": _err(exc)})
    for k in rungs:
        m, c = metric_at(ladder, k), curvature_at(ladder, k)
        row = {
            "k": k,
            "K_min": float(np.min(c.gauss_K)),
            "K_max": float(np.max(c.gauss_K)),
            "Hnorm_min": float(np.min(c.H_norm_sq)),
            "Hnorm_max": float(np.max(c.H_norm_sq)),
            "W": None,
            "Q": None,
            "Delta": None,
            "quad_err": None,
        }
        inv = invariants.get(k)
        if inv is not None:
            row.update(W=inv.willmore, Q=inv.charge, Delta=inv.euler, quad_err=max(inv.quadrature_error.values()))
            row["Delta_gauss_bonnet"] = inv.euler_gauss_bonnet
            for key, attr in (("Q_int", "charge_int"), ("Delta_int", "euler_int")):
                try:
                    row[key] = getattr(inv, attr)
                except CPLadderError as exc:
                    row[key] = None
                    report.errors.append({"rung": k, "error": _err(exc)})
        report.rows.append(row)
        for i, p in enumerate(points):
            report.samples.append(
                {
                    "k": k,
                    "point": complex(p),
                    "g12": float(m.g12[i]),
                    "J": complex(m.J[i]),
                    "K": float(c.gauss_K[i]),
                    "Hsq": float(c.H_norm_sq[i]),
                }
            )
    return report


# -- mesh export --------------------------------------------------------------


@dataclass(frozen=True)
class MeshFile:
    grid: int
    projection: tuple
    vertices: np.ndarray
    faces: np.ndarray
    attributes: dict


def mesh_points(grid):
    """Equal-area latitude grid on the sphere mapped to the stereographic plane.

    Latitudes are uniform in z (so each band has equal area) and avoid the poles.
    """
    z = -1.0 + (2.0 * np.arange(grid) + 1.0) / grid
    phi = 2 * math.pi * np.arange(grid) / grid
    rho = np.sqrt((1 + z) / (1 - z))
    return (rho[:, None] * np.exp(1j * phi[None, :])).ravel()


def build_mesh(seed, k, projection=(0, 1, 2), grid=16):
    seed = resolve_seed(seed)
    n = seed.dim
    if grid < 8:
        raise ConfigError("grid must be at least 8")
    if not 0 <= k < n:
        raise ConfigError(f"rung {k} outside 0..{n - 1}")
    projection = tuple(int(i) for i in projection)
    if len(projection) != 3 or any(not 0 <= i < n * n - 1 for i in projection):
        raise ConfigError(f"projection {projection} needs three indices in 0..{n * n - 2}")
    pts = mesh_points(grid)
    ladder = build_ladder(seed, pts, 3)
    coords = embed_coordinates(x_k_gy(ladder, k), gell_mann_basis(n))[:, list(projection)]
    c = curvature_at(ladder, k)
    idx = np.arange(grid * grid).reshape(grid, grid)
    faces = np.stack([idx[:-1, :-1], idx[:-1, 1:], idx[1:, 1:], idx[1:, :-1]], axis=-1).reshape(-1, 4)
    attrs = {"K": c.gauss_K, "Hsq": c.H_norm_sq, "g12": c.g12}
    return MeshFile(grid, projection, coords, faces, attrs)


def mesh_to_ply(mesh):
    lines = [
        "ply",
        "format ascii 1.0",
        f"element vertex {len(mesh.vertices)}",
    ]
    lines += [f"property double {name}" for name in ("x", "y", "z", "K", "Hsq", "g12")]
    lines += [f"element face {len(mesh.faces)}", "property list uchar int vertex_indices", "end_header"]
    a = mesh.attributes
    for i, v in enumerate(mesh.vertices):
        vals = list(v) + [a["K"][i], a["Hsq"][i], a["g12"][i]]
        lines.append(" ".join(format(float(x), ".17g") for x in vals))
    for f in mesh.faces:
        lines.append("4 " + " ".join(str(int(i)) for i in f))
    return "\n".join(lines) + "\n"


def export_mesh(seed, k, projection, grid, out_path):
    mesh = build_mesh(seed, k, projection, grid)
    Path(out_path).write_text(mesh_to_ply(mesh))
    return mesh
