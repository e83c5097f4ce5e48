"""Complete Reinhardt domains in C^2 represented by their absolute shadow.

A complete Reinhardt domain is determined by its shadow
``{(|z1|, |z2|) : (z1, z2) in domain}`` in the closed first quadrant, and the
shadow is in turn determined by its upper profile ``tau``::

    tau(x) = sup{|z2| : (z1, z2) in domain, |z1| = x},   0 <= x <= R1_max

The mirror profile ``sigma`` exchanges the roles of the coordinates.  Both
profiles vanish at the end of their range by convention (the domain is open).

The analytic-disk sets in the boundary are read off the flat pieces of the
profiles: a flat top of ``tau`` of length ``r1`` at height ``s1`` gives the
set ``closed disk(r1) x circle(s1)``, and a flat top of ``sigma`` gives
``circle(s2) x closed disk(r2)``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

COMPLETE_TOL = 1e-12
CONVEX_TOL = 1e-12
GRID_POINTS = 1024


class DomainError(ValueError):
    """Invalid domain data or an argument outside a profile's range."""


class IncompleteDomainError(DomainError):
    """An operation needing a complete Reinhardt domain got something else."""


class HypothesisError(DomainError):
    """The domain violates the hypotheses of the result being checked."""


class ShadowDomain:
    """Base class of the shadow representations.

    Subclasses are frozen dataclasses, so domains are hashable values and can
    key caches.
    """

    kind: str = ""

    @property
    def R1_max(self) -> float:
        raise NotImplementedError

    @property
    def R2_max(self) -> float:
        raise NotImplementedError

    def tau(self, x):
        raise NotImplementedError

    def sigma(self, y):
        raise NotImplementedError

    def scaled(self, c: float) -> "ShadowDomain":
        raise NotImplementedError

    def to_spec(self) -> dict:
        raise NotImplementedError


def _positive(name, value):
    value = float(value)
    if not math.isfinite(value) or value <= 0:
        raise DomainError(f"{name} must be a positive finite number, got {value!r}")
    return value


@dataclass(frozen=True)
class Bidisk(ShadowDomain):
    r: float = 1.0
    s: float = 1.0
    kind = "bidisk"

    def __post_init__(self):
        object.__setattr__(self, "r", _positive("r", self.r))
        object.__setattr__(self, "s", _positive("s", self.s))

    @property
    def R1_max(self):
        return self.r

    @property
    def R2_max(self):
        return self.s

    def tau(self, x):
        x = np.asarray(x, dtype=float)
        return np.where(x < self.r, self.s, 0.0)

    def sigma(self, y):
        y = np.asarray(y, dtype=float)
        return np.where(y < self.s, self.r, 0.0)

    def scaled(self, c):
        return Bidisk(self.r * c, self.s * c)

    def to_spec(self):
        return {"type": "bidisk", "r": self.r, "s": self.s}


@dataclass(frozen=True)
class Ball(ShadowDomain):
    radius: float = 1.0
    kind = "ball"

    def __post_init__(self):
        object.__setattr__(self, "radius", _positive("radius", self.radius))

    @property
    def R1_max(self):
        return self.radius

    @property
    def R2_max(self):
        return self.radius

    def tau(self, x):
        x = np.asarray(x, dtype=float)
        return np.sqrt(np.maximum(self.radius**2 - x * x, 0.0))

    sigma = tau

    def scaled(self, c):
        return Ball(self.radius * c)

    def to_spec(self):
        return {"type": "ball", "radius": self.radius}


@dataclass(frozen=True)
class Egg(ShadowDomain):
    """``|z1/scale|^p + |z2/scale|^q < 1`` with ``p, q >= 1``."""

    p: float = 2.0
    q: float = 4.0
    scale: float = 1.0
    kind = "egg"

    def __post_init__(self):
        for name in ("p", "q"):
            value = float(getattr(self, name))
            if not math.isfinite(value) or value < 1:
                raise DomainError(f"{name} must be >= 1 for convexity, got {value!r}")
            object.__setattr__(self, name, value)
        object.__setattr__(self, "scale", _positive("scale", self.scale))

    @property
    def R1_max(self):
        return self.scale

    @property
    def R2_max(self):
        return self.scale

    def _profile(self, t, a, b):
        t = np.asarray(t, dtype=float) / self.scale
        return self.scale * np.maximum(1.0 - t**a, 0.0) ** (1.0 / b)

    def tau(self, x):
        return self._profile(x, self.p, self.q)

    def sigma(self, y):
        return self._profile(y, self.q, self.p)

    def scaled(self, c):
        return Egg(self.p, self.q, self.scale * c)

    def to_spec(self):
        spec = {"type": "egg", "p": self.p, "q": self.q}
        if self.scale != 1.0:
            spec["scale"] = self.scale
        return spec


@dataclass(frozen=True)
class PolygonShadow(ShadowDomain):
    """Piecewise-linear upper profile through ``vertices``.

    The vertex list runs from ``(0, y0)`` on the |z2| axis to ``(R1_max, 0)``
    on the |z1| axis with strictly increasing x, except that the final edge
    may be vertical (a flat face ``|z1| = R1_max``).  Monotonicity of y is
    not enforced here; ``check_complete`` reports on it.
    """

    vertices: tuple = ()
    kind = "polygon"

    def __post_init__(self):
        try:
            verts = tuple((float(x), float(y)) for x, y in self.vertices)
        except (TypeError, ValueError) as exc:
            raise DomainError(f"vertices must be a list of [x, y] pairs: {exc}") from None
        if len(verts) < 2:
            raise DomainError("vertices: need at least two vertices")
        for x, y in verts:
            if not (math.isfinite(x) and math.isfinite(y)) or x < 0 or y < 0:
                raise DomainError(f"vertices: coordinates must be finite and >= 0, got {(x, y)}")
        if verts[0][0] != 0.0:
            raise DomainError("vertices: first vertex must lie on the |z2| axis (x = 0)")
        if verts[-1][1] != 0.0:
            raise DomainError("vertices: last vertex must lie on the |z1| axis (y = 0)")
        for i, ((x0, y0), (x1, y1)) in enumerate(zip(verts, verts[1:])):
            if x0 == x1 and y0 == y1:
                raise DomainError(f"vertices: degenerate zero-length edge at index {i}")
            if x1 < x0:
                raise DomainError(f"vertices: x must increase, decreases at index {i + 1}")
            if x1 == x0 and i != len(verts) - 2:
                raise DomainError(f"vertices: only the final edge may be vertical (index {i + 1})")
        if verts[-1][0] <= 0:
            raise DomainError("vertices: shadow has empty interior")
        if max(y for _, y in verts) <= 0:
            raise DomainError("vertices: shadow has empty interior")
        object.__setattr__(self, "vertices", verts)

    @property
    def R1_max(self):
        return self.vertices[-1][0]

    @property
    def R2_max(self):
        return max(y for _, y in self.vertices)

    @property
    def _graph(self):
        # vertices of the graph part, without a trailing vertical edge
        v = self.vertices
        return v[:-1] if v[-1][0] == v[-2][0] else v

    def tau(self, x):
        x = np.asarray(x, dtype=float)
        g = self._graph
        xs = np.array([p[0] for p in g])
        ys = np.array([p[1] for p in g])
        out = np.interp(x, xs, ys)
        return np.where(x >= self.R1_max, 0.0, out)

    def sigma(self, y):
        """``sup{x : tau(x) > y}``, which inverts ``tau`` on complete shadows."""
        y = np.asarray(y, dtype=float)
        out = np.zeros_like(y)
        flat = out.reshape(-1)
        for idx, yv in enumerate(y.reshape(-1)):
            flat[idx] = self._sigma_scalar(float(yv))
        return out if out.ndim else float(out)

    def _sigma_scalar(self, y):
        v = self.vertices
        for (x0, y0), (x1, y1) in zip(reversed(v[:-1]), reversed(v[1:])):
            if max(y0, y1) <= y:
                continue
            if y1 > y:
                return x1
            if x1 == x0:
                return x0
            return x0 + (y0 - y) * (x1 - x0) / (y0 - y1)
        return 0.0

    def transposed(self) -> "PolygonShadow":
        """The shadow with |z1| and |z2| exchanged (valid for complete shadows)."""
        return PolygonShadow(tuple((y, x) for x, y in reversed(self.vertices)))

    def scaled(self, c):
        return PolygonShadow(tuple((x * c, y * c) for x, y in self.vertices))

    def to_spec(self):
        return {"type": "polygon", "vertices": [[x, y] for x, y in self.vertices]}


@dataclass(frozen=True)
class CheckReport:
    ok: bool
    reason: str = ""

    def __bool__(self):
        return self.ok


@dataclass(frozen=True)
class GammaReport:
    """Detected analytic-disk sets.

    ``gamma1 = (r1, s1)`` stands for ``closed disk(r1) x circle(s1)`` and
    ``gamma2 = (s2, r2)`` for ``circle(s2) x closed disk(r2)``; ``None`` marks
    an empty set.
    """

    gamma1: Optional[tuple]
    gamma2: Optional[tuple]
    flat_eps: float
    len_eps: float
    exact: bool

    def to_dict(self):
        g1 = None if self.gamma1 is None else {"r1": self.gamma1[0], "s1": self.gamma1[1]}
        g2 = None if self.gamma2 is None else {"s2": self.gamma2[0], "r2": self.gamma2[1]}
        return {
            "gamma1": g1,
            "gamma2": g2,
            "flat_eps": self.flat_eps,
            "len_eps": self.len_eps,
            "exact": self.exact,
        }


def profile_tau(domain: ShadowDomain, x: float) -> float:
    """Largest |z2| over the slice |z1| = x."""
    x = float(x)
    if not 0.0 <= x <= domain.R1_max:
        raise DomainError(f"x = {x} outside [0, {domain.R1_max}]")
    return float(domain.tau(x))


def profile_sigma(domain: ShadowDomain, y: float) -> float:
    """Largest |z1| over the slice |z2| = y."""
    y = float(y)
    if not 0.0 <= y <= domain.R2_max:
        raise DomainError(f"y = {y} outside [0, {domain.R2_max}]")
    return float(domain.sigma(y))


def _sample_grid(domain):
    grid = np.linspace(0.0, domain.R1_max, GRID_POINTS + 1)
    if isinstance(domain, PolygonShadow):
        grid = np.union1d(grid, [x for x, _ in domain.vertices])
    return grid


def check_complete(domain: ShadowDomain) -> CheckReport:
    """Is ``tau`` nonincreasing (the shadow is closed under moving toward the axes)?"""
    if isinstance(domain, PolygonShadow):
        ys = [y for _, y in domain.vertices]
        for i, (a, b) in enumerate(zip(ys, ys[1:])):
            if b > a + COMPLETE_TOL:
                return CheckReport(False, f"profile increases between vertices {i} and {i + 1}")
    grid = _sample_grid(domain)
    values = domain.tau(grid)
    rises = np.diff(values) > COMPLETE_TOL
    if np.any(rises):
        at = grid[int(np.argmax(rises))]
        return CheckReport(False, f"profile increases near x = {at:.17g}")
    return CheckReport(True)


def check_convex(domain: ShadowDomain) -> CheckReport:
    """Is the (complete) domain convex, i.e. is ``tau`` concave?"""
    complete = check_complete(domain)
    if not complete:
        return CheckReport(False, "not complete: " + complete.reason)
    if isinstance(domain, PolygonShadow):
        v = domain.vertices
        for i in range(1, len(v) - 1):
            (x0, y0), (x1, y1), (x2, y2) = v[i - 1], v[i], v[i + 1]
            cross = (x1 - x0) * (y2 - y1) - (y1 - y0) * (x2 - x1)
            if cross > CONVEX_TOL:
                return CheckReport(False, f"reflex vertex at index {i}")
        return CheckReport(True)
    grid = np.linspace(0.0, domain.R1_max, 257)
    a, b = np.meshgrid(grid, grid)
    mid = domain.tau((a + b) / 2)
    chord = (domain.tau(a) + domain.tau(b)) / 2
    if np.any(mid < chord - CONVEX_TOL):
        return CheckReport(False, "midpoint concavity test failed")
    return CheckReport(True)


def _flat_run(vertices, flat_eps):
    """End of the initial flat of a polyline profile.

    The run extends over every leading vertex whose height is within
    ``flat_eps`` of the first one; it always ends at a vertex, where a
    polygonal flat really ends.
    """
    level = vertices[0][1] - flat_eps
    end = vertices[0][0]
    for x, y in vertices[1:]:
        if y < level:
            break
        end = x
    return end


def default_tolerances(domain: ShadowDomain):
    return 1e-9 * domain.R2_max, 1e-6 * domain.R1_max


def detect_gamma(domain: ShadowDomain, flat_eps: float = None, len_eps: float = None) -> GammaReport:
    """Locate the analytic-disk sets from flat tops of the two profiles."""
    if not check_complete(domain):
        raise IncompleteDomainError("detect_gamma needs a complete domain")
    d_flat, d_len = default_tolerances(domain)
    flat_eps = d_flat if flat_eps is None else float(flat_eps)
    len_eps = d_len if len_eps is None else float(len_eps)
    if flat_eps <= 0 or len_eps <= 0:
        raise DomainError("flat_eps and len_eps must be positive")

    if isinstance(domain, Bidisk):
        return GammaReport((domain.r, domain.s), (domain.r, domain.s), flat_eps, len_eps, True)
    if isinstance(domain, (Ball, Egg)):
        # strictly monotone profiles on all of [0, R): no flats
        return GammaReport(None, None, flat_eps, len_eps, True)

    gamma1 = gamma2 = None
    r1 = _flat_run(domain.vertices, flat_eps)
    if r1 >= len_eps:
        gamma1 = (r1, domain.vertices[0][1])
    mirror = domain.transposed()
    r2 = _flat_run(mirror.vertices, flat_eps)
    if r2 >= len_eps:
        gamma2 = (mirror.vertices[0][1], r2)
    return GammaReport(gamma1, gamma2, flat_eps, len_eps, False)

