"""Numeric flows of integrable symmetries.

The symmetry is closed into a finite ODE system on jet coordinates and
integrated with classical fixed-step RK4 in float64.
"""
from __future__ import annotations

from dataclasses import dataclass, field

from ..diffiety import NormalSystem
from ..symcore import Expr, Sym, jet, sym_id, sym_key, sym_of
from ..vfield import VField


class ClosureCapExceeded(Exception):
    pass


class SingularityEncountered(ArithmeticError):
    pass


SING_EPS = 1e-12


class _Compiled:
    """Float evaluation of a rational expression on a coordinate vector."""

    def __init__(self, e: Expr, pos: dict):
        self.num = self._terms(e.num, pos)
        self.den = None if e.is_polynomial() else self._terms(e.den, pos)

    @staticmethod
    def _terms(p: dict, pos: dict):
        out = []
        for m, c in p.items():
            out.append((float(c), tuple((pos[m[k]], m[k + 1]) for k in range(0, len(m), 2))))
        return out

    @staticmethod
    def _eval(terms, v):
        acc = 0.0
        for c, mono in terms:
            t = c
            for i, e in mono:
                t *= v[i] if e == 1 else v[i] ** e
            acc += t
        return acc

    def __call__(self, v):
        n = self._eval(self.num, v)
        if self.den is None:
            return n
        d = self._eval(self.den, v)
        if abs(d) < SING_EPS:
            raise SingularityEncountered(f"denominator {d:.3e} below {SING_EPS}")
        return n / d


@dataclass
class FiniteFlowField:
    coordinates: list  # Syms
    rhs: list  # Exprs, delta-images
    closure: dict  # coordinate name -> dependencies
    _fns: list = field(default=None, repr=False)

    def __post_init__(self):
        pos = {sym_id(s): k for k, s in enumerate(self.coordinates)}
        self._fns = [_Compiled(e, pos) for e in self.rhs]

    @property
    def names(self) -> list:
        return [str(s) for s in self.coordinates]

    def index(self, s) -> int:
        if isinstance(s, str):
            return self.names.index(s)
        return self.coordinates.index(s)

    def evaluate(self, v) -> list:
        return [f(v) for f in self._fns]

    def to_json(self) -> dict:
        return {"coordinates": self.names, "rhs": {str(s): str(e) for s, e in zip(self.coordinates, self.rhs)},
                "closure": dict(self.closure)}


def close_finite_system(ns: NormalSystem, vf: VField, cap: int = 50, extra=()) -> FiniteFlowField:
    start = [ns.x(i) for i in range(1, ns.n + 1)] + [s for s in extra]
    coords: list = []
    seen = set()
    rhs: dict = {}
    queue = list(start)
    while queue:
        s = queue.pop(0)
        if s in seen:
            continue
        seen.add(s)
        coords.append(s)
        if len(coords) > cap:
            raise ClosureCapExceeded(f"more than {cap} coordinates needed; the field is likely not integrable")
        img = vf.apply(ns.canonicalize(Expr.sym(s)))
        rhs[s] = img
        for t in sorted(img.symbols(), key=sym_key):
            if t.ns != "x":
                raise ValueError(f"non-jet symbol {t} in a field image")
            if t not in seen:
                queue.append(t)
    closure = {str(s): sorted(str(t) for t in rhs[s].symbols()) for s in coords}
    return FiniteFlowField(coords, [rhs[s] for s in coords], closure)


@dataclass
class FlowResult:
    samples: list  # (s, tuple of floats)
    step: float
    method: str = "rk4"

    @property
    def end(self) -> tuple:
        return self.samples[-1][1]


def _as_vector(ff: FiniteFlowField, p0) -> list:
    if isinstance(p0, dict):
        out = []
        for s in ff.coordinates:
            if str(s) in p0:
                out.append(float(p0[str(s)]))
            elif s in p0:
                out.append(float(p0[s]))
            else:
                raise KeyError(f"initial point misses coordinate {s}")
        return out
    v = [float(x) for x in p0]
    if len(v) != len(ff.coordinates):
        raise ValueError(f"expected {len(ff.coordinates)} coordinates, got {len(v)}")
    return v


def _rk4_step(f, y, h):
    k1 = f(y)
    k2 = f([a + 0.5 * h * b for a, b in zip(y, k1)])
    k3 = f([a + 0.5 * h * b for a, b in zip(y, k2)])
    k4 = f([a + h * b for a, b in zip(y, k3)])
    return [a + h / 6.0 * (b + 2 * c + 2 * d + e) for a, b, c, d, e in zip(y, k1, k2, k3, k4)]


def rk4_flow(ff: FiniteFlowField, p0, s: float, steps: int = 100, record: bool = False) -> FlowResult:
    if steps < 1:
        raise ValueError("steps must be at least 1")
    y = _as_vector(ff, p0)
    if s == 0:
        return FlowResult([(0.0, tuple(y))], 0.0)
    h = s / steps
    samples = [(0.0, tuple(y))]
    for k in range(steps):
        y = _rk4_step(ff.evaluate, y, h)
        if record:
            samples.append(((k + 1) * h, tuple(y)))
    if not record:
        samples.append((s, tuple(y)))
    return FlowResult(samples, h)


def _dist(a, b) -> float:
    return max((abs(x - y) for x, y in zip(a, b)), default=0.0)


def group_law_check(ff: FiniteFlowField, p0, s1: float, s2: float, steps: int = 100, tol: float = 1e-6) -> dict:
    y0 = _as_vector(ff, p0)
    direct = rk4_flow(ff, y0, s1 + s2, steps).end
    mid = rk4_flow(ff, y0, s1, steps).end
    composed = rk4_flow(ff, mid, s2, steps).end
    err = _dist(direct, composed)
    return {"passed": err <= tol, "error": err, "tol": tol}


def convergence_factor(ff: FiniteFlowField, p0, s1: float, s2: float, steps: int = 20) -> float:
    """Ratio of group-law errors for step h and h/2; close to 16 for RK4."""
    e1 = group_law_check(ff, p0, s1, s2, steps)["error"]
    e2 = group_law_check(ff, p0, s1, s2, 2 * steps)["error"]
    if e2 == 0.0:
        return float("inf")
    return e1 / e2


# equivariance along system trajectories

def _poly_derivs(coeffs, t: float, kmax: int) -> list:
    """Values of p, p', ..., p^(kmax) for p(t) = sum coeffs[i] t^i."""
    out = []
    c = [float(x) for x in coeffs]
    for _ in range(kmax + 1):
        out.append(sum(a * t ** i for i, a in enumerate(c)))
        c = [i * a for i, a in enumerate(c)][1:]
    return out


class _Trajectory:
    def __init__(self, ns: NormalSystem, controls: dict, dep0: dict):
        self.ns = ns
        self.controls = controls
        pos = {}
        self.syms = []
        for v in ns.free:
            for k in range(2):
                s = jet(v, k)
                pos[sym_id(s)] = len(self.syms)
                self.syms.append(s)
        for v in ns.dep:
            pos[sym_id(jet(v))] = len(self.syms)
            self.syms.append(jet(v))
        self.pos = pos
        self.fns = [_Compiled(ns.f[v], pos) for v in ns.dep]
        self.dep0 = [float(dep0[v]) for v in ns.dep]

    def free_values(self, t):
        out = []
        for v in self.ns.free:
            out.extend(_poly_derivs(self.controls[v], t, 1))
        return out

    def rhs(self, t, dep):
        return [f(self.free_values(t) + list(dep)) for f in self.fns]


def _integrate_dep(rhs, dep0, T: float, steps: int) -> list:
    """RK4 in t for the dependent states; returns the samples at t_k = k*T/steps."""
    h = T / steps
    y = list(dep0)
    out = [list(y)]
    for k in range(steps):
        t = k * h
        k1 = rhs(t, y)
        k2 = rhs(t + h / 2, [a + h / 2 * b for a, b in zip(y, k1)])
        k3 = rhs(t + h / 2, [a + h / 2 * b for a, b in zip(y, k2)])
        k4 = rhs(t + h, [a + h * b for a, b in zip(y, k3)])
        y = [a + h / 6 * (b + 2 * c + 2 * d + e) for a, b, c, d, e in zip(y, k1, k2, k3, k4)]
        out.append(list(y))
    return out


def equivariance_check(ns: NormalSystem, vf: VField, p0: dict, control_sample: dict, T: float = 1.0,
                       s: float = 0.5, tol: float = 1e-6, steps: int = 64, flow_steps: int = 64,
                       cap: int = 50) -> dict:
    """Flowed trajectories must again be trajectories.

    ``control_sample`` maps each free variable to polynomial coefficients in
    t; ``p0`` gives the dependent states at t = 0.
    """
    needed = [jet(v, 1) for v in ns.free]
    ff = close_finite_system(ns, vf, cap, extra=needed)
    if s == 0:
        return {"passed": True, "endpoint_error": 0.0, "residual": 0.0, "tol": tol}
    kmax = max((c.order for c in ff.coordinates if c.name in ns.free), default=1)
    for c in ff.coordinates:
        if c.ns == "x" and c.name in ns.dep and c.order > 0:
            raise ValueError(f"non-canonical coordinate {c}")
    # base trajectory on a grid of spacing h/2 so the flowed RK4 in t has its midpoints
    H = 2 * steps
    base = _Trajectory(ns, control_sample, p0)
    deps = _integrate_dep(base.rhs, base.dep0, T, H)
    dep_ix = {v: k for k, v in enumerate(ns.dep)}

    def point(k):
        t = k * T / H
        vals = []
        for c in ff.coordinates:
            if c.name in ns.free:
                vals.append(_poly_derivs(control_sample[c.name], t, kmax)[c.order])
            else:
                vals.append(deps[k][dep_ix[c.name]])
        return vals

    flowed = [rk4_flow(ff, point(k), s, flow_steps).end for k in range(H + 1)]
    ix = {str(c): k for k, c in enumerate(ff.coordinates)}
    fr = _Trajectory(ns, {}, {v: 0.0 for v in ns.dep})

    def free_at(k):
        out = []
        for v in ns.free:
            out.append(flowed[k][ix[v]])
            out.append(flowed[k][ix[f"{v}'"]])
        return out

    # RK4 in t for the flowed curve using flowed control jets at the grid points
    h = T / steps
    y = [flowed[0][ix[v]] for v in ns.dep]
    for k in range(steps):
        def rhs(j, dep):
            return [f(free_at(j) + list(dep)) for f in fr.fns]
        k1 = rhs(2 * k, y)
        k2 = rhs(2 * k + 1, [a + h / 2 * b for a, b in zip(y, k1)])
        k3 = rhs(2 * k + 1, [a + h / 2 * b for a, b in zip(y, k2)])
        k4 = rhs(2 * k + 2, [a + h * b for a, b in zip(y, k3)])
        y = [a + h / 6 * (b + 2 * c + 2 * d + e) for a, b, c, d, e in zip(y, k1, k2, k3, k4)]
    target = [flowed[H][ix[v]] for v in ns.dep]
    end_err = _dist(y, target)
    # finite-difference residual of the flowed dependent components (fourth-order stencil)
    dt = T / H
    res = 0.0
    for k in range(2, H - 1):
        for v in ns.dep:
            j = ix[v]
            d = (-flowed[k + 2][j] + 8 * flowed[k + 1][j] - 8 * flowed[k - 1][j] + flowed[k - 2][j]) / (12 * dt)
            rhs_v = fr.fns[dep_ix[v]](free_at(k) + [flowed[k][ix[w]] for w in ns.dep])
            res = max(res, abs(d - rhs_v))
    passed = end_err <= tol and res <= 10 * tol
    return {"passed": passed, "endpoint_error": end_err, "residual": res, "tol": tol,
            "coordinates": ff.names}
