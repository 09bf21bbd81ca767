"""Integrability of a symmetry: iterated orders, rank stabilization, tameness."""
from __future__ import annotations

import math
import random
from dataclasses import dataclass, field

from ..diffiety import NormalSystem
from ..symcore import Expr, ONE_E, Sym, jet, sym_key
from ..symcore.errors import DenominatorVanishes
from ..symcore.linalg import ff_rank, q_rank, random_point
from ..vfield import LazyBracket, SparseField, VField, bracket_vfields


class ExpressionBlowup(Exception):
    pass


class InvalidPartition(ValueError):
    pass


def expr_order(e: Expr) -> int:
    return max((s.order for s in e.symbols() if s.ns == "x"), default=0)


def _size(e: Expr) -> int:
    return len(e.num) + len(e.den)


@dataclass
class OrderProfile:
    names: list
    orders: dict  # variable label -> list of orders (None past a blowup)
    growth: str  # bounded | strictly-growing | undetermined
    e: int | None
    K: int
    truncated: bool = False

    def to_json(self) -> dict:
        return {"K": self.K, "orders": {k: list(v) for k, v in self.orders.items()},
                "growth": self.growth, "e": self.e, "truncated": self.truncated}


class _Chains:
    """delta^k applied to the states and to the controls u_j = x_j'."""

    def __init__(self, ns: NormalSystem, vf: VField, size_cap: int):
        self.ns = ns
        self.vf = vf
        self.size_cap = size_cap
        self.labels = [ns.var(i) for i in range(1, ns.n + 1)]
        self.starts = {lab: Expr.sym(jet(lab)) for lab in self.labels}
        for v in ns.free:
            self.labels.append(f"{v}'")
            self.starts[f"{v}'"] = Expr.sym(jet(v, 1))
        self.chains = {lab: [self.starts[lab]] for lab in self.labels}
        self.blown = False

    def get(self, lab: str, k: int):
        ch = self.chains[lab]
        while len(ch) <= k:
            if ch[-1] is None:
                ch.append(None)
                continue
            nxt = self.vf.apply(ch[-1])
            if _size(nxt) > self.size_cap:
                self.blown = True
                ch.append(None)
            else:
                ch.append(nxt)
        return ch[k]


def iterated_orders(ns: NormalSystem, vf: VField, K: int, size_cap: int = 10 ** 5) -> OrderProfile:
    if K < 1:
        raise ValueError("K must be at least 1")
    return _profile(_Chains(ns, vf, size_cap), K)


def _profile(ch: _Chains, K: int) -> OrderProfile:
    orders = {}
    for lab in ch.labels:
        seq = []
        for k in range(K + 1):
            e = ch.get(lab, k)
            seq.append(None if e is None else expr_order(e))
        orders[lab] = seq
    growth = "undetermined"
    states = ch.labels[:ch.ns.n]
    if any(_strict(orders[lab]) for lab in states):
        growth = "strictly-growing"
    elif not ch.blown:
        half = (K + 1) // 2
        early = max(o for lab in ch.labels for o in orders[lab][:half + 1])
        late = max(o for lab in ch.labels for o in orders[lab])
        if late <= early:
            growth = "bounded"
    e = None
    if growth == "bounded":
        e = max(o for lab in ch.labels for o in orders[lab])
    return OrderProfile(list(ch.labels), orders, growth, e, K, ch.blown)


def _strict(seq) -> bool:
    return all(a is not None for a in seq) and all(b > a for a, b in zip(seq, seq[1:]))


def default_iteration_cap(n: int, m: int, varpi: int) -> int:
    """n - m + n(n+1)varpi/2, rounded up."""
    return n - m + math.ceil(n * (n + 1) * varpi / 2)


@dataclass
class Verdict:
    status: str  # IntegrableEvidence | NotIntegrable | Undetermined
    witness: str
    ranks: list
    K: int
    cap_bound: int
    profile: OrderProfile | None = None
    notes: list = field(default_factory=list)

    def to_json(self) -> dict:
        out = {"status": self.status, "witness": self.witness, "ranks": list(self.ranks), "K": self.K,
               "cap_bound": self.cap_bound, "notes": list(self.notes)}
        if self.profile is not None:
            out["profile"] = self.profile.to_json()
        return out


def _jacobian(exprs, cols):
    return [[e.diff(c) for c in cols] for e in exprs]


def _columns(exprs) -> list:
    syms = set()
    for e in exprs:
        syms |= {s for s in e.symbols() if s.ns == "x"}
    return sorted(syms, key=sym_key)


def _point_rank_check(base, new, rng: random.Random, points: int = 5) -> bool:
    """At random points adding ``new`` rows leaves the rank unchanged (bordered minors vanish)."""
    allx = list(base) + list(new)
    cols = _columns(allx)
    from ..symcore.symbols import sym_id
    ids = {sym_id(c) for c in cols}
    jb = _jacobian(base, cols)
    jn = _jacobian(new, cols)
    done = 0
    tries = 0
    while done < points and tries < 4 * points:
        tries += 1
        pt = random_point(ids, rng)
        try:
            nb = [[e.eval(pt) for e in r] for r in jb]
            nn = [[e.eval(pt) for e in r] for r in jn]
        except DenominatorVanishes:
            continue
        if q_rank(nb + nn, len(cols)) != q_rank(nb, len(cols)):
            return False
        done += 1
    return done == points


def integrability_verdict(ns: NormalSystem, vf: VField, K: int | None = None, seed: int = 0,
                          size_cap: int = 10 ** 5) -> Verdict:
    varpi = vf.order
    cap = default_iteration_cap(ns.n, ns.m, varpi)
    if K is None:
        K = max(cap, 1) + 1
    rng = random.Random(seed)
    notes = ["iteration cap uses n(n+1)varpi/2 for the quadratic term"]
    ch = _Chains(ns, vf, size_cap)
    if ns.m == 1 and varpi > 0:
        prof = _profile(ch, K)
        return Verdict("NotIntegrable", f"one free variable and field of order {varpi} > 0", [], K, cap, prof,
                       notes)
    layers = []
    ranks = []
    status = None
    witness = ""
    for k in range(K + 1):
        layer = [ch.get(ns.var(i), k) for i in range(1, ns.n + 1)]
        if any(e is None for e in layer):
            witness = f"expression size cap exceeded at k={k}"
            break
        layer = [e for e in layer if not e.is_const()]
        flat = [e for L in layers for e in L] + layer
        cols = _columns(flat)
        r = ff_rank(_jacobian(flat, cols), len(cols), rng) if flat and cols else 0
        ranks.append(r)
        if k >= 1 and r == ranks[-2]:
            base = [e for L in layers for e in L]
            if _point_rank_check(base, layer, rng):
                status = "IntegrableEvidence"
                witness = f"rank stabilizes at k={k} with rank {r}"
                break
        layers.append(layer)
    prof = _profile(ch, K)
    if status is None:
        st = [lab for lab in prof.names[:ns.n] if _strict(prof.orders[lab])]
        if st and K >= cap:
            status = "NotIntegrable"
            lab = st[0]
            witness = f"ord delta^k {lab} = {prof.orders[lab]} strictly increasing up to K={K} >= {cap}"
        else:
            status = "Undetermined"
            witness = witness or f"no rank stabilization up to K={K}"
    return Verdict(status, witness, ranks, K, cap, prof, notes)


# tameness

def _partial(s: Sym) -> SparseField:
    return SparseField({s: ONE_E})


def tame_test(ns: NormalSystem, vf: VField, max_generations: int = 3, max_fields: int = 40) -> dict:
    """Rank of the algebra generated by [delta, d/ds] for jets s of order > 0 in the generators.

    Only the components on x_1..x_n matter: a tame coordinate system of
    order 0 would be annihilated by the whole algebra.
    """
    jets = sorted({s for g in vf.generators for s in g.symbols() if s.ns == "x" and s.order > 0}, key=sym_key)
    states = [ns.x(i) for i in range(1, ns.n + 1)]
    fields = [LazyBracket(vf, _partial(s)) for s in jets]

    def rank_of(fs):
        rows = []
        for F in fs:
            rows.append([c if c is not None else Expr.const(0) for c in (_img(F, x) for x in states)])
        return ff_rank(rows, len(states)) if rows else 0

    rank = rank_of(fields)
    gen = 0
    frontier = list(fields)
    while rank < ns.n and gen < max_generations and frontier and len(fields) < max_fields:
        gen += 1
        new = []
        for A in frontier:
            for B in fields:
                if A is B or len(fields) + len(new) >= max_fields:
                    continue
                new.append(LazyBracket(A, B))
        r2 = rank_of(fields + new)
        fields = fields + new
        frontier = new
        if r2 == rank:
            break
        rank = r2
    verdict = "TameCompatible" if rank < ns.n else "NotTameInTheseCoordinates"
    return {"verdict": verdict, "dim_L": rank, "n": ns.n, "generators": [str(s) for s in jets],
            "generations": gen}


def _img(F, s: Sym):
    from ..symcore.symbols import sym_id
    return F.image(sym_id(s))


def commuting_family(ns: NormalSystem, fields: list, K: int = 8) -> dict:
    table = []
    all_zero = True
    flags = []
    for i in range(len(fields)):
        row = []
        for j in range(len(fields)):
            if i == j:
                row.append("zero")
                continue
            br = bracket_vfields(fields[i], fields[j])
            z = br.is_zero()
            row.append("zero" if z else "nonzero")
            if not z:
                all_zero = False
                if i < j:
                    v = integrability_verdict(ns, br, K)
                    if v.status == "NotIntegrable":
                        flags.append({"pair": [i, j], "bracket": br.to_json(), "status": v.status})
        table.append(row)
    report = {"commuting": all_zero, "table": table, "nonintegrable_brackets": flags}
    if all_zero:
        report["note"] = "rational linear combinations are symmetries; flagged for a joint flow test"
    elif flags:
        report["note"] = "a bracket is not integrable, so the family generates no finite-dimensional pseudogroup"
    return report


def tame_growth_degree(partition, varpi: int, m: int | None = None) -> int:
    c = list(partition)
    if not c or any(int(x) != x or x < 1 for x in c):
        raise InvalidPartition(f"partition parts must be positive integers: {c}")
    total = sum(c)
    if m is not None and total != m:
        raise InvalidPartition(f"partition sums to {total}, expected m={m}")
    if varpi < 0:
        raise InvalidPartition("varpi must be non-negative")
    return (total - c[-1]) * (varpi + 1) + c[-1]


def transcendence_order_bound(m: int, varpi: int, e: int) -> int:
    return (m - 1) * (varpi - e + 1) + 1
