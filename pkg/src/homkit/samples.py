"""Seeded sample generators for objects, morphisms and structure data.

All randomness flows through random.Random instances seeded with stable
strings derived from the run seed, so identical seeds give identical
sample streams on any platform (MT19937, string seeding via SHA-512).
"""

from __future__ import annotations

import random

from .intlin import Matrix, ZZ, lattice_basis
from .abcat import (
    PresentedMorphism,
    PresentedObject,
    direct_sum,
    hom_group,
)
from .regular import RegularCategory


def child_rng(seed, tag: str) -> random.Random:
    return random.Random(f"{seed}:{tag}")


def random_unimodular(rng: random.Random, n: int, steps=None) -> Matrix:
    """Product of random elementary matrices; determinant +-1."""
    if n == 0:
        return Matrix.identity(0)
    rows = Matrix.identity(n).to_lists()
    steps = steps if steps is not None else 2 * n + 2
    for _ in range(steps):
        op = rng.randrange(3)
        i = rng.randrange(n)
        j = rng.randrange(n)
        if op == 0 and i != j:
            c = rng.choice((-2, -1, 1, 2))
            for t in range(n):
                rows[i][t] += c * rows[j][t]
        elif op == 1 and i != j:
            rows[i], rows[j] = rows[j], rows[i]
        elif op == 2:
            for t in range(n):
                rows[i][t] = -rows[i][t]
    return Matrix.from_rows(rows)


class SampleSpace:
    """Deterministic sampler over a fixed subcategory.

    bounds keys (with defaults): rank 2, factor 8, entry 3, pool 24,
    coeff 2, chain_depth 6.
    """

    def __init__(self, rc: RegularCategory, seed, bounds=None):
        self.rc = rc
        self.seed = seed
        self.bounds = {
            "rank": 2,
            "factor": 8,
            "entry": 3,
            "pool": 24,
            "coeff": 2,
        }
        self.bounds.update(bounds or {})
        self._hom_cache = {}
        self.allowed_factors = [
            d
            for d in range(2, self.bounds["factor"] + 1)
            if rc.contains(PresentedObject.cyclic(d))
        ]
        self._pool = None

    def rng(self, tag: str) -> random.Random:
        return child_rng(self.seed, f"{self.rc.predicate.name}:{tag}")

    # objects -------------------------------------------------------------

    def random_object(self, rng: random.Random) -> PresentedObject:
        free_rank = rng.randrange(0, self.bounds["rank"] + 1)
        n_tors = rng.randrange(0, self.bounds["rank"] + 1) if self.allowed_factors else 0
        factors = tuple(rng.choice(self.allowed_factors) for _ in range(n_tors))
        obj = PresentedObject.from_factors(free_rank, factors)
        if obj.generators == 0:
            return obj
        u = random_unimodular(rng, obj.generators)
        rel = u * obj.relations
        if rel.cols:
            v = random_unimodular(rng, rel.cols)
            rel = rel * v
        return PresentedObject(obj.generators, rel)

    def pool(self):
        if self._pool is None:
            rng = self.rng("pool")
            objs = [
                PresentedObject.zero(),
                PresentedObject.free(1),
                PresentedObject.free(2),
            ]
            for d in self.allowed_factors[:3]:
                objs.append(PresentedObject.cyclic(d))
            while len(objs) < self.bounds["pool"]:
                objs.append(self.random_object(rng))
            self._pool = [o for o in objs if self.rc.contains(o)]
        return self._pool

    def pick_object(self, rng) -> PresentedObject:
        return rng.choice(self.pool())

    # morphisms -----------------------------------------------------------

    def hom(self, x: PresentedObject, y: PresentedObject):
        key = (x, y)
        got = self._hom_cache.get(key)
        if got is None:
            got = hom_group(x, y)
            self._hom_cache[key] = got
        return got

    def random_morphism(self, rng, x=None, y=None) -> PresentedMorphism:
        x = x if x is not None else self.pick_object(rng)
        y = y if y is not None else self.pick_object(rng)
        h = self.hom(x, y)
        if not h.basis:
            return PresentedMorphism.zero(x, y)
        c = self.bounds["coeff"]
        coords = [rng.randint(-c, c) for _ in h.basis]
        return h.from_coords(coords)

    def random_sublattice(self, rng, x: PresentedObject) -> Matrix:
        g = x.generators
        if g == 0:
            return x.relations
        e = self.bounds["entry"]
        n_cols = rng.randrange(0, g + 1)
        cols = [
            [rng.randint(-e, e) for _ in range(g)] for _ in range(n_cols)
        ]
        extra = (
            Matrix.from_cols(cols, g) if cols else Matrix.zeros(g, 0)
        )
        return lattice_basis(extra.hstack(x.relations))

    # structure samplers ---------------------------------------------------

    def random_conflation(self, rng, x=None):
        """(incl: S >-> X, proj: X ->> Q) with all three terms members."""
        x = x if x is not None else self.pick_object(rng)
        lat = self.rc.coreflect(x, self.random_sublattice(rng, x))
        s, incl, q, proj = self.rc.conflation_from_lattice(x, lat)
        return s, incl, q, proj

    def random_deflation(self, rng, x=None) -> PresentedMorphism:
        _, _, _, proj = self.random_conflation(rng, x)
        return proj

    def random_inflation(self, rng, x=None) -> PresentedMorphism:
        _, incl, _, _ = self.random_conflation(rng, x)
        return incl

    # axiom instance families ----------------------------------------------

    def instances(self, axiom: str, count: int):
        """Instance tuples consumed by regular.check_axiom."""
        rng = self.rng(f"axiom:{axiom}")
        out = []
        for _ in range(count):
            if axiom == "R0":
                out.append((self.pick_object(rng),))
            elif axiom == "R1":
                p = self.random_deflation(rng)
                q = self.random_deflation(rng, p.target)
                out.append((p, q))
            elif axiom in ("R2", "DR2"):
                p = self.random_deflation(rng)
                t = self.pick_object(rng)
                h = self.random_morphism(rng, t, p.target)
                out.append((p, h))
            elif axiom in ("R3", "R3plus"):
                d = self.random_deflation(rng)
                a2 = self.pick_object(rng)
                _, i1, _, p1, p2 = direct_sum(d.source, a2)
                r = self.random_morphism(rng, a2, d.target)
                p = (d @ p1).plus(r @ p2)
                out.append((i1, p))
            elif axiom == "DR1":
                out.append((self.random_morphism(rng),))
            elif axiom in ("AI", "L1"):
                if axiom == "AI":
                    z = self.pick_object(rng)
                    f = self.random_inflation(rng, z)
                    g = self.random_inflation(rng, z)
                    out.append((f, g))
                else:
                    g = self.random_inflation(rng)
                    f = self.random_inflation(rng, g.source)
                    out.append((f, g))
            else:
                raise KeyError(f"no instance family for axiom {axiom!r}")
        return out
