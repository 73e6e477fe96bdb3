"""Subobject-closed subcategories of the ambient category and their
one-sided exact structure.

A membership predicate on presented objects, together with a coreflection
(smallest enlargement of a subobject whose quotient satisfies the
predicate), cuts out a full subcategory E of the ambient category.  The
conflations of E are the ambient short exact sequences with all terms in
E; deflations are then exactly the ambient epimorphisms between E-objects
and every morphism acquires a deflation-mono factorization through its
ambient image.  The axiom checkers below certify this structure on
sampled or enumerated families and produce counterexample certificates
on failure.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Callable, Optional

from .intlin import Matrix, ZZ, lattice_basis, lattice_eq, lattice_leq, lattice_sum, saturate
from .abcat import (
    PresentedMorphism,
    PresentedObject,
    cokernel,
    factor_through_epi,
    image,
    image_lattice,
    is_epi,
    is_mono,
    kernel,
    kernel_lattice,
    pullback,
    quotient_by_lattice,
    subobject_from_lattice,
)
from .report import CheckResult


class PredicateViolation(ValueError):
    """An operation received an object outside the subcategory."""


@dataclass(frozen=True)
class Predicate:
    """Decidable membership plus an optional coreflection.

    member decides whether a presented object lies in the subcategory;
    zero objects always count as members (the subcategory is additive).
    coreflect(X, L) returns the smallest lattice L' containing L with
    X/L' a member; predicates without a computable coreflection carry
    None and the operations needing one raise.
    """

    name: str
    member_fn: Callable[[PresentedObject], bool]
    coreflect_fn: Optional[Callable[[PresentedObject, Matrix], Matrix]] = None

    def member(self, obj: PresentedObject) -> bool:
        if obj.is_zero:
            return True
        return self.member_fn(obj)

    def coreflect(self, obj: PresentedObject, lat: Matrix) -> Matrix:
        if self.coreflect_fn is None:
            raise PredicateViolation(f"predicate {self.name} has no coreflection")
        return self.coreflect_fn(obj, lattice_sum(lat, obj.relations))


def _coreflect_all(obj, lat):
    return lat


def _coreflect_torsion_free(obj, lat):
    return lattice_basis(saturate(lat)) if lat.cols else lat


def _coreflect_exponent(m):
    def fn(obj, lat):
        if lat.cols == 0:
            sat = Matrix.zeros(lat.rows, 0)
        else:
            sat = saturate(lat)
        return lattice_sum(lat, sat.scale(m))

    return fn


def predicate_all():
    return Predicate("all", lambda obj: True, _coreflect_all)


def predicate_torsion_free():
    return Predicate(
        "torsion-free", lambda obj: not obj.torsion_factors, _coreflect_torsion_free
    )


def predicate_torsion_exponent(m: int):
    return Predicate(
        f"torsion-exponent:{m}",
        lambda obj: all(m % d == 0 for d in obj.torsion_factors),
        _coreflect_exponent(m),
    )


def predicate_allowed_factors(allowed, name=None, divides=False):
    """Members have every invariant factor in the allowed set.

    With divides=True a factor is allowed when it divides some listed
    value.  No coreflection in general.
    """
    allowed = tuple(allowed)
    if divides:
        ok = lambda d: any(a % d == 0 for a in allowed)
    else:
        ok = lambda d: d in allowed

    return Predicate(
        name or f"allow-factors:{','.join(map(str, allowed))}",
        lambda obj: all(ok(d) for d in obj.torsion_factors),
        None,
    )


def predicate_forbidden_factors(forbidden, name=None, divisible=False):
    """Members have no invariant factor matching the forbidden list.

    With divisible=True a factor matches when divisible by a listed
    value; otherwise matching is exact equality.
    """
    forbidden = tuple(forbidden)
    if divisible:
        bad = lambda d: any(d % m == 0 for m in forbidden)
    else:
        bad = lambda d: d in forbidden
    return Predicate(
        name or f"forbid-factors:{','.join(map(str, forbidden))}",
        lambda obj: not any(bad(d) for d in obj.torsion_factors),
        None,
    )


def predicate_finite():
    return Predicate("finite", lambda obj: obj.free_rank == 0, None)


def predicate_free():
    return Predicate("free", lambda obj: not obj.torsion_factors, None)


def predicate_by_name(name: str, **params) -> Predicate:
    """Resolve the shipped predicate registry by scenario name."""
    if name == "all":
        return predicate_all()
    if name == "torsion-free":
        return predicate_torsion_free()
    if name.startswith("torsion-exponent"):
        if ":" in name:
            m = int(name.split(":", 1)[1])
        else:
            m = int(params["m"])
        return predicate_torsion_exponent(m)
    if name in ("free-or-Z4", "free-or-z4"):
        return predicate_allowed_factors((4,), name="free-or-Z4")
    if name == "finite":
        return predicate_finite()
    if name == "free":
        return predicate_free()
    if name == "custom":
        if "allow_factors" in params:
            return predicate_allowed_factors(
                params["allow_factors"], divides=params.get("divides", False)
            )
        if "forbid_factors" in params:
            return predicate_forbidden_factors(
                params["forbid_factors"], divisible=params.get("divisible", False)
            )
        raise KeyError("custom predicate needs allow_factors or forbid_factors")
    raise KeyError(f"unknown predicate {name!r}")


class RegularCategory:
    """Ambient category restricted along a subobject-closed predicate."""

    def __init__(self, predicate: Predicate, ring=ZZ):
        self.predicate = predicate
        self.ring = ring

    def contains(self, obj: PresentedObject) -> bool:
        return self.predicate.member(obj)

    def require(self, *objs):
        for obj in objs:
            if not self.contains(obj):
                raise PredicateViolation(
                    f"object {obj!r} violates predicate {self.predicate.name}"
                )

    def coreflect(self, obj: PresentedObject, lat: Matrix) -> Matrix:
        return self.predicate.coreflect(obj, lat)

    # structure maps -----------------------------------------------------

    def is_deflation(self, f: PresentedMorphism) -> bool:
        """Ambient epi between members; the kernel is re-checked to lie in E."""
        self.require(f.source, f.target)
        if not is_epi(f):
            return False
        ker_obj, _ = kernel(f)
        if not self.contains(ker_obj):
            raise PredicateViolation(
                "subobject closure breached: kernel escapes the predicate"
            )
        return True

    def is_inflation(self, f: PresentedMorphism) -> bool:
        self.require(f.source, f.target)
        if not is_mono(f):
            return False
        coker_obj, _ = cokernel(f)
        return self.contains(coker_obj)

    def deflation_mono_factorization(self, f: PresentedMorphism):
        """f = m p with p a deflation onto the ambient image and m mono."""
        self.require(f.source, f.target)
        i_obj, e, m = image(f)
        if not self.contains(i_obj):
            raise PredicateViolation(
                "image object escapes the predicate; it is not subobject-closed"
            )
        return e, m

    def cokernel_mono_factorization(self, f: PresentedMorphism):
        """Identical output to deflation_mono_factorization.

        The deflation part is the cokernel in E of ker(f) -> X, which the
        caller can certify via cokernel_universal_property.
        """
        return self.deflation_mono_factorization(f)

    def e_cokernel(self, f: PresentedMorphism):
        """Cokernel inside E: quotient by the coreflection of the image."""
        self.require(f.source, f.target)
        closed = self.coreflect(f.target, image_lattice(f))
        return quotient_by_lattice(f.target, closed)

    def cokernel_universal_property(self, f, p, tests) -> bool:
        """p is the E-cokernel of f: p f = 0 and every test morphism
        killing f factors uniquely through p."""
        if not (p @ f).is_zero_map():
            return False
        for t in tests:
            if (t @ f).is_zero_map():
                u = factor_through_epi(p, t)
                if u is None:
                    return False
        return True

    def admissible_intersection(self, f: PresentedMorphism, g: PresentedMorphism):
        """Pullback of two inflations with common codomain; all four sides
        must come out inflations and the corner must be a member."""
        if not self.is_inflation(f) or not self.is_inflation(g):
            raise PredicateViolation("admissible_intersection expects inflations")
        p, pf, pg = pullback(f, g)
        if not self.contains(p):
            raise PredicateViolation("pullback corner escapes the predicate")
        return p, pf, pg

    def conflation_from_lattice(self, x: PresentedObject, lat: Matrix):
        """Conflation S >-> X ->> X/S from a predicate-closed sublattice."""
        closed = self.coreflect(x, lat)
        s, incl = subobject_from_lattice(x, closed, check=False)
        q, proj = quotient_by_lattice(x, closed)
        return s, incl, q, proj


# axiom checking ---------------------------------------------------------


def _certificate(kind, **data):
    cert = {"kind": kind}
    for k, v in data.items():
        if isinstance(v, PresentedObject):
            cert[k] = v.to_json()
        elif isinstance(v, PresentedMorphism):
            cert[k] = v.to_json()
        elif isinstance(v, Matrix):
            cert[k] = v.to_lists()
        else:
            cert[k] = v
    return cert


AXIOMS = ("R0", "R1", "R2", "R3", "R3plus", "DR1", "DR2", "AI", "L1")


def check_axiom(rc: RegularCategory, axiom: str, samples, bounds=None, seed=None) -> CheckResult:
    """Run one axiom over an explicit sample family.

    samples is an iterable of instance tuples as produced by
    homkit.samples (per-axiom shapes documented there).  Failures are
    certificates, not errors.
    """
    checker = _AXIOM_CHECKERS.get(axiom)
    if checker is None:
        raise KeyError(f"unknown axiom {axiom!r}; expected one of {AXIOMS}")
    failures = []
    count = 0
    for instance in samples:
        count += 1
        cert = checker(rc, instance)
        if cert is not None:
            failures.append(cert)
    return CheckResult(
        check=f"axiom:{axiom}:{rc.predicate.name}",
        samples=count,
        passes=count - len(failures),
        failures=failures,
        bounds=dict(bounds or {}),
        seed=seed,
    )


def _check_r0(rc, instance):
    (x,) = instance
    zero = PresentedObject.zero(x.ring)
    to_zero = PresentedMorphism.zero(x, zero)
    if not rc.is_deflation(to_zero):
        return _certificate("R0", object=x)
    return None


def _check_r1(rc, instance):
    p, q = instance
    if not (rc.is_deflation(p) and rc.is_deflation(q)):
        return _certificate("R1-precondition", p=p, q=q)
    if not rc.is_deflation(q @ p):
        return _certificate("R1", p=p, q=q)
    return None


def _check_r2(rc, instance, need_cokernel_side=False):
    p, h = instance
    if not rc.is_deflation(p):
        return _certificate("R2-precondition", p=p)
    pb, to_t, to_y = pullback(h, p)
    if not rc.contains(pb):
        return _certificate("R2-corner", p=p, h=h, corner=pb)
    if not rc.is_deflation(to_t):
        return _certificate("R2", p=p, h=h)
    if not (h @ to_t).equals(p @ to_y):
        return _certificate("R2-commute", p=p, h=h)
    if need_cokernel_side:
        # pulled-back map must again be the cokernel of its kernel in E
        klat = kernel_lattice(to_t)
        if not lattice_eq(rc.coreflect(pb, klat), klat):
            return _certificate("DR2-closure", p=p, h=h)
    return None


def _check_dr2(rc, instance):
    return _check_r2(rc, instance, need_cokernel_side=True)


def _check_r3(rc, instance):
    i, p = instance
    if not rc.is_deflation(p @ i):
        return _certificate("R3-precondition", i=i, p=p)
    if not rc.is_deflation(p):
        return _certificate("R3", i=i, p=p)
    return None


def _check_dr1(rc, instance):
    (f,) = instance
    p, m = rc.deflation_mono_factorization(f)
    if not (m @ p).equals(f):
        return _certificate("DR1-compose", f=f)
    if not rc.is_deflation(p):
        return _certificate("DR1-deflation", f=f)
    if not is_mono(m):
        return _certificate("DR1-mono", f=f)
    klat = kernel_lattice(p)
    if not lattice_eq(rc.coreflect(f.source, klat), klat):
        return _certificate("DR1-closure", f=f)
    return None


def _check_ai(rc, instance):
    f, g = instance
    if not (rc.is_inflation(f) and rc.is_inflation(g)):
        return _certificate("AI-precondition", f=f, g=g)
    p, pf, pg = pullback(f, g)
    if not rc.contains(p):
        return _certificate("AI-corner", f=f, g=g, corner=p)
    if not (rc.is_inflation(pf) and rc.is_inflation(pg)):
        return _certificate("AI", f=f, g=g)
    return None


def _check_l1(rc, instance):
    f, g = instance
    if not (rc.is_inflation(f) and rc.is_inflation(g)):
        return _certificate("L1-precondition", f=f, g=g)
    if not rc.is_inflation(g @ f):
        return _certificate("L1", f=f, g=g)
    return None


_AXIOM_CHECKERS = {
    "R0": _check_r0,
    "R1": _check_r1,
    "R2": _check_r2,
    "R3": _check_r3,
    "R3plus": _check_r3,
    "DR1": _check_dr1,
    "DR2": _check_dr2,
    "AI": _check_ai,
    "L1": _check_l1,
}


# subobject enumeration ----------------------------------------------------


def enumerate_subobject_lattices(x: PresentedObject, bound: int):
    """Sublattices of the generator lattice containing the relations.

    Enumerates lattices generated by the relations plus vectors with
    entries in [0, bound]; canonicalized by Hermite basis, so each
    subobject appears once.  Exhaustive for finite objects whose
    exponent divides bound factorials; a deliberate desk-scale device.
    """
    g = x.generators
    seen = set()
    vectors = list(itertools.product(range(0, bound + 1), repeat=g))
    singles = [v for v in vectors if any(v)]
    rel = x.relation_basis
    out = []
    for take in range(0, 3):
        for combo in itertools.combinations(singles, take):
            if combo:
                extra = Matrix.from_cols(list(combo), g)
                lat = lattice_basis(extra.hstack(rel))
            else:
                lat = rel
            key = lat.entries
            if key in seen:
                continue
            seen.add(key)
            out.append(lat)
        if len(out) > 4000:
            break
    return out


def check_subobject_closed(rc: RegularCategory, bounds, seed=None) -> CheckResult:
    """Enumerate subobjects of small members and test membership.

    A failure certificate names the ambient object and the offending
    subobject; passing is evidence up to the stated bounds, failing is a
    theorem.
    """
    rank_bound = bounds.get("rank", 2)
    entry_bound = bounds.get("entry", 4)
    factor_bound = bounds.get("factor", 8)
    ambients = []
    factors = [d for d in range(2, factor_bound + 1)]
    for free_rank in range(0, rank_bound + 1):
        ambients.append(PresentedObject.from_factors(free_rank, ()))
        for d in factors:
            ambients.append(PresentedObject.from_factors(free_rank, (d,)))
        for d1 in factors:
            for d2 in factors:
                if d2 % d1 == 0:
                    ambients.append(PresentedObject.from_factors(free_rank, (d1, d2)))
    ambients = [a for a in ambients if rc.contains(a)]
    failures = []
    count = 0
    for amb in ambients:
        for lat in enumerate_subobject_lattices(amb, entry_bound):
            count += 1
            sub, _ = subobject_from_lattice(amb, lat, check=False)
            if not rc.contains(sub):
                failures.append(
                    _certificate(
                        "subobject-closure",
                        ambient=amb,
                        subobject=sub,
                        sub_iso_class={
                            "free_rank": sub.free_rank,
                            "factors": list(sub.torsion_factors),
                        },
                        lattice=lat,
                    )
                )
    return CheckResult(
        check=f"subobject-closed:{rc.predicate.name}",
        samples=count,
        passes=count - len(failures),
        failures=failures,
        bounds=dict(bounds),
        seed=seed,
    )
