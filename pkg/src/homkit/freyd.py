"""Finitely presented functors on the subcategory: objects, hom groups,
kernels and cokernels, effaceability, projective dimension, and the
torsion pair (effaceables, pd <= 1).

An object is carried by a presentation morphism f: A -> B of the
subcategory and stands for the cokernel of the represented-functor map.
Morphisms are target-level representatives b: B -> D such that b f
factors through the target presentation, modulo those that factor as
g h; both conditions are decided by exact solvers, so hom groups come
out as presented abelian groups with morphism generators.
"""

from __future__ import annotations

from dataclasses import dataclass

from .intlin import Matrix, lattice_basis, lattice_eq
from .abcat import (
    HomGroup,
    PresentedMorphism,
    PresentedObject,
    direct_sum,
    factor_through_mono,
    hom_group,
    image_lattice,
    into_pullback,
    is_epi,
    is_mono,
    kernel,
    cokernel,
    lift_through,
    pullback,
    quotient_by_lattice,
    section,
    solve_matrix,
    subobject_from_lattice,
)
from .regular import RegularCategory


class FreydObject:
    """Functor presented by a morphism of the subcategory."""

    def __init__(self, rc: RegularCategory, presentation: PresentedMorphism):
        rc.require(presentation.source, presentation.target)
        self.rc = rc
        self.presentation = presentation

    @staticmethod
    def represented(rc, obj: PresentedObject):
        """Image of an object under the embedding: coker of 0 -> obj."""
        return FreydObject(rc, PresentedMorphism.zero(PresentedObject.zero(), obj))

    def is_zero_object(self) -> bool:
        """Zero exactly when the presentation is a split epi."""
        return section(self.presentation) is not None

    def to_json(self):
        return {"presentation": self.presentation.to_json()}

    def __repr__(self):
        p = self.presentation
        return f"<Freyd coker Y({p.source!r} -> {p.target!r})>"


class FreydMorphism:
    """Representative square between presentations, modulo liftable ones."""

    def __init__(self, source: FreydObject, target: FreydObject, rep: PresentedMorphism, witness=None):
        f, g = source.presentation, target.presentation
        if rep.source != f.target or rep.target != g.target:
            raise ValueError("representative must map presentation targets")
        self.source = source
        self.target = target
        self.rep = rep
        if witness is None:
            witness = lift_through(g, rep @ f)
            if witness is None:
                raise ValueError("representative does not define a morphism")
        self.witness = witness

    @staticmethod
    def identity(obj: FreydObject):
        return FreydMorphism(
            obj,
            obj,
            PresentedMorphism.identity(obj.presentation.target),
            PresentedMorphism.identity(obj.presentation.source),
        )

    @staticmethod
    def zero(source, target):
        return FreydMorphism(
            source,
            target,
            PresentedMorphism.zero(source.presentation.target, target.presentation.target),
            PresentedMorphism.zero(source.presentation.source, target.presentation.source),
        )

    def __matmul__(self, other: "FreydMorphism") -> "FreydMorphism":
        return FreydMorphism(
            other.source, self.target, self.rep @ other.rep, self.witness @ other.witness
        )

    def plus(self, other):
        return FreydMorphism(
            self.source, self.target, self.rep.plus(other.rep), None
        )

    def equals(self, other: "FreydMorphism") -> bool:
        """Representatives agree modulo maps factoring through the target
        presentation."""
        diff = self.rep.matrix - other.rep.matrix
        probe = PresentedMorphism(
            self.source.presentation.target, self.target.presentation.target, diff
        )
        return lift_through(self.target.presentation, probe) is not None

    def is_zero_class(self) -> bool:
        return lift_through(self.target.presentation, self.rep) is not None


class FreydHom:
    """Hom group in the functor category with FreydMorphism generators."""

    def __init__(self, source, target, group, basis, ambient_hom, sub_incl):
        self.source = source
        self.target = target
        self.group = group
        self.basis = basis
        self._ambient_hom = ambient_hom
        self._sub_incl = sub_incl

    def coords(self, eta: FreydMorphism):
        amb = self._ambient_hom.coords(eta.rep)
        col = Matrix.column(list(amb), ring=self._ambient_hom.group.ring)
        sol = solve_matrix(
            self._sub_incl.matrix.hstack(self._ambient_hom.group.relations), col
        )
        if sol is None:
            raise ValueError("morphism representative escapes the hom lattice")
        return tuple(sol.entries[i][0] for i in range(self.group.generators))

    def from_coords(self, coords) -> FreydMorphism:
        rep = None
        for c, b in zip(coords, self.basis):
            piece = b.rep.scale(c)
            rep = piece if rep is None else rep.plus(piece)
        if rep is None:
            return FreydMorphism.zero(self.source, self.target)
        return FreydMorphism(self.source, self.target, rep)

    def elements(self, coeff_bound=1):
        """All coordinate tuples within the bound (torsion-aware)."""
        ranges = []
        orders = _generator_orders(self.group)
        for o in orders:
            if o is None:
                ranges.append(range(-coeff_bound, coeff_bound + 1))
            else:
                ranges.append(range(0, min(o, 2 * coeff_bound + 2)))
        import itertools

        return [tuple(c) for c in itertools.product(*ranges)]


def _generator_orders(group: PresentedObject):
    """Order of each generator image, None for infinite; crude bound."""
    out = []
    for i in range(group.generators):
        col = [0] * group.generators
        order = None
        for d in range(1, 13):
            col[i] = d
            if group.element_in_relations(col):
                order = d
                break
        out.append(order)
    return out


def freyd_hom(fobj: FreydObject, gobj: FreydObject) -> FreydHom:
    """Hom(coker Y(f), coker Y(g)) as a presented group.

    Computed inside ambient hom groups: representatives b with b f in
    g Hom(A, C), modulo g Hom(B, D').  The subgroup and the quotient are
    ordinary presented-object computations.
    """
    f, g = fobj.presentation, gobj.presentation
    a_obj, b_obj = f.source, f.target
    c_obj, d_obj = g.source, g.target
    h_bd = hom_group(b_obj, d_obj)
    h_ad = hom_group(a_obj, d_obj)
    h_ac = hom_group(a_obj, c_obj)
    h_bc = hom_group(b_obj, c_obj)
    phi = _induced(h_bd, h_ad, lambda b: b @ f)
    psi = _induced(h_ac, h_ad, lambda a: g @ a)
    theta = _induced(h_bc, h_bd, lambda h: g @ h)
    quot, qproj = cokernel(psi)
    nsub, n_incl = kernel(qproj @ phi)
    theta_in = factor_through_mono(n_incl, theta)
    group, _ = quotient_by_lattice(nsub, theta_in.matrix)
    basis = []
    for j in range(group.generators):
        coords = tuple(
            n_incl.matrix.entries[i][j] for i in range(h_bd.group.generators)
        )
        rep = h_bd.from_coords(coords)
        basis.append(FreydMorphism(fobj, gobj, rep))
    return FreydHom(fobj, gobj, group, basis, h_bd, n_incl)


def _induced(src: HomGroup, dst: HomGroup, transform) -> PresentedMorphism:
    mat = src.induced_map(dst, transform)
    return PresentedMorphism(src.group, dst.group, mat)


@dataclass
class ChaseResult:
    """Five-term exact data induced by a commuting square.

    Sequence: kernel_obj >-> f_obj ->> image_obj >-> g_obj ->> cokernel_obj.
    """

    kernel_obj: FreydObject
    f_obj: FreydObject
    image_obj: FreydObject
    g_obj: FreydObject
    cokernel_obj: FreydObject
    into_f: FreydMorphism
    onto_image: FreydMorphism
    into_g: FreydMorphism
    onto_cokernel: FreydMorphism
    eta: FreydMorphism


def famous_diagram_chase(rc, f, g, beta, alpha) -> ChaseResult:
    """Epi-mono factorization data for the induced map of cokernels.

    Inputs form a commuting square: f: A -> B, g: C -> D, beta: A -> C,
    alpha: B -> D with g beta = alpha f.  The pullback of alpha along g
    gives presentations for the kernel, image and cokernel of
    eta: coker Y(f) -> coker Y(g).
    """
    if not (g @ beta).equals(alpha @ f):
        raise ValueError("square does not commute")
    a_obj = f.source
    kerg, k = kernel(g)
    e_obj, gprime, betaprime = pullback(alpha, g)
    beta2 = into_pullback(gprime, betaprime, f, beta)
    kprime = into_pullback(
        gprime, betaprime, PresentedMorphism.zero(kerg, f.target), k
    )
    _, _, _, p1, p2 = direct_sum(kerg, a_obj)
    left_pres = (kprime @ p1).plus(beta2 @ p2)
    _, ic, _, pc, pb = direct_sum(g.source, f.target)
    right_pres = (g @ pc).plus(alpha @ pb)

    f_obj = FreydObject(rc, f)
    g_obj = FreydObject(rc, g)
    kernel_obj = FreydObject(rc, left_pres)
    image_obj = FreydObject(rc, gprime)
    cokernel_obj = FreydObject(rc, right_pres)

    into_f = FreydMorphism(kernel_obj, f_obj, gprime, p2)
    onto_image = FreydMorphism(
        f_obj, image_obj, PresentedMorphism.identity(f.target), beta2
    )
    into_g = FreydMorphism(image_obj, g_obj, alpha, betaprime)
    onto_cokernel = FreydMorphism(
        g_obj, cokernel_obj, PresentedMorphism.identity(g.target), ic
    )
    eta = FreydMorphism(f_obj, g_obj, alpha, beta)
    return ChaseResult(
        kernel_obj,
        f_obj,
        image_obj,
        g_obj,
        cokernel_obj,
        into_f,
        onto_image,
        into_g,
        onto_cokernel,
        eta,
    )


def freyd_kernel(eta: FreydMorphism):
    """Kernel in the functor category, via the diagram chase."""
    chase = famous_diagram_chase(
        eta.source.rc,
        eta.source.presentation,
        eta.target.presentation,
        eta.witness,
        eta.rep,
    )
    return chase.kernel_obj, chase.into_f


def freyd_cokernel(eta: FreydMorphism):
    """Cokernel presented by [g rep]: C + B -> D."""
    chase = famous_diagram_chase(
        eta.source.rc,
        eta.source.presentation,
        eta.target.presentation,
        eta.witness,
        eta.rep,
    )
    return chase.cokernel_obj, chase.onto_cokernel


def freyd_is_mono(eta) -> bool:
    ker_obj, _ = freyd_kernel(eta)
    return ker_obj.is_zero_object()


def freyd_is_epi(eta) -> bool:
    coker_obj, _ = freyd_cokernel(eta)
    return coker_obj.is_zero_object()


def is_effaceable(fobj: FreydObject) -> bool:
    """Effaceable exactly when the presentation is ambient-epi (a deflation)."""
    return is_epi(fobj.presentation)


def has_pd_leq_1(fobj: FreydObject) -> bool:
    """pd <= 1 exactly when the deflation part of the presentation splits."""
    p, _ = fobj.rc.deflation_mono_factorization(fobj.presentation)
    return section(p) is not None


@dataclass
class TorsionSplit:
    torsion: FreydObject
    into: FreydMorphism
    whole: FreydObject
    onto: FreydMorphism
    free_part: FreydObject


def torsion_decomposition(fobj: FreydObject, check=True) -> TorsionSplit:
    """Exact sequence 0 -> T -> F -> F/T -> 0 from the deflation-mono
    factorization of the presentation; T effaceable, F/T of pd <= 1."""
    rc = fobj.rc
    f = fobj.presentation
    p, m = rc.deflation_mono_factorization(f)
    torsion = FreydObject(rc, p)
    free_part = FreydObject(rc, m)
    into = FreydMorphism(torsion, fobj, m, PresentedMorphism.identity(f.source))
    onto = FreydMorphism(fobj, free_part, PresentedMorphism.identity(f.target), p)
    if check:
        verify_short_exact(into, onto)
    return TorsionSplit(torsion, into, fobj, onto, free_part)


class ExactnessError(AssertionError):
    pass


def verify_short_exact(into: FreydMorphism, onto: FreydMorphism):
    """Decide exactness of 0 -> T -> F -> Q -> 0 in the functor category.

    Monomorphy and the composite vanishing are direct checks; exactness
    in the middle factors T through the kernel of the quotient map and
    demands the comparison be epi.
    """
    if not (onto @ into).is_zero_class():
        raise ExactnessError("composite of torsion sequence is nonzero")
    if not freyd_is_mono(into):
        raise ExactnessError("torsion inclusion is not mono")
    if not freyd_is_epi(onto):
        raise ExactnessError("torsion-free projection is not epi")
    ker_obj, incl = freyd_kernel(onto)
    t = solve_postcompose(incl, into)
    if t is None:
        raise ExactnessError("torsion part does not factor through the kernel")
    if not freyd_is_epi(t):
        raise ExactnessError("torsion part is smaller than the kernel")


def solve_postcompose(mu: FreydMorphism, target: FreydMorphism):
    """xi with mu xi = target, through the hom groups; None if impossible."""
    h_src = freyd_hom(target.source, mu.source)
    h_dst = freyd_hom(target.source, mu.target)
    mat = []
    for b in h_src.basis:
        mat.append(list(h_dst.coords(mu @ b)))
    m = (
        Matrix.from_cols(mat, h_dst.group.generators)
        if mat
        else Matrix.zeros(h_dst.group.generators, 0)
    )
    rhs = Matrix.column(list(h_dst.coords(target)))
    sol = solve_matrix(m.hstack(h_dst.group.relations), rhs)
    if sol is None:
        return None
    coords = tuple(sol.entries[i][0] for i in range(m.cols))
    return h_src.from_coords(coords)


@dataclass
class WeakInflationResult:
    chain: list | None
    exhausted: bool

    @property
    def found(self):
        return self.chain is not None


def is_weak_inflation(rc: RegularCategory, f: PresentedMorphism, max_depth=8) -> WeakInflationResult:
    """Greedy coreflection chain search for mono f.

    Walks down from the top: the last link of any chain must contain the
    coreflection closure of the image, so close, restrict, recurse.  A
    closure equal to the full lattice proves no chain exists; hitting
    the depth bound is reported as exhaustion, not as a verdict.
    """
    if not is_mono(f):
        raise ValueError("weak inflations are monomorphisms")

    def helper(mono, depth):
        if rc.is_inflation(mono):
            return [mono], False
        if depth <= 0:
            return None, True
        y = mono.target
        lat = image_lattice(mono)
        closed = rc.coreflect(y, lat)
        if lattice_eq(closed, lat):
            return None, True
        if closed == Matrix.identity(y.generators) and not lattice_eq(
            lat, Matrix.identity(y.generators)
        ):
            # every admissible enlargement is all of Y; no chain can exist
            return None, False
        mid, incl = subobject_from_lattice(y, closed, check=False)
        u = factor_through_mono(incl, mono)
        rest, exhausted = helper(u, depth - 1)
        if rest is None:
            return None, exhausted
        return rest + [incl], False

    chain, exhausted = helper(f, max_depth)
    return WeakInflationResult(chain, exhausted)


@dataclass
class MembershipResult:
    value: bool
    witness: object = None
    exhausted: bool = False


MEMBERSHIP_CLASSES = ("mod1", "mod_ad", "mod_inf", "mod1_ad", "mod1_inf")


def membership(fobj: FreydObject, cls: str, chain_depth=8) -> MembershipResult:
    """Decide presentation-shape classes from the canonical factorization.

    The deflation-mono factorization of the carried presentation is
    unique up to isomorphism and the mono part is invariant (up to
    homotopy equivalence of two-term complexes) across presentations of
    the same functor, so testing the canonical one decides the class.
    """
    rc = fobj.rc
    p, m = rc.deflation_mono_factorization(fobj.presentation)
    if cls == "mod1":
        return MembershipResult(section(p) is not None, witness=m)
    if cls == "mod_ad":
        return MembershipResult(rc.is_inflation(m), witness=m)
    if cls == "mod_inf":
        res = is_weak_inflation(rc, m, max_depth=chain_depth)
        return MembershipResult(res.found, witness=res.chain, exhausted=res.exhausted)
    if cls == "mod1_ad":
        return MembershipResult(
            section(p) is not None and rc.is_inflation(m), witness=m
        )
    if cls == "mod1_inf":
        res = is_weak_inflation(rc, m, max_depth=chain_depth)
        return MembershipResult(
            section(p) is not None and res.found,
            witness=res.chain,
            exhausted=res.exhausted,
        )
    raise KeyError(f"unknown class {cls!r}; expected one of {MEMBERSHIP_CLASSES}")


def freyd_iso_search(fobj: FreydObject, gobj: FreydObject, coeff_bound=1):
    """Mutually inverse morphism pair, by bounded enumeration; None if
    not found within the bound (not a proof of non-isomorphism)."""
    hfg = freyd_hom(fobj, gobj)
    hgf = freyd_hom(gobj, fobj)
    if hfg.group.generators > 4 or hgf.group.generators > 4:
        return None
    id_f = FreydMorphism.identity(fobj)
    id_g = FreydMorphism.identity(gobj)
    for cf in hfg.elements(coeff_bound):
        eta = hfg.from_coords(cf)
        for cg in hgf.elements(coeff_bound):
            xi = hgf.from_coords(cg)
            if (xi @ eta).equals(id_f) and (eta @ xi).equals(id_g):
                return eta, xi
    return None
