"""Computable ambient abelian categories.

Objects are presentations: an object with g generators and relations
matrix R (g rows) stands for Z^g / colspan(R), or the analogous quotient
of a vector space over QQ / GF(p).  Morphisms are generator-level
matrices carrying a well-definedness witness; every constructor checks
the witness, so equality and all universal properties below are decided,
never assumed.

Subobjects of an object X are handled as lattices: matrices whose column
span contains colspan(R_X) and sits inside the generator lattice of X.
"""

from __future__ import annotations

from functools import cached_property

from .intlin import (
    Matrix,
    ShapeError,
    ZZ,
    invariant_factors,
    kernel_basis,
    lattice_basis,
    lattice_leq,
    rank,
    solve_matrix,
    vec,
    unvec,
)


class IllDefinedMorphism(ValueError):
    """Generator matrix does not descend to the presented quotients."""


class PresentedObject:
    """Quotient of a free module by the column span of a relations matrix."""

    def __init__(self, generators: int, relations: Matrix, ring=ZZ):
        if relations.ring != ring:
            raise ShapeError("relations ring disagrees with object ring")
        if relations.rows != generators:
            raise ShapeError(
                f"relations must have {generators} rows, got {relations.rows}"
            )
        self.ring = ring
        self.generators = generators
        self.relations = relations

    @staticmethod
    def free(n, ring=ZZ):
        return PresentedObject(n, Matrix.zeros(n, 0, ring), ring)

    @staticmethod
    def zero(ring=ZZ):
        return PresentedObject.free(0, ring)

    @staticmethod
    def cyclic(d, ring=ZZ):
        return PresentedObject(1, Matrix.from_rows([[d]], ring=ring), ring)

    @staticmethod
    def from_factors(free_rank, factors, ring=ZZ):
        """Direct sum of a free part and cyclic parts Z/d for d in factors."""
        g = free_rank + len(factors)
        cols = []
        for i, d in enumerate(factors):
            col = [0] * g
            col[i] = d
            cols.append(col)
        rel = Matrix.from_cols(cols, g, ring=ring) if cols else Matrix.zeros(g, 0, ring)
        return PresentedObject(g, rel, ring)

    @cached_property
    def relation_basis(self) -> Matrix:
        return lattice_basis(self.relations)

    @cached_property
    def _smith_diagonal(self):
        if self.ring != ZZ:
            raise ShapeError("Smith data is integer-only")
        return invariant_factors(self.relation_basis)

    @cached_property
    def torsion_factors(self):
        """Invariant factors > 1, in divisibility order."""
        if self.ring != ZZ:
            return ()
        return tuple(d for d in self._smith_diagonal if d != 1)

    @cached_property
    def free_rank(self):
        if self.ring != ZZ:
            return self.generators - rank(self.relations)
        return self.generators - len(self._smith_diagonal)

    def iso_class(self):
        return (self.free_rank, self.torsion_factors)

    @cached_property
    def is_zero(self):
        return self.free_rank == 0 and not self.torsion_factors

    def full_lattice(self) -> Matrix:
        return Matrix.identity(self.generators, self.ring)

    def zero_lattice(self) -> Matrix:
        return self.relation_basis

    def element_in_relations(self, v) -> bool:
        return solve_matrix(self.relations, Matrix.column(list(v), ring=self.ring)) is not None

    def to_json(self):
        data = {"generators": self.generators, "relations": self.relations.to_lists()}
        if self.ring != ZZ:
            data["ring"] = repr(self.ring)
        return data

    @staticmethod
    def from_json(data, ring=ZZ):
        g = data["generators"]
        rows = data.get("relations") or []
        if rows:
            rel = Matrix.from_rows(rows, ring=ring)
        else:
            rel = Matrix.zeros(g, 0, ring)
        return PresentedObject(g, rel, ring)

    def __eq__(self, other):
        if not isinstance(other, PresentedObject):
            return NotImplemented
        return (
            self.ring == other.ring
            and self.generators == other.generators
            and self.relations == other.relations
        )

    def __hash__(self):
        return hash((self.ring, self.generators, self.relations))

    def __repr__(self):
        free, tors = (self.free_rank, self.torsion_factors) if self.ring == ZZ else (
            self.free_rank,
            (),
        )
        parts = [f"Z^{free}"] if free else []
        parts += [f"Z/{d}" for d in tors]
        return f"<{' + '.join(parts) or '0'} on {self.generators} gens>"


class PresentedMorphism:
    """Generator-level matrix between presented objects, with witness."""

    def __init__(self, source, target, matrix: Matrix, witness: Matrix | None = None):
        if matrix.rows != target.generators or matrix.cols != source.generators:
            raise ShapeError(
                f"matrix must be {target.generators}x{source.generators}, "
                f"got {matrix.rows}x{matrix.cols}"
            )
        if matrix.ring != source.ring:
            raise ShapeError("morphism ring disagrees with objects")
        self.source = source
        self.target = target
        self.matrix = matrix
        if witness is None:
            witness = solve_matrix(target.relations, matrix * source.relations)
            if witness is None:
                raise IllDefinedMorphism(
                    "generator matrix does not send relations into relations"
                )
        else:
            if matrix * source.relations != target.relations * witness:
                raise IllDefinedMorphism("supplied witness does not verify")
        self.witness = witness

    @staticmethod
    def identity(obj):
        n = obj.generators
        return PresentedMorphism(
            obj,
            obj,
            Matrix.identity(n, obj.ring),
            Matrix.identity(obj.relations.cols, obj.ring),
        )

    @staticmethod
    def zero(source, target):
        return PresentedMorphism(
            source,
            target,
            Matrix.zeros(target.generators, source.generators, source.ring),
            Matrix.zeros(target.relations.cols, source.relations.cols, source.ring),
        )

    def __matmul__(self, other):
        """Composition self after other."""
        if other.target is not self.source and other.target != self.source:
            raise ShapeError("composition endpoints do not match")
        return PresentedMorphism(
            other.source,
            self.target,
            self.matrix * other.matrix,
            self.witness * other.witness,
        )

    def equals(self, other) -> bool:
        """Decidable equality of morphism classes."""
        if self.source != other.source or self.target != other.target:
            return False
        diff = self.matrix - other.matrix
        if diff.is_zero():
            return True
        return solve_matrix(self.target.relations, diff) is not None

    def is_zero_map(self) -> bool:
        return self.equals(PresentedMorphism.zero(self.source, self.target))

    def plus(self, other: "PresentedMorphism") -> "PresentedMorphism":
        return PresentedMorphism(
            self.source,
            self.target,
            self.matrix + other.matrix,
            self.witness + other.witness,
        )

    def scale(self, c) -> "PresentedMorphism":
        return PresentedMorphism(
            self.source, self.target, self.matrix.scale(c), self.witness.scale(c)
        )

    def to_json(self):
        return {
            "source": self.source.to_json(),
            "target": self.target.to_json(),
            "matrix": self.matrix.to_lists(),
        }

    def __repr__(self):
        return f"<morphism {self.source!r} -> {self.target!r}: {self.matrix.to_lists()}>"


def direct_sum(x: PresentedObject, y: PresentedObject):
    """X + Y with the four structural maps (i1, i2, p1, p2)."""
    ring = x.ring
    gx, gy = x.generators, y.generators
    rel = Matrix.zeros(gx, y.relations.cols, ring)
    top = x.relations.hstack(rel)
    bot = Matrix.zeros(gy, x.relations.cols, ring).hstack(y.relations)
    xy = PresentedObject(gx + gy, top.vstack(bot), ring)
    i1 = PresentedMorphism(x, xy, Matrix.identity(gx, ring).vstack(Matrix.zeros(gy, gx, ring)))
    i2 = PresentedMorphism(y, xy, Matrix.zeros(gx, gy, ring).vstack(Matrix.identity(gy, ring)))
    p1 = PresentedMorphism(xy, x, Matrix.identity(gx, ring).hstack(Matrix.zeros(gx, gy, ring)))
    p2 = PresentedMorphism(xy, y, Matrix.zeros(gy, gx, ring).hstack(Matrix.identity(gy, ring)))
    return xy, i1, i2, p1, p2


def morphism_direct_sum(f: PresentedMorphism, g: PresentedMorphism):
    _, _, _, ps1, ps2 = direct_sum(f.source, g.source)
    _, it1, it2, _, _ = direct_sum(f.target, g.target)
    return (it1 @ f @ ps1).plus(it2 @ g @ ps2)


def kernel(f: PresentedMorphism):
    """Categorical kernel: (K, k) with k mono, f k = 0, universal.

    The kernel lattice is the preimage of colspan(relations of target)
    under the generator matrix; its basis presents K on fresh generators.
    """
    x, y = f.source, f.target
    stacked = f.matrix.hstack(y.relations)
    full = kernel_basis(stacked)
    lat = lattice_basis(full.take_rows(0, x.generators))
    return subobject_from_lattice(x, lat, check=False)


def subobject_from_lattice(x: PresentedObject, lat: Matrix, check=True):
    """Subobject (L + relations)/relations of X as (S, inclusion)."""
    if check:
        lat = lattice_basis(lat.hstack(x.relations))
    rel_full = kernel_basis(lat.hstack(x.relations))
    rel = lattice_basis(rel_full.take_rows(0, lat.cols))
    s = PresentedObject(lat.cols, rel, x.ring)
    incl = PresentedMorphism(s, x, lat)
    return s, incl


def quotient_by_lattice(x: PresentedObject, lat: Matrix):
    """Quotient of X by the subobject spanned by lat, with projection."""
    q = PresentedObject(x.generators, lattice_basis(lat.hstack(x.relations)), x.ring)
    proj = PresentedMorphism(x, q, Matrix.identity(x.generators, x.ring))
    return q, proj


def cokernel(f: PresentedMorphism):
    return quotient_by_lattice(f.target, f.matrix)


def image_lattice(f: PresentedMorphism) -> Matrix:
    """Lattice in the target spanned by the image subobject."""
    return lattice_basis(f.matrix.hstack(f.target.relations))


def kernel_lattice(f: PresentedMorphism) -> Matrix:
    """Lattice in the source whose classes die under f."""
    stacked = f.matrix.hstack(f.target.relations)
    full = kernel_basis(stacked)
    return lattice_basis(
        full.take_rows(0, f.source.generators).hstack(f.source.relations)
    )


def image(f: PresentedMorphism):
    """Epi-mono factorization through the image: (I, e: X->>I, m: I>->Y)."""
    x, y = f.source, f.target
    i_obj, m = subobject_from_lattice(y, image_lattice(f), check=False)
    e_matrix = solve_matrix(m.matrix, f.matrix)
    e = PresentedMorphism(x, i_obj, e_matrix)
    return i_obj, e, m


def is_mono(f: PresentedMorphism) -> bool:
    return lattice_leq(kernel_lattice(f), f.source.zero_lattice())


def is_epi(f: PresentedMorphism) -> bool:
    lat = image_lattice(f)
    if f.target.ring != ZZ:
        return rank(lat) == f.target.generators
    return lat == Matrix.identity(f.target.generators)


def pullback(f: PresentedMorphism, g: PresentedMorphism):
    """Pullback of the cospan f: X -> Z <- Y :g, with projections."""
    if f.target != g.target:
        raise ShapeError("pullback needs a common codomain")
    x, y = f.source, g.source
    xy, _, _, p1, p2 = direct_sum(x, y)
    diff = PresentedMorphism(
        xy, f.target, f.matrix.hstack(-g.matrix)
    )
    p, incl = kernel(diff)
    return p, p1 @ incl, p2 @ incl


def pushout(f: PresentedMorphism, g: PresentedMorphism):
    """Pushout of the span Y <- X -> Z, with injections."""
    if f.source != g.source:
        raise ShapeError("pushout needs a common domain")
    y, z = f.target, g.target
    yz, i1, i2, _, _ = direct_sum(y, z)
    mixed = (i1 @ f).plus((i2 @ g).scale(-1))
    p, proj = cokernel(mixed)
    return p, proj @ i1, proj @ i2


def solve_matrix_system(unknowns, equations, ring=ZZ):
    """Solve coupled linear matrix equations exactly.

    unknowns: ordered dict-like {name: (rows, cols)}.
    equations: list of (terms, rhs) where terms is a list of
    (name, A, B) triples, each contributing A * X_name * B, and rhs is a
    Matrix.  Returns {name: Matrix} or None.  Everything is vectorized
    column-major so each term becomes kron(B^T, A).
    """
    names = list(unknowns)
    sizes = {n: unknowns[n][0] * unknowns[n][1] for n in names}
    row_blocks = []
    rhs_blocks = []
    for terms, rhs in equations:
        coeff = {}
        for name, a, b in terms:
            block = b.transpose().kron(a)
            coeff[name] = coeff.get(name, None)
            coeff[name] = block if coeff[name] is None else coeff[name] + block
        eq_rows = rhs.rows * rhs.cols
        blocks = []
        for n in names:
            if n in coeff:
                blocks.append(coeff[n])
            else:
                blocks.append(Matrix.zeros(eq_rows, sizes[n], ring))
        row = blocks[0]
        for b in blocks[1:]:
            row = row.hstack(b)
        row_blocks.append(row)
        rhs_blocks.append(vec(rhs))
    system = row_blocks[0]
    for r in row_blocks[1:]:
        system = system.vstack(r)
    rhs_col = rhs_blocks[0]
    for r in rhs_blocks[1:]:
        rhs_col = rhs_col.vstack(r)
    sol = solve_matrix(system, rhs_col)
    if sol is None:
        return None
    out = {}
    offset = 0
    for n in names:
        r, c = unknowns[n]
        out[n] = unvec(sol.take_rows(offset, offset + r * c), r, c)
        offset += r * c
    return out


def section(f: PresentedMorphism) -> PresentedMorphism | None:
    """A right inverse s with f s = id, when one exists."""
    x, y = f.source, f.target
    ring = x.ring
    sol = solve_matrix_system(
        {
            "s": (x.generators, y.generators),
            "v": (y.relations.cols, y.generators),
            "w": (x.relations.cols, y.relations.cols),
        },
        [
            (
                [
                    ("s", f.matrix, Matrix.identity(y.generators, ring)),
                    ("v", y.relations, Matrix.identity(y.generators, ring)),
                ],
                Matrix.identity(y.generators, ring),
            ),
            (
                [
                    ("s", Matrix.identity(x.generators, ring), y.relations),
                    ("w", -x.relations, Matrix.identity(y.relations.cols, ring)),
                ],
                Matrix.zeros(x.generators, y.relations.cols, ring),
            ),
        ],
        ring,
    )
    if sol is None:
        return None
    return PresentedMorphism(y, x, sol["s"])


def retraction(f: PresentedMorphism) -> PresentedMorphism | None:
    """A left inverse r with r f = id, when one exists."""
    x, y = f.source, f.target
    ring = x.ring
    sol = solve_matrix_system(
        {
            "r": (x.generators, y.generators),
            "v": (x.relations.cols, x.generators),
            "w": (x.relations.cols, y.relations.cols),
        },
        [
            (
                [
                    ("r", Matrix.identity(x.generators, ring), f.matrix),
                    ("v", x.relations, Matrix.identity(x.generators, ring)),
                ],
                Matrix.identity(x.generators, ring),
            ),
            (
                [
                    ("r", Matrix.identity(x.generators, ring), y.relations),
                    ("w", -x.relations, Matrix.identity(y.relations.cols, ring)),
                ],
                Matrix.zeros(x.generators, y.relations.cols, ring),
            ),
        ],
        ring,
    )
    if sol is None:
        return None
    return PresentedMorphism(y, x, sol["r"])


def factor_through_mono(m: PresentedMorphism, f: PresentedMorphism):
    """u with m u = f, when f lands inside the mono m; None otherwise."""
    if f.target != m.target:
        raise ShapeError("factor_through_mono needs matching codomains")
    ring = f.source.ring
    t, s = f.source, m.source
    sol = solve_matrix_system(
        {
            "u": (s.generators, t.generators),
            "v": (m.target.relations.cols, t.generators),
            "w": (s.relations.cols, t.relations.cols),
        },
        [
            (
                [
                    ("u", m.matrix, Matrix.identity(t.generators, ring)),
                    ("v", m.target.relations, Matrix.identity(t.generators, ring)),
                ],
                f.matrix,
            ),
            (
                [
                    ("u", Matrix.identity(s.generators, ring), t.relations),
                    ("w", -s.relations, Matrix.identity(t.relations.cols, ring)),
                ],
                Matrix.zeros(s.generators, t.relations.cols, ring),
            ),
        ],
        ring,
    )
    if sol is None:
        return None
    return PresentedMorphism(t, s, sol["u"])


def factor_through_epi(e: PresentedMorphism, f: PresentedMorphism):
    """u with u e = f, when f kills the kernel of the epi e; None otherwise."""
    if f.source != e.source:
        raise ShapeError("factor_through_epi needs matching domains")
    ring = f.source.ring
    q, t = e.target, f.target
    sol = solve_matrix_system(
        {
            "u": (t.generators, q.generators),
            "v": (t.relations.cols, e.source.generators),
            "w": (t.relations.cols, q.relations.cols),
        },
        [
            (
                [
                    ("u", Matrix.identity(t.generators, ring), e.matrix),
                    ("v", t.relations, Matrix.identity(e.source.generators, ring)),
                ],
                f.matrix,
            ),
            (
                [
                    ("u", Matrix.identity(t.generators, ring), q.relations),
                    ("w", -t.relations, Matrix.identity(q.relations.cols, ring)),
                ],
                Matrix.zeros(t.generators, q.relations.cols, ring),
            ),
        ],
        ring,
    )
    if sol is None:
        return None
    return PresentedMorphism(q, t, sol["u"])


def lift_through(g: PresentedMorphism, h: PresentedMorphism):
    """a with g a = h, for arbitrary g (not necessarily mono); None if impossible."""
    if g.target != h.target:
        raise ShapeError("lift_through needs matching codomains")
    ring = g.source.ring
    t, s = h.source, g.source
    sol = solve_matrix_system(
        {
            "a": (s.generators, t.generators),
            "v": (g.target.relations.cols, t.generators),
            "w": (s.relations.cols, t.relations.cols),
        },
        [
            (
                [
                    ("a", g.matrix, Matrix.identity(t.generators, ring)),
                    ("v", g.target.relations, Matrix.identity(t.generators, ring)),
                ],
                h.matrix,
            ),
            (
                [
                    ("a", Matrix.identity(s.generators, ring), t.relations),
                    ("w", -s.relations, Matrix.identity(t.relations.cols, ring)),
                ],
                Matrix.zeros(s.generators, t.relations.cols, ring),
            ),
        ],
        ring,
    )
    if sol is None:
        return None
    return PresentedMorphism(t, s, sol["a"])


def into_pullback(p1, p2, t1, t2):
    """Universal map u into a pullback: p1 u = t1 and p2 u = t2; None if none.

    p1, p2 are the pullback projections, t1, t2 a commuting test cone
    with common domain.
    """
    if t1.source != t2.source or p1.source != p2.source:
        raise ShapeError("into_pullback expects a cone and a corner")
    ring = t1.source.ring
    t, p = t1.source, p1.source
    sol = solve_matrix_system(
        {
            "u": (p.generators, t.generators),
            "v1": (p1.target.relations.cols, t.generators),
            "v2": (p2.target.relations.cols, t.generators),
            "w": (p.relations.cols, t.relations.cols),
        },
        [
            (
                [
                    ("u", p1.matrix, Matrix.identity(t.generators, ring)),
                    ("v1", p1.target.relations, Matrix.identity(t.generators, ring)),
                ],
                t1.matrix,
            ),
            (
                [
                    ("u", p2.matrix, Matrix.identity(t.generators, ring)),
                    ("v2", p2.target.relations, Matrix.identity(t.generators, ring)),
                ],
                t2.matrix,
            ),
            (
                [
                    ("u", Matrix.identity(p.generators, ring), t.relations),
                    ("w", -p.relations, Matrix.identity(t.relations.cols, ring)),
                ],
                Matrix.zeros(p.generators, t.relations.cols, ring),
            ),
        ],
        ring,
    )
    if sol is None:
        return None
    return PresentedMorphism(t, p, sol["u"])


def is_iso(f: PresentedMorphism) -> bool:
    return is_mono(f) and is_epi(f)


def inverse(f: PresentedMorphism) -> PresentedMorphism | None:
    """Two-sided inverse when f is an isomorphism, else None."""
    s = section(f)
    if s is None:
        return None
    if (s @ f).equals(PresentedMorphism.identity(f.source)):
        return s
    r = retraction(f)
    if r is None:
        return None
    if (f @ r).equals(PresentedMorphism.identity(f.target)):
        return r
    return None


class HomGroup:
    """Hom(X, Y) as a presented object with generator morphisms."""

    def __init__(self, source, target, group, basis, basis_matrix, trivial):
        self.source = source
        self.target = target
        self.group = group
        self.basis = basis
        self._basis_matrix = basis_matrix
        self._trivial = trivial

    def coords(self, f: PresentedMorphism):
        """Coordinates of a morphism in the generator basis."""
        if self._basis_matrix.cols == 0:
            return ()
        target = vec(f.matrix)
        sol = solve_matrix(self._basis_matrix.hstack(self._trivial), target)
        if sol is None:
            raise IllDefinedMorphism("morphism is not in the hom lattice")
        return tuple(
            sol.entries[i][0] for i in range(self._basis_matrix.cols)
        )

    def from_coords(self, coords) -> PresentedMorphism:
        gx, gy = self.source.generators, self.target.generators
        acc = Matrix.zeros(gy, gx, self.source.ring)
        for c, b in zip(coords, self.basis):
            if c:
                acc = acc + b.matrix.scale(c)
        return PresentedMorphism(self.source, self.target, acc)

    def is_zero_group(self):
        return self.group.is_zero

    def induced_map(self, other: "HomGroup", transform) -> Matrix:
        """Matrix of a map Hom(X,Y) -> other on generator coordinates.

        transform sends a basis morphism to a PresentedMorphism lying in
        the other hom group.
        """
        cols = []
        for b in self.basis:
            cols.append(list(other.coords(transform(b))))
        if not cols:
            return Matrix.zeros(other.group.generators, 0, self.source.ring)
        return Matrix.from_cols(cols, other.group.generators, ring=self.source.ring)


def hom_group(x: PresentedObject, y: PresentedObject) -> HomGroup:
    """Present Hom(X, Y) with a basis of generator morphisms.

    Legal generator matrices F satisfy F R_X = R_Y A for some A; the
    trivial ones are F = R_Y G.  Both conditions vectorize through
    Kronecker products, so the hom group is a quotient of one integer
    kernel lattice by another.
    """
    ring = x.ring
    gx, gy = x.generators, y.generators
    if gx == 0 or gy == 0:
        zero_obj = PresentedObject.zero(ring)
        return HomGroup(
            x, y, zero_obj, [], Matrix.zeros(gx * gy, 0, ring), Matrix.zeros(gx * gy, 0, ring)
        )
    legal = kernel_basis(
        x.relations.transpose().kron(Matrix.identity(gy, ring)).hstack(
            -Matrix.identity(x.relations.cols, ring).kron(y.relations)
        )
    )
    lat = lattice_basis(legal.take_rows(0, gx * gy))
    trivial = Matrix.identity(gx, ring).kron(y.relations)
    rel_full = kernel_basis(lat.hstack(trivial))
    rel = lattice_basis(rel_full.take_rows(0, lat.cols))
    group = PresentedObject(lat.cols, rel, ring)
    basis = [
        PresentedMorphism(x, y, unvec(lat.column_matrix(j), gy, gx))
        for j in range(lat.cols)
    ]
    return HomGroup(x, y, group, basis, lat, lattice_basis(trivial))
