"""One-parameter diagonal torus actions on affine space and their quotients.

The action is recorded by the integer weight of each affine coordinate
of a point: scaling by t multiplies coordinate i by t**w_i.  In the
cobordism case the weights are +1 on the first block and -1 on the
second, so t . v = (t v_minus, t^-1 v_plus).

Everything downstream of the weights is toric: the invariant-monomial
cone lives in the exponent lattice (the kernel of the weight
functional), the quotient fans live in the dual lattice Z^N modulo the
weight vector, and the two coordinate systems are dual to each other by
construction, using the same kernel basis.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .lattice import (
    as_matrix,
    dot,
    identity_matrix,
    integer_kernel,
    mat_vec,
    primitive_vector,
    transpose,
    vec_add,
)
from .polyhedral import Cone, Fan, star_subdivision
from .fanmaps import FanMorphism, fan_morphism


TOWARD_ZERO = "zero"
TOWARD_INFINITY = "infinity"


@dataclass(frozen=True)
class WeightedAction:
    """Diagonal one-parameter action on N = n_minus + n_plus coordinates."""

    n_minus: int
    n_plus: int
    point_weights: tuple

    def __post_init__(self):
        if self.n_minus < 0 or self.n_plus < 0:
            raise ValueError("negative block size")
        if len(self.point_weights) != self.n_minus + self.n_plus:
            raise ValueError("weight count must equal the coordinate count")

    @classmethod
    def cobordism(cls, m: int, l: int) -> "WeightedAction":
        """Weights +1 on the (m+1)-block and -1 on the (l+1)-block."""
        if m < 0 or l < 0:
            raise ValueError("block dimensions must be nonnegative")
        return cls(m + 1, l + 1, (1,) * (m + 1) + (-1,) * (l + 1))

    @property
    def total(self) -> int:
        return self.n_minus + self.n_plus

    def is_cobordism(self) -> bool:
        w = self.point_weights
        return (all(x == 1 for x in w[:self.n_minus])
                and all(x == -1 for x in w[self.n_minus:]))

    def scale(self, t: Fraction, v):
        """t . v for a nonzero rational t (exact)."""
        self._check(v)
        t = Fraction(t)
        if t == 0:
            raise ValueError("torus parameter must be nonzero")
        return tuple(t ** w * Fraction(x)
                     for w, x in zip(self.point_weights, v))

    def _check(self, v):
        if len(v) != self.total:
            raise ValueError("point has %d coordinates, expected %d"
                             % (len(v), self.total))


def limit_exists(action: WeightedAction, v, direction: str) -> bool:
    """Whether lim t.v exists as t goes to 0 or to infinity.

    Toward zero the negative-weight coordinates must vanish; toward
    infinity the positive-weight ones must.  Weight-0 coordinates never
    obstruct.
    """
    action._check(v)
    if direction == TOWARD_ZERO:
        return all(x == 0 for w, x in zip(action.point_weights, v) if w < 0)
    if direction == TOWARD_INFINITY:
        return all(x == 0 for w, x in zip(action.point_weights, v) if w > 0)
    raise ValueError("direction must be %r or %r"
                     % (TOWARD_ZERO, TOWARD_INFINITY))


def cobordism_membership(action: WeightedAction, v) -> dict:
    """Membership of v in the open sets where a limit fails to exist.

    ``minus`` holds when the limit toward infinity does not exist and
    ``plus`` when the limit toward zero does not; for blockwise +-1
    weights these are exactly "the first block of v is nonzero" and
    "the second block is nonzero".
    """
    return {
        "minus": not limit_exists(action, v, TOWARD_INFINITY),
        "plus": not limit_exists(action, v, TOWARD_ZERO),
    }


def _standard_basis(n, i):
    return tuple(1 if j == i else 0 for j in range(n))


def invariant_exponent_cone(action: WeightedAction):
    """The invariant-monomial cone in the saturated kernel lattice.

    Returns ``(cone, kernel_basis)``: exponent vectors u of invariant
    monomials are exactly u = c . kernel_basis with c in the cone, and
    all coordinates of u nonnegative.
    """
    w = action.point_weights
    if all(x >= 0 for x in w) or all(x <= 0 for x in w):
        raise ValueError("weights of both signs are required; "
                         "the invariant ring is otherwise trivial")
    kernel = integer_kernel([list(w)])
    n = action.total
    normals = [tuple(k[i] for k in kernel) for i in range(n)]
    cone = Cone.from_inequalities(normals, len(kernel))
    return cone, kernel


def git_quotient_cone(action: WeightedAction):
    """Invariant-monomial cone together with its Hilbert basis.

    The Hilbert basis is returned as exponent vectors in the ambient
    coordinates (length N), lexicographically sorted; these are the
    minimal generators of the invariant ring.
    """
    from .polyhedral import hilbert_basis

    cone, kernel = invariant_exponent_cone(action)
    kt = transpose(kernel)
    monomials = tuple(sorted(mat_vec(kt, h) for h in hilbert_basis(cone)))
    assert all(all(e >= 0 for e in u) for u in monomials)
    assert all(dot(u, action.point_weights) == 0 for u in monomials)
    return cone, monomials


def monomial_label(action: WeightedAction, exponent) -> str:
    """Render an exponent vector as a monomial in y (minus) and x (plus)."""
    parts = []
    for i, e in enumerate(exponent):
        if e == 0:
            continue
        if i < action.n_minus:
            name = "y%d" % i
        else:
            name = "x%d" % (i - action.n_minus)
        parts.append(name if e == 1 else "%s^%d" % (name, e))
    return "*".join(parts) if parts else "1"


def quotient_projection(action: WeightedAction):
    """Canonical surjection Z^N -> Z^(N-1) whose kernel is the weight line.

    Rows are the Hermite-normal kernel basis of the weight functional,
    which makes ray images deterministic.
    """
    return integer_kernel([list(action.point_weights)])


def quotient_fan(action: WeightedAction, side: str) -> Fan:
    """Fan of the geometric quotient of the no-limit open set.

    ``side`` is "minus" or "plus".  Maximal cones are the images of the
    coordinate cones on index sets omitting one index of the chosen
    block: those are exactly the sets not containing the whole block,
    i.e. the cones whose orbits survive in the open set.
    Only blockwise +-1 weights are accepted.
    """
    if side not in ("minus", "plus"):
        raise ValueError("side must be 'minus' or 'plus'")
    if not action.is_cobordism():
        raise ValueError("quotient fans are implemented for blockwise "
                         "+1/-1 weights only")
    n = action.total
    proj = as_matrix(quotient_projection(action))
    if side == "minus":
        block = range(action.n_minus)
    else:
        block = range(action.n_minus, n)
    images = [mat_vec(proj, _standard_basis(n, i)) for i in range(n)]
    cones = []
    for omit in block:
        rays = [images[i] for i in range(n) if i != omit]
        cones.append(Cone(rays, n - 1))
    return Fan(cones, n - 1)


def support_cone(action: WeightedAction) -> Cone:
    """Image of the nonnegative orthant in the quotient lattice."""
    n = action.total
    proj = as_matrix(quotient_projection(action))
    images = [mat_vec(proj, _standard_basis(n, i)) for i in range(n)]
    return Cone(images, n - 1)


def blowup_ray(action: WeightedAction):
    """Primitive ray at which blowing up the quotient apex resolves it.

    The images of the two block sums agree in the quotient lattice
    (their difference is the weight vector); the common value generates
    the grading ray of the invariant ring.
    """
    n = action.total
    proj = as_matrix(quotient_projection(action))
    minus_sum = tuple(1 if i < action.n_minus else 0 for i in range(n))
    plus_sum = tuple(0 if i < action.n_minus else 1 for i in range(n))
    a = mat_vec(proj, minus_sum)
    b = mat_vec(proj, plus_sum)
    if a != b:
        raise AssertionError("block sums disagree in the quotient lattice")
    return primitive_vector(a)


@dataclass(frozen=True)
class QuotientData:
    """Everything the quotient construction produces for one action."""

    action: WeightedAction
    projection: tuple          # (N-1) x N matrix, Z^N -> quotient lattice
    git_cone: Cone             # support cone in the quotient lattice
    exponent_cone: Cone        # invariant-monomial cone (dual side)
    hilbert: tuple             # exponent vectors of the minimal invariants
    fan_minus: Fan
    fan_plus: Fan
    blowup_fan: Fan
    blowup_center: tuple       # the inserted primitive ray

    @property
    def quotient_lattice_rank(self) -> int:
        return self.action.total - 1


def build_quotient(action: WeightedAction) -> QuotientData:
    """Assemble the full quotient picture for a blockwise +-1 action."""
    if not action.is_cobordism():
        raise ValueError("quotient construction needs blockwise +1/-1 weights")
    exponent_cone, hilbert = git_quotient_cone(action)
    git = support_cone(action)
    fm = quotient_fan(action, "minus")
    fp = quotient_fan(action, "plus")
    ray = blowup_ray(action)
    blow = star_subdivision(Fan([git], git.lattice_rank), ray)
    return QuotientData(
        action=action,
        projection=as_matrix(quotient_projection(action)),
        git_cone=git,
        exponent_cone=exponent_cone,
        hilbert=hilbert,
        fan_minus=fm,
        fan_plus=fp,
        blowup_fan=blow,
        blowup_center=ray,
    )


def build_morphisms(q: QuotientData) -> dict:
    """The five fan maps of the resolution diagram.

    All lattice maps are identities on the shared quotient lattice;
    what varies is the fan refinement.  Keys: b_minus, b_plus (blow-up
    onto the two quotients), s_minus, s_plus (quotients onto the
    affine quotient), beta (their common composite).
    """
    d = q.quotient_lattice_rank
    ident = identity_matrix(d)
    git_fan = Fan([q.git_cone], d)
    return {
        "b_minus": fan_morphism(ident, q.blowup_fan, q.fan_minus),
        "b_plus": fan_morphism(ident, q.blowup_fan, q.fan_plus),
        "s_minus": fan_morphism(ident, q.fan_minus, git_fan),
        "s_plus": fan_morphism(ident, q.fan_plus, git_fan),
        "beta": fan_morphism(ident, q.blowup_fan, git_fan),
    }


def refines(fine: Fan, coarse: Fan) -> bool:
    """Every maximal cone of ``fine`` sits inside some cone of ``coarse``."""
    for c in fine.maximal_cones:
        if not any(t.contains_cone(c) for t in coarse.maximal_cones):
            return False
    return True


def random_support_point(q: QuotientData, rng):
    """A random rational point of the common fan support (for testing)."""
    rays = q.git_cone.rays
    coeffs = [Fraction(rng.randint(0, 12), rng.randint(1, 7)) for _ in rays]
    point = [Fraction(0)] * q.quotient_lattice_rank
    for c, r in zip(coeffs, rays):
        point = [p + c * x for p, x in zip(point, r)]
    return tuple(point)
