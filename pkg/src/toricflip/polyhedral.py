"""Rational polyhedral cones and fans over an integer lattice.

Cones are stored by their canonical generator set: primitive extremal
rays, lexicographically sorted.  A non-pointed cone (these arise only
as duals of lower-dimensional cones) additionally carries +/- pairs
spanning its lineality space, so that a single generator list always
determines the cone.  Dual descriptions are computed exactly by the
double description method with rank-based adjacency tests.
"""

from __future__ import annotations

from itertools import combinations, product

from .lattice import (
    as_matrix,
    det,
    dot,
    adjugate,
    identity_matrix,
    integer_kernel,
    invariant_factors,
    is_zero_vector,
    mat_vec,
    primitive_vector,
    rank,
    reduce_mod_rows,
    smith_normal_form,
    solve_integer,
    transpose,
    unimodular_inverse,
    vec_add,
    vec_neg,
    vec_sub,
)


class FanError(ValueError):
    """A fan failed a structural validity check."""


def _extreme_rays_pointed(normals, dim):
    """Extremal rays of {x : n.x >= 0} when the intersection is pointed.

    ``normals`` must be deduplicated primitive vectors of full rank
    ``dim``.  Incremental double description; two rays are adjacent when
    their common active constraints have rank dim - 2.
    """
    arranged = sorted(normals)
    chosen = []
    chosen_idx = []
    for i, n in enumerate(arranged):
        if rank(chosen + [n]) > len(chosen):
            chosen.append(n)
            chosen_idx.append(i)
            if len(chosen) == dim:
                break
    if len(chosen) < dim:
        raise ValueError("normals do not have full rank")
    base = as_matrix(chosen)
    d0 = det(base)
    adj = adjugate(base)
    sign = 1 if d0 > 0 else -1
    rays = [primitive_vector(tuple(sign * adj[i][j] for i in range(dim)))
            for j in range(dim)]
    processed = list(chosen_idx)
    chosen_set = set(chosen_idx)
    for i, n in enumerate(arranged):
        if i in chosen_set:
            continue
        vals = [dot(n, r) for r in rays]
        if all(v >= 0 for v in vals):
            processed.append(i)
            continue
        active = [frozenset(k for k in processed if dot(arranged[k], r) == 0)
                  for r in rays]
        keep = [r for r, v in zip(rays, vals) if v >= 0]
        new = []
        pos = [(r, v, a) for r, v, a in zip(rays, vals, active) if v > 0]
        neg = [(r, v, a) for r, v, a in zip(rays, vals, active) if v < 0]
        for rp, vp, ap in pos:
            for rn, vn, an in neg:
                common = ap & an
                if len(common) < dim - 2:
                    continue
                if dim >= 2 and rank([arranged[k] for k in common]) != dim - 2:
                    continue
                combo = tuple(vp * x - vn * y for x, y in zip(rn, rp))
                new.append(primitive_vector(combo))
        rays = sorted(set(keep + new))
        processed.append(i)
    return tuple(sorted(set(rays)))


def _complement_transform(lineality_rows, dim):
    """Unimodular T whose first k columns span the given saturated lattice."""
    cols = transpose(lineality_rows)
    _, U, _ = smith_normal_form(cols)
    return unimodular_inverse(U)


def _canonical_mod_lineality(v, lin_rows):
    """Canonical primitive coset representative modulo a lineality lattice."""
    rep = reduce_mod_rows(v, lin_rows)
    while True:
        rep = primitive_vector(rep)
        nxt = reduce_mod_rows(rep, lin_rows)
        if nxt == rep:
            return rep
        rep = nxt


def halfspace_rays(normals, lattice_rank):
    """Canonical generators of ``{x : n.x >= 0 for all n in normals}``.

    For a pointed intersection these are the primitive extremal rays;
    otherwise the pointed-part representatives (canonicalized modulo the
    lineality lattice) together with +/- pairs spanning the lineality.
    """
    clean = sorted({primitive_vector(n) for n in normals if not is_zero_vector(n)})
    if not clean:
        basis = identity_matrix(lattice_rank)
        return tuple(sorted(list(basis) + [vec_neg(b) for b in basis]))
    lin = integer_kernel(as_matrix(clean))
    if not lin:
        return _extreme_rays_pointed(clean, lattice_rank)
    k = len(lin)
    T = _complement_transform(lin, lattice_rank)
    Tt = transpose(T)
    reduced = []
    for n in clean:
        w = mat_vec(Tt, n)
        assert all(x == 0 for x in w[:k])
        tail = w[k:]
        if not is_zero_vector(tail):
            reduced.append(primitive_vector(tail))
    reduced = sorted(set(reduced))
    out = set()
    if reduced:
        for y in _extreme_rays_pointed(reduced, lattice_rank - k):
            lifted = tuple(sum(T[i][k + j] * y[j] for j in range(len(y)))
                           for i in range(lattice_rank))
            out.add(_canonical_mod_lineality(lifted, lin))
    for b in lin:
        out.add(b)
        out.add(vec_neg(b))
    return tuple(sorted(out))


class Cone:
    """A rational polyhedral cone, canonically generated.

    ``rays`` holds the sorted primitive extremal generators (plus +/-
    lineality pairs when not pointed).  ``normals`` is the cached dual
    description: v lies in the cone iff every normal pairs >= 0 with v.
    """

    __slots__ = ("lattice_rank", "rays", "_normals", "_dim")

    def __init__(self, rays, lattice_rank=None, _canonical=False, _normals=None):
        rays = tuple(tuple(int(x) for x in r) for r in rays)
        if lattice_rank is None:
            if not rays:
                raise ValueError("lattice_rank required for the zero cone")
            lattice_rank = len(rays[0])
        if any(len(r) != lattice_rank for r in rays):
            raise ValueError("ray dimension mismatch")
        if not _canonical and rays:
            gens = [primitive_vector(r) for r in rays if not is_zero_vector(r)]
            if gens:
                dual = halfspace_rays(gens, lattice_rank)
                rays = halfspace_rays(dual, lattice_rank)
                _normals = dual
            else:
                rays = ()
        self.lattice_rank = lattice_rank
        self.rays = rays
        self._normals = _normals
        self._dim = None

    @classmethod
    def from_inequalities(cls, normals, lattice_rank):
        rays = halfspace_rays(list(normals), lattice_rank)
        return cls(rays, lattice_rank, _canonical=True)

    @property
    def normals(self):
        if self._normals is None:
            self._normals = halfspace_rays(self.rays, self.lattice_rank)
        return self._normals

    @property
    def dim(self):
        if self._dim is None:
            self._dim = rank(self.rays) if self.rays else 0
        return self._dim

    def contains(self, v) -> bool:
        if len(v) != self.lattice_rank:
            raise ValueError("point dimension mismatch")
        return all(dot(n, v) >= 0 for n in self.normals)

    def interior_contains(self, v) -> bool:
        """Strict inequalities on the pointed-part normals (relative interior)."""
        if len(v) != self.lattice_rank:
            raise ValueError("point dimension mismatch")
        normals = self.normals
        pairs = set(normals)
        for n in normals:
            val = dot(n, v)
            if vec_neg(n) in pairs:
                if val != 0:
                    return False
            elif val <= 0:
                return False
        return True

    def is_pointed(self) -> bool:
        if not self.rays:
            return True
        return not integer_kernel(as_matrix(self.normals))

    def is_simplicial(self) -> bool:
        if not self.is_pointed():
            raise ValueError("simpliciality is defined here for pointed cones")
        return len(self.rays) == self.dim

    def is_smooth(self) -> bool:
        if not self.is_pointed():
            raise ValueError("smoothness is defined here for pointed cones")
        if not self.rays:
            return True
        if len(self.rays) != self.dim:
            return False
        factors = invariant_factors(as_matrix(self.rays))
        return all(f == 1 for f in factors[:len(self.rays)])

    def facets(self):
        """Codimension-one faces, via the pointed-part facet normals."""
        pairs = set(self.normals)
        seen = {}
        for n in self.normals:
            if vec_neg(n) in pairs:
                continue
            sub = tuple(r for r in self.rays if dot(n, r) == 0)
            seen.setdefault(sub, Cone(sub, self.lattice_rank, _canonical=True))
        return tuple(seen[k] for k in sorted(seen))

    def faces(self):
        """All faces (the cone itself included), as a sorted tuple."""
        out = {self.rays: self}
        stack = [self]
        while stack:
            c = stack.pop()
            for f in c.facets():
                if f.rays not in out:
                    out[f.rays] = f
                    stack.append(f)
        return tuple(out[k] for k in sorted(out))

    def is_face_of(self, other) -> bool:
        """Exposed-face test certified by the facet normals of ``other``."""
        if self.lattice_rank != other.lattice_rank:
            return False
        if any(not other.contains(r) for r in self.rays):
            return False
        u = [0] * self.lattice_rank
        for n in other.normals:
            if all(dot(n, r) == 0 for r in self.rays):
                u = [a + b for a, b in zip(u, n)]
        cut = tuple(r for r in other.rays if dot(tuple(u), r) == 0)
        return Cone(cut, self.lattice_rank) == self

    def intersect(self, other):
        if self.lattice_rank != other.lattice_rank:
            raise ValueError("lattice rank mismatch")
        return Cone.from_inequalities(self.normals + other.normals,
                                      self.lattice_rank)

    def contains_cone(self, other) -> bool:
        return all(self.contains(r) for r in other.rays)

    def __eq__(self, other):
        return (isinstance(other, Cone)
                and self.lattice_rank == other.lattice_rank
                and self.rays == other.rays)

    def __hash__(self):
        return hash((self.lattice_rank, self.rays))

    def __repr__(self):
        return "Cone(rank=%d, rays=%s)" % (self.lattice_rank, list(self.rays))


def dual_cone(cone: Cone) -> Cone:
    """The cone of functionals nonnegative on ``cone``."""
    return Cone(cone.normals, cone.lattice_rank, _canonical=True,
                _normals=cone.rays)


class Fan:
    """A finite fan, stored by its maximal cones.

    Lower-dimensional faces are derived on demand.  ``check=True`` runs
    the pairwise face-intersection validation.
    """

    __slots__ = ("lattice_rank", "maximal_cones")

    def __init__(self, cones, lattice_rank=None, check=False):
        cones = list(cones)
        if lattice_rank is None:
            if not cones:
                raise ValueError("lattice_rank required for an empty fan")
            lattice_rank = cones[0].lattice_rank
        if any(c.lattice_rank != lattice_rank for c in cones):
            raise ValueError("mixed lattice ranks in fan")
        uniq = {c.rays: c for c in cones}
        keep = []
        for r, c in uniq.items():
            if any(r != r2 and c2.contains_cone(c) for r2, c2 in uniq.items()):
                continue
            keep.append(c)
        self.lattice_rank = lattice_rank
        self.maximal_cones = tuple(sorted(keep, key=lambda c: c.rays))
        if check:
            self.validate()

    def validate(self):
        for c in self.maximal_cones:
            if not c.is_pointed():
                raise FanError("fan cone is not pointed: %r" % (c,))
        for a, b in combinations(self.maximal_cones, 2):
            cap = a.intersect(b)
            if not cap.is_face_of(a) or not cap.is_face_of(b):
                raise FanError(
                    "intersection of %r and %r is not a common face" % (a, b))

    def rays(self):
        out = set()
        for c in self.maximal_cones:
            out.update(c.rays)
        return tuple(sorted(out))

    def support_contains(self, v) -> bool:
        return any(c.contains(v) for c in self.maximal_cones)

    def cones_containing(self, cone: Cone):
        return tuple(c for c in self.maximal_cones if c.contains_cone(cone))

    def has_face(self, cone: Cone) -> bool:
        return any(cone.is_face_of(c) for c in self.maximal_cones)

    def smallest_containing_face(self, cone: Cone) -> Cone:
        """The minimal fan face containing ``cone``."""
        carriers = self.cones_containing(cone)
        if not carriers:
            raise ValueError("cone is not contained in the fan support")
        big = carriers[0]
        u = [0] * self.lattice_rank
        for n in big.normals:
            if all(dot(n, r) == 0 for r in cone.rays):
                u = [a + b for a, b in zip(u, n)]
        cut = tuple(r for r in big.rays if dot(tuple(u), r) == 0)
        return Cone(cut, self.lattice_rank)

    def faces(self):
        out = {}
        for c in self.maximal_cones:
            for f in c.faces():
                out.setdefault(f.rays, f)
        return tuple(out[k] for k in sorted(out))

    def __eq__(self, other):
        return (isinstance(other, Fan)
                and self.lattice_rank == other.lattice_rank
                and self.maximal_cones == other.maximal_cones)

    def __hash__(self):
        return hash((self.lattice_rank, self.maximal_cones))

    def __repr__(self):
        return "Fan(rank=%d, %d maximal cones)" % (
            self.lattice_rank, len(self.maximal_cones))


def star_subdivision(fan: Fan, ray) -> Fan:
    """Refine ``fan`` by inserting ``ray``: the combinatorial blow-up.

    Every cone containing the ray is replaced by the cones spanned by
    the ray together with the facets that avoid it; the support is
    unchanged.
    """
    ray = primitive_vector(ray)
    if not fan.support_contains(ray):
        raise ValueError("ray %s lies outside the fan support" % (ray,))
    new_cones = []
    for c in fan.maximal_cones:
        if not c.contains(ray):
            new_cones.append(c)
            continue
        for f in c.facets():
            if f.contains(ray):
                continue
            new_cones.append(Cone(f.rays + (ray,), fan.lattice_rank))
    return Fan(new_cones, fan.lattice_rank)


def star_fan(fan: Fan, cone: Cone):
    """The fan of cones containing ``cone``, in the quotient lattice.

    Returns ``(fan, projection)`` where ``projection`` maps the ambient
    lattice onto the quotient by the sublattice spanned by ``cone``.
    """
    if not cone.rays:
        raise ValueError("star of the zero cone is the fan itself")
    proj = integer_kernel(as_matrix(cone.rays))
    if not proj:
        raise ValueError("cone spans the whole lattice")
    pieces = []
    for c in fan.maximal_cones:
        if not c.contains_cone(cone):
            continue
        pieces.append(Cone([mat_vec(proj, r) for r in c.rays], len(proj)))
    if not pieces:
        raise ValueError("cone does not lie in the fan")
    return Fan(pieces, len(proj)), as_matrix(proj)


def projective_space_fan(n: int) -> Fan:
    """The complete fan of n-dimensional projective space."""
    if n < 1:
        raise ValueError("positive dimension required")
    rays = [tuple(1 if i == j else 0 for j in range(n)) for i in range(n)]
    rays.append(tuple(-1 for _ in range(n)))
    cones = [Cone([rays[i] for i in subset], n)
             for subset in combinations(range(n + 1), n)]
    return Fan(cones, n)


def product_projective_fan(m: int, l: int) -> Fan:
    """The fan of a product of projective spaces of dimensions m and l."""
    if m < 1 or l < 1:
        raise ValueError("positive dimensions required")
    d = m + l
    first = [tuple(1 if i == j else 0 for j in range(d)) for i in range(m)]
    first.append(tuple(-1 if j < m else 0 for j in range(d)))
    second = [tuple(1 if i == j else 0 for j in range(d)) for i in range(m, d)]
    second.append(tuple(-1 if j >= m else 0 for j in range(d)))
    cones = []
    for sub1 in combinations(range(m + 1), m):
        for sub2 in combinations(range(l + 1), l):
            rays = [first[i] for i in sub1] + [second[j] for j in sub2]
            cones.append(Cone(rays, d))
    return Fan(cones, d)


def _triangulate(cone: Cone, memo):
    if cone.rays in memo:
        return memo[cone.rays]
    if cone.is_simplicial():
        memo[cone.rays] = (cone.rays,)
        return memo[cone.rays]
    apex = cone.rays[0]
    pieces = []
    for f in cone.facets():
        if f.contains(apex):
            continue
        for piece in _triangulate(f, memo):
            pieces.append(tuple(sorted(piece + (apex,))))
    memo[cone.rays] = tuple(pieces)
    return memo[cone.rays]


def triangulate(cone: Cone):
    """Split a pointed cone into simplicial subcones on its own rays."""
    if not cone.is_pointed():
        raise ValueError("triangulation requires a pointed cone")
    return _triangulate(cone, {})


def _parallelepiped_points(rays):
    """Nonzero lattice points of {sum t_i r_i : 0 <= t_i < 1}.

    Enumerated as coset representatives of the quotient group, then
    shifted into the half-open box; the count is |det| - 1.
    """
    d = len(rays)
    R = transpose(as_matrix(rays))
    D, U, _ = smith_normal_form(R)
    diag = [D[i][i] for i in range(d)]
    Uinv = unimodular_inverse(U)
    A = adjugate(R)
    dR = det(R)
    pts = set()
    for combo in product(*(range(v) for v in diag)):
        if not any(combo):
            continue
        x = mat_vec(Uinv, combo)
        t_scaled = mat_vec(A, x)
        shift = [n // dR for n in t_scaled]
        x = vec_sub(x, mat_vec(R, shift))
        if any(x):
            pts.add(tuple(x))
    return pts


def hilbert_basis(cone: Cone):
    """Minimal generating set of the monoid of lattice points of a cone.

    Candidates come from the fundamental parallelepipeds of a
    triangulation; a graded reduction pass then removes everything that
    splits off a smaller monoid element.  Lexicographically sorted.
    """
    if not cone.is_pointed():
        raise ValueError("Hilbert basis requires a pointed cone")
    if cone.dim == 0:
        return ()
    if cone.dim < cone.lattice_rank:
        span = integer_kernel(integer_kernel(as_matrix(cone.rays)))
        span_t = transpose(span)
        coords = [solve_integer(span_t, r) for r in cone.rays]
        sub = hilbert_basis(Cone(coords, len(span)))
        return tuple(sorted(mat_vec(span_t, h) for h in sub))
    candidates = set(cone.rays)
    for piece in triangulate(cone):
        candidates |= _parallelepiped_points(piece)
    grading = tuple(sum(col) for col in zip(*cone.normals))
    assert all(dot(grading, r) > 0 for r in cone.rays)
    basis = []
    for x in sorted(candidates, key=lambda v: (dot(grading, v), v)):
        reducible = False
        for h in basis:
            diff = vec_sub(x, h)
            if not is_zero_vector(diff) and cone.contains(diff):
                reducible = True
                break
        if not reducible:
            basis.append(x)
    return tuple(sorted(basis))
