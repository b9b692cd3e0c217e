"""Maps of fans: certified morphisms, exceptional loci, isomorphisms.

A fan morphism is a lattice map together with an assignment of each
source maximal cone to a target cone containing its image; the
assignment is a checkable certificate, not extra data.  Exceptional
loci are computed through the orbit-cone correspondence: a cone of
dimension k corresponds to an orbit closure of codimension k.
"""

from __future__ import annotations

from dataclasses import dataclass

from .lattice import (
    as_matrix,
    det,
    dot,
    identity_matrix,
    integer_kernel,
    is_zero_vector,
    mat_mul,
    mat_vec,
    primitive_vector,
    rank,
    solve_integer,
    transpose,
)
from .polyhedral import Cone, Fan


class MorphismError(ValueError):
    """A fan morphism certificate failed, or could not be built."""


@dataclass(frozen=True)
class FanMorphism:
    """Lattice map between fans with a containment certificate per cone."""

    matrix: tuple
    source: Fan
    target: Fan
    assignment: tuple  # target maximal-cone index per source maximal cone

    def map_vector(self, v):
        return mat_vec(self.matrix, v)

    def certify(self):
        """Re-check that every source cone maps into its assigned cone."""
        for i, c in enumerate(self.source.maximal_cones):
            t = self.target.maximal_cones[self.assignment[i]]
            for r in c.rays:
                if not t.contains(self.map_vector(r)):
                    raise MorphismError(
                        "image of %r escapes its assigned cone %r" % (c, t))

    def is_certified(self) -> bool:
        try:
            self.certify()
        except MorphismError:
            return False
        return True

    def image_cone(self, cone: Cone) -> Cone:
        imgs = [self.map_vector(r) for r in cone.rays]
        imgs = [v for v in imgs if not is_zero_vector(v)]
        return Cone(imgs, len(self.matrix))

    def same_map_as(self, other) -> bool:
        return (self.matrix == other.matrix
                and self.source == other.source
                and self.target == other.target)


def fan_morphism(matrix, source: Fan, target: Fan) -> FanMorphism:
    """Build a morphism, assigning each source cone a containing target cone."""
    matrix = as_matrix(matrix)
    assignment = []
    for c in source.maximal_cones:
        imgs = [mat_vec(matrix, r) for r in c.rays]
        found = None
        for j, t in enumerate(target.maximal_cones):
            if all(t.contains(v) for v in imgs):
                found = j
                break
        if found is None:
            raise MorphismError(
                "no target cone contains the image of %r" % (c,))
        assignment.append(found)
    return FanMorphism(matrix, source, target, tuple(assignment))


def identity_morphism(fan: Fan) -> FanMorphism:
    return fan_morphism(identity_matrix(fan.lattice_rank), fan, fan)


def compose(outer: FanMorphism, inner: FanMorphism) -> FanMorphism:
    """The composite morphism, re-certified from scratch."""
    if inner.target != outer.source:
        raise MorphismError("composition mismatch: inner target != outer source")
    return fan_morphism(mat_mul(outer.matrix, inner.matrix),
                        inner.source, outer.target)


@dataclass(frozen=True)
class ExceptionalLocus:
    """Orbit cones on which a birational fan map fails to be one."""

    components: tuple      # minimal exceptional cones
    min_codim: int | None  # None when the locus is empty
    count: int             # total number of exceptional faces

    @property
    def is_empty(self):
        return self.count == 0


def exceptional_locus(morphism: FanMorphism) -> ExceptionalLocus:
    """Faces of the source fan whose image is not a face of the target.

    Intended for refinement-type morphisms (unimodular lattice map).
    The minimal such cones are the components of the non-isomorphism
    locus; the codimension of the orbit closure of a cone equals the
    cone's dimension.
    """
    exceptional = []
    for f in morphism.source.faces():
        if f.dim == 0:
            continue
        img = morphism.image_cone(f)
        if img.dim != f.dim or not morphism.target.has_face(img):
            exceptional.append(f)
    if not exceptional:
        return ExceptionalLocus((), None, 0)
    minimal = []
    for f in exceptional:
        if not any(g is not f and g.is_face_of(f) for g in exceptional):
            minimal.append(f)
    min_codim = min(f.dim for f in exceptional)
    return ExceptionalLocus(tuple(sorted(minimal, key=lambda c: c.rays)),
                            min_codim, len(exceptional))


def _ray_data(fan: Fan):
    rays = list(fan.rays())
    index = {r: i for i, r in enumerate(rays)}
    cones = [frozenset(index[r] for r in c.rays) for c in fan.maximal_cones]
    member = [frozenset(j for j, c in enumerate(cones) if i in c)
              for i in range(len(rays))]
    return rays, cones, member


def _ray_signature(member, cones, i):
    return (len(member[i]), tuple(sorted(len(cones[j]) for j in member[i])))


def iter_fan_isomorphisms(src: Fan, dst: Fan):
    """Yield unimodular matrices carrying ``src`` onto ``dst``.

    Backtracking over ray assignments, pruned by incidence invariants;
    once the assigned rays span the lattice the map is solved for and
    checked in full.
    """
    d = src.lattice_rank
    if d != dst.lattice_rank:
        return
    rays1, cones1, member1 = _ray_data(src)
    rays2, cones2, member2 = _ray_data(dst)
    if len(rays1) != len(rays2) or len(cones1) != len(cones2):
        return
    if sorted(len(c) for c in cones1) != sorted(len(c) for c in cones2):
        return
    sig1 = [_ray_signature(member1, cones1, i) for i in range(len(rays1))]
    sig2 = [_ray_signature(member2, cones2, i) for i in range(len(rays2))]
    if sorted(sig1) != sorted(sig2):
        return

    # order source rays so that independent ones come first
    order = []
    seen = []
    for i, r in enumerate(rays1):
        if rank(seen + [list(r)]) > len(seen):
            order.append(i)
            seen.append(list(r))
            if len(seen) == d:
                break
    if len(seen) < d:
        return
    cone_sets2 = set(cones2)

    def common(m, a, b):
        return len(m[a] & m[b])

    def finish(assign):
        rows_src = [rays1[i] for i in order]
        rows_dst = [assign[i] for i in order]
        # want A with A s_k = t_k; row i of A solves S y = column i of T
        S = as_matrix(rows_src)
        try:
            A = as_matrix([solve_integer(S, col)
                           for col in transpose(as_matrix(rows_dst))])
        except ValueError:
            return None
        if abs(det(A)) != 1:
            return None
        image = {}
        idx2 = {r: i for i, r in enumerate(rays2)}
        for i, r in enumerate(rays1):
            v = mat_vec(A, r)
            j = idx2.get(v)
            if j is None:
                return None
            image[i] = j
        if len(set(image.values())) != len(rays1):
            return None
        for c in cones1:
            if frozenset(image[i] for i in c) not in cone_sets2:
                return None
        return A

    def backtrack(pos, assign, used):
        if pos == len(order):
            A = finish(assign)
            if A is not None:
                yield A
            return
        i = order[pos]
        for j in range(len(rays2)):
            if j in used or sig2[j] != sig1[i]:
                continue
            ok = True
            for prev in order[:pos]:
                if common(member1, i, prev) != common(
                        member2, j, assign_idx[prev]):
                    ok = False
                    break
            if not ok:
                continue
            assign[i] = rays2[j]
            assign_idx[i] = j
            used.add(j)
            yield from backtrack(pos + 1, assign, used)
            used.discard(j)
            del assign[i], assign_idx[i]

    assign_idx = {}
    yield from backtrack(0, {}, set())


def find_fan_isomorphism(src: Fan, dst: Fan):
    """First unimodular isomorphism of fans, or None."""
    for A in iter_fan_isomorphisms(src, dst):
        return A
    return None


def verify_fan_isomorphism(src: Fan, dst: Fan, matrix) -> bool:
    """Independent re-check that ``matrix`` carries src onto dst exactly."""
    matrix = as_matrix(matrix)
    if len(matrix) != dst.lattice_rank or len(matrix[0]) != src.lattice_rank:
        return False
    if src.lattice_rank != dst.lattice_rank or abs(det(matrix)) != 1:
        return False
    rays_dst = set(dst.rays())
    mapped = [mat_vec(matrix, r) for r in src.rays()]
    if set(mapped) != rays_dst or len(mapped) != len(rays_dst):
        return False
    target_cones = {c.rays for c in dst.maximal_cones}
    for c in src.maximal_cones:
        img = tuple(sorted(mat_vec(matrix, r) for r in c.rays))
        if img not in target_cones:
            return False
    return len(src.maximal_cones) == len(dst.maximal_cones)


@dataclass(frozen=True)
class BundleCheck:
    """Outcome of the fibration test for a fan map."""

    ok: bool
    reason: str
    fiber_fan: Fan | None = None


def is_projective_bundle(total: Fan, base: Fan, matrix,
                         fiber_model: Fan) -> BundleCheck:
    """Product-like fibration test for ``matrix: total -> base``.

    Checks that every maximal cone of the total fan splits into a
    maximal cone of a fixed fiber fan (living in the kernel lattice of
    the map, and isomorphic to ``fiber_model``) plus rays mapping
    bijectively onto a maximal cone of the base.  This is the fan
    criterion used for projective bundle structures here; it covers the
    product fans and blow-up stars that actually occur.
    """
    matrix = as_matrix(matrix)
    fdim = total.lattice_rank - base.lattice_rank
    if fdim != fiber_model.lattice_rank:
        return BundleCheck(False, "fiber dimension mismatch")
    kernel = integer_kernel(matrix)
    if len(kernel) != fdim:
        return BundleCheck(False, "kernel rank %d, expected %d"
                           % (len(kernel), fdim))
    kernel_t = transpose(kernel)
    base_cones = {c.rays: c for c in base.maximal_cones}
    fiber_cones = set()
    for c in total.maximal_cones:
        in_fiber = []
        across = []
        for r in c.rays:
            v = mat_vec(matrix, r)
            if is_zero_vector(v):
                in_fiber.append(r)
            else:
                across.append(primitive_vector(v))
        if len(in_fiber) != fdim or len(across) != base.lattice_rank:
            return BundleCheck(False, "cone %r does not split" % (c,))
        img = tuple(sorted(set(across)))
        if img not in base_cones or len(across) != len(set(across)):
            return BundleCheck(
                False, "cone %r does not map onto a base cone" % (c,))
        try:
            coords = [solve_integer(kernel_t, r) for r in in_fiber]
        except ValueError:
            return BundleCheck(False, "fiber rays not in the kernel lattice")
        fiber_cones.add(Cone(coords, fdim))
    fiber_fan = Fan(sorted(fiber_cones, key=lambda c: c.rays), fdim)
    if len(total.maximal_cones) != (len(base.maximal_cones)
                                    * len(fiber_fan.maximal_cones)):
        return BundleCheck(False, "cone counts do not factor", fiber_fan)
    A = find_fan_isomorphism(fiber_fan, fiber_model)
    if A is None or not verify_fan_isomorphism(fiber_fan, fiber_model, A):
        return BundleCheck(False, "fiber fan differs from the model",
                           fiber_fan)
    return BundleCheck(True, "", fiber_fan)
