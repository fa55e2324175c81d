"""Twisting elements, the gauge group and the orbit calculus.

A twisting element is a = a^2 + a^3 + ... with a^r of bidegree (r, 1−r),
satisfying da = −aa degreewise: ∇(a^r) = −Σ_{i+j=r+1} a^i a^j.  Gauge
elements p = 1 + p^1 + ... act by a∗p = p⁻¹ap + p⁻¹dp; p⁻¹ is the finite
geometric series because p′ raises the perturbation degree.  Everything
is truncated at an explicit level N: all statements hold in perturbation
degrees <= N.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .dga import DgaElement, DgaMap, simplicial_cochain_dga, tensor_dga, two_stage_hom_dga
from .errors import DegreeError, DomainError, SizeError
from .linalg import IntMatrix, kernel_basis, solve


def _component_map(dga, element, kind):
    """Split an element into {r: component} along the twisting (t = 1−r)
    or gauge (t = −r) diagonal; anything off the diagonal is an error."""
    shift = 1 if kind == "twisting" else 0
    out = {}
    for (r, t), comp in element.components_by_bidegree().items():
        if t != shift - r:
            raise DegreeError(f"component at bidegree {(r, t)} is off the {kind} diagonal")
        out[r] = comp
    return out


class TwistingElement:
    """Components r -> element of A^{r,1−r} for 2 <= r <= N."""

    def __init__(self, dga, truncation, components):
        if truncation < 2:
            raise DomainError("truncation level must be >= 2")
        self.dga = dga
        self.truncation = truncation
        self.components = {}
        for r, comp in components.items():
            comp = comp if isinstance(comp, DgaElement) else dga.element(comp)
            if comp.is_zero():
                continue
            if not 2 <= r <= truncation:
                raise DomainError(f"twisting component at level {r} outside 2..{truncation}")
            for label in comp.coeffs:
                if dga.bidegrees[label] != (r, 1 - r):
                    raise DegreeError(f"component {r} must lie in bidegree {(r, 1 - r)}")
            self.components[r] = comp

    @classmethod
    def zero(cls, dga, truncation):
        return cls(dga, truncation, {})

    @classmethod
    def from_element(cls, dga, truncation, element):
        comps = _component_map(dga, element, "twisting")
        return cls(dga, truncation, {r: c for r, c in comps.items() if 2 <= r <= truncation})

    def as_element(self):
        out = self.dga.element()
        for comp in self.components.values():
            out = out + comp
        return out

    def component(self, r):
        return self.components.get(r, self.dga.element())

    def __eq__(self, other):
        return (
            isinstance(other, TwistingElement)
            and self.dga is other.dga
            and self.truncation == other.truncation
            and self.components == other.components
        )

    def __repr__(self):
        return f"<twisting N={self.truncation}: {self.as_element()}>"


class GaugeElement:
    """p = 1 + p′ with p^r of bidegree (r, −r) for 1 <= r <= N−1."""

    def __init__(self, dga, truncation, components):
        if truncation < 2:
            raise DomainError("truncation level must be >= 2")
        self.dga = dga
        self.truncation = truncation
        self.components = {}
        for r, comp in components.items():
            comp = comp if isinstance(comp, DgaElement) else dga.element(comp)
            if comp.is_zero():
                continue
            if not 1 <= r <= truncation - 1:
                raise DomainError(f"gauge component at level {r} outside 1..{truncation - 1}")
            for label in comp.coeffs:
                if dga.bidegrees[label] != (r, -r):
                    raise DegreeError(f"component {r} must lie in bidegree {(r, -r)}")
            self.components[r] = comp

    @classmethod
    def one(cls, dga, truncation):
        return cls(dga, truncation, {})

    @classmethod
    def from_perturbation(cls, dga, truncation, element):
        comps = _component_map(dga, element, "gauge")
        return cls(dga, truncation, {r: c for r, c in comps.items() if 1 <= r <= truncation - 1})

    def perturbation(self):
        out = self.dga.element()
        for comp in self.components.values():
            out = out + comp
        return out

    def as_element(self):
        return self.dga.unit + self.perturbation()

    def inverse_element(self):
        """p⁻¹ = Σ (−p′)^k; terminates since p′ raises the first degree."""
        prime = self.perturbation()
        out = self.dga.unit
        power = self.dga.unit
        for _ in range(self.truncation + 1):
            power = power * prime
            if power.is_zero():
                break
            out = out + power.scale(-1 if _ % 2 == 0 else 1)
        return out

    def multiply(self, other):
        """Group law: (1+p′)(1+q′) = 1 + (p′ + q′ + p′q′)."""
        if self.dga is not other.dga or self.truncation != other.truncation:
            raise DomainError("gauge elements of different dgas or truncations")
        prime = self.perturbation() + other.perturbation() + self.perturbation() * other.perturbation()
        return GaugeElement.from_perturbation(self.dga, self.truncation, prime)

    def __eq__(self, other):
        return (
            isinstance(other, GaugeElement)
            and self.dga is other.dga
            and self.truncation == other.truncation
            and self.components == other.components
        )

    def __repr__(self):
        return f"<gauge N={self.truncation}: 1 + {self.perturbation()}>"


@dataclass(frozen=True)
class TwistingReport:
    ok: bool
    truncation: int
    failed_level: int = 0
    residual: object = field(compare=False, default=None)

    def __str__(self):
        if self.ok:
            return f"twisting equation holds through level {self.truncation}"
        return f"twisting equation fails at level r={self.failed_level}: residual {self.residual}"


def is_twisting(a):
    """Verify ∇(a^r) = −Σ_{i+j=r+1} a^i a^j for every r <= N."""
    for r in range(2, a.truncation + 1):
        residual = a.component(r).d()
        for i in range(2, r):
            j = r + 1 - i
            if j >= 2:
                residual = residual + a.component(i) * a.component(j)
        if not residual.is_zero():
            return TwistingReport(False, a.truncation, r, residual)
    return TwistingReport(True, a.truncation)


def gauge_act(a, p):
    """a∗p = p⁻¹ap + p⁻¹dp, truncated at level N."""
    if a.dga is not p.dga:
        raise DomainError("twisting and gauge elements live in different dgas")
    if a.truncation != p.truncation:
        raise DomainError("twisting and gauge truncations differ")
    pinv = p.inverse_element()
    moved = pinv * a.as_element() * p.as_element() + pinv * p.perturbation().d()
    result = TwistingElement.from_element(a.dga, a.truncation, _slice_twisting(moved, a.truncation))
    return result


def _slice_twisting(element, truncation):
    out = element.dga.element()
    for (r, t), comp in element.components_by_bidegree().items():
        if t == 1 - r and 2 <= r <= truncation:
            out = out + comp
    return out


def orbit_relation_holds(a, b, p):
    """The equivalent form b − a = ap′ − p′b + dp′, degreewise to level N."""
    pa = p.perturbation()
    lhs = b.as_element() - a.as_element()
    rhs = a.as_element() * pa - pa * b.as_element() + pa.d()
    diff = lhs - rhs
    for (r, t), comp in diff.components_by_bidegree().items():
        if t == 1 - r and 2 <= r <= a.truncation and not comp.is_zero():
            return False
    return True


# ---------------------------------------------------------------------------
# the orbit problem


@dataclass(frozen=True)
class OrbitVerdict:
    status: str  # "witness" | "refuted" | "inconclusive"
    witness: object = None
    refutation_level: int = 0
    obstruction: object = field(compare=False, default=None)
    depth_reached: int = 0
    nodes_used: int = 0

    def __str__(self):
        if self.status == "witness":
            return f"gauge equivalent; witness {self.witness!r}"
        if self.status == "refuted":
            return (
                f"not gauge equivalent: level-{self.refutation_level} obstruction class "
                f"[{self.obstruction}] is nonzero in cohomology"
            )
        return f"inconclusive (budget exhausted at level {self.depth_reached})"


def _offsets(dim, limit):
    """Integer offset tuples of increasing max-norm: (0,..), then norm 1, ..."""
    if dim == 0:
        yield ()
        return
    radius = 0
    while radius <= limit:
        def rec(i, acc, saturated):
            if i == dim:
                if saturated:
                    yield tuple(acc)
                return
            for v in range(-radius, radius + 1):
                acc.append(v)
                yield from rec(i + 1, acc, saturated or abs(v) == radius)
                acc.pop()
        yield from rec(0, [], radius == 0)
        radius += 1


def gauge_equivalent(a, b, budget=200):
    """Search for p′ with b = a∗p, degreewise by perturbation level.

    At each level k the unknown p^{k−1} enters linearly through ∇, so a
    particular solution and the kernel lattice come from Smith normal
    form.  Unsolvability at level 2 refutes (the class of b²−a² in
    H^{2,−1}(A,∇) is a gauge invariant); deeper failures backtrack over
    kernel cosets until the node budget runs out."""
    if a.dga is not b.dga or a.truncation != b.truncation:
        raise DomainError("twisting elements live in different dgas or truncations")
    for name, t in (("a", a), ("b", b)):
        rep = is_twisting(t)
        if not rep.ok:
            raise DomainError(f"{name} is not twisting: {rep}")
    dga = a.dga
    N = a.truncation

    strata = {}
    for k in range(2, N + 1):
        src = dga.basis_of(k - 1, 1 - k)
        tgt = dga.basis_of(k, 1 - k)
        index = {l: i for i, l in enumerate(tgt)}
        rows = [[0] * len(src) for _ in tgt]
        for j, label in enumerate(src):
            for l2, c in dga.diff.get(label, {}).items():
                rows[index[l2]][j] = c
        strata[k] = (src, tgt, IntMatrix(rows, cols=len(src)))

    nodes = {"used": 0}

    def rhs_at(k, chosen):
        """∇(p^{k−1}) = (b−a)^k − Σ_{i+j=k} a^i p^j + Σ_{j+i=k} p^j b^i."""
        out = b.component(k) - a.component(k)
        for j in range(1, k - 1):
            i = k - j
            if i >= 2 and j in chosen:
                out = out - a.component(i) * chosen[j] + chosen[j] * b.component(i)
        src, tgt, _mat = strata[k]
        vec = [out.coeffs.get(l, 0) for l in tgt]
        leftover = set(out.coeffs) - set(tgt)
        if leftover:
            raise DomainError(f"right-hand side leaves the stored bidegree window at level {k}")
        return vec

    def dfs(k, chosen):
        if k > N:
            p = GaugeElement(dga, N, dict(chosen))
            if gauge_act(a, p) == b:
                return OrbitVerdict("witness", p, nodes_used=nodes["used"])
            return None
        src, tgt, mat = strata[k]
        vec = rhs_at(k, chosen)
        nodes["used"] += 1
        particular = solve(mat, vec)
        if particular is None:
            if k == 2:
                obstruction = dga.element({l: c for l, c in zip(tgt, vec) if c})
                return OrbitVerdict("refuted", refutation_level=2, obstruction=obstruction,
                                    nodes_used=nodes["used"])
            return None
        kernel = kernel_basis(mat)
        for offset in _offsets(len(kernel), budget):
            if nodes["used"] >= budget:
                return OrbitVerdict("inconclusive", depth_reached=k, nodes_used=nodes["used"])
            coords = list(particular)
            for c, kv in zip(offset, kernel):
                if c:
                    coords = [x + c * y for x, y in zip(coords, kv)]
            comp = dga.element({l: v for l, v in zip(src, coords) if v})
            chosen[k - 1] = comp
            nodes["used"] += 1
            verdict = dfs(k + 1, chosen)
            del chosen[k - 1]
            if verdict is not None:
                return verdict
            if not kernel:
                break
        return None

    verdict = dfs(2, {})
    if verdict is None:
        return OrbitVerdict("inconclusive", depth_reached=N, nodes_used=nodes["used"])
    return verdict


def push_twisting(phi, a):
    """Componentwise image of a twisting element under a validated
    bigraded dga map; the result is twisting in the target."""
    if not isinstance(phi, DgaMap):
        raise DomainError("push_twisting needs a validated DgaMap")
    if phi.source is not a.dga:
        raise DomainError("map source differs from the twisting element's dga")
    pushed = TwistingElement(
        phi.target, a.truncation, {r: phi.apply(c) for r, c in a.components.items()}
    )
    rep = is_twisting(pushed)
    if not rep.ok:
        raise DomainError(f"pushed element is not twisting: {rep}")
    return pushed


def push_gauge(phi, p):
    return GaugeElement(phi.target, p.truncation, {r: phi.apply(c) for r, c in p.components.items()})


# ---------------------------------------------------------------------------
# derivation homotopies between dga maps


@dataclass(frozen=True)
class OrbitHomotopyReport:
    ok: bool
    failed_law: str = ""
    failed_at: str = ""
    witness: object = None

    def __str__(self):
        if self.ok:
            return "derivation homotopy verified; −s(a) witnesses the gauge equivalence"
        return f"{self.failed_law} fails at {self.failed_at}"


def apply_degree_map(dga_target, images, element):
    out = dga_target.element()
    for label, c in element.coeffs.items():
        img = images.get(label)
        if img is not None:
            out = out + img.scale(c)
    return out


def check_degree_map(source, target, images, shift=(-1, 0)):
    """Validate that `images` defines a map lowering the first degree by one."""
    for label, img in images.items():
        r, t = source.bidegrees[label]
        want = (r + shift[0], t + shift[1])
        for l2 in img.coeffs:
            if target.bidegrees[l2] != want:
                raise DegreeError(f"s({label}) must lie in bidegree {want}")


def homotopy_orbit_check(f, g, s_images, a):
    """Verify that s is an (f,g)-derivation homotopy and that p′ = −s(a)
    witnesses the gauge equivalence of f(a) and g(a).

    Laws checked on the basis: f − g = sd + ds, and
    s(xy) = (−1)^{|x|} f(x)s(y) + s(x)g(y).
    """
    A, B = f.source, f.target
    if g.source is not A or g.target is not B:
        raise DomainError("f and g must share source and target")
    if a.dga is not A:
        raise DomainError("the twisting element must live in the source dga")
    s_images = {l: (v if isinstance(v, DgaElement) else B.element(v)) for l, v in s_images.items()}
    check_degree_map(A, B, s_images)

    def s_apply(element):
        return apply_degree_map(B, s_images, element)

    for label in sorted(A.bidegrees):
        e = A.basis_element(label)
        lhs = f(e) - g(e)
        rhs = s_apply(e.d()) + s_apply(e).d()
        if lhs != rhs:
            return OrbitHomotopyReport(False, "homotopy law f−g = sd+ds", label)
    for l1 in sorted(A.bidegrees):
        e1 = A.basis_element(l1)
        sign = -1 if A.total_degree(l1) % 2 else 1
        for l2 in sorted(A.bidegrees):
            e2 = A.basis_element(l2)
            lhs = s_apply(e1 * e2)
            rhs = f(e1).scale(sign) * s_apply(e2) + s_apply(e1) * g(e2)
            if lhs != rhs:
                return OrbitHomotopyReport(False, "derivation law", f"{l1}·{l2}")

    fa = push_twisting(f, a)
    ga = push_twisting(g, a)
    p = GaugeElement.from_perturbation(B, a.truncation, s_apply(a.as_element()).scale(-1))
    if gauge_act(fa, p) != ga or not orbit_relation_holds(fa, ga, p):
        return OrbitHomotopyReport(False, "gauge witness p′=−s(a)", "final verification")
    return OrbitHomotopyReport(True, witness=p)


# ---------------------------------------------------------------------------
# the simplicial construction D(X; H)


def build_DX(complex_, graded_group, max_group_degree=None, name=None):
    """The bigraded dga computing D(X; H): simplicial cochains of X with
    coefficients in the two-stage Hom dga of H, as the tensor dga."""
    if max_group_degree is None:
        max_group_degree = 8
    groups = list(graded_group)
    if len(groups) > max_group_degree + 1:
        raise SizeError(f"graded group goes beyond degree {max_group_degree}")
    cochains = simplicial_cochain_dga(complex_)
    hom = two_stage_hom_dga(groups)
    return tensor_dga(cochains, hom, name=name or "D(X;H)")
