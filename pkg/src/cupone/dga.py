"""Finite-rank bigraded differential graded algebras.

A BigradedDGA stores chosen bases per bidegree (r, t), the differential
of bidegree (1, 0) and the product as structure constants on basis
labels.  Bidegrees absent from the table are genuinely zero modules;
constructors populate every component of their natural finite support,
so dropped products encode honest truncation.  Construction validates
d² = 0, associativity, unit laws and the Leibniz rule.

Constructors: simplicial cochains with the front/back-face cup product,
the two-stage Hom dga of a graded abelian group, tensor products
B ⊗ C with the Koszul sign, and free r-truncated dgas for tests.
"""

from __future__ import annotations

from itertools import combinations

from .errors import DegreeError, DomainError, SizeError
from .linalg import FGAbelianGroup

MAX_VALIDATED_BASIS = 160


def _merge(into, terms, coeff=1):
    for label, c in terms.items():
        new = into.get(label, 0) + coeff * c
        if new:
            into[label] = new
        else:
            into.pop(label, None)


class DgaElement:
    """Sparse element of a BigradedDGA: label -> integer coefficient."""

    __slots__ = ("dga", "coeffs")

    def __init__(self, dga, coeffs=None):
        self.dga = dga
        self.coeffs = {}
        if coeffs:
            for label, c in coeffs.items():
                if c:
                    if label not in dga.bidegrees:
                        raise DomainError(f"unknown basis label {label!r}")
                    self.coeffs[label] = int(c)

    def is_zero(self):
        return not self.coeffs

    def __eq__(self, other):
        return (
            isinstance(other, DgaElement)
            and self.dga is other.dga
            and self.coeffs == other.coeffs
        )

    def __hash__(self):
        return hash(frozenset(self.coeffs.items()))

    def __add__(self, other):
        self._same(other)
        out = dict(self.coeffs)
        _merge(out, other.coeffs)
        return DgaElement(self.dga, out)

    def __sub__(self, other):
        return self + (-other)

    def __neg__(self):
        return DgaElement(self.dga, {l: -c for l, c in self.coeffs.items()})

    def scale(self, k):
        return DgaElement(self.dga, {l: k * c for l, c in self.coeffs.items()} if k else {})

    def __rmul__(self, k):
        if isinstance(k, int):
            return self.scale(k)
        return NotImplemented

    def __mul__(self, other):
        if isinstance(other, int):
            return self.scale(other)
        self._same(other)
        out = {}
        for l1, c1 in self.coeffs.items():
            for l2, c2 in other.coeffs.items():
                table = self.dga.products.get((l1, l2))
                if table:
                    _merge(out, table, c1 * c2)
        return DgaElement(self.dga, out)

    def d(self):
        out = {}
        for label, c in self.coeffs.items():
            table = self.dga.diff.get(label)
            if table:
                _merge(out, table, c)
        return DgaElement(self.dga, out)

    def component(self, r, t):
        return DgaElement(
            self.dga,
            {l: c for l, c in self.coeffs.items() if self.dga.bidegrees[l] == (r, t)},
        )

    def components_by_bidegree(self):
        out = {}
        for label, c in self.coeffs.items():
            out.setdefault(self.dga.bidegrees[label], {})[label] = c
        return {deg: DgaElement(self.dga, d) for deg, d in sorted(out.items())}

    def _same(self, other):
        if self.dga is not other.dga:
            raise DomainError("elements of different dgas")

    def __str__(self):
        if not self.coeffs:
            return "0"
        chunks = []
        for label in sorted(self.coeffs):
            c = self.coeffs[label]
            body = label if abs(c) == 1 else f"{abs(c)}·{label}"
            chunks.append(("+ " if c > 0 else "- ") + body if chunks else (body if c > 0 else f"-{body}"))
        return " ".join(chunks)

    def __repr__(self):
        return f"<DgaElement {self}>"


class BigradedDGA:
    """Bigraded dga given by bases, differential table and product table."""

    def __init__(self, name, bidegrees, diff, products, unit, validate=True):
        self.name = name
        self.bidegrees = dict(bidegrees)
        self.diff = {l: dict(t) for l, t in diff.items() if t}
        self.products = {k: dict(t) for k, t in products.items() if t}
        self.unit_coeffs = dict(unit)
        if validate:
            self._validate()

    # -- helpers -----------------------------------------------------------

    def element(self, coeffs=None):
        return DgaElement(self, coeffs)

    def basis_element(self, label, coeff=1):
        return DgaElement(self, {label: coeff})

    @property
    def unit(self):
        return DgaElement(self, self.unit_coeffs)

    def basis_of(self, r, t):
        return sorted(l for l, deg in self.bidegrees.items() if deg == (r, t))

    def components(self):
        out = {}
        for label, deg in self.bidegrees.items():
            out.setdefault(deg, []).append(label)
        return {deg: sorted(labels) for deg, labels in sorted(out.items())}

    def total_degree(self, label):
        r, t = self.bidegrees[label]
        return r + t

    def differential_matrix(self, r, t):
        """Matrix of d from (r, t) to (r+1, t) on the sorted bases."""
        from .linalg import IntMatrix

        src = self.basis_of(r, t)
        tgt = self.basis_of(r + 1, t)
        index = {l: i for i, l in enumerate(tgt)}
        rows = [[0] * len(src) for _ in tgt]
        for j, label in enumerate(src):
            for l2, c in self.diff.get(label, {}).items():
                rows[index[l2]][j] = c
        return IntMatrix(rows, cols=len(src))

    # -- validation --------------------------------------------------------

    def _validate(self):
        n = len(self.bidegrees)
        if n > MAX_VALIDATED_BASIS:
            raise SizeError(f"basis of size {n} exceeds the validation guard")
        for label, table in self.diff.items():
            r, t = self.bidegrees[label]
            for l2 in table:
                if self.bidegrees[l2] != (r + 1, t):
                    raise DegreeError(f"d({label}) hits {l2} outside bidegree {(r + 1, t)}")
        for (l1, l2), table in self.products.items():
            r1, t1 = self.bidegrees[l1]
            r2, t2 = self.bidegrees[l2]
            for l3 in table:
                if self.bidegrees[l3] != (r1 + r2, t1 + t2):
                    raise DegreeError(f"{l1}·{l2} hits {l3} outside bidegree {(r1 + r2, t1 + t2)}")
        one = self.unit
        if one.d() != self.element():
            raise DomainError("d(1) != 0")
        labels = sorted(self.bidegrees)
        for label in labels:
            e = self.basis_element(label)
            if e.d().d() != self.element():
                raise DomainError(f"d² != 0 at {label}")
            if one * e != e or e * one != e:
                raise DomainError(f"unit law fails at {label}")
        for l1 in labels:
            e1 = self.basis_element(l1)
            d1 = e1.d()
            sign = -1 if self.total_degree(l1) % 2 else 1
            for l2 in labels:
                e2 = self.basis_element(l2)
                if (e1 * e2).d() != d1 * e2 + (e1 * e2.d()).scale(sign):
                    raise DomainError(f"Leibniz fails at {l1}·{l2}")
        for l1 in labels:
            e1 = self.basis_element(l1)
            for l2 in labels:
                e12 = e1 * self.basis_element(l2)
                for l3 in labels:
                    e3 = self.basis_element(l3)
                    if e12 * e3 != e1 * (self.basis_element(l2) * e3):
                        raise DomainError(f"associativity fails at {l1}·{l2}·{l3}")

    def __repr__(self):
        return f"<BigradedDGA {self.name}: {len(self.bidegrees)} basis elements>"


class DgaMap:
    """A bigrading-preserving dga map, validated on construction."""

    def __init__(self, source, target, images, name="φ"):
        self.source = source
        self.target = target
        self.name = name
        self.images = {}
        for label, img in images.items():
            elt = img if isinstance(img, DgaElement) else target.element(img)
            self.images[label] = elt
        self._validate()

    def apply(self, element):
        out = self.target.element()
        for label, c in element.coeffs.items():
            out = out + self.images.get(label, self.target.element()).scale(c)
        return out

    __call__ = apply

    def compose(self, other):
        if other.target is not self.source:
            raise DomainError("composition mismatch")
        return DgaMap(
            other.source,
            self.target,
            {l: self.apply(img) for l, img in other.images.items()},
            name=f"{self.name}∘{other.name}",
        )

    def _validate(self):
        for label in self.source.bidegrees:
            img = self.images.get(label)
            if img is None:
                self.images[label] = self.target.element()
                continue
            deg = self.source.bidegrees[label]
            for l2 in img.coeffs:
                if self.target.bidegrees[l2] != deg:
                    raise DegreeError(f"{self.name}({label}) does not preserve bidegree {deg}")
        for label in sorted(self.source.bidegrees):
            e = self.source.basis_element(label)
            if self.apply(e.d()) != self.apply(e).d():
                raise DomainError(f"{self.name} is not a chain map at {label}")
        for l1 in sorted(self.source.bidegrees):
            for l2 in sorted(self.source.bidegrees):
                e1 = self.source.basis_element(l1)
                e2 = self.source.basis_element(l2)
                if self.apply(e1 * e2) != self.apply(e1) * self.apply(e2):
                    raise DomainError(f"{self.name} is not multiplicative at {l1}·{l2}")
        if self.apply(self.source.unit) != self.target.unit:
            raise DomainError(f"{self.name} does not preserve the unit")

    @classmethod
    def identity(cls, dga):
        return cls(dga, dga, {l: {l: 1} for l in dga.bidegrees}, name="id")


# ---------------------------------------------------------------------------
# simplicial complexes and their cochain dgas


class SimplicialComplex:
    """A finite abstract simplicial complex on integer vertices."""

    def __init__(self, simplices):
        closed = set()
        for s in simplices:
            s = tuple(sorted(set(int(v) for v in s)))
            if not s:
                raise DomainError("empty simplex")
            for k in range(1, len(s) + 1):
                for face in combinations(s, k):
                    closed.add(face)
        if not closed:
            raise DomainError("empty complex")
        self.simplices = sorted(closed, key=lambda s: (len(s), s))

    def by_dim(self):
        out = {}
        for s in self.simplices:
            out.setdefault(len(s) - 1, []).append(s)
        return out

    @property
    def dimension(self):
        return max(len(s) for s in self.simplices) - 1


def _simplex_label(s):
    return "[" + ",".join(str(v) for v in s) + "]"


def simplicial_cochain_dga(complex_, name=None):
    """Simplicial cochains with the front-face/back-face cup product.

    The basis in degree i is the dual of the i-simplices; the coboundary
    carries the usual alternating vertex-insertion signs and the product
    is (σ* ⌣ τ*)(ρ) = σ*(front ρ)·τ*(back ρ)."""
    X = complex_ if isinstance(complex_, SimplicialComplex) else SimplicialComplex(complex_)
    by_dim = X.by_dim()
    vertices = set(v for s in X.simplices for v in s)
    bidegrees = {_simplex_label(s): (len(s) - 1, 0) for s in X.simplices}

    diff = {}
    for s in X.simplices:
        image = {}
        dim = len(s)
        for t in by_dim.get(dim, ()):  # cofaces: one vertex added
            extra = set(t) - set(s)
            if len(extra) == 1 and set(s) <= set(t):
                pos = t.index(next(iter(extra)))
                image[_simplex_label(t)] = -1 if pos % 2 else 1
        if image:
            diff[_simplex_label(s)] = image

    products = {}
    for rho in X.simplices:
        for cut in range(len(rho)):
            front = rho[: cut + 1]
            back = rho[cut:]
            key = (_simplex_label(front), _simplex_label(back))
            products.setdefault(key, {})[_simplex_label(rho)] = 1

    unit = {_simplex_label((v,)): 1 for v in sorted(vertices)}
    return BigradedDGA(name or "C*(X)", bidegrees, diff, products, unit)


# ---------------------------------------------------------------------------
# the two-stage Hom dga of a graded abelian group


def _stage_sizes(group):
    """(free+torsion, torsion) coordinate counts of the two-stage resolution."""
    return group.rank + len(group.torsion), len(group.torsion)


def _hom_label(q, j, b, q2, j2, b2):
    return f"E({q},{j},{b}|{q2},{j2},{b2})"


def two_stage_hom_dga(graded_group, name=None):
    """Hom(R, R) of the canonical two-stage free resolutions of a graded
    abelian group, with the composition product.

    A basis element sends coordinate b of stage j over degree q to
    coordinate b2 of stage j2 over degree q2 and has bidegree
    (j − j2, q − q2).  The differential is ∂∘f − (−1)^{|f|} f∘∂."""
    groups = dict(enumerate(graded_group))
    sizes = {q: _stage_sizes(g) for q, g in groups.items()}
    orders = {q: list(g.torsion) for q, g in groups.items()}

    coords = []  # (q, j, b)
    for q, (n0, n1) in sorted(sizes.items()):
        coords.extend((q, 0, b) for b in range(n0))
        coords.extend((q, 1, b) for b in range(n1))

    bidegrees = {}
    for (q, j, b) in coords:
        for (q2, j2, b2) in coords:
            bidegrees[_hom_label(q, j, b, q2, j2, b2)] = (j - j2, q - q2)

    def boundary_pairs(q):
        """∂: stage-1 coordinate i maps to order_i times torsion coordinate."""
        rank = groups[q].rank
        return [(i, rank + i, orders[q][i]) for i in range(len(orders[q]))]

    diff = {}
    for (q, j, b) in coords:
        for (q2, j2, b2) in coords:
            label = _hom_label(q, j, b, q2, j2, b2)
            image = {}
            sign = -1 if ((j - j2) + (q - q2)) % 2 else 1
            # postcompose with ∂ on the target
            if j2 == 1:
                for (src, dst, order) in boundary_pairs(q2):
                    if src == b2:
                        _merge(image, {_hom_label(q, j, b, q2, 0, dst): order})
            # precompose with ∂ on the source
            if j == 0:
                for (src, dst, order) in boundary_pairs(q):
                    if dst == b:
                        _merge(image, {_hom_label(q, 1, src, q2, j2, b2): -sign * order})
            if image:
                diff[label] = image

    products = {}
    for (q, j, b) in coords:
        for (q2, j2, b2) in coords:
            left = _hom_label(q, j, b, q2, j2, b2)
            for (q3, j3, b3) in coords:
                right = _hom_label(q3, j3, b3, q, j, b)
                # left ∘ right: right feeds (q, j, b) into left
                products[(left, right)] = {_hom_label(q3, j3, b3, q2, j2, b2): 1}

    unit = {_hom_label(q, j, b, q, j, b): 1 for (q, j, b) in coords}
    return BigradedDGA(name or "Hom(R,R)", bidegrees, diff, products, unit)


# ---------------------------------------------------------------------------
# tensor products and free truncated dgas


def tensor_label(bl, cl):
    return f"{bl}⊗{cl}"


def tensor_dga(B, C, name=None):
    """B ⊗̂ C with components A^{r,t} = ⊕_{r=i+j} B^i ⊗ C^{j,t}.

    B must be concentrated in second degree 0.  The differential is
    d^B⊗1 + 1⊗d^C with the Koszul sign; the product carries the sign
    (−1)^{|c||b'|} on (b⊗c)(b'⊗c')."""
    for label, (r, t) in B.bidegrees.items():
        if t != 0:
            raise DomainError("the left tensor factor must be a singly graded dga")
    bidegrees = {}
    for bl, (i, _z) in B.bidegrees.items():
        for cl, (j, t) in C.bidegrees.items():
            bidegrees[tensor_label(bl, cl)] = (i + j, t)

    diff = {}
    for bl, (i, _z) in B.bidegrees.items():
        for cl, (j, t) in C.bidegrees.items():
            image = {}
            for bl2, c in B.diff.get(bl, {}).items():
                _merge(image, {tensor_label(bl2, cl): c})
            sign = -1 if i % 2 else 1
            for cl2, c in C.diff.get(cl, {}).items():
                _merge(image, {tensor_label(bl, cl2): sign * c})
            if image:
                diff[tensor_label(bl, cl)] = image

    products = {}
    for (bl1, cl1), deg1 in (((b, c), None) for b in B.bidegrees for c in C.bidegrees):
        for bl2 in B.bidegrees:
            btable = B.products.get((bl1, bl2))
            if not btable:
                continue
            for cl2 in C.bidegrees:
                ctable = C.products.get((cl1, cl2))
                if not ctable:
                    continue
                tc = C.total_degree(cl1)
                tb = B.total_degree(bl2)
                sign = -1 if (tc * tb) % 2 else 1
                out = {}
                for bl3, cb in btable.items():
                    for cl3, cc in ctable.items():
                        _merge(out, {tensor_label(bl3, cl3): sign * cb * cc})
                if out:
                    products[(tensor_label(bl1, cl1), tensor_label(bl2, cl2))] = out

    unit = {}
    for bl, cb in B.unit_coeffs.items():
        for cl, cc in C.unit_coeffs.items():
            unit[tensor_label(bl, cl)] = cb * cc
    return BigradedDGA(name or f"{B.name}⊗{C.name}", bidegrees, diff, products, unit)


def free_truncated_dga(generators, diffs, max_r=None, min_t=None, name=None):
    """Free associative dga on bigraded generators, truncated to a window.

    Two window shapes: words of first degree <= max_r (needs every
    generator to have first degree >= 1), or words of second degree
    >= min_t (needs every generator to have second degree <= −1).  A
    min_t window is closed under the differential, which preserves the
    second degree; an r-window drops d at its top edge.

    `generators`: list of (name, r, t); `diffs`: name -> list of
    (coeff, word) with word a tuple of generator names.
    """
    if max_r is None and min_t is None:
        raise DomainError("free truncated dga needs a window bound")
    gens = {}
    for (nm, r, t) in generators:
        if max_r is not None and r < 1:
            raise DomainError("an r-window needs generators of first degree >= 1")
        if max_r is None and t > -1:
            raise DomainError("a t-window needs generators of second degree <= -1")
        if nm in gens:
            raise DomainError(f"duplicate generator {nm}")
        gens[nm] = (r, t)

    def fits(w):
        r = sum(gens[nm][0] for nm in w)
        t = sum(gens[nm][1] for nm in w)
        return (max_r is None or r <= max_r) and (min_t is None or t >= min_t)

    words = [()]
    frontier = [()]
    while frontier:
        nxt = []
        for w in frontier:
            for nm in gens:
                cand = w + (nm,)
                if fits(cand):
                    nxt.append(cand)
        words.extend(nxt)
        frontier = nxt

    def wlabel(w):
        return "·".join(w) if w else "1"

    bidegrees = {}
    for w in words:
        r = sum(gens[nm][0] for nm in w)
        t = sum(gens[nm][1] for nm in w)
        bidegrees[wlabel(w)] = (r, t)

    products = {}
    for w1 in words:
        for w2 in words:
            if fits(w1 + w2):
                products[(wlabel(w1), wlabel(w2))] = {wlabel(w1 + w2): 1}

    gen_images = {nm: list(terms) for nm, terms in diffs.items()}

    def d_word(w):
        image = {}
        sign = 1
        for pos, nm in enumerate(w):
            for coeff, img_word in gen_images.get(nm, ()):  # image of one letter
                new_word = w[:pos] + tuple(img_word) + w[pos + 1:]
                if fits(new_word):
                    _merge(image, {wlabel(new_word): sign * coeff})
            if (gens[nm][0] + gens[nm][1]) % 2:
                sign = -sign
        return image

    diff = {}
    for w in words:
        image = d_word(w)
        if image:
            diff[wlabel(w)] = image

    return BigradedDGA(name or "T(V)/window", bidegrees, diff, products, {"1": 1})


def graded_group_from_lists(torsion_lists):
    """Convenience: list of divisor lists -> list of FGAbelianGroup."""
    return [FGAbelianGroup.from_divisors(divs) for divs in torsion_lists]
