"""Minimal multiplicative resolutions of relation-free graded
commutative algebras.

The resolution of a presentation with plain generators of even degree has
one extra generator per cup-one bundle of distinct plain generators with
total degree in [1, m]; the differential is the unshuffle boundary and
the augmentation sends a degree-zero word to its commutative monomial.
Exactness certificates decompose the tensor-algebra strata into
d-invariant summands indexed by the generator multiset of a word; the
homology of a summand only depends on the multiplicity pattern, so
summand verdicts are memoized across presentations.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations
from math import ceil

from .algebra import Generator, TensorElement, extend_derivation, word_multiply
from .cup1 import Cup1Monomial, cup1_boundary, cup1_pair, normalize_cup1
from .errors import DegreeError, DomainError, PreconditionError
from .linalg import IntMatrix, homology_at

INFINITY = None  # marker for the polynomial (m = ∞) case


@dataclass(frozen=True)
class CgaPresentation:
    """A relation-free cga presentation: even generators, range bound m.

    `m` is a positive integer or None for the polynomial (m = ∞) case.
    """

    generators: tuple
    m: object = INFINITY

    def __post_init__(self):
        gens = tuple(sorted(self.generators, key=lambda g: g.name))
        object.__setattr__(self, "generators", gens)
        names = [g.name for g in gens]
        if len(set(names)) != len(names):
            raise DomainError("duplicate generator names in presentation")
        for g in gens:
            if g.res_degree != 0:
                raise DomainError(f"presentation generator {g.name} must have resolution degree 0")
            if g.int_degree < 1:
                raise DomainError(f"presentation generator {g.name} must have positive degree")
        if self.m is not INFINITY and (not isinstance(self.m, int) or self.m < 1):
            raise DomainError("m must be a positive integer or the ∞ marker")

    @classmethod
    def of(cls, degrees, m=INFINITY):
        """Build from a name -> degree mapping."""
        return cls(tuple(Generator(n, 0, d) for n, d in degrees.items()), m)

    def monomials(self, degree):
        """Commutative monomials of the given degree, as sorted name tuples."""
        gens = self.generators
        out = []

        def walk(start, remaining, acc):
            if remaining == 0:
                out.append(tuple(acc))
                return
            for idx in range(start, len(gens)):
                g = gens[idx]
                if g.int_degree <= remaining:
                    acc.append(g.name)
                    walk(idx, remaining - g.int_degree, acc)
                    acc.pop()

        walk(0, degree, [])
        return out


@dataclass(frozen=True)
class ValidationReport:
    ok: bool
    violations: tuple = ()

    def __str__(self):
        if self.ok:
            return "presentation is relation-free in range"
        return "; ".join(self.violations)


def validate_presentation(p):
    """Check the relation-free range discipline.

    Generators must have even degree; for finite m the forbidden odd
    degrees are 2i−1 with 1 <= i <= (m+2)//2, for m = ∞ every odd degree.
    The presentation carries no relations and is a free Z-module, so the
    no-relations-through-m+1 and torsion-free-through-m conditions hold
    by construction.
    """
    violations = []
    for g in p.generators:
        if g.int_degree % 2:
            if p.m is INFINITY:
                violations.append(f"odd-degree generator {g.name} (degree {g.int_degree}) in the polynomial case")
            elif g.int_degree <= 2 * ((p.m + 2) // 2) - 1:
                violations.append(
                    f"odd-degree generator {g.name} (degree {g.int_degree}) inside the range forced even by m={p.m}"
                )
    return ValidationReport(not violations, tuple(violations))


class Resolution:
    """The minimal multiplicative resolution, truncated at total degree m."""

    def __init__(self, presentation, m, plain, bundles, images, canonical=False):
        self.presentation = presentation
        self.m = m
        self.plain = list(plain)
        self.bundles = list(bundles)
        self.images = dict(images)
        self.canonical = canonical
        self._letters = {letter.label(): letter for letter in self.plain + self.bundles}

    @property
    def letters(self):
        return self.plain + self.bundles

    def letter(self, label):
        try:
            return self._letters[label]
        except KeyError:
            raise DomainError(f"no generator {label!r} in the resolution") from None

    def d(self, element):
        return extend_derivation(self.images, element)

    def cup1(self, u, v):
        return cup1_pair(u, v)

    def rho(self, element):
        """Augmentation to the cga: commutative monomial map, bundles to 0."""
        out = {}
        for word, coeff in element.terms.items():
            if any(isinstance(letter, Cup1Monomial) for letter in word):
                continue
            mono = tuple(sorted(letter.name for letter in word))
            new = out.get(mono, 0) + coeff
            if new:
                out[mono] = new
            else:
                del out[mono]
        return out

    def __repr__(self):
        return f"<Resolution m={self.m} plain={len(self.plain)} bundles={len(self.bundles)}>"


def build_resolution(p, truncation=None):
    """Construct the resolution of a validated presentation.

    For m = ∞ the caller must pass a total-degree truncation.  Plain
    generators of degree <= m survive; the bundle generators are the
    cup-one monomials on distinct plain generators with total degree in
    [1, m].  Plain generators are closed and every bundle bounds by the
    unshuffle formula.
    """
    report = validate_presentation(p)
    if not report.ok:
        raise PreconditionError(str(report))
    if p.m is INFINITY:
        if truncation is None:
            raise DomainError("m = ∞ needs an explicit total-degree truncation")
        m = truncation
    else:
        m = p.m
    plain = [g for g in p.generators if g.int_degree <= m]
    bundles = []
    for k in range(2, len(plain) + 1):
        for combo in combinations(plain, k):
            total = sum(g.int_degree for g in combo) - (k - 1)
            if 1 <= total <= m:
                bundles.append(Cup1Monomial(combo))
    bundles.sort(key=lambda b: b.sort_key())
    zero = {g: TensorElement.zero() for g in plain}
    images = dict(zero)
    for b in bundles:
        images[b] = cup1_boundary(b, zero)
    return Resolution(p, m, plain, bundles, images, canonical=True)


# ---------------------------------------------------------------------------
# exactness certificates


def _stratum_words(counts, k, letters):
    """Words of exactly k block-letters using the multiset `counts` of
    plain generators; blocks have distinct members and come from `letters`
    (name tuple -> letter)."""
    names = sorted(counts)
    out = []

    def walk(remaining, blocks_left, acc):
        size = sum(remaining.values())
        if blocks_left == 0:
            if size == 0:
                out.append(tuple(acc))
            return
        if size == 0:
            return
        avail = sorted(n for n, c in remaining.items() if c)
        if size > blocks_left * len(avail) or size < blocks_left:
            return
        maxmult = max(remaining.values())
        if maxmult > blocks_left:
            return
        for bsize in range(1, len(avail) + 1):
            for combo in combinations(avail, bsize):
                key = tuple(combo)
                letter = letters.get(key)
                if letter is None:
                    continue
                nxt = dict(remaining)
                for nm in combo:
                    nxt[nm] -= 1
                acc.append(letter)
                walk(nxt, blocks_left - 1, acc)
                acc.pop()

    walk(dict(counts), k, [])
    return out


def _boundary_matrix(src_words, tgt_words, images):
    index = {w: i for i, w in enumerate(tgt_words)}
    rows = [[0] * len(src_words) for _ in tgt_words]
    for j, word in enumerate(src_words):
        dw = extend_derivation(images, TensorElement({word: 1}))
        for w, coeff in dw.terms.items():
            rows[index[w]][j] = coeff
    return IntMatrix(rows, cols=len(src_words))


class _SummandChecker:
    """Homology of one generator-multiset summand, positions on demand."""

    def __init__(self, mults):
        self.mults = mults
        gens = [Generator(f"w{i}", 0, 2) for i in range(len(mults))]
        self.counts = {g.name: c for g, c in zip(gens, mults)}
        self.size = sum(mults)
        letters = {}
        for k in range(1, len(gens) + 1):
            for combo in combinations(gens, k):
                key = tuple(g.name for g in combo)
                letters[key] = combo[0] if k == 1 else Cup1Monomial(combo)
        self.letters = letters
        zero = {g: TensorElement.zero() for g in gens}
        self.images = dict(zero)
        for letter in letters.values():
            if isinstance(letter, Cup1Monomial):
                self.images[letter] = cup1_boundary(letter, zero)
        self._strata = {}

    def stratum(self, k):
        if k < 0 or k > self.size:
            return []
        if k not in self._strata:
            self._strata[k] = _stratum_words(self.counts, k, self.letters)
        return self._strata[k]

    def negative_position_trivial(self, n):
        """H at resolution degree −n (n >= 1) of the summand complex."""
        k = self.size - n
        mid = self.stratum(k)
        if not mid:
            return True
        lo = self.stratum(k - 1)
        hi = self.stratum(k + 1)
        d_in = _boundary_matrix(lo, mid, self.images) if lo else None
        d_out = _boundary_matrix(mid, hi, self.images) if hi else IntMatrix.zeros(0, len(mid))
        return homology_at(d_out, d_in).is_trivial

    def res0_exact(self):
        """ker(augmentation) equals im(d) on the ordering stratum."""
        c0 = self.stratum(self.size)
        c1 = self.stratum(self.size - 1)
        rho = IntMatrix([[1] * len(c0)])
        d_in = _boundary_matrix(c1, c0, self.images) if c1 else None
        return homology_at(rho, d_in).is_trivial


_SUMMAND_CACHE = {}


def _summand_verdict(mults, position):
    """Cached verdict for ('res0' or n >= 1) of the pattern `mults`."""
    key = (mults, position)
    if key not in _SUMMAND_CACHE:
        checker = _SUMMAND_CACHE.get(("checker", mults))
        if checker is None:
            checker = _SUMMAND_CACHE[("checker", mults)] = _SummandChecker(mults)
        if position == "res0":
            _SUMMAND_CACHE[key] = checker.res0_exact()
        else:
            _SUMMAND_CACHE[key] = checker.negative_position_trivial(position)
    return _SUMMAND_CACHE[key]


def _resolution_multisets(plain, m):
    """Multisets of plain generators that can meet the range: the minimal
    total degree j − (s − 1) of a word on the multiset must be <= m.
    Adding a copy of any generator raises j − (s − 1), so pruning is safe."""
    out = []

    def walk(idx, counts, size, j):
        if size and j - (size - 1) > m:
            return
        if idx == len(plain):
            if size:
                out.append(dict(counts))
            return
        g = plain[idx]
        walk(idx + 1, counts, size, j)
        c = 0
        while True:
            c += 1
            new_j = j + c * g.int_degree
            new_size = size + c
            if new_j - (new_size - 1) > m:
                break
            counts[g.name] = c
            walk(idx + 1, counts, new_size, new_j)
        counts.pop(g.name, None)

    walk(0, {}, 0, 0)
    return out


@dataclass(frozen=True)
class DegreeCertificate:
    total_degree: int
    negative_positions: int
    negative_ok: bool
    exact_at_zero: bool

    @property
    def ok(self):
        return self.negative_ok and self.exact_at_zero


@dataclass(frozen=True)
class CertifyReport:
    ok: bool
    m: int
    rho_d_zero: bool
    rho_surjective: bool
    degrees: tuple = ()
    failure: str = ""

    def __str__(self):
        if self.ok:
            return f"resolution exact in range (total degree <= {self.m})"
        return f"certification failed: {self.failure}"


def certify_resolution(r):
    """Certify d² = 0, ρ∘d = 0, ρ surjectivity, acyclicity in negative
    resolution degrees and exactness at degree zero, through total
    degree m.  d² failures raise; everything else is report-valued."""
    for letter in r.letters:
        dd = r.d(r.d(TensorElement.of(letter)))
        if not dd.is_zero():
            raise DomainError(f"d² != 0 at {letter.label()}: {dd}")

    for letter in r.letters:
        if r.rho(r.d(TensorElement.of(letter))):
            return CertifyReport(
                False, r.m, False, True,
                failure=f"ρ∘d != 0 at {letter.label()}",
            )

    # surjectivity: every monomial of degree <= m is the image of its sorted word
    surjective = True
    for j in range(1, r.m + 1):
        for mono in r.presentation.monomials(j):
            word = tuple(r.letter(name) for name in mono)
            if r.rho(TensorElement({word: 1})) != {mono: 1}:
                surjective = False

    degree_map = {}

    def record(t, neg_ok=None, exact=None):
        entry = degree_map.setdefault(t, {"neg": 0, "neg_ok": True, "exact": True})
        if neg_ok is not None:
            entry["neg"] += 1
            entry["neg_ok"] = entry["neg_ok"] and neg_ok
        if exact is not None:
            entry["exact"] = entry["exact"] and exact

    use_cache = r.canonical
    degrees_by_name = {g.name: g.int_degree for g in r.plain}
    for counts in _resolution_multisets(r.plain, r.m):
        s = sum(counts.values())
        j = sum(degrees_by_name[n] * c for n, c in counts.items())
        mults = tuple(sorted(counts.values(), reverse=True))
        distinct = len(counts)
        n_hi = s - max(max(counts.values()), ceil(s / distinct))
        n_lo = max(1, j - r.m)
        checker = None
        if not use_cache:
            checker = _direct_checker(r, counts)
        for n in range(n_lo, n_hi + 1):
            if use_cache:
                ok = _summand_verdict(mults, n)
            else:
                ok = checker.negative_position_trivial(n)
            record(j - n, neg_ok=ok)
        if j <= r.m:
            if use_cache:
                ok = _summand_verdict(mults, "res0")
            else:
                ok = checker.res0_exact()
            record(j, exact=ok)

    degrees = tuple(
        DegreeCertificate(t, entry["neg"], entry["neg_ok"], entry["exact"])
        for t, entry in sorted(degree_map.items())
    )
    bad = [c for c in degrees if not c.ok]
    failure = ""
    if bad:
        failure = f"homology does not vanish in range at total degree {bad[0].total_degree}"
    if not surjective:
        failure = "augmentation not surjective in range"
    return CertifyReport(not bad and surjective, r.m, True, surjective, degrees, failure)


class _DirectChecker(_SummandChecker):
    """Summand checker over the resolution's own letters and differential."""

    def __init__(self, r, counts):
        self.counts = dict(counts)
        self.size = sum(counts.values())
        letters = {}
        for letter in r.letters:
            if isinstance(letter, Cup1Monomial):
                letters[tuple(f.name for f in letter.factors)] = letter
            else:
                letters[(letter.name,)] = letter
        self.letters = letters
        self.images = r.images
        self._strata = {}


def _direct_checker(r, counts):
    return _DirectChecker(r, counts)


# ---------------------------------------------------------------------------
# induced maps RH(f) and derivation homotopies


class ResolutionMap:
    """A multiplicative map between resolutions, given by letter images."""

    def __init__(self, source, target, images):
        self.source = source
        self.target = target
        self.images = dict(images)
        self._word_cache = {}

    @classmethod
    def identity(cls, r):
        return cls(r, r, {letter: TensorElement.of(letter) for letter in r.letters})

    def apply(self, element):
        out = TensorElement.zero()
        for word, coeff in element.terms.items():
            img = self._word_cache.get(word)
            if img is None:
                img = TensorElement.unit()
                for letter in word:
                    try:
                        img = word_multiply(img, self.images[letter])
                    except KeyError:
                        raise DomainError(f"map has no image for {letter.label()}") from None
                self._word_cache[word] = img
            out = out + img.scale(coeff)
        return out

    __call__ = apply

    def verify_chain_map(self):
        """(True, None) or (False, offending letter label)."""
        for letter in sorted(self.source.letters, key=lambda l: l.sort_key()):
            lhs = self.apply(self.source.d(TensorElement.of(letter)))
            rhs = self.target.d(self.apply(TensorElement.of(letter)))
            if lhs != rhs:
                return False, letter.label()
        return True, None


def _normalize_cga_element(target, value):
    """Sort each word into the commutative normal form of the target cga."""
    out = TensorElement.zero()
    for word, coeff in value.terms.items():
        letters = [target.letter(l.name) for l in word]
        letters.sort(key=lambda l: l.name)
        out = out + TensorElement({tuple(letters): coeff})
    return out


def build_rh_map(f_on_generators, source, target):
    """The induced map of resolutions: plain generators map by f, a
    bundle maps to the cup-one of the images under right-most
    association, and the whole map extends multiplicatively.  The chain
    map property is verified on every generator in range."""
    if target.m < source.m:
        raise DomainError("target resolution is truncated below the source range")
    images = {}
    for g in source.plain:
        try:
            value = f_on_generators[g.name]
        except KeyError:
            raise DomainError(f"no image given for generator {g.name}") from None
        value = _normalize_cga_element(target, value)
        deg = value.bidegree()
        if deg is not None and deg != (0, g.int_degree):
            raise DegreeError(
                f"image of {g.name} has bidegree {deg}, expected {(0, g.int_degree)}"
            )
        images[g] = value
    for b in source.bundles:
        img = images[b.factors[-1]]
        for f in reversed(b.factors[:-1]):
            img = cup1_pair(images[f], img)
        images[b] = img
    rh = ResolutionMap(source, target, images)
    ok, witness = rh.verify_chain_map()
    if not ok:
        raise DomainError(f"induced map is not a chain map at generator {witness}")
    return rh


def derivation_homotopic_map(alpha, s0):
    """The dga self-map homotopic to `alpha` along `s0`.

    Plain generators map to α(a) − d(s0(a)); bundle images are corrected
    recursively so the homotopy laws hold: with s extended by the bundle
    recursion, β(b) = α(b) − d(s(b)) − s(d(b)).  The result is verified
    to be a chain map."""
    source, target = alpha.source, alpha.target
    s_letter = {}
    images = {}
    for g in source.plain:
        value = s0.get(g.name, TensorElement.zero())
        s_letter[g] = value
        images[g] = alpha(TensorElement.of(g)) - target.d(value)

    def s_element(element):
        out = TensorElement.zero()
        for word, coeff in element.terms.items():
            out = out + _s_word(word).scale(coeff)
        return out

    def _s_word(word):
        if not word:
            return TensorElement.zero()
        head, rest = word[0], word[1:]
        rest_elt = TensorElement({rest: 1})
        sign = -1 if head.total_degree % 2 else 1
        beta_rest = TensorElement.unit()
        for letter in rest:
            beta_rest = word_multiply(beta_rest, images[letter])
        out = word_multiply(alpha(TensorElement.of(head)).scale(sign), s_element(rest_elt))
        return out + word_multiply(s_letter[head], beta_rest)

    for b in sorted(source.bundles, key=lambda b: (-b.res_degree, b.sort_key())):
        head = b.factors[0]
        z = b.factors[1] if len(b.factors) == 2 else Cup1Monomial(b.factors[1:])
        beta_z = images[z]
        term = -cup1_pair(alpha(TensorElement.of(head)), s_letter[z])
        term = term + cup1_pair(s_letter[head], beta_z)
        term = term + word_multiply(s_letter[z], s_letter[head])
        s_letter[b] = term
        images[b] = alpha(TensorElement.of(b)) - target.d(term) - s_element(source.d(TensorElement.of(b)))

    beta = ResolutionMap(source, target, images)
    ok, witness = beta.verify_chain_map()
    if not ok:
        raise DomainError(f"derived map is not a chain map at {witness}")
    return beta


@dataclass(frozen=True)
class HomotopyReport:
    ok: bool
    homotopy_law_failures: tuple
    product_law_failures: tuple
    s_images: dict = field(compare=False, default=None)

    def __str__(self):
        if self.ok:
            return "derivation homotopy laws verified on the generator set"
        parts = []
        if self.homotopy_law_failures:
            parts.append(f"sd+ds != α−β at {', '.join(self.homotopy_law_failures)}")
        if self.product_law_failures:
            parts.append(f"product law fails at {', '.join(self.product_law_failures)}")
        return "; ".join(parts)


def extend_homotopy(alpha, beta, s0):
    """Extend a homotopy from plain generators to all bundles by

        s(a0⌣₁z) = −α(a0)⌣₁s(z) + s(a0)⌣₁β(z) + s(z)·s(a0)

    and verify the two derivation-homotopy laws on the generator set.
    `s0` maps plain generator names to target elements with
    d(s0(a)) = α(a) − β(a); anything else is a precondition error."""
    source, target = alpha.source, alpha.target
    if beta.source is not source or beta.target is not target:
        raise DomainError("α and β must share source and target")
    s_letter = {}
    for g in source.plain:
        value = s0.get(g.name, TensorElement.zero())
        deg = value.bidegree()
        if deg is not None and deg != (-1, g.int_degree):
            raise DegreeError(f"s0({g.name}) has bidegree {deg}, expected {(-1, g.int_degree)}")
        want = alpha(TensorElement.of(g)) - beta(TensorElement.of(g))
        if target.d(value) != want:
            raise PreconditionError(f"d·s0 != α−β at generator {g.name}")
        s_letter[g] = value

    def s_element(element):
        out = TensorElement.zero()
        for word, coeff in element.terms.items():
            out = out + _s_word(word).scale(coeff)
        return out

    def _s_word(word):
        if not word:
            return TensorElement.zero()
        head, rest = word[0], word[1:]
        rest_elt = TensorElement({rest: 1})
        head_elt = TensorElement.of(head)
        sign = -1 if head.total_degree % 2 else 1
        out = alpha(head_elt).scale(sign)
        out = word_multiply(out, s_element(rest_elt))
        return out + word_multiply(s_letter[head], beta(rest_elt))

    for b in sorted(source.bundles, key=lambda b: (-b.res_degree, b.sort_key())):
        head = b.factors[0]
        z = b.factors[1] if len(b.factors) == 2 else Cup1Monomial(b.factors[1:])
        sz = s_letter[z]
        term = -cup1_pair(alpha(TensorElement.of(head)), sz)
        term = term + cup1_pair(s_letter[head], beta(TensorElement.of(z)))
        term = term + word_multiply(sz, s_letter[head])
        s_letter[b] = term

    law_failures = []
    for letter in source.letters:
        elt = TensorElement.of(letter)
        lhs = target.d(s_letter[letter]) + s_element(source.d(elt))
        rhs = alpha(elt) - beta(elt)
        if lhs != rhs:
            law_failures.append(letter.label())
    product_failures = []
    for x in source.letters:
        for y in source.letters:
            prod = TensorElement.of(x, y)
            sign = -1 if x.total_degree % 2 else 1
            expect = word_multiply(alpha(TensorElement.of(x)).scale(sign), s_letter[y])
            expect = expect + word_multiply(s_letter[x], beta(TensorElement.of(y)))
            if s_element(prod) != expect:
                product_failures.append(f"{x.label()}·{y.label()}")
    return HomotopyReport(
        not law_failures and not product_failures,
        tuple(law_failures),
        tuple(product_failures),
        {letter.label(): img for letter, img in s_letter.items()},
    )
