"""Sparse multivariate polynomials over exact rationals, plus the symbolic
cycle-index machinery built on them.

A MultiPoly is a map from dense exponent tuples (one slot per variable of a
declared alphabet) to nonzero Fraction coefficients; map equality is
polynomial equality.  On top of it live the symbolic b_m polynomials, two
independent brute-force oracles over the symmetric group, and exact
verifiers for the product/recursion identities used by the shape theorems.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import factorial
from typing import Callable, Iterable, Iterator, Mapping, Sequence

from .errors import CheckFailedError, InvalidInputError, SizeLimitError
from .rationals import as_fraction, format_rational
from .seqcore import WeightSeq, falling_factorial

Monomial = tuple[int, ...]

PERMUTATION_LIMIT = 9
CYCLE_TYPE_LIMIT = 40


class MultiPoly:
    """Sparse polynomial over a fixed, ordered variable alphabet.

    Instances are treated as immutable; all arithmetic returns new objects
    and never stores zero coefficients.
    """

    __slots__ = ("alphabet", "terms")

    def __init__(self, alphabet: Sequence[str], terms: Mapping[Monomial, Fraction] | None = None):
        self.alphabet = tuple(alphabet)
        clean: dict[Monomial, Fraction] = {}
        if terms:
            width = len(self.alphabet)
            for exps, coeff in terms.items():
                if len(exps) != width:
                    raise InvalidInputError(
                        f"exponent tuple {exps} does not match alphabet width {width}")
                coeff = as_fraction(coeff)
                if coeff:
                    clean[tuple(exps)] = coeff
        self.terms = clean

    # -- constructors ------------------------------------------------------

    @classmethod
    def zero(cls, alphabet: Sequence[str]) -> "MultiPoly":
        return cls(alphabet)

    @classmethod
    def constant(cls, alphabet: Sequence[str], value) -> "MultiPoly":
        value = as_fraction(value)
        if not value:
            return cls(alphabet)
        return cls(alphabet, {tuple([0] * len(alphabet)): value})

    @classmethod
    def variable(cls, alphabet: Sequence[str], name: str) -> "MultiPoly":
        alphabet = tuple(alphabet)
        try:
            idx = alphabet.index(name)
        except ValueError:
            raise InvalidInputError(f"unknown variable {name!r}") from None
        exps = [0] * len(alphabet)
        exps[idx] = 1
        return cls(alphabet, {tuple(exps): Fraction(1)})

    @classmethod
    def monomial(cls, alphabet: Sequence[str], exps: Sequence[int], coeff=1) -> "MultiPoly":
        return cls(alphabet, {tuple(exps): as_fraction(coeff)})

    # -- ring operations ---------------------------------------------------

    def _require_same_alphabet(self, other: "MultiPoly") -> None:
        if self.alphabet != other.alphabet:
            raise InvalidInputError(
                f"alphabet mismatch: {self.alphabet} vs {other.alphabet}")

    def __add__(self, other) -> "MultiPoly":
        if not isinstance(other, MultiPoly):
            other = MultiPoly.constant(self.alphabet, other)
        self._require_same_alphabet(other)
        out = dict(self.terms)
        for exps, coeff in other.terms.items():
            acc = out.get(exps)
            if acc is None:
                out[exps] = coeff
            else:
                acc = acc + coeff
                if acc:
                    out[exps] = acc
                else:
                    del out[exps]
        result = MultiPoly.__new__(MultiPoly)
        result.alphabet = self.alphabet
        result.terms = out
        return result

    def __neg__(self) -> "MultiPoly":
        result = MultiPoly.__new__(MultiPoly)
        result.alphabet = self.alphabet
        result.terms = {e: -c for e, c in self.terms.items()}
        return result

    def __sub__(self, other) -> "MultiPoly":
        if not isinstance(other, MultiPoly):
            other = MultiPoly.constant(self.alphabet, other)
        return self + (-other)

    def __mul__(self, other) -> "MultiPoly":
        if not isinstance(other, MultiPoly):
            scalar = as_fraction(other)
            if not scalar:
                return MultiPoly(self.alphabet)
            result = MultiPoly.__new__(MultiPoly)
            result.alphabet = self.alphabet
            result.terms = {e: c * scalar for e, c in self.terms.items()}
            return result
        self._require_same_alphabet(other)
        out: dict[Monomial, Fraction] = {}
        small, large = (self.terms, other.terms)
        if len(small) > len(large):
            small, large = large, small
        for e1, c1 in small.items():
            for e2, c2 in large.items():
                key = tuple(a + b for a, b in zip(e1, e2))
                acc = out.get(key)
                if acc is None:
                    out[key] = c1 * c2
                else:
                    acc = acc + c1 * c2
                    if acc:
                        out[key] = acc
                    else:
                        del out[key]
        result = MultiPoly.__new__(MultiPoly)
        result.alphabet = self.alphabet
        result.terms = out
        return result

    __rmul__ = __mul__

    def __pow__(self, power: int) -> "MultiPoly":
        if not isinstance(power, int) or power < 0:
            raise InvalidInputError("polynomial powers must be nonnegative integers")
        out = MultiPoly.constant(self.alphabet, 1)
        base = self
        n = power
        while n:
            if n & 1:
                out = out * base
            n >>= 1
            if n:
                base = base * base
        return out

    def __eq__(self, other) -> bool:
        if not isinstance(other, MultiPoly):
            return NotImplemented
        return self.alphabet == other.alphabet and self.terms == other.terms

    def __hash__(self):
        return hash((self.alphabet, frozenset(self.terms.items())))

    # -- queries -----------------------------------------------------------

    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self) -> bool:
        return bool(self.terms)

    def degree(self) -> int:
        """Total degree; -1 for the zero polynomial."""
        if not self.terms:
            return -1
        return max(sum(e) for e in self.terms)

    def coeff(self, exps: Sequence[int]) -> Fraction:
        return self.terms.get(tuple(exps), Fraction(0))

    def leading_term(self, key: Callable[[Monomial], object]) -> tuple[Monomial, Fraction]:
        if not self.terms:
            raise InvalidInputError("zero polynomial has no leading term")
        mon = max(self.terms, key=key)
        return mon, self.terms[mon]

    def evaluate(self, point: Mapping[str, Fraction] | Sequence[Fraction]) -> Fraction:
        if isinstance(point, Mapping):
            values = [as_fraction(point[name]) for name in self.alphabet]
        else:
            if len(point) != len(self.alphabet):
                raise InvalidInputError("evaluation point has wrong arity")
            values = [as_fraction(v) for v in point]
        total = Fraction(0)
        for exps, coeff in self.terms.items():
            term = coeff
            for v, e in zip(values, exps):
                if e:
                    term *= v ** e
            total += term
        return total

    def extend(self, alphabet: Sequence[str]) -> "MultiPoly":
        """Re-embed into a larger alphabet containing every current variable."""
        alphabet = tuple(alphabet)
        positions = []
        for name in self.alphabet:
            try:
                positions.append(alphabet.index(name))
            except ValueError:
                raise InvalidInputError(f"target alphabet is missing {name!r}") from None
        out: dict[Monomial, Fraction] = {}
        width = len(alphabet)
        for exps, coeff in self.terms.items():
            new = [0] * width
            for pos, e in zip(positions, exps):
                new[pos] = e
            out[tuple(new)] = coeff
        return MultiPoly(alphabet, out)

    def sorted_terms(self) -> list[tuple[Monomial, Fraction]]:
        """Terms in graded-lex order (total degree, then exponent tuple)."""
        return sorted(self.terms.items(), key=lambda item: (sum(item[0]), item[0]))

    def __repr__(self) -> str:
        if not self.terms:
            return "0"
        parts = []
        for exps, coeff in self.sorted_terms():
            factors = [
                name if e == 1 else f"{name}^{e}"
                for name, e in zip(self.alphabet, exps)
                if e
            ]
            body = "*".join(factors)
            if not body:
                parts.append(format_rational(coeff))
            elif coeff == 1:
                parts.append(body)
            elif coeff == -1:
                parts.append(f"-{body}")
            else:
                parts.append(f"{format_rational(coeff)}*{body}")
        return " + ".join(parts).replace("+ -", "- ")

    def to_json(self) -> dict:
        return {
            "alphabet": list(self.alphabet),
            "terms": [
                {"exps": list(exps), "coeff": format_rational(coeff)}
                for exps, coeff in self.sorted_terms()
            ],
        }

    @classmethod
    def from_json(cls, data: Mapping) -> "MultiPoly":
        alphabet = tuple(data["alphabet"])
        terms = {
            tuple(item["exps"]): as_fraction(item["coeff"])
            for item in data["terms"]
        }
        return cls(alphabet, terms)


# -- alphabets ---------------------------------------------------------------


def c_alphabet(size: int) -> tuple[str, ...]:
    """Variables c1..c_size; index 0 (the constant 1) is never a variable."""
    if size < 1:
        raise InvalidInputError("alphabet needs at least c1")
    return tuple(f"c{i}" for i in range(1, size + 1))


def indexed_alphabet(prefix: str, start: int, stop: int) -> tuple[str, ...]:
    return tuple(f"{prefix}{i}" for i in range(start, stop + 1))


def weights_point(alphabet_size: int, c: WeightSeq) -> list[Fraction]:
    """Evaluation point (c_1, ..., c_size) for polynomials over c_alphabet."""
    return [c.get(i) for i in range(1, alphabet_size + 1)]


# -- cycle types and permutation oracles -------------------------------------


@dataclass(frozen=True)
class CycleType:
    """Cycle type of permutations of m elements, as multiplicities (m_1..m_m)."""

    multiplicities: tuple[int, ...]

    @property
    def m(self) -> int:
        return sum(j * mult for j, mult in enumerate(self.multiplicities, start=1))

    @property
    def count(self) -> int:
        """Number of permutations with this cycle type: m! / prod_j j^{m_j} m_j!."""
        denom = 1
        for j, mult in enumerate(self.multiplicities, start=1):
            denom *= j ** mult * factorial(mult)
        return factorial(self.m) // denom

    @staticmethod
    def all_types(m: int) -> Iterator["CycleType"]:
        """All cycle types of Sigma_m, i.e. all partitions of m."""
        if m < 0:
            raise InvalidInputError("m must be nonnegative")

        def partitions(remaining: int, max_part: int, acc: list[int]):
            if remaining == 0:
                mults = [0] * m
                for part in acc:
                    mults[part - 1] += 1
                yield CycleType(tuple(mults))
                return
            for part in range(min(remaining, max_part), 0, -1):
                acc.append(part)
                yield from partitions(remaining - part, part, acc)
                acc.pop()

        if m == 0:
            yield CycleType(())
        else:
            yield from partitions(m, m, [])


def cycle_counts(perm: Sequence[int]) -> list[int]:
    """Number of j-cycles of a permutation given as images of 0..m-1."""
    m = len(perm)
    counts = [0] * m
    seen = [False] * m
    for start in range(m):
        if seen[start]:
            continue
        length = 0
        i = start
        while not seen[i]:
            seen[i] = True
            i = perm[i]
            length += 1
        counts[length - 1] += 1
    return counts


def delete_last_element(perm: Sequence[int]) -> tuple[int, ...]:
    """Remove the last element from the cycle containing it.

    A fixed point simply disappears together with its 1-cycle.
    """
    m = len(perm) - 1
    out = []
    for i in range(m):
        img = perm[i]
        out.append(perm[m] if img == m else img)
    return tuple(out)


def _wt_exponents(counts: Sequence[int], width: int) -> Monomial:
    exps = [0] * width
    for j, mult in enumerate(counts, start=1):
        if mult:
            exps[j - 1] = mult
    return tuple(exps)


def symbolic_b(m: int, size: int | None = None) -> MultiPoly:
    """b_m as a polynomial in c_1..c_m, from the element-insertion recursion

        b_{m+1} = sum_{j=1..m+1} (m)_{j-1} c_j b_{m+1-j},   b_0 = 1.
    """
    if m < 0:
        raise InvalidInputError("m must be nonnegative")
    if size is None:
        size = max(m, 1)
    if size < max(m, 1):
        raise InvalidInputError(f"alphabet of size {size} cannot hold b_{m}")
    return _symbolic_b_chain(m, size)[m]


@lru_cache(maxsize=None)
def _symbolic_b_chain(m: int, size: int) -> tuple[MultiPoly, ...]:
    alphabet = c_alphabet(size)
    chain = [MultiPoly.constant(alphabet, 1)]
    for prev in range(m):
        # b_{prev+1} = sum_{j=1..prev+1} (prev)_{j-1} c_j b_{prev+1-j}
        total = MultiPoly.zero(alphabet)
        for j in range(1, prev + 2):
            coeff = falling_factorial(prev, j - 1)
            if coeff == 0:
                continue
            cj = MultiPoly.variable(alphabet, f"c{j}")
            total = total + cj * chain[prev + 1 - j] * coeff
        chain.append(total)
    return tuple(chain)


def bruteforce_b(m: int, method: str = "cycle_types", size: int | None = None) -> MultiPoly:
    """b_m = sum over Sigma_m of prod_j c_j^{N_j(sigma)}, by direct enumeration.

    method "permutations" walks all m! permutations; "cycle_types" walks the
    partitions of m weighted by the class size m!/prod j^{m_j} m_j!.  The two
    give independent checks of the same polynomial.
    """
    if m < 0:
        raise InvalidInputError("m must be nonnegative")
    if size is None:
        size = max(m, 1)
    alphabet = c_alphabet(size)
    width = len(alphabet)
    acc: dict[Monomial, Fraction] = {}
    if method == "permutations":
        if m > PERMUTATION_LIMIT:
            raise SizeLimitError(f"permutation oracle capped at m <= {PERMUTATION_LIMIT}")
        for perm in itertools.permutations(range(m)):
            exps = _wt_exponents(cycle_counts(perm), width)
            acc[exps] = acc.get(exps, Fraction(0)) + 1
    elif method == "cycle_types":
        if m > CYCLE_TYPE_LIMIT:
            raise SizeLimitError(f"cycle-type oracle capped at m <= {CYCLE_TYPE_LIMIT}")
        for ctype in CycleType.all_types(m):
            exps = _wt_exponents(ctype.multiplicities, width)
            acc[exps] = acc.get(exps, Fraction(0)) + ctype.count
    else:
        raise InvalidInputError(f"unknown oracle method {method!r}")
    return MultiPoly(alphabet, acc)


def evaluate_b_at(m: int, c: WeightSeq) -> Fraction:
    """Specialize the symbolic b_m at a concrete weight sequence."""
    poly = symbolic_b(m)
    return poly.evaluate(weights_point(len(poly.alphabet), c))


# -- identity verifiers -------------------------------------------------------


@dataclass(frozen=True)
class IdentityResult:
    """Outcome of one exact identity check."""

    identity_id: str
    passed: bool
    witness: object = None

    def __bool__(self) -> bool:
        return self.passed


def _c_var(alphabet: tuple[str, ...], j: int) -> MultiPoly:
    """c_j as a polynomial, with c_0 read as the constant 1."""
    if j == 0:
        return MultiPoly.constant(alphabet, 1)
    return MultiPoly.variable(alphabet, f"c{j}")


def verify_removal_recursion(m: int, size: int | None = None) -> IdentityResult:
    """Symbolic check of (m+1) b_m = sum_{j=1..m+1} (m)_{j-1} c_{j-1} b_{m+1-j}."""
    if size is None:
        size = max(m + 1, 1)
    alphabet = c_alphabet(size)
    lhs = symbolic_b(m, size) * (m + 1)
    rhs = MultiPoly.zero(alphabet)
    for j in range(1, m + 2):
        coeff = falling_factorial(m, j - 1)
        if coeff == 0:
            continue
        rhs = rhs + _c_var(alphabet, j - 1) * symbolic_b(m + 1 - j, size) * coeff
    diff = lhs - rhs
    return IdentityResult("removal-recursion", diff.is_zero(),
                          None if diff.is_zero() else diff)


def verify_deletion_sum(m: int) -> IdentityResult:
    """Enumerative check that deleting the last element over all of Sigma_{m+1}
    sums to (m+1) b_m."""
    if m + 1 > PERMUTATION_LIMIT:
        raise SizeLimitError(
            f"deletion-sum enumeration needs (m+1)! permutations; capped at m <= {PERMUTATION_LIMIT - 1}")
    size = max(m, 1)
    alphabet = c_alphabet(size)
    width = len(alphabet)
    acc: dict[Monomial, Fraction] = {}
    for perm in itertools.permutations(range(m + 1)):
        reduced = delete_last_element(perm)
        exps = _wt_exponents(cycle_counts(reduced), width)
        acc[exps] = acc.get(exps, Fraction(0)) + 1
    total = MultiPoly(alphabet, acc)
    expected = symbolic_b(m, size) * (m + 1)
    diff = total - expected
    return IdentityResult("deletion-sum", diff.is_zero(),
                          None if diff.is_zero() else diff)


def verify_deletion_weight_transfer(m: int) -> IdentityResult:
    """Per-permutation check that c_{j-1} wt(sigma) = c_j wt(sigma') when the
    deleted element sits in a j-cycle (c_0 read as 1)."""
    if m + 1 > PERMUTATION_LIMIT:
        raise SizeLimitError(
            f"weight-transfer enumeration capped at m <= {PERMUTATION_LIMIT - 1}")
    size = m + 1
    alphabet = c_alphabet(size)
    width = len(alphabet)
    for perm in itertools.permutations(range(m + 1)):
        # cycle length j of the cell containing the last element
        j = 1
        i = perm[m]
        while i != m:
            i = perm[i]
            j += 1
        full = MultiPoly.monomial(alphabet, _wt_exponents(cycle_counts(perm), width))
        reduced_counts = cycle_counts(delete_last_element(perm))
        reduced = MultiPoly.monomial(alphabet, _wt_exponents(reduced_counts, width))
        lhs = _c_var(alphabet, j - 1) * full
        rhs = _c_var(alphabet, j) * reduced
        if lhs != rhs:
            return IdentityResult("deletion-weight-transfer", False, perm)
    return IdentityResult("deletion-weight-transfer", True)


def verify_prop_identities(m: int) -> list[IdentityResult]:
    """The three structural identities behind the insertion/removal recursions."""
    return [
        verify_removal_recursion(m),
        verify_deletion_sum(m),
        verify_deletion_weight_transfer(m),
    ]


def verify_diagonal_difference_identity(m: int) -> IdentityResult:
    """Exact expansion of the two-sum form of c_m (m b_{m-1} b_{m+1} - (m+1) b_m^2).

    Both sides are expanded over c_1..c_{m+1}; the identity is what makes the
    diagonal convexity step go through, so it is checked verbatim.
    """
    if m < 1:
        raise InvalidInputError("m must be >= 1")
    size = m + 1
    alphabet = c_alphabet(size)
    b = {k: symbolic_b(k, size) for k in range(0, m + 2)}
    lhs = _c_var(alphabet, m) * (b[m - 1] * b[m + 1] * m - b[m] * b[m] * (m + 1))

    first = MultiPoly.zero(alphabet)
    for j in range(1, m + 1):
        bracket = b[m - j] * b[m] * (m + 1 - j) - b[m - 1] * b[m + 1 - j] * m
        if j == 1:
            # (m-1)_{j-2} is not defined at j = 1; the bracket vanishes there.
            if not bracket.is_zero():
                return IdentityResult("diagonal-difference", False, bracket)
            continue
        zgen = _c_var(alphabet, m + 1) * _c_var(alphabet, j - 1) \
            - _c_var(alphabet, m) * _c_var(alphabet, j)
        first = first + zgen * bracket * falling_factorial(m - 1, j - 2)
    first = first * m

    second = MultiPoly.zero(alphabet)
    for j in range(1, m + 1):
        zgen = _c_var(alphabet, m + 1) * _c_var(alphabet, j - 1) \
            - _c_var(alphabet, m) * _c_var(alphabet, j)
        second = second + zgen * b[m - j] * falling_factorial(m - 1, j - 1)
    second = second * b[m]

    diff = lhs - (first + second)
    return IdentityResult("diagonal-difference", diff.is_zero(),
                          None if diff.is_zero() else diff)


# -- recursion-generated pmf polynomials and the Hansen identities ------------


def r_alphabet(max_r: int) -> tuple[str, ...]:
    return indexed_alphabet("r", 0, max_r) + ("P0",)


def pmf_polynomials(n_max: int, max_r: int | None = None) -> list[MultiPoly]:
    """P_0..P_{n_max} as polynomials in r_0..r_{max_r} and P_0, generated by

        (n+1) P_{n+1} = sum_{k=0..n} r_k P_{n-k},  P_0 free, P_{-1} = 0.
    """
    if max_r is None:
        max_r = max(n_max - 1, 0)
    alphabet = r_alphabet(max_r)
    p0 = MultiPoly.variable(alphabet, "P0")
    ps = [p0]
    for n in range(0, n_max):
        acc = MultiPoly.zero(alphabet)
        for k in range(0, n + 1):
            if k > max_r:
                break
            rk = MultiPoly.variable(alphabet, f"r{k}")
            acc = acc + rk * ps[n - k]
        ps.append(acc * Fraction(1, n + 1))
    return ps


def verify_hansen_identities(m: int) -> list[IdentityResult]:
    """Exact checks of the two quadratic pmf identities used in Hansen's
    log-concavity/log-convexity criterion, with r_k and P_0 symbolic."""
    if m < 0:
        raise InvalidInputError("m must be nonnegative")
    max_r = m + 2
    alphabet = r_alphabet(max_r)
    ps = pmf_polynomials(m + 3, max_r)
    zero = MultiPoly.zero(alphabet)

    def P(i: int) -> MultiPoly:
        return zero if i < 0 else ps[i]

    def r(i: int) -> MultiPoly:
        return MultiPoly.variable(alphabet, f"r{i}")

    results = []

    # m(m+2)(P_{m+1}^2 - P_m P_{m+2})
    #   = P_{m+1}(r_0 P_m - P_{m+1})
    #     + sum_{l=0..m} sum_{k=0..l} (P_{m-l} P_{m-k-1} - P_{m-k} P_{m-l-1})
    #                                 (r_{k+1} r_l - r_{l+1} r_k)
    lhs = (P(m + 1) * P(m + 1) - P(m) * P(m + 2)) * (m * (m + 2))
    rhs = P(m + 1) * (r(0) * P(m) - P(m + 1))
    for l in range(0, m + 1):
        for k in range(0, l + 1):
            left = P(m - l) * P(m - k - 1) - P(m - k) * P(m - l - 1)
            right = r(k + 1) * r(l) - r(l + 1) * r(k)
            rhs = rhs + left * right
    diff = lhs - rhs
    results.append(IdentityResult("hansen-log-concave", diff.is_zero(),
                                  None if diff.is_zero() else diff))

    # r_{m+1}(m+2)(P_{m+1} P_{m+3} - P_{m+2}^2)
    #   = P_{m+1}(r_{m+2} P_{m+2} - r_{m+1} P_{m+3})
    #     + sum_{k=0..m} (P_{m-k} P_{m+2} - P_{m+1} P_{m-k+1})
    #                    (r_{m+2} r_k - r_{k+1} r_{m+1})
    lhs2 = r(m + 1) * (P(m + 1) * P(m + 3) - P(m + 2) * P(m + 2)) * (m + 2)
    rhs2 = P(m + 1) * (r(m + 2) * P(m + 2) - r(m + 1) * P(m + 3))
    for k in range(0, m + 1):
        left = P(m - k) * P(m + 2) - P(m + 1) * P(m - k + 1)
        right = r(m + 2) * r(k) - r(k + 1) * r(m + 1)
        rhs2 = rhs2 + left * right
    diff2 = lhs2 - rhs2
    results.append(IdentityResult("hansen-log-convex", diff2.is_zero(),
                                  None if diff2.is_zero() else diff2))
    return results


def hansen_degree_check(m: int) -> IdentityResult:
    """Structural check: every monomial on both sides of the log-concave
    identity carries exactly two P_0 factors."""
    max_r = m + 2
    alphabet = r_alphabet(max_r)
    ps = pmf_polynomials(m + 3, max_r)
    p0_slot = alphabet.index("P0")
    lhs = (ps[m + 1] * ps[m + 1] - ps[m] * ps[m + 2]) * (m * (m + 2))
    polys = [lhs] if m else []
    rhs = ps[m + 1] * (MultiPoly.variable(alphabet, "r0") * ps[m] - ps[m + 1])
    polys.append(rhs)
    for poly in polys:
        for exps in poly.terms:
            if exps[p0_slot] != 2:
                return IdentityResult("hansen-degree", False, exps)
    return IdentityResult("hansen-degree", True)
