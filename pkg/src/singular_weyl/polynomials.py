"""Exact multivariate polynomial arithmetic and harmonic polynomial bases.

Coefficients are Gaussian rationals (pairs of ``fractions.Fraction``), so
harmonicity is a zero-tolerance property: the Laplacian of a harmonic
polynomial is *identically* the zero polynomial, not merely small.

The signed-degree circular harmonics used for n = 2 live here as well:
``circular_harmonic(k)`` returns (y1 + i y2)^k for k > 0 and (y1 - i y2)^|k|
for k < 0, carrying the signed O(2)-weight separately from the homogeneity
degree |k|.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations_with_replacement
from math import comb
from typing import Callable, Iterable, Mapping

import numpy as np

Exponents = tuple[int, ...]


class GaussianRational:
    """Exact complex number with rational real and imaginary parts."""

    __slots__ = ("re", "im")

    def __init__(self, re=0, im=0):
        self.re = Fraction(re)
        self.im = Fraction(im)

    @classmethod
    def coerce(cls, value) -> "GaussianRational":
        if isinstance(value, GaussianRational):
            return value
        if isinstance(value, (int, Fraction)):
            return cls(value)
        if isinstance(value, complex):
            raise TypeError("floats are not exact; use Fraction or GaussianRational")
        raise TypeError(f"cannot coerce {type(value)!r} to GaussianRational")

    def __add__(self, other):
        other = GaussianRational.coerce(other)
        return GaussianRational(self.re + other.re, self.im + other.im)

    __radd__ = __add__

    def __neg__(self):
        return GaussianRational(-self.re, -self.im)

    def __sub__(self, other):
        return self + (-GaussianRational.coerce(other))

    def __rsub__(self, other):
        return GaussianRational.coerce(other) + (-self)

    def __mul__(self, other):
        other = GaussianRational.coerce(other)
        return GaussianRational(
            self.re * other.re - self.im * other.im,
            self.re * other.im + self.im * other.re,
        )

    __rmul__ = __mul__

    def __truediv__(self, other):
        other = GaussianRational.coerce(other)
        den = other.re * other.re + other.im * other.im
        if den == 0:
            raise ZeroDivisionError("division by zero GaussianRational")
        return GaussianRational(
            (self.re * other.re + self.im * other.im) / den,
            (self.im * other.re - self.re * other.im) / den,
        )

    def __eq__(self, other):
        try:
            other = GaussianRational.coerce(other)
        except TypeError:
            return NotImplemented
        return self.re == other.re and self.im == other.im

    def __hash__(self):
        return hash((self.re, self.im))

    def __bool__(self):
        return self.re != 0 or self.im != 0

    def __complex__(self):
        return complex(self.re) + 1j * complex(self.im)

    def __repr__(self):
        if self.im == 0:
            return f"{self.re}"
        return f"({self.re}{'+' if self.im >= 0 else ''}{self.im}i)"

    def to_json(self):
        """Serialize: [num, den] when real, [[renum,reden],[imnum,imden]] otherwise."""
        if self.im == 0:
            return [self.re.numerator, self.re.denominator]
        return [
            [self.re.numerator, self.re.denominator],
            [self.im.numerator, self.im.denominator],
        ]

    @classmethod
    def from_json(cls, data) -> "GaussianRational":
        if isinstance(data[0], list):
            return cls(Fraction(data[0][0], data[0][1]), Fraction(data[1][0], data[1][1]))
        return cls(Fraction(data[0], data[1]))


GR_ZERO = GaussianRational(0)
GR_ONE = GaussianRational(1)
GR_I = GaussianRational(0, 1)


class Polynomial:
    """Multivariate polynomial over Gaussian rationals.

    Terms are stored as a map from exponent tuples (one entry per variable)
    to nonzero GaussianRational coefficients.
    """

    __slots__ = ("nvars", "terms", "_compiled")

    def __init__(self, nvars: int, terms: Mapping[Exponents, GaussianRational] | None = None):
        self.nvars = nvars
        clean: dict[Exponents, GaussianRational] = {}
        if terms:
            for exps, coeff in terms.items():
                coeff = GaussianRational.coerce(coeff)
                if coeff:
                    if len(exps) != nvars:
                        raise ValueError("exponent tuple length does not match nvars")
                    clean[tuple(exps)] = coeff
        self.terms = clean
        self._compiled = None

    # -- constructors -------------------------------------------------

    @classmethod
    def constant(cls, nvars: int, value) -> "Polynomial":
        return cls(nvars, {(0,) * nvars: GaussianRational.coerce(value)})

    @classmethod
    def variable(cls, nvars: int, index: int) -> "Polynomial":
        exps = [0] * nvars
        exps[index] = 1
        return cls(nvars, {tuple(exps): GR_ONE})

    @classmethod
    def radius_squared(cls, nvars: int) -> "Polynomial":
        """The polynomial rho^2 = sum_j y_j^2."""
        terms = {}
        for j in range(nvars):
            exps = [0] * nvars
            exps[j] = 2
            terms[tuple(exps)] = GR_ONE
        return cls(nvars, terms)

    # -- ring operations ----------------------------------------------

    def __add__(self, other: "Polynomial") -> "Polynomial":
        self._check(other)
        terms = dict(self.terms)
        for exps, coeff in other.terms.items():
            acc = terms.get(exps, GR_ZERO) + coeff
            if acc:
                terms[exps] = acc
            else:
                terms.pop(exps, None)
        return Polynomial(self.nvars, terms)

    def __sub__(self, other: "Polynomial") -> "Polynomial":
        return self + other.scale(-1)

    def __mul__(self, other: "Polynomial") -> "Polynomial":
        self._check(other)
        terms: dict[Exponents, GaussianRational] = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                exps = tuple(a + b for a, b in zip(e1, e2))
                acc = terms.get(exps, GR_ZERO) + c1 * c2
                if acc:
                    terms[exps] = acc
                else:
                    terms.pop(exps, None)
        return Polynomial(self.nvars, terms)

    def scale(self, value) -> "Polynomial":
        value = GaussianRational.coerce(value)
        return Polynomial(self.nvars, {e: c * value for e, c in self.terms.items()})

    def _check(self, other: "Polynomial"):
        if self.nvars != other.nvars:
            raise ValueError("polynomials over different variable counts")

    def __eq__(self, other):
        return (
            isinstance(other, Polynomial)
            and self.nvars == other.nvars
            and self.terms == other.terms
        )

    def __hash__(self):
        return hash((self.nvars, frozenset(self.terms.items())))

    # -- calculus ------------------------------------------------------

    def partial(self, index: int) -> "Polynomial":
        terms: dict[Exponents, GaussianRational] = {}
        for exps, coeff in self.terms.items():
            e = exps[index]
            if e == 0:
                continue
            new = list(exps)
            new[index] = e - 1
            key = tuple(new)
            acc = terms.get(key, GR_ZERO) + coeff * e
            if acc:
                terms[key] = acc
            else:
                terms.pop(key, None)
        return Polynomial(self.nvars, terms)

    # -- queries ---------------------------------------------------------

    def is_zero(self) -> bool:
        return not self.terms

    def total_degree(self) -> int:
        """Degree of the polynomial; -1 for the zero polynomial."""
        if not self.terms:
            return -1
        return max(sum(e) for e in self.terms)

    def is_homogeneous(self) -> bool:
        degrees = {sum(e) for e in self.terms}
        return len(degrees) <= 1

    def leading_monomial(self) -> Exponents:
        """Largest monomial in graded-lex order (total degree, then lex)."""
        if not self.terms:
            raise ValueError("zero polynomial has no leading monomial")
        return max(self.terms, key=lambda e: (sum(e), e))

    def proportionality(self, other: "Polynomial") -> GaussianRational | None:
        """Return c with self == c * other, or None if not proportional."""
        self._check(other)
        if other.is_zero():
            return GR_ZERO if self.is_zero() else None
        if self.is_zero():
            return GR_ZERO if other.is_zero() else None
        if set(self.terms) != set(other.terms):
            return None
        lead = other.leading_monomial()
        ratio = self.terms[lead] / other.terms[lead]
        for exps, coeff in other.terms.items():
            if self.terms[exps] != coeff * ratio:
                return None
        return ratio

    # -- evaluation ------------------------------------------------------

    def _compile(self):
        if self._compiled is None:
            exps = np.array(sorted(self.terms), dtype=np.int64).reshape(-1, self.nvars)
            coeffs = np.array(
                [complex(self.terms[tuple(e)]) for e in exps], dtype=np.complex128
            )
            self._compiled = (exps, coeffs)
        return self._compiled

    def __call__(self, y: np.ndarray) -> np.ndarray | complex:
        """Evaluate at y of shape (nvars,) or (N, nvars)."""
        y = np.asarray(y, dtype=np.complex128)
        single = y.ndim == 1
        if single:
            y = y[None, :]
        if not self.terms:
            out = np.zeros(y.shape[0], dtype=np.complex128)
            return out[0] if single else out
        exps, coeffs = self._compile()
        # (N, T, nvars) powers; y may contain zeros, 0**0 == 1 as required
        powers = y[:, None, :] ** exps[None, :, :]
        out = powers.prod(axis=2) @ coeffs
        return out[0] if single else out

    def __repr__(self):
        if not self.terms:
            return "Polynomial(0)"
        bits = []
        for exps in sorted(self.terms, key=lambda e: (-sum(e), tuple(-x for x in e))):
            mono = "*".join(
                f"y{j + 1}" + (f"^{e}" if e > 1 else "")
                for j, e in enumerate(exps)
                if e > 0
            )
            bits.append(f"{self.terms[exps]!r}{'*' + mono if mono else ''}")
        return " + ".join(bits)

    # -- serialization -----------------------------------------------------

    def to_json(self):
        return [
            {"exponents": list(exps), "coeff": self.terms[exps].to_json()}
            for exps in sorted(self.terms)
        ]

    @classmethod
    def from_json(cls, nvars: int, data: Iterable[dict]) -> "Polynomial":
        return cls(
            nvars,
            {
                tuple(item["exponents"]): GaussianRational.from_json(item["coeff"])
                for item in data
            },
        )


def laplacian(p: Polynomial) -> Polynomial:
    """Sum of second partials, with exact coefficients."""
    out = Polynomial(p.nvars)
    for j in range(p.nvars):
        out = out + p.partial(j).partial(j)
    return out


def euler(p: Polynomial) -> Polynomial:
    """Euler operator sum_j y_j d_j; equals degree * p on homogeneous p."""
    out = Polynomial(p.nvars)
    for j in range(p.nvars):
        out = out + Polynomial.variable(p.nvars, j) * p.partial(j)
    return out


@dataclass(frozen=True)
class HarmonicPolynomial:
    """A harmonic polynomial together with its homogeneity degree.

    ``degree`` is the homogeneity degree (>= 0).  For n = 2 the signed
    O(2)-weight is carried in ``weight`` (equal to ``degree`` elsewhere);
    the attached polynomial has degree |weight|.

    ``evaluator``, when set, is a numerically stable product-form evaluator
    used in place of the expanded polynomial (whose binomial coefficients
    cancel catastrophically at high degree); the expanded form remains the
    exact-arithmetic source of truth.  ``power`` marks polynomials that are
    literally (y1 + i y2)^power (conjugated for power < 0).
    """

    poly: Polynomial
    degree: int
    weight: int | None = None
    evaluator: "Callable | None" = field(default=None, compare=False, repr=False)
    power: int | None = field(default=None, compare=False)

    def __post_init__(self):
        if not self.poly.is_zero():
            if not self.poly.is_homogeneous() or self.poly.total_degree() != self.degree:
                raise ValueError("polynomial is not homogeneous of the declared degree")
            if not laplacian(self.poly).is_zero():
                raise ValueError("polynomial is not harmonic")

    @property
    def nvars(self) -> int:
        return self.poly.nvars

    def is_zero(self) -> bool:
        return self.poly.is_zero()

    def __call__(self, y):
        if self.evaluator is not None:
            return self.evaluator(np.asarray(y, dtype=float))
        return self.poly(y)


def harmonic_dimension(n: int, k: int) -> int:
    """dim H_k(R^n) = C(n+k-1, k) - C(n+k-3, k-2)."""
    if k < 0:
        return 0
    first = comb(n + k - 1, k)
    second = comb(n + k - 3, k - 2) if k >= 2 and n + k - 3 >= 0 else 0
    return first - second


def _monomials(n: int, k: int) -> list[Exponents]:
    """Degree-k exponent tuples in n variables, graded-lex descending."""
    out = []
    for combo in combinations_with_replacement(range(n), k):
        exps = [0] * n
        for j in combo:
            exps[j] += 1
        out.append(tuple(exps))
    out.sort(reverse=True)
    return out


def _kernel_basis(rows: list[list[Fraction]], ncols: int) -> list[list[Fraction]]:
    """Exact kernel of the matrix given by rows, via Gauss-Jordan over Q.

    Returns vectors in reduced form: each has leading coefficient 1 at a
    free column, zeros at the other free columns.
    """
    mat = [row[:] for row in rows]
    nrows = len(mat)
    pivots: list[int] = []
    r = 0
    for c in range(ncols):
        pivot_row = None
        for i in range(r, nrows):
            if mat[i][c] != 0:
                pivot_row = i
                break
        if pivot_row is None:
            continue
        mat[r], mat[pivot_row] = mat[pivot_row], mat[r]
        inv = mat[r][c]
        mat[r] = [x / inv for x in mat[r]]
        for i in range(nrows):
            if i != r and mat[i][c] != 0:
                factor = mat[i][c]
                mat[i] = [a - factor * b for a, b in zip(mat[i], mat[r])]
        pivots.append(c)
        r += 1
        if r == nrows:
            break
    free = [c for c in range(ncols) if c not in pivots]
    basis = []
    for fc in free:
        vec = [Fraction(0)] * ncols
        vec[fc] = Fraction(1)
        for i, pc in enumerate(pivots):
            vec[pc] = -mat[i][fc]
        basis.append(vec)
    return basis


def harmonic_basis(n: int, k: int) -> list[HarmonicPolynomial]:
    """Exact rational basis of H_k(R^n), ordered by leading monomial.

    Built as the kernel of the Laplacian on the space of degree-k monomials;
    every element is exactly harmonic and the count matches
    ``harmonic_dimension(n, k)``.

    For n = 1 only k in {0, 1} are allowed (H_k(R) = 0 beyond that).
    """
    if n < 1:
        raise ValueError("dimension must be >= 1")
    if k < 0:
        raise ValueError("degree must be >= 0")
    if n == 1:
        if k >= 2:
            raise ValueError("H_k(R) = 0 for k >= 2")
        mono = Polynomial.constant(1, 1) if k == 0 else Polynomial.variable(1, 0)
        return [HarmonicPolynomial(mono, k)]
    source = _monomials(n, k)
    if k < 2:
        return [
            HarmonicPolynomial(Polynomial(n, {e: GR_ONE}), k) for e in source
        ]
    target = _monomials(n, k - 2)
    target_index = {e: i for i, e in enumerate(target)}
    # rows: target monomials, cols: source monomials
    rows = [[Fraction(0)] * len(source) for _ in target]
    for col, exps in enumerate(source):
        for j in range(n):
            e = exps[j]
            if e >= 2:
                low = list(exps)
                low[j] = e - 2
                rows[target_index[tuple(low)]][col] += e * (e - 1)
    kernel = _kernel_basis(rows, len(source))
    basis = []
    for vec in kernel:
        terms = {
            source[i]: GaussianRational(c) for i, c in enumerate(vec) if c != 0
        }
        basis.append(HarmonicPolynomial(Polynomial(n, terms), k))
    basis.sort(key=lambda h: h.poly.leading_monomial(), reverse=True)
    if len(basis) != harmonic_dimension(n, k):
        raise RuntimeError("kernel dimension does not match the closed formula")
    return basis


def _power_evaluator(k: int) -> Callable:
    sign = 1j if k >= 0 else -1j

    def ev(y: np.ndarray) -> np.ndarray | complex:
        w = y[..., 0] + sign * y[..., 1]
        return w ** abs(k)

    return ev


def _power_terms(k: int) -> dict[Exponents, GaussianRational]:
    unit = GR_I if k >= 0 else GaussianRational(0, -1)
    deg = abs(k)
    terms: dict[Exponents, GaussianRational] = {}
    power = GR_ONE
    for j in range(deg + 1):
        terms[(deg - j, j)] = power * comb(deg, j)
        power = power * unit
    return terms


def circular_harmonic(k: int) -> HarmonicPolynomial:
    """Signed-weight harmonic for n = 2: (y1 + i y2)^k, conjugated for k < 0."""
    return HarmonicPolynomial(
        Polynomial(2, _power_terms(k)),
        abs(k),
        weight=k,
        evaluator=_power_evaluator(k),
        power=k,
    )


def harmonic_representative(n: int, k: int) -> HarmonicPolynomial:
    """One cheap harmonic of degree |k|: (y1 + i y2)^k for n >= 2, y^k for n = 1.

    Used by verification sweeps that need a single basis vector per K-type
    without computing the full Laplacian kernel.
    """
    if n == 1:
        if k not in (0, 1):
            raise ValueError("n = 1 supports only k in {0, 1}")
        mono = Polynomial.constant(1, 1) if k == 0 else Polynomial.variable(1, 0)
        return HarmonicPolynomial(mono, k)
    if n == 2:
        return circular_harmonic(k)
    if k < 0:
        raise ValueError("negative k only makes sense for n = 2")
    two_var = _power_terms(k)
    terms = {e + (0,) * (n - 2): c for e, c in two_var.items()}
    return HarmonicPolynomial(
        Polynomial(n, terms), k, evaluator=_power_evaluator(k), power=k
    )


def c_const(k: int, n: int) -> Fraction:
    """The decomposition constant: 1/(2k+n-2), except c_{0,2} = 0."""
    if k < 0 or n < 1:
        raise ValueError("require k >= 0 and n >= 1")
    if (k, n) == (0, 2):
        return Fraction(0)
    return Fraction(1, 2 * k + n - 2)


def decompose_yj(h: HarmonicPolynomial, j: int) -> tuple[HarmonicPolynomial, Fraction]:
    """Harmonic part of y_j * h.

    Returns (h_plus, c) with ``y_j h = h_plus + c rho^2 d_j h`` as an exact
    polynomial identity, h_plus harmonic of degree k+1 (possibly zero) and
    c = c_const(k, n).  When h carries a stable power-form evaluator, one is
    attached to h_plus as well.
    """
    n = h.nvars
    k = h.degree
    c = c_const(k, n)
    rho2 = Polynomial.radius_squared(n)
    candidate = Polynomial.variable(n, j) * h.poly - rho2.scale(c) * h.poly.partial(j)
    if not laplacian(candidate).is_zero():
        raise ArithmeticError("harmonic projection failed the exact Laplacian check")
    evaluator = None
    if h.power is not None and h.power >= 0 and not candidate.is_zero():
        p = h.power
        cf = float(c)
        if p == 0:
            def evaluator(y, _j=j):
                return y[..., _j] + 0j
        elif j <= 1:
            unit = 1.0 if j == 0 else 1j

            def evaluator(y, _j=j, _p=p, _u=unit, _c=cf):
                w = y[..., 0] + 1j * y[..., 1]
                rho_sq = (y**2).sum(axis=-1)
                return w ** (_p - 1) * (y[..., _j] * w - _c * _p * _u * rho_sq)

        else:
            def evaluator(y, _j=j, _p=p):
                w = y[..., 0] + 1j * y[..., 1]
                return y[..., _j] * w**_p

    return HarmonicPolynomial(candidate, k + 1, evaluator=evaluator), c


def scaled_partial_harmonic(h: HarmonicPolynomial, j: int, scale: Fraction) -> HarmonicPolynomial | None:
    """The harmonic ``scale * d_j h`` of degree k-1, or None when zero.

    Propagates a stable power-form evaluator when h has one.
    """
    d_poly = h.poly.partial(j).scale(scale)
    if d_poly.is_zero():
        return None
    evaluator = None
    if h.power is not None and h.power >= 1 and j <= 1:
        p = h.power
        unit = (1.0 if j == 0 else 1j) * p * float(scale)

        def evaluator(y, _p=p, _u=unit):
            w = y[..., 0] + 1j * y[..., 1]
            return _u * w ** (_p - 1)

    return HarmonicPolynomial(d_poly, h.degree - 1, evaluator=evaluator)
