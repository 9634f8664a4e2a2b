"""Submodule inventory, composition series, Heisenberg eigenvalue bookkeeping
and ladder-graph export.

Submodules are represented descriptively: each H_{l,k} is a weight string
m = 2k+q (mod 4) in steps of 4, with a lowest (resp. highest) weight vector
at m = 2k+4l+n (resp. -(2k+4l+n)) exactly when q = n (resp. q = -n) mod 4.
The composition chains follow the four-case classification by (q, n) mod 4.
"""

from __future__ import annotations

import csv
import io
from dataclasses import dataclass
from fractions import Fraction

from .admissibility import (
    ParameterSet,
    enumerate_admissible,
    pair_eigenvalue,
    radial_pairs,
    weight_residue,
)
from .operators import shipped_E_coefficients
from .ktypes import KTypeVector, make_ktype
from .polynomials import harmonic_representative


@dataclass(frozen=True)
class SubmoduleDescriptor:
    """One H_{l,k} inside ker(Omega'' - 2 lambda)."""

    l: int
    k: int
    lam: Fraction
    weight_residue: int           # m = this (mod 4)
    boundary_weight: int          # 2k + 4l + n
    has_lowest: bool              # q = n (mod 4): H+ submodule from m >= boundary
    has_highest: bool             # q = -n (mod 4): H- submodule from m <= -boundary
    irreducible: bool
    experimental: bool = False    # n = 2 with k < 0 follows the signed-k convention

    def to_json(self) -> dict:
        return {
            "l": self.l,
            "k": self.k,
            "lambda": [self.lam.numerator, self.lam.denominator],
            "weight_residue": self.weight_residue,
            "boundary_weight": self.boundary_weight,
            "has_lowest": self.has_lowest,
            "has_highest": self.has_highest,
            "irreducible": self.irreducible,
            "experimental": self.experimental,
        }


@dataclass(frozen=True)
class CompositionSeries:
    """A maximal chain of invariant subspaces with its case tag (1)-(4)."""

    case: int
    chain: tuple[str, ...]

    def to_json(self) -> dict:
        return {"case": self.case, "chain": list(self.chain)}


def structure_case(params: ParameterSet) -> int:
    """Case tag: 1 = neither boundary, 2 = lowest only, 3 = highest only, 4 = both."""
    low = (params.q - params.n) % 4 == 0
    high = (params.q + params.n) % 4 == 0
    if low and high:
        return 4
    if low:
        return 2
    if high:
        return 3
    return 1


CHAINS = {
    1: ("0", "H0", "H"),
    2: ("0", "H0+", "H0", "H0+H+", "H"),
    3: ("0", "H0-", "H0", "H0+H-", "H"),
    4: ("0", "H0-", "H0+oH0-", "H0", "H0+H-", "H0+H-+H+", "H"),
}


def composition_series(params: ParameterSet) -> CompositionSeries:
    """The composition chain for H determined by (q, n) mod 4.

    Case 1 is the short chain 0 < H0 < H with H0 the unique irreducible
    submodule; cases 2 and 3 insert the lowest/highest weight submodules
    H0+ / H0-; case 4 (n even, q = n = -n mod 4) is the six-step chain.
    """
    case = structure_case(params)
    return CompositionSeries(case, CHAINS[case])


def decompose(params: ParameterSet, lam) -> list[SubmoduleDescriptor]:
    """Descriptors of the H_{l,k} summands of ker(Omega'' - 2 lambda)_K.

    One per lambda-admissible pair, ordered by decreasing l.  Raises
    AdmissibilityError when lambda is not admissible.  For n = 1 the pairs
    use the radial indexing of the K-type machinery.
    """
    n = params.n
    low = (params.q - n) % 4 == 0
    high = (params.q + n) % 4 == 0
    out = []
    for l, k in radial_pairs(n, lam):
        out.append(
            SubmoduleDescriptor(
                l=l,
                k=k,
                lam=Fraction(pair_eigenvalue(n, l, k)),
                weight_residue=weight_residue(params, k),
                boundary_weight=2 * k + 4 * l + n,
                has_lowest=low,
                has_highest=high,
                irreducible=not (low or high),
                experimental=(n == 2 and k < 0),
            )
        )
    return out


def heisenberg_targets(n: int, l: int, k: int) -> list[tuple[int, int, Fraction]]:
    """The four (l', k', lambda') targets reachable from (l, k) under E_j.

    lambda' - lambda is +-(2l+2k+n-2) for the (l-+1, k+-1) moves and +-2l
    for the (l, k+-1) moves.  Pairs with an out-of-range k' are dropped;
    l' = 0 entries belong to the lambda = 0 family.
    """
    if l < 0:
        raise ValueError("l must be >= 0")
    candidates = [(l - 1, k + 1), (l + 1, k - 1), (l, k + 1), (l, k - 1)]
    out = []
    for l2, k2 in candidates:
        if l2 < 0:
            continue
        if n == 1 and k2 not in (0, 1):
            continue
        if n >= 3 and k2 < 0:
            continue
        if n == 2 and k2 < 0:
            continue
        out.append((l2, k2, Fraction(pair_eigenvalue(n, l2, k2))))
    return out


# ---------------------------------------------------------------------------
# ladder graphs (the data behind the weight-lattice and Heisenberg figures)
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class GraphNode:
    m: int
    l: int
    k: int
    lam: Fraction

    @property
    def key(self) -> str:
        return f"{self.m},{self.l},{self.k}"


@dataclass(frozen=True)
class GraphEdge:
    source: tuple[int, int, int]
    target: tuple[int, int, int]
    operator: str
    coefficient: complex
    dangling: bool = False


@dataclass
class LadderGraph:
    """Nodes are K-type indices; edges carry eta/E ladder coefficients.

    Edges to indices outside the truncation window are kept with
    ``dangling=True`` so the cut is visible in exports.
    """

    params: ParameterSet
    nodes: list[GraphNode]
    edges: list[GraphEdge]

    def to_json(self) -> dict:
        return {
            "n": self.params.n,
            "q": self.params.q,
            "s": [self.params.s.real, self.params.s.imag],
            "nodes": [
                {
                    "m": v.m,
                    "l": v.l,
                    "k": v.k,
                    "lambda": [v.lam.numerator, v.lam.denominator],
                }
                for v in self.nodes
            ],
            "edges": [
                {
                    "source": list(e.source),
                    "target": list(e.target),
                    "operator": e.operator,
                    "coefficient": [e.coefficient.real, e.coefficient.imag],
                    "dangling": e.dangling,
                }
                for e in self.edges
            ],
        }

    def to_dot(self) -> str:
        lines = ["digraph ladder {", "  rankdir=LR;"]
        for v in self.nodes:
            lines.append(
                f'  "{v.key}" [label="F[{v.m},{v.l},{v.k}]\\nlambda={v.lam}"];'
            )
        for e in self.edges:
            src = ",".join(map(str, e.source))
            tgt = ",".join(map(str, e.target))
            style = ' style=dashed' if e.dangling else ""
            coeff = f"{e.coefficient.real:+.4g}{e.coefficient.imag:+.4g}i"
            lines.append(
                f'  "{src}" -> "{tgt}" [label="{e.operator}: {coeff}"{style}];'
            )
        lines.append("}")
        return "\n".join(lines) + "\n"


def ladder_graph(
    params: ParameterSet,
    lam_max,
    m_range: tuple[int, int],
    include_zero_family: bool = False,
    lambdas: list | None = None,
    with_heisenberg: bool = True,
) -> LadderGraph:
    """Weight-lattice graph over admissible lambda <= lam_max.

    Nodes: indices (m, l, k) with m in m_range and m = 2k+q (mod 4), one per
    admissible pair of each admissible lambda (plus the l = 0 family when
    ``include_zero_family``).  Eta edges use the exact ladder coefficients;
    E edges (optional) use the oracle-confirmed coefficients with zero
    coefficients omitted.
    """
    n = params.n
    m_lo, m_hi = m_range
    if m_lo > m_hi:
        raise ValueError("empty m range")
    if lambdas is None:
        lam_list = [ev.value for ev in enumerate_admissible(n, lam_max)]
    else:
        lam_list = [Fraction(v) for v in lambdas]
    pair_set: list[tuple[int, int]] = []
    for lam in lam_list:
        pair_set.extend(radial_pairs(n, lam))
    if include_zero_family:
        k_cap = max([abs(k) for _, k in pair_set], default=4) + 1
        zero_ks = range(0, min(k_cap, 2) if n == 1 else k_cap)
        pair_set.extend((0, k) for k in zero_ks)

    nodes: dict[tuple[int, int, int], GraphNode] = {}
    for l, k in pair_set:
        lam = Fraction(pair_eigenvalue(n, l, k))
        residue = weight_residue(params, k)
        start = m_lo + ((residue - m_lo) % 4)
        for m in range(start, m_hi + 1, 4):
            nodes[(m, l, k)] = GraphNode(m, l, k, lam)

    in_window = set(nodes)
    edges: list[GraphEdge] = []
    for (m, l, k), node in sorted(nodes.items()):
        # eta ladder: m -> m +- 4 within the same (l, k)
        for sign in (+1, -1):
            coeff = Fraction(-(sign * m + 4 * l + 2 * k + n), 4)
            if coeff == 0:
                continue
            target = (m + 4 * sign, l, k)
            edges.append(
                GraphEdge(
                    (m, l, k),
                    target,
                    "eta+" if sign > 0 else "eta-",
                    complex(coeff),
                    dangling=target not in in_window,
                )
            )
        if not with_heisenberg or (n == 2 and k < 0):
            continue
        for sign in (+1, -1):
            table = shipped_E_coefficients(n, m, l, k, sign)
            moves = {
                "down_up": (l - 1, k + 1, 1j * complex(table.down_up)),
                "same_up": (l, k + 1, params.s * complex(table.same_up)),
                "same_down": (l, k - 1, 1j * complex(table.same_down)),
                "up_down": (l + 1, k - 1, params.s * complex(table.up_down)),
            }
            for label, (l2, k2, coeff) in moves.items():
                if coeff == 0 or l2 < 0:
                    continue
                if n == 1 and k2 not in (0, 1):
                    continue
                if n >= 2 and k2 < 0:
                    continue
                target = (m + 2 * sign, l2, k2)
                edges.append(
                    GraphEdge(
                        (m, l, k),
                        target,
                        "E+" if sign > 0 else "E-",
                        coeff,
                        dangling=target not in in_window,
                    )
                )
    return LadderGraph(params, [nodes[key] for key in sorted(nodes)], edges)


def level_curves_csv(n: int, lam_max, samples: int = 200, l_max: float | None = None) -> str:
    """CSV rows (lambda, l, k_real) sampling k = lambda/(2l) - l + 1 - n/2.

    One block of rows per admissible lambda <= lam_max over a real l grid;
    the data behind the admissible level-curve figure.
    """
    out = io.StringIO()
    writer = csv.writer(out, lineterminator="\n")
    writer.writerow(["lambda", "l", "k"])
    for ev in enumerate_admissible(n, lam_max):
        lam = ev.value
        top = l_max if l_max is not None else float((-(n - 2) + (((n - 2) ** 2 + 8 * lam) ** 0.5)) / 4 + 1)
        for i in range(1, samples + 1):
            l = top * i / samples
            k = float(lam) / (2 * l) - l + 1 - n / 2
            writer.writerow([str(lam), f"{l:.6f}", f"{k:.6f}"])
    return out.getvalue()


def ktype_lattice(
    params: ParameterSet,
    lam_max,
    m_max: int,
    include_zero_family: bool = False,
) -> list[KTypeVector]:
    """One K-type per (admissible pair, legal weight |m| <= m_max).

    Uses a single representative harmonic per pair; negative-k pairs for
    n = 2 are excluded (experimental index range).
    """
    n = params.n
    vectors = []
    pair_list: list[tuple[int, int]] = []
    for ev in enumerate_admissible(n, lam_max):
        pair_list.extend(radial_pairs(n, ev.value))
    if include_zero_family:
        pair_list.extend((0, k) for k in (range(2) if n == 1 else range(3)))
    for l, k in pair_list:
        if n == 2 and k < 0:
            continue
        h = harmonic_representative(n, k)
        residue = weight_residue(params, k)
        start = -m_max + ((residue + m_max) % 4)
        for m in range(start, m_max + 1, 4):
            vectors.append(make_ktype(params, m, l, k, h))
    return vectors
