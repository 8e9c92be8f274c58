"""The three-term Koszul complex whose middle cohomology is K_{p,q}.

Let U be the n+1 dimensional space of linear forms, V = S^d U the degree-d
monomials (dim v = binom(d+n, n)), and write H(e) for the degree-e graded
piece.  The group K_{p,q}(P^n, b; d) is the middle cohomology of

    Wedge^{p+1} V (x) H((q-1)d + b)  --d_in-->
    Wedge^p V     (x) H(qd + b)      --d_out-->
    Wedge^{p-1} V (x) H((q+1)d + b)

with the differential

    delta(m_1 ^ ... ^ m_k (x) g) = sum_j (-1)^(j-1) (... m_j omitted ...) (x) m_j g.

Every map is equivariant for the torus scaling the variables, so the complex
splits into blocks indexed by the total exponent vector (the weight, summing
to (p+q)d + b), and dim K_{p,q} is the sum over weights of
mid_dim - rank(d_in) - rank(d_out).  Blocks are built as integer matrices
with entries +-1 and the composite d_out . d_in is checked to vanish over
the integers at build time.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations

from .arith import binom_safe
from .linalg import SparseMatrix
from .monomials import GradedPieceBasis, enumerate_basis, exponent_vectors

DEFAULT_MEMORY_CAP = 2 << 30

# Coarse per-object costs (bytes) for the feasibility estimate: a basis
# element is a couple of small tuples, a matrix entry a 3-tuple of ints.
_BYTES_PER_ELEMENT = 120
_BYTES_PER_ENTRY = 60


class InfeasibleBlockError(Exception):
    """A block (or a whole cell) would exceed the configured memory cap."""

    def __init__(self, message, *, weight=None, middle_dim=0, source_dim=0,
                 estimated_bytes=0, cap=0):
        super().__init__(message)
        self.weight = weight
        self.middle_dim = middle_dim
        self.source_dim = source_dim
        self.estimated_bytes = estimated_bytes
        self.cap = cap


@dataclass(frozen=True)
class Parameters:
    """Cell coordinates (n, b, d, p, q) with the derived sizes v and r_d.

    v = dim S^d U = binom(d+n, n) and r_d = v - 1 is the dimension of the
    ambient projective space of the embedding.  Both may be passed in
    explicitly, in which case they are checked against the formula.
    """

    n: int
    b: int
    d: int
    p: int
    q: int
    v: int = None
    r_d: int = None

    def __post_init__(self):
        if self.n < 1:
            raise ValueError(f"n must be >= 1, got {self.n}")
        if self.d < 1:
            raise ValueError(f"d must be >= 1, got {self.d}")
        if self.b < 0:
            raise ValueError(f"b must be >= 0, got {self.b}")
        if self.p < 0:
            raise ValueError(f"p must be >= 0, got {self.p}")
        v = binom_safe(self.d + self.n, self.n)
        if self.v is None:
            object.__setattr__(self, "v", v)
        elif self.v != v:
            raise ValueError(f"inconsistent v: given {self.v}, expected {v}")
        if self.r_d is None:
            object.__setattr__(self, "r_d", v - 1)
        elif self.r_d != v - 1:
            raise ValueError(f"inconsistent r_d: given {self.r_d}, expected {v - 1}")

    @property
    def middle_degree(self) -> int:
        return self.q * self.d + self.b

    @property
    def source_degree(self) -> int:
        return (self.q - 1) * self.d + self.b

    @property
    def weight_total(self) -> int:
        return (self.p + self.q) * self.d + self.b


def _delta_terms(wedge, tensor, monomials):
    """Terms of delta on one wedge-tensor element; signs alternate from +1."""
    out = []
    sign = 1
    for j in range(len(wedge)):
        e = monomials[wedge[j]]
        nw = wedge[:j] + wedge[j + 1:]
        nt = tuple(a + c for a, c in zip(tensor, e))
        out.append(((nw, nt), sign))
        sign = -sign
    return out


def differential(wedge, tensor, basis: GradedPieceBasis):
    """Koszul differential of (basis wedge indices, tensor exponent tuple).

    `wedge` must be strictly increasing indices into `basis` (the degree-d
    monomials in canonical order); `tensor` is an exponent tuple in the same
    variables.  Returns [((wedge', tensor'), sign), ...] with the j-th term
    dropping the j-th wedge factor into the tensor with sign (-1)^(j-1).
    """
    for a, c in zip(wedge, wedge[1:]):
        if a >= c:
            raise ValueError(f"wedge indices must be strictly increasing, got {wedge}")
    for i in wedge:
        if not 0 <= i < len(basis):
            raise ValueError(f"wedge index {i} out of range for {basis!r}")
    if len(tensor) != basis.n + 1:
        raise ValueError(f"tensor has {len(tensor)} variables, expected {basis.n + 1}")
    return _delta_terms(tuple(wedge), tuple(tensor), basis.monomials)


@dataclass(frozen=True)
class KoszulBlock:
    """One torus-weight block: bases are implicit, matrices explicit.

    d_in has shape (mid_dim, src_dim), d_out (target_dim, mid_dim), and the
    block's contribution to dim K_{p,q} is mid_dim - rank(d_in) - rank(d_out).
    """

    weight: tuple
    mid_dim: int
    src_dim: int
    target_dim: int
    d_in: SparseMatrix
    d_out: SparseMatrix


class KoszulCell:
    """All weight blocks of the complex at one (n, b, d, p, q).

    The middle and source spaces are enumerated once (wedges of basis indices
    times tensor monomials) and grouped by weight; blocks are then built
    lazily per weight.  Target rows are allocated on demand while applying
    the differential, so the target space is never enumerated.
    """

    def __init__(self, params: Parameters, memory_cap: int = DEFAULT_MEMORY_CAP):
        self.params = params
        self.memory_cap = memory_cap
        self.basis_d = enumerate_basis(params.n, params.d)
        assert len(self.basis_d) == params.v
        mid = self.expected_middle_dim()
        src = self.expected_source_dim()
        est = _BYTES_PER_ELEMENT * (mid + src) + _BYTES_PER_ENTRY * (
            src * (params.p + 1) + mid * params.p
        )
        if est > memory_cap:
            raise InfeasibleBlockError(
                f"cell {params} needs ~{est} bytes (middle {mid}, source {src}), "
                f"cap is {memory_cap}",
                middle_dim=mid, source_dim=src, estimated_bytes=est, cap=memory_cap,
            )
        self._middle = None
        self._source = None

    def expected_middle_dim(self) -> int:
        p = self.params
        return binom_safe(p.v, p.p) * binom_safe(p.middle_degree + p.n, p.n)

    def expected_source_dim(self) -> int:
        p = self.params
        return binom_safe(p.v, p.p + 1) * binom_safe(p.source_degree + p.n, p.n)

    def _grouped(self, wedge_size: int, tensor_degree: int) -> dict:
        par = self.params
        groups = {}
        if wedge_size < 0 or wedge_size > par.v:
            return groups
        tensors = exponent_vectors(par.n, tensor_degree)
        if not tensors:
            return groups
        exps = self.basis_d.monomials
        zero = (0,) * (par.n + 1)
        for wedge in combinations(range(par.v), wedge_size):
            s = zero
            for i in wedge:
                s = tuple(a + c for a, c in zip(s, exps[i]))
            for t in tensors:
                w = tuple(a + c for a, c in zip(s, t))
                groups.setdefault(w, []).append((wedge, t))
        return groups

    def _ensure_groups(self):
        if self._middle is None:
            par = self.params
            self._middle = self._grouped(par.p, par.middle_degree)
            self._source = self._grouped(par.p + 1, par.source_degree)
            assert sum(len(g) for g in self._middle.values()) == self.expected_middle_dim()
            assert sum(len(g) for g in self._source.values()) == self.expected_source_dim()

    def weights(self) -> list:
        """Weights with nonzero middle space, duplicate-free, descending lex."""
        self._ensure_groups()
        ws = sorted(self._middle, reverse=True)
        total = self.params.weight_total
        assert all(sum(w) == total for w in ws)
        return ws

    def middle_dim(self, weight) -> int:
        self._ensure_groups()
        return len(self._middle.get(weight, ()))

    def total_middle_dim(self) -> int:
        self._ensure_groups()
        return sum(len(g) for g in self._middle.values())

    def block(self, weight) -> KoszulBlock:
        self._ensure_groups()
        par = self.params
        middle = self._middle.get(weight, [])
        source = self._source.get(weight, [])
        est = _BYTES_PER_ELEMENT * (len(middle) + len(source)) + _BYTES_PER_ENTRY * (
            len(source) * (par.p + 1) + len(middle) * par.p
        )
        if est > self.memory_cap:
            raise InfeasibleBlockError(
                f"block at weight {weight} needs ~{est} bytes, cap is {self.memory_cap}",
                weight=weight, middle_dim=len(middle), source_dim=len(source),
                estimated_bytes=est, cap=self.memory_cap,
            )
        exps = self.basis_d.monomials
        mid_index = {elem: i for i, elem in enumerate(middle)}

        target_index = {}
        out_entries = []
        for col, (wedge, tensor) in enumerate(middle):
            for key, sign in _delta_terms(wedge, tensor, exps):
                row = target_index.setdefault(key, len(target_index))
                out_entries.append((row, col, sign))
        d_out = SparseMatrix(len(target_index), len(middle), tuple(out_entries))

        in_entries = []
        in_columns = []
        for col, (wedge, tensor) in enumerate(source):
            column = []
            for key, sign in _delta_terms(wedge, tensor, exps):
                row = mid_index[key]  # weight preservation: must land in this block
                column.append((row, sign))
            in_columns.append(column)
            in_entries.extend((row, col, sign) for row, sign in column)
        d_in = SparseMatrix(len(middle), len(source), tuple(in_entries))

        self._check_composition_zero(d_out, in_columns, weight)
        return KoszulBlock(
            weight=weight, mid_dim=len(middle), src_dim=len(source),
            target_dim=len(target_index), d_in=d_in, d_out=d_out,
        )

    @staticmethod
    def _check_composition_zero(d_out: SparseMatrix, in_columns, weight):
        out_cols = {}
        for r, c, v in d_out.entries:
            out_cols.setdefault(c, []).append((r, v))
        for column in in_columns:
            acc = {}
            for mid_row, sign_in in column:
                for tgt_row, sign_out in out_cols.get(mid_row, ()):
                    acc[tgt_row] = acc.get(tgt_row, 0) + sign_in * sign_out
            assert all(val == 0 for val in acc.values()), (
                f"d_out . d_in != 0 at weight {weight}"
            )

    def iter_blocks(self):
        for w in self.weights():
            yield self.block(w)


def enumerate_weights(params: Parameters, memory_cap: int = DEFAULT_MEMORY_CAP) -> list:
    return KoszulCell(params, memory_cap).weights()


def build_block(params: Parameters, weight, memory_cap: int = DEFAULT_MEMORY_CAP) -> KoszulBlock:
    """Standalone single-block build (a fresh cell; fine for one-off use)."""
    return KoszulCell(params, memory_cap).block(weight)


def full_complex(params: Parameters, memory_cap: int = DEFAULT_MEMORY_CAP):
    """The unblocked three-term complex, for cross-checks on tiny instances.

    Returns (d_in, d_out, mid_dim) over the full bases with no weight
    decomposition; shares no grouping code with the block path.
    """
    par = params
    cell_guard = KoszulCell(par, memory_cap)  # reuse the feasibility estimate
    exps = cell_guard.basis_d.monomials

    def basis_of(wedge_size, tensor_degree):
        if wedge_size < 0 or wedge_size > par.v:
            return []
        tensors = exponent_vectors(par.n, tensor_degree)
        return [
            (wedge, t)
            for wedge in combinations(range(par.v), wedge_size)
            for t in tensors
        ]

    middle = basis_of(par.p, par.middle_degree)
    source = basis_of(par.p + 1, par.source_degree)
    mid_index = {elem: i for i, elem in enumerate(middle)}

    target_index = {}
    out_entries = []
    for col, (wedge, tensor) in enumerate(middle):
        for key, sign in _delta_terms(wedge, tensor, exps):
            row = target_index.setdefault(key, len(target_index))
            out_entries.append((row, col, sign))
    d_out = SparseMatrix(len(target_index), len(middle), tuple(out_entries))

    in_entries = []
    for col, (wedge, tensor) in enumerate(source):
        for key, sign in _delta_terms(wedge, tensor, exps):
            in_entries.append((mid_index[key], col, sign))
    d_in = SparseMatrix(len(middle), len(source), tuple(in_entries))
    return d_in, d_out, len(middle)
