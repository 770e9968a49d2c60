"""Zero-one matrices with real-field and GF(2) semantics.

A single `BinaryMatrix` plays both roles used throughout the package: the
real measurement matrix of the sparse-recovery problem and the GF(2)
parity-check matrix of the channel code. Only 0/1 entries are supported;
the translation results between the two problems require zero-one matrices.

Vectors are plain tuples: `RealVector` holds `Fraction` entries, `BitVector`
holds ints in {0, 1}. Indices are 0-based everywhere in the API.
"""
import itertools
import logging
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, List, Optional, Sequence, Tuple, Union

from .errors import DimensionError, GuardExceededError, MatrixFormatError

logger = logging.getLogger(__name__)

RealVector = Tuple[Fraction, ...]
BitVector = Tuple[int, ...]
Number = Union[int, float, str, Fraction]

DEFAULT_MAX_CODE_DIMENSION = 24


@dataclass(frozen=True)
class BinaryMatrix:
    """
    An m×n matrix with entries in {0, 1}.

    Row supports I_j and column supports J_i are derived from the entries
    at construction and cached.
    """
    entries: Tuple[Tuple[int, ...], ...]
    row_supports: Tuple[Tuple[int, ...], ...] = field(init=False, repr=False, compare=False)
    col_supports: Tuple[Tuple[int, ...], ...] = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        rows = tuple(tuple(int(v) for v in row) for row in self.entries)
        if not rows or not rows[0]:
            raise ValueError("A matrix needs at least one row and one column")
        width = len(rows[0])
        for j, row in enumerate(rows):
            if len(row) != width:
                raise ValueError(f"Row {j} has {len(row)} entries, expected {width}")
            if any(v not in (0, 1) for v in row):
                raise ValueError(f"Row {j} has an entry outside {{0, 1}}")
        object.__setattr__(self, 'entries', rows)
        object.__setattr__(self, 'row_supports', tuple(
            tuple(i for i, v in enumerate(row) if v) for row in rows
        ))
        object.__setattr__(self, 'col_supports', tuple(
            tuple(j for j in range(len(rows)) if rows[j][i]) for i in range(width)
        ))

    @classmethod
    def from_rows(cls, rows: Iterable[Iterable[int]]) -> "BinaryMatrix":
        """Build a matrix from any nested iterable of 0/1 values."""
        return cls(tuple(tuple(row) for row in rows))

    @classmethod
    def identity(cls, n: int) -> "BinaryMatrix":
        return cls.from_rows([[1 if i == j else 0 for i in range(n)] for j in range(n)])

    @property
    def m(self) -> int:
        return len(self.entries)

    @property
    def n(self) -> int:
        return len(self.entries[0])

    @property
    def max_row_weight(self) -> int:
        return max(len(s) for s in self.row_supports)

    def column_submatrix(self, columns: Sequence[int]) -> Tuple[Tuple[int, ...], ...]:
        """Entries restricted to the given columns, in the given order."""
        return tuple(tuple(row[i] for i in columns) for row in self.entries)

    def __str__(self) -> str:
        return serialize_dense(self).rstrip()


@dataclass(frozen=True)
class SupportSet:
    """A sorted set S of coordinate indices of {0, ..., n-1}."""
    indices: Tuple[int, ...]
    n: int

    def __post_init__(self):
        ordered = tuple(sorted(set(int(i) for i in self.indices)))
        if len(ordered) != len(tuple(self.indices)):
            raise ValueError(f"Support indices are not unique: {self.indices}")
        if ordered and (ordered[0] < 0 or ordered[-1] >= self.n):
            raise ValueError(f"Support {ordered} not within 0..{self.n - 1}")
        object.__setattr__(self, 'indices', ordered)

    @classmethod
    def of(cls, indices: Iterable[int], n: int) -> "SupportSet":
        return cls(tuple(indices), n)

    def complement(self) -> "SupportSet":
        members = set(self.indices)
        return SupportSet(tuple(i for i in range(self.n) if i not in members), self.n)

    def __len__(self) -> int:
        return len(self.indices)

    def __iter__(self):
        return iter(self.indices)

    def __contains__(self, i: object) -> bool:
        return i in self.indices


# ---------------------------------------------------------------------------
# Vectors and norms
# ---------------------------------------------------------------------------

def to_fraction(value: Number) -> Fraction:
    """
    Convert a number to an exact Fraction.

    Floats convert to their exact binary value, strings accept "p/q" and
    decimal notation.
    """
    if isinstance(value, Fraction):
        return value
    if isinstance(value, float):
        return Fraction(value)
    return Fraction(value)


def real_vector(values: Iterable[Number]) -> RealVector:
    return tuple(to_fraction(v) for v in values)


def bit_vector(values: Iterable[int]) -> BitVector:
    bits = tuple(int(v) for v in values)
    if any(b not in (0, 1) for b in bits):
        raise ValueError(f"Bit vector has entries outside {{0, 1}}: {bits}")
    return bits


def parse_vector(text: str) -> RealVector:
    """Parse "2,1,1" or "1/2 -3 0" into a RealVector."""
    tokens = text.replace(',', ' ').split()
    if not tokens:
        raise ValueError("Empty vector")
    return real_vector(tokens)


def support(a: Sequence[Number]) -> Tuple[int, ...]:
    return tuple(i for i, v in enumerate(a) if v != 0)


def l0_norm(a: Sequence[Number]) -> int:
    return len(support(a))


def l1_norm(a: Sequence[Fraction]) -> Fraction:
    return sum((abs(v) for v in a), Fraction(0))


def l2_squared(a: Sequence[Fraction]) -> Fraction:
    return sum((v * v for v in a), Fraction(0))


def linf_norm(a: Sequence[Fraction]) -> Fraction:
    return max((abs(v) for v in a), default=Fraction(0))


def abs_vector(a: Sequence[Fraction]) -> RealVector:
    return tuple(abs(v) for v in a)


def hamming_weight(x: Sequence[int]) -> int:
    return sum(1 for b in x if b)


def restrict(a: Sequence[Fraction], indices: Iterable[int]) -> RealVector:
    """a_S: entries of a on S, zero elsewhere (length preserved)."""
    keep = set(indices)
    return tuple(v if i in keep else Fraction(0) for i, v in enumerate(a))


def best_k_support(e: Sequence[Fraction], k: int) -> SupportSet:
    """
    Support of the k largest-magnitude entries of e.

    This is the minimizer of the best k-term approximation error for every
    ℓq norm. Ties are broken toward the lowest index.
    """
    if k < 0 or k > len(e):
        raise ValueError(f"k={k} out of range for length {len(e)}")
    order = sorted(range(len(e)), key=lambda i: (-abs(e[i]), i))
    return SupportSet.of(order[:k], len(e))


# ---------------------------------------------------------------------------
# Parsing and serialization
# ---------------------------------------------------------------------------

def _numbered_lines(text: str) -> List[Tuple[int, List[str]]]:
    """Non-blank lines as (1-based line number, tokens)."""
    lines = []
    for number, raw in enumerate(text.splitlines(), start=1):
        tokens = raw.split()
        if tokens:
            lines.append((number, tokens))
    return lines


def _parse_ints(tokens: List[str], line: int) -> List[int]:
    try:
        return [int(t) for t in tokens]
    except ValueError:
        raise MatrixFormatError(f"non-integer token in {' '.join(tokens)!r}", line)


def parse_alist(text: str) -> BinaryMatrix:
    """
    Parse a matrix in ALIST format.

    Layout: "n m", "max_col_degree max_row_degree", n column degrees, m row
    degrees, n lines of 1-based row indices per column, m lines of 1-based
    column indices per row. Trailing zeros on adjacency lines are padding.

    Raises:
        MatrixFormatError: malformed header, degree/adjacency mismatch or
            out-of-range index, with the offending line number
    """
    lines = _numbered_lines(text)
    if len(lines) < 4:
        raise MatrixFormatError("ALIST needs at least a 4-line header", len(lines) + 1 if lines else 1)

    line_no, tokens = lines[0]
    header = _parse_ints(tokens, line_no)
    if len(header) != 2 or header[0] < 1 or header[1] < 1:
        raise MatrixFormatError("header must be 'n m' with n, m >= 1", line_no)
    n, m = header

    line_no, tokens = lines[1]
    max_degrees = _parse_ints(tokens, line_no)
    if len(max_degrees) != 2:
        raise MatrixFormatError("second line must hold 'max_col_degree max_row_degree'", line_no)

    line_no, tokens = lines[2]
    col_degrees = _parse_ints(tokens, line_no)
    if len(col_degrees) != n:
        raise MatrixFormatError(f"expected {n} column degrees, found {len(col_degrees)}", line_no)
    if max(col_degrees) != max_degrees[0]:
        raise MatrixFormatError(
            f"declared max column degree {max_degrees[0]} but column degrees peak at {max(col_degrees)}",
            lines[1][0]
        )

    line_no, tokens = lines[3]
    row_degrees = _parse_ints(tokens, line_no)
    if len(row_degrees) != m:
        raise MatrixFormatError(f"expected {m} row degrees, found {len(row_degrees)}", line_no)
    if max(row_degrees) != max_degrees[1]:
        raise MatrixFormatError(
            f"declared max row degree {max_degrees[1]} but row degrees peak at {max(row_degrees)}",
            lines[1][0]
        )

    body = lines[4:]
    if len(body) < n:
        last = body[-1][0] + 1 if body else lines[3][0] + 1
        raise MatrixFormatError(f"expected {n} column adjacency lines, found {len(body)}", last)

    entries = [[0] * n for _ in range(m)]
    for i in range(n):
        line_no, tokens = body[i]
        indices = _adjacency(_parse_ints(tokens, line_no), col_degrees[i], m, line_no, f"column {i + 1}")
        for j in indices:
            entries[j - 1][i] = 1

    row_lines = body[n:]
    if row_lines:
        if len(row_lines) != m:
            raise MatrixFormatError(
                f"expected {m} row adjacency lines, found {len(row_lines)}", row_lines[-1][0]
            )
        for j in range(m):
            line_no, tokens = row_lines[j]
            indices = _adjacency(_parse_ints(tokens, line_no), row_degrees[j], n, line_no, f"row {j + 1}")
            listed = sorted(indices)
            actual = [i + 1 for i in range(n) if entries[j][i]]
            if listed != actual:
                raise MatrixFormatError(
                    f"row {j + 1} lists columns {listed} but the column lists give {actual}", line_no
                )
    else:
        for j in range(m):
            if sum(entries[j]) != row_degrees[j]:
                raise MatrixFormatError(
                    f"row {j + 1} declared degree {row_degrees[j]} but has {sum(entries[j])} entries",
                    lines[3][0]
                )

    matrix = BinaryMatrix.from_rows(entries)
    logger.debug(f"Parsed ALIST matrix {m}x{n}")
    return matrix


def _adjacency(values: List[int], degree: int, bound: int, line: int, what: str) -> List[int]:
    """Validate one adjacency line: `degree` entries in 1..bound, then zero padding."""
    listed = values[:]
    while listed and listed[-1] == 0:
        listed.pop()
    if len(listed) != degree:
        raise MatrixFormatError(f"{what} declared degree {degree} but lists {len(listed)} entries", line)
    for v in listed:
        if v < 1 or v > bound:
            raise MatrixFormatError(f"{what} index {v} out of range 1..{bound}", line)
    if len(set(listed)) != len(listed):
        raise MatrixFormatError(f"{what} lists a repeated index", line)
    return listed


def serialize_alist(H: BinaryMatrix) -> str:
    """Serialize to ALIST; zero padding only for empty rows or columns."""
    col_degrees = [len(s) for s in H.col_supports]
    row_degrees = [len(s) for s in H.row_supports]
    lines = [
        f"{H.n} {H.m}",
        f"{max(col_degrees)} {max(row_degrees)}",
        " ".join(str(d) for d in col_degrees),
        " ".join(str(d) for d in row_degrees),
    ]
    lines.extend(" ".join(str(j + 1) for j in s) or "0" for s in H.col_supports)
    lines.extend(" ".join(str(i + 1) for i in s) or "0" for s in H.row_supports)
    return "\n".join(lines) + "\n"


def parse_dense(text: str) -> BinaryMatrix:
    """
    Parse whitespace-separated rows of 0/1 tokens.

    Raises:
        MatrixFormatError: ragged rows or a token other than 0/1
    """
    rows = []
    width = None
    for line_no, tokens in _numbered_lines(text):
        for token in tokens:
            if token not in ('0', '1'):
                raise MatrixFormatError(f"non-binary token {token!r}", line_no)
        if width is None:
            width = len(tokens)
        elif len(tokens) != width:
            raise MatrixFormatError(f"ragged row: {len(tokens)} entries, expected {width}", line_no)
        rows.append([int(t) for t in tokens])
    if not rows:
        raise MatrixFormatError("no rows found", 1)
    return BinaryMatrix.from_rows(rows)


def serialize_dense(H: BinaryMatrix) -> str:
    return "\n".join(" ".join(str(v) for v in row) for row in H.entries) + "\n"


def load_matrix(path: str, fmt: Optional[str] = None) -> BinaryMatrix:
    """Read a matrix file; format inferred from the .alist suffix when not given."""
    if fmt is None:
        fmt = 'alist' if path.endswith('.alist') else 'dense'
    with open(path, 'r') as f:
        text = f.read()
    if fmt == 'alist':
        return parse_alist(text)
    if fmt == 'dense':
        return parse_dense(text)
    raise ValueError(f"Unknown matrix format: {fmt}")


# ---------------------------------------------------------------------------
# Linear algebra
# ---------------------------------------------------------------------------

def _pack(bits: Sequence[int]) -> int:
    return sum(int(bit) << i for i, bit in enumerate(bits))


def _gf2_reduce(rows: Sequence[int], width: int) -> Tuple[List[int], List[int]]:
    """
    Gauss-Jordan elimination over GF(2) on rows packed as integers (bit i = column i).

    Only columns below `width` are eliminated; higher bits ride along, so a
    right-hand side can be packed above them.

    Returns:
        Tuple of (reduced rows, pivot columns); row r holds the pivot of pivots[r]
    """
    reduced = list(rows)
    pivots: List[int] = []
    for col in range(width):
        mask = 1 << col
        r = len(pivots)
        pivot = next((i for i in range(r, len(reduced)) if reduced[i] & mask), None)
        if pivot is None:
            continue
        reduced[r], reduced[pivot] = reduced[pivot], reduced[r]
        for i in range(len(reduced)):
            if i != r and reduced[i] & mask:
                reduced[i] ^= reduced[r]
        pivots.append(col)
    return reduced, pivots


def gf2_rank(H: BinaryMatrix) -> int:
    """Rank over GF(2)."""
    return len(_gf2_reduce([_pack(row) for row in H.entries], H.n)[1])


def rref(rows: Sequence[Sequence[Number]]) -> Tuple[List[List[Fraction]], List[int]]:
    """
    Reduced row echelon form over the rationals.

    Returns:
        Tuple of (nonzero rref rows, pivot column per row)
    """
    A = [[to_fraction(v) for v in row] for row in rows]
    if not A:
        return [], []
    width = len(A[0])
    pivots: List[int] = []
    r = 0
    for col in range(width):
        pivot = next((i for i in range(r, len(A)) if A[i][col] != 0), None)
        if pivot is None:
            continue
        A[r], A[pivot] = A[pivot], A[r]
        inv = 1 / A[r][col]
        A[r] = [v * inv for v in A[r]]
        for i in range(len(A)):
            if i != r and A[i][col] != 0:
                factor = A[i][col]
                A[i] = [a - factor * b for a, b in zip(A[i], A[r])]
        pivots.append(col)
        r += 1
        if r == len(A):
            break
    return A[:r], pivots


def real_rank(H: BinaryMatrix) -> int:
    return len(rref(H.entries)[1])


def real_nullspace_basis(H: BinaryMatrix) -> List[RealVector]:
    """
    Exact basis of {a | H·a = 0} in reduced-echelon parametric form.

    One vector per free column f: entry 1 at f, minus the rref column at the
    pivots, zero elsewhere.
    """
    reduced, pivots = rref(H.entries)
    free = [c for c in range(H.n) if c not in set(pivots)]
    basis = []
    for f in free:
        v = [Fraction(0)] * H.n
        v[f] = Fraction(1)
        for row, p in zip(reduced, pivots):
            v[p] = -row[f]
        basis.append(tuple(v))
    return basis


def enumerate_codewords(
    H: BinaryMatrix,
    max_dimension: int = DEFAULT_MAX_CODE_DIMENSION
) -> List[BitVector]:
    """
    All x with H·x = 0 over GF(2), sorted lexicographically.

    Raises:
        GuardExceededError: if the code dimension n - rank exceeds max_dimension
    """
    dimension = H.n - gf2_rank(H)
    if dimension > max_dimension:
        raise GuardExceededError(
            f"Code dimension {dimension} exceeds enumeration guard {max_dimension}"
        )
    basis = _gf2_nullspace_basis(H)
    codewords = set()
    for coefficients in itertools.product((0, 1), repeat=len(basis)):
        word = 0
        for c, b in zip(coefficients, basis):
            if c:
                word ^= b
        codewords.add(tuple((word >> i) & 1 for i in range(H.n)))
    return sorted(codewords)


def _gf2_nullspace_basis(H: BinaryMatrix) -> List[int]:
    """GF(2) nullspace basis vectors packed as integers (bit i = coordinate i)."""
    rows, pivots = _gf2_reduce([_pack(row) for row in H.entries], H.n)
    basis = []
    for free in (c for c in range(H.n) if c not in set(pivots)):
        v = 1 << free
        for row, p in zip(rows, pivots):
            if row & (1 << free):
                v |= 1 << p
        basis.append(v)
    return basis


def gf2_solvable(rows: Sequence[Sequence[int]], rhs: Sequence[int]) -> bool:
    """Whether A·x = b has a solution over GF(2)."""
    width = len(rows[0]) if rows else 0
    packed = [_pack(row) | ((b & 1) << width) for row, b in zip(rows, rhs)]
    reduced, _ = _gf2_reduce(packed, width)
    return all(row != (1 << width) for row in reduced)


def matvec(H: BinaryMatrix, y: Sequence[Fraction]) -> RealVector:
    if len(y) != H.n:
        raise DimensionError(f"Vector length {len(y)} does not match {H.n} columns")
    return tuple(sum((y[i] for i in s), Fraction(0)) for s in H.row_supports)


def syndrome_real(H: BinaryMatrix, y: Sequence[Number]) -> RealVector:
    """s = H·y over the rationals."""
    return matvec(H, real_vector(y))


def syndrome_gf2(H: BinaryMatrix, y: Sequence[int]) -> BitVector:
    """s = H·y mod 2."""
    if len(y) != H.n:
        raise DimensionError(f"Vector length {len(y)} does not match {H.n} columns")
    return tuple(sum(y[i] for i in s) % 2 for s in H.row_supports)
