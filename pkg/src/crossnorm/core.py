"""Dense complex linear algebra over a bipartite tensor-product space.

Shapes, tensor products, traces, spectral/SVD factorizations, Schmidt
decomposition, realignment and Jordan-type splittings for operators and
vectors on H (x) J.  The composite index convention is row-major throughout:
the basis vector e_i (x) f_k sits at flat index ``i * d_j + k``, which is
exactly the ordering produced by ``numpy.kron``.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

# Tolerances, relative to input scale.
EPS_NORM = 1e-10
EPS_TRACE = 1e-10
EPS_HERM = 1e-10
EPS_PSD = 1e-9
EPS_ORTHO = 1e-9
EPS_RECON = 1e-9
SCHMIDT_CUTOFF = 1e-12


class ShapeError(ValueError):
    """Array dimensions do not match the declared bipartite shape."""


@dataclass(frozen=True)
class BipartiteShape:
    """Dimensions (d_h, d_j) of the two tensor factors."""

    dh: int
    dj: int

    def __post_init__(self):
        if self.dh < 1 or self.dj < 1:
            raise ShapeError(f"factor dimensions must be >= 1, got ({self.dh}, {self.dj})")

    @property
    def total(self) -> int:
        return self.dh * self.dj

    @property
    def m(self) -> int:
        """min(d_h, d_j): caps the Schmidt rank and the projective norm of states."""
        return min(self.dh, self.dj)


@dataclass(frozen=True, eq=False)
class BipartiteVector:
    """Vector on H (x) J with entries[i * d_j + k] = <e_i (x) f_k | v>."""

    shape: BipartiteShape
    entries: np.ndarray

    def __post_init__(self):
        arr = np.asarray(self.entries, dtype=complex).reshape(-1)
        if arr.size != self.shape.total:
            raise ShapeError(
                f"vector of length {arr.size} does not fit shape "
                f"({self.shape.dh}, {self.shape.dj})"
            )
        object.__setattr__(self, "entries", arr)

    def norm(self) -> float:
        return float(np.linalg.norm(self.entries))

    def normalized(self) -> "BipartiteVector":
        n = self.norm()
        if n == 0.0:
            raise ValueError("cannot normalize the zero vector")
        return BipartiteVector(self.shape, self.entries / n)

    def as_matrix(self) -> np.ndarray:
        """d_h x d_j coefficient matrix M with v = sum_ik M[i,k] e_i (x) f_k."""
        return self.entries.reshape(self.shape.dh, self.shape.dj)

    def projector(self) -> "BipartiteOperator":
        """Rank-one operator |v><v|."""
        return BipartiteOperator(self.shape, np.outer(self.entries, self.entries.conj()))


@dataclass(frozen=True, eq=False)
class BipartiteOperator:
    """Dense square operator on H (x) J, same composite index convention."""

    shape: BipartiteShape
    matrix: np.ndarray

    def __post_init__(self):
        mat = np.asarray(self.matrix, dtype=complex)
        n = self.shape.total
        if mat.shape != (n, n):
            raise ShapeError(
                f"matrix of shape {mat.shape} does not fit bipartite shape "
                f"({self.shape.dh}, {self.shape.dj})"
            )
        object.__setattr__(self, "matrix", mat)

    @property
    def n(self) -> int:
        return self.shape.total

    def trace(self) -> complex:
        return complex(np.trace(self.matrix))

    def dagger(self) -> "BipartiteOperator":
        return BipartiteOperator(self.shape, self.matrix.conj().T)

    def scale(self) -> float:
        """Magnitude used to make tolerance checks relative."""
        s = float(np.abs(self.matrix).max(initial=0.0))
        return max(s, 1.0)

    def is_hermitian(self, tol: float = EPS_HERM) -> bool:
        return bool(np.abs(self.matrix - self.matrix.conj().T).max() <= tol * self.scale())

    def is_psd(self, tol: float = EPS_PSD) -> bool:
        if not self.is_hermitian(max(tol, EPS_HERM)):
            return False
        w = np.linalg.eigvalsh((self.matrix + self.matrix.conj().T) / 2)
        return bool(w.min(initial=0.0) >= -tol * self.scale())

    def is_density(self, tol_trace: float = EPS_TRACE, tol_psd: float = EPS_PSD) -> bool:
        return self.is_psd(tol_psd) and abs(self.trace() - 1.0) <= tol_trace * self.scale()


@dataclass(frozen=True, eq=False)
class SchmidtForm:
    """Schmidt data of a bipartite vector: v = sum_l a_l (phi_l (x) psi_l).

    Coefficients are strictly positive and descending; left/right vectors are
    orthonormal systems stored as rows of (rank, d) arrays.
    """

    coefficients: np.ndarray
    left_vectors: np.ndarray
    right_vectors: np.ndarray
    shape: BipartiteShape

    @property
    def rank(self) -> int:
        return int(self.coefficients.size)

    def reconstruct(self) -> BipartiteVector:
        acc = np.zeros(self.shape.total, dtype=complex)
        for a, phi, psi in zip(self.coefficients, self.left_vectors, self.right_vectors):
            acc += a * np.kron(phi, psi)
        return BipartiteVector(self.shape, acc)


@dataclass(frozen=True, eq=False)
class OperatorSchmidtForm:
    """SVD of the realigned operator: op = sum_k sigma_k (G_k (x) H_k).

    G_k and H_k are Hilbert-Schmidt orthonormal families on H and J.
    """

    singular_values: np.ndarray
    left_ops: list = field(default_factory=list)
    right_ops: list = field(default_factory=list)
    shape: BipartiteShape = None

    @property
    def rank(self) -> int:
        return int(self.singular_values.size)

    def reconstruct(self) -> BipartiteOperator:
        n = self.shape.total
        acc = np.zeros((n, n), dtype=complex)
        for s, g, h in zip(self.singular_values, self.left_ops, self.right_ops):
            acc += s * np.kron(g, h)
        return BipartiteOperator(self.shape, acc)


# ---------------------------------------------------------------------------
# basic norms


def trace_norm(op) -> float:
    """Trace norm tr|S|: the sum of singular values of a square matrix.

    Equals |tr(S)| precisely when some phase multiple of S is positive
    semidefinite; for Hermitian S it is the sum of |eigenvalues|.
    """
    mat = _square(op)
    if mat.size == 0:
        return 0.0
    return float(np.linalg.svd(mat, compute_uv=False).sum())


def operator_norm(op) -> float:
    """Largest singular value sup{||S psi|| : ||psi|| = 1}."""
    mat = _square(op)
    if mat.size == 0:
        return 0.0
    return float(np.linalg.svd(mat, compute_uv=False).max())


def nuclear_norm(mat) -> float:
    """Sum of singular values of an arbitrary (possibly rectangular) matrix."""
    mat = np.asarray(mat, dtype=complex)
    if mat.size == 0:
        return 0.0
    return float(np.linalg.svd(mat, compute_uv=False).sum())


def _square(op) -> np.ndarray:
    mat = np.asarray(getattr(op, "matrix", op), dtype=complex)
    if mat.ndim != 2 or mat.shape[0] != mat.shape[1]:
        raise ShapeError(f"expected a square matrix, got shape {mat.shape}")
    return mat


# ---------------------------------------------------------------------------
# tensor bookkeeping


def kron(a, b, shape: BipartiteShape | None = None) -> BipartiteOperator:
    """Tensor product a (x) b as a BipartiteOperator.

    Under the composite index convention (a (x) b)(phi (x) psi) =
    (a phi) (x) (b psi), and the trace norm is multiplicative across the
    product.

    Parameters
    ----------
    a, b : array_like
        Square matrices acting on H and J respectively.
    shape : BipartiteShape, optional
        Declared shape; must match the factor dimensions when given.
    """
    a = _square(a)
    b = _square(b)
    inferred = BipartiteShape(a.shape[0], b.shape[0])
    if shape is not None and shape != inferred:
        raise ShapeError(f"factors of shape {a.shape}/{b.shape} do not match declared {shape}")
    return BipartiteOperator(inferred, np.kron(a, b))


def partial_trace(op: BipartiteOperator, side: str = "j") -> np.ndarray:
    """Trace out one factor; ``side`` names the factor that is removed.

    ``side="j"`` returns the operator on H (tr_J), ``side="h"`` the operator
    on J.  The full trace is preserved.
    """
    dh, dj = op.shape.dh, op.shape.dj
    t = op.matrix.reshape(dh, dj, dh, dj)
    if side == "j":
        return np.einsum("ikjk->ij", t)
    if side == "h":
        return np.einsum("ikil->kl", t)
    raise ValueError(f"side must be 'h' or 'j', got {side!r}")


def realign(op: BipartiteOperator) -> np.ndarray:
    """Realignment map: entry (i*d_h + j, k*d_j + l) is <e_i f_k|op|e_j f_l>.

    The realignment of a simple tensor A (x) B is the rank-one outer product
    of the row-vectorizations of A and B; the trace norm of the realigned
    matrix lower-bounds the projective norm.
    """
    dh, dj = op.shape.dh, op.shape.dj
    return op.matrix.reshape(dh, dj, dh, dj).transpose(0, 2, 1, 3).reshape(dh * dh, dj * dj)


# ---------------------------------------------------------------------------
# factorizations


def schmidt_decompose(v: BipartiteVector, cutoff: float = SCHMIDT_CUTOFF) -> SchmidtForm:
    """Schmidt decomposition v = sum_l a_l (phi_l (x) psi_l).

    Coefficients are returned in descending order; entries below
    ``cutoff`` relative to the largest coefficient are dropped.  Each left
    vector's largest-magnitude entry is made real positive, with the phase
    absorbed into the matching right vector, so the factorization is
    reproducible.

    Raises
    ------
    ValueError
        If ``v`` is the zero vector.
    """
    if v.norm() == 0.0:
        raise ValueError("Schmidt decomposition of the zero vector is undefined")
    u, s, vh = np.linalg.svd(v.as_matrix(), full_matrices=False)
    keep = s > cutoff * s[0]
    s = s[keep]
    left = u[:, keep].T.copy()
    right = vh[keep, :].copy()  # psi_l[k] = Vh[l, k] reconstructs with no conjugation
    for l in range(s.size):
        left[l], right[l] = _fix_phase(left[l], right[l])
    return SchmidtForm(s, left, right, v.shape)


def _fix_phase(left: np.ndarray, right: np.ndarray):
    """Rotate the pair so the largest-|.| entry of ``left`` is real positive."""
    idx = int(np.argmax(np.abs(left)))
    pivot = left[idx]
    if abs(pivot) == 0.0:
        return left, right
    ph = pivot / abs(pivot)
    return left * ph.conjugate(), right * ph


def operator_schmidt(op: BipartiteOperator, cutoff: float = SCHMIDT_CUTOFF) -> OperatorSchmidtForm:
    """Operator Schmidt form from the SVD of the realigned matrix.

    Returns sigma_k with Hilbert-Schmidt orthonormal factors G_k, H_k such
    that op = sum_k sigma_k (G_k (x) H_k); the sigma_k equal the singular
    values of realign(op).
    """
    dh, dj = op.shape.dh, op.shape.dj
    r = realign(op)
    u, s, vh = np.linalg.svd(r, full_matrices=False)
    if s.size and s[0] > 0.0:
        keep = s > cutoff * s[0]
    else:
        keep = s > 0.0
    s = s[keep]
    lefts, rights = [], []
    for k in range(s.size):
        g = u[:, keep][:, k]
        h = vh[keep, :][k, :]
        g, h = _fix_phase(g, h)
        lefts.append(g.reshape(dh, dh))
        rights.append(h.reshape(dj, dj))
    return OperatorSchmidtForm(s, lefts, rights, op.shape)


def herm_abs(mat: np.ndarray) -> np.ndarray:
    """|A| = sqrt(A^2) of a Hermitian matrix, via its eigendecomposition."""
    w, u = np.linalg.eigh((mat + mat.conj().T) / 2)
    return (u * np.abs(w)) @ u.conj().T


def jordan_split4(op):
    """Split S into four positive matrices with S = S1 - S2 + i(S3 - S4).

    S1 S2 = 0 = S3 S4; for Hermitian input S3 = S4 = 0 and
    tr(S1) + tr(S2) = trace_norm(S).
    """
    mat = _square(op)
    re = mat + mat.conj().T
    im = mat - mat.conj().T
    abs_re = herm_abs(re)
    abs_im = herm_abs(-1j * im)
    s1 = (abs_re + re) / 4
    s2 = (abs_re - re) / 4
    s3 = (abs_im - 1j * im) / 4
    s4 = (abs_im + 1j * im) / 4
    return s1, s2, s3, s4


def positive_negative_split(mat: np.ndarray):
    """Hermitian A = P - N with P, N >= 0 and PN = 0."""
    a = (np.asarray(mat, dtype=complex) + np.asarray(mat, dtype=complex).conj().T) / 2
    absa = herm_abs(a)
    return (absa + a) / 2, (absa - a) / 2


def eigh_blocks(mat: np.ndarray, rel_tol: float = 1e-9):
    """Eigendecomposition with eigenvalues grouped into degenerate blocks.

    Returns (eigenvalues descending by value, eigenvectors as columns,
    list of index slices; eigenvalues within ``rel_tol`` relative to the
    overall scale share a block).
    """
    w, u = np.linalg.eigh((mat + mat.conj().T) / 2)
    order = np.argsort(-w)
    w = w[order]
    u = u[:, order]
    scale = max(float(np.abs(w).max(initial=0.0)), 1e-300)
    blocks = []
    start = 0
    for i in range(1, w.size + 1):
        if i == w.size or abs(w[i] - w[start]) > rel_tol * scale:
            blocks.append(slice(start, i))
            start = i
    return w, u, blocks


# ---------------------------------------------------------------------------
# seeded random constructions


def rng_from_seed(seed: int) -> np.random.Generator:
    """The package-wide generator family (PCG64); seed is mandatory."""
    return np.random.default_rng(int(seed))


def random_pure(shape: BipartiteShape, seed) -> BipartiteVector:
    """Haar-like random unit vector on H (x) J, deterministic per seed."""
    rng = seed if isinstance(seed, np.random.Generator) else rng_from_seed(seed)
    z = rng.standard_normal(shape.total) + 1j * rng.standard_normal(shape.total)
    return BipartiteVector(shape, z / np.linalg.norm(z))


def random_density(shape: BipartiteShape, seed) -> BipartiteOperator:
    """Ginibre density matrix G G^* / tr(G G^*), deterministic per seed."""
    rng = seed if isinstance(seed, np.random.Generator) else rng_from_seed(seed)
    n = shape.total
    g = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
    m = g @ g.conj().T
    return BipartiteOperator(shape, m / np.trace(m).real)


# ---------------------------------------------------------------------------
# JSON interchange: {"shape":{"dh":..,"dj":..},"kind":"operator"|"vector",
#                    "data":[[re,im],...]} with row-major flattening


def complex_to_pairs(arr: np.ndarray) -> list:
    flat = np.asarray(arr, dtype=complex).reshape(-1)
    return [[float(z.real), float(z.imag)] for z in flat]


def pairs_to_complex(pairs) -> np.ndarray:
    return np.array([complex(p[0], p[1]) for p in pairs], dtype=complex)


def to_state_dict(obj) -> dict:
    """Serialize a BipartiteVector or BipartiteOperator to the wire format."""
    if isinstance(obj, BipartiteVector):
        kind, data = "vector", obj.entries
    elif isinstance(obj, BipartiteOperator):
        kind, data = "operator", obj.matrix
    else:
        raise TypeError(f"cannot serialize {type(obj).__name__}")
    return {
        "shape": {"dh": obj.shape.dh, "dj": obj.shape.dj},
        "kind": kind,
        "data": complex_to_pairs(data),
    }


def from_state_dict(d: dict):
    """Inverse of :func:`to_state_dict`; raises ValueError on malformed input."""
    try:
        shape = BipartiteShape(int(d["shape"]["dh"]), int(d["shape"]["dj"]))
        kind = d["kind"]
        data = pairs_to_complex(d["data"])
    except (KeyError, TypeError, IndexError) as exc:
        raise ValueError(f"malformed state dictionary: {exc}") from exc
    n = shape.total
    if kind == "vector":
        return BipartiteVector(shape, data)
    if kind == "operator":
        if data.size != n * n:
            raise ShapeError(f"operator data of length {data.size}, expected {n * n}")
        return BipartiteOperator(shape, data.reshape(n, n))
    raise ValueError(f"unknown kind {kind!r}")
