"""Dense real tensors and their multilinear forms.

A tensor of order k with shape (n_1, ..., n_k) is identified with the
k-linear form

    f(x_1, ..., x_k) = sum_{i_1 ... i_k} T[i_1, ..., i_k] x_1[i_1] ... x_k[i_k],

and a square symmetric tensor with the degree-k homogeneous polynomial
f(x, ..., x).  Everything here is a pure function of immutable inputs.
"""

from __future__ import annotations

import json
import math
from itertools import permutations
from typing import NamedTuple, Sequence

import numpy as np

from .errors import AsymmetricTensorError, ShapeError

__all__ = [
    "DenseTensor",
    "SymmetryCertificate",
    "evaluate",
    "mode_gradient",
    "sym_gradient",
    "sym_hessian",
    "euler_residual",
    "symmetrize",
    "max_asymmetry",
    "certify_symmetry",
    "is_symmetric",
    "symmetry_tolerance",
    "random_tensor",
    "dumps_tensor",
    "loads_tensor",
    "write_tensor_file",
    "read_tensor_file",
]


class DenseTensor:
    """Order-k real tensor stored dense, row-major (last index fastest)."""

    __slots__ = ("data",)

    def __init__(self, data):
        arr = np.array(data, dtype=float, order="C")
        if arr.ndim < 1:
            raise ShapeError("a tensor needs at least one mode")
        if any(d < 1 for d in arr.shape):
            raise ShapeError(f"all dimensions must be >= 1, got {arr.shape}")
        if not np.all(np.isfinite(arr)):
            raise ValueError("tensor entries must be finite")
        arr.flags.writeable = False
        self.data = arr

    @classmethod
    def from_flat(cls, shape, entries):
        """Build from a dimension list and a flat row-major entry array."""
        dims = tuple(int(d) for d in shape)
        if len(dims) < 1 or any(d < 1 for d in dims):
            raise ShapeError(f"invalid shape {dims}")
        flat = np.asarray(entries, dtype=float)
        if flat.ndim != 1 or flat.size != math.prod(dims):
            raise ShapeError(
                f"expected {math.prod(dims)} entries for shape {dims}, got {flat.size}"
            )
        return cls(flat.reshape(dims))

    @property
    def shape(self) -> tuple[int, ...]:
        return self.data.shape

    @property
    def order(self) -> int:
        return self.data.ndim

    @property
    def entries(self) -> np.ndarray:
        """Flat row-major view of the entries (read-only)."""
        return self.data.reshape(-1)

    @property
    def is_square(self) -> bool:
        return len(set(self.data.shape)) == 1

    def __repr__(self):
        return f"DenseTensor(shape={self.shape})"


class SymmetryCertificate(NamedTuple):
    tensor: DenseTensor
    max_asymmetry: float


def _require_square(tensor: DenseTensor):
    if not tensor.is_square:
        raise ShapeError(f"operation needs a square tensor, got shape {tensor.shape}")


def _check_vectors(tensor: DenseTensor, vectors: Sequence) -> list[np.ndarray]:
    if len(vectors) != tensor.order:
        raise ShapeError(
            f"need {tensor.order} vectors for an order-{tensor.order} tensor, "
            f"got {len(vectors)}"
        )
    out = []
    for i, (v, n) in enumerate(zip(vectors, tensor.shape)):
        arr = np.asarray(v, dtype=float)
        if arr.ndim != 1 or arr.size != n:
            raise ShapeError(f"vector {i + 1} must have length {n}, got shape {arr.shape}")
        if not np.all(np.isfinite(arr)):
            raise ValueError(f"vector {i + 1} has non-finite entries")
        out.append(arr)
    return out


def evaluate(tensor: DenseTensor, vectors: Sequence) -> float:
    """Value of the multilinear form at one vector per mode."""
    vs = _check_vectors(tensor, vectors)
    out = tensor.data
    for v in vs:
        out = np.tensordot(out, v, axes=([0], [0]))
    return float(out)


def mode_gradient(tensor: DenseTensor, vectors: Sequence, mode: int) -> np.ndarray:
    """Gradient of the multilinear form in the given mode (1-based).

    Contracts the tensor with every vector except ``vectors[mode-1]``;
    component j therefore equals d(evaluate)/d(vectors[mode-1][j]).
    """
    vs = _check_vectors(tensor, vectors)
    k = tensor.order
    if not 1 <= mode <= k:
        raise ValueError(f"mode must be in 1..{k}, got {mode}")
    out = np.moveaxis(tensor.data, mode - 1, 0)
    for r in range(k):
        if r != mode - 1:
            out = np.tensordot(out, vs[r], axes=([1], [0]))
    return out


def symmetry_tolerance(tensor: DenseTensor) -> float:
    """Absolute tolerance used by the numeric symmetry check."""
    return 1e-10 * float(np.max(np.abs(tensor.data)))


def max_asymmetry(tensor: DenseTensor) -> float:
    """Largest |T[perm(idx)] - T[idx]| over all index permutations (square only)."""
    _require_square(tensor)
    data = tensor.data
    worst = 0.0
    for perm in permutations(range(tensor.order)):
        d = float(np.max(np.abs(np.transpose(data, perm) - data)))
        if d > worst:
            worst = d
    return worst


def certify_symmetry(tensor: DenseTensor) -> SymmetryCertificate:
    return SymmetryCertificate(tensor, max_asymmetry(tensor))


def is_symmetric(tensor: DenseTensor, tol: float | None = None) -> bool:
    if not tensor.is_square:
        return False
    if tol is None:
        tol = symmetry_tolerance(tensor)
    return max_asymmetry(tensor) <= tol


def _require_symmetric(tensor: DenseTensor):
    _require_square(tensor)
    if not is_symmetric(tensor):
        raise AsymmetricTensorError(
            "tensor is not symmetric within tolerance; symmetrize() it first or "
            "use the mode-wise operations"
        )


def sym_gradient(tensor: DenseTensor, v) -> np.ndarray:
    """Single-mode gradient of f(v, ..., v) for a symmetric tensor.

    All mode choices agree by symmetry; mode 1 is used.
    """
    _require_symmetric(tensor)
    return mode_gradient(tensor, [v] * tensor.order, 1)


def sym_hessian(tensor: DenseTensor, v) -> np.ndarray:
    """Hessian of the polynomial f(x, ..., x) at v, for symmetric tensors.

    Equals k(k-1) times the contraction of the tensor with v in all modes
    but two.  Returned exactly symmetric.  Order-1 tensors give the zero
    matrix (the polynomial is linear).
    """
    _require_symmetric(tensor)
    k = tensor.order
    n = tensor.shape[0]
    if k == 1:
        return np.zeros((n, n))
    vec = np.asarray(v, dtype=float)
    if vec.shape != (n,):
        raise ShapeError(f"vector must have length {n}")
    out = tensor.data
    for _ in range(k - 2):
        out = np.tensordot(out, vec, axes=([2], [0]))
    out = k * (k - 1) * out
    return (out + out.T) / 2


def euler_residual(tensor: DenseTensor, v) -> float:
    """Defect of the single-mode shortcut for the homogeneity gradient at v.

    The polynomial g(x) = f(x, ..., x) has gradient sum_i g_i(x) over the
    mode gradients, and x . grad g = k g (degree-k homogeneity).  For a
    symmetric tensor all mode gradients coincide, so k * g_1 plays the
    role of grad g; this returns ||k g_1 - sum_i g_i||, zero up to
    roundoff exactly for symmetric tensors and clearly positive on
    asymmetrized inputs.
    """
    _require_square(tensor)
    vec = np.asarray(v, dtype=float)
    if not np.any(vec):
        raise ValueError("v must be nonzero")
    k = tensor.order
    grads = [mode_gradient(tensor, [vec] * k, i) for i in range(1, k + 1)]
    return float(np.linalg.norm(k * grads[0] - sum(grads)))


def symmetrize(tensor: DenseTensor) -> DenseTensor:
    """Average over all index permutations; output is exactly symmetric.

    Exactly symmetric inputs are returned unchanged, which makes the map
    an exact projection.
    """
    _require_square(tensor)
    if max_asymmetry(tensor) == 0.0:
        return tensor
    data = tensor.data
    k = tensor.order
    acc = np.zeros_like(data)
    for perm in permutations(range(k)):
        acc += np.transpose(data, perm)
    acc /= math.factorial(k)
    # Pin exact symmetry: every index orbit takes the value stored at its
    # sorted representative.
    idx = np.indices(data.shape).reshape(k, -1)
    idx.sort(axis=0)
    return DenseTensor(acc[tuple(idx)].reshape(data.shape))


def random_tensor(shape, seed: int, symmetric: bool = False) -> DenseTensor:
    """Standard-normal tensor from NumPy's PCG64 stream; same seed, same bits."""
    dims = tuple(int(d) for d in shape)
    if len(dims) < 1 or any(d < 1 for d in dims):
        raise ShapeError(f"invalid shape {dims}")
    if symmetric and len(set(dims)) != 1:
        raise ValueError(f"symmetric tensors must be square, got shape {dims}")
    rng = np.random.default_rng(seed)
    t = DenseTensor(rng.standard_normal(dims))
    return symmetrize(t) if symmetric else t


# ---------------------------------------------------------------------------
# File format: a JSON document {"shape": [...], "entries": [...]} with the
# entries flat in row-major order.  Written with 17 significant digits so a
# read-back reproduces the binary64 values exactly.
# ---------------------------------------------------------------------------


def dumps_tensor(tensor: DenseTensor) -> str:
    shape_s = ", ".join(str(d) for d in tensor.shape)
    entries_s = ", ".join(format(x, ".17g") for x in tensor.entries)
    return f'{{"shape": [{shape_s}], "entries": [{entries_s}]}}\n'


def _reject_constant(name):
    raise ValueError(f"non-finite value {name!r} in tensor file")


def loads_tensor(text: str) -> DenseTensor:
    try:
        doc = json.loads(text, parse_constant=_reject_constant)
    except json.JSONDecodeError as exc:
        raise ValueError(f"malformed tensor file: {exc}") from exc
    if not isinstance(doc, dict) or "shape" not in doc or "entries" not in doc:
        raise ValueError('tensor file must be an object with "shape" and "entries"')
    shape = doc["shape"]
    entries = doc["entries"]
    if not isinstance(shape, list) or not all(isinstance(d, int) for d in shape):
        raise ValueError('"shape" must be a list of integers')
    if not isinstance(entries, list):
        raise ValueError('"entries" must be a list of numbers')
    try:
        return DenseTensor.from_flat(shape, entries)
    except ShapeError:
        raise
    except (TypeError, ValueError) as exc:
        raise ValueError(f"bad tensor entries: {exc}") from exc


def write_tensor_file(tensor: DenseTensor, path):
    with open(path, "w", encoding="ascii") as fh:
        fh.write(dumps_tensor(tensor))


def read_tensor_file(path) -> DenseTensor:
    with open(path, "r", encoding="ascii") as fh:
        return loads_tensor(fh.read())
