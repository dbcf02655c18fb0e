"""Dense desk-scale oracle: exact evolution, circuit application, Haar sampling.

Everything here materializes operators on 2**n basis states and is meant for
n <= DENSE_LIMIT (4096-dimensional at the default limit of 12 qubits).  Basis
convention: computational index b has bit j equal to the state of qubit j, so
qubit 0 is the least significant bit and |0...0> is the first basis vector.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
import scipy.sparse as sp
import scipy.sparse.linalg as spla

from .pauli import DENSE_LIMIT, PauliString, PauliSum
from .trotter import Circuit

_I4 = (1.0, 1j, -1.0, -1j)


def _check_limit(n: int, dense_limit: int, what: str) -> None:
    if n > dense_limit:
        raise ValueError(f"{what} needs n <= {dense_limit}, got n={n}")


def _word_matrix_parts(word: PauliString) -> tuple[np.ndarray, np.ndarray, complex]:
    """(rows, cols, phase-per-column-sign) data for one word's sparse matrix.

    Entry <b ^ x| P |b> = i**popcount(x & z) * (-1)**popcount(z & b).
    """
    d = 1 << word.n
    cols = np.arange(d, dtype=np.uint64)
    rows = cols ^ np.uint64(word.x)
    signs = 1.0 - 2.0 * (np.bitwise_count(cols & np.uint64(word.z)) & 1).astype(np.float64)
    phase = _I4[(word.x & word.z).bit_count() % 4]
    return rows, cols, phase * signs


def to_sparse(a: PauliSum) -> sp.csr_matrix:
    """CSR matrix of a Pauli sum (any n; caller keeps n sane)."""
    d = 1 << a.n
    mat = sp.csr_matrix((d, d), dtype=complex)
    for word, coeff in a.items():
        rows, cols, vals = _word_matrix_parts(word)
        mat = mat + sp.csr_matrix((coeff * vals, (rows, cols)), shape=(d, d))
    return mat


def materialize(a: PauliSum, dense_limit: int = DENSE_LIMIT) -> np.ndarray:
    """Dense complex matrix of a Hermitian Pauli sum."""
    _check_limit(a.n, dense_limit, "materialize")
    return to_sparse(a).toarray()


def spectral_norm(a: PauliSum) -> float:
    """Largest singular value of a Hermitian Pauli sum.

    The operator is first restricted to its support (identity factors do not
    change the spectral norm), so local operators stay cheap at any n.
    """
    if a.is_zero():
        return 0.0
    supp = sorted(a.support())
    if len(supp) < a.n:
        a = _restrict(a, supp)
    d = 1 << a.n
    mat = to_sparse(a)
    if d <= 1024:
        return float(np.max(np.abs(np.linalg.eigvalsh(mat.toarray()))))
    hi = spla.eigsh(mat, k=1, which="LA", return_eigenvectors=False)[0]
    lo = spla.eigsh(mat, k=1, which="SA", return_eigenvectors=False)[0]
    return float(max(abs(hi), abs(lo)))


def hermiticity_defect(mat: np.ndarray) -> float:
    return float(np.linalg.norm(mat - mat.conj().T, 2))


def unitarity_defect(mat: np.ndarray) -> float:
    return float(np.linalg.norm(mat @ mat.conj().T - np.eye(mat.shape[0]), 2))


# -- exact evolution -----------------------------------------------------------

_EIG_CACHE: dict[PauliSum, tuple[np.ndarray, np.ndarray]] = {}
_SPARSE_CACHE: dict[PauliSum, sp.csr_matrix] = {}


def _eigensystem(h: PauliSum) -> tuple[np.ndarray, np.ndarray]:
    cached = _EIG_CACHE.get(h)
    if cached is not None:
        return cached
    w, v = np.linalg.eigh(materialize(h))
    if len(_EIG_CACHE) >= 4:
        _EIG_CACHE.pop(next(iter(_EIG_CACHE)))
    _EIG_CACHE[h] = (w, v)
    return w, v


def _sparse_cached(h: PauliSum) -> sp.csr_matrix:
    mat = _SPARSE_CACHE.get(h)
    if mat is None:
        mat = to_sparse(h)
        if len(_SPARSE_CACHE) >= 4:
            _SPARSE_CACHE.pop(next(iter(_SPARSE_CACHE)))
        _SPARSE_CACHE[h] = mat
    return mat


def exact_evolution(h: PauliSum, t: float, dense_limit: int = DENSE_LIMIT) -> np.ndarray:
    """Unitary exp(i*t*H) via Hermitian eigendecomposition."""
    _check_limit(h.n, dense_limit, "exact_evolution")
    w, v = _eigensystem(h)
    return (v * np.exp(1j * t * w)) @ v.conj().T


def evolve_state(h: PauliSum, t: float, psi: np.ndarray, dense_limit: int = DENSE_LIMIT) -> np.ndarray:
    """exp(i*t*H) @ psi; eigendecomposition for small dimensions, sparse
    Krylov propagation above 1024 where a dense eigh would dominate."""
    _check_limit(h.n, dense_limit, "evolve_state")
    if 1 << h.n <= 1024:
        w, v = _eigensystem(h)
        return v @ (np.exp(1j * t * w) * (v.conj().T @ psi))
    return spla.expm_multiply(1j * t * _sparse_cached(h), np.asarray(psi, dtype=complex))


# -- circuit application -------------------------------------------------------


def _restrict(gen: PauliSum, supp: list[int]) -> PauliSum:
    """Reindex a generator supported on `supp` down to len(supp) qubits."""
    pos = {q: p for p, q in enumerate(supp)}
    items = []
    for word, coeff in gen.items():
        x = z = 0
        for q in supp:
            x |= ((word.x >> q) & 1) << pos[q]
            z |= ((word.z >> q) & 1) << pos[q]
        items.append((PauliString(len(supp), x, z), coeff))
    return PauliSum(len(supp), items)


def _gate_unitary(gen: PauliSum, angle: float) -> tuple[np.ndarray, list[int]]:
    """Local unitary exp(i*angle*G) on the generator's support."""
    supp = sorted(gen.support())
    if not supp:
        supp = [0]
    local = materialize(_restrict(gen, supp), dense_limit=len(supp))
    w, v = np.linalg.eigh(local)
    u = (v * np.exp(1j * angle * w)) @ v.conj().T
    return u, supp


def _apply_local(arr: np.ndarray, u: np.ndarray, supp: list[int], n: int) -> np.ndarray:
    """Apply a k-local unitary on qubits `supp` to the row index of arr.

    arr may be a state (2**n,) or a matrix (2**n, m) acted on from the left.
    """
    k = len(supp)
    rest = arr.shape[1:] if arr.ndim > 1 else ()
    tensor = arr.reshape([2] * n + [int(np.prod(rest))] if rest else [2] * n)
    # axis p of the reshaped tensor is qubit n-1-p
    axes = [n - 1 - q for q in reversed(supp)]
    tensor = np.moveaxis(tensor, axes, range(k))
    tail = tensor.shape[k:]
    block = tensor.reshape(1 << k, -1)
    block = u @ block
    tensor = block.reshape([2] * k + list(tail))
    tensor = np.moveaxis(tensor, range(k), axes)
    return tensor.reshape(arr.shape)


def _clusters(gen: PauliSum) -> list[list[tuple[PauliString, float]]]:
    """Split the terms into connected components of overlapping supports."""
    items = list(gen.items())
    parent = list(range(len(items)))

    def find(i):
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    owner: dict[int, int] = {}
    for idx, (w, _) in enumerate(items):
        for q in w.support():
            if q in owner:
                parent[find(idx)] = find(owner[q])
            owner[q] = idx
    buckets: dict[int, list] = {}
    for idx, item in enumerate(items):
        buckets.setdefault(find(idx), []).append(item)
    return list(buckets.values())


def _apply_generator_exp(arr: np.ndarray, gen: PauliSum, angle: float, n: int) -> np.ndarray:
    """Apply exp(i*angle*G) to the row index of arr, exactly.

    Disjoint connected clusters of G factor the exponential; diagonal
    clusters become phase vectors, mutually commuting clusters become
    per-term exponentials, and anything else is exponentiated densely on
    its (necessarily small) support.
    """
    d = 1 << n
    for cluster in _clusters(gen):
        words = [w for w, _ in cluster]
        if all(w.x == 0 for w in words):
            diag = np.zeros(d)
            for w, c in cluster:
                diag += c * (1.0 - 2.0 * (np.bitwise_count(np.arange(d, dtype=np.uint64) & np.uint64(w.z)) & 1))
            phases = np.exp(1j * angle * diag)
            arr = arr * (phases if arr.ndim == 1 else phases[:, None])
            continue
        supp = sorted(frozenset().union(*(w.support() for w in words)))
        commuting = all(a.commutes_with(b) for i, a in enumerate(words) for b in words[i + 1:])
        if len(supp) <= 6 and not commuting:
            u, qubits = _gate_unitary(PauliSum(n, cluster), angle)
            arr = _apply_local(arr, u, qubits, n)
        elif commuting:
            for w, c in cluster:
                u, qubits = _gate_unitary(PauliSum(n, [(w, c)]), angle)
                arr = _apply_local(arr, u, qubits, n)
        else:
            u, qubits = _gate_unitary(PauliSum(n, cluster), angle)
            arr = _apply_local(arr, u, qubits, n)
    return arr


def apply_circuit(c: Circuit, dense_limit: int = DENSE_LIMIT) -> np.ndarray:
    """Dense unitary of a circuit: the ordered product of its gate exponentials."""
    _check_limit(c.n, dense_limit, "apply_circuit")
    d = 1 << c.n
    u = np.eye(d, dtype=complex)
    for gate in c.gates:
        u = _apply_generator_exp(u, gate.generator, gate.angle, c.n)
    return u


def apply_circuit_to_state(c: Circuit, psi: np.ndarray) -> np.ndarray:
    out = np.asarray(psi, dtype=complex)
    for gate in c.gates:
        out = _apply_generator_exp(out, gate.generator, gate.angle, c.n)
    return out


def conjugate(u: np.ndarray, o: np.ndarray) -> np.ndarray:
    return u @ o @ u.conj().T


def heisenberg_error(h: PauliSum, obs: PauliSum, c: Circuit, t: float, dense_limit: int = DENSE_LIMIT) -> float:
    """Spectral norm of exp(iHt) O exp(-iHt) - U O U^dag for the circuit's U."""
    _check_limit(h.n, dense_limit, "heisenberg_error")
    o = materialize(obs, dense_limit)
    u0 = exact_evolution(h, t, dense_limit)
    uc = apply_circuit(c, dense_limit)
    delta = conjugate(u0, o) - conjugate(uc, o)
    return float(np.max(np.abs(np.linalg.eigvalsh(delta))))


# -- Haar sampling and empirical averages --------------------------------------


def sample_haar(n: int, seed, dense_limit: int = DENSE_LIMIT) -> np.ndarray:
    """One Haar-random pure state: normalized standard complex Gaussian vector.

    Deterministic per seed; pass a sequence like (global_seed, index) to get
    order-independent per-sample streams.
    """
    _check_limit(n, dense_limit, "sample_haar")
    rng = np.random.default_rng(seed)
    d = 1 << n
    vec = rng.standard_normal(d) + 1j * rng.standard_normal(d)
    return vec / np.linalg.norm(vec)


@dataclass
class EmpiricalError:
    mean: float
    std: float
    values: list[float] = field(repr=False)


def empirical_average_error(
    h: PauliSum,
    obs: PauliSum,
    c: Circuit,
    t: float,
    samples: int,
    seed: int,
    dense_limit: int = DENSE_LIMIT,
) -> EmpiricalError:
    """Mean/std of |<psi|e^{iHt} O e^{-iHt}|psi> - <psi|U O U^dag|psi>| over Haar states.

    Sample i uses the RNG stream (seed, i), so results do not depend on
    evaluation order or worker count.
    """
    if samples < 2:
        raise ValueError("need at least 2 samples")
    _check_limit(h.n, dense_limit, "empirical_average_error")
    o = materialize(obs, dense_limit)
    delta = conjugate(exact_evolution(h, t, dense_limit), o) - conjugate(apply_circuit(c, dense_limit), o)
    values = []
    for i in range(samples):
        psi = sample_haar(h.n, (seed, i), dense_limit)
        values.append(float(abs(np.vdot(psi, delta @ psi))))
    arr = np.asarray(values)
    return EmpiricalError(float(arr.mean()), float(arr.std(ddof=1)), values)


# -- projected return amplitude / rate function ---------------------------------


@dataclass
class RatePoint:
    t: float
    value: float
    singular: bool = False


def zero_projector(n: int, k: int) -> PauliSum:
    """prod_{j<k} (I + Z_j)/2 expanded as a 2**k-term Pauli sum."""
    if k > n:
        raise ValueError("projector width exceeds qubit count")
    items = []
    for mask in range(1 << k):
        items.append((PauliString(n, 0, mask), 0.5**k))
    return PauliSum(n, items)


def rate_function(
    h: PauliSum,
    k: int,
    t_grid,
    circuit_builder=None,
    dense_limit: int = DENSE_LIMIT,
    floor: float = 1e-12,
) -> list[RatePoint]:
    """-log(L_k)/k along t_grid, from |0..0> and the k-qubit zero projector.

    circuit_builder=None evaluates the exact evolution; otherwise it must map
    t -> Circuit approximating exp(+iHt), whose inverse is applied to the
    state.  Amplitudes at or below `floor` are floored and flagged singular
    (the signature of a dynamical transition), not raised.
    """
    _check_limit(h.n, dense_limit, "rate_function")
    d = 1 << h.n
    psi0 = np.zeros(d, dtype=complex)
    psi0[0] = 1.0
    proj = to_sparse(zero_projector(h.n, k))
    out = []
    for t in t_grid:
        if circuit_builder is None:
            psi_t = evolve_state(h, -t, psi0, dense_limit)
        else:
            psi_t = apply_circuit_to_state(circuit_builder(t).inverse(), psi0)
        amp = float(np.real(np.vdot(psi_t, proj @ psi_t)))
        singular = amp <= floor
        lam = -math.log(max(amp, floor)) / k
        out.append(RatePoint(float(t), lam, singular))
    return out
