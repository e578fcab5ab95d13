"""Construction and reduction of small multipartite quantum states.

Conventions used throughout the package:

* Subsystem 0 is the leftmost ket label (big-endian), so the flat index of
  a basis state |i_0 i_1 ... i_{n-1}> is i_0 * prod(dims[1:]) + ... + i_{n-1}.
* Bipartite cuts are given by the index set of the *first* group; the
  complement forms the second group.
* Spectra are reported in nonincreasing order.
"""
from __future__ import annotations

import json
import urllib.parse
from dataclasses import dataclass

import numpy as np

__all__ = [
    "MAX_TOTAL_DIM",
    "StateFormatError",
    "DimensionError",
    "PureState",
    "DensityOperator",
    "SchmidtSpectrum",
    "partial_trace",
    "reduced_density",
    "schmidt_spectrum",
    "spin_flip",
    "psd_eigh",
    "preset",
    "load_state",
    "state_to_json",
    "state_from_json",
    "random_pure_state",
    "random_density_operator",
    "random_unitary",
    "apply_local_unitaries",
]

# States beyond this total dimension are out of scope for the toolkit.
MAX_TOTAL_DIM = 1024

# Spectrum entries below this are treated as exact zeros and dropped.
SPECTRUM_FLOOR = 1e-12

# Most negative eigenvalue tolerated before an operator is rejected as
# non-positive; anything in [-PSD_TOL, 0) is clipped to 0.
PSD_TOL = 1e-10


class StateFormatError(ValueError):
    """Malformed state file, preset string, or preset parameters."""


class DimensionError(ValueError):
    """State dimensions or rank unsupported by the requested operation."""


def _check_dims(dims) -> tuple[int, ...]:
    dims = tuple(int(d) for d in dims)
    if len(dims) == 0:
        raise DimensionError("dims must name at least one subsystem")
    if any(d < 2 for d in dims):
        raise DimensionError(f"every subsystem dimension must be >= 2, got {dims}")
    total = int(np.prod(dims))
    if total > MAX_TOTAL_DIM:
        raise DimensionError(
            f"total dimension {total} exceeds the supported maximum {MAX_TOTAL_DIM}"
        )
    return dims


def _check_cut(dims, cut) -> tuple[int, ...]:
    cut = tuple(sorted(set(int(k) for k in cut)))
    n = len(dims)
    if not cut or len(cut) >= n:
        raise DimensionError(
            f"cut must be a nonempty proper subset of subsystems 0..{n - 1}, got {cut}"
        )
    if any(k < 0 or k >= n for k in cut):
        raise DimensionError(f"cut indices out of range for {n} subsystems: {cut}")
    return cut


@dataclass(frozen=True)
class PureState:
    """Normalized state vector over a tensor product of small subsystems."""

    dims: tuple[int, ...]
    amps: np.ndarray

    def __post_init__(self):
        dims = _check_dims(self.dims)
        amps = np.asarray(self.amps, dtype=complex).reshape(-1)
        if amps.size != int(np.prod(dims)):
            raise StateFormatError(
                f"amplitude vector has length {amps.size}, expected {int(np.prod(dims))}"
            )
        nrm = np.linalg.norm(amps)
        if nrm < 1e-12:
            raise StateFormatError("amplitude vector is numerically zero")
        amps = amps / nrm
        amps.flags.writeable = False
        object.__setattr__(self, "dims", dims)
        object.__setattr__(self, "amps", amps)

    @property
    def dim(self) -> int:
        return self.amps.size

    def density(self) -> "DensityOperator":
        return DensityOperator(self.dims, np.outer(self.amps, self.amps.conj()))


@dataclass(frozen=True)
class DensityOperator:
    """Hermitian, unit-trace, positive-semidefinite operator with subsystem labels."""

    dims: tuple[int, ...]
    mat: np.ndarray

    def __post_init__(self):
        dims = _check_dims(self.dims)
        mat = np.asarray(self.mat, dtype=complex)
        d = int(np.prod(dims))
        if mat.shape != (d, d):
            raise StateFormatError(f"matrix has shape {mat.shape}, expected {(d, d)}")
        if np.max(np.abs(mat - mat.conj().T)) > PSD_TOL:
            raise StateFormatError("matrix is not Hermitian within 1e-10")
        tr = np.trace(mat).real
        if abs(tr - 1.0) > 1e-10:
            raise StateFormatError(f"trace is {tr!r}, expected 1 within 1e-10")
        mat = (mat + mat.conj().T) / 2.0
        low = np.linalg.eigvalsh(mat)[0]
        if low < -PSD_TOL:
            raise StateFormatError(
                f"matrix has eigenvalue {low:.3e} below the -1e-10 positivity floor"
            )
        mat.flags.writeable = False
        object.__setattr__(self, "dims", dims)
        object.__setattr__(self, "mat", mat)

    @property
    def dim(self) -> int:
        return self.mat.shape[0]

    def spectrum(self) -> np.ndarray:
        """Eigenvalues, clipped to [0, 1] and sorted nonincreasing."""
        vals = np.linalg.eigvalsh(self.mat)[::-1]
        return np.clip(vals, 0.0, 1.0)

    def rank(self, tol: float = PSD_TOL) -> int:
        return int(np.sum(self.spectrum() > tol))


@dataclass(frozen=True)
class SchmidtSpectrum:
    """Squared Schmidt coefficients of a pure bipartition, nonincreasing."""

    chis: np.ndarray

    def __post_init__(self):
        chis = np.asarray(self.chis, dtype=float).reshape(-1)
        if chis.size == 0:
            raise StateFormatError("empty Schmidt spectrum")
        if np.any(np.diff(chis) > 1e-12):
            raise StateFormatError("Schmidt spectrum must be nonincreasing")
        if np.any(chis < 0.0) or np.any(chis > 1.0 + 1e-12):
            raise StateFormatError("Schmidt spectrum entries must lie in [0, 1]")
        if abs(chis.sum() - 1.0) > 1e-10:
            raise StateFormatError("Schmidt spectrum must sum to 1 within 1e-10")
        chis.flags.writeable = False
        object.__setattr__(self, "chis", chis)

    def __len__(self) -> int:
        return self.chis.size

    def __iter__(self):
        return iter(self.chis)


def psd_eigh(mat: np.ndarray, clip_tol: float = PSD_TOL):
    """Eigendecomposition of a Hermitian PSD matrix, eigenvalues nonincreasing.

    Eigenvalues in [-clip_tol, 0) are clipped to 0; anything more negative
    raises.  Returns (eigenvalues, eigenvectors-as-columns).
    """
    mat = np.asarray(mat, dtype=complex)
    vals, vecs = np.linalg.eigh((mat + mat.conj().T) / 2.0)
    if vals[0] < -clip_tol:
        raise ValueError(
            f"matrix has eigenvalue {vals[0]:.3e} below the positivity floor"
        )
    vals = np.clip(vals, 0.0, None)
    order = np.argsort(vals)[::-1]
    return vals[order], vecs[:, order]


def partial_trace(rho: DensityOperator, keep) -> DensityOperator:
    """Trace out every subsystem not listed in ``keep``."""
    keep = tuple(sorted(set(int(k) for k in keep)))
    n = len(rho.dims)
    if not keep or any(k < 0 or k >= n for k in keep):
        raise DimensionError(
            f"keep must be a nonempty subset of subsystems 0..{n - 1}, got {keep}"
        )
    if len(keep) == n:
        return rho
    t = rho.mat.reshape(rho.dims + rho.dims)
    row = list(range(n))
    col = [n + k if k in keep else k for k in range(n)]
    out = [k for k in keep] + [n + k for k in keep]
    reduced = np.einsum(t, row + col, out)
    dk = int(np.prod([rho.dims[k] for k in keep]))
    return DensityOperator(
        tuple(rho.dims[k] for k in keep), reduced.reshape(dk, dk)
    )


def _split_matrix(psi: PureState, cut):
    """Amplitudes reshaped to (dim of cut group, dim of complement)."""
    cut = _check_cut(psi.dims, cut)
    rest = tuple(k for k in range(len(psi.dims)) if k not in cut)
    t = psi.amps.reshape(psi.dims).transpose(cut + rest)
    da = int(np.prod([psi.dims[k] for k in cut]))
    return t.reshape(da, -1), cut, rest


def reduced_density(psi: PureState, keep) -> DensityOperator:
    """Reduced state of a pure state on the ``keep`` subsystems."""
    n = len(psi.dims)
    keep_s = tuple(sorted(set(int(k) for k in keep)))
    if len(keep_s) == n:
        return psi.density()
    m, cut, _ = _split_matrix(psi, keep_s)
    return DensityOperator(tuple(psi.dims[k] for k in cut), m @ m.conj().T)


def schmidt_spectrum(psi: PureState, cut) -> SchmidtSpectrum:
    """Squared Schmidt coefficients across ``cut`` | complement.

    Computed from singular values of the amplitude matrix (more accurate
    near zero than an eigendecomposition of the reduced state).  Entries
    below 1e-12 are dropped and the remainder renormalized, so a product
    state reports exactly [1.0].
    """
    m, _, _ = _split_matrix(psi, cut)
    chis = np.linalg.svd(m, compute_uv=False) ** 2
    chis = np.clip(chis, 0.0, 1.0)
    chis = chis[chis >= SPECTRUM_FLOOR]
    chis = chis / chis.sum()
    return SchmidtSpectrum(np.sort(chis)[::-1])


_SY2 = np.array(
    [[0, 0, 0, -1], [0, 0, 1, 0], [0, 1, 0, 0], [-1, 0, 0, 0]], dtype=float
)


def spin_flip(rho: DensityOperator) -> np.ndarray:
    """Two-qubit spin-flipped matrix (sigma_y x sigma_y) rho* (sigma_y x sigma_y)."""
    if rho.dims != (2, 2):
        raise DimensionError(f"spin flip is defined for dims (2, 2), got {rho.dims}")
    return _SY2 @ rho.mat.conj() @ _SY2


# ---------------------------------------------------------------------------
# presets
# ---------------------------------------------------------------------------

def _preset_wclass3(a=0.5, b=0.5, c=np.sqrt(2.0) / 2.0) -> PureState:
    # a|100> + b|010> + c|001>
    a, b, c = float(a), float(b), float(c)
    if abs(a * a + b * b + c * c - 1.0) > 1e-6:
        raise StateFormatError("wclass3 amplitudes must satisfy a^2+b^2+c^2 = 1")
    v = np.zeros(8, dtype=complex)
    v[0b100] = a
    v[0b010] = b
    v[0b001] = c
    return PureState((2, 2, 2), v)


def _preset_gschmidt(l0, l1=0.0, l2=0.0, l3=0.0, l4=0.0, phi=0.0) -> PureState:
    # l0|000> + l1 e^{i phi}|100> + l2|101> + l3|110> + l4|111>
    lam = np.array([float(l0), float(l1), float(l2), float(l3), float(l4)])
    if np.any(lam < 0):
        raise StateFormatError("gschmidt coefficients must be nonnegative")
    if abs(np.sum(lam**2) - 1.0) > 1e-6:
        raise StateFormatError("gschmidt coefficients must satisfy sum(l_i^2) = 1")
    v = np.zeros(8, dtype=complex)
    v[0b000] = lam[0]
    v[0b100] = lam[1] * np.exp(1j * float(phi))
    v[0b101] = lam[2]
    v[0b110] = lam[3]
    v[0b111] = lam[4]
    return PureState((2, 2, 2), v)


def _preset_wN(N=3) -> PureState:
    N = int(N)
    if N < 2 or 2**N > MAX_TOTAL_DIM:
        raise StateFormatError(f"wN requires 2 <= N <= 10, got N={N}")
    v = np.zeros(2**N, dtype=complex)
    for k in range(N):
        v[1 << (N - 1 - k)] = 1.0  # one excitation on subsystem k
    return PureState((2,) * N, v / np.sqrt(N))


def _preset_ghzw(d=0.5) -> PureState:
    # sqrt(d)|GHZ> - sqrt(1-d)|W>; GHZ and W are orthogonal so the norm is 1
    d = float(d)
    if not 0.0 <= d <= 1.0:
        raise StateFormatError(f"ghzw weight d must lie in [0, 1], got {d}")
    ghz = np.zeros(8)
    ghz[0b000] = ghz[0b111] = 1.0 / np.sqrt(2.0)
    w = np.zeros(8)
    w[0b100] = w[0b010] = w[0b001] = 1.0 / np.sqrt(3.0)
    v = np.sqrt(d) * ghz - np.sqrt(1.0 - d) * w
    return PureState((2, 2, 2), v.astype(complex))


def _preset_p422(gamma=np.pi / 4.0) -> PureState:
    # (a|0>|00> + b|1>|10> + a|2>|01> + b|3>|11>) / sqrt(2), first subsystem 4-dim
    g = float(gamma)
    a, b = np.cos(g), np.sin(g)
    dims = (4, 2, 2)
    v = np.zeros(16, dtype=complex)
    for amp, labels in ((a, (0, 0, 0)), (b, (1, 1, 0)), (a, (2, 0, 1)), (b, (3, 1, 1))):
        v[np.ravel_multi_index(labels, dims)] = amp
    return PureState(dims, v / np.sqrt(2.0))


_PRESETS = {
    "wclass3": _preset_wclass3,
    "gschmidt": _preset_gschmidt,
    "wN": _preset_wN,
    "ghzw": _preset_ghzw,
    "p422": _preset_p422,
}

_INT_PARAMS = {"N"}


def preset(name: str, **params) -> PureState:
    """Build a named preset state.  Known names: wclass3, gschmidt, wN, ghzw, p422."""
    try:
        fn = _PRESETS[name]
    except KeyError:
        raise StateFormatError(
            f"unknown preset {name!r}; known presets: {sorted(_PRESETS)}"
        ) from None
    try:
        return fn(**params)
    except TypeError as exc:
        raise StateFormatError(f"bad parameters for preset {name!r}: {exc}") from None


# ---------------------------------------------------------------------------
# serialization
# ---------------------------------------------------------------------------

def _pairs_to_complex(pairs, what):
    arr = np.asarray(pairs, dtype=float)
    if arr.ndim < 1 or arr.shape[-1] != 2:
        raise StateFormatError(f"{what} must be a list of [re, im] pairs")
    return arr[..., 0] + 1j * arr[..., 1]


def state_from_json(doc: dict):
    """Parse the on-disk state document into a PureState or DensityOperator."""
    if not isinstance(doc, dict):
        raise StateFormatError("state document must be a JSON object")
    try:
        dims = doc["dims"]
        kind = doc["kind"]
    except KeyError as exc:
        raise StateFormatError(f"state document missing required key {exc}") from None
    if kind == "pure":
        if "amps" not in doc:
            raise StateFormatError('kind "pure" requires an "amps" array')
        return PureState(tuple(dims), _pairs_to_complex(doc["amps"], "amps"))
    if kind == "mixed":
        if "density" not in doc:
            raise StateFormatError('kind "mixed" requires a "density" matrix')
        return DensityOperator(tuple(dims), _pairs_to_complex(doc["density"], "density"))
    raise StateFormatError(f'state kind must be "pure" or "mixed", got {kind!r}')


def state_to_json(state) -> dict:
    """Inverse of state_from_json."""
    if isinstance(state, PureState):
        amps = [[z.real, z.imag] for z in state.amps]
        return {"dims": list(state.dims), "kind": "pure", "amps": amps}
    if isinstance(state, DensityOperator):
        density = [[[z.real, z.imag] for z in row] for row in state.mat]
        return {"dims": list(state.dims), "kind": "mixed", "density": density}
    raise TypeError(f"not a state object: {type(state).__name__}")


def load_state(source: str):
    """Load a state from a JSON file path or a ``preset:name?k=v`` URI."""
    if source.startswith("preset:"):
        parsed = urllib.parse.urlparse(source)
        name = parsed.path
        params = {}
        for key, vals in urllib.parse.parse_qs(parsed.query).items():
            raw = vals[-1]
            try:
                params[key] = int(raw) if key in _INT_PARAMS else float(raw)
            except ValueError:
                raise StateFormatError(
                    f"preset parameter {key}={raw!r} is not numeric"
                ) from None
        return preset(name, **params)
    try:
        with open(source) as fh:
            doc = json.load(fh)
    except OSError as exc:
        raise StateFormatError(f"cannot read state file {source!r}: {exc}") from None
    except json.JSONDecodeError as exc:
        raise StateFormatError(f"state file {source!r} is not valid JSON: {exc}") from None
    return state_from_json(doc)


# ---------------------------------------------------------------------------
# random generation helpers (seeded corpora for tests and verification)
# ---------------------------------------------------------------------------

def random_pure_state(dims, rng: np.random.Generator) -> PureState:
    """Haar-random pure state on the given dims."""
    dims = _check_dims(dims)
    d = int(np.prod(dims))
    z = rng.standard_normal(d) + 1j * rng.standard_normal(d)
    return PureState(dims, z)


def random_density_operator(dims, rank: int, rng: np.random.Generator) -> DensityOperator:
    """Random rank-``rank`` mixed state (Wishart construction)."""
    dims = _check_dims(dims)
    d = int(np.prod(dims))
    rank = int(rank)
    if not 1 <= rank <= d:
        raise DimensionError(f"rank must lie in 1..{d}, got {rank}")
    g = rng.standard_normal((d, rank)) + 1j * rng.standard_normal((d, rank))
    m = g @ g.conj().T
    return DensityOperator(dims, m / np.trace(m).real)


def random_unitary(d: int, rng: np.random.Generator) -> np.ndarray:
    """Haar-random unitary via phase-fixed QR."""
    z = rng.standard_normal((d, d)) + 1j * rng.standard_normal((d, d))
    q, r = np.linalg.qr(z)
    ph = np.diagonal(r).copy()
    ph /= np.abs(ph)
    return q * ph


def apply_local_unitaries(state, unitaries):
    """Apply one unitary per subsystem to a pure or mixed state."""
    us = list(unitaries)
    dims = state.dims
    if len(us) != len(dims):
        raise DimensionError(
            f"need one unitary per subsystem ({len(dims)}), got {len(us)}"
        )
    full = us[0]
    for u in us[1:]:
        full = np.kron(full, u)
    if isinstance(state, PureState):
        return PureState(dims, full @ state.amps)
    if isinstance(state, DensityOperator):
        return DensityOperator(dims, full @ state.mat @ full.conj().T)
    raise TypeError(f"not a state object: {type(state).__name__}")
