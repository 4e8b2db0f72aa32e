"""Exact matrix-product-state evolution for shallow interferometers.

The state of M modes with at most d photons per mode is held in canonical
(Schmidt) form: per-site tensors Gamma[i] of shape (d+1, chi_left, chi_right)
and per-bond Schmidt vectors lambda[i], so the amplitude of a count pattern
(n_0, ..., n_{M-1}) is the matrix product

    Gamma[0][n_0] @ diag(lambda[0]) @ Gamma[1][n_1] @ ... @ Gamma[M-1][n_{M-1}].

Gates never truncate: couplers are applied through an exact MPO split of the
two-mode Fock-space unitary, the touched bond is re-orthogonalized with one
SVD, and only singular values below 1e-12 of the largest (exact zeros up to
rounding) are dropped.  With local dimension d+1 covering the total photon
number, the simulation is exact and the bond dimension is bounded by
(d+1)^(2*depth).

Losses are handled upstream: a uniform-transmission circuit is simulated by
Bernoulli-thinning the input pattern (keep probability tau**depth) and
evolving the surviving photons through the lossless blocks.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .circuit import LayeredCircuit
from .errors import CapacityError, ResampleSignal
from .rng import RandomStream

__all__ = [
    "FockSample",
    "MPSState",
    "CouplerMPO",
    "ZERO_CUTOFF",
    "DEFAULT_MAX_BOND",
    "init_input",
    "coupler_fock_amplitudes",
    "coupler_mpo",
    "apply_phase",
    "apply_coupler",
    "outcome_probability",
    "state_norm",
    "canonical_defect",
    "canonicalize",
    "sample",
    "lossy_input_sample",
    "simulate_circuit",
]

FockSample = tuple  # photon counts per mode

# Relative threshold below which a Schmidt/singular value is an exact zero
# contaminated by rounding, never a physical weight.
ZERO_CUTOFF = 1e-12

DEFAULT_MAX_BOND = 4096


@dataclass
class MPSState:
    """Canonical-form MPS over ``modes`` sites with local dimension ``local_dim``."""

    modes: int
    local_dim: int
    gammas: list
    schmidts: list
    peak_bond: int = 1

    @property
    def bond_dims(self) -> tuple:
        return tuple(len(s) for s in self.schmidts)

    def copy_shallow(self) -> "MPSState":
        return MPSState(
            modes=self.modes,
            local_dim=self.local_dim,
            gammas=list(self.gammas),
            schmidts=list(self.schmidts),
            peak_bond=self.peak_bond,
        )


def init_input(pattern, d: int) -> MPSState:
    """Product Fock state |pattern> as an MPS with local dimension d+1."""
    if d < 1:
        raise ValueError(f"local photon cutoff must be >= 1, got {d}")
    pattern = [int(n) for n in pattern]
    if not pattern:
        raise ValueError("input pattern must cover at least one mode")
    if any(n < 0 for n in pattern):
        raise ValueError("photon counts must be non-negative")
    if max(pattern) > d:
        raise ValueError(f"pattern entry {max(pattern)} exceeds cutoff d={d}")
    q = d + 1
    gammas = []
    for n in pattern:
        g = np.zeros((q, 1, 1), dtype=complex)
        g[n, 0, 0] = 1.0
        gammas.append(g)
    schmidts = [np.ones(1) for _ in range(len(pattern) - 1)]
    return MPSState(
        modes=len(pattern), local_dim=q, gammas=gammas, schmidts=schmidts, peak_bond=1
    )


def coupler_fock_amplitudes(block: np.ndarray, d: int) -> np.ndarray:
    """Fock-space matrix elements of a two-mode coupler up to d photons per mode.

    Returns c[p, s, n0, n1] = <p, s| B |n0, n1> for the unitary B whose action
    on creation operators is a0+ -> u00 a0+ + u10 a1+, a1+ -> u01 a0+ + u11 a1+
    (columns of ``block`` are inputs).  Amplitudes follow from the binomial
    expansion of the transformed creation-operator powers; factorials are
    assembled in log space so the result stays finite up to d ~ 30.

    On every total-photon sector with n0 + n1 <= d the matrix is exactly
    unitary; sectors above d lose the amplitudes that would overflow the
    cutoff, which is why exact simulation requires d >= total photons.
    """
    block = np.asarray(block, dtype=complex)
    if block.shape != (2, 2):
        raise ValueError(f"coupler block must be 2x2, got {block.shape}")
    if d < 1:
        raise ValueError(f"local photon cutoff must be >= 1, got {d}")
    u00, u01 = block[0]
    u10, u11 = block[1]
    q = d + 1
    lg = [math.lgamma(k + 1) for k in range(q)]  # log k!
    c = np.zeros((q, q, q, q), dtype=complex)
    for n0 in range(q):
        for n1 in range(q):
            total = n0 + n1
            for p in range(max(0, total - d), min(total, d) + 1):
                s = total - p
                amp = 0.0 + 0.0j
                for j in range(max(0, p - n1), min(n0, p) + 1):
                    log_mag = (
                        0.5 * (lg[p] + lg[s] - lg[n0] - lg[n1])
                        + lg[n0] - lg[j] - lg[n0 - j]
                        + lg[n1] - lg[p - j] - lg[n1 - p + j]
                    )
                    amp += (
                        math.exp(log_mag)
                        * u00**j
                        * u10 ** (n0 - j)
                        * u01 ** (p - j)
                        * u11 ** (n1 - p + j)
                    )
                c[p, s, n0, n1] = amp
    return c


@dataclass(frozen=True)
class CouplerMPO:
    """Two-site operator split: c[p,s,n,m] = sum_g x_left[p,n,g] sigmas[g] x_right[s,m,g]."""

    x_left: np.ndarray
    sigmas: np.ndarray
    x_right: np.ndarray

    @property
    def rank(self) -> int:
        return len(self.sigmas)

    def recombine(self) -> np.ndarray:
        return np.einsum("png,g,smg->psnm", self.x_left, self.sigmas, self.x_right)


def coupler_mpo(block: np.ndarray, d: int) -> CouplerMPO:
    """SVD split of a coupler's Fock tensor between its two sites.

    The split groups (out, in) indices per site; the rank is at most
    (d+1)^2, so applying the operator multiplies a bond dimension by at most
    that factor.
    """
    c = coupler_fock_amplitudes(block, d)
    q = c.shape[0]
    mat = c.transpose(0, 2, 1, 3).reshape(q * q, q * q)  # rows (p, n0), cols (s, n1)
    u, sig, vh = np.linalg.svd(mat, full_matrices=False)
    keep = sig >= ZERO_CUTOFF * sig[0] if sig[0] > 0 else slice(0, 1)
    u, sig, vh = u[:, keep], sig[keep], vh[keep]
    x_left = u.reshape(q, q, -1)
    x_right = vh.T.reshape(q, q, -1)
    return CouplerMPO(x_left=x_left, sigmas=sig, x_right=x_right)


def apply_phase(state: MPSState, mode: int, theta: float) -> MPSState:
    """Phase rotation exp(i * theta * n) on one mode; bond structure untouched."""
    if not 0 <= mode < state.modes:
        raise ValueError(f"mode {mode} out of range for {state.modes} modes")
    factor = np.exp(1j * theta * np.arange(state.local_dim))
    out = state.copy_shallow()
    out.gammas[mode] = state.gammas[mode] * factor[:, None, None]
    return out


def _left_weights(state: MPSState, site: int) -> np.ndarray:
    return state.schmidts[site - 1] if site > 0 else np.ones(1)


def _right_weights(state: MPSState, site: int) -> np.ndarray:
    return state.schmidts[site] if site < state.modes - 1 else np.ones(1)


def apply_coupler(
    state: MPSState, mode: int, mpo: CouplerMPO, max_bond: int | None = DEFAULT_MAX_BOND
) -> MPSState:
    """Apply a two-mode coupler on (mode, mode+1) and re-orthogonalize the bond.

    The MPO halves are contracted into the site tensors, growing the touched
    bond by the MPO rank; one SVD of the two-site block (with the neighbour
    Schmidt weights folded in) restores canonical form on that bond.  Singular
    values below 1e-12 of the largest are dropped as exact zeros; the Schmidt
    vector is stored as returned by the SVD, so the state norm is preserved to
    rounding and can be asserted by callers.

    New site tensors are extracted without dividing by the neighbour Schmidt
    weights (only by the kept new singular values), which keeps the update
    stable when neighbouring bonds carry small weights.
    """
    k = mode
    if not 0 <= k < state.modes - 1:
        raise ValueError(f"coupler site {k} out of range for {state.modes} modes")
    q = state.local_dim
    if mpo.x_left.shape[0] != q:
        raise ValueError(
            f"MPO local dimension {mpo.x_left.shape[0]} does not match state {q}"
        )
    a, b = state.gammas[k], state.gammas[k + 1]
    lam_l = _left_weights(state, k)
    lam_m = state.schmidts[k]
    lam_r = _right_weights(state, k + 1)
    c_l, c_r = a.shape[1], b.shape[2]

    # contract MPO halves; merged bond index is (old bond, mpo rank)
    at = np.einsum("png,nab->pabg", mpo.x_left, a).reshape(q, c_l, -1)
    bt = np.einsum("smg,mbc->sbgc", mpo.x_right, b).reshape(q, -1, c_r)
    lam_mid = np.outer(lam_m, mpo.sigmas).ravel()
    core = np.einsum("paj,j,sjc->pasc", at, lam_mid, bt)

    full = (core * lam_l[None, :, None, None] * lam_r[None, None, None, :]).transpose(
        1, 0, 2, 3
    ).reshape(c_l * q, q * c_r)
    u, sv, vh = np.linalg.svd(full, full_matrices=False)
    keep = sv >= ZERO_CUTOFF * sv[0] if sv[0] > 0 else np.arange(len(sv)) < 1
    u, sv, vh = u[:, keep], sv[keep], vh[keep]
    chi_new = len(sv)
    if max_bond is not None and chi_new > max_bond:
        raise CapacityError(
            f"bond dimension {chi_new} exceeds the configured maximum {max_bond}"
        )

    no_left = (core * lam_r[None, None, None, :]).transpose(1, 0, 2, 3).reshape(
        c_l * q, q * c_r
    )
    no_right = (core * lam_l[None, :, None, None]).transpose(1, 0, 2, 3).reshape(
        c_l * q, q * c_r
    )
    g_left = ((no_left @ vh.conj().T) / sv).reshape(c_l, q, chi_new).transpose(1, 0, 2)
    g_right = (
        ((u.conj().T @ no_right) / sv[:, None]).reshape(chi_new, q, c_r).transpose(1, 0, 2)
    )

    out = state.copy_shallow()
    out.gammas[k] = g_left
    out.gammas[k + 1] = g_right
    out.schmidts[k] = sv
    out.peak_bond = max(out.peak_bond, chi_new)
    return out


def outcome_probability(state: MPSState, pattern) -> float:
    """Probability of measuring the photon-count pattern."""
    pattern = [int(n) for n in pattern]
    if len(pattern) != state.modes:
        raise ValueError(f"pattern covers {len(pattern)} modes, state has {state.modes}")
    if any(n < 0 for n in pattern):
        raise ValueError("photon counts must be non-negative")
    if max(pattern) >= state.local_dim:
        return 0.0  # beyond the cutoff nothing has support
    vec = state.gammas[0][pattern[0], 0, :]
    for i in range(1, state.modes):
        vec = (vec * state.schmidts[i - 1]) @ state.gammas[i][pattern[i]]
    amp = vec[0]
    return float(abs(amp) ** 2)


def state_norm(state: MPSState) -> float:
    """<psi|psi> by direct transfer-matrix contraction (no canonicity assumed)."""
    rho = np.ones((1, 1), dtype=complex)
    for i in range(state.modes):
        g = state.gammas[i]
        if i < state.modes - 1:
            g = g * state.schmidts[i][None, None, :]
        rho = np.einsum("ab,nac,nbd->cd", rho, g.conj(), g)
    return float(rho[0, 0].real)


def canonical_defect(state: MPSState) -> float:
    """Largest deviation of the canonical-form isometry conditions from identity."""
    worst = 0.0
    for i in range(state.modes):
        g = state.gammas[i]
        right = g * _right_weights(state, i)[None, None, :]
        gram = np.einsum("nac,nbc->ab", right, right.conj())
        worst = max(worst, float(np.abs(gram - np.eye(gram.shape[0])).max()))
        left = g * _left_weights(state, i)[None, :, None]
        gram = np.einsum("nac,nad->cd", left.conj(), left)
        worst = max(worst, float(np.abs(gram - np.eye(gram.shape[0])).max()))
    return worst


def canonicalize(state: MPSState) -> MPSState:
    """Full two-sweep re-orthogonalization into exact canonical form.

    A left-to-right QR sweep makes the chain left-orthonormal and isolates
    the norm; a right-to-left SVD sweep then extracts the Schmidt vectors.
    The result is normalized.
    """
    m, q = state.modes, state.local_dim
    raw = []
    for i in range(m):
        g = state.gammas[i]
        if i < m - 1:
            g = g * state.schmidts[i][None, None, :]
        raw.append(g.astype(complex))

    for i in range(m - 1):
        g = raw[i]
        cl, cr = g.shape[1], g.shape[2]
        mat = g.transpose(1, 0, 2).reshape(cl * q, cr)
        qmat, rmat = np.linalg.qr(mat)
        rk = qmat.shape[1]
        raw[i] = qmat.reshape(cl, q, rk).transpose(1, 0, 2)
        raw[i + 1] = np.einsum("rb,nbc->nrc", rmat, raw[i + 1])

    norm = np.linalg.norm(raw[m - 1])
    if norm == 0.0:
        raise ValueError("cannot canonicalize the zero state")
    raw[m - 1] = raw[m - 1] / norm

    schmidts: list = [None] * (m - 1)
    for i in range(m - 1, 0, -1):
        g = raw[i]
        cl, cr = g.shape[1], g.shape[2]
        mat = g.transpose(1, 0, 2).reshape(cl, q * cr)
        u, sv, vh = np.linalg.svd(mat, full_matrices=False)
        keep = sv >= ZERO_CUTOFF * sv[0] if sv[0] > 0 else np.arange(len(sv)) < 1
        u, sv, vh = u[:, keep], sv[keep], vh[keep]
        raw[i] = vh.reshape(-1, q, cr).transpose(1, 0, 2)
        schmidts[i - 1] = sv / np.linalg.norm(sv)
        raw[i - 1] = np.einsum("nab,br->nar", raw[i - 1], u * sv[None, :])

    # raw[i] now holds B-form tensors (Gamma with the right Schmidt vector
    # absorbed); divide it back out, entries below the zero cutoff never occur
    gammas = []
    for i in range(m):
        if i < m - 1:
            gammas.append(raw[i] / schmidts[i][None, None, :])
        else:
            gammas.append(raw[i])
    return MPSState(
        modes=m,
        local_dim=q,
        gammas=gammas,
        schmidts=schmidts,
        peak_bond=max(state.peak_bond, max((len(s) for s in schmidts), default=1)),
    )


def sample(state: MPSState, rng: RandomStream) -> FockSample:
    """Draw one photon-count pattern by the chain rule over modes.

    Requires canonical form (run ``canonicalize`` once before drawing);
    the conditional for each mode then only involves the prefix contraction.
    """
    q = state.local_dim
    prefix = None  # row vector over the current bond, unnormalized
    counts = []
    weight = 1.0
    for i in range(state.modes):
        g = state.gammas[i]
        if i == 0:
            vecs = (g * _right_weights(state, 0)[None, None, :])[:, 0, :]
        else:
            t = g * _right_weights(state, i)[None, None, :]
            vecs = np.einsum("a,nab->nb", prefix, t)
        probs = np.einsum("nb,nb->n", vecs, vecs.conj()).real
        probs = np.clip(probs, 0.0, None)
        total = probs.sum()
        if total < 1e-300:
            raise ResampleSignal("prefix probability underflow; redraw this sample")
        n = int(rng.choice(q, p=probs / total))
        counts.append(n)
        prefix = vecs[n]
        weight = float(probs[n] / total) * weight
        if weight < 1e-300:
            raise ResampleSignal("prefix probability underflow; redraw this sample")
        # renormalize the carried vector to keep magnitudes O(1)
        prefix = prefix / np.linalg.norm(prefix)
    return tuple(counts)


def lossy_input_sample(n: int, mu: float, rng: RandomStream) -> np.ndarray:
    """Thin n single photons: each survives independently with probability mu."""
    if n < 0:
        raise ValueError("photon count must be >= 0")
    if not 0.0 <= mu <= 1.0:
        raise ValueError(f"keep probability must lie in [0, 1], got {mu}")
    return (rng.random(n) < mu).astype(int)


def simulate_circuit(
    circuit: LayeredCircuit,
    pattern,
    d: int | None = None,
    max_bond: int | None = DEFAULT_MAX_BOND,
) -> MPSState:
    """Evolve |pattern> through a lossless circuit, layer by layer.

    ``d`` is the per-mode photon cutoff and defaults to the total photon
    number, which makes the evolution exact.  Loss must be handled upstream
    (thin the input with ``lossy_input_sample`` and pass the lossless
    blocks, e.g. ``circuit.lossless_copy()``).

    Raises
    ------
    ValueError
        If the circuit still carries loss.
    CapacityError
        If a bond would exceed ``max_bond``.
    """
    if not circuit.is_lossless():
        raise ValueError(
            "simulate_circuit needs lossless blocks; thin the input by tau**depth "
            "and pass circuit.lossless_copy()"
        )
    pattern = [int(x) for x in pattern]
    if len(pattern) != circuit.modes:
        raise ValueError(
            f"pattern covers {len(pattern)} modes, circuit has {circuit.modes}"
        )
    if d is None:
        d = max(1, sum(pattern))
    elif d < sum(pattern):
        raise ValueError(
            f"cutoff d={d} below total photon number {sum(pattern)}: evolution "
            "would not be exact"
        )
    state = init_input(pattern, d)
    for layer in circuit.layers:
        for gate in layer.couplers:
            mpo = coupler_mpo(gate.block, d)
            state = apply_coupler(state, gate.mode, mpo, max_bond=max_bond)
        for i, theta in enumerate(layer.phases):
            if theta != 0.0:
                state = apply_phase(state, i, theta)
    return state
