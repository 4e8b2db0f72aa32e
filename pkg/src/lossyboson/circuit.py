"""Layered linear-optical circuits with per-gate loss.

A circuit is an ordered list of layers acting on M modes.  Each layer holds a
set of two-mode couplers on non-overlapping neighbouring mode pairs, a phase
per mode, and a baseline transmission for modes no coupler touches in that
layer.  Within a layer the couplers act first, then the phases.  Layers are
listed in the order photons traverse them.

A coupler on modes (k, k+1) with angles (theta, phi) mixes the pair by

    [[cos(theta),            exp(i*phi) * sin(theta)],
     [-exp(-i*phi)*sin(theta), cos(theta)           ]]

scaled by sqrt(tau), where tau is the gate's intensity transmission.  The
circuit's transfer matrix A maps input coherent amplitudes to output ones
(beta = A @ alpha) and satisfies A A^dagger <= I.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field

import numpy as np

from . import numerics
from .errors import DegenerateCircuitError, ModelViolationError
from .rng import RandomStream

__all__ = [
    "CouplerGate",
    "Layer",
    "LayeredCircuit",
    "LossDecomposition",
    "NonuniformFactorization",
    "PlanParameters",
    "AlgebraicThreshold",
    "SimulationPlan",
    "transfer_matrix",
    "decompose_losses",
    "factor_nonuniform",
    "random_brickwork",
    "simulability_condition",
    "thermalization_depth",
    "depth_threshold_exponential",
    "depth_threshold_algebraic",
    "plan",
    "circuit_to_json",
    "circuit_from_json",
    "save_circuit",
    "load_circuit",
]

SINGULAR_CLIP_TOLERANCE = 1e-9


@dataclass(frozen=True)
class CouplerGate:
    """Two-mode coupler on neighbouring modes (mode, mode+1)."""

    mode: int
    theta: float
    phi: float = 0.0
    tau: float = 1.0

    def __post_init__(self):
        if self.mode < 0:
            raise ValueError(f"gate mode must be >= 0, got {self.mode}")
        if self.tau > 1.0:
            raise ModelViolationError(
                f"gate transmission {self.tau} > 1 would amplify; the model is passive"
            )
        if self.tau < 0.0:
            raise ValueError(f"gate transmission must lie in [0, 1], got {self.tau}")

    @property
    def block(self) -> np.ndarray:
        """Lossless 2x2 unitary block of the coupler."""
        c, s = math.cos(self.theta), math.sin(self.theta)
        e = np.exp(1j * self.phi)
        return np.array([[c, e * s], [-np.conj(e) * s, c]], dtype=complex)


@dataclass(frozen=True)
class Layer:
    """One circuit layer: disjoint couplers, then per-mode phases.

    ``idle_tau`` is the intensity transmission seen by modes not covered by
    any coupler in this layer (waveguide propagation loss); it defaults to a
    lossless 1.0.
    """

    couplers: tuple[CouplerGate, ...]
    phases: tuple[float, ...]
    idle_tau: float = 1.0

    def __post_init__(self):
        object.__setattr__(self, "couplers", tuple(self.couplers))
        object.__setattr__(self, "phases", tuple(float(p) for p in self.phases))
        if self.idle_tau > 1.0:
            raise ModelViolationError(
                f"idle transmission {self.idle_tau} > 1 would amplify; the model is passive"
            )
        if self.idle_tau < 0.0:
            raise ValueError(f"idle transmission must lie in [0, 1], got {self.idle_tau}")
        seen: set[int] = set()
        for g in self.couplers:
            pair = {g.mode, g.mode + 1}
            if seen & pair:
                raise ValueError(f"overlapping couplers in layer at mode {g.mode}")
            seen |= pair

    def covered_modes(self) -> set[int]:
        out: set[int] = set()
        for g in self.couplers:
            out |= {g.mode, g.mode + 1}
        return out


@dataclass(frozen=True)
class LayeredCircuit:
    modes: int
    layers: tuple[Layer, ...]

    def __post_init__(self):
        object.__setattr__(self, "layers", tuple(self.layers))
        if self.modes < 1:
            raise ValueError("circuit needs at least one mode")
        for layer in self.layers:
            if len(layer.phases) != self.modes:
                raise ValueError(
                    f"layer has {len(layer.phases)} phases for {self.modes} modes"
                )
            for g in layer.couplers:
                if g.mode + 1 >= self.modes:
                    raise ValueError(
                        f"coupler at mode {g.mode} does not fit in {self.modes} modes"
                    )

    @property
    def depth(self) -> int:
        return len(self.layers)

    def is_lossless(self) -> bool:
        return all(
            l.idle_tau == 1.0 and all(g.tau == 1.0 for g in l.couplers)
            for l in self.layers
        )

    def lossless_copy(self) -> "LayeredCircuit":
        """Same interference pattern with every transmission set to 1."""
        layers = tuple(
            Layer(
                couplers=tuple(
                    CouplerGate(g.mode, g.theta, g.phi, 1.0) for g in l.couplers
                ),
                phases=l.phases,
                idle_tau=1.0,
            )
            for l in self.layers
        )
        return LayeredCircuit(self.modes, layers)

    def uniform_tau(self) -> float:
        """The common transmission if every gate and idle path shares one, else error."""
        taus = {l.idle_tau for l in self.layers}
        taus |= {g.tau for l in self.layers for g in l.couplers}
        if not taus:
            return 1.0
        if len(taus) > 1:
            raise ValueError(f"circuit transmissions are not uniform: {sorted(taus)}")
        return taus.pop()


def _layer_matrix(layer: Layer, modes: int) -> np.ndarray:
    mat = np.zeros((modes, modes), dtype=complex)
    covered = layer.covered_modes()
    for g in layer.couplers:
        k = g.mode
        mat[k : k + 2, k : k + 2] = math.sqrt(g.tau) * g.block
    root_idle = math.sqrt(layer.idle_tau)
    for i in range(modes):
        if i not in covered:
            mat[i, i] = root_idle
    # phases act after the couplers: multiply rows
    mat *= np.exp(1j * np.asarray(layer.phases))[:, None]
    return mat


def transfer_matrix(circuit: LayeredCircuit) -> np.ndarray:
    """Overall transfer matrix mapping input to output amplitudes.

    Layers are composed in traversal order, so with layers [L1, ..., LD] the
    result is M(LD) @ ... @ M(L1).
    """
    a = np.eye(circuit.modes, dtype=complex)
    for layer in circuit.layers:
        a = _layer_matrix(layer, circuit.modes) @ a
    return a


@dataclass(frozen=True)
class LossDecomposition:
    """a = v @ diag(sqrt(transmissions)) @ w with v, w unitary."""

    v: np.ndarray
    transmissions: np.ndarray
    w: np.ndarray

    def reconstruct(self) -> np.ndarray:
        return (self.v * np.sqrt(self.transmissions)) @ self.w


def decompose_losses(a: np.ndarray) -> LossDecomposition:
    """Split a transfer matrix into interferometer / loss / interferometer.

    Raises
    ------
    ModelViolationError
        If any singular value exceeds 1 + 1e-9 (the matrix amplifies).
        Singular values in (1, 1 + 1e-9] are treated as rounding dirt and
        clipped to exactly 1.
    """
    a = np.asarray(a, dtype=complex)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise ValueError(f"transfer matrix must be square, got shape {a.shape}")
    system = numerics.svd(a)
    s = system.singulars.copy()
    if np.any(s > 1.0 + SINGULAR_CLIP_TOLERANCE):
        raise ModelViolationError(
            f"singular value {s.max():.12g} exceeds 1: not a passive circuit"
        )
    np.clip(s, None, 1.0, out=s)
    return LossDecomposition(v=system.left, transmissions=s * s, w=system.right)


@dataclass(frozen=True)
class NonuniformFactorization:
    """Uniform loss floor pulled out of a non-uniform decomposition."""

    mu_max: float
    residual: LossDecomposition


def factor_nonuniform(dec: LossDecomposition) -> NonuniformFactorization:
    """Factor out the largest transmission as a uniform input-side loss.

    The residual decomposition has transmissions mu_i / mu_max, so its
    largest residual transmission is exactly 1 and the original matrix is
    recovered as residual @ (sqrt(mu_max) * I).
    """
    mu = np.asarray(dec.transmissions, dtype=float)
    mu_max = float(mu.max()) if mu.size else 0.0
    if mu_max <= 0.0:
        raise DegenerateCircuitError("all transmissions are zero; nothing to factor")
    residual = LossDecomposition(v=dec.v, transmissions=mu / mu_max, w=dec.w)
    return NonuniformFactorization(mu_max=mu_max, residual=residual)


def _bs_params_from_block(u: np.ndarray) -> tuple[float, float, float, float]:
    """Exact decomposition u = diag(e^{ia}, e^{ib}) @ coupler(theta, phi).

    Returns (theta, phi, a, b).  Valid for any 2x2 unitary; the phases a, b
    belong in the layer's phase vector (phases act after couplers).
    """
    theta = math.atan2(abs(u[0, 1]), abs(u[0, 0]))
    if abs(u[0, 0]) > 1e-12:
        a = math.atan2(u[0, 0].imag, u[0, 0].real)
        phi = math.atan2(u[0, 1].imag, u[0, 1].real) - a if abs(u[0, 1]) > 1e-12 else 0.0
        b = math.atan2(u[1, 1].imag, u[1, 1].real) if abs(u[1, 1]) > 1e-12 else (
            math.atan2((-u[1, 0]).imag, (-u[1, 0]).real) + phi
        )
    else:
        # fully crossing coupler: cos(theta) = 0, diagonal phases are free
        a = 0.0
        phi = math.atan2(u[0, 1].imag, u[0, 1].real)
        b = math.atan2((-u[1, 0]).imag, (-u[1, 0]).real) + phi
    return theta, phi, a, b


def random_brickwork(
    modes: int, depth: int, tau: float, rng: RandomStream
) -> LayeredCircuit:
    """Brick-pattern circuit of Haar-random couplers with uniform loss.

    Odd layers start at mode 0, even layers at mode 1.  Every gate carries
    intensity transmission ``tau`` and so does idle propagation, hence each
    mode sees sqrt(tau) in amplitude per layer and the total per-mode
    transmission is tau**depth.
    """
    if modes < 1:
        raise ValueError("need at least one mode")
    if depth < 0:
        raise ValueError("depth must be >= 0")
    if not 0.0 <= tau <= 1.0:
        raise ValueError(f"transmission must lie in [0, 1], got {tau}")
    layers = []
    for l in range(depth):
        offset = l % 2
        phases = [0.0] * modes
        gates = []
        for k in range(offset, modes - 1, 2):
            u = numerics.haar_unitary(2, rng)
            theta, phi, pa, pb = _bs_params_from_block(u)
            gates.append(CouplerGate(mode=k, theta=theta, phi=phi, tau=tau))
            phases[k] += pa
            phases[k + 1] += pb
        layers.append(Layer(couplers=tuple(gates), phases=tuple(phases), idle_tau=tau))
    return LayeredCircuit(modes=modes, layers=tuple(layers))


# ---------------------------------------------------------------------------
# simulability thresholds
# ---------------------------------------------------------------------------


def simulability_condition(mu: float, n: int, eps: float) -> bool:
    """True when uniform transmission mu admits the thermal replacement.

    The N-photon output distribution is within total-variation eps of the
    thermal surrogate whenever mu <= sqrt(eps / n).
    """
    if not 0.0 <= mu <= 1.0:
        raise ValueError(f"transmission must lie in [0, 1], got {mu}")
    if n < 1:
        raise ValueError("photon number must be >= 1")
    if eps <= 0:
        raise ValueError("error budget must be positive")
    return mu <= math.sqrt(eps / n)


def thermalization_depth(n: int, eps: float, x: float) -> float:
    """Depth at which per-layer loss x makes N photons thermally simulable.

    Solves tau**D = (1-x)**D <= sqrt(eps/N) for D.  Returns infinity when
    x == 0 (a lossless circuit never thermalizes).
    """
    if n < 1:
        raise ValueError("photon number must be >= 1")
    if eps <= 0:
        raise ValueError("error budget must be positive")
    if not 0.0 <= x < 1.0:
        raise ValueError(f"per-layer loss must lie in [0, 1), got {x}")
    if x == 0.0:
        return math.inf
    return max(0.0, math.log(n / eps) / (2.0 * math.log(1.0 / (1.0 - x))))


def depth_threshold_exponential(
    modes: int, gamma: float, k: float, eps: float, tau: float
) -> float:
    """Simulability depth for photon density N = k * M**gamma, loss tau per layer.

    D* = [gamma*log(M) + log(k/eps) + log(2)] / (2*log(1/tau)); beyond this
    depth the thermal algorithm is accurate to eps.  Infinite when tau == 1.
    """
    if modes < 1:
        raise ValueError("mode count must be >= 1")
    if not 0.0 < gamma <= 1.0:
        raise ValueError(f"density exponent must lie in (0, 1], got {gamma}")
    if k <= 0 or eps <= 0:
        raise ValueError("density coefficient and error budget must be positive")
    if not 0.0 < tau <= 1.0:
        raise ValueError(f"transmission must lie in (0, 1], got {tau}")
    if tau == 1.0:
        return math.inf
    num = gamma * math.log(modes) + math.log(k / eps) + math.log(2.0)
    return max(0.0, num / (2.0 * math.log(1.0 / tau)))


@dataclass(frozen=True)
class AlgebraicThreshold:
    """Depth threshold for algebraically decaying loss tau(D) = (d_len/(d_len+D))**beta."""

    depth: float
    gamma_beta_ratio: float

    @property
    def efficient(self) -> bool:
        """Whether the threshold grows slower than sqrt(M), i.e. gamma/beta < 2."""
        return self.gamma_beta_ratio < 2.0


def depth_threshold_algebraic(
    d_len: float, beta: float, k: float, eps: float, gamma: float, modes: int
) -> AlgebraicThreshold:
    """Simulability depth when transmission decays algebraically with depth.

    D* = d_len * [ (2k/eps)**(1/(2 beta)) * M**(gamma/(2 beta)) - 1 ].  The
    report includes gamma/beta; the simulation stays polynomially bounded
    when that ratio is below 2.
    """
    if d_len <= 0 or beta <= 0:
        raise ValueError("decay length and exponent must be positive")
    if k <= 0 or eps <= 0:
        raise ValueError("density coefficient and error budget must be positive")
    if not 0.0 < gamma <= 1.0:
        raise ValueError(f"density exponent must lie in (0, 1], got {gamma}")
    if modes < 1:
        raise ValueError("mode count must be >= 1")
    depth = d_len * (
        (2.0 * k / eps) ** (1.0 / (2.0 * beta)) * modes ** (gamma / (2.0 * beta)) - 1.0
    )
    return AlgebraicThreshold(depth=max(0.0, depth), gamma_beta_ratio=gamma / beta)


# ---------------------------------------------------------------------------
# planning
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class PlanParameters:
    """Inputs the regime decision needs.

    ``photons`` may be omitted, in which case it is derived from the density
    law N = round(k * M**gamma).
    """

    modes: int
    depth: int
    tau: float
    eps: float
    density_k: float = 1.0
    density_gamma: float = 1.0
    photons: int | None = None

    def __post_init__(self):
        if self.modes < 1:
            raise ValueError("mode count must be >= 1")
        if self.depth < 0:
            raise ValueError("depth must be >= 0")
        if not 0.0 < self.tau <= 1.0:
            raise ValueError(f"transmission must lie in (0, 1], got {self.tau}")
        if self.eps <= 0:
            raise ValueError("error budget must be positive")
        if self.density_k <= 0:
            raise ValueError("density coefficient must be positive")
        if not 0.0 < self.density_gamma <= 1.0:
            raise ValueError("density exponent must lie in (0, 1]")
        if self.photons is None:
            derived = round(self.density_k * self.modes ** self.density_gamma)
            object.__setattr__(self, "photons", max(1, int(derived)))
        elif self.photons < 1:
            raise ValueError("photon number must be >= 1")


@dataclass(frozen=True)
class SimulationPlan:
    regime: str  # "thermal" or "mps"
    mu_effective: float
    depth: int
    depth_threshold: float
    thermal_valid: bool
    rationale: str


def plan(params: PlanParameters) -> SimulationPlan:
    """Choose the simulation regime for a uniform-loss circuit.

    Thermal sampling is selected when the circuit depth reaches the
    exponential-loss threshold (boundary inclusive); shallower circuits go to
    exact tensor-network evolution.  ``thermal_valid`` records whether the
    effective transmission also satisfies the conservative per-photon bound
    mu <= sqrt(eps / (2N)) that backs the thermal replacement end to end.
    """
    d_star = depth_threshold_exponential(
        params.modes, params.density_gamma, params.density_k, params.eps, params.tau
    )
    mu_eff = params.tau ** params.depth
    n = int(params.photons)
    thermal_valid = mu_eff <= math.sqrt(params.eps / (2.0 * n))
    if params.depth >= d_star:
        regime = "thermal"
        rationale = (
            f"depth {params.depth} >= threshold {d_star:.6g}: effective transmission "
            f"{mu_eff:.6g} is small enough that each surviving photon is "
            f"indistinguishable (within budget {params.eps}) from thermal noise; "
            f"per-photon bound mu <= sqrt(eps/2N) "
            f"{'holds' if thermal_valid else 'needs the aggregate depth argument'}"
        )
    elif math.isinf(d_star):
        regime = "mps"
        rationale = (
            "lossless circuit (tau = 1): thermal regime unreachable at any "
            "depth; exact tensor-network evolution applies"
        )
    else:
        regime = "mps"
        rationale = (
            f"depth {params.depth} < threshold {d_star:.6g}: too little loss to "
            f"thermalize, but the circuit is shallow enough for exact "
            f"tensor-network evolution with bond dimension <= (N+1)^(2*depth)"
        )
    return SimulationPlan(
        regime=regime,
        mu_effective=mu_eff,
        depth=params.depth,
        depth_threshold=d_star,
        thermal_valid=thermal_valid,
        rationale=rationale,
    )


# ---------------------------------------------------------------------------
# JSON interchange
# ---------------------------------------------------------------------------


def circuit_to_json(circuit: LayeredCircuit) -> str:
    """Serialize a circuit; floats round-trip bit-exactly through json."""
    layers = []
    for layer in circuit.layers:
        entry: dict = {
            "phases": list(layer.phases),
            "couplers": [
                {"mode": g.mode, "theta": g.theta, "phi": g.phi, "tau": g.tau}
                for g in layer.couplers
            ],
        }
        if layer.idle_tau != 1.0:
            entry["idle_tau"] = layer.idle_tau
        layers.append(entry)
    return json.dumps({"modes": circuit.modes, "layers": layers}, indent=2)


def circuit_from_json(text: str) -> LayeredCircuit:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ValueError(f"circuit file is not valid JSON: {exc}") from exc
    if not isinstance(doc, dict) or "modes" not in doc or "layers" not in doc:
        raise ValueError('circuit JSON must be an object with "modes" and "layers"')
    modes = doc["modes"]
    if not isinstance(modes, int) or modes < 1:
        raise ValueError(f'"modes" must be a positive integer, got {modes!r}')
    layers = []
    for idx, entry in enumerate(doc["layers"]):
        if not isinstance(entry, dict) or "phases" not in entry or "couplers" not in entry:
            raise ValueError(f'layer {idx} must be an object with "phases" and "couplers"')
        gates = []
        for g in entry["couplers"]:
            try:
                gates.append(
                    CouplerGate(
                        mode=int(g["mode"]),
                        theta=float(g["theta"]),
                        phi=float(g.get("phi", 0.0)),
                        tau=float(g.get("tau", 1.0)),
                    )
                )
            except (KeyError, TypeError) as exc:
                raise ValueError(f"bad coupler in layer {idx}: {g!r}") from exc
        layers.append(
            Layer(
                couplers=tuple(gates),
                phases=tuple(float(p) for p in entry["phases"]),
                idle_tau=float(entry.get("idle_tau", 1.0)),
            )
        )
    return LayeredCircuit(modes=modes, layers=tuple(layers))


def save_circuit(circuit: LayeredCircuit, path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(circuit_to_json(circuit))
        fh.write("\n")


def load_circuit(path) -> LayeredCircuit:
    with open(path, "r", encoding="utf-8") as fh:
        return circuit_from_json(fh.read())
