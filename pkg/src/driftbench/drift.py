"""Time-varying mixture of Gaussian mixtures.

A scenario is a set of classes, each a weighted mixture of Gaussian
components. Every component follows a cascade of linear similarity
transforms (translation, planar rotations, variance scaling, orbit about a
pivot, weight ramp). From that model the module evaluates priors, densities
and class posteriors at any step, samples labeled patterns and provides the
Bayes-optimal decision.

Phase timing: a phase of duration ``D`` starting at step ``s`` covers the
inclusive period ``[s, s + D]`` and interpolates with fraction
``f = (t - s) / D``; the next phase starts at ``s + D + 1``. A duration of 0
applies the whole transform at step ``s``. After the last phase a component
keeps its final parameters.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Iterator, Sequence

import numpy as np
from scipy.special import logsumexp, ndtr

from . import kernels

VARIANCE_FLOOR = 1e-12
BLOCK = 1024


class InvalidParameter(ValueError):
    pass


class DegenerateScenario(ValueError):
    pass


class NumericalDegeneracy(ArithmeticError):
    pass


Rotation = tuple[int, int, float]


def _rotation_stack(d: int, rotations: Sequence[Rotation], scale) -> np.ndarray:
    """Compose planar rotations, angles multiplied by ``scale`` (scalar or (n,)).

    Returns (n, d, d). Rotations apply in list order: R = G_k ... G_1.
    """
    scale = np.atleast_1d(np.asarray(scale, dtype=float))
    R = np.broadcast_to(np.eye(d), (scale.size, d, d)).copy()
    for a, b, deg in rotations:
        th = np.deg2rad(deg) * scale
        c, s = np.cos(th), np.sin(th)
        G = np.broadcast_to(np.eye(d), (scale.size, d, d)).copy()
        G[:, a, a] = c
        G[:, b, b] = c
        G[:, a, b] = -s
        G[:, b, a] = s
        R = G @ R
    return R


def _check_rotations(d: int, rotations: Sequence[Rotation]) -> tuple[Rotation, ...]:
    out = []
    for rot in rotations:
        if len(rot) != 3:
            raise InvalidParameter(f"rotation must be (axis_a, axis_b, degrees), got {rot!r}")
        a, b, deg = int(rot[0]), int(rot[1]), float(rot[2])
        if a == b:
            raise InvalidParameter(f"rotation repeats axis {a}")
        if not (0 <= a < d and 0 <= b < d):
            raise InvalidParameter(f"rotation axes ({a}, {b}) out of range for dimension {d}")
        out.append((a, b, deg))
    return tuple(out)


def covariance_from(stddev, rotations: Sequence[Rotation] = ()) -> np.ndarray:
    """Covariance ``R diag(stddev**2) R^T`` for planar rotations ``R``."""
    sd = np.asarray(stddev, dtype=float)
    if sd.ndim != 1 or sd.size == 0:
        raise InvalidParameter("stddev must be a non-empty vector")
    if np.any(~np.isfinite(sd)) or np.any(sd <= 0):
        raise InvalidParameter(f"stddev entries must be > 0, got {sd.tolist()}")
    rots = _check_rotations(sd.size, rotations)
    R = _rotation_stack(sd.size, rots, 1.0)[0]
    cov = R @ np.diag(sd**2) @ R.T
    return 0.5 * (cov + cov.T)


@dataclass(frozen=True, eq=False)
class GaussianParams:
    center: np.ndarray
    covariance: np.ndarray
    # construction recipe, kept so configs can be written back verbatim
    stddev: tuple[float, ...] | None = field(default=None, compare=False)
    rotation: tuple[Rotation, ...] = field(default=(), compare=False)

    @classmethod
    def from_stddev(cls, center, stddev, rotation: Sequence[Rotation] = ()) -> "GaussianParams":
        rots = _check_rotations(len(stddev), rotation)
        return cls(center, covariance_from(stddev, rots), tuple(float(s) for s in stddev), rots)

    def __post_init__(self):
        c = np.array(self.center, dtype=float)
        S = np.array(self.covariance, dtype=float)
        if c.ndim != 1 or S.shape != (c.size, c.size):
            raise InvalidParameter(
                f"center dimension {c.shape} does not match covariance {S.shape}"
            )
        if not np.allclose(S, S.T, atol=1e-9, rtol=0):
            raise InvalidParameter("covariance is not symmetric")
        if np.linalg.eigvalsh(S).min() <= 0:
            raise InvalidParameter("covariance is not positive definite")
        c.setflags(write=False)
        S.setflags(write=False)
        object.__setattr__(self, "center", c)
        object.__setattr__(self, "covariance", S)

    @property
    def dimension(self) -> int:
        return self.center.size


@dataclass(frozen=True)
class Orbit:
    """Rigid rotation of center and covariance about ``pivot`` in ``plane``."""

    pivot: tuple[float, ...]
    angle_deg: float
    plane: tuple[int, int] = (0, 1)


@dataclass(frozen=True)
class TransformPhase:
    duration: int = 0
    translation: tuple[float, ...] | None = None
    rotation: tuple[Rotation, ...] = ()
    scale: float = 1.0
    weight_target: float | None = None
    orbit: Orbit | None = None

    def __post_init__(self):
        if int(self.duration) != self.duration or self.duration < 0:
            raise InvalidParameter(f"phase duration must be an integer >= 0, got {self.duration}")
        if not self.scale > 0:
            raise InvalidParameter(f"phase scale must be > 0, got {self.scale}")
        if self.weight_target is not None and self.weight_target < 0:
            raise InvalidParameter(f"wchangeto target must be >= 0, got {self.weight_target}")
        object.__setattr__(self, "duration", int(self.duration))
        object.__setattr__(self, "rotation", tuple(tuple(r) for r in self.rotation))
        if self.translation is not None:
            object.__setattr__(self, "translation", tuple(float(v) for v in self.translation))

    @property
    def is_identity(self) -> bool:
        return (
            (self.translation is None or not any(self.translation))
            and all(r[2] == 0 for r in self.rotation)
            and self.scale == 1.0
            and self.weight_target is None
            and (self.orbit is None or self.orbit.angle_deg == 0)
        )


@dataclass(frozen=True, eq=False)
class _PhaseStart:
    step: int
    center: np.ndarray
    covariance: np.ndarray
    weight: float


def _apply_phase(phase: TransformPhase, center, cov, weight, f):
    """Vectorized phase state at fractions ``f`` (n,). Returns (c, S, w) stacks."""
    d = center.size
    f = np.asarray(f, dtype=float)
    n = f.size
    c = np.broadcast_to(center, (n, d)).copy()
    if phase.translation is not None:
        c += f[:, None] * np.asarray(phase.translation)
    S = np.broadcast_to(cov, (n, d, d)).copy()
    if phase.orbit is not None and phase.orbit.angle_deg != 0:
        a, b = phase.orbit.plane
        Ro = _rotation_stack(d, [(a, b, phase.orbit.angle_deg)], f)
        piv = np.asarray(phase.orbit.pivot, dtype=float)
        c = piv + np.einsum("nij,nj->ni", Ro, c - piv)
        S = Ro @ S @ Ro.transpose(0, 2, 1)
    if phase.rotation:
        R = _rotation_stack(d, phase.rotation, f)
        S = R @ S @ R.transpose(0, 2, 1)
    if phase.scale != 1.0:
        S = S * (1.0 + f * (phase.scale - 1.0))[:, None, None]
    S = 0.5 * (S + S.transpose(0, 2, 1))
    w = np.full(n, float(weight))
    if phase.weight_target is not None:
        w = weight + f * (phase.weight_target - weight)
    return c, S, w


@dataclass(frozen=True, eq=False)
class ComponentTimeline:
    start_index: int
    base_weight: float
    base: GaussianParams
    phases: tuple[TransformPhase, ...] = ()
    _starts: tuple[_PhaseStart, ...] = field(init=False, repr=False)
    _final: _PhaseStart = field(init=False, repr=False)

    def __post_init__(self):
        if int(self.start_index) != self.start_index or self.start_index < 0:
            raise InvalidParameter(f"start index must be an integer >= 0, got {self.start_index}")
        if not self.base_weight >= 0:
            raise InvalidParameter(f"component weight must be >= 0, got {self.base_weight}")
        object.__setattr__(self, "phases", tuple(self.phases))
        d = self.base.dimension
        for ph in self.phases:
            if ph.translation is not None and len(ph.translation) != d:
                raise InvalidParameter(
                    f"translation has {len(ph.translation)} entries, expected {d}"
                )
            _check_rotations(d, ph.rotation)
            if ph.orbit is not None:
                if len(ph.orbit.pivot) != d:
                    raise InvalidParameter(f"orbit pivot must have {d} entries")
                _check_rotations(d, [(*ph.orbit.plane, ph.orbit.angle_deg)])
        # phase-start states, chained so phase k+1 starts where phase k ended
        starts = []
        step = int(self.start_index)
        c, S, w = self.base.center, self.base.covariance, float(self.base_weight)
        for ph in self.phases:
            starts.append(_PhaseStart(step, c, S, w))
            c1, S1, w1 = _apply_phase(ph, c, S, w, [1.0])
            c, S, w = c1[0], S1[0], float(w1[0])
            step += ph.duration + 1
        object.__setattr__(self, "_starts", tuple(starts))
        object.__setattr__(self, "_final", _PhaseStart(step, c, S, w))

    @property
    def dimension(self) -> int:
        return self.base.dimension

    @property
    def end_step(self) -> int:
        """First step after the last phase."""
        return self._final.step

    def state_block(self, ts) -> tuple[np.ndarray, np.ndarray, np.ndarray, np.ndarray]:
        """Vectorized parameters at steps ``ts``.

        Returns (active, centers, covariances, weights); entries for inactive
        steps hold the base parameters with weight 0.
        """
        ts = np.asarray(ts, dtype=np.int64)
        n, d = ts.size, self.dimension
        centers = np.empty((n, d))
        covs = np.empty((n, d, d))
        weights = np.zeros(n)
        active = ts >= self.start_index
        centers[~active] = self.base.center
        covs[~active] = self.base.covariance
        after = ts >= self._final.step
        centers[after] = self._final.center
        covs[after] = self._final.covariance
        weights[after] = self._final.weight
        for ph, st in zip(self.phases, self._starts):
            m = (ts >= st.step) & (ts <= st.step + ph.duration)
            if not m.any():
                continue
            if ph.duration == 0:
                f = np.ones(int(m.sum()))
            else:
                f = (ts[m] - st.step) / ph.duration
            c, S, w = _apply_phase(ph, st.center, st.covariance, st.weight, f)
            centers[m] = c
            covs[m] = S
            weights[m] = w
        return active, centers, covs, weights

    def phase_boundaries(self) -> list[tuple[int, _PhaseStart]]:
        return [(st.step, st) for st in self._starts] + [(self._final.step, self._final)]


def params_at(component: ComponentTimeline, t: int) -> tuple[GaussianParams, float] | None:
    """Component parameters and weight at step ``t``; None before it starts."""
    if t < 0:
        raise InvalidParameter(f"time step must be >= 0, got {t}")
    active, c, S, w = component.state_block([t])
    if not active[0]:
        return None
    return GaussianParams(c[0], S[0]), float(w[0])


@dataclass(frozen=True, eq=False)
class ClassSpec:
    name: str
    class_weight: float
    components: tuple[ComponentTimeline, ...]

    def __post_init__(self):
        object.__setattr__(self, "components", tuple(self.components))
        if not self.components:
            raise InvalidParameter(f"class {self.name!r} has no components")
        if not self.class_weight >= 0:
            raise InvalidParameter(f"class {self.name!r} weight must be >= 0")

    def is_active(self, t: int) -> bool:
        return any(t >= c.start_index for c in self.components)


ComponentId = tuple[int, int]


@dataclass(frozen=True, eq=False)
class LabeledPattern:
    t: int
    x: np.ndarray
    class_label: str
    component_id: ComponentId


@dataclass(frozen=True, eq=False)
class Scenario:
    name: str
    dimension: int
    length: int
    classes: tuple[ClassSpec, ...]

    def __post_init__(self):
        object.__setattr__(self, "classes", tuple(self.classes))
        if self.length < 1:
            raise InvalidParameter("scenario length must be >= 1")
        if not self.classes:
            raise InvalidParameter("scenario has no classes")
        names = [c.name for c in self.classes]
        if len(set(names)) != len(names):
            raise InvalidParameter(f"duplicate class names in {names}")
        for i, cls in enumerate(self.classes):
            for j, comp in enumerate(cls.components):
                if comp.dimension != self.dimension:
                    raise InvalidParameter(
                        f"classes[{i}].components[{j}] has dimension {comp.dimension}, "
                        f"scenario has {self.dimension}"
                    )

    @property
    def class_names(self) -> list[str]:
        return [c.name for c in self.classes]

    @property
    def n_classes(self) -> int:
        return len(self.classes)

    def component_ids(self) -> list[ComponentId]:
        return [(i, j) for i, c in enumerate(self.classes) for j in range(len(c.components))]

    def _flat(self) -> list[tuple[int, ComponentTimeline]]:
        return [(i, comp) for i, c in enumerate(self.classes) for comp in c.components]

    def owner(self) -> np.ndarray:
        """Class index of each flattened component."""
        return np.array([i for i, _ in self._flat()], dtype=np.int64)

    def state_block(self, ts):
        """Priors, centers, covariances and Cholesky factors at steps ``ts``.

        Returns (priors (n,K), centers (n,K,d), covs (n,K,d,d), chols (n,K,d,d))
        with K the flattened component count; inactive components have prior 0.
        """
        ts = np.asarray(ts, dtype=np.int64)
        flat = self._flat()
        n, K, d = ts.size, len(flat), self.dimension
        raw = np.zeros((n, K))
        centers = np.empty((n, K, d))
        covs = np.empty((n, K, d, d))
        for k, (i, comp) in enumerate(flat):
            active, c, S, w = comp.state_block(ts)
            raw[:, k] = np.where(active, self.classes[i].class_weight * w, 0.0)
            centers[:, k] = c
            covs[:, k] = S
        total = raw.sum(axis=1)
        bad = ~(total > 0)
        if bad.any():
            raise DegenerateScenario(
                f"{self.name}: all active weights are zero at step {int(ts[bad][0])}"
            )
        priors = raw / total[:, None]
        floored = covs + VARIANCE_FLOOR * np.eye(d)
        try:
            chols = np.linalg.cholesky(floored)
        except np.linalg.LinAlgError as exc:
            raise NumericalDegeneracy(f"{self.name}: singular covariance") from exc
        return priors, centers, covs, chols


def priors_at(scenario: Scenario, t: int) -> dict[ComponentId, float]:
    """Normalized prior of each active component at step ``t``."""
    _check_t(scenario, t)
    pri = scenario.state_block([t])[0][0]
    out = {}
    k = 0
    for i, cls in enumerate(scenario.classes):
        for j, comp in enumerate(cls.components):
            if t >= comp.start_index:
                out[(i, j)] = float(pri[k])
            k += 1
    return out


def _check_t(scenario: Scenario, t: int):
    if not 0 <= t < scenario.length:
        raise InvalidParameter(f"time step {t} outside [0, {scenario.length})")


def _component_logterms(scenario: Scenario, t: int, xs: np.ndarray) -> np.ndarray:
    """log(prior_k * pdf_k(x)) for each row of xs, shape (N, K)."""
    xs = np.atleast_2d(np.asarray(xs, dtype=float))
    if xs.shape[1] != scenario.dimension:
        raise InvalidParameter(
            f"x has dimension {xs.shape[1]}, scenario has {scenario.dimension}"
        )
    pri, centers, _, chols = scenario.state_block([t])
    with np.errstate(divide="ignore"):
        logw = np.log(pri[0])
    return kernels.mixture_logpdf(xs, centers[0], chols[0], logw)


def density(scenario: Scenario, t: int, x) -> float:
    """Mixture density p(x, t)."""
    _check_t(scenario, t)
    terms = _component_logterms(scenario, t, x)[0]
    return float(np.exp(logsumexp(terms)))


def density_batch(scenario: Scenario, t: int, xs) -> np.ndarray:
    """Mixture density at step ``t`` for each row of ``xs``."""
    _check_t(scenario, t)
    return np.exp(logsumexp(_component_logterms(scenario, t, xs), axis=1))


def posterior(scenario: Scenario, t: int, x) -> dict[str, float]:
    """Ground-truth class posterior at step ``t``, computed in log space."""
    _check_t(scenario, t)
    post = _posterior_rows(scenario, t, np.atleast_2d(np.asarray(x, dtype=float)))[0]
    return {name: float(p) for name, p in zip(scenario.class_names, post)}


def _posterior_rows(scenario: Scenario, t: int, xs: np.ndarray) -> np.ndarray:
    terms = _component_logterms(scenario, t, xs)
    return _class_posterior(terms, scenario.owner(), scenario.n_classes, scenario.name)


def _class_posterior(terms, owner, n_classes, name="scenario"):
    per_class = np.full((terms.shape[0], n_classes), -np.inf)
    for c in range(n_classes):
        cols = terms[:, owner == c]
        if cols.shape[1]:
            per_class[:, c] = logsumexp(cols, axis=1)
    norm = logsumexp(per_class, axis=1, keepdims=True)
    if not np.all(np.isfinite(norm)):
        raise NumericalDegeneracy(f"{name}: total density is zero in log space")
    return np.exp(per_class - norm)


def bayes_classify(scenario: Scenario, t: int, x) -> str:
    """Argmax-posterior class; ties go to the lowest class index."""
    _check_t(scenario, t)
    post = _posterior_rows(scenario, t, np.atleast_2d(np.asarray(x, dtype=float)))[0]
    return scenario.class_names[int(np.argmax(post))]


def batch_logterms(centers, chols, priors, xs) -> np.ndarray:
    """log(prior_k * pdf_k(x_n)) with per-row parameters, shape (N, K).

    centers (N, K, d), chols (N, K, d, d), priors (N, K), xs (N, d).
    """
    n, K, d = centers.shape
    diff = xs[:, None, :] - centers
    z = np.linalg.solve(chols, diff[..., None])[..., 0]
    half_logdet = np.log(np.diagonal(chols, axis1=2, axis2=3)).sum(axis=2)
    with np.errstate(divide="ignore"):
        logw = np.log(priors)
    return logw - 0.5 * np.einsum("nkd,nkd->nk", z, z) - half_logdet - 0.5 * d * math.log(2 * math.pi)


def posterior_batch(scenario: Scenario, ts, xs) -> np.ndarray:
    """Class posteriors (N, C) for patterns (ts[i], xs[i])."""
    ts = np.asarray(ts, dtype=np.int64)
    xs = np.asarray(xs, dtype=float).reshape(ts.size, scenario.dimension)
    owner = scenario.owner()
    out = np.empty((ts.size, scenario.n_classes))
    for lo in range(0, ts.size, BLOCK):
        sl = slice(lo, lo + BLOCK)
        pri, centers, _, chols = scenario.state_block(ts[sl])
        terms = batch_logterms(centers, chols, pri, xs[sl])
        out[sl] = _class_posterior(terms, owner, scenario.n_classes, scenario.name)
    return out


def bayes_labels(scenario: Scenario, ts, xs) -> np.ndarray:
    """Vectorized Bayes decisions (class indices) for patterns (ts[i], xs[i])."""
    return np.argmax(posterior_batch(scenario, ts, xs), axis=1)


# -- sampling ---------------------------------------------------------------

def _draws_to_patterns(priors, centers, chols, z):
    """Map d+1 standard normals per step to (component index, x)."""
    u = ndtr(z[:, 0])
    cum = np.cumsum(priors, axis=1)
    comp = (u[:, None] >= cum).sum(axis=1)
    # u can exceed the last cumulative prior by round-off
    last = priors.shape[1] - 1 - np.argmax(priors[:, ::-1] > 0, axis=1)
    comp = np.minimum(comp, last)
    rows = np.arange(z.shape[0])
    L = chols[rows, comp]
    x = centers[rows, comp] + np.einsum("nij,nj->ni", L, z[:, 1:])
    return comp, x


def sample(scenario: Scenario, t: int, rng: np.random.Generator) -> LabeledPattern:
    """Draw one labeled pattern at step ``t``.

    Consumes ``d + 1`` standard normals from ``rng``: the first selects the
    component by roulette on its normal CDF, the rest are mapped through the
    component's Cholesky factor.
    """
    _check_t(scenario, t)
    pri, centers, _, chols = scenario.state_block([t])
    z = rng.standard_normal((1, scenario.dimension + 1))
    comp, x = _draws_to_patterns(pri, centers, chols, z)
    return _pattern(scenario, t, int(comp[0]), x[0])


def sample_batch(scenario: Scenario, t: int, n: int, rng: np.random.Generator):
    """``n`` independent draws at the fixed step ``t``.

    Returns (class index, component index, x) arrays; draw-for-draw the same
    as ``n`` consecutive ``sample`` calls.
    """
    _check_t(scenario, t)
    pri, centers, _, chols = scenario.state_block([t])
    z = rng.standard_normal((n, scenario.dimension + 1))
    rep = np.zeros(n, dtype=np.int64)
    comp, x = _draws_to_patterns(pri[rep], centers[rep], chols[rep], z)
    return scenario.owner()[comp], comp, x


def _pattern(scenario, t, k, x) -> LabeledPattern:
    ids = scenario.component_ids()
    i, j = ids[k]
    return LabeledPattern(int(t), x, scenario.classes[i].name, (i, j))


def make_rng(seed: int) -> np.random.Generator:
    return np.random.Generator(np.random.PCG64(seed))


def stream_blocks(scenario: Scenario, seed: int, block: int = BLOCK):
    """Yield (ts, xs, class_idx, comp_idx) arrays covering the whole stream.

    Equivalent draw-for-draw to calling ``sample`` for t = 0, 1, ... with
    ``make_rng(seed)``.
    """
    rng = make_rng(seed)
    owner = scenario.owner()
    d = scenario.dimension
    for lo in range(0, scenario.length, block):
        ts = np.arange(lo, min(lo + block, scenario.length))
        pri, centers, _, chols = scenario.state_block(ts)
        z = rng.standard_normal((ts.size, d + 1))
        comp, x = _draws_to_patterns(pri, centers, chols, z)
        yield ts, x, owner[comp], comp


def stream(scenario: Scenario, seed: int) -> Iterator[LabeledPattern]:
    """Patterns for t = 0 .. length-1 in order, generated block by block."""
    for ts, xs, _, comps in stream_blocks(scenario, seed):
        for t, x, k in zip(ts, xs, comps):
            yield _pattern(scenario, t, int(k), x)


def stream_arrays(scenario: Scenario, seed: int):
    """Materialize a whole stream as arrays (t, X, class index, component index)."""
    parts = list(stream_blocks(scenario, seed))
    return tuple(np.concatenate(p) for p in zip(*parts))
