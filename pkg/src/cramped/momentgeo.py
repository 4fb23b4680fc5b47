"""Compact forms, the moment image Ad_K . l^perp, and orbit-to-l^perp distances.

Coadjoint orbits are handled as adjoint orbits through the invariant metric.
The distance from a weight lam to the moment image is the minimum over the
compact group of ``|P_l(Ad_k xi_lam)|``, found by gradient descent on the
orbit: with ``x = Ad_k xi`` the gradient of ``f = |P_l x|^2 / 2`` along left
translation is ``[x, P_l x]`` and the retraction is ``x <- exp(-s ad_X) x``.
Every verdict produced here is numerical evidence, not proof.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np
from scipy.linalg import expm
from scipy.optimize import minimize

from .branching import EmbeddingError, EmbeddingSpec
from .liecore import RootSystem, Weight
from .realization import realize

TOL = 1e-9
RESTART_BLOCK = 25


class CompactModelError(EmbeddingError):
    pass


@dataclass(frozen=True)
class OptimizerConfig:
    restarts: int = 100
    max_iters: int = 500
    grad_tol: float = 1e-8
    step_init: float = 0.1
    seed: int = 0

    def __post_init__(self) -> None:
        if self.restarts < 1 or self.max_iters < 1:
            raise ValueError("restarts and max_iters must be positive")
        if not (self.grad_tol > 0 and self.step_init > 0):
            raise ValueError("grad_tol and step_init must be positive")
        if not 0 <= self.seed < 2**64:
            raise ValueError("seed must be a 64-bit unsigned integer")


class CompactModel:
    """The compact form k of g with the compact form l of h inside it.

    Coordinates are taken in the basis ``i h_j``, ``e_b - f_b``,
    ``i (e_b + f_b)``.  ``metric`` is minus the invariant form, normalized so
    that ``chamber_map`` is an isometry from the weight space.
    """

    def __init__(self, spec: EmbeddingSpec):
        if spec.compact_generators is None:
            raise CompactModelError(f"{spec.name} carries no compact generator data")
        self.spec = spec
        g = spec.g
        real = realize(g)
        self._real = real
        r = g.rank
        p = len(g.positive_roots_simple)
        self.dimension = n = r + 2 * p
        self._r, self._p = r, p

        sc = real.structure_constants
        basis = np.eye(n)
        chev = np.array([self.from_compact(b) for b in basis])  # (n, dim) complex
        brackets = np.einsum("ai,bj,ijc->abc", chev, chev, sc)
        self.adjoint_basis = np.zeros((n, n, n))
        for a in range(n):
            for b in range(n):
                self.adjoint_basis[a][:, b] = self.to_compact(brackets[a, b])

        mats = [real.element(z) for z in chev]
        kappa = {}
        for j in range(r):
            f = g.factor_of_node[j]
            if f not in kappa:
                tr = np.trace(real.h[j] @ real.h[j])
                kappa[f] = 4.0 / (float(g.root_lengths[j]) * tr)
        metric = np.zeros((n, n))
        fac = [real.factor_of_basis[self._chevalley_slot(a)] for a in range(n)]
        for a in range(n):
            for b in range(n):
                if fac[a] == fac[b]:
                    metric[a, b] = -kappa[fac[a]] * np.trace(mats[a] @ mats[b]).real
        self.metric = metric

        inv = g.inverse_cartan
        d = [x / 2 for x in g.root_lengths]
        cmap = np.zeros((n, r))
        for i in range(r):
            for k in range(r):
                cmap[k, i] = float(inv[i][k] * d[k])
        self._chamber = cmap

        self.h_generators = self._stable_generators()
        self.h_basis = self._compact_h_basis()
        lb = self.h_basis.T
        gram = lb.T @ metric @ lb
        self.h_projector = lb @ np.linalg.solve(gram, lb.T @ metric)

        chol = np.linalg.cholesky(metric)
        # orthonormal coordinates q = chol^T x; ad matrices become skew-symmetric
        self._to_q = chol.T
        self._from_q = np.linalg.inv(chol.T)
        mixed = np.einsum("aj,abc->jbc", self._from_q, self.adjoint_basis)
        self._ad_q = np.einsum("xb,jbc,cy->jxy", self._to_q, mixed, self._from_q)
        self._proj_q = self._to_q @ self.h_projector @ self._from_q
        self._validate()

    def _chevalley_slot(self, a: int) -> int:
        r, p = self._r, self._p
        if a < r:
            return a
        return r + (a - r) % p

    def from_compact(self, x: np.ndarray) -> np.ndarray:
        """Compact coordinates -> complex Chevalley coordinates."""
        r, p = self._r, self._p
        x = np.asarray(x, dtype=float)
        z = np.zeros(r + 2 * p, dtype=complex)
        z[:r] = 1j * x[:r]
        y, w = x[r:r + p], x[r + p:]
        z[r:r + p] = y + 1j * w
        z[r + p:] = -y + 1j * w
        return z

    def to_compact(self, z: np.ndarray, check: bool = True) -> np.ndarray:
        r, p = self._r, self._p
        z = np.asarray(z, dtype=complex)
        if check:
            off = np.linalg.norm(z[:r].real) + np.linalg.norm(z[r + p:] + np.conj(z[r:r + p]))
            if off > TOL * max(1.0, np.linalg.norm(z)):
                raise CompactModelError("element is not in the compact form")
        return np.concatenate([z[:r].imag, z[r:r + p].real, z[r:r + p].imag])

    def _dagger(self, z: np.ndarray) -> np.ndarray:
        r, p = self._r, self._p
        out = np.conj(z).copy()
        out[..., r:r + p], out[..., r + p:] = np.conj(z[..., r + p:]), np.conj(z[..., r:r + p])
        return out

    def _torus_scale(self, u: np.ndarray) -> np.ndarray:
        r = self._r
        heights = np.array(self.spec.g.positive_roots_simple, dtype=float) @ u
        return np.concatenate([np.ones(r), np.exp(heights), np.exp(-heights)])

    def _stable_generators(self) -> np.ndarray:
        """Generators of h, conjugated by a real torus element if needed so that
        h is stable under X -> X^dagger (i.e. l = h cap k is a compact form of h)."""
        labels = self._real.label_index
        z = np.zeros((len(self.spec.compact_generators), self._real.dim), dtype=complex)
        for k, gen in enumerate(self.spec.compact_generators):
            for lab, c in gen:
                z[k, labels[lab]] = float(c)

        def defect(u):
            zu = z * self._torus_scale(u)
            q, _ = np.linalg.qr(zu.T)
            dag = self._dagger(zu).T
            resid = dag - q @ (q.conj().T @ dag)
            return float(np.sum(np.abs(resid) ** 2) / np.sum(np.abs(zu) ** 2))

        u0 = np.zeros(self._r)
        if defect(u0) < 1e-24:
            return z
        res = minimize(defect, u0, method="BFGS", options={"gtol": 1e-14})
        if res.fun > 1e-18:
            raise CompactModelError(
                f"{self.spec.name}: no torus conjugate of h is stable under the compact involution")
        return z * self._torus_scale(res.x)

    def _compact_h_basis(self) -> np.ndarray:
        z = self.h_generators
        dag = self._dagger(z)
        vecs = [self.to_compact((v - vd) / 2) for v, vd in zip(z, dag)]
        vecs += [self.to_compact(1j * (v + vd) / 2) for v, vd in zip(z, dag)]
        m = np.array(vecs)
        _, s, vt = np.linalg.svd(m)
        rank = int(np.sum(s > 1e-9 * s[0]))
        if rank != len(z):
            raise CompactModelError(
                f"compact form of h has dimension {rank}, expected {len(z)}")
        return vt[:rank]

    def _validate(self) -> None:
        n = self.dimension
        ad = self.adjoint_basis
        flat = ad.reshape(n, -1).T
        for a in range(n):
            for b in range(a + 1, n):
                comm = ad[a] @ ad[b] - ad[b] @ ad[a]
                c, *_ = np.linalg.lstsq(flat, comm.ravel(), rcond=None)
                if np.linalg.norm(flat @ c - comm.ravel()) > TOL * max(1.0, np.linalg.norm(comm)):
                    raise CompactModelError(f"adjoint matrices {a} and {b} do not close")
        proj = self.h_projector
        if np.linalg.norm(proj @ proj - proj) > TOL or \
                np.linalg.norm(self.metric @ proj - proj.T @ self.metric) > TOL:
            raise CompactModelError("h projector is not a metric-orthogonal projection")
        lb = self.h_basis
        for a in range(len(lb)):
            for b in range(a + 1, len(lb)):
                br = np.einsum("i,ikj,j->k", lb[a], ad, lb[b])
                if np.linalg.norm(br - proj @ br) > TOL * max(1.0, np.linalg.norm(br)):
                    raise CompactModelError(
                        f"compact h basis elements {a + 1} and {b + 1} do not close under bracket")

    def chamber_map(self, lam) -> np.ndarray:
        """Metric dual of a weight, as an element of the Cartan of k."""
        coords = lam.coords if isinstance(lam, Weight) else lam
        v = np.array([float(Fraction(c)) if not isinstance(c, float) else c for c in coords])
        if v.shape != (self.spec.g.rank,):
            raise ValueError("weight rank does not match g")
        out = np.zeros(self.dimension)
        out[:self._r] = self._chamber[:self._r] @ v
        return out

    def inner(self, x: np.ndarray, y: np.ndarray) -> float:
        return float(x @ self.metric @ y)

    def norm(self, x: np.ndarray) -> float:
        return math.sqrt(max(self.inner(x, x), 0.0))

    def bracket(self, x: np.ndarray, y: np.ndarray) -> np.ndarray:
        return np.einsum("i,ikj,j->k", x, self.adjoint_basis, y)

    def ad(self, x: np.ndarray) -> np.ndarray:
        return np.einsum("i,ijk->jk", x, self.adjoint_basis)

    def group_act(self, y: np.ndarray, x: np.ndarray) -> np.ndarray:
        """Ad_{exp y} x."""
        return expm(self.ad(y)) @ x

    def projection_norm(self, x: np.ndarray) -> float:
        return self.norm(self.h_projector @ x)

    @property
    def h_dimension(self) -> int:
        return len(self.h_basis)


def build_compact_model(spec: EmbeddingSpec) -> CompactModel:
    return CompactModel(spec)


@dataclass
class DescentRun:
    restart: int
    value: float
    point: np.ndarray
    iterations: int
    grad_norm: float
    history: list[float] | None = None


@dataclass
class OrbitDistance:
    """Best value over all restarts; ``distance`` is sqrt(2 f_best)."""

    distance: float
    xi_norm: float
    point: np.ndarray
    best_restart: int
    iterations: int
    grad_norm: float
    total_iterations: int
    seed: int
    runs: list[DescentRun] = field(default_factory=list, repr=False)


def _restart_start(model: CompactModel, xi_q: np.ndarray, seed: int, index: int) -> np.ndarray:
    rng = np.random.default_rng(np.random.SeedSequence(seed, spawn_key=(index,)))
    y = rng.normal(size=model.dimension) * math.pi
    ad_y = np.einsum("i,ijk->jk", y, model._ad_q)
    return expm(ad_y) @ xi_q


def _descend_block(model: CompactModel, starts: np.ndarray, cfg: OptimizerConfig,
                   first_index: int, record: bool = False) -> list[DescentRun]:
    """Armijo-backtracked descent for a block of restarts, vectorized over the block."""
    A, P = model._ad_q, model._proj_q
    x = starts.copy()
    b = len(x)
    px = x @ P.T
    f = 0.5 * np.einsum("bi,bi->b", px, px)
    step = np.full(b, cfg.step_init / 2)
    iters = np.zeros(b, dtype=int)
    gnorm = np.full(b, np.inf)
    active = np.ones(b, dtype=bool)
    history = [[v] for v in f] if record else None
    for _ in range(cfg.max_iters):
        idx = np.flatnonzero(active)
        if not len(idx):
            break
        xa = x[idx]
        ad_x = np.einsum("bi,ijk->bjk", xa, A)
        grad = np.einsum("bjk,bk->bj", ad_x, px[idx])
        gn = np.linalg.norm(grad, axis=1)
        gnorm[idx] = gn
        done = (gn < cfg.grad_tol) | (f[idx] == 0.0)
        active[idx[done]] = False
        keep = ~done
        idx, grad, gn, xa = idx[keep], grad[keep], gn[keep], xa[keep]
        if not len(idx):
            break
        ad_g = np.einsum("bi,ijk->bjk", grad, A)
        s = np.minimum(step[idx] * 2.0, 1e6)
        pending = np.ones(len(idx), dtype=bool)
        for _ in range(60):
            sel = np.flatnonzero(pending)
            if not len(sel):
                break
            cand = np.einsum("bjk,bk->bj", expm(-s[sel, None, None] * ad_g[sel]), xa[sel])
            pc = cand @ P.T
            fc = 0.5 * np.einsum("bi,bi->b", pc, pc)
            ok = fc <= f[idx[sel]] - 1e-4 * s[sel] * gn[sel] ** 2
            acc = sel[ok]
            gi = idx[acc]
            x[gi], px[gi], f[gi] = cand[ok], pc[ok], fc[ok]
            step[gi] = s[acc]
            iters[gi] += 1
            pending[acc] = False
            s[sel[~ok]] *= 0.5
        # no admissible step left: numerically stationary
        stalled = idx[pending]
        active[stalled] = False
        if record:
            for k in range(b):
                history[k].append(float(f[k]))
    runs = []
    for k in range(b):
        runs.append(DescentRun(first_index + k, float(f[k]), x[k].copy(), int(iters[k]),
                               float(gnorm[k]), history[k] if record else None))
    return runs


def orbit_distance(model: CompactModel, xi: np.ndarray, cfg: OptimizerConfig | None = None,
                   workers: int = 1, record: bool = False) -> OrbitDistance:
    """min over k of |P_l(Ad_k xi)| for an arbitrary element ``xi`` of k."""
    cfg = cfg or OptimizerConfig()
    xi_q = model._to_q @ np.asarray(xi, dtype=float)
    blocks = [range(s, min(s + RESTART_BLOCK, cfg.restarts))
              for s in range(0, cfg.restarts, RESTART_BLOCK)]

    def run(block):
        starts = np.array([_restart_start(model, xi_q, cfg.seed, i) for i in block])
        return _descend_block(model, starts, cfg, block.start, record)

    if workers > 1 and len(blocks) > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(run, blocks))
    else:
        results = [run(b) for b in blocks]
    runs = [r for block in results for r in block]
    best = min(runs, key=lambda r: (r.value, r.restart))
    return OrbitDistance(
        distance=math.sqrt(2.0 * best.value),
        xi_norm=float(np.linalg.norm(xi_q)),
        point=model._from_q @ best.point,
        best_restart=best.restart,
        iterations=best.iterations,
        grad_norm=best.grad_norm,
        total_iterations=sum(r.iterations for r in runs),
        seed=cfg.seed,
        runs=runs,
    )


def moment_image_distance(model: CompactModel, lam, cfg: OptimizerConfig | None = None,
                          workers: int = 1) -> OrbitDistance:
    """delta(lam, im N); ``lam`` may be any real weight."""
    return orbit_distance(model, model.chamber_map(lam), cfg, workers)


def meets_threshold(result: OrbitDistance, tol: float) -> bool:
    return result.distance < tol * (1.0 + result.xi_norm)


def orbit_meets_h_perp(model: CompactModel, lam, cfg: OptimizerConfig | None = None,
                       tol: float = 1e-3, workers: int = 1) -> tuple[bool, OrbitDistance]:
    res = moment_image_distance(model, lam, cfg, workers)
    return meets_threshold(res, tol), res


@dataclass
class FundamentalScan:
    pair: str
    rows: list[dict]
    surjective_evidence: bool


def scan_fundamental_orbits(model: CompactModel, cfg: OptimizerConfig | None = None,
                            tol: float = 1e-3, workers: int = 1) -> FundamentalScan:
    cfg = cfg or OptimizerConfig()
    g = model.spec.g
    rows = []
    for i in range(g.rank):
        lam = [int(i == j) for j in range(g.rank)]
        meets, res = orbit_meets_h_perp(model, lam, cfg, tol, workers)
        rows.append({
            "pair": model.spec.name,
            "i": i + 1,
            "lambda": lam,
            "distance": res.distance,
            "meets": meets,
            "iterations": res.total_iterations,
            "seed": cfg.seed,
        })
    return FundamentalScan(model.spec.name, rows, all(r["meets"] for r in rows))


def min_orbit_dimension(rs: RootSystem) -> int:
    """Smallest real dimension of an orbit through a fundamental weight."""
    counts = []
    for i in range(rs.rank):
        # (omega_i, alpha) != 0 exactly when alpha involves alpha_i
        counts.append(sum(1 for beta in rs.positive_roots_simple if beta[i]))
    return 2 * min(counts)


@dataclass
class WzReport:
    pair: str
    min_orbit_dim: int
    h_dim: int
    hypothesis_holds: bool
    samples: list[dict]
    failures: list[list[int]]


def wz_orbit_property(model: CompactModel, sample_count: int = 25,
                      cfg: OptimizerConfig | None = None, tol: float = 1e-3,
                      workers: int = 1) -> WzReport:
    cfg = cfg or OptimizerConfig()
    g = model.spec.g
    dmin = min_orbit_dimension(g)
    dh = model.spec.h.dimension
    holds = dmin > 2 * dh
    report = WzReport(model.spec.name, dmin, dh, holds, [], [])
    if not holds:
        return report
    rng = np.random.default_rng(np.random.SeedSequence(cfg.seed, spawn_key=(2**31,)))
    while len(report.samples) < sample_count:
        lam = [int(c) for c in rng.integers(0, 5, size=g.rank)]
        if not any(lam):
            continue
        meets, res = orbit_meets_h_perp(model, lam, cfg, tol, workers)
        report.samples.append({"lambda": lam, "distance": res.distance, "meets": meets})
        if not meets:
            report.failures.append(lam)
    return report
