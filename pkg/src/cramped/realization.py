"""Matrix realizations of semisimple algebras in a Chevalley-type basis.

Each simple factor is realized by real matrices with ``f_i = e_i^T``: the
defining representation for the classical families and the 7-dimensional
representation for G2.  Root vectors of non-simple roots are nested
commutators, rescaled so that ``[e_b, f_b]`` is the coroot of ``b``.  The
basis order is ``h_1..h_r, e_1..e_P, f_1..f_P`` (P = number of positive
roots, in :attr:`RootSystem.positive_roots_simple` order); string labels are
``"h<i>"``, ``"e_<k>"``, ``"f_<k>"`` with 1-based indices.
"""

from __future__ import annotations

import math
from functools import lru_cache

import numpy as np

from .liecore import RootSystem

TOL = 1e-9


def _unit(n: int, i: int, j: int) -> np.ndarray:
    m = np.zeros((n, n))
    m[i, j] = 1.0
    return m


def _raw_simple_raising(family: str, rank: int) -> list[np.ndarray]:
    n = rank
    if family == "A":
        return [_unit(n + 1, i, i + 1) for i in range(n)]
    if family == "G":
        e1 = _unit(7, 0, 1) + math.sqrt(2) * (_unit(7, 2, 3) + _unit(7, 3, 4)) + _unit(7, 5, 6)
        e2 = _unit(7, 1, 2) + _unit(7, 4, 5)
        return [e1, e2]
    # classical series preserving an antidiagonal form of size N
    size = {"B": 2 * n + 1, "C": 2 * n, "D": 2 * n}[family]
    pair = lambda i, j: _unit(size, i, j) - _unit(size, size - 1 - j, size - 1 - i)
    out = [pair(i, i + 1) for i in range(n - 1)]
    if family == "B":
        out.append(pair(n - 1, n))
    elif family == "C":
        out.append(_unit(size, n - 1, n))
    else:
        out.append(pair(n - 2, n))
    return out


def _normalize(e: np.ndarray) -> np.ndarray:
    """Rescale so that h = [e, e^T] acts on e by 2."""
    f = e.T
    h = e @ f - f @ e
    ad = h @ e - e @ h
    c = np.vdot(e, ad) / np.vdot(e, e)
    if c <= 0:
        raise ValueError("root vector has non-positive self-pairing")
    return e * math.sqrt(2.0 / c)


class Realization:
    """Chevalley-type basis of a semisimple algebra as explicit matrices."""

    def __init__(self, rs: RootSystem):
        self.system = rs
        blocks = []
        for family, rank in rs.factors:
            blocks.append([_normalize(e) for e in _raw_simple_raising(family, rank)])
        sizes = [b[0].shape[0] for b in blocks]
        self.matrix_size = sum(sizes)
        simple = []
        offset = 0
        for blk, size in zip(blocks, sizes):
            for e in blk:
                big = np.zeros((self.matrix_size, self.matrix_size))
                big[offset:offset + size, offset:offset + size] = e
                simple.append(big)
            offset += size
        self.factor_slices = []
        offset = 0
        for size in sizes:
            self.factor_slices.append(slice(offset, offset + size))
            offset += size

        r = rs.rank
        self.h = [e @ e.T - e.T @ e for e in simple]
        roots = rs.positive_roots_simple
        index = {beta: k for k, beta in enumerate(roots)}
        raising: list[np.ndarray | None] = [None] * len(roots)
        for k, beta in enumerate(roots):
            if sum(beta) == 1:
                raising[k] = simple[beta.index(1)]
                continue
            for i in range(r):
                if beta[i] == 0:
                    continue
                gamma = tuple(b - int(j == i) for j, b in enumerate(beta))
                if gamma in index:
                    eg = raising[index[gamma]]
                    raising[k] = _normalize(simple[i] @ eg - eg @ simple[i])
                    break
            else:
                raise AssertionError(f"cannot build root vector for {beta}")
        self.e = raising
        self.f = [x.T.copy() for x in raising]
        self.basis = self.h + self.e + self.f
        self.dim = len(self.basis)
        self.labels = ([f"h{i + 1}" for i in range(r)]
                       + [f"e_{k + 1}" for k in range(len(roots))]
                       + [f"f_{k + 1}" for k in range(len(roots))])
        self.label_index = {lab: k for k, lab in enumerate(self.labels)}
        node_factor = rs.factor_of_node
        root_factor = [node_factor[next(i for i, c in enumerate(beta) if c)] for beta in roots]
        self.factor_of_basis = list(node_factor) + root_factor + root_factor
        flat = np.array([b.ravel() for b in self.basis]).T
        self._pinv = np.linalg.pinv(flat)
        self._flat = flat
        if np.linalg.matrix_rank(flat) != self.dim:
            raise AssertionError(f"basis of {rs} is linearly dependent")
        self._check()

    def _check(self) -> None:
        rs = self.system
        unit = {beta: k for k, beta in enumerate(rs.positive_roots_simple) if sum(beta) == 1}
        simple = [self.e[unit[tuple(int(k == j) for k in range(rs.rank))]] for j in range(rs.rank)]
        for i, hi in enumerate(self.h):
            for j, ej in enumerate(simple):
                ad = hi @ ej - ej @ hi
                if not np.allclose(ad, rs.cartan_matrix[j][i] * ej, atol=TOL):
                    raise AssertionError(f"Cartan matrix mismatch for {rs} at ({i}, {j})")
        # closure: every bracket of basis elements lies in the span
        for a in range(self.dim):
            for b in range(a + 1, self.dim):
                self.coords(self.bracket(self.basis[a], self.basis[b]))

    @staticmethod
    def bracket(x: np.ndarray, y: np.ndarray) -> np.ndarray:
        return x @ y - y @ x

    def coords(self, m: np.ndarray) -> np.ndarray:
        """Coordinates of a matrix in the Chevalley basis; raises if outside the span."""
        v = np.asarray(m).ravel()
        if np.iscomplexobj(v):
            c = self._pinv @ v.real + 1j * (self._pinv @ v.imag)
        else:
            c = self._pinv @ v
        resid = np.linalg.norm(self._flat @ c - v)
        if resid > TOL * max(1.0, np.linalg.norm(v)):
            raise ValueError(f"matrix is not in the algebra (residual {resid:.3g})")
        return c

    def element(self, coeffs: dict[str, complex] | np.ndarray) -> np.ndarray:
        if isinstance(coeffs, dict):
            vec = np.zeros(self.dim, dtype=complex)
            for lab, c in coeffs.items():
                if lab not in self.label_index:
                    raise KeyError(f"unknown basis label {lab!r}")
                vec[self.label_index[lab]] = complex(c)
        else:
            vec = np.asarray(coeffs)
        out = np.tensordot(vec, np.array(self.basis), axes=1)
        return out if np.iscomplexobj(out) and np.any(out.imag) else out.real

    @property
    def structure_constants(self) -> np.ndarray:
        """``C[a, b, c]``: coefficient of basis c in [basis a, basis b]."""
        if not hasattr(self, "_sc"):
            sc = np.zeros((self.dim, self.dim, self.dim))
            for a in range(self.dim):
                for b in range(self.dim):
                    sc[a, b] = self.coords(self.bracket(self.basis[a], self.basis[b]))
            self._sc = sc
        return self._sc


@lru_cache(maxsize=None)
def realize(rs: RootSystem) -> Realization:
    return Realization(rs)


def span_is_subalgebra(real: Realization, elements: list[np.ndarray],
                       tol: float = TOL) -> tuple[int, int] | None:
    """Return the first pair (a, b) whose bracket leaves the span, or None."""
    mats = np.array([m.ravel() for m in elements]).T.astype(complex)
    q, _ = np.linalg.qr(mats)
    for a in range(len(elements)):
        for b in range(a + 1, len(elements)):
            v = real.bracket(elements[a], elements[b]).ravel()
            resid = v - q @ (q.conj().T @ v)
            if np.linalg.norm(resid) > tol * max(1.0, np.linalg.norm(v)):
                return a, b
    return None


__all__ = ["Realization", "realize", "span_is_subalgebra"]
