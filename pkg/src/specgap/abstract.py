"""Finite-dimensional verification of the commutator eigenvalue inequality.

For a Hermitian A with orthonormal eigenpairs (lambda_i, u_i), Hermitian B_p
and anti-self-adjoint T_p (p = 1..n), an admissible couple (f, g) on
(0, lambda_{k+1}) must satisfy

    ( sum_{i<=k} sum_p f(lambda_i) <[T_p,B_p] u_i, u_i> )^2
      <= 4 * ( sum g(lambda_i) <[A,B_p] u_i, B_p u_i> )
           * ( sum f(lambda_i)^2 / (g(lambda_i)(lambda_{k+1}-lambda_i))
               * ||T_p u_i||^2 ),

with the first right-hand factor (the quadratic coefficient) nonnegative.
This module checks that inequality, its one-family corollary obtained by
setting T_p = [A, B_p] (which drops the factor 4), and the spectral moment
inequality  <Q^r u, u> <= <Q^q u, u>^(r/q) <u, u>^(1-r/q)  for PSD Q.

Everything here is exact linear algebra on small dense matrices; the only
hypotheses used are symmetry, skew-symmetry, and the spectral decomposition,
all of which are finite-dimensionally meaningful.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from typing import Optional

import numpy as np

from . import couples as _couples
from .errors import GapHypothesisError, InputError, MembershipError
from .eigensolve import dense_symmetric_eig

HERMITICITY_TOL = 1e-13
ENSEMBLES = ("dense-gaussian", "sparse", "commuting-diagnostic")


def commutator(X: np.ndarray, Y: np.ndarray) -> np.ndarray:
    """XY - YX for conformable square matrices."""
    X = np.asarray(X)
    Y = np.asarray(Y)
    if X.ndim != 2 or X.shape[0] != X.shape[1] or X.shape != Y.shape:
        raise InputError(f"need equal square shapes, got {X.shape} and {Y.shape}")
    return X @ Y - Y @ X


def _herm_defect(M: np.ndarray) -> float:
    return float(np.abs(M - M.conj().T).max())


def _skew_defect(M: np.ndarray) -> float:
    return float(np.abs(M + M.conj().T).max())


@dataclass(eq=False)
class OperatorTriple:
    """A finite-dimensional instance (A, {B_p}, {T_p}).

    A and every B_p Hermitian, every T_p anti-self-adjoint, all d x d.  The
    spectral data used by the verifiers is computed once and cached.
    """

    A: np.ndarray
    Bs: tuple
    Ts: tuple

    def __post_init__(self):
        A = np.asarray(self.A, dtype=complex)
        Bs = tuple(np.asarray(B, dtype=complex) for B in self.Bs)
        Ts = tuple(np.asarray(T, dtype=complex) for T in self.Ts)
        if A.ndim != 2 or A.shape[0] != A.shape[1]:
            raise InputError(f"A must be square, got {A.shape}")
        if len(Bs) != len(Ts) or not Bs:
            raise InputError("need equally many (at least one) B and T operators")
        d = A.shape[0]
        scale = max(float(np.abs(A).max()), 1e-300)
        if _herm_defect(A) > HERMITICITY_TOL * scale:
            raise InputError("A is not Hermitian within 1e-13 * max|A|")
        for p, (B, T) in enumerate(zip(Bs, Ts)):
            if B.shape != (d, d) or T.shape != (d, d):
                raise InputError(f"operator pair {p} has wrong shape")
            if _herm_defect(B) > HERMITICITY_TOL * max(float(np.abs(B).max()), 1e-300):
                raise InputError(f"B[{p}] is not Hermitian within 1e-13 * max|B|")
            if _skew_defect(T) > HERMITICITY_TOL * max(float(np.abs(T).max()), 1e-300):
                raise InputError(f"T[{p}] is not anti-self-adjoint within 1e-13 * max|T|")
        self.A, self.Bs, self.Ts = A, Bs, Ts

    @property
    def d(self) -> int:
        return self.A.shape[0]

    @property
    def n(self) -> int:
        return len(self.Bs)

    @cached_property
    def spectral(self) -> "SpectralData":
        eig = dense_symmetric_eig(self.A, want_vectors=True)
        lam, U = eig.eigenvalues, eig.eigenvectors
        n, d = self.n, self.d
        tb = np.empty((n, d))
        ab = np.empty((n, d))
        tn = np.empty((n, d))
        for p, (B, T) in enumerate(zip(self.Bs, self.Ts)):
            TU = T @ U
            BU = B @ U
            tb[p] = np.real(np.sum(np.conj(U) * (commutator(T, B) @ U), axis=0))
            ab[p] = np.real(np.sum(np.conj(BU) * (commutator(self.A, B) @ U), axis=0))
            tn[p] = np.sum(np.abs(TU) ** 2, axis=0)
        return SpectralData(lam, U, tb, ab, tn)


@dataclass(eq=False)
class SpectralData:
    """Per-(p, i) inner products entering the inequality, in A's eigenbasis.

    tb[p, i] = <[T_p,B_p] u_i, u_i>, ab[p, i] = <[A,B_p] u_i, B_p u_i>,
    tn[p, i] = ||T_p u_i||^2.  All real up to round-off by symmetry.
    """

    lam: np.ndarray
    U: np.ndarray
    tb: np.ndarray
    ab: np.ndarray
    tn: np.ndarray


@dataclass
class TheoremReport:
    """One inequality evaluation: sides, quadratic coefficient, verdict."""

    k: int
    lhs: float
    rhs: float
    quad_coeff: float
    gap: float
    passed: bool
    z: float
    slack: float = 0.0
    identity_residual: Optional[float] = None

    def as_dict(self) -> dict:
        out = {
            "k": self.k,
            "lhs": self.lhs,
            "rhs": self.rhs,
            "quad_coeff": self.quad_coeff,
            "gap": self.gap,
            "pass": self.passed,
            "z": self.z,
            "slack": self.slack,
        }
        if self.identity_residual is not None:
            out["identity_residual"] = self.identity_residual
        return out


def _require_couple(couple, lam_head: np.ndarray, z: float) -> tuple[np.ndarray, np.ndarray]:
    if abs(couple.lam - z) > 1e-12 * max(1.0, abs(z)):
        raise InputError(f"couple.lam = {couple.lam} must equal z = {z}")
    report = _couples.certify_on_samples(couple, lam_head)
    if not report.passed:
        raise MembershipError(
            f"couple {couple.describe()} fails admissibility on the eigenvalue prefix "
            f"(worst pair value {report.worst:g})"
        )
    return couple.evaluate_batch(lam_head)


def _verdict(lhs: float, rhs: float, quad: float, quad_scale: float) -> tuple[bool, float]:
    tau = 1e-9 * (1.0 + abs(rhs))
    tau_q = 1e-9 * (1.0 + quad_scale)
    slack = lhs - rhs
    return (lhs <= rhs + tau) and (quad >= -tau_q), slack


def verify_theorem(triple: OperatorTriple, k: int, couple, z: Optional[float] = None) -> TheoremReport:
    """Evaluate the main inequality for the first k eigenpairs of the triple.

    Requires lambda_{k+1} > lambda_k.  ``z`` defaults to lambda_{k+1}; any
    z in (lambda_k, lambda_{k+1}] is admissible, and couple.lam must equal z.
    """
    sd = triple.spectral
    if not 1 <= k < triple.d:
        raise InputError(f"need 1 <= k < d = {triple.d}, got k = {k}")
    lam = sd.lam
    gap = float(lam[k] - lam[k - 1])
    if not gap > 0:
        raise GapHypothesisError(f"lambda_{k + 1} > lambda_{k} required, gap = {gap}")
    if z is None:
        z = float(lam[k])
    if not (lam[k - 1] < z <= lam[k] * (1.0 + 1e-12)):
        raise InputError(f"z must lie in (lambda_k, lambda_(k+1)], got {z}")
    if np.any(lam[:k] <= 0):
        raise InputError("couple weights need a positive eigenvalue prefix")

    f, g = _require_couple(couple, lam[:k], z)
    lhs = float(np.sum(f[None, :] * sd.tb[:, :k])) ** 2
    quad = float(np.sum(g[None, :] * sd.ab[:, :k]))
    quad_scale = float(np.sum(np.abs(g[None, :] * sd.ab[:, :k])))
    second = float(np.sum((f**2 / (g * (z - lam[:k])))[None, :] * sd.tn[:, :k]))
    rhs = 4.0 * quad * second
    passed, slack = _verdict(lhs, rhs, quad, quad_scale)
    return TheoremReport(k, lhs, rhs, quad, gap, passed, z, slack)


def verify_corollary(A, Bs, k: int, couple, z: Optional[float] = None) -> TheoremReport:
    """Evaluate the one-family corollary with T_p = [A, B_p].

    The squared left side uses <[A,B_p] u_i, B_p u_i> directly and the right
    side carries no factor 4.  Also checks the identity
    <[A,B_p] u_i, B_p u_i> = -1/2 <[[A,B_p],B_p] u_i, u_i> and reports its
    largest residual.
    """
    A = np.asarray(A, dtype=complex)
    Bs = tuple(np.asarray(B, dtype=complex) for B in Bs)
    Ts = tuple(commutator(A, B) for B in Bs)
    triple = OperatorTriple(A, Bs, Ts)
    sd = triple.spectral
    if not 1 <= k < triple.d:
        raise InputError(f"need 1 <= k < d = {triple.d}, got k = {k}")
    lam = sd.lam
    gap = float(lam[k] - lam[k - 1])
    if not gap > 0:
        raise GapHypothesisError(f"lambda_{k + 1} > lambda_{k} required, gap = {gap}")
    if z is None:
        z = float(lam[k])
    if np.any(lam[:k] <= 0):
        raise InputError("couple weights need a positive eigenvalue prefix")
    f, g = _require_couple(couple, lam[:k], z)

    # identity residual: ab[p, i] vs -1/2 <[[A,B_p],B_p] u_i, u_i>
    U = sd.U
    worst = 0.0
    scale = 1e-300
    for p, B in enumerate(Bs):
        ddc = commutator(commutator(A, B), B)
        half = -0.5 * np.real(np.sum(np.conj(U) * (ddc @ U), axis=0))
        worst = max(worst, float(np.abs(half - sd.ab[p]).max()))
        scale = max(scale, float(np.abs(sd.ab[p]).max()))
    identity_residual = worst / max(scale, 1.0)

    lhs = float(np.sum(f[None, :] * sd.ab[:, :k])) ** 2
    quad = float(np.sum(g[None, :] * sd.ab[:, :k]))
    quad_scale = float(np.sum(np.abs(g[None, :] * sd.ab[:, :k])))
    second = float(np.sum((f**2 / (g * (z - lam[:k])))[None, :] * sd.tn[:, :k]))
    rhs = quad * second
    passed, slack = _verdict(lhs, rhs, quad, quad_scale)
    return TheoremReport(k, lhs, rhs, quad, gap, passed, z, slack, identity_residual)


def moment_inequality_check(Q, u, r: int, q: int) -> float:
    """Margin <Q^q u,u>^(r/q) <u,u>^(1-r/q) - <Q^r u,u> for PSD Hermitian Q
    and a unit vector u; nonnegative up to round-off for 0 <= r <= q."""
    Q = np.asarray(Q, dtype=complex)
    u = np.asarray(u, dtype=complex).ravel()
    if not (isinstance(r, (int, np.integer)) and isinstance(q, (int, np.integer)) and 0 <= r <= q):
        raise InputError(f"need integers 0 <= r <= q, got r={r}, q={q}")
    if Q.ndim != 2 or Q.shape[0] != Q.shape[1] or Q.shape[0] != u.size:
        raise InputError("Q must be square and conformable with u")
    nrm = np.linalg.norm(u)
    if nrm == 0:
        raise InputError("u must be nonzero")
    u = u / nrm
    scale = max(float(np.abs(Q).max()), 1e-300)
    if _herm_defect(Q) > HERMITICITY_TOL * scale:
        raise InputError("Q is not Hermitian within 1e-13 * max|Q|")
    w, V = np.linalg.eigh(Q)
    if w.size and w[0] < -1e-12 * max(abs(w[-1]), abs(w[0]), 1e-300):
        raise InputError(f"Q is not positive semidefinite (smallest eigenvalue {w[0]:g})")
    w = np.clip(w, 0.0, None)
    c2 = np.abs(V.conj().T @ u) ** 2
    if q == 0:
        return 0.0
    mq = float(np.sum(w**q * c2))
    mr = float(np.sum(w**r * c2))
    return mq ** (r / q) - mr


def random_instance(d: int, n: int, seed: int, ensemble: str = "dense-gaussian") -> OperatorTriple:
    """A seeded random (A, {B_p}, {T_p}) instance, deterministic in
    (seed, d, n, ensemble).

    A is symmetrized Gaussian shifted by a multiple of the identity so its
    spectrum is positive (couples live on (0, lambda); commutators and gaps
    are unchanged by the shift).
    """
    if not (d >= 2 and n >= 1):
        raise InputError(f"need d >= 2 and n >= 1, got d={d}, n={n}")
    if ensemble not in ENSEMBLES:
        raise InputError(f"unknown ensemble {ensemble!r}; known: {ENSEMBLES}")
    rng = np.random.default_rng(
        np.random.SeedSequence([int(seed), int(d), int(n), ENSEMBLES.index(ensemble)])
    )

    def gaussian(shape):
        return (rng.standard_normal(shape) + 1j * rng.standard_normal(shape)) / np.sqrt(2.0)

    if ensemble == "commuting-diagnostic":
        A = np.diag(np.sort(rng.uniform(0.5, 4.0, size=d))).astype(complex)
        Bs = tuple(np.diag(rng.standard_normal(d)).astype(complex) for _ in range(n))
        Ts = []
        for _ in range(n):
            N = gaussian((d, d))
            Ts.append((N - N.conj().T) / 2.0)
        return OperatorTriple(A, Bs, tuple(Ts))

    M = gaussian((d, d))
    if ensemble == "sparse":
        M = M * (rng.uniform(size=(d, d)) < 0.3)
    A = (M + M.conj().T) / 2.0
    lam_min = float(np.linalg.eigvalsh(A)[0])
    A = A + (1.0 - lam_min) * np.eye(d)

    Bs, Ts = [], []
    for _ in range(n):
        Mb = gaussian((d, d))
        Nt = gaussian((d, d))
        if ensemble == "sparse":
            Mb = Mb * (rng.uniform(size=(d, d)) < 0.3)
            Nt = Nt * (rng.uniform(size=(d, d)) < 0.3)
        Bs.append((Mb + Mb.conj().T) / 2.0)
        Ts.append((Nt - Nt.conj().T) / 2.0)
    return OperatorTriple(A, tuple(Bs), tuple(Ts))


def admissible_ks(triple: OperatorTriple, min_gap_rel: float = 1e-6) -> list[int]:
    """All k whose spectral gap exceeds min_gap_rel * ||A||_2."""
    sd = triple.spectral
    lam = sd.lam
    norm = max(abs(float(lam[0])), abs(float(lam[-1])))
    return [k for k in range(1, triple.d) if lam[k] - lam[k - 1] > min_gap_rel * norm]
