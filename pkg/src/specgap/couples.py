"""Weight couples (f, g) and their admissibility certification.

A couple is a pair of positive functions on the open interval (0, lambda).
It is admissible when, for every pair of points x != y,

    ((f(x)-f(y))/(x-y))^2
      + (f(x)^2/(g(x)(lambda-x)) + f(y)^2/(g(y)(lambda-y)))
        * (g(x)-g(y))/(x-y)                                    <= 0.

Admissibility makes the couple a legal weight in the commutator inequality
verified by :mod:`specgap.abstract` and in the polyharmonic margin check of
:mod:`specgap.bounds`.  Four parametric power families are admissible for the
parameter ranges enforced below; a tabulated couple is second class and can
only ever be certified on the sample points it was given.

Both checks here are numerical certificates on finite samples, not proofs:
``check_membership`` evaluates the displayed condition pairwise, and
``check_necessary_differentiable`` screens smooth families with the weaker
pointwise condition  ((ln f)')^2 <= -2/(lambda-x) * (ln g)'.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

import numpy as np

from .errors import (
    CoupleDomainError,
    CoupleSpecError,
    DegenerateSamplesError,
    InputError,
    TabulatedLookupError,
    UnsupportedFamilyError,
)

CONST_POWER = "const-power"
LINEAR_POWER = "linear-power"
EQUAL_POWER = "equal-power"
NEG_POWER = "neg-power"
TABULATED = "tabulated"

FAMILIES = (CONST_POWER, LINEAR_POWER, EQUAL_POWER, NEG_POWER, TABULATED)

# Pairs closer than this (relative to lambda) make the difference quotients
# meaningless and are skipped; the condition is only stated for x != y.
PAIR_SKIP_REL = 1e-14

# The admissibility condition is a closed inequality; equality configurations
# (e.g. the equal-power family at delta = 2) must not fail from round-off.
COND_TOL_REL = 1e-12


def _power_exponents(family: str, params: tuple) -> tuple[float, float]:
    """(exponent of f, exponent of g) for f,g = (lambda-x)^e."""
    if family == CONST_POWER:
        return 0.0, params[0]
    if family == LINEAR_POWER:
        return 1.0, params[0]
    if family == EQUAL_POWER:
        return params[0], params[0]
    if family == NEG_POWER:
        return params[0], params[1]
    raise UnsupportedFamilyError(f"family {family!r} has no power form")


def _validate_params(family: str, params: tuple) -> None:
    if family == CONST_POWER:
        if len(params) != 1 or not params[0] >= 0:
            raise InputError(f"{CONST_POWER} needs one parameter alpha >= 0, got {params}")
    elif family == LINEAR_POWER:
        if len(params) != 1 or not params[0] >= 0.5:
            raise InputError(f"{LINEAR_POWER} needs one parameter beta >= 1/2, got {params}")
    elif family == EQUAL_POWER:
        if len(params) != 1 or not 0 < params[0] <= 2:
            raise InputError(f"{EQUAL_POWER} needs one parameter 0 < delta <= 2, got {params}")
    elif family == NEG_POWER:
        ok = len(params) == 2 and params[0] < 0 and params[1] >= 1 and params[0] ** 2 <= params[1]
        if not ok:
            raise InputError(
                f"{NEG_POWER} needs (alpha, beta) with alpha < 0, beta >= 1, alpha^2 <= beta, got {params}"
            )
    elif family == TABULATED:
        if params:
            raise InputError("tabulated couples carry a table, not parameters")
    else:
        raise InputError(f"unknown couple family {family!r}; known: {FAMILIES}")


@dataclass(frozen=True)
class FunctionCouple:
    """A candidate couple: family name, threshold lambda, parameters.

    For the tabulated family, ``table`` holds (x, f, g) arrays and evaluation
    is lookup-only.
    """

    family: str
    lam: float
    params: tuple = ()
    table: Optional[tuple] = None

    def __post_init__(self):
        if not self.lam > 0:
            raise InputError(f"lambda must be positive, got {self.lam}")
        _validate_params(self.family, tuple(float(p) for p in self.params))
        object.__setattr__(self, "params", tuple(float(p) for p in self.params))
        if self.family == TABULATED:
            if self.table is None:
                raise InputError("tabulated couple requires a table of (x, f, g)")
            xs, fs, gs = (np.asarray(a, dtype=float).ravel() for a in self.table)
            if not (xs.size and xs.size == fs.size == gs.size):
                raise InputError("table arrays must be nonempty and of equal length")
            if np.any(xs <= 0) or np.any(xs >= self.lam):
                raise CoupleDomainError("table points must lie in (0, lambda)")
            if np.any(fs <= 0) or np.any(gs <= 0):
                raise InputError("tabulated f and g must be strictly positive")
            for a in (xs, fs, gs):
                a.setflags(write=False)
            object.__setattr__(self, "table", (xs, fs, gs))
        elif self.table is not None:
            raise InputError("only the tabulated family carries a table")

    def power_exponents(self) -> tuple[float, float]:
        """Exponents (ef, eg) such that f,g = (lambda-x)^(ef,eg)."""
        return _power_exponents(self.family, self.params)

    def evaluate_batch(self, xs: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
        """Vectorized (f(x), g(x)); raises on points outside (0, lambda)."""
        xs = np.asarray(xs, dtype=float)
        if np.any(xs <= 0) or np.any(xs >= self.lam):
            raise CoupleDomainError(
                f"evaluation points must lie in (0, {self.lam}), got range "
                f"[{xs.min() if xs.size else 'nan'}, {xs.max() if xs.size else 'nan'}]"
            )
        if self.family == TABULATED:
            tx, tf, tg = self.table
            idx = np.empty(xs.shape, dtype=int)
            for pos, x in np.ndenumerate(xs):
                hits = np.nonzero(np.isclose(tx, x, rtol=1e-12, atol=0.0))[0]
                if hits.size == 0:
                    raise TabulatedLookupError(f"x = {x} is not a tabulated sample point")
                idx[pos] = hits[0]
            return tf[idx], tg[idx]
        ef, eg = self.power_exponents()
        u = self.lam - xs
        return u**ef, u**eg

    def describe(self) -> str:
        if self.family == TABULATED:
            return f"{TABULATED}[{self.table[0].size} pts]@{self.lam:g}"
        return f"{self.family}:{','.join(f'{p:g}' for p in self.params)}@{self.lam:g}"


def evaluate(couple: FunctionCouple, x: float) -> tuple[float, float]:
    """(f(x), g(x)) for a single point x in (0, lambda)."""
    f, g = couple.evaluate_batch(np.asarray([x]))
    return float(f[0]), float(g[0])


@dataclass(frozen=True)
class MembershipReport:
    """Outcome of a certification run.

    ``worst`` is the largest pair value for the pairwise check (pass means
    every pair value is at or below its round-off tolerance) and the smallest
    margin for the differentiable screen (pass means every margin is
    nonnegative up to round-off).
    """

    passed: bool
    check: str
    worst: float
    witness: Optional[tuple]
    n_checked: int
    n_skipped: int = 0
    g_nonincreasing: bool = True

    def as_dict(self) -> dict:
        return {
            "passed": self.passed,
            "check": self.check,
            "worst": self.worst,
            "witness": list(self.witness) if self.witness is not None else None,
            "n_checked": self.n_checked,
            "n_skipped": self.n_skipped,
            "g_nonincreasing": self.g_nonincreasing,
        }


def _pairwise_report(couple, xs: np.ndarray) -> MembershipReport:
    fs, gs = couple.evaluate_batch(xs)
    if np.any(fs <= 0) or np.any(gs <= 0):
        raise InputError("couple is not positive on the sample set")

    i, j = np.triu_indices(xs.size, 1)
    dx = xs[i] - xs[j]
    keep = np.abs(dx) >= PAIR_SKIP_REL * couple.lam
    n_skipped = int(np.count_nonzero(~keep))
    i, j, dx = i[keep], j[keep], dx[keep]

    # g must be nonincreasing; check on the sorted samples.
    order = np.argsort(xs, kind="stable")
    g_sorted = gs[order]
    g_tol = COND_TOL_REL * (1.0 + float(np.max(np.abs(gs))))
    g_ok = bool(np.all(np.diff(g_sorted) <= g_tol))

    if i.size == 0:
        return MembershipReport(g_ok, "pairwise", -np.inf, None, 0, n_skipped, g_ok)

    t1 = ((fs[i] - fs[j]) / dx) ** 2
    w = fs**2 / (gs * (couple.lam - xs))
    t2 = (w[i] + w[j]) * ((gs[i] - gs[j]) / dx)
    q = t1 + t2
    tol = COND_TOL_REL * (1.0 + np.maximum(np.abs(t1), np.abs(t2)))

    violations = q - tol
    worst_idx = int(np.argmax(q))
    pairs_ok = bool(np.all(violations <= 0))
    passed = pairs_ok and g_ok
    witness = None
    if not pairs_ok:
        wv = int(np.argmax(violations))
        witness = (float(xs[i[wv]]), float(xs[j[wv]]))
    return MembershipReport(
        passed=passed,
        check="pairwise",
        worst=float(q[worst_idx]),
        witness=witness,
        n_checked=int(i.size),
        n_skipped=n_skipped,
        g_nonincreasing=g_ok,
    )


def check_membership(couple: FunctionCouple, samples) -> MembershipReport:
    """Certify the pairwise admissibility condition on a finite sample set.

    Requires at least two distinct samples in (0, lambda).  Pairs closer than
    PAIR_SKIP_REL * lambda are skipped.  The result is independent of sample
    order.
    """
    xs = np.asarray(samples, dtype=float).ravel()
    if np.unique(xs).size < 2:
        raise DegenerateSamplesError("need at least 2 distinct sample points")
    return _pairwise_report(couple, xs)


def certify_on_samples(couple: FunctionCouple, samples) -> MembershipReport:
    """Like check_membership, but a single (or fully repeated) sample set
    passes vacuously: the pairwise condition quantifies over x != y only.

    Downstream verifiers use this for k = 1 prefixes.
    """
    xs = np.asarray(samples, dtype=float).ravel()
    if xs.size == 0:
        raise DegenerateSamplesError("empty sample set")
    if np.unique(xs).size < 2:
        fs, gs = couple.evaluate_batch(xs)
        ok = bool(np.all(fs > 0) and np.all(gs > 0))
        return MembershipReport(ok, "pairwise", -np.inf, None, 0, 0, True)
    return _pairwise_report(couple, xs)


def check_necessary_differentiable(couple, samples) -> MembershipReport:
    """Screen a smooth power-family couple with the pointwise necessary
    condition ((ln f)')^2 <= -2/(lambda-x) * (ln g)'.

    A failure proves non-membership; a pass is only a screen.  Tabulated
    couples are rejected.
    """
    ef, eg = couple.power_exponents()
    xs = np.asarray(samples, dtype=float).ravel()
    if xs.size == 0:
        raise DegenerateSamplesError("empty sample set")
    if np.any(xs <= 0) or np.any(xs >= couple.lam):
        raise CoupleDomainError("samples must lie in (0, lambda)")
    u = couple.lam - xs
    lhs = (ef / u) ** 2
    rhs = 2.0 * eg / u**2
    margin = rhs - lhs
    tol = COND_TOL_REL * (1.0 + np.abs(lhs) + np.abs(rhs))
    ok = margin >= -tol
    passed = bool(np.all(ok))
    worst_idx = int(np.argmin(margin))
    witness = None if passed else (float(xs[int(np.argmin(margin + tol))]),)
    return MembershipReport(
        passed=passed,
        check="differentiable",
        worst=float(margin[worst_idx]),
        witness=witness,
        n_checked=int(xs.size),
    )


@dataclass(frozen=True)
class CoupleSpec:
    """Parsed form of the CLI couple string ``family:param[,param][@lambda]``.

    For the tabulated family the parameter slot is a CSV path whose rows are
    ``x,f,g``; the caller resolves it and passes the arrays to :meth:`bind`.
    """

    family: str
    params: tuple
    lam: Optional[float]
    table_path: Optional[str] = None

    def bind(self, lam: Optional[float] = None, table=None) -> FunctionCouple:
        lam = self.lam if lam is None else lam
        if lam is None:
            raise CoupleSpecError("couple spec has no lambda and none was supplied")
        if self.family == TABULATED:
            if table is None:
                raise CoupleSpecError(f"tabulated couple needs its table ({self.table_path!r})")
            return FunctionCouple(TABULATED, lam, (), table)
        return FunctionCouple(self.family, lam, self.params)


def parse_couple_spec(text: str) -> CoupleSpec:
    """Parse ``family:param[,param][@lambda]``, e.g. ``equal-power:2@10``."""
    if not isinstance(text, str) or not text.strip():
        raise CoupleSpecError(f"empty couple spec {text!r}")
    body, lam = text, None
    if "@" in text:
        body, lam_text = text.rsplit("@", 1)
        try:
            lam = float(lam_text)
        except ValueError as exc:
            raise CoupleSpecError(f"bad lambda in couple spec {text!r}") from exc
        if not lam > 0:
            raise CoupleSpecError(f"lambda must be positive in couple spec {text!r}")
    if ":" not in body:
        raise CoupleSpecError(f"couple spec {text!r} needs 'family:params'")
    family, param_text = body.split(":", 1)
    family = family.strip()
    if family not in FAMILIES:
        raise CoupleSpecError(f"unknown family {family!r}; known: {FAMILIES}")
    if family == TABULATED:
        if not param_text:
            raise CoupleSpecError("tabulated spec needs a table path")
        return CoupleSpec(TABULATED, (), lam, table_path=param_text)
    try:
        params = tuple(float(p) for p in param_text.split(",") if p != "")
    except ValueError as exc:
        raise CoupleSpecError(f"bad parameters in couple spec {text!r}") from exc
    if not params:
        raise CoupleSpecError(f"couple spec {text!r} has no parameters")
    _validate_params(family, params)
    return CoupleSpec(family, params, lam)
