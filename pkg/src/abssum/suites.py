"""Randomized property suites for the theorem-backed inequalities.

Every sample draws from its own generator ``default_rng([seed, tag, index])``
so results do not depend on evaluation order or thread count.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Callable, Iterable

import numpy as np

from . import inequality as ineq
from .matlin import (
    abs_value,
    hermitian_eig,
    random_complex,
    random_psd,
    random_unitary,
    singular_values,
)
from .schatten import weak_log_majorization_holds, weak_majorization_holds

SUITES = ("lemma", "prop31", "frobenius", "majorization", "invariance")

_TAGS = {name: i for i, name in enumerate(SUITES)}


@dataclass
class SuiteResult:
    name: str
    checks: int = 0
    failures: int = 0
    worst_slack: float = math.inf  # smallest relative slack seen (negative = violation)
    examples: list = field(default_factory=list)  # first few failure descriptions

    @property
    def passed(self) -> bool:
        return self.failures == 0

    def record(self, ok: bool, rel_slack: float, what: str) -> None:
        self.checks += 1
        self.worst_slack = min(self.worst_slack, rel_slack)
        if not ok:
            self.failures += 1
            if len(self.examples) < 5:
                self.examples.append(what)

    def merge(self, other: "SuiteResult") -> None:
        self.checks += other.checks
        self.failures += other.failures
        self.worst_slack = min(self.worst_slack, other.worst_slack)
        room = 5 - len(self.examples)
        self.examples.extend(other.examples[: max(room, 0)])

    def as_dict(self) -> dict:
        return {
            "name": self.name,
            "checks": self.checks,
            "failures": self.failures,
            "worst_relative_slack": self.worst_slack,
            "passed": self.passed,
            "examples": list(self.examples),
        }


def _rel(check: ineq.BoundCheck) -> float:
    return check.slack / max(1.0, abs(check.bound))


def random_contraction(n: int, rng: np.random.Generator) -> np.ndarray:
    z = random_complex((n, n), rng)
    return z / (singular_values(z)[0] * rng.uniform(1.0, 3.0))


def random_test_tuple(m: int, n: int, rng: np.random.Generator) -> np.ndarray:
    """Gaussian tuple with occasional rank-deficient, PSD or rescaled members."""
    stack = random_complex((m, n, n), rng)
    for k in range(m):
        kind = rng.integers(0, 6)
        if kind == 0 and n > 1:
            r = int(rng.integers(1, n))
            stack[k] = random_complex((n, r), rng) @ random_complex((r, n), rng)
        elif kind == 1:
            stack[k] = random_psd(n, rng)
        elif kind == 2:
            stack[k] *= 10.0 ** rng.uniform(-2, 2)
    return stack


def _run(
    name: str, samples: int, seed: int, threads: int, one: Callable[[int, np.random.Generator], SuiteResult]
) -> SuiteResult:
    tag = _TAGS[name]

    def task(i):
        return one(i, np.random.default_rng([seed, tag, i]))

    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            parts = list(pool.map(task, range(samples)))
    else:
        parts = [task(i) for i in range(samples)]
    out = SuiteResult(name)
    for part in parts:
        out.merge(part)
    return out


def trace_contraction_suite(samples: int, seed: int = 0, threads: int = 1) -> SuiteResult:
    """Random PSD X, Y, contraction Q, n <= 6, t in {0.1, 1/(1+sqrt m), 1, 10}."""

    def one(i, rng):
        res = SuiteResult("lemma")
        n = int(rng.integers(1, 7))
        m = int(rng.integers(2, 17))
        t = (0.1, 1.0 / (1.0 + math.sqrt(m)), 1.0, 10.0)[i % 4]
        x = random_psd(n, rng, rank=int(rng.integers(1, n + 1)))
        y = x.copy() if rng.random() < 0.1 else random_psd(n, rng, rank=int(rng.integers(1, n + 1)))
        kind = rng.integers(0, 3)
        q = random_unitary(n, rng) if kind == 0 else random_contraction(n, rng)
        c = ineq.trace_contraction_check(x, y, q, t)
        res.record(c.satisfied, _rel(c), f"sample {i}: n={n} t={t:.4g} slack={c.slack:.3e}")
        return res

    out = _run("lemma", samples, seed, threads, one)
    planted = planted_trace_equality()
    out.record(planted.satisfied and abs(planted.slack) <= 1e-12, _rel(planted), "planted X=Y=Q=I")
    return out


def planted_trace_equality(n: int = 4) -> ineq.BoundCheck:
    eye = np.eye(n)
    return ineq.trace_contraction_check(eye, eye, eye, 1.0)


def frobenius_suite(
    samples: int, seed: int = 0, threads: int = 1, ms: Iterable[int] = (2, 3, 5), ns: Iterable[int] = (2, 4, 6)
) -> SuiteResult:
    """``samples`` random tuples for each (m, n) pair against the sharp Frobenius constant."""
    cells = [(m, n) for m in ms for n in ns]

    def one(i, rng):
        res = SuiteResult("frobenius")
        for m, n in cells:
            c = ineq.frobenius_bound_check(random_test_tuple(m, n, rng))
            res.record(c.satisfied, _rel(c), f"sample {i}: m={m} n={n} ratio={c.value:.12f}")
        return res

    return _run("frobenius", samples, seed, threads, one)


def power_norm_suite(
    samples: int,
    seed: int = 0,
    threads: int = 1,
    powers: Iterable[float] = (0.25, 0.5, 1.0),
    qs: Iterable = (1, 2, 3, "inf"),
) -> SuiteResult:
    """Power-function norm bound and the geometric-mean bound on random tuples."""
    powers, qs = tuple(powers), tuple(qs)

    def one(i, rng):
        res = SuiteResult("prop31")
        m = (2, 3, 5)[i % 3]
        n = int(rng.integers(2, 6))
        stack = random_test_tuple(m, n, rng)
        for a in powers:
            for q in qs:
                c = ineq.power_norm_check(stack, q, a)
                res.record(c.satisfied, _rel(c), f"sample {i}: prop m={m} a={a} q={q} slack={c.slack:.3e}")
                g = ineq.geomean_bound_check(stack, q, a)
                res.record(g.satisfied, _rel(g), f"sample {i}: geomean m={m} a={a} q={q} slack={g.slack:.3e}")
        return res

    return _run("prop31", samples, seed, threads, one)


def majorization_suite(samples: int, seed: int = 0, threads: int = 1) -> SuiteResult:
    """Intermediate steps: block positivity, (log-)majorization, direct sums."""

    def one(i, rng):
        res = SuiteResult("majorization")
        m = (2, 3, 5)[i % 3]
        n = int(rng.integers(2, 6))
        stack = random_test_tuple(m, n, rng)
        a = stack[0]
        b = ineq.block_positivity_check(a)
        res.record(b.satisfied, b.slack, f"sample {i}: block matrix min eig {-b.value:.3e}")

        s_vals = singular_values(stack.sum(axis=0))
        lam_p = np.clip(hermitian_eig(ineq.abs_adjoint_sum(stack)).eigenvalues, 0, None)
        lam_q = np.clip(hermitian_eig(ineq.abs_sum(stack)).eigenvalues, 0, None)
        geo = np.sqrt(lam_p * lam_q)
        # singular values at roundoff level are zeros of a rank-deficient sum
        floor = 1e-12 * max(s_vals[0], geo[0], 1e-300)
        ok = weak_log_majorization_holds(s_vals, geo, zero=floor)
        res.record(ok, 0.0 if ok else -1.0, f"sample {i}: log-majorization m={m} n={n}")
        for power in (0.25, 0.5, 1.0):
            ok = weak_majorization_holds(s_vals**power, geo**power)
            res.record(ok, 0.0 if ok else -1.0, f"sample {i}: majorization a={power}")

        psd = np.stack([abs_value(x) for x in stack])
        for q in (1, 2, 3, "inf"):
            c1, c2 = ineq.direct_sum_checks(psd, q)
            res.record(c1.satisfied, _rel(c1), f"sample {i}: direct sum vs sum q={q}")
            res.record(c2.satisfied, _rel(c2), f"sample {i}: sum of norms vs direct sum q={q}")
        return res

    return _run("majorization", samples, seed, threads, one)


def invariance_suite(samples: int, seed: int = 0, threads: int = 1) -> SuiteResult:
    """Scale and unitary invariance of the norm ratio; PSD tuples give ratio 1."""

    def one(i, rng):
        res = SuiteResult("invariance")
        m = (2, 3, 5)[i % 3]
        n = int(rng.integers(2, 6))
        p = (1, 1.5, 2, 3, "inf")[i % 5]
        stack = random_test_tuple(m, n, rng)
        base = ineq.ratio(stack, p).ratio
        c = 10.0 ** rng.uniform(-3, 3)
        scaled = ineq.ratio(c * stack, p).ratio
        err = abs(scaled - base) / base if base else abs(scaled)
        res.record(err <= 1e-10, -err, f"sample {i}: scale c={c:.3g} rel err {err:.2e}")

        w, v = random_unitary(n, rng), random_unitary(n, rng)
        rotated = ineq.ratio(np.einsum("ij,kjl,lr->kir", w, stack, v), p).ratio
        err = abs(rotated - base) / base if base else abs(rotated)
        res.record(err <= 1e-9, -err, f"sample {i}: unitary rel err {err:.2e}")

        psd = np.stack([random_psd(n, rng, rank=int(rng.integers(1, n + 1))) for _ in range(m)])
        one_ = ineq.ratio(psd, p).ratio
        res.record(abs(one_ - 1.0) <= 1e-10, -abs(one_ - 1.0), f"sample {i}: PSD ratio {one_!r}")
        return res

    return _run("invariance", samples, seed, threads, one)


RUNNERS = {
    "lemma": trace_contraction_suite,
    "prop31": power_norm_suite,
    "frobenius": frobenius_suite,
    "majorization": majorization_suite,
    "invariance": invariance_suite,
}
