"""Simulation of the i.i.d. attached-tree model.

A random map (or connected planar graph) with a core of m edges is modelled
by m independent tree sizes drawn from the limiting law of the size of a
tree hanging from a core edge.  Per replicate we draw the multinomial
occupation counts X_j directly, which gives both the maximum and the
Poisson statistics without materialising m samples.
"""

from __future__ import annotations

import csv
import io
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction

import mpmath
import numpy as np

from .algebraic import QSqrt6
from .oracle import default_workers

BASES = ("maps", "graphs")
TAIL_TARGET = 1e-9


# ---------------------------------------------------------------------------
# laws


@dataclass(frozen=True)
class TreeSizeLaw:
    """P(Y = k) for 1 <= k <= k_cut tabulated, plus a geometric envelope beyond."""

    base: str
    probs: tuple  # float64 probabilities for k = 1..k_cut
    tail_mass: float  # P(Y > k_cut)
    ratio: float  # envelope ratio r: P(Y = k) <= amp * r^k for k > k_cut
    amp: float
    exact: tuple = field(default=(), repr=False)  # exact table when available
    sigma: float = 0.0
    rho: float = 0.0

    @property
    def k_cut(self) -> int:
        return len(self.probs)

    def pmf(self, k: int) -> float:
        return _pmf(self.base, k, self.sigma, self.rho)

    def tail(self, k: int) -> float:
        """P(Y >= k)."""
        if k <= 1:
            return 1.0
        if k > self.k_cut:
            return float(mpmath.fsum(_pmf(self.base, j, self.sigma, self.rho) for j in range(k, k + 400)))
        return float(self.tail_mass + math.fsum(self.probs[k - 1:]))

    def check(self, tol: float = 1e-12) -> None:
        total = math.fsum(self.probs) + self.tail_mass
        if abs(total - 1) > tol:
            raise ValueError(f"law not normalised: {total}")
        direct = math.fsum(self.pmf(k) for k in range(self.k_cut + 1, self.k_cut + 400))
        if abs(direct - self.tail_mass) > tol:
            raise ValueError("tail mass does not match the summed tail")


def _pmf(base: str, k: int, sigma: float, rho: float) -> float:
    with mpmath.workdps(30):
        if base == "maps":
            cat = mpmath.exp(mpmath.loggamma(2 * k + 1) - 2 * mpmath.loggamma(k + 1)) / (k + 1)
            return float((5 + 2 * mpmath.sqrt(6)) * cat / mpmath.mpf(12) ** k)
        lt = (k - 1) * mpmath.log(k) - mpmath.loggamma(k + 1) + k * mpmath.log(rho)
        return float(mpmath.exp(lt) / sigma)


def maps_law(tail_target: float = TAIL_TARGET) -> TreeSizeLaw:
    """beta_k = (5 + 2 sqrt 6) C_k 12^{-k}; exact in Q(sqrt 6)."""
    unit = QSqrt6(5, 2)
    exact = []
    remaining = QSqrt6(1)
    k = 0
    while True:
        k += 1
        b = unit * Fraction(math.comb(2 * k, k), (k + 1) * 12 ** k)
        exact.append(b)
        remaining = remaining - b
        if float(remaining) < tail_target:
            break
    sigma = float(QSqrt6(5, -2))
    # C_k 4^{-k} k^{3/2} increases to 1/sqrt(pi)
    amp = (5 + 2 * math.sqrt(6)) / math.sqrt(math.pi) * (k + 1) ** -1.5
    return TreeSizeLaw("maps", tuple(float(b) for b in exact), float(remaining), 1 / 3, amp,
                       exact=tuple(exact), sigma=sigma)


def graphs_law(tail_target: float = TAIL_TARGET, table=None) -> TreeSizeLaw:
    """k^{k-1}/k! rho^k / sigma with the pinned planar constants."""
    from .asymptotics import planar_constants

    table = planar_constants() if table is None else table
    with mpmath.workdps(50):
        sigma = table["sigma"]
        rho = table["rho_from_gamma"]
        probs = []
        remaining = mpmath.mpf(1)
        k = 0
        while True:
            k += 1
            p = mpmath.mpf(k) ** (k - 1) / mpmath.factorial(k) * rho ** k / sigma
            probs.append(p)
            remaining -= p
            if remaining < tail_target:
                break
        q = float(mpmath.e * rho)
        # k^{k-1} e^{-k}/k! k^{3/2} increases to 1/sqrt(2 pi)
        amp = 1 / (float(sigma) * math.sqrt(2 * math.pi)) * (k + 1) ** -1.5
        return TreeSizeLaw("graphs", tuple(float(p) for p in probs), float(remaining), q, amp,
                           sigma=float(sigma), rho=float(rho))


def law_for(base: str) -> TreeSizeLaw:
    if base == "maps":
        return maps_law()
    if base == "graphs":
        return graphs_law()
    raise ValueError(f"unknown base {base!r}")


# ---------------------------------------------------------------------------
# threshold


def gamma_constant(base: str, variant: str = "iid", law: TreeSizeLaw | None = None) -> float:
    """Constant C in C m gamma^{-3/2} r^gamma = 1.

    ``iid`` uses the tail constant of the law itself; ``size`` the one for a
    structure with m edges or vertices.
    """
    if base == "maps":
        sigma = float(QSqrt6(5, -2))
        return 1 / (sigma * math.sqrt(math.pi)) if variant == "iid" else (6 + 2 * math.sqrt(6)) / math.sqrt(math.pi)
    law = graphs_law() if law is None else law
    c = 1 / (law.sigma * math.sqrt(2 * math.pi))
    return c if variant == "iid" else (1 - law.sigma) * c


def base_ratio(base: str, law: TreeSizeLaw | None = None) -> float:
    if base == "maps":
        return 1 / 3
    law = graphs_law() if law is None else law
    return law.ratio


def solve_gamma(m: float, base: str = "maps", constant: float | None = None, ratio: float | None = None) -> float:
    """Root of constant * m * g^{-3/2} * ratio^g = 1 by bisection."""
    if m < 2:
        raise ValueError("m >= 2")
    c = gamma_constant(base) if constant is None else constant
    r = base_ratio(base) if ratio is None else ratio
    if not (0 < r < 1) or c <= 0:
        raise ValueError("need 0 < ratio < 1 and constant > 0")
    lr = math.log(r)
    target = math.log(c * m)

    def f(g):
        return target - 1.5 * math.log(g) + g * lr

    lo, hi = 1e-12, 1.0
    while f(hi) > 0:
        hi *= 2
        if hi > 1e6:
            raise ArithmeticError("cannot bracket the threshold")
    if f(lo) < 0:
        raise ArithmeticError("cannot bracket the threshold")
    for _ in range(200):
        mid = (lo + hi) / 2
        if f(mid) > 0:
            lo = mid
        else:
            hi = mid
        if hi - lo < 1e-13 * hi:
            break
    return (lo + hi) / 2


def reference_cdf(base: str, x: float, law: TreeSizeLaw | None = None) -> float:
    """Limit of P(max < x + gamma): exp(-sum_{j>=0} r^{x+j})."""
    if base == "maps":
        return math.exp(-(3.0 ** (1 - x)) / 2)
    q = base_ratio(base, law)
    return math.exp(-(q ** x) / (1 - q))


# ---------------------------------------------------------------------------
# sampling


def _sample_tail(rng: np.random.Generator, law: TreeSizeLaw, count: int) -> list:
    """Rejection sampling above k_cut from the envelope amp * r^k."""
    out = []
    r = law.ratio
    while len(out) < count:
        k = law.k_cut + int(rng.geometric(1 - r))
        env = law.amp * r ** k
        p = law.pmf(k)
        if p > env * (1 + 1e-9):
            raise ArithmeticError("envelope violated")
        if rng.random() * env < p:
            out.append(k)
    return out


def _one_rep(law: TreeSizeLaw, m: int, seed_seq: np.random.SeedSequence, lo: int, hi: int):
    """(max, counts of j for lo <= j <= hi, number of tail draws)."""
    rng = np.random.Generator(np.random.PCG64(seed_seq))
    p = np.array(law.probs + (law.tail_mass,), dtype=np.float64)
    p /= p.sum()
    counts = rng.multinomial(m, p)
    table = counts[:-1]
    extra = _sample_tail(rng, law, int(counts[-1])) if counts[-1] else []
    nz = np.nonzero(table)[0]
    mx = int(nz[-1]) + 1 if nz.size else 0
    if extra:
        mx = max(mx, max(extra))
    window = np.zeros(hi - lo + 1, dtype=np.int64)
    for j in range(lo, hi + 1):
        if j <= law.k_cut:
            window[j - lo] = table[j - 1]
        else:
            window[j - lo] = sum(1 for e in extra if e == j)
    return mx, window, int(counts[-1])


def _run_chunk(args):
    law, m, seqs, lo, hi = args
    return [_one_rep(law, m, s, lo, hi) for s in seqs]


def simulate(law: TreeSizeLaw, m: int, reps: int, seed: int, lo: int, hi: int, workers: int | None = None):
    """Arrays (maxima, window counts, tail draws) for ``reps`` replicates; independent of ``workers``."""
    if m < 1 or reps < 1:
        raise ValueError("m, reps >= 1")
    seqs = np.random.SeedSequence(seed).spawn(reps)
    workers = default_workers() if workers is None else workers
    size = max(1, -(-reps // max(1, workers)))
    jobs = [(law, m, seqs[i:i + size], lo, hi) for i in range(0, reps, size)]
    if workers > 1 and len(jobs) > 1:
        with ProcessPoolExecutor(max_workers=workers) as ex:
            parts = list(ex.map(_run_chunk, jobs))
    else:
        parts = [_run_chunk(j) for j in jobs]
    rows = [r for part in parts for r in part]
    maxima = np.array([r[0] for r in rows], dtype=np.int64)
    window = np.stack([r[1] for r in rows])
    tails = np.array([r[2] for r in rows], dtype=np.int64)
    return maxima, window, tails


# ---------------------------------------------------------------------------
# experiments


@dataclass(frozen=True)
class ExperimentResult:
    base: str
    m: int
    reps: int
    seed: int
    gamma: float
    levels: tuple  # integer thresholds k
    offsets: tuple  # x = k - gamma
    empirical: tuple  # fraction of reps with max < k
    reference: tuple  # limit law at x
    exact: tuple  # (1 - P(Y >= k))^m
    stderr: tuple
    tail_draws: int

    @property
    def sup_discrepancy(self) -> float:
        return max(abs(a - b) for a, b in zip(self.empirical, self.reference))

    @property
    def sup_discrepancy_exact(self) -> float:
        return max(abs(a - b) for a, b in zip(self.empirical, self.exact))

    @property
    def limit_gap(self) -> float:
        """Distance between the exact finite-m law and the limit law; no sampling involved."""
        return max(abs(a - b) for a, b in zip(self.exact, self.reference))

    def rows(self) -> list:
        return [
            {"k": k, "x": x, "empirical": e, "reference": r, "exact": ex, "stderr": s}
            for k, x, e, r, ex, s in zip(self.levels, self.offsets, self.empirical, self.reference,
                                         self.exact, self.stderr)
        ]

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["x", "k", "empirical", "reference", "exact", "stderr"])
        for r in self.rows():
            w.writerow([f"{r['x']:.12f}", r["k"], f"{r['empirical']:.12f}", f"{r['reference']:.12f}",
                        f"{r['exact']:.12f}", f"{r['stderr']:.12f}"])
        return buf.getvalue()


def _levels(gamma: float, width: float) -> list:
    return [k for k in range(max(1, math.ceil(gamma - width)), math.floor(gamma + width) + 1)]


def sample_max_experiment(law: TreeSizeLaw, m: int, reps: int, seed: int, width: float = 4.0,
                          workers: int | None = None) -> ExperimentResult:
    """Empirical P(max < k) at integer k with |k - gamma(m)| <= width."""
    gamma = solve_gamma(m, law.base, gamma_constant(law.base, law=law), law.ratio) if m >= 2 else 1.0
    levels = _levels(gamma, width) if m >= 2 else list(range(1, law.k_cut + 2))
    maxima, _, tails = simulate(law, m, reps, seed, 1, 1, workers)
    emp, ref, exact, se = [], [], [], []
    for k in levels:
        f = float(np.mean(maxima < k))
        emp.append(f)
        se.append(math.sqrt(max(f * (1 - f), 1e-300) / reps))
        ref.append(reference_cdf(law.base, k - gamma, law))
        exact.append((1 - law.tail(k)) ** m)
    return ExperimentResult(law.base, m, reps, seed, gamma, tuple(levels), tuple(k - gamma for k in levels),
                            tuple(emp), tuple(ref), tuple(exact), tuple(se), int(tails.sum()))


@dataclass(frozen=True)
class PoissonRow:
    j: int
    lemma_mean: float  # r^{j - gamma}
    exact_mean: float  # m P(Y = j)
    empirical_mean: float
    tv_lemma: float
    tv_exact: float


@dataclass(frozen=True)
class PoissonReport:
    base: str
    m: int
    reps: int
    seed: int
    gamma: float
    rows: tuple
    correlations: tuple  # (j, r(X_j, X_{j+1}))

    def row(self, j: int) -> PoissonRow:
        for r in self.rows:
            if r.j == j:
                return r
        raise KeyError(j)

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["j", "lemma_mean", "exact_mean", "empirical_mean", "tv_lemma", "tv_exact"])
        for r in self.rows:
            w.writerow([r.j, f"{r.lemma_mean:.12f}", f"{r.exact_mean:.12f}", f"{r.empirical_mean:.12f}",
                        f"{r.tv_lemma:.12f}", f"{r.tv_exact:.12f}"])
        return buf.getvalue()


def _poisson_tv(samples: np.ndarray, mean: float) -> float:
    top = int(samples.max()) + 30
    emp = np.bincount(samples, minlength=top + 1)[: top + 1] / samples.size
    ks = np.arange(top + 1)
    pois = np.array([math.exp(-mean + k * math.log(mean) - math.lgamma(k + 1)) if mean > 0 else float(k == 0)
                     for k in ks])
    return 0.5 * float(np.abs(emp - pois).sum() + max(0.0, 1 - pois.sum()))


def poisson_count_check(law: TreeSizeLaw, m: int, reps: int, seed: int, width: int = 2,
                        workers: int | None = None) -> PoissonReport:
    """Counts X_j for j near gamma(m) against Poisson laws; TV distances and neighbour correlations."""
    gamma = solve_gamma(m, law.base, gamma_constant(law.base, law=law), law.ratio)
    lo = max(1, math.ceil(gamma) - width)
    hi = math.ceil(gamma) + width
    _, window, _ = simulate(law, m, reps, seed, lo, hi, workers)
    rows = []
    for j in range(lo, hi + 1):
        col = window[:, j - lo]
        lm = law.ratio ** (j - gamma)
        em = m * law.pmf(j)
        rows.append(PoissonRow(j, lm, em, float(col.mean()), _poisson_tv(col, lm), _poisson_tv(col, em)))
    cors = []
    for j in range(lo, hi):
        a = window[:, j - lo].astype(float)
        b = window[:, j + 1 - lo].astype(float)
        if a.std() == 0 or b.std() == 0:
            cors.append((j, 0.0))
        else:
            cors.append((j, float(np.corrcoef(a, b)[0, 1])))
    return PoissonReport(law.base, m, reps, seed, gamma, tuple(rows), tuple(cors))
