"""Singularity analysis: transfer estimates, quasi-powers constants and the
planar-graph constants pipeline.

Floats live only here, as mpmath values at ``DPS`` digits.  Constants that
come from the enumeration of planar graphs are read from a pinned data file
and propagated; every derived value records its formula and inputs.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from decimal import Decimal
from importlib import resources
from typing import Callable

import mpmath
import sympy

DPS = 50


class ConvergenceError(ArithmeticError):
    pass


# ---------------------------------------------------------------------------
# transfer theorem


def _forbidden(alpha) -> bool:
    a = mpmath.mpf(alpha)
    return a <= 0 and a == mpmath.floor(a)


def transfer_estimate(alpha, rho, amplitude, n: int):
    """Leading term of [z^n] amplitude * (1 - z/rho)^{-alpha}."""
    if _forbidden(alpha):
        raise ValueError("alpha must not be 0, -1, -2, ...")
    with mpmath.workdps(DPS):
        a = mpmath.mpf(alpha)
        return mpmath.mpf(amplitude) * mpmath.mpf(n) ** (a - 1) / mpmath.gamma(a) * mpmath.mpf(rho) ** (-n)


def ratio_diagnostic(coefficients, estimate: Callable, n_list) -> list:
    """[(n, observed/predicted)]; ``coefficients`` is indexable by n."""
    out = []
    with mpmath.workdps(DPS):
        for n in n_list:
            c = coefficients[n]
            c = mpmath.mpf(c.numerator) / c.denominator if hasattr(c, "denominator") else mpmath.mpf(c)
            out.append((n, c / estimate(n)))
    return out


def trending_to_one(ratios: list) -> bool:
    """|ratio - 1| non-increasing along the list."""
    gaps = [abs(r - 1) for _, r in ratios]
    return all(b <= a for a, b in zip(gaps, gaps[1:]))


GAMMA_MINUS_3_2 = 4 * sympy.sqrt(sympy.pi) / 3


# ---------------------------------------------------------------------------
# quasi-powers


@dataclass(frozen=True)
class SingularityFunction:
    """rho(u) near u = 1: exact (sympy expression in ``symbol``) or a numeric evaluator."""

    expr: object = None
    symbol: object = None
    evaluator: Callable | None = None
    interval: tuple = (0.5, 1.5)

    def __post_init__(self):
        if (self.expr is None) == (self.evaluator is None):
            raise ValueError("give either a closed form or an evaluator")

    @property
    def exact(self) -> bool:
        return self.expr is not None

    def __call__(self, u):
        if self.exact:
            return sympy.N(self.expr.subs(self.symbol, u), DPS)
        return self.evaluator(mpmath.mpf(u))


def _richardson_derivatives(f: Callable, h0=mpmath.mpf("0.0625"), tol=mpmath.mpf("1e-8"), max_halvings=30):
    """(f(1), f'(1), f''(1)) by Richardson extrapolation of central differences."""
    with mpmath.workdps(DPS):
        one = mpmath.mpf(1)
        f0 = f(one)

        def d1(h):
            return (f(one + h) - f(one - h)) / (2 * h)

        def d2(h):
            return (f(one + h) - 2 * f0 + f(one - h)) / (h * h)

        out = []
        for d in (d1, d2):
            table = []
            h = mpmath.mpf(h0)
            prev = None
            for k in range(max_halvings):
                row = [d(h)]
                for j, old in enumerate(table[-1] if table else []):
                    row.append(row[j] + (row[j] - old) / (4 ** (j + 1) - 1))
                table.append(row)
                best = row[-1]
                if prev is not None and abs(best - prev) <= tol * abs(best):
                    break
                prev = best
                h /= 2
            else:
                raise ConvergenceError("numeric derivative did not converge")
            out.append(best)
        return f0, out[0], out[1]


def quasi_powers_stats(f: SingularityFunction) -> tuple:
    """(mean, variance) coefficients -r'/r and -r''/r - r'/r + (r'/r)^2 at u = 1."""
    if f.exact:
        u = f.symbol
        r0 = f.expr.subs(u, 1)
        r1 = sympy.diff(f.expr, u).subs(u, 1)
        r2 = sympy.diff(f.expr, u, 2).subs(u, 1)
        mean = sympy.radsimp(sympy.simplify(-r1 / r0))
        var = sympy.radsimp(sympy.simplify(-r2 / r0 - r1 / r0 + (r1 / r0) ** 2))
        return sympy.simplify(mean), sympy.simplify(var)
    r0, r1, r2 = _richardson_derivatives(f.evaluator)
    with mpmath.workdps(DPS):
        return -r1 / r0, -r2 / r0 - r1 / r0 + (r1 / r0) ** 2


# ---------------------------------------------------------------------------
# constants table


@dataclass(frozen=True)
class Entry:
    name: str
    value: mpmath.mpf
    kind: str  # pinned | derived
    formula: str = ""
    inputs: tuple = ()
    source: str = ""
    exact: str | None = None
    uncertainty: mpmath.mpf | None = None
    reference: str | None = None
    consistent: bool | None = None

    def as_dict(self, digits: int = 30) -> dict:
        d = {
            "name": self.name,
            "kind": self.kind,
            "decimal": mpmath.nstr(self.value, digits),
        }
        if self.exact:
            d["exact"] = self.exact
        if self.formula:
            d["formula"] = self.formula
        if self.inputs:
            d["inputs"] = list(self.inputs)
        if self.source:
            d["source"] = self.source
        if self.uncertainty is not None:
            d["uncertainty"] = mpmath.nstr(self.uncertainty, 3)
        if self.reference is not None:
            d["reference"] = self.reference
            d["consistent"] = self.consistent
        return d


@dataclass
class ConstantsTable:
    entries: dict = field(default_factory=dict)
    flags: list = field(default_factory=list)
    known: dict = field(default_factory=dict)  # flag name -> explanation

    def __getitem__(self, name: str) -> mpmath.mpf:
        return self.entries[name].value

    def __contains__(self, name: str) -> bool:
        return name in self.entries

    def add(self, e: Entry) -> None:
        self.entries[e.name] = e
        if e.consistent is False:
            self.flags.append(f"{e.name}: {mpmath.nstr(e.value, 8)} vs reference {e.reference}")

    @staticmethod
    def _flag_name(flag: str) -> str:
        return flag.split(":", 1)[0]

    @property
    def unexpected_flags(self) -> list:
        return [f for f in self.flags if self._flag_name(f) not in self.known]

    def report(self, digits: int = 30) -> dict:
        return {
            "entries": [e.as_dict(digits) for e in self.entries.values()],
            "flags": list(self.flags),
            "unexpected_flags": self.unexpected_flags,
        }

    def to_json(self, digits: int = 30) -> str:
        return json.dumps(self.report(digits), indent=2, sort_keys=False)


def half_unit(text: str) -> mpmath.mpf:
    """Half a unit in the last printed digit of a decimal string."""
    exp = Decimal(text).as_tuple().exponent
    return mpmath.mpf(10) ** exp / 2


def load_pinned(path=None) -> dict:
    if path is None:
        text = resources.files("coregf").joinpath("data/pinned_constants.json").read_text()
    else:
        with open(path) as fh:
            text = fh.read()
    doc = json.loads(text)
    if doc.get("format") != "pinned-constants/1":
        raise ValueError("not a pinned-constants document")
    for name, rec in doc["values"].items():
        Decimal(rec["value"])  # validates
    return doc


def _sigma_from_rho(rho):
    # s e^{-s} = rho on the principal branch (s < 1)
    return -mpmath.lambertw(-rho).real


def _derivations() -> list:
    """(name, formula, inputs, function of a value dict) in dependency order."""

    def sigma(v):
        return _sigma_from_rho(1 / v["gamma"])

    def a1(v):
        s = sigma(v)
        return (s - v["mu"]) / (1 - s)

    def a2(v):
        s = sigma(v)
        a = a1(v)
        return (v["mu"] - v["lambda"] + s * a * a + 2 * s * a) / (1 - s)

    def mu_k(v):
        s = sigma(v)
        rho = 1 / v["gamma"]
        d = -rho * v["mu"]
        return (2 * d * mpmath.e ** s + s * s - s + 1) / (1 - s)

    def chi1(v):
        return -sigma(v) * mu_k(v)

    def lam_k(v, c1):
        s = sigma(v)
        return -v["chi_d2"] / s - c1 / s + (c1 / s) ** 2

    g52 = mpmath.gamma(mpmath.mpf(-5) / 2)
    return [
        ("rho_from_gamma", "1/gamma", ("gamma",), lambda v: 1 / v["gamma"], None),
        ("sigma", "s e^{-s} = 1/gamma", ("gamma",), sigma, None),
        ("gamma2", "1/sigma", ("gamma",), lambda v: 1 / sigma(v), "gamma2"),
        ("kappa_from_C5", "C5/Gamma(-5/2)", ("C5",), lambda v: v["C5"] / g52, None),
        ("H5", "C5 (1-sigma)^{5/2}", ("C5", "gamma"), lambda v: v["C5"] * (1 - sigma(v)) ** 2.5, "H5"),
        ("kappa2", "H5/Gamma(-5/2)", ("C5", "gamma"), lambda v: v["C5"] * (1 - sigma(v)) ** 2.5 / g52, "kappa2"),
        ("mu2", "(mu - sigma)/(1 - sigma)", ("mu", "gamma"), lambda v: -a1(v), "mu2"),
        ("lambda2", "-a'' - a' with a = log sigma(y), sigma(y) e^{-y sigma(y)} = rho(y)",
         ("mu", "lambda", "gamma"), lambda v: -a2(v) - a1(v), "lambda2"),
        ("core_mean", "1 - sigma", ("gamma",), lambda v: 1 - sigma(v), "core_mean"),
        ("core_var", "sigma", ("gamma",), sigma, "core_var"),
        ("gamma3", "1/tau3", ("tau3",), lambda v: 1 / v["tau3"], "gamma3"),
        ("kappa3", "K5/Gamma(-5/2)", ("K5",), lambda v: v["K5"] / g52, "kappa3"),
        ("mu3", "-tau3'(1)/tau3", ("tau3", "tau3_d1"), lambda v: -v["tau3_d1"] / v["tau3"], "mu3"),
        ("lambda3", "-tau3''/tau3 - tau3'/tau3 + (tau3'/tau3)^2", ("tau3", "tau3_d1", "tau3_d2"),
         lambda v: -v["tau3_d2"] / v["tau3"] - v["tau3_d1"] / v["tau3"] + (v["tau3_d1"] / v["tau3"]) ** 2,
         "lambda3"),
        ("muK", "(2 rho'(1) e^sigma + sigma^2 - sigma + 1)/(1 - sigma), rho'(1) = -rho mu",
         ("gamma", "mu"), mu_k, "muK"),
        ("kernel_of_connected", "(1 - sigma) muK", ("gamma", "mu"), lambda v: (1 - sigma(v)) * mu_k(v),
         "kernel_of_connected"),
        ("chi_d1_derived", "-sigma muK", ("gamma", "mu"), chi1, "chi_d1"),
        ("lambdaK", "-chi''/sigma - chi'/sigma + (chi'/sigma)^2 with derived chi'(1)",
         ("gamma", "mu", "chi_d2"), lambda v: lam_k(v, chi1(v)), "lambdaK"),
        ("lambdaK_pinned_chi", "same with the pinned chi'(1)", ("gamma", "chi_d1", "chi_d2"),
         lambda v: lam_k(v, v["chi_d1"]), "lambdaK"),
    ]


def _propagate(fn, values: dict, inputs: tuple, widths: dict):
    """Linear propagation of half-unit rounding of the pinned inputs."""
    total = mpmath.mpf(0)
    for name in inputs:
        h = widths[name] / 100
        up = dict(values)
        dn = dict(values)
        up[name] += h
        dn[name] -= h
        total += abs((fn(up) - fn(dn)) / (2 * h)) * widths[name]
    return total


def planar_constants(pinned=None) -> ConstantsTable:
    """Pinned inputs plus every derived planar constant with provenance and consistency flags.

    ``pinned`` is a path to a pinned-constants document, an already-loaded
    document, or None for the packaged file.
    """
    doc = pinned if isinstance(pinned, dict) else load_pinned(pinned)
    table = ConstantsTable(known=dict(doc.get("known_inconsistencies", {})))
    with mpmath.workdps(DPS):
        values = {}
        widths = {}
        for name, rec in doc["values"].items():
            values[name] = mpmath.mpf(rec["value"])
            widths[name] = half_unit(rec["value"])
            table.add(Entry(name, values[name], "pinned", source=rec.get("source", ""),
                            uncertainty=widths[name]))
        refs = doc.get("reference", {})
        for name, formula, inputs, fn, ref_key in _derivations():
            try:
                val = fn(values)
            except (ValueError, ZeroDivisionError) as exc:
                raise ConvergenceError(f"cannot derive {name}: {exc}") from exc
            unc = _propagate(fn, values, inputs, widths)
            ref = refs.get(ref_key) if ref_key else None
            ok = None
            if ref is not None:
                slack = max(5 * 2 * half_unit(ref), unc)
                ok = bool(abs(val - mpmath.mpf(ref)) <= slack)
            table.add(Entry(name, val, "derived", formula, inputs, uncertainty=unc, reference=ref, consistent=ok))
        # pinned rho vs 1/gamma, and pinned kappa vs C5
        for a, b in (("rho", "rho_from_gamma"), ("kappa", "kappa_from_C5")):
            if abs(table[a] - table[b]) > widths[a] + table.entries[b].uncertainty:
                table.flags.append(f"{a}: pinned {mpmath.nstr(table[a], 6)} vs derived {mpmath.nstr(table[b], 8)}")
        # core statistics through the numeric quasi-powers path
        s = table["sigma"]
        xi = SingularityFunction(evaluator=lambda u: s * mpmath.e ** (-s / u) / u)
        m, var = quasi_powers_stats(xi)
        table.add(Entry("core_mean_qp", m, "derived", "quasi-powers on xi(u) = sigma e^{-sigma/u}/u",
                        ("gamma",), reference=refs.get("core_mean"),
                        consistent=bool(abs(m - (1 - s)) < mpmath.mpf("1e-7"))))
        table.add(Entry("core_var_qp", var, "derived", "quasi-powers on xi(u)", ("gamma",),
                        reference=refs.get("core_var"), consistent=bool(abs(var - s) < mpmath.mpf("1e-7"))))
    return table


def attached_tree_constants(k: int, table: ConstantsTable | None = None) -> tuple:
    """(alpha_k, beta_k): mean and variance coefficients of the number of attached k-vertex trees."""
    if k < 1:
        raise ValueError("k >= 1")
    table = planar_constants() if table is None else table
    with mpmath.workdps(DPS):
        s = table["sigma"]
        rho = table["rho_from_gamma"]
        t = mpmath.mpf(k) ** (k - 1) / mpmath.factorial(k) * rho ** k
        alpha = (1 - s) / s * t
        beta = (t * (t * (1 - 2 * k + 4 * s - 2 * k * s * s) + s - s * s)) / (s * s)
        return alpha, beta


def attached_tree_sums(K: int, table: ConstantsTable | None = None) -> tuple:
    """(sum_{k<=K} alpha_k, sum_{k<=K} k alpha_k, tail bound on both)."""
    table = planar_constants() if table is None else table
    with mpmath.workdps(DPS):
        s = table["sigma"]
        rho = table["rho_from_gamma"]
        a = [attached_tree_constants(k, table)[0] for k in range(1, K + 1)]
        s0 = mpmath.fsum(a)
        s1 = mpmath.fsum((k + 1) * v for k, v in enumerate(a))
        # k^{k-1}/k! <= e^k / k^{3/2}, so k alpha_k <= (1-s)/s (e rho)^k / sqrt(k)
        q = mpmath.e * rho
        tail = (1 - s) / s * q ** (K + 1) / (1 - q)
        return s0, s1, tail


def attached_tree_tail(k: int, table: ConstantsTable | None = None):
    """Asymptotic form (1-sigma)/(sigma sqrt(2 pi)) k^{-3/2} (e rho)^k."""
    table = planar_constants() if table is None else table
    with mpmath.workdps(DPS):
        s = table["sigma"]
        rho = table["rho_from_gamma"]
        return (1 - s) / (s * mpmath.sqrt(2 * mpmath.pi)) * mpmath.mpf(k) ** mpmath.mpf(-1.5) * (mpmath.e * rho) ** k


# ---------------------------------------------------------------------------
# maps


def map_constants_report(digits: int = 30) -> list:
    """Exact forms and decimals of the map constants."""
    from . import maps

    c = maps.map_constants()
    stats = maps.quasi_stats_maps()
    with mpmath.workdps(DPS):
        return _map_rows(c, stats, digits)


def _map_rows(c, stats, digits: int) -> list:
    rows = [
        ("sigma", str(c.sigma), c.sigma.to_mpf()),
        ("tau", str(c.tau), c.tau.to_mpf()),
        ("growth2", str(c.growth2), c.growth2.to_mpf()),
        ("growth3", str(c.growth3), c.growth3.to_mpf()),
        ("kappa2", "(2/sqrt(pi)) (2/3)^{5/4}", c.kappa2),
        ("kappa3", "(2/sqrt(pi)) (4 - 4 sqrt(2/3))^{5/2}", c.kappa3),
    ]
    for name, (m, v) in stats.items():
        rows.append((f"{name}_mean", str(m), mpmath.mpf(str(sympy.N(m, DPS)))))
        rows.append((f"{name}_var", str(v), mpmath.mpf(str(sympy.N(v, DPS)))))
    return [{"name": n, "exact": e, "decimal": mpmath.nstr(val, digits)} for n, e, val in rows]


def map_transfer_ratios(n_list) -> dict:
    """Observed/predicted ratios for m_n, h_n and k_n."""
    from . import maps

    N = max(n_list)
    M = maps.map_series_tutte(N)
    H = maps.two_map_series(N)
    K = maps.three_map_series(N)
    c = maps.map_constants()
    with mpmath.workdps(DPS):
        est_m = lambda n: 2 / mpmath.sqrt(mpmath.pi) * mpmath.mpf(n) ** mpmath.mpf(-2.5) * mpmath.mpf(12) ** n
        g2, g3 = c.growth2.to_mpf(), c.growth3.to_mpf()
        est_h = lambda n: c.kappa2 * mpmath.mpf(n) ** mpmath.mpf(-2.5) * g2 ** n
        est_k = lambda n: c.kappa3 * mpmath.mpf(n) ** mpmath.mpf(-2.5) * g3 ** n
        return {
            "maps": ratio_diagnostic(M.coefficient_list(), est_m, n_list),
            "2-maps": ratio_diagnostic(H.coefficient_list(), est_h, n_list),
            "3-maps": ratio_diagnostic(K.coefficient_list(), est_k, n_list),
        }
