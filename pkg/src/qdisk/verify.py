"""Self-check suites run by ``qdisk verify``.

Every suite returns a SuiteReport; random inputs come from a seeded
generator so that identical invocations give identical reports.
"""

from __future__ import annotations

import math
import time
from dataclasses import asdict, dataclass, field

from .combinatorics import (
    enumerate_preimage,
    inversion_poly,
    inversions,
    multi_indices_upto,
    multinomial,
    q_multinomial_poly,
    sigma,
    word_stats,
)
from .deformation import (
    alpha_with_inversions,
    canonical_split,
    dmul,
    dnorm,
    fiber_eval,
    omega,
    rebuild,
)
from .free_series import evaluate_free, fmul, fnorm, fock_tuple, opnorm, vacuum_norm
from .quantum_series import QContext, QSeries, normal_order, qmul, qnorm, weight
from .quotient import (
    QuotientProblem,
    closed_form_monomial,
    section_kappa,
    section_norm,
    solve_quotient,
    verify_ideal,
)
from .sampling import random_free, random_q, random_defo, rng
from .scalars import I, parse_scalar
from .starprod import poisson, star, star_fiber_compare, u_section_check

__all__ = ["SUITES", "SuiteReport", "VerifyConfig", "run_verify"]

SUITES = ("combinatorics", "norms", "quotient", "deformation", "star", "fock")

LIMITS = {"n_max": 4, "k_max": 8, "cases": 10_000, "order": 10, "depth": 6}


@dataclass
class VerifyConfig:
    seed: int = 0
    n_max: int = 3
    k_max: int = 6
    cases: int = 100
    order: int = 6
    depth: int = 4
    tol: float = 1e-9
    qs: tuple = ("1/2", "2", "3/5+4/5*i", "3/4+i")

    def validate(self):
        for key, top in LIMITS.items():
            val = getattr(self, key)
            if not 1 <= val <= top:
                raise ValueError(f"config {key}={val} outside supported range [1, {top}]")
        if not self.tol > 0:
            raise ValueError("tol must be positive")

    def contexts(self, n: int):
        return [QContext(n, parse_scalar(q)) for q in self.qs]


@dataclass
class SuiteReport:
    name: str
    cases: int = 0
    passed: int = 0
    max_deviation: float = 0.0
    wall_time: float = 0.0
    seed: int = 0
    failures: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return self.passed == self.cases

    def check(self, ok: bool, deviation: float = 0.0, label=None):
        self.cases += 1
        self.passed += bool(ok)
        if math.isfinite(deviation):
            self.max_deviation = max(self.max_deviation, float(deviation))
        else:
            self.max_deviation = math.inf
        if not ok and len(self.failures) < 5:
            self.failures.append(str(label))

    def to_dict(self, timing: bool = False) -> dict:
        d = asdict(self)
        d["ok"] = self.ok
        if not timing:
            d.pop("wall_time")
        return d


def _rel(a: float, b: float) -> float:
    scale = max(abs(a), abs(b))
    return 0.0 if scale == 0 else abs(a - b) / scale


def _le(lhs: float, rhs: float, slack: float) -> tuple[bool, float]:
    excess = max(0.0, lhs - rhs)
    rel = excess / max(abs(rhs), 1e-300)
    return lhs <= rhs * (1 + slack) + slack, rel


# --- suites -------------------------------------------------------------------


def _suite_combinatorics(cfg: VerifyConfig, rep: SuiteReport):
    for n in range(1, cfg.n_max + 1):
        for k in multi_indices_upto(n, cfg.k_max):
            words = enumerate_preimage(k)
            rep.check(len(words) == multinomial(k), label=("count", k))
            inv = inversion_poly(k)
            rep.check(inv == q_multinomial_poly(k), label=("inv", k))
            rep.check(len(set(words)) == len(words) and words[0] == tuple(sorted(words[0])),
                      label=("distinct", k))
            rep.check(max(inversions(w) for w in words) == sigma(k, k), label=("maxinv", k))


def _suite_norms(cfg: VerifyConfig, rep: SuiteReport):
    gen = rng(cfg.seed)
    for n in range(1, cfg.n_max + 1):
        for ctx in cfg.contexts(n):
            for k in multi_indices_upto(n, min(cfg.k_max, 7)):
                w = weight(k, ctx, "w", squared=True)
                rep.check(w == weight(k, ctx, "w_bruteforce", squared=True), label=("weight", k))
    rho, tau = 0.7, 1.6
    for _ in range(cfg.cases):
        n = int(gen.integers(1, cfg.n_max + 1))
        f = random_free(gen, n, 5)
        g = random_free(gen, n, 5)
        chain = [
            (fnorm(f, "taylor", rho), fnorm(f, "universal", rho, tau)),
            (fnorm(f, "universal", rho, tau), fnorm(f, "taylor", rho * tau)),
            (fnorm(f, "ball_bullet", rho), fnorm(f, "ball_circ", rho)),
            (fnorm(f, "ball_sup", rho), fnorm(f, "ball_bullet", rho)),
            (fnorm(f, "taylor", rho), fnorm(f, "ball_bullet", rho * math.sqrt(n))),
        ]
        for lhs, rhs in chain:
            ok, dev = _le(lhs, rhs, 1e-12)
            rep.check(ok, dev, label="chain")
        fg = fmul(_recap(f, 10), _recap(g, 10))
        for fam in ("taylor", "universal", "ball_bullet", "ball_circ"):
            ok, dev = _le(fnorm(fg, fam, rho, tau), fnorm(f, fam, rho, tau) * fnorm(g, fam, rho, tau), cfg.tol)
            rep.check(ok, dev, label=("submult", fam))
        ctx = QContext(n, parse_scalar(cfg.qs[int(gen.integers(len(cfg.qs)))]))
        a, b = random_q(gen, n, 4, cap=8), random_q(gen, n, 4, cap=8)
        ab = qmul(a, b, ctx)
        for fam in ("polydisk", "ball"):
            ok, dev = _le(qnorm(ab, ctx, fam, rho), qnorm(a, ctx, fam, rho) * qnorm(b, ctx, fam, rho), cfg.tol)
            rep.check(ok, dev, label=("qsubmult", fam))
        dev = _rel(qnorm(a, ctx, "ball", rho), qnorm(a, ctx, "ball_alt", rho))
        rep.check(dev <= 1e-12, dev, label="ball_alt")


def _recap(f, cap):
    # widen the degree cap so products are never truncated
    return type(f)(f.terms, f.n, cap)


def _suite_quotient(cfg: VerifyConfig, rep: SuiteReport):
    gen = rng(cfg.seed)
    rho = 0.8
    for n in range(1, cfg.n_max + 1):
        for ctx in cfg.contexts(n):
            for k in multi_indices_upto(n, min(cfg.k_max, 6)):
                target = QSeries({k: 1}, n, sum(k))
                for geo in ("polydisk", "ball"):
                    res = solve_quotient(QuotientProblem(target, ctx, rho, geo))
                    expected = closed_form_monomial(k, ctx, geo, rho)
                    dev = max(res.rel_gap, _rel(res.oracle, expected))
                    ok = dev <= cfg.tol and res.max_residual <= 1e-12
                    rep.check(ok, dev, label=("oracle", geo, k))
                    sec = section_kappa(k, ctx, geo)
                    image = normal_order(sec, ctx)
                    rep.check(image == target, label=("pi_kappa", geo, k))
                    dev = _rel(section_norm(k, ctx, geo, rho), expected)
                    rep.check(dev <= 1e-12, dev, label=("kappa_norm", geo, k))
            if n >= 2:
                for _ in range(max(1, cfg.cases // 10)):
                    i, j = sorted(int(x) for x in gen.choice(range(1, n + 1), size=2, replace=False))
                    p1 = random_free(gen, n, 3, exact=True)
                    p2 = random_free(gen, n, 3, exact=True)
                    rep.check(verify_ideal(ctx, (i, j), p1, p2), label=("ideal", i, j))


def _suite_deformation(cfg: VerifyConfig, rep: SuiteReport):
    gen = rng(cfg.seed)
    for n in range(1, cfg.n_max + 1):
        for k in multi_indices_upto(n, cfg.k_max):
            for m in range(sigma(k, k) + 1):
                st = word_stats(alpha_with_inversions(k, m), n)
                rep.check(st.p == k and st.m == m and st.s <= n + 2, label=("alpha", k, m))
    n_om, k_om, p_om = min(cfg.n_max, 2), min(cfg.k_max, 3), 8
    ks = multi_indices_upto(n_om, k_om)
    for k in ks:
        for l in ks:
            s_lk = sigma(l, k)
            for p in range(-p_om, p_om + 1):
                wkp = abs(omega(k, p))
                for s in range(-p_om, p_om + 1):
                    lhs = abs(omega(tuple(a + b for a, b in zip(k, l)), p + s - s_lk))
                    rep.check(lhs <= wkp + abs(omega(l, s)), label=("omega", k, l, p, s))
    rho, tau = 0.6, 1.5
    for _ in range(cfg.cases):
        n = int(gen.integers(1, cfg.n_max + 1))
        a = random_defo(gen, n, 3, 6, cap=8, exact=True)
        b = random_defo(gen, n, 3, 6, cap=8, exact=True)
        ab = dmul(a, b)
        ok, dev = _le(dnorm(ab, rho, tau), dnorm(a, rho, tau) * dnorm(b, rho, tau), cfg.tol)
        rep.check(ok, dev, label="dnorm_submult")
        rep.check(rebuild(canonical_split(a), n, a.cap, a.zwin) == a, label="split")
        ctx = QContext(n, parse_scalar(cfg.qs[int(gen.integers(len(cfg.qs)))]))
        lhs = fiber_eval(ab, ctx)
        rhs = qmul(fiber_eval(a, ctx), fiber_eval(b, ctx), ctx)
        rep.check(lhs == rhs, label="fiber_hom")


def _suite_star(cfg: VerifyConfig, rep: SuiteReport):
    gen = rng(cfg.seed)
    N = cfg.order
    for n in range(2, max(cfg.n_max, 2) + 1):
        for i in range(1, n + 1):
            for j in range(1, n + 1):
                xi = QSeries({tuple(int(t == i - 1) for t in range(n)): 1}, n, 2)
                xj = QSeries({tuple(int(t == j - 1) for t in range(n)): 1}, n, 2)
                prod = star(xi, xj, N)
                k = tuple(x + y for x, y in zip(next(iter(xi.terms)), next(iter(xj.terms))))
                s = 1 if i > j else 0
                ok = all(
                    prod[e] == QSeries({k: (-I * s) ** e / math.factorial(e)}, n, 2) for e in range(N + 1)
                )
                rep.check(ok, label=("relation", i, j))
    for _ in range(cfg.cases):
        n = int(gen.integers(2, max(cfg.n_max, 2) + 1))
        f, g, w = (random_q(gen, n, 4, terms=3, cap=12, exact=True) for _ in range(3))
        left = star(star(f, g, N), w, N)
        right = star(f, star(g, w, N), N)
        rep.check(all(left[e] == right[e] for e in range(N + 1)), label="assoc")
        fg, gf = star(f, g, 1), star(g, f, 1)
        rep.check((fg[1] - gf[1]) == poisson(f, g).scale(I), label="h1")
        for h in (0.1, 1.0):
            dev = star_fiber_compare(f, g, h)
            rep.check(dev <= 1e-10, dev, label=("fiber", h))
    for n in range(1, cfg.n_max + 1):
        for k in multi_indices_upto(n, min(cfg.k_max, 6)):
            rep.check(u_section_check(k, min(N, 4)), label=("u_k", k))


def _suite_fock(cfg: VerifyConfig, rep: SuiteReport):
    gen = rng(cfg.seed)
    rho = 0.9
    for _ in range(max(1, cfg.cases // 5)):
        n = int(gen.integers(1, min(cfg.n_max, 3) + 1))
        depth = int(gen.integers(2, cfg.depth + 1))
        f = random_free(gen, n, depth - 1, terms=6)
        M = evaluate_free(f, fock_tuple(n, rho, depth))
        lower = fnorm(f, "ball_sup", rho)
        vac = vacuum_norm(M)
        est = max(opnorm(M, iters=500, tol=1e-12), vac)
        upper = fnorm(f, "ball_bullet", rho)
        ok1, d1 = _le(lower, vac, 1e-12)
        ok2, d2 = _le(est, upper, 1e-8)
        rep.check(ok1, d1, label="vacuum_lower")
        rep.check(ok2, d2, label="power_upper")


_RUNNERS = {
    "combinatorics": _suite_combinatorics,
    "norms": _suite_norms,
    "quotient": _suite_quotient,
    "deformation": _suite_deformation,
    "star": _suite_star,
    "fock": _suite_fock,
}


def run_verify(suite: str, config: VerifyConfig | None = None) -> list[SuiteReport]:
    """Run one suite (or ``all``) and return its reports."""
    cfg = config or VerifyConfig()
    cfg.validate()
    names = SUITES if suite == "all" else (suite,)
    reports = []
    for name in names:
        if name not in _RUNNERS:
            raise ValueError(f"unknown suite {name!r}; choose from {', '.join(SUITES)} or all")
        rep = SuiteReport(name, seed=cfg.seed)
        start = time.perf_counter()
        _RUNNERS[name](cfg, rep)
        rep.wall_time = time.perf_counter() - start
        reports.append(rep)
    return reports
