"""The Cuntz-state scenario: two inequivalent sources with one restriction to O_inf."""

from __future__ import annotations

import numpy as np

from ..functor import functor_restrict
from ..kernel import Terms
from ..repcore import check_phase, make_cycle_rep
from .core import Case, Check, CheckReport, Context, Engine, SuiteConfig, _run_case, arities_text, check

NAME = "scenario.cuntz_states"
ANCHOR = "\\pi_2(s_n)\\Omega_2=-\\Omega_2"


def _body(ctx: Context, n: int, lam2: complex):
    def body(E: Engine):
        p1, p2 = make_cycle_rep(n, n, 1), make_cycle_rep(n, n, lam2)
        e1, e2 = E.pair(p1, p2)
        omega = e1.encode([()])
        # (a) the distinguishing eigenphase at (s_n, vacuum)
        for ev, lam in ((e1, 1), (e2, lam2)):
            want = Terms(np.ones(1, dtype=bool), np.array([complex(lam)]), omega)
            cex = E.compare(ev, omega, ev.act(n, False, omega), want, f"s_{n} vacuum = {lam} vacuum", n, False)
            if cex:
                return cex
        # (b) the restrictions act identically on every sampled label
        r1, r2 = E.pair(functor_restrict(n, p1), functor_restrict(n, p2))
        X = E.X(r1)
        for j in range(1, ctx.config.jbound + 1):
            for adj in (False, True):
                cex = E.compare(r1, X, r1.act(j, adj, X), r2.act(j, adj, X),
                                f"F_inf,{n}(pi_1)(t_{j}) = F_inf,{n}(pi_2)(t_{j})", j, adj, ev_expected=r2)
                if cex:
                    return cex
        # (c) the vacuum is orthogonal to every range of t_j
        for ev in (r1, r2):
            for j in range(1, ctx.config.jbound + 1):
                t = ev.act(j, True, omega)
                if t.nonzero[0]:
                    return E.counterexample(ev, omega[0], f"t_{j}* vacuum = 0", j, True,
                                            actual=E.term_json(ev, t, 0))
        return None
    return body


def _detail(lam2: complex) -> str:
    if lam2 == 1:
        return "degenerate control: both sources use phase 1, so they agree at (s_n, vacuum)"
    return "inequivalence is witnessed by the eigenphase of s_n at the vacuum"


@check(NAME, ANCHOR)
def _scenario(ctx: Context):
    for n in ctx.config.grid:
        yield Case(make_cycle_rep(n, n, -1).descriptor, arities_text(n=n), _body(ctx, n, -1), _detail(-1),
                   samples=len(ctx.labels(make_cycle_rep(n, n, -1))))


def scenario_cuntz_states(n: int, lam2: complex = -1, config: SuiteConfig | None = None) -> CheckReport:
    """Run the scenario for cyc(n,n,1) against cyc(n,n,lam2) and return its report."""
    lam2 = check_phase(lam2)
    ctx = Context(config or SuiteConfig(grid=(n,)))
    rep = make_cycle_rep(n, n, lam2)
    c = Case(rep.descriptor, arities_text(n=n), _body(ctx, n, lam2), _detail(lam2), samples=len(ctx.labels(rep)))
    return _run_case(ctx, Check(NAME, ANCHOR, lambda _ctx: iter(())), c)
