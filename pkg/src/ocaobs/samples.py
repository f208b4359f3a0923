"""Small named automata used in the documentation, tests and fixtures."""

from __future__ import annotations

from .core import OPS, Oca
from .strong import job_strong

__all__ = ["job", "univ", "osc", "job_strong"]


def job() -> Oca:
    """Requests ``n >= 1`` items, then produces them one by one.

    Accepts ``(req,n)(prod,n-1)...(prod,0)`` under the obs semantics.
    """
    trans = [("q0", k, "inc", "q0") for k in (0, 1)]
    trans += [("q0", 1, "req", "q1")]
    trans += [("q1", k, "dec", "q2") for k in (0, 1)]
    trans += [("q2", 1, "prod", "q1"), ("q2", 0, "prod", "q3")]
    return Oca(["q0", "q1", "q2", "q3"], ["req", "prod"], "q0", ["q3"], 1, trans)


def univ(alphabet=("req", "prod")) -> Oca:
    """One accepting state with a loop on every action: accepts everything."""
    acts = list(alphabet) + list(OPS)
    return Oca(["u"], alphabet, "u", ["u"], 0, [("u", 0, a, "u") for a in acts])


def osc() -> Oca:
    """``p --inc--> r --dec--> q`` under every test."""
    trans = [("p", k, "inc", "r") for k in (0, 1)] + [("r", k, "dec", "q") for k in (0, 1)]
    return Oca(["p", "r", "q"], ["a"], "p", ["q"], 1, trans)
