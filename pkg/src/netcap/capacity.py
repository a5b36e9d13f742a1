"""Node-capability schemes and the analytic capacity/cost evaluators.

All four schemes distribute the same total budget, fixed at twice the
edge count (the sum of all degrees): uniform (uc), degree-proportional
(dc), betweenness-proportional (bc, always from shortest-path
betweenness) and effective-betweenness-proportional (ebc, from the
profile of whichever routing algorithm it will run under).  The
critical packet-generating rate of a design is

    rc = min_i  c(i) * n(n-1) / b(i)

with b the effective betweenness under the design's routing algorithm;
the cost proxy is the largest assigned capability.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .graphs import Graph
from .routing import EFR, SPR, BetweennessProfile, RoutingSystem

UC = "uc"
DC = "dc"
BC = "bc"
EBC = "ebc"
SCHEMES = (UC, DC, BC, EBC)

CLOSED_FORM_RC_COMBOS = ((UC, SPR), (UC, EFR), (BC, SPR), (EBC, EFR))


@dataclass(frozen=True)
class CapabilityAssignment:
    """Per-node service capability (packets per step) summing to 2m."""

    scheme: str
    c: np.ndarray
    source_algorithm: str | None = None  # routing behind bc/ebc profiles

    @property
    def c_max(self) -> float:
        return float(self.c.max())

    def scaled(self, factor: float) -> "CapabilityAssignment":
        return CapabilityAssignment(self.scheme, self.c * factor, self.source_algorithm)


@dataclass(frozen=True)
class DesignEvaluation:
    """Analytic outcome of one (scheme, routing) design on one graph."""

    scheme: str
    routing: str
    rc_analytic: float
    c_max: float
    argmin_node: int


def assign(g: Graph, scheme: str,
           profile: BetweennessProfile | None = None) -> CapabilityAssignment:
    """Build a capability assignment; bc/ebc need a betweenness profile.

    bc insists on a shortest-path profile.  ebc accepts the profile of
    any routing algorithm and records which one, so evaluation can
    reject accidental mismatches later.
    """
    budget = 2.0 * g.m
    if scheme == UC:
        return CapabilityAssignment(UC, np.full(g.n, budget / g.n))
    if scheme == DC:
        return CapabilityAssignment(DC, g.degrees.astype(np.float64))
    if scheme == BC:
        if profile is None or profile.algorithm != SPR:
            raise ValueError("bc needs a shortest-path betweenness profile")
        return CapabilityAssignment(BC, budget * profile.b / profile.b.sum(), SPR)
    if scheme == EBC:
        if profile is None:
            raise ValueError("ebc needs an effective-betweenness profile")
        return CapabilityAssignment(
            EBC, budget * profile.b / profile.b.sum(), profile.algorithm)
    raise ValueError(f"unknown scheme {scheme!r}; expected one of {SCHEMES}")


def analytic_rc(g: Graph, rs: RoutingSystem, ca: CapabilityAssignment,
                allow_mismatch: bool = False) -> DesignEvaluation:
    """Critical rate of the design (minimum over nodes of c*n(n-1)/b)."""
    if len(ca.c) != g.n:
        raise ValueError("capability assignment does not match the graph")
    if (ca.scheme == EBC and not allow_mismatch
            and ca.source_algorithm != rs.algorithm):
        raise ValueError(
            f"ebc capabilities come from {ca.source_algorithm!r} betweenness but "
            f"are evaluated under {rs.algorithm!r}; pass allow_mismatch=True "
            "if that is intentional")
    profile = rs.betweenness()
    ratios = ca.c * (g.n * (g.n - 1)) / profile.b
    argmin = int(np.argmin(ratios))
    return DesignEvaluation(
        scheme=ca.scheme,
        routing=rs.algorithm,
        rc_analytic=float(ratios[argmin]),
        c_max=ca.c_max,
        argmin_node=argmin,
    )


@dataclass(frozen=True)
class ClosedForm:
    """Closed-form value plus the mean degree it was evaluated at.

    The textbook forms assume mean degree 4; for other graphs the actual
    mean degree 2m/n is substituted and ``mean_degree_is_four`` is False.
    """

    value: float
    mean_degree: float
    mean_degree_is_four: bool


def _mean_degree(g: Graph) -> tuple[float, bool]:
    mean = 2.0 * g.m / g.n
    return mean, bool(2 * g.m == 4 * g.n)


def closed_form_rc(g: Graph, profile: BetweennessProfile,
                   combo: tuple[str, str]) -> ClosedForm:
    """Closed-form critical rate for the four analytically solved designs.

    (uc, *): mean_degree * n(n-1) / b_max of the matching profile.
    (bc, spr) and (ebc, efr): mean_degree * n / (avg_len + 1), since the
    proportional assignment makes every node's ratio identical.
    """
    scheme, routing = combo
    if combo not in CLOSED_FORM_RC_COMBOS:
        raise ValueError(f"no closed form for combo {combo}")
    if profile.algorithm != routing:
        raise ValueError(
            f"combo {combo} needs a {routing!r} profile, got {profile.algorithm!r}")
    mean, is_four = _mean_degree(g)
    if scheme == UC:
        value = mean * g.n * (g.n - 1) / profile.b_max
    else:
        value = mean * g.n / (profile.gamma_avg_len + 1.0)
    return ClosedForm(value, mean, is_four)


def closed_form_cmax(g: Graph, profile: BetweennessProfile | None,
                     combo: tuple[str, str]) -> ClosedForm:
    """Closed-form cost proxy: uc -> mean degree, dc -> max degree,
    bc/ebc -> mean_degree * b_max / ((n-1)(avg_len + 1))."""
    scheme, routing = combo
    mean, is_four = _mean_degree(g)
    if scheme == UC:
        return ClosedForm(mean, mean, is_four)
    if scheme == DC:
        return ClosedForm(float(g.degrees.max()), mean, is_four)
    if combo not in ((BC, SPR), (EBC, EFR)):
        raise ValueError(f"no closed form for combo {combo}")
    if profile is None or profile.algorithm != routing:
        raise ValueError(f"combo {combo} needs a matching {routing!r} profile")
    value = mean * profile.b_max / ((g.n - 1) * (profile.gamma_avg_len + 1.0))
    return ClosedForm(value, mean, is_four)


def tradeoff_ratios(profile_spr: BetweennessProfile,
                    profile_efr: BetweennessProfile) -> tuple[float, float]:
    """((bc,spr) rc / (ebc,efr) rc, same for c_max) on one graph.

    The rc ratio reduces to the ratio of average path lengths plus one;
    the cost ratio additionally multiplies by b_max(spr) / b_max(efr).
    """
    if profile_spr.algorithm != SPR or profile_efr.algorithm != EFR:
        raise ValueError("expected one spr profile and one efr profile")
    rc_ratio = (profile_efr.gamma_avg_len + 1.0) / (profile_spr.gamma_avg_len + 1.0)
    cmax_ratio = rc_ratio * profile_spr.b_max / profile_efr.b_max
    return rc_ratio, cmax_ratio
