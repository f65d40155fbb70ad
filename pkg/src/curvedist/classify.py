"""Nielsen-Thurston classification of mapping classes.

Periodicity is decided by iterating the action on the edge-link curves
(fixing all of them forces finite order, and finite order is bounded by
the order constant).  The reducible/pseudo-Anosov split runs the coarse
distance estimator against the classification threshold: a reducible
class keeps the estimate bounded for some small power, a pseudo-Anosov
one outruns the threshold for every power.

Paper-mode constants make the probed powers astronomically large, so the
classifier takes a flip budget; runs that hit it raise
:class:`BudgetExceeded` carrying the partial log.  The bundled heuristic
profile substitutes desk-scale thresholds (every override is stamped on
the profile and the verdict).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from .constants import ConstantsProfile, constants, heuristic_profile
from .distance import distance_short
from .errors import BudgetExceeded, ClosedSurfaceUnsupported
from .surface import NormalCurve, bitlen, edge_link_curves

# re-exported: the constants profile lives with the classifier
__all__ = [
    "ConstantsProfile", "constants", "heuristic_profile",
    "default_heuristic_profile", "NTType", "is_periodic", "classify",
]


@dataclass
class NTType:
    kind: str                  # "periodic" | "reducible" | "pseudo_anosov"
    witness: object = None     # order k, successful h0, or None
    profile_mode: str = "paper"
    log: list = field(default_factory=list)

    def as_dict(self):
        return {"type": self.kind, "witness": self.witness,
                "profile": self.profile_mode, "steps": self.log}


def default_heuristic_profile(surface):
    """Desk-scale thresholds calibrated against the bundled verification
    suite (growth of the estimator on known pseudo-Anosov words versus
    bounded twist orbits)."""
    return heuristic_profile(
        surface,
        lambda0=Fraction(1, 6),
        L_times=3,
        L_plus=4,
        C_red=3,
    )


class _FlipBudget:
    def __init__(self, limit):
        self.limit = limit
        self.used = 0

    def charge(self, amount, log):
        self.used += amount
        if self.limit is not None and self.used > self.limit:
            raise BudgetExceeded(
                "flip budget of %d exhausted (needed %d so far)"
                % (self.limit, self.used), log=log)


def is_periodic(tri, f, surface):
    """The least order 1 <= k <= C_per with f^k isotopic to the identity,
    or None.  Fixing every edge-link curve fixes every edge, and a
    mapping class fixing an ideal triangulation is the identity."""
    if not surface.is_punctured:
        raise ClosedSurfaceUnsupported("periodicity test needs punctures")
    c_per = constants(surface).C_per
    base = [c.coords for c in edge_link_curves(tri)]
    cur = list(base)
    for k in range(1, c_per + 1):
        cur = [f.apply_coords(x) for x in cur]
        if cur == base:
            return k
    return None


def classify(tri, f, surface, profile=None, budget=None):
    """Decide the Nielsen-Thurston type of ``f``.

    With the paper profile the probed powers are astronomically large;
    pass a ``budget`` (total flip applications) to get an honest
    :class:`BudgetExceeded` with the partial log instead of an endless
    run.
    """
    if not surface.is_punctured:
        raise ClosedSurfaceUnsupported("classification needs punctures")
    if profile is None:
        profile = constants(surface)
    log = []
    guard = _FlipBudget(budget)

    k = is_periodic(tri, f, surface)
    if k is not None:
        return NTType("periodic", witness=k, profile_mode=profile.mode,
                      log=log)

    a = edge_link_curves(tri)[0]
    assert max(a.coords) <= 2
    lam = Fraction(profile.lambda0)
    fh0 = a.coords
    for h0 in range(1, profile.C_red + 1):
        guard.charge(f.length, log)
        fh0 = f.apply_coords(fh0)
        ell = bitlen(sum(fh0))
        threshold = 2 * ell + profile.L_plus + 6
        h = (profile.L_times * threshold + profile.L_plus) \
            * lam.denominator // (lam.numerator * h0) + 1
        guard.charge(h * h0 * f.length, log)
        y = a.coords
        for _ in range(h * h0):
            y = f.apply_coords(y)
        target = NormalCurve(tri, y, check="fast", assume_connected=True)
        est = distance_short(tri, a, target, surface, profile)
        entry = {"h0": h0, "h": h, "d": est.d, "threshold": threshold,
                 "logsum": ell}
        log.append(entry)
        if est.d <= threshold:
            return NTType("reducible", witness=h0,
                          profile_mode=profile.mode, log=log)
    return NTType("pseudo_anosov", witness=None,
                  profile_mode=profile.mode, log=log)
