"""The quantitative constants driving the distance and classification
algorithms, as exact integers and rationals.

Every value is a closed-form function of the surface's complexity
``xi = 3g - 3 + p`` and Euler characteristic ``chi``.  A profile can also
run in heuristic mode, substituting configured desk-scale values for the
classification thresholds; every override is recorded so no output can
silently claim paper-mode soundness.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from .errors import SurfaceTooSmall


@dataclass(frozen=True)
class ConstantsProfile:
    """All algorithm constants for one surface."""

    xi: int
    chi: int
    mode: str                    # "paper" or "heuristic"
    D_prox: int
    N_dec: int
    Dp_dn: int
    D_dn: int
    D_1s: int
    D: int
    L0_plus: int
    L_times: int
    L_plus: int
    D_bgi: int
    lambda0: Fraction
    C_red: int
    C_per: int
    overrides: tuple = field(default_factory=tuple)

    def as_dict(self):
        d = {
            "xi": self.xi, "chi": self.chi, "mode": self.mode,
            "D_prox": self.D_prox, "N_dec": self.N_dec,
            "Dp_dn": self.Dp_dn, "D_dn": self.D_dn, "D_1s": self.D_1s,
            "D": self.D, "L0_plus": self.L0_plus, "L_times": self.L_times,
            "L_plus": self.L_plus, "D_bgi": self.D_bgi,
            "lambda0": [self.lambda0.numerator, self.lambda0.denominator],
            "C_red": self.C_red, "C_per": self.C_per,
        }
        if self.overrides:
            d["overrides"] = sorted(self.overrides)
        return d


def constants(surface):
    """The paper-mode constants profile for ``surface``."""
    if surface.xi < 1:
        raise SurfaceTooSmall("constants need xi >= 1")
    xi, chi = surface.xi, surface.chi
    D_prox = 17
    N_dec = 6 * xi + 1
    Dp_dn = D_prox + 10
    D_dn = 12 * xi * Dp_dn
    D_1s = 48 * xi * xi * D_prox
    D = D_dn + D_prox * N_dec
    L0_plus = D_1s + 2 * D + 8
    L_times = 2 * D + 12
    L_plus = L0_plus + 36
    D_bgi = 100
    lambda0 = Fraction(1, 162 * chi * chi)
    C_red = 2 * (D_bgi + 2) * (162 * chi * chi) * xi
    C_per = -6 * chi
    return ConstantsProfile(
        xi=xi, chi=chi, mode="paper",
        D_prox=D_prox, N_dec=N_dec, Dp_dn=Dp_dn, D_dn=D_dn, D_1s=D_1s, D=D,
        L0_plus=L0_plus, L_times=L_times, L_plus=L_plus, D_bgi=D_bgi,
        lambda0=lambda0, C_red=C_red, C_per=C_per,
    )


def heuristic_profile(surface, lambda0=None, L_times=None, L_plus=None,
                      C_red=None):
    """A desk-scale profile: paper values with the classification
    thresholds replaced by configured ones.  Overrides are logged in the
    profile itself."""
    base = constants(surface)
    overrides = []
    values = {}
    for name, val in (("lambda0", lambda0), ("L_times", L_times),
                      ("L_plus", L_plus), ("C_red", C_red)):
        if val is not None:
            values[name] = Fraction(val) if name == "lambda0" else int(val)
            overrides.append("%s=%s" % (name, val))
    return ConstantsProfile(
        xi=base.xi, chi=base.chi, mode="heuristic",
        D_prox=base.D_prox, N_dec=base.N_dec, Dp_dn=base.Dp_dn,
        D_dn=base.D_dn, D_1s=base.D_1s, D=base.D,
        L0_plus=base.L0_plus,
        L_times=values.get("L_times", base.L_times),
        L_plus=values.get("L_plus", base.L_plus),
        D_bgi=base.D_bgi,
        lambda0=values.get("lambda0", base.lambda0),
        C_red=values.get("C_red", base.C_red),
        C_per=base.C_per,
        overrides=tuple(overrides),
    )
