"""Asymptotics of mu_{u,eps}(P_+) in powers of z = -eps i.

For an (n+1)-dimensional upper polytope P_+ the fitted template is

    n odd:   c0 z^-n + c2 z^(2-n) + ... + c_{n-1} z^-1 + V_o
    n even:  c0 z^-n + ... + c_{n-2} z^-2 - L log z + V_e

plus nuisance terms for the o(1) remainder.  The template is a conjecture,
so every fit is flagged experimental and carries its residual.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from sklearn.base import BaseEstimator
from sklearn.utils.validation import check_consistent_length, check_is_fitted

from .errors import IllConditioned
from .extrapolation import _as_eps, _as_values
from .polytope import Polytope
from .quadrature import QuadratureConfig
from .volume import EpsilonLadder, regularized_samples, sphere_volume, volume

MAX_CONDITION = 1e10
RENORM_LADDER = EpsilonLadder(0.2, 0.5, 10)


class AsymptoticExpansion(BaseEstimator):
    """Complex least squares on the parity template for boundary dimension n.

    Parameters
    ----------
    n : int
        Boundary dimension (P_+ has dimension n + 1).
    nuisance_degree : int
        Powers eps, ..., eps^d absorbed as the o(1) remainder.
    nuisance_log : bool
        Also absorb eps log eps.

    Attributes
    ----------
    coef_ : ndarray of complex, in ``columns_`` order
    columns_ : list of str
    constant_ : complex
    log_coeff_ : complex
        L (n even); 0 for n odd.
    singular_ : dict
        Coefficients of the negative powers of z.
    condition_number_ : float
    residual_ : float
    """

    def __init__(self, n=1, nuisance_degree=2, nuisance_log=True):
        self.n = n
        self.nuisance_degree = nuisance_degree
        self.nuisance_log = nuisance_log

    def _columns(self):
        n = self.n
        names = [f"z^-{k}" for k in range(n, 0, -2)]
        if n % 2 == 0:
            names.append("log z")
        names.append("1")
        nuis = [f"eps^{k}" for k in range(1, self.nuisance_degree + 1)]
        if self.nuisance_log:
            nuis.append("eps log eps")
        return names, nuis

    def _design(self, eps):
        z = -1j * eps
        main, nuis = self._columns()
        cols = []
        for name in main + nuis:
            if name.startswith("z^-"):
                cols.append(z ** (-int(name[3:])))
            elif name == "log z":
                cols.append(np.log(z))
            elif name == "1":
                cols.append(np.ones_like(z))
            elif name == "eps log eps":
                cols.append(eps * np.log(eps) + 0j)
            else:
                cols.append(eps ** int(name[4:]) + 0j)
        return np.stack(cols, axis=1)

    @property
    def n_template_terms(self) -> int:
        return len(self._columns()[0])

    def fit(self, eps, values):
        if self.n < 0:
            raise ValueError("n must be >= 0")
        eps = _as_eps(eps)
        y = _as_values(values)
        check_consistent_length(eps, y)
        main, nuis = self._columns()
        X = self._design(eps)
        if eps.size < X.shape[1] + 1:
            raise ValueError(f"need more than {X.shape[1]} samples")
        s = np.max(np.abs(X), axis=0)
        Xs = X / s
        cond = float(np.linalg.cond(Xs))
        if not cond < MAX_CONDITION:
            raise IllConditioned(f"condition number {cond:.3e}")
        coef, *_ = np.linalg.lstsq(Xs, y, rcond=None)
        coef = coef / s
        r = y - X @ coef
        self.columns_ = main + nuis
        self.coef_ = coef
        idx = {c: i for i, c in enumerate(self.columns_)}
        self.constant_ = complex(coef[idx["1"]])
        self.log_coeff_ = -complex(coef[idx["log z"]]) if "log z" in idx else 0j
        self.singular_ = {c: complex(coef[idx[c]]) for c in main if c.startswith("z^-")}
        self.condition_number_ = cond
        self.residual_ = float(np.sqrt(np.mean(np.abs(r) ** 2)))
        return self

    def predict(self, eps):
        check_is_fitted(self, "coef_")
        return self._design(_as_eps(eps)) @ self.coef_


@dataclass
class AsymptoticFit:
    n: int
    coefficients: dict
    constant: complex
    log_coeff: complex
    condition_number: float
    residual: float
    samples: list = field(default_factory=list)
    experimental: bool = True

    @property
    def singular(self) -> dict:
        return {k: v for k, v in self.coefficients.items() if k.startswith("z^-")}

    def singular_ratio(self) -> float:
        """Largest singular coefficient relative to the constant."""
        if not self.singular:
            return 0.0
        return max(abs(v) for v in self.singular.values()) / max(abs(self.constant), 1e-300)

    def to_json(self) -> dict:
        pair = lambda z: [float(z.real), float(z.imag)]  # noqa: E731
        return {
            "n": self.n,
            "constant": pair(self.constant),
            "log_coeff": pair(self.log_coeff),
            "coefficients": {k: pair(v) for k, v in self.coefficients.items()},
            "condition_number": self.condition_number,
            "residual": self.residual,
            "experimental": self.experimental,
            "samples": [[e, v.real, v.imag] for e, v in self.samples],
        }


def fit_samples(n: int, eps, values, nuisance_degree: int = 2,
                nuisance_log: bool = True) -> AsymptoticFit:
    est = AsymptoticExpansion(n, nuisance_degree, nuisance_log).fit(eps, values)
    return AsymptoticFit(
        n=n,
        coefficients=dict(zip(est.columns_, map(complex, est.coef_))),
        constant=est.constant_,
        log_coeff=est.log_coeff_,
        condition_number=est.condition_number_,
        residual=est.residual_,
        samples=list(zip(map(float, eps), map(complex, values))),
    )


def fit_asymptotics(Pplus: Polytope, n: int | None = None, ladder: EpsilonLadder | None = None,
                    cfg: QuadratureConfig | None = None, nuisance_degree: int = 2) -> AsymptoticFit:
    """Fit the template to mu_{u,eps}(P_+) on a ladder of eps."""
    if n is None:
        n = Pplus.dim - 1
    if Pplus.dim != n + 1:
        raise ValueError("P_+ must have dimension n + 1")
    ladder = ladder or RENORM_LADDER
    terms = AsymptoticExpansion(n).n_template_terms
    if ladder.count < terms + 3:
        raise ValueError(f"ladder needs at least {terms + 3} samples")
    eps = ladder.values
    vals = regularized_samples(Pplus, eps, cfg, normalize=True, part="upper")
    return fit_samples(n, eps, vals, nuisance_degree)


def check_conjecture_identity(P: Polytope, fit: AsymptoticFit, volume_value=None,
                              cfg: QuadratureConfig | None = None) -> float:
    """Normalized |V_{n+1}(P) - 2 V_o| (n odd) or |V_{n+1}(P) - L pi i| (n even)."""
    if volume_value is None:
        volume_value = volume(P.double(), cfg, method="auto").value
    v = complex(volume_value)
    pred = 2 * fit.constant if fit.n % 2 == 1 else fit.log_coeff * math.pi * 1j
    return abs(v - pred) / max(abs(v), 1.0)


def epstein_constants(m: int, chi: int, parity: str, form: str = "factorial") -> complex:
    """V_o (parity "odd", n = 2m - 1) or L (parity "even", n = 2m) of a hyperbolic X.

    ``form`` "factorial" uses the factorial expressions, "sphere" the sphere
    volume expressions; chi is the Euler characteristic of X.
    """
    if m < 1:
        raise ValueError("m must be >= 1")
    sgn = (-1) ** m
    if parity == "odd":
        if form == "sphere":
            return complex(sgn * sphere_volume(2 * m) / 2 * chi)
        return complex(sgn * 2 ** (2 * m) * math.pi ** m * math.factorial(m)
                       / math.factorial(2 * m) * chi)
    if parity == "even":
        if form == "sphere":
            return complex(sgn * sphere_volume(2 * m + 1) / math.pi * chi)
        return complex(2 * sgn * math.pi ** m / math.factorial(m) * chi)
    raise ValueError("parity must be 'odd' or 'even'")
