"""Least-squares extrapolation of regularized values to eps -> 0+."""

from __future__ import annotations

import numpy as np
from sklearn.base import BaseEstimator
from sklearn.utils.validation import (
    check_array, check_consistent_length, check_is_fitted, column_or_1d,
)


def _as_eps(eps):
    eps = column_or_1d(np.asarray(eps, dtype=float))
    if np.any(eps <= 0) or not np.all(np.isfinite(eps)):
        raise ValueError("eps samples must be positive and finite")
    return eps


def _as_values(values):
    """Complex 1-d samples; finiteness is checked on the real pair view."""
    y = np.asarray(values, dtype=complex)
    if y.ndim == 2 and 1 in y.shape:
        y = y.ravel()
    if y.ndim != 1:
        raise ValueError("values must be one-dimensional")
    check_array(np.column_stack([y.real, y.imag]))
    return y


class EpsilonExtrapolator(BaseEstimator):
    """Fit  v + a1 eps + ... + a_d eps^d  [+ b eps log eps]  and report v.

    Parameters
    ----------
    degree : int
        Highest power of eps in the polynomial part.
    log_term : bool
        Include the eps*log(eps) column.
    drop_insignificant : bool
        Refit without the log column when its coefficient is below
        ``z_threshold`` standard errors.
    z_threshold : float
        Significance threshold used by ``drop_insignificant``.

    Attributes
    ----------
    limit_ : complex
        Extrapolated value at eps = 0.
    coef_ : ndarray of complex
        Coefficients in column order [1, eps, ..., eps^d, (eps log eps)].
    log_used_ : bool
    log_coef_ : complex
    limit_stderr_ : float
    residual_ : float
        Root mean square of the fit residuals.
    """

    def __init__(self, degree=3, log_term=False, drop_insignificant=True, z_threshold=2.0):
        self.degree = degree
        self.log_term = log_term
        self.drop_insignificant = drop_insignificant
        self.z_threshold = z_threshold

    def _design(self, eps, with_log):
        cols = [eps ** k for k in range(self.degree + 1)]
        if with_log:
            cols.append(eps * np.log(eps))
        return np.stack(cols, axis=1)

    def _solve(self, eps, y, with_log):
        X = self._design(eps, with_log)
        # scale columns so the normal matrix is well conditioned
        s = np.max(np.abs(X), axis=0)
        coef, *_ = np.linalg.lstsq(X / s, y, rcond=None)
        coef = coef / s
        r = y - X @ coef
        dof = max(1, X.shape[0] - X.shape[1])
        sigma2 = float(np.sum(np.abs(r) ** 2)) / dof
        cov = sigma2 * np.linalg.pinv(X.T @ X)
        return coef, r, np.sqrt(np.abs(np.diag(cov)))

    def fit(self, eps, values):
        eps = _as_eps(eps)
        y = _as_values(values)
        check_consistent_length(eps, y)
        n_par = self.degree + 1 + (1 if self.log_term else 0)
        if eps.size < n_par:
            raise ValueError(f"need at least {n_par} samples, got {eps.size}")
        with_log = bool(self.log_term)
        coef, r, se = self._solve(eps, y, with_log)
        if with_log and self.drop_insignificant and abs(coef[-1]) < self.z_threshold * se[-1]:
            with_log = False
            coef, r, se = self._solve(eps, y, with_log)
        self.coef_ = coef
        self.log_used_ = with_log
        self.log_coef_ = complex(coef[-1]) if with_log else 0j
        self.limit_ = complex(coef[0])
        self.limit_stderr_ = float(se[0])
        self.residual_ = float(np.sqrt(np.mean(np.abs(r) ** 2)))
        return self

    def predict(self, eps):
        check_is_fitted(self, "coef_")
        eps = _as_eps(eps)
        return self._design(eps, self.log_used_) @ self.coef_
