"""scikit-learn style front end.

:class:`WreathFPP` is fitted on a set of permutations and exposes the
characteristic polynomial as a transform on points of ``[0, 1]``, so it can
sit in a pipeline or be cloned/grid-searched like any estimator.
"""

from __future__ import annotations

from fractions import Fraction

import numpy as np
from sklearn.base import BaseEstimator, TransformerMixin
from sklearn.utils.validation import check_array, check_is_fitted

from .charpoly import char_polynomial, fpp_from_profile, profile
from .errors import ValidationError
from .permgroup import Perm, PermSet, generate, parse_perm_list, perm_set
from .treeoracle import recurrence_enclosure


def check_permutations(X, degree: int | None = None) -> list:
    """Coerce ``X`` to a nonempty list of same-degree :class:`Perm`.

    Accepts a :class:`PermSet`, Perms, cycle strings (with ``degree``), or
    rows of 1-based images.
    """
    if isinstance(X, PermSet):
        return X.sorted()
    if isinstance(X, str):
        X = [X]
    out = []
    for item in X:
        if isinstance(item, Perm):
            out.append(item)
        elif isinstance(item, str):
            if degree is None:
                raise ValidationError("degree is required to parse cycle notation")
            out.extend(parse_perm_list(item, degree))
        else:
            out.append(Perm(list(item)))
    if not out:
        raise ValidationError("no permutations given")
    d = out[0].degree if degree is None else degree
    if any(p.degree != d for p in out):
        raise ValidationError(f"all permutations must have degree {d}")
    return out


def check_unit_interval(X) -> np.ndarray:
    arr = check_array(X, ensure_2d=False, dtype=np.float64, allow_nd=True)
    if np.any(arr < 0) or np.any(arr > 1):
        raise ValueError("inputs must lie in [0, 1]")
    return arr


class WreathFPP(TransformerMixin, BaseEstimator):
    """Fixed-point proportion of the iterated wreath product over a permutation set.

    Parameters
    ----------
    degree : int or None
        Number of points; required when fitting on cycle strings.
    closure : {"group", "set"}
        ``"group"`` closes the input under composition; ``"set"`` uses it as is.
    precision : int
        Bracket width bound ``2**-precision`` for non-exact results.
    digits : int
        Significant digits of the decimal annotation.

    Attributes
    ----------
    set_ : PermSet
    profile_ : DerangementProfile
    polynomial_ : RationalPoly
    fpp_ : FppValue
    """

    def __init__(self, degree=None, closure="group", precision=60, digits=15):
        self.degree = degree
        self.closure = closure
        self.precision = precision
        self.digits = digits

    def fit(self, X, y=None):
        perms = check_permutations(X, self.degree)
        if self.closure == "group":
            S = generate(perms)
        elif self.closure == "set":
            S = perm_set(perms)
        else:
            raise ValueError(f"closure must be 'group' or 'set', got {self.closure!r}")
        self.set_ = S
        self.profile_ = profile(S)
        self.polynomial_ = char_polynomial(self.profile_)
        self.fpp_ = fpp_from_profile(self.profile_, self.precision, self.digits)
        self.n_features_in_ = 1
        return self

    def transform(self, X):
        """Evaluate ``f_S`` elementwise (float64)."""
        check_is_fitted(self, "polynomial_")
        arr = check_unit_interval(X)
        coeffs = [float(c) for c in self.polynomial_.coeffs]
        return np.polynomial.polynomial.polyval(arr, coeffs) if coeffs else np.zeros_like(arr)

    def transform_exact(self, xs) -> list:
        check_is_fitted(self, "polynomial_")
        return [self.polynomial_(Fraction(x)) for x in xs]

    def score(self, X=None, y=None) -> float:
        """Midpoint of the fitted proportion (exact value when exact)."""
        check_is_fitted(self, "fpp_")
        return float(self.fpp_)

    def iterate(self, n: int, bits: int = 128) -> np.ndarray:
        """Upper enclosures of ``p_0..p_n`` as floats."""
        check_is_fitted(self, "set_")
        return np.array([float(hi) for _, hi in recurrence_enclosure(self.set_, n, bits)])
