from fractions import Fraction

import numpy as np
import pytest
from sklearn.base import clone
from sklearn.exceptions import NotFittedError
from sklearn.pipeline import make_pipeline

from wreathfpp import WreathFPP
from wreathfpp.errors import ValidationError
from wreathfpp.estimator import check_permutations, check_unit_interval
from wreathfpp.permgroup import Perm


def test_fit_bracket():
    est = WreathFPP(degree=4).fit(["(1,2)(3,4)"])
    assert est.fpp_.kind == "Bracket"
    assert est.score() == pytest.approx(0.4563109873079255, abs=1e-12)


def test_closure_modes():
    assert WreathFPP(degree=3).fit(["(1,2,3)"]).set_.order == 3
    est = WreathFPP(degree=3, closure="set").fit(["(1,2),(1,3),(2,3)"])
    assert len(est.set_) == 3 and est.fpp_.kind == "ExactOne"
    with pytest.raises(ValueError):
        WreathFPP(degree=3, closure="bogus").fit(["(1,2)"])


def test_image_rows():
    est = WreathFPP().fit([[2, 3, 1]])
    assert est.fpp_.kind == "ExactZero"


def test_transform_matches_exact():
    est = WreathFPP(degree=3).fit(["(1,2,3)"])
    xs = np.array([0.0, 0.25, 1.0])
    exact = est.transform_exact([Fraction(0), Fraction(1, 4), Fraction(1)])
    np.testing.assert_allclose(est.transform(xs), [float(q) for q in exact])


def test_transform_range():
    est = WreathFPP(degree=3).fit(["(1,2,3)"])
    with pytest.raises(ValueError):
        est.transform([1.5])


def test_not_fitted():
    with pytest.raises(NotFittedError):
        WreathFPP().transform([0.5])


def test_params_and_clone():
    est = WreathFPP(degree=4, precision=30)
    assert est.get_params() == {"closure": "group", "degree": 4, "digits": 15, "precision": 30}
    est.set_params(precision=40)
    assert clone(est).precision == 40


def test_pipeline():
    pipe = make_pipeline(WreathFPP(degree=4))
    pipe.fit(["(1,2),(3,4)"])
    assert pipe.transform([1.0])[0] == pytest.approx(0.75)


def test_iterate_decreasing():
    seq = WreathFPP(degree=4).fit(["(1,2),(3,4)"]).iterate(10)
    assert seq[0] == 1.0
    assert np.all(np.diff(seq) <= 0)


def test_check_helpers():
    assert check_permutations([Perm.identity(3)]) == [Perm.identity(3)]
    with pytest.raises(ValidationError):
        check_permutations(["(1,2)"])
    with pytest.raises(ValidationError):
        check_permutations([])
    with pytest.raises(ValidationError):
        check_permutations([[1, 2], [1, 2, 3]])
    assert check_unit_interval([0.1, 0.9]).shape == (2,)
