import math

import numpy as np
import pytest

from plusforms.models import ModelDomainError, model_eval


def test_ggg_at_zero():
    # GGG(0) = b exp(-d^a / c)
    val = model_eval("GGG", {"a": 0.7, "b": 3.0, "c": 2.0, "d": 0.5}, 0.0)
    assert val == pytest.approx(3.0 * math.exp(-(0.5 ** 0.7) / 2.0))


def test_laplace_value():
    assert model_eval("Laplace", {"b": 2.0, "c": 1.0}, 1.0) == \
        pytest.approx(2.0 / math.e)


def test_gg_at_zero_returns_b():
    assert model_eval("GG", {"a": 0.5, "b": 7.0, "c": 1.0}, 0.0) == 7.0


def test_laplace_is_gg_with_a_half():
    rng = np.random.default_rng(2)
    xs = rng.normal(size=100) * 3
    lap = model_eval("Laplace", {"b": 2.5, "c": 0.7}, xs)
    gg = model_eval("GG", {"a": 0.5, "b": 2.5, "c": 0.7}, xs)
    assert np.allclose(lap, gg, rtol=1e-14)


def test_gg_is_ggg_with_d_zero():
    rng = np.random.default_rng(3)
    xs = rng.normal(size=100)
    gg = model_eval("GG", {"a": 0.62, "b": 11.0, "c": 0.9}, xs)
    ggg = model_eval("GGG", {"a": 0.62, "b": 11.0, "c": 0.9, "d": 0.0}, xs)
    assert np.array_equal(gg, ggg)


def test_cauchy_formula():
    assert model_eval("Cauchy", {"a": 2.0, "b": 1.0, "c": 3.0}, 2.0) == \
        pytest.approx(2.0 / (1.0 + 36.0))


def test_cauchy_negative_c_is_harmless():
    # c enters squared, so negative c gives the same curve
    plus = model_eval("Cauchy", {"a": 1.0, "b": 0.5, "c": 0.35}, 1.7)
    minus = model_eval("Cauchy", {"a": 1.0, "b": 0.5, "c": -0.35}, 1.7)
    assert plus == minus


def test_domain_violations_raise():
    with pytest.raises(ModelDomainError):
        model_eval("GG", {"a": 0.5, "b": 1.0, "c": 0.0}, 1.0)
    with pytest.raises(ModelDomainError):
        model_eval("Laplace", {"b": 1.0, "c": -2.0}, 1.0)
    with pytest.raises(ModelDomainError):
        model_eval("Cauchy", {"a": 1.0, "b": 0.0, "c": 1.0}, 1.0)
    with pytest.raises(ModelDomainError):
        model_eval("GGG", {"a": 0.5, "b": 1.0, "c": 1.0, "d": -4.0}, 1.0)
    with pytest.raises(ModelDomainError):
        model_eval("GG", {"a": -0.5, "b": 1.0, "c": 1.0}, 0.0)


def test_vector_and_dict_params_agree():
    xs = np.array([0.5, 1.5])
    byname = model_eval("GG", {"a": 0.6, "b": 2.0, "c": 0.8}, xs)
    byvec = model_eval("GG", [0.6, 2.0, 0.8], xs)
    assert np.array_equal(byname, byvec)
