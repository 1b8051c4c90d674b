import math

import pytest

import bmo_bellman as bb


def test_extremal_point():
    pr = bb.Params(1, 3)
    assert pr.regime == "Max"
    assert bb.eval(pr, (0, 1, 0.5)) == pytest.approx(3, rel=1e-12)
    assert bb.classify(pr, (0, 1, 0.5)) == "XiZero"
    assert bb.solve_leaf(pr, (2, 5, 2))["u"] == pytest.approx(1, rel=1e-10)


def test_eval_examples():
    pr = bb.Params(1, 3)
    assert bb.eval(pr, (2, 4, 2)) == pytest.approx(8, rel=1e-12)
    assert bb.eval(pr, (2, 5, 2)) == pytest.approx(16, rel=1e-12)
    assert bb.eval(pr, (0, 1, 0.75)) == pytest.approx(2.5625, rel=1e-12)


def test_gradient_matches_differences():
    pr = bb.Params(2.5, 4)
    x = (0.7, 1.0, 1.2)
    assert bb.contains(pr, x)
    g = bb.gradient(pr, x)
    h = 1e-5
    for c in range(3):
        a, b = list(x), list(x)
        a[c] += h
        b[c] -= h
        fd = (bb.eval(pr, a) - bb.eval(pr, b)) / (2 * h)
        assert fd == pytest.approx(g[c], rel=1e-6, abs=1e-6)


def test_hessian_is_symmetric():
    h = bb.hessian(bb.Params(1, 3), (0.5, 0.8, 0.6))
    for i in range(3):
        for j in range(3):
            assert h[i][j] == pytest.approx(h[j][i], abs=1e-8)


def test_special_functions():
    assert bb.m_fn(2.5, 1, 0) == pytest.approx(math.gamma(3.5), rel=1e-14)
    assert bb.k_fn(2, 1, 3) == pytest.approx(4, rel=1e-12)
    with pytest.raises(bb.SingularityError):
        bb.m_fn(1.5, 1, 0, 1)


def test_constants():
    assert bb.sharp_constant(2, 4) == pytest.approx(12 ** 0.25, rel=1e-14)
    scan = bb.extract_constant(bb.Params(1, 3), 50)
    assert scan["ratio"] == pytest.approx(6, rel=1e-9)
    assert scan["argmax"][1] == pytest.approx(1)


def test_optimizers():
    phi0 = bb.optimizer_phi0()
    assert phi0.mean() == pytest.approx(0, abs=1e-14)
    assert phi0.second_moment() == pytest.approx(1, rel=1e-13)
    assert phi0.moment(3) == pytest.approx(3, rel=1e-13)
    assert 0.995 <= phi0.bmo_norm(12) <= 1 + 1e-12
    up = bb.optimizer_uplus(1, 1)
    assert up.moment(3) == pytest.approx(16, rel=1e-12)
    back = bb.PiecewiseFn.from_csv(up.to_csv())
    assert back.to_csv() == up.to_csv()


def test_verify_suites():
    for suite in ("skeleton", "extremal", "attainment"):
        report = bb.verify(suite, bb.Params(1, 3))
        assert report["passed"], report
    report = bb.verify("concavity", bb.Params(4, 3), samples=30)
    assert report["passed"]
    assert report["params"]["p"] == 4


def test_errors():
    with pytest.raises(bb.DomainError):
        bb.Params(2, 3)
    with pytest.raises(ValueError):
        bb.eval(bb.Params(1, 3), (0, 1, 5))
    with pytest.raises(ValueError):
        bb.verify("nope", bb.Params(1, 3))
