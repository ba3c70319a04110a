import numpy as np
import pytest
from sklearn.base import clone
from sklearn.exceptions import NotFittedError

from aircomp_relay.baseline import solve_baseline
from aircomp_relay.channel import LinkGains
from aircomp_relay.estimators import AirCompPowerControl, RelayPowerControl
from aircomp_relay.relay import group_nodes, solve_coh_relay


@pytest.fixture
def X():
    rng = np.random.default_rng(0)
    return np.column_stack([rng.uniform(0.05, 2, 20), rng.uniform(0.05, 2, 20)])


def test_baseline_estimator_matches_solver(X):
    est = AirCompPowerControl(p_max=10, sigma2=1).fit(X[:, 0])
    sol = solve_baseline(X[:, 0], 10, 1)
    assert est.a_ == sol.a
    np.testing.assert_array_equal(est.b_, sol.b)
    assert est.score(X[:, :1]) == pytest.approx(-sol.mse)


def test_get_params_and_clone():
    est = RelayPowerControl(policy="SimRelayPlus", gamma=0.75)
    params = est.get_params()
    assert params["policy"] == "SimRelayPlus" and params["gamma"] == 0.75
    twin = clone(est).set_params(theta=0.9)
    assert twin.theta == 0.9 and est.theta == 0.5


def test_not_fitted():
    with pytest.raises(NotFittedError):
        AirCompPowerControl().node_power()
    with pytest.raises(NotFittedError):
        RelayPowerControl().score()


@pytest.mark.parametrize("policy", ["SimRelay", "CohRelay", "SimRelayPlus", "CohRelayPlus"])
def test_relay_estimator_policies(X, policy):
    est = RelayPowerControl(policy=policy).fit(X, h_rd=1.5)
    assert est.solution_.policy_tag.value == policy
    assert (est.node_power() <= 10 + 1e-12).all()
    assert est.relay_power_ >= 0


def test_relay_estimator_matches_solver(X):
    est = RelayPowerControl(policy="CohRelay").fit(X, h_rd=1.5)
    g = LinkGains(X[:, 0], X[:, 1], 1.5)
    sol = solve_coh_relay(g, group_nodes(g, 0.3), 10, 1)
    assert est.mse_ == sol.mse


def test_input_validation(X):
    with pytest.raises(ValueError):
        RelayPowerControl().fit(X[:, 0])
    with pytest.raises(ValueError):
        AirCompPowerControl().fit(-X[:, 0])
    with pytest.raises(ValueError):
        RelayPowerControl(policy="AirComp").fit(X)
    with pytest.raises(ValueError):
        AirCompPowerControl().fit(np.array([[np.nan]]))
