import math

import numpy as np
import pytest

from brillouin_cooling import (CouplingParams, MomentState, ParameterError, backward_params,
                               forward_params, regime_flags, thermal_initial_state, validate)
from brillouin_cooling.core import positivity_tolerance


def test_reference_set_is_valid_and_strong():
    p = CouplingParams(0.01, 1.0, 10.0, 0.3, 3e-5, 1000.0)
    assert validate(p) is p
    flags = regime_flags(p)
    assert flags.strong_coupling and flags.detunings_within_linewidth


def test_decoupled_vacuum_is_valid_and_weak():
    p = CouplingParams(1.0, 1.0, 0.0, 0.0, 0.0, 0.0)
    assert validate(p) is p
    assert not regime_flags(p).strong_coupling


@pytest.mark.parametrize("kw, match", [
    (dict(gamma=-1.0), "gamma"),
    (dict(gamma=0.0), "gamma"),
    (dict(Gamma=0.0), "Gamma"),
    (dict(g=-0.1), "coupling"),
    (dict(n_th=-1.0), "thermal"),
    (dict(delta1=math.nan), "delta1"),
    (dict(g=math.inf), "g"),
])
def test_invalid_parameters_raise(kw, match):
    with pytest.raises(ParameterError, match=match):
        validate(backward_params().with_(**kw))


def test_validate_is_idempotent():
    p = forward_params()
    assert validate(validate(p)) == p


def test_weak_coupling_is_advisory_only():
    p = backward_params(g=0.05)
    assert validate(p) is p
    assert not regime_flags(p).strong_coupling
    assert regime_flags(p).notes


@pytest.mark.parametrize("n_th", [1000.0, 0.0, 2.5])
def test_thermal_initial_state(n_th):
    s = thermal_initial_state(backward_params(n_th=n_th))
    assert s == MomentState(0.0, n_th, 0.0, 0.0)
    assert s.is_physical(n_th)


def test_moment_state_roundtrip_and_physicality():
    s = MomentState(1.0, 4.0, 1.0, 1.5)
    assert MomentState.from_array(s.as_array()) == s
    assert s.is_physical()
    assert not MomentState(1.0, 4.0, 2.0, 1.0).is_physical()
    assert not MomentState(-1.0, 4.0).is_physical()
    assert MomentState(-0.5 * positivity_tolerance(1000.0), 4.0).is_physical(1000.0)


def test_params_helpers():
    p = backward_params()
    assert p.beta == pytest.approx(0.505)
    assert p.detuning == pytest.approx(0.3 - 3e-5)
    assert p.scaled_load(2.0).n_th == 2000.0
    assert np.isclose(p.with_(g=3.0).g, 3.0)
