import pytest

from homnovikov import QQ, make_algebra, make_form, make_operator


@pytest.fixture(scope="session")
def dual():
    """Q[eps]/(eps^2) with e0 = 1, e1 = eps."""
    return make_algebra(2, [(0, 0, 0, 1), (0, 1, 1, 1), (1, 0, 1, 1)], label="dual")


@pytest.fixture(scope="session")
def neg():
    return make_operator(2, [(0, 0, 1), (1, 1, -1)], label="neg")


@pytest.fixture(scope="session")
def kill_eps():
    return make_operator(2, [(0, 0, 1)], label="a0")


@pytest.fixture(scope="session")
def d_eps():
    # d/d eps: 1 -> 0, eps -> 1
    return make_operator(2, [(0, 1, 1)], label="d/deps")


@pytest.fixture(scope="session")
def euler():
    # eps d/d eps: 1 -> 0, eps -> eps
    return make_operator(2, [(1, 1, 1)], label="euler")


@pytest.fixture(scope="session")
def square_zero():
    """e0 e0 = e1, all other products zero."""
    return make_algebra(2, [(0, 0, 1, 1)], label="sq")


@pytest.fixture(scope="session")
def rc_fail():
    """e0 e0 = e0, e0 e1 = e1; not right-commutative."""
    return make_algebra(2, [(0, 0, 0, 1), (0, 1, 1, 1)], label="rc")


@pytest.fixture(scope="session")
def hyperbolic():
    return make_form(2, [(0, 1, 1), (1, 0, 1)], label="B")


@pytest.fixture(scope="session")
def truncated4():
    """Q[t]/(t^4), basis 1, t, t^2, t^3."""
    entries = [(i, j, i + j, 1) for i in range(4) for j in range(4) if i + j < 4]
    return make_algebra(4, entries, QQ, "Q[t]/t^4")


@pytest.fixture(scope="session")
def euler4():
    return make_operator(4, [(k, k, k) for k in range(1, 4)], QQ, "t d/dt")
