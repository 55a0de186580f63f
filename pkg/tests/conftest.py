import pytest

from covertfas import LinkBudget, NodeFas, PortGrid, db_to_linear, dbm_to_watts


@pytest.fixture
def reference_link() -> LinkBudget:
    """Baseline link: 20 dBm transmit, 0 dB / -20 dB noise, 0.5 bits, mu=0.01."""
    return LinkBudget(
        p_a=dbm_to_watts(20.0),
        sigma2_w=db_to_linear(0.0),
        sigma2_b=db_to_linear(-20.0),
        r_b=0.5,
        mu=0.01,
    )


@pytest.fixture
def fas_node() -> NodeFas:
    return NodeFas(PortGrid(2, 2, 1.0, 1.0), nu=40.0)


@pytest.fixture
def fpa_node() -> NodeFas:
    return NodeFas(PortGrid(1, 1, 0.0, 0.0), nu=40.0)
