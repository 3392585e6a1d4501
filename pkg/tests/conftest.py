import json
from pathlib import Path

import numpy as np
import pytest
from hypothesis import settings

settings.register_profile("gscon", deadline=None, max_examples=60, derandomize=True)
settings.load_profile("gscon")

FIXTURES = Path(__file__).parent / "fixtures"


def toy_fixtures():
    return [json.loads(p.read_text()) for p in sorted(FIXTURES.glob("toy_*.json"))]


@pytest.fixture
def rng():
    return np.random.default_rng(1234)


def kron_embed(M, qubits, n):
    """Reference embedding by explicit permutation of a Kronecker product."""
    qubits = list(qubits)
    rest = [q for q in range(n) if q not in qubits]
    full = np.kron(M, np.eye(2 ** len(rest)))
    order = qubits + rest
    perm = np.argsort(order)
    T = full.reshape((2,) * (2 * n))
    T = T.transpose(list(perm) + [n + p for p in perm])
    return T.reshape(2**n, 2**n)


def load_toy(d):
    """(instance, net, net_eps) from a toy fixture record."""
    from gscon.cli import instance_from_json
    from gscon.nets import SingleQubitNet

    net = SingleQubitNet.from_grid(d["net"]["n_x"], d["net"]["n_phase"])
    return instance_from_json(d["instance"]), net, float(d["net_eps"])


def pytest_terminal_summary(terminalreporter):
    try:
        from test_acceptance import RESULTS
    except ImportError:
        return
    if RESULTS:
        terminalreporter.section("acceptance criteria")
        for line in sorted(RESULTS):
            terminalreporter.write_line(line)
