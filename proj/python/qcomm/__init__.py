"""Quantum information measures and two-party protocol simulation.

Matrices are numpy complex arrays. Reports come back as plain dicts with the
same layout as the ``qcomm`` command-line tool writes.
"""

import json

from . import _qcomm
from ._qcomm import (
    ProtocolError,
    fidelity,
    hellinger,
    informational_distance,
    mutual_information,
    protocol_ids,
    random_density,
    relative_entropy,
    suite_ids,
    trace_distance,
    von_neumann_entropy,
)

__version__ = _qcomm.__version__


def verify(suite, trials=0, seed=0):
    """Run a property suite; ``trials=0`` uses the suite default."""
    return json.loads(_qcomm.verify_json(suite, trials, seed))


def simulate(protocol, n=4, k=2, eps=0.2, trials=100, seed=0, exhaustive=False):
    return json.loads(_qcomm.simulate_json(protocol, n, k, eps, trials, seed, exhaustive))


def reduce(instance):
    """Map an S_k instance (dict) to a disjointness instance with certificate."""
    return json.loads(_qcomm.reduce_json(json.dumps(instance)))


def bundled_schedule(name):
    return json.loads(_qcomm.bundled_schedule_json(name))


def schedule_report(schedule):
    return json.loads(_qcomm.schedule_report_json(json.dumps(schedule)))


__all__ = [
    "ProtocolError",
    "bundled_schedule",
    "fidelity",
    "hellinger",
    "informational_distance",
    "mutual_information",
    "protocol_ids",
    "random_density",
    "reduce",
    "relative_entropy",
    "schedule_report",
    "simulate",
    "suite_ids",
    "trace_distance",
    "verify",
    "von_neumann_entropy",
]
