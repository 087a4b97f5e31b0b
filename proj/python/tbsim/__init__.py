"""Truebit-style verification game simulator."""

import json as _json
from fractions import Fraction

from . import _core
from ._core import TbsimError, challenge_index, hash_parts, merkle_root, personalize, prob, seal

__all__ = [
    "TbsimError",
    "attack_probability",
    "challenge_index",
    "empirical_attack_rate",
    "execute",
    "execute_faulty",
    "hash_parts",
    "merkle_root",
    "personalize",
    "prob",
    "run_montecarlo",
    "run_single",
    "seal",
]


def _dump(obj):
    return obj if isinstance(obj, str) else _json.dumps(obj)


def attack_probability(q, n, k):
    num, den = _core.attack_probability(q, n, k)
    return Fraction(num, den)


def empirical_attack_rate(q, n, k, trials, seed=0):
    return _core.empirical_attack_rate(q, n, k, trials, seed)


def execute(program):
    return _core.execute(_dump(program))


def execute_faulty(program, fault_step, corruption=1):
    return _core.execute_faulty(_dump(program), fault_step, corruption)


def run_single(config):
    """Returns (report dict, list of event dicts, summary text)."""
    report, events, summary = _core.run_single(_dump(config))
    return _json.loads(report), [_json.loads(line) for line in events.splitlines() if line], summary


def run_montecarlo(config):
    """Returns (trials.csv text, summary.csv text)."""
    return _core.run_montecarlo(_dump(config))
