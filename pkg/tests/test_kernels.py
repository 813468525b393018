"""The compiled fixpoint loops must reproduce the pure-Python ones exactly."""

import numpy as np
import pytest

from helpers import labeled_321, labeled_skew
from permmatch import match321, matchskew
from permmatch.oracle import random_avoider
from permmatch.perm import normalize_subsequence, verify_embedding

MATCHERS = {"av321": match321.match_321, "skew": matchskew.match_skew_merged}


def _set_threshold(monkeypatch, value):
    monkeypatch.setattr(match321, "KERNEL_MIN_TEXT", value)
    monkeypatch.setattr(matchskew, "KERNEL_MIN_TEXT", value)


def _outcome(res):
    return res.found, res.embedding, res.iterations


def _random_cases(cls, count, max_n, seed):
    rng = np.random.default_rng(seed)
    cases = []
    for i in range(count):
        n = int(rng.integers(1, max_n + 1))
        k = int(rng.integers(1, n + 1))
        text = random_avoider(cls, n, 2 * (seed + i))
        if i % 3 == 0:
            positions = sorted(int(y) for y in rng.choice(n, size=k, replace=False) + 1)
            pattern = normalize_subsequence(text, positions)
        else:
            pattern = random_avoider(cls, k, 2 * (seed + i) + 1)
        cases.append((pattern, text))
    return cases


@pytest.mark.parametrize("cls", ["av321", "skew"])
def test_compiled_matches_python_on_random_instances(cls, monkeypatch):
    match = MATCHERS[cls]
    cases = _random_cases(cls, 600, 60, seed=11)
    plain = [_outcome(match(p, t)) for p, t in cases]
    _set_threshold(monkeypatch, 0)
    compiled = [_outcome(match(p, t)) for p, t in cases]
    assert compiled == plain


@pytest.mark.parametrize("cls", ["av321", "skew"])
def test_compiled_matches_python_exhaustively(cls, monkeypatch):
    match = MATCHERS[cls]
    labeled = labeled_321(5) if cls == "av321" else labeled_skew(5)
    pairs = [(p, t) for t, _ in labeled for p, _ in labeled if p.n <= t.n]
    plain = [_outcome(match(p, t)) for p, t in pairs]
    _set_threshold(monkeypatch, 0)
    assert [_outcome(match(p, t)) for p, t in pairs] == plain


@pytest.mark.parametrize("cls", ["av321", "skew"])
def test_large_text_uses_compiled_loop(cls, monkeypatch):
    match = MATCHERS[cls]
    n, k = 3 * match321.KERNEL_MIN_TEXT, 60
    text = random_avoider(cls, n, 5)
    rng = np.random.default_rng(5)
    planted = normalize_subsequence(text, sorted(int(y) for y in rng.choice(n, size=k, replace=False) + 1))
    other = random_avoider(cls, k, 6)
    fast = [match(p, text) for p in (planted, other)]
    assert fast[0].found and verify_embedding(planted, text, fast[0].embedding)
    _set_threshold(monkeypatch, 10**9)
    slow = [match(p, text) for p in (planted, other)]
    assert list(map(_outcome, fast)) == list(map(_outcome, slow))
