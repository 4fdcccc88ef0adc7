"""Independent reference implementations used to validate the library.

Everything here is deliberately written by the slowest, most direct route
(per-pattern loops, full enumerations, full rescans) and shares no code with
the production paths it checks.
"""

import numpy as np


def direct_cost(w, mapping) -> int:
    """Misclassification count via an explicit per-pattern loop."""
    bad = 0
    for l in range(mapping.m):
        s = 0
        for k in range(mapping.f):
            s += int(w[k]) * int(mapping.patterns[l, k])
        out = 1 if s >= 0 else -1
        if out != int(mapping.targets[l]):
            bad += 1
    return bad


def all_strings(f: int) -> np.ndarray:
    """All 2^f strings, ordered lexicographically with +1 < -1 and entry 0
    most significant (row index == the library's minimizer encoding)."""
    codes = np.arange(1 << f, dtype=np.int64)
    bits = (codes[:, None] >> np.arange(f - 1, -1, -1)) & 1
    return (1 - 2 * bits).astype(np.int8)


def direct_enumeration(mapping):
    """(min_cost, minimizer_count, lexicographically smallest minimizer,
    all 2^F costs) by brute force, no Gray code, no incremental updates."""
    ws = all_strings(mapping.f)
    h = ws.astype(np.int64) @ mapping.patterns.T.astype(np.int64)
    costs = (mapping.targets.astype(np.int64)[None, :] * h <= 0).sum(axis=1)
    mc = int(costs.min())
    idx = np.nonzero(costs == mc)[0]
    return mc, int(idx.size), ws[idx[0]].copy(), costs


def rescan_active(strings, adjacency) -> np.ndarray:
    """Active agents recomputed from scratch: differ from >= 1 neighbor."""
    act = []
    for i in range(strings.shape[0]):
        if any((strings[i] != strings[j]).any() for j in adjacency[i]):
            act.append(i)
    return np.array(sorted(act), dtype=np.int64)


def check_population_coherent(pop) -> None:
    """Assert every cached quantity in a Population against full recomputes."""
    from ach.perceptron import cost

    n = pop.graph.n
    adj = pop.graph.adjacency
    for i in range(n):
        assert pop.costs[i] == direct_cost(pop.strings[i], pop.mapping), \
            f"cost cache wrong at agent {i}"
        assert pop.costs[i] == cost(pop.strings[i], pop.mapping)
    for i in range(n):
        for b in range(pop.graph.degree):
            d = int((pop.strings[i] != pop.strings[adj[i, b]]).sum())
            assert pop.ddist[i, b] == d, f"ddist wrong at ({i},{b})"
        expected_diff = sum(int(pop.ddist[i, b] > 0)
                            for b in range(pop.graph.degree))
        assert pop.diffcnt[i] == expected_diff
    expected_active = rescan_active(pop.strings, adj)
    got = pop.active_agents()
    assert np.array_equal(got, expected_active), \
        f"active set mismatch: {got} vs {expected_active}"
    for i in range(n):
        if pop.pos[i] >= 0:
            assert pop.active[pop.pos[i]] == i
