"""Adaptive-culture dynamics over a population of binary perceptron strings.

Each node of an interaction graph holds a weight string in {-1, +1}^F.  An
agent is active when its string differs from at least one neighbor's string.
One event of the dynamics:

  1. draw a target agent uniformly from the active set, then one of its
     neighbors uniformly;
  2. if the strings differ and cost(target) >= cost(neighbor), flip one
     uniformly chosen entry where they differ (the flip copies the neighbor's
     value at that entry, so the pair's Hamming distance decreases by 1);
  3. otherwise nothing changes.  Only the target is ever modified.

Interactions proceed on cost equality, and the target's cost may increase;
both are essential to the dynamics.  The population freezes when the active
set empties, at which point every connected component is homogeneous.

Time is accounted in naive whole-population attempt units: each event adds
n / |active set| to the clock, the expected number of uniform whole-population
picks needed to hit an active agent.  That makes the clock independent of the
active-list bookkeeping (which is a pure efficiency device) and directly
comparable across system sizes.  The raw event count is reported as well.

The hot loop is compiled with numba and maintains, per agent: local fields
(O(M) per-flip cost updates), a cached cost, per-edge Hamming distances, and
a count of differing neighbors backing an O(1) swap-remove active list.  A
pure-Python step() drives the identical update logic one event at a time and
consumes the generator in the same order, so a step()-driven run reproduces a
kernel run draw for draw; tests rely on that.

For validation there is also a uniform-selection mode that draws targets from
the whole population (inactive picks are no-ops that advance the clock by one
attempt); its absorbing-state statistics must match the active-list mode.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass, field
from typing import Optional

import numpy as np
from numba import njit

from .perceptron import Mapping, _check_f
from .topology import Graph, component_labels, reverse_index


@njit(cache=True, nogil=True)
def _draw_strings(n, f, rng):
    strings = np.empty((n, f), dtype=np.int8)
    for i in range(n):
        for k in range(f):
            strings[i, k] = np.int8(2 * rng.integers(0, 2) - 1)
    return strings


@njit(cache=True, nogil=True)
def _derive_state(adj, pat_t, targets, strings):
    """Fields, cached costs, edge distances, diff counts and the active list,
    all rebuilt from scratch by full scans."""
    n, deg = adj.shape
    f, m = pat_t.shape
    fields = np.empty((n, m), dtype=np.int32)
    costs = np.empty(n, dtype=np.int64)
    for i in range(n):
        c = 0
        for l in range(m):
            h = 0
            for k in range(f):
                h += strings[i, k] * pat_t[k, l]
            fields[i, l] = h
            if targets[l] * h <= 0:
                c += 1
        costs[i] = c
    ddist = np.empty((n, deg), dtype=np.int16)
    diffcnt = np.zeros(n, dtype=np.int16)
    for i in range(n):
        for b in range(deg):
            j = adj[i, b]
            d = 0
            for k in range(f):
                if strings[i, k] != strings[j, k]:
                    d += 1
            ddist[i, b] = d
            if d > 0:
                diffcnt[i] += 1
    active = np.empty(n, dtype=np.int32)
    pos = np.full(n, -1, dtype=np.int32)
    acount = 0
    for i in range(n):
        if diffcnt[i] > 0:
            pos[i] = acount
            active[acount] = i
            acount += 1
    return fields, costs, ddist, diffcnt, active, pos, acount


@njit(cache=True, nogil=True)
def _event_loop(adj, rev, pat_t, targets, strings, fields, costs, ddist,
                diffcnt, active, pos, acount, t_clock, events, interactions,
                min_seen, rng, max_events, uniform):
    """Run events until absorption or the event cap; mutates state in place.

    Per event the generator is consumed in a fixed order: target draw,
    neighbor draw, then (only if interacting) the differing-entry draw.
    """
    n, deg = adj.shape
    f, m = pat_t.shape
    while acount > 0 and events < max_events:
        if uniform:
            t_clock += 1.0
            ti = rng.integers(0, n)
        else:
            t_clock += n / acount
            ti = active[rng.integers(0, acount)]
        events += 1
        a = rng.integers(0, deg)
        nj = adj[ti, a]
        d = ddist[ti, a]
        if d > 0 and costs[ti] >= costs[nj]:
            interactions += 1
            r = rng.integers(0, d)
            k = -1
            cnt = 0
            for kk in range(f):
                if strings[ti, kk] != strings[nj, kk]:
                    if cnt == r:
                        k = kk
                        break
                    cnt += 1
            if k < 0:
                raise RuntimeError("distance cache out of sync with strings")
            w_old = strings[ti, k]
            strings[ti, k] = -w_old
            dlt = 0
            for l in range(m):
                h = fields[ti, l]
                hn = h - 2 * w_old * pat_t[k, l]
                fields[ti, l] = hn
                tl = targets[l]
                if tl * h <= 0:
                    dlt -= 1
                if tl * hn <= 0:
                    dlt += 1
            costs[ti] += dlt
            if costs[ti] < min_seen:
                min_seen = costs[ti]
            # the flip moved the target one entry closer to nj and one away
            # from (or closer to) each other neighbor; update both copies of
            # every incident edge distance and the two activity counters
            for b in range(deg):
                j = adj[ti, b]
                old = ddist[ti, b]
                if strings[j, k] == strings[ti, k]:
                    nd = old - 1
                else:
                    nd = old + 1
                ddist[ti, b] = nd
                ddist[j, rev[ti, b]] = nd
                if nd == 0:
                    diffcnt[ti] -= 1
                    if diffcnt[ti] == 0:
                        p = pos[ti]
                        last = active[acount - 1]
                        active[p] = last
                        pos[last] = p
                        acount -= 1
                        pos[ti] = -1
                    diffcnt[j] -= 1
                    if diffcnt[j] == 0:
                        p = pos[j]
                        last = active[acount - 1]
                        active[p] = last
                        pos[last] = p
                        acount -= 1
                        pos[j] = -1
                elif old == 0:
                    diffcnt[ti] += 1
                    if diffcnt[ti] == 1:
                        pos[ti] = acount
                        active[acount] = ti
                        acount += 1
                    diffcnt[j] += 1
                    if diffcnt[j] == 1:
                        pos[j] = acount
                        active[acount] = j
                        acount += 1
    return acount, t_clock, events, interactions, min_seen


@dataclass
class Population:
    """Complete dynamical state of one run; arrays are owned, not shared."""

    graph: Graph
    mapping: Mapping
    strings: np.ndarray   # (n, F) int8
    fields: np.ndarray    # (n, M) int32
    costs: np.ndarray     # (n,) int64, cached cost per agent
    ddist: np.ndarray     # (n, degree) int16 Hamming distance per edge
    diffcnt: np.ndarray   # (n,) int16, number of differing neighbors
    active: np.ndarray    # (n,) int32, active agents in slots [0, acount)
    pos: np.ndarray       # (n,) int32, slot of agent in active, -1 if inactive
    acount: int
    rev: np.ndarray
    clock: float = 0.0
    events: int = 0
    interactions: int = 0
    min_cost_seen: int = 0
    _pat_t: np.ndarray = field(repr=False, default=None)

    @property
    def n(self) -> int:
        return self.graph.n

    @property
    def is_absorbed(self) -> bool:
        return self.acount == 0

    def active_agents(self) -> np.ndarray:
        return np.sort(self.active[:self.acount].copy())


@dataclass(frozen=True)
class EventRecord:
    event_index: int
    target: int
    neighbor: int
    interacted: bool
    flipped_index: Optional[int]
    time_increment: float
    clock: float


@dataclass(frozen=True)
class RunResult:
    """Outcome of one run to absorption.

    final_string / final_cost are the best consensus at the end (on a
    connected graph the unique consensus; on a disconnected graph the
    minimum-cost component's).  success means absorbed at the known minimum.
    relaxation_time is in naive attempt units, event_count in active-list
    events.  interaction_count and min_cost_seen are extra diagnostics: the
    number of events that flipped an entry, and the lowest cost any agent
    held at any time (success is judged at absorption only, not on transient
    visits).
    """

    final_string: np.ndarray
    final_cost: int
    success: bool
    relaxation_time: float
    event_count: int
    absorbed: bool
    interaction_count: int
    min_cost_seen: int


def init_population(graph: Graph, mapping: Mapping,
                    rng: Optional[np.random.Generator] = None,
                    strings: Optional[np.ndarray] = None) -> Population:
    """Random iid +-1 strings (or the given ones) with all caches built.

    Exactly one of rng / strings must drive the initial condition; passing
    explicit strings is a test hook and consumes no randomness.
    """
    _check_f(mapping.f)
    pat_t = np.ascontiguousarray(mapping.patterns.T).astype(np.int8)
    targets = mapping.targets.astype(np.int8)
    if strings is None:
        if rng is None:
            raise ValueError("need an rng when strings are not given")
        strings = _draw_strings(graph.n, mapping.f, rng)
    else:
        strings = np.array(strings, dtype=np.int8)
        if strings.shape != (graph.n, mapping.f):
            raise ValueError(f"strings must be shape {(graph.n, mapping.f)}")
        if not np.isin(strings, (-1, 1)).all():
            raise ValueError("strings entries must be +1/-1")
    fields, costs, ddist, diffcnt, active, pos, acount = _derive_state(
        graph.adjacency, pat_t, targets, strings)
    return Population(graph, mapping, strings, fields, costs, ddist, diffcnt,
                      active, pos, int(acount), reverse_index(graph),
                      min_cost_seen=int(costs.min()) if graph.n else 0,
                      _pat_t=pat_t)


def step(pop: Population, rng: np.random.Generator,
         uniform_selection: bool = False) -> EventRecord:
    """Execute one event in pure Python; draw-for-draw equal to the kernel."""
    if pop.acount == 0:
        raise RuntimeError("step() called on an absorbed population")
    n = pop.n
    deg = pop.graph.degree
    f = pop.mapping.f
    if uniform_selection:
        dt = 1.0
        ti = int(rng.integers(0, n))
    else:
        dt = n / pop.acount
        ti = int(pop.active[int(rng.integers(0, pop.acount))])
    pop.clock += dt
    pop.events += 1
    a = int(rng.integers(0, deg))
    nj = int(pop.graph.adjacency[ti, a])
    d = int(pop.ddist[ti, a])
    if d == 0 or pop.costs[ti] < pop.costs[nj]:
        return EventRecord(pop.events, ti, nj, False, None, dt, pop.clock)
    pop.interactions += 1
    r = int(rng.integers(0, d))
    diff = np.nonzero(pop.strings[ti] != pop.strings[nj])[0]
    k = int(diff[r])
    w_old = int(pop.strings[ti, k])
    pop.strings[ti, k] = -w_old
    t = pop.mapping.targets.astype(np.int32)
    h_old = pop.fields[ti].copy()
    pop.fields[ti] -= (2 * w_old) * pop.mapping.patterns[:, k].astype(np.int32)
    dlt = int(np.count_nonzero(t * pop.fields[ti] <= 0)
              - np.count_nonzero(t * h_old <= 0))
    pop.costs[ti] += dlt
    pop.min_cost_seen = min(pop.min_cost_seen, int(pop.costs[ti]))
    for b in range(deg):
        j = int(pop.graph.adjacency[ti, b])
        old = int(pop.ddist[ti, b])
        nd = old - 1 if pop.strings[j, k] == pop.strings[ti, k] else old + 1
        pop.ddist[ti, b] = nd
        pop.ddist[j, pop.rev[ti, b]] = nd
        if nd == 0:
            for node in (ti, j):
                pop.diffcnt[node] -= 1
                if pop.diffcnt[node] == 0:
                    p = int(pop.pos[node])
                    last = int(pop.active[pop.acount - 1])
                    pop.active[p] = last
                    pop.pos[last] = p
                    pop.acount -= 1
                    pop.pos[node] = -1
        elif old == 0:
            for node in (ti, j):
                pop.diffcnt[node] += 1
                if pop.diffcnt[node] == 1:
                    pop.pos[node] = pop.acount
                    pop.active[pop.acount] = node
                    pop.acount += 1
    return EventRecord(pop.events, ti, nj, True, k, dt, pop.clock)


def run_population(pop: Population, rng: np.random.Generator,
                   max_events: int = 10**9,
                   uniform_selection: bool = False) -> Population:
    """Drive a population to absorption (or the event cap) with the kernel."""
    acount, clock, events, inter, mins = _event_loop(
        pop.graph.adjacency, pop.rev, pop._pat_t,
        pop.mapping.targets.astype(np.int8), pop.strings, pop.fields,
        pop.costs, pop.ddist, pop.diffcnt, pop.active, pop.pos,
        pop.acount, pop.clock, pop.events, pop.interactions,
        pop.min_cost_seen, rng, max_events, uniform_selection)
    pop.acount = int(acount)
    pop.clock = float(clock)
    pop.events = int(events)
    pop.interactions = int(inter)
    pop.min_cost_seen = int(mins)
    return pop


def _result(pop: Population, known_minimum: int) -> RunResult:
    best = int(np.argmin(pop.costs))
    final_cost = int(pop.costs[best])
    absorbed = pop.is_absorbed
    return RunResult(
        final_string=pop.strings[best].copy(),
        final_cost=final_cost,
        success=bool(absorbed and final_cost == known_minimum),
        relaxation_time=pop.clock,
        event_count=pop.events,
        absorbed=absorbed,
        interaction_count=pop.interactions,
        min_cost_seen=pop.min_cost_seen,
    )


def run_to_absorption(graph: Graph, mapping: Mapping, known_minimum: int,
                      rng: np.random.Generator, max_events: int = 10**9,
                      uniform_selection: bool = False,
                      trace: Optional[str] = None) -> RunResult:
    """Fresh random population run until the active set empties.

    known_minimum is the instance's true minimum cost (0 for teacher
    mappings, oracle output otherwise); success compares against it at
    absorption.  If the max_events safety cap trips first the result is
    flagged absorbed=False and success=False (a non-absorbed outcome, not a
    failure to optimize).  With trace=path the run is driven event by event
    through step() instead of the kernel (same generator consumption, so the
    same trajectory) and each event is appended to a CSV file.
    """
    pop = init_population(graph, mapping, rng)
    if trace is None:
        run_population(pop, rng, max_events, uniform_selection)
        return _result(pop, known_minimum)
    with open(trace, "w", newline="") as fh:
        wr = csv.writer(fh, lineterminator="\n")
        wr.writerow(["event_index", "target", "neighbor", "interacted",
                     "flipped_index", "clock"])
        while pop.acount > 0 and pop.events < max_events:
            ev = step(pop, rng, uniform_selection)
            wr.writerow([ev.event_index, ev.target, ev.neighbor,
                         int(ev.interacted),
                         "" if ev.flipped_index is None else ev.flipped_index,
                         repr(ev.clock)])
    return _result(pop, known_minimum)


def is_homogeneous(pop: Population) -> bool:
    """True iff every connected component holds a single common string."""
    labels = component_labels(pop.graph)
    for lab in np.unique(labels):
        block = pop.strings[labels == lab]
        if block.shape[0] > 1 and (block != block[0]).any():
            return False
    return True
