"""Discrete-round simulator of ad-hoc radio networks with collision semantics.

Nodes are labeled 0..n-1 (the label universe equals the node set here).  In
each round a set of nodes transmits; node v receives a message iff exactly
one of its in-neighbors transmits (two or more collide, and v cannot tell a
collision from silence).  On top of this channel the module implements
deterministic round-robin broadcast, the rumor-grouping Disperse loop, the
selector-driven quasi-gossip protocol, and full gossip by schedule replay.

Cost accounting note: choosing each Disperse source would take a broadcast
and binary-search sub-protocol in a fully distributed setting.  The
simulator selects the source with global knowledge and instead charges an
accounting surcharge of (rounds of that broadcast) * ceil(log2 n) rounds
per selection; surcharge rounds advance the round counter but produce no
transmission records.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Iterable, Optional, Sequence

import numpy as np

from .errors import (
    BudgetExceededError,
    GossipIncompleteError,
    NotStronglyConnectedError,
    QuasiGossipFailedError,
    UnreachableNodeError,
)
from .selectors import Selector

Hook = Callable[..., None]


# ---------------------------------------------------------------------------
# network
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Network:
    """Directed graph on nodes 0..n-1.  Self-loops may be present in
    out_edges but are ignored by the delivery rule."""

    out_edges: tuple[frozenset[int], ...]

    def __post_init__(self):
        object.__setattr__(self, "out_edges", tuple(frozenset(s) for s in self.out_edges))
        n = len(self.out_edges)
        for v, outs in enumerate(self.out_edges):
            for w in outs:
                if not 0 <= w < n:
                    raise ValueError(f"node {v} has out-edge to {w} outside [0, {n})")
        in_nbrs = [set() for _ in range(n)]
        for u, outs in enumerate(self.out_edges):
            for v in outs:
                if v != u:
                    in_nbrs[v].add(u)
        object.__setattr__(self, "in_neighbors", tuple(frozenset(s) for s in in_nbrs))

    @property
    def n(self) -> int:
        return len(self.out_edges)


def network_to_text(network: Network) -> str:
    lines = [str(network.n)]
    for v in range(network.n):
        outs = " ".join(str(w) for w in sorted(network.out_edges[v]))
        lines.append(f"{v}: {outs}".rstrip())
    return "\n".join(lines) + "\n"


def network_from_text(text: str) -> Network:
    lines = [line for line in text.split("\n") if line.strip()]
    if not lines:
        raise ValueError("empty network file")
    n = int(lines[0])
    if len(lines) - 1 != n:
        raise ValueError(f"expected {n} node lines, found {len(lines) - 1}")
    out_edges: list[Optional[frozenset[int]]] = [None] * n
    for line in lines[1:]:
        head, _, rest = line.partition(":")
        v = int(head)
        if not 0 <= v < n:
            raise ValueError(f"node label {v} outside [0, {n})")
        if out_edges[v] is not None:
            raise ValueError(f"duplicate line for node {v}")
        out_edges[v] = frozenset(int(w) for w in rest.split())
    return Network(tuple(s if s is not None else frozenset() for s in out_edges))


def save_network(path, network: Network) -> None:
    with open(path, "w", encoding="utf-8") as f:
        f.write(network_to_text(network))


def load_network(path) -> Network:
    with open(path, "r", encoding="utf-8") as f:
        return network_from_text(f.read())


def random_strongly_connected(n: int, extra_edge_prob: float, seed: int) -> Network:
    """A directed Hamiltonian cycle over a random permutation plus independent
    extra edges, each present with the given probability."""
    if n < 1:
        raise ValueError("n must be at least 1")
    if not 0.0 <= extra_edge_prob <= 1.0:
        raise ValueError("extra_edge_prob must be in [0, 1]")
    rng = np.random.Generator(np.random.PCG64(np.random.SeedSequence(seed)))
    out_edges = [set() for _ in range(n)]
    if n > 1:
        perm = [int(x) for x in rng.permutation(n)]
        for i in range(n):
            out_edges[perm[i]].add(perm[(i + 1) % n])
        extras = rng.random((n, n)) < extra_edge_prob
        for u in range(n):
            for v in range(n):
                if u != v and extras[u, v]:
                    out_edges[u].add(v)
    return Network(tuple(frozenset(s) for s in out_edges))


def _reachable(out_edges: Sequence[frozenset[int]], start: int) -> set[int]:
    seen = {start}
    frontier = [start]
    while frontier:
        nxt = []
        for u in frontier:
            for v in out_edges[u]:
                if v not in seen:
                    seen.add(v)
                    nxt.append(v)
        frontier = nxt
    return seen


def is_strongly_connected(network: Network) -> bool:
    n = network.n
    if n <= 1:
        return True
    if len(_reachable(network.out_edges, 0)) != n:
        return False
    reverse = [set() for _ in range(n)]
    for u, outs in enumerate(network.out_edges):
        for v in outs:
            reverse[v].add(u)
    return len(_reachable([frozenset(s) for s in reverse], 0)) == n


# ---------------------------------------------------------------------------
# state and traces
# ---------------------------------------------------------------------------

class SimState:
    """Mutable per-run state: rumor sets, rumor activity, round accounting.

    A rumor is identified by its originator's label; node v is active iff
    rumor v is still active (never broadcast).
    """

    def __init__(self, network: Network):
        self.network = network
        self.rumors_held: list[set[int]] = [{v} for v in range(network.n)]
        self.rumor_active: list[bool] = [True] * network.n
        self.round: int = 0
        self.phase_rounds: dict[str, int] = {}

    def active(self, v: int) -> bool:
        return self.rumor_active[v]

    def active_nodes(self) -> frozenset[int]:
        return frozenset(v for v in range(self.network.n) if self.rumor_active[v])

    def active_rumor_count(self, v: int) -> int:
        return sum(1 for r in self.rumors_held[v] if self.rumor_active[r])

    def charge(self, phase: str, rounds: int) -> None:
        self.round += rounds
        self.phase_rounds[phase] = self.phase_rounds.get(phase, 0) + rounds


def initial_state(network: Network) -> SimState:
    return SimState(network)


@dataclass(frozen=True)
class RoundRecord:
    """One transmission round: who transmitted, who received from whom, and
    which nodes saw a collision (two or more transmitting in-neighbors)."""

    index: int
    phase: str
    transmitters: frozenset[int]
    received: tuple[tuple[int, int], ...]  # (receiver, sender), sorted by receiver
    collisions: frozenset[int]
    rumor_total: int

    def line(self) -> str:
        tx = ",".join(str(v) for v in sorted(self.transmitters))
        rx = ",".join(f"{v}<-{u}" for v, u in self.received)
        coll = ",".join(str(v) for v in sorted(self.collisions))
        return f"round={self.index} tx={{{tx}}} rx=[{rx}] collisions=[{coll}]"


class TraceBuilder:
    def __init__(self):
        self.records: list[RoundRecord] = []
        self.checks: dict[str, object] = {}
        self.replay_start: Optional[int] = None

    def freeze(self, state: SimState) -> "SimTrace":
        return SimTrace(
            records=tuple(self.records),
            phase_rounds=dict(state.phase_rounds),
            total_rounds=state.round,
            checks=dict(self.checks),
            replay_start=self.replay_start,
            final_rumors_held=tuple(frozenset(s) for s in state.rumors_held),
        )


@dataclass(frozen=True)
class SimTrace:
    """Immutable record of a finished run."""

    records: tuple[RoundRecord, ...]
    phase_rounds: dict[str, int]
    total_rounds: int
    checks: dict[str, object]
    replay_start: Optional[int]
    final_rumors_held: tuple[frozenset[int], ...]

    def summary_line(self) -> str:
        return (
            f"rounds_total={self.total_rounds}"
            f" rounds_selector={self.phase_rounds.get('selector', 0)}"
            f" rounds_disperse={self.phase_rounds.get('disperse', 0)}"
            f" rounds_rr={self.phase_rounds.get('rr', 0)}"
        )

    def to_text(self) -> str:
        lines = [rec.line() for rec in self.records]
        lines.append(self.summary_line())
        return "\n".join(lines) + "\n"


def save_trace(path, trace: SimTrace) -> None:
    with open(path, "w", encoding="utf-8") as f:
        f.write(trace.to_text())


# ---------------------------------------------------------------------------
# channel
# ---------------------------------------------------------------------------

def step(network: Network, state: SimState, transmitters: Iterable[int],
         message_of: Optional[Callable[[int], Iterable[int]]] = None,
         phase: str = "manual", trace: Optional[TraceBuilder] = None) -> RoundRecord:
    """Run one round: every transmitter sends simultaneously; node v receives
    iff it has exactly one transmitting in-neighbor.

    Messages default to each transmitter's full rumor set, snapshotted at
    the start of the round.
    """
    tx = frozenset(transmitters)
    for u in tx:
        if not 0 <= u < network.n:
            raise ValueError(f"unknown transmitter label {u}")
    msgs = {u: frozenset(message_of(u)) if message_of is not None else frozenset(state.rumors_held[u])
            for u in tx}
    count: dict[int, int] = {}
    sender: dict[int, int] = {}
    for u in tx:
        for v in network.out_edges[u]:
            if v == u:
                continue
            count[v] = count.get(v, 0) + 1
            sender[v] = u
    received = tuple(sorted((v, sender[v]) for v, c in count.items() if c == 1))
    collisions = frozenset(v for v, c in count.items() if c >= 2)
    for v, u in received:
        state.rumors_held[v] |= msgs[u]
    record = RoundRecord(
        index=state.round,
        phase=phase,
        transmitters=tx,
        received=received,
        collisions=collisions,
        rumor_total=sum(len(s) for s in state.rumors_held),
    )
    state.charge(phase, 1)
    if trace is not None:
        trace.records.append(record)
    return record


def audit_trace(network: Network, trace: SimTrace) -> bool:
    """Re-derive every delivery and collision from the transmitter sets and
    the topology; raises on any inconsistency."""
    for rec in trace.records:
        count: dict[int, int] = {}
        sender: dict[int, int] = {}
        for u in rec.transmitters:
            for v in network.out_edges[u]:
                if v == u:
                    continue
                count[v] = count.get(v, 0) + 1
                sender[v] = u
        received = tuple(sorted((v, sender[v]) for v, c in count.items() if c == 1))
        collisions = frozenset(v for v, c in count.items() if c >= 2)
        if received != rec.received or collisions != rec.collisions:
            raise ValueError(f"round {rec.index}: trace inconsistent with the collision rule")
    return True


# ---------------------------------------------------------------------------
# broadcast
# ---------------------------------------------------------------------------

def _broadcast_round_robin(network: Network, state: SimState, source: int,
                           phase: str, trace: Optional[TraceBuilder]) -> int:
    """Deterministic broadcast: repeat the singleton schedule {0},{1},...,
    {n-1}, each node transmitting in its slot once it holds the payload.
    Each pass pushes the payload one distance layer further; the run stops
    as soon as every node holds it (global completion check)."""
    payload = frozenset(state.rumors_held[source])
    holds = [payload <= state.rumors_held[v] for v in range(network.n)]
    rounds = 0
    for _ in range(network.n):
        for slot in range(network.n):
            if all(holds):
                return rounds
            step(network, state, {slot} if holds[slot] else (), phase=phase, trace=trace)
            rounds += 1
            if holds[slot]:
                for w in network.out_edges[slot]:
                    if w != slot and payload <= state.rumors_held[w]:
                        holds[w] = True
    if not all(holds):
        raise RuntimeError(f"broadcast from {source} did not complete in n^2 rounds")
    return rounds


BROADCAST_STRATEGIES = {"round_robin": _broadcast_round_robin}


def broadcast(network: Network, state: SimState, source: int,
              strategy="round_robin", phase: str = "disperse",
              trace: Optional[TraceBuilder] = None) -> int:
    """Deliver the source's current rumor set to every node; returns the
    number of rounds used.  `strategy` is the name of a registered strategy
    or a callable with the same signature as the default."""
    if not 0 <= source < network.n:
        raise ValueError(f"unknown source label {source}")
    reachable = _reachable(network.out_edges, source)
    if len(reachable) != network.n:
        missing = min(set(range(network.n)) - reachable)
        raise UnreachableNodeError(source, missing)
    fn = BROADCAST_STRATEGIES[strategy] if isinstance(strategy, str) else strategy
    return fn(network, state, source, phase, trace)


def measure_broadcast_rounds(network: Network, source: int = 0) -> int:
    """Rounds the default broadcast takes on a fresh state; a practical stand-in
    for the broadcast-time parameter of `choose_kappa`."""
    return broadcast(network, SimState(network), source)


# ---------------------------------------------------------------------------
# disperse and gossip
# ---------------------------------------------------------------------------

def disperse(network: Network, state: SimState, mu: int,
             strategy="round_robin", trace: Optional[TraceBuilder] = None,
             hook: Optional[Hook] = None) -> int:
    """While some node holds at least mu active rumors, broadcast from the
    node holding the most (lowest label on ties) and mark every rumor it
    carried at the start of its broadcast dormant.  Returns the number of
    selections.  Each selection is surcharged per the module cost note."""
    if mu < 1:
        raise ValueError("mu must be at least 1")
    selections = 0
    log_factor = math.ceil(math.log2(network.n)) if network.n > 1 else 0
    while True:
        counts = [state.active_rumor_count(v) for v in range(network.n)]
        best = max(counts, default=0)
        if best < mu:
            break
        source = counts.index(best)  # lowest label among the maxima
        payload = frozenset(state.rumors_held[source])
        rounds = broadcast(network, state, source, strategy, "disperse", trace)
        state.charge("disperse", rounds * log_factor)  # selection surcharge
        for r in payload:
            state.rumor_active[r] = False
        selections += 1
    if hook is not None:
        hook("after_disperse", network, state, mu=mu, selections=selections)
    return selections


def check_quasi_gossip_done(network: Network, state: SimState) -> bool:
    """True iff every node is dormant or its rumor has reached a dormant node."""
    dormant_union: set[int] = set()
    for w in range(network.n):
        if not state.rumor_active[w]:
            dormant_union |= state.rumors_held[w]
    return all(not state.rumor_active[v] or v in dormant_union for v in range(network.n))


def _max_active_in_degree(network: Network, state: SimState) -> int:
    return max(
        (sum(1 for u in network.in_neighbors[v] if state.rumor_active[u]) for v in range(network.n)),
        default=0,
    )


def quasi_gossip(network: Network, state: SimState, kappa: int,
                 selector_provider: Callable[[int, int], Selector],
                 strategy="round_robin", trace: Optional[TraceBuilder] = None,
                 hook: Optional[Hook] = None) -> TraceBuilder:
    """Run the quasi-gossip protocol:

      1. one singleton pass where each node transmits its rumors in turn,
      2. Disperse(kappa),
      3. ceil(log2 kappa) + 1 repetitions of [active nodes transmit along a
         (kappa, n)-permutation selector; Disperse(ceil(kappa/2))].

    The task's postcondition (`check_quasi_gossip_done`) is checked after
    step 2 and after each repetition; since it is monotone under further
    rounds, the run stops early once it holds.  The selector is fetched
    once and reused across repetitions.  Raises QuasiGossipFailedError if
    either the in-neighborhood reduction after step 2 or the final
    postcondition fails (both would indicate a non-selector input or a
    simulator bug).
    """
    if kappa < 1:
        raise ValueError("kappa must be at least 1")
    if trace is None:
        trace = TraceBuilder()
    for v in range(network.n):
        step(network, state, {v}, phase="rr", trace=trace)
    disperse(network, state, kappa, strategy, trace, hook)
    max_in = _max_active_in_degree(network, state)
    trace.checks["post_line4_max_active_in_degree"] = max_in
    if max_in >= kappa:
        raise QuasiGossipFailedError(
            f"after Disperse(kappa) some node still has {max_in} >= kappa={kappa} active in-neighbors"
        )
    if hook is not None:
        hook("after_line4", network, state, kappa=kappa)
    done = check_quasi_gossip_done(network, state)
    if not done:
        selector = selector_provider(kappa, network.n)
        iterations = math.ceil(math.log2(kappa)) + 1 if kappa > 1 else 1
        half = math.ceil(kappa / 2)
        for iteration in range(iterations):
            active = state.active_nodes()
            for s in selector.sets:
                step(network, state, s & active, phase="selector", trace=trace)
            disperse(network, state, half, strategy, trace, hook)
            done = check_quasi_gossip_done(network, state)
            if hook is not None:
                hook("after_iteration", network, state, iteration=iteration, done=done)
            if done:
                break
    if not done:
        raise QuasiGossipFailedError("quasi-gossip postcondition does not hold after the final iteration")
    trace.checks["quasi_done"] = True
    return trace


def gossip_complete(network: Network, state: SimState) -> bool:
    return all(len(state.rumors_held[v]) == network.n for v in range(network.n))


def gossip(network: Network, kappa: int,
           selector_provider: Callable[[int, int], Selector],
           strategy="round_robin", hook: Optional[Hook] = None) -> SimTrace:
    """Full gossip: run quasi-gossip from a fresh state, then replay its
    entire transmitter schedule once.  Audits that every node ends holding
    all n rumors."""
    if not is_strongly_connected(network):
        raise NotStronglyConnectedError("gossip requires a strongly connected network")
    state = initial_state(network)
    trace = TraceBuilder()
    quasi_gossip(network, state, kappa, selector_provider, strategy, trace, hook)
    schedule = [(rec.phase, rec.transmitters) for rec in trace.records]
    trace.replay_start = len(trace.records)
    for phase, tx in schedule:
        step(network, state, tx, phase=phase, trace=trace)
    if not gossip_complete(network, state):
        raise GossipIncompleteError("some node is missing rumors after the replay")
    trace.checks["gossip_complete"] = True
    return trace.freeze(state)


def choose_kappa(n: int, broadcast_rounds: int) -> int:
    """ceil((n * broadcast_rounds / log2 n)^(1/3)), clamped to [1, n]."""
    if n < 2:
        raise ValueError("n must be at least 2")
    if broadcast_rounds < 1:
        raise ValueError("broadcast_rounds must be at least 1")
    kappa = math.ceil((n * broadcast_rounds / math.log2(n)) ** (1.0 / 3.0))
    return max(1, min(kappa, n))


# ---------------------------------------------------------------------------
# active-path diagnostics
# ---------------------------------------------------------------------------

def active_path_ell(network: Network, state: SimState, kappa: int,
                    budget: int = 1_000_000) -> int:
    """Largest L such that every directed path of L active nodes has an
    active in-neighborhood (active nodes with edges into the path) smaller
    than kappa; returns n when no active path of any length violates this.

    Exhaustive DFS over simple active paths, pruned where the running
    in-neighborhood already reached kappa (extensions only grow it).
    """
    n = network.n
    active = [v for v in range(n) if state.rumor_active[v]]
    if not active:
        return n
    act_in = {v: frozenset(u for u in network.in_neighbors[v] if state.rumor_active[u])
              for v in active}
    act_out = {v: sorted(w for w in network.out_edges[v]
                         if w != v and state.rumor_active[w]) for v in active}
    best: Optional[int] = None  # shortest violating path length found
    expansions = 0

    def extend(path: set[int], last: int, nbhd: frozenset[int], length: int) -> None:
        nonlocal best, expansions
        for w in act_out[last]:
            if w in path:
                continue
            expansions += 1
            if expansions > budget:
                raise BudgetExceededError(f"active-path enumeration exceeded {budget} expansions")
            if best is not None and length + 1 >= best:
                return
            new_nbhd = nbhd | act_in[w]
            if len(new_nbhd) >= kappa:
                best = length + 1
                continue
            path.add(w)
            extend(path, w, new_nbhd, length + 1)
            path.remove(w)

    for v in active:
        expansions += 1
        if expansions > budget:
            raise BudgetExceededError(f"active-path enumeration exceeded {budget} expansions")
        nbhd = act_in[v]
        if len(nbhd) >= kappa:
            return 0
        if best is None or best > 1:
            extend({v}, v, nbhd, 1)
    return n if best is None else best - 1
