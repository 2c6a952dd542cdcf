"""Single-source multicast DAGs: max-flow, phase schedules, delivery simulation.

Delivery is forwarding-only: the source emits one coded packet per
edge-disjoint path per phase and intermediate nodes copy bytes verbatim, so
an edge carries one fixed packet index in each phase. A schedule assigns
packet indexes to (sink, path, phase) slots such that every sink sees each
packet exactly once and paths sharing an edge agree phase by phase.

Network text format, one directive per line ('#' starts a comment):

    node <name>
    edge <from> <to>      # repeat for parallel edges
    source <name>
    sink <name>

Schedule text format:

    n <count> / requested_n <count> / phases <count> / maxflow <count>
    sink <name>
    path <node> <node> ... : <packet per phase> ...
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from .codec import CodingScheme, SourceBlock, decodable_indexes, decode, encode
from .errors import CodingError, ParseError, ScheduleError, TopologyError


@dataclass(frozen=True)
class Network:
    """Directed acyclic multigraph with one source and named sinks."""

    nodes: tuple[str, ...]
    edges: tuple[tuple[str, str], ...]
    source: str
    sinks: tuple[str, ...]

    def __post_init__(self):
        known = set(self.nodes)
        if len(known) != len(self.nodes):
            raise ValueError("duplicate node names")
        if self.source not in known:
            raise ValueError(f"unknown source {self.source!r}")
        if not self.sinks:
            raise ValueError("at least one sink is required")
        if len(set(self.sinks)) != len(self.sinks):
            raise ValueError("duplicate sink names")
        for t in self.sinks:
            if t not in known:
                raise ValueError(f"unknown sink {t!r}")
        if self.source in self.sinks:
            raise ValueError("source cannot also be a sink")
        for u, v in self.edges:
            if u not in known or v not in known:
                raise ValueError(f"edge ({u!r}, {v!r}) references unknown node")
            if u == v:
                raise TopologyError(f"self-loop on {u!r}")
        self._check_acyclic()

    def _check_acyclic(self):
        indeg = {v: 0 for v in self.nodes}
        for _, v in self.edges:
            indeg[v] += 1
        ready = [v for v in self.nodes if indeg[v] == 0]
        seen = 0
        while ready:
            u = ready.pop()
            seen += 1
            for eu, ev in self.edges:
                if eu == u:
                    indeg[ev] -= 1
                    if indeg[ev] == 0:
                        ready.append(ev)
        if seen != len(self.nodes):
            raise TopologyError("network contains a cycle")

    def out_edges(self, node: str) -> list[int]:
        return [i for i, (u, _) in enumerate(self.edges) if u == node]

    def in_edges(self, node: str) -> list[int]:
        return [i for i, (_, v) in enumerate(self.edges) if v == node]


def parse_network(text: str) -> Network:
    nodes: list[str] = []
    seen: set[str] = set()
    edges: list[tuple[str, str]] = []
    source: str | None = None
    sinks: list[str] = []

    def add_node(name: str):
        if name not in seen:
            seen.add(name)
            nodes.append(name)

    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        toks = line.split()
        if toks[0] == "node" and len(toks) == 2:
            add_node(toks[1])
        elif toks[0] == "edge" and len(toks) == 3:
            add_node(toks[1])
            add_node(toks[2])
            edges.append((toks[1], toks[2]))
        elif toks[0] == "source" and len(toks) == 2:
            if source is not None:
                raise ParseError(f"line {lineno}: second source directive")
            add_node(toks[1])
            source = toks[1]
        elif toks[0] == "sink" and len(toks) == 2:
            add_node(toks[1])
            sinks.append(toks[1])
        else:
            raise ParseError(f"line {lineno}: bad directive {line!r}")
    if source is None:
        raise ParseError("missing source directive")
    if not sinks:
        raise ParseError("missing sink directive")
    return Network(tuple(nodes), tuple(edges), source, tuple(sinks))


def format_network(net: Network) -> str:
    lines = [f"node {v}" for v in net.nodes]
    lines.extend(f"edge {u} {v}" for u, v in net.edges)
    lines.append(f"source {net.source}")
    lines.extend(f"sink {t}" for t in net.sinks)
    return "\n".join(lines) + "\n"


def _augmenting_flow(net: Network, sink: str) -> tuple[int, list[int]]:
    """Unit-capacity max flow by BFS augmenting paths; returns (value, per-edge flow)."""
    if sink not in net.sinks:
        raise ValueError(f"{sink!r} is not a sink of this network")
    out_, in_ = {}, {}
    for v in net.nodes:
        out_[v] = []
        in_[v] = []
    for i, (u, v) in enumerate(net.edges):
        out_[u].append(i)
        in_[v].append(i)
    flow = [0] * len(net.edges)
    value = 0
    while True:
        prev: dict[str, tuple[int, int] | None] = {net.source: None}
        queue = [net.source]
        while queue and sink not in prev:
            u = queue.pop(0)
            for eid in out_[u]:
                v = net.edges[eid][1]
                if not flow[eid] and v not in prev:
                    prev[v] = (eid, 1)
                    queue.append(v)
            for eid in in_[u]:
                v = net.edges[eid][0]
                if flow[eid] and v not in prev:
                    prev[v] = (eid, -1)
                    queue.append(v)
        if sink not in prev:
            return value, flow
        node = sink
        while node != net.source:
            eid, direction = prev[node]  # type: ignore[misc]
            flow[eid] = 1 if direction == 1 else 0
            node = net.edges[eid][0] if direction == 1 else net.edges[eid][1]
        value += 1


def max_flow(net: Network, sink: str) -> int:
    """Maximum number of edge-disjoint source-to-sink paths (0 if unreachable)."""
    return _augmenting_flow(net, sink)[0]


def edge_disjoint_paths(net: Network, sink: str) -> list[tuple[int, ...]]:
    """Decompose an integral max flow into edge-id paths, deterministic order."""
    value, flow = _augmenting_flow(net, sink)
    available: dict[str, list[int]] = {v: [] for v in net.nodes}
    for eid, used in enumerate(flow):
        if used:
            available[net.edges[eid][0]].append(eid)
    paths = []
    for _ in range(value):
        node = net.source
        path = []
        while node != sink:
            eid = available[node].pop(0)
            path.append(eid)
            node = net.edges[eid][1]
        paths.append(tuple(path))
    return paths


def path_nodes(net: Network, path: Sequence[int]) -> tuple[str, ...]:
    if not path:
        return ()
    return (net.edges[path[0]][0],) + tuple(net.edges[eid][1] for eid in path)


def num_phases(n: int, maxflow: int) -> int:
    """ceil(n / maxflow) phases to deliver n packets at maxflow per phase."""
    if n < 1:
        raise ValueError("packet count must be >= 1")
    if maxflow < 1:
        raise ValueError("max flow must be >= 1")
    return -(-n // maxflow)


@dataclass(frozen=True)
class Schedule:
    """Per-sink edge-disjoint paths with one packet index per path per phase.

    ``n`` is the delivered packet count; when the requested count is not a
    multiple of the max flow it is padded up, and ``requested_n`` keeps the
    original value.
    """

    n: int
    requested_n: int
    phases: int
    maxflow: int
    sinks: tuple[str, ...]
    paths: tuple[tuple[tuple[int, ...], ...], ...]
    assignment: tuple[tuple[tuple[int, ...], ...], ...]

    @property
    def padding(self) -> int:
        return self.n - self.requested_n

    def sink_index(self, sink: str) -> int:
        try:
            return self.sinks.index(sink)
        except ValueError:
            raise ValueError(f"{sink!r} not in schedule") from None

    def partition(self, sink: str) -> tuple[frozenset[int], ...]:
        """Packet-index set carried by each path toward the sink."""
        si = self.sink_index(sink)
        return tuple(frozenset(seq) for seq in self.assignment[si])


def build_schedule(net: Network, n: int) -> Schedule:
    """Search for a forwarding-only schedule delivering n packets to every sink.

    Sinks are processed in input order. For each, the packets forced onto its
    paths by edges already claimed are fixed first, then the remaining (path,
    phase) slots are filled with the smallest unused packet index, undoing
    choices on conflict. Paths of later sinks that share an edge with earlier
    ones inherit its per-phase packets, which is what makes shared relays
    deliver identical sets. Raises if sinks disagree on max flow or no
    consistent assignment exists.
    """
    if n < 1:
        raise ValueError("packet count must be >= 1")
    flows = [max_flow(net, t) for t in net.sinks]
    f = flows[0]
    if any(x != f for x in flows):
        detail = ", ".join(f"{t}={x}" for t, x in zip(net.sinks, flows))
        raise TopologyError(f"sinks have unequal max-flow: {detail}")
    if f == 0:
        raise TopologyError("sinks are unreachable from the source")
    p = num_phases(n, f)
    padded = p * f
    sink_paths = [edge_disjoint_paths(net, t) for t in net.sinks]
    edge_phase: dict[tuple[int, int], int] = {}
    chosen: list[tuple[tuple[int, ...], ...]] = []

    def assign_sink(si: int) -> bool:
        if si == len(net.sinks):
            return True
        paths = sink_paths[si]
        forced: dict[tuple[int, int], int] = {}
        for j, path in enumerate(paths):
            for phase in range(p):
                vals = {edge_phase[(e, phase)] for e in path if (e, phase) in edge_phase}
                if len(vals) > 1:
                    return False
                if vals:
                    forced[(j, phase)] = vals.pop()
        if len(set(forced.values())) != len(forced):
            return False
        cells = [(j, phase) for j in range(f) for phase in range(p)]
        free = [cell for cell in cells if cell not in forced]
        grid = dict(forced)
        used = set(forced.values())

        def commit_and_recurse() -> bool:
            added = []
            for (j, phase), pkt in grid.items():
                for e in paths[j]:
                    key = (e, phase)
                    if key not in edge_phase:
                        edge_phase[key] = pkt
                        added.append(key)
            chosen.append(tuple(tuple(grid[(j, phase)] for phase in range(p)) for j in range(f)))
            if assign_sink(si + 1):
                return True
            chosen.pop()
            for key in added:
                del edge_phase[key]
            return False

        def fill(i: int) -> bool:
            if i == len(free):
                return commit_and_recurse()
            cell = free[i]
            for pkt in range(1, padded + 1):
                if pkt in used:
                    continue
                grid[cell] = pkt
                used.add(pkt)
                if fill(i + 1):
                    return True
                used.remove(pkt)
                del grid[cell]
            return False

        return fill(0)

    if not assign_sink(0):
        raise ScheduleError(
            f"no forwarding-only schedule for {padded} packets on {f} paths: "
            "shared edges impose conflicting packet sets"
        )
    return Schedule(
        n=padded,
        requested_n=n,
        phases=p,
        maxflow=f,
        sinks=net.sinks,
        paths=tuple(tuple(paths) for paths in sink_paths),
        assignment=tuple(chosen),
    )


def validate_schedule(net: Network, sched: Schedule) -> list[str]:
    """Independent invariant check; returns a list of problems (empty = valid)."""
    problems = []
    if sched.maxflow < 1 or sched.phases < 1:
        problems.append("non-positive maxflow or phase count")
        return problems
    if sched.n != sched.maxflow * sched.phases:
        problems.append(f"n={sched.n} is not phases*maxflow={sched.phases * sched.maxflow}")
    if set(sched.sinks) != set(net.sinks) or len(sched.sinks) != len(net.sinks):
        problems.append("schedule sinks do not match network sinks")
        return problems
    if not (len(sched.paths) == len(sched.assignment) == len(sched.sinks)):
        problems.append("per-sink path/assignment shape mismatch")
        return problems
    full = set(range(1, sched.n + 1))
    for si, sink in enumerate(sched.sinks):
        paths = sched.paths[si]
        if len(paths) != sched.maxflow:
            problems.append(f"sink {sink}: {len(paths)} paths, expected {sched.maxflow}")
        seen_edges: set[int] = set()
        for j, path in enumerate(paths):
            if not path:
                problems.append(f"sink {sink} path {j + 1}: empty")
                continue
            if any(not 0 <= e < len(net.edges) for e in path):
                problems.append(f"sink {sink} path {j + 1}: unknown edge id")
                continue
            if net.edges[path[0]][0] != net.source or net.edges[path[-1]][1] != sink:
                problems.append(f"sink {sink} path {j + 1}: does not run source->sink")
            for a, b in zip(path, path[1:]):
                if net.edges[a][1] != net.edges[b][0]:
                    problems.append(f"sink {sink} path {j + 1}: edges {a},{b} do not connect")
            if seen_edges & set(path):
                problems.append(f"sink {sink}: paths share an edge")
            seen_edges |= set(path)
        assign = sched.assignment[si]
        if len(assign) != len(paths):
            problems.append(f"sink {sink}: assignment rows != path count")
            continue
        flat: list[int] = []
        for j, seq in enumerate(assign):
            if len(seq) != sched.phases:
                problems.append(f"sink {sink} path {j + 1}: {len(seq)} phases, expected {sched.phases}")
            flat.extend(seq)
        if sorted(flat) != sorted(full):
            problems.append(f"sink {sink}: packet sets do not partition 1..{sched.n}")
    carried: dict[tuple[int, int], tuple[str, int]] = {}
    for si, sink in enumerate(sched.sinks):
        for path, seq in zip(sched.paths[si], sched.assignment[si]):
            for phase, pkt in enumerate(seq):
                for e in path:
                    prior = carried.get((e, phase))
                    if prior is None:
                        carried[(e, phase)] = (sink, pkt)
                    elif prior[1] != pkt:
                        problems.append(
                            f"edge {e} phase {phase + 1}: carries packet {prior[1]} "
                            f"for {prior[0]} but {pkt} for {sink}"
                        )
    return problems


def format_schedule(net: Network, sched: Schedule) -> str:
    lines = [
        f"n {sched.n}",
        f"requested_n {sched.requested_n}",
        f"phases {sched.phases}",
        f"maxflow {sched.maxflow}",
    ]
    for si, sink in enumerate(sched.sinks):
        lines.append(f"sink {sink}")
        for path, seq in zip(sched.paths[si], sched.assignment[si]):
            nodes = " ".join(path_nodes(net, path))
            packets = " ".join(str(x) for x in seq)
            lines.append(f"path {nodes} : {packets}")
    return "\n".join(lines) + "\n"


def _resolve_path(net: Network, names: list[str], taken: set[int]) -> tuple[int, ...]:
    if len(names) < 2:
        raise ParseError(f"path needs at least two nodes: {names!r}")
    path = []
    for a, b in zip(names, names[1:]):
        eid = next(
            (i for i, (u, v) in enumerate(net.edges) if u == a and v == b and i not in taken),
            None,
        )
        if eid is None:
            raise ParseError(f"no unused edge {a}->{b} available for path")
        taken.add(eid)
        path.append(eid)
    return tuple(path)


def parse_schedule(net: Network, text: str) -> Schedule:
    header: dict[str, int] = {}
    sink_order: list[str] = []
    paths_by_sink: dict[str, list[tuple[int, ...]]] = {}
    assign_by_sink: dict[str, list[tuple[int, ...]]] = {}
    taken_by_sink: dict[str, set[int]] = {}
    current: str | None = None
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        toks = line.split()
        if toks[0] in ("n", "requested_n", "phases", "maxflow"):
            if len(toks) != 2 or not toks[1].isdigit():
                raise ParseError(f"line {lineno}: bad header {line!r}")
            header[toks[0]] = int(toks[1])
        elif toks[0] == "sink":
            if len(toks) != 2:
                raise ParseError(f"line {lineno}: bad sink directive")
            current = toks[1]
            sink_order.append(current)
            paths_by_sink[current] = []
            assign_by_sink[current] = []
            taken_by_sink[current] = set()
        elif toks[0] == "path":
            if current is None:
                raise ParseError(f"line {lineno}: path before any sink")
            if ":" not in toks:
                raise ParseError(f"line {lineno}: path line missing ':'")
            sep = toks.index(":")
            names = toks[1:sep]
            try:
                packets = tuple(int(t) for t in toks[sep + 1:])
            except ValueError as exc:
                raise ParseError(f"line {lineno}: non-integer packet index") from exc
            paths_by_sink[current].append(_resolve_path(net, names, taken_by_sink[current]))
            assign_by_sink[current].append(packets)
        else:
            raise ParseError(f"line {lineno}: bad directive {line!r}")
    for key in ("n", "requested_n", "phases", "maxflow"):
        if key not in header:
            raise ParseError(f"schedule missing '{key}' header")
    if not sink_order:
        raise ParseError("schedule lists no sinks")
    return Schedule(
        n=header["n"],
        requested_n=header["requested_n"],
        phases=header["phases"],
        maxflow=header["maxflow"],
        sinks=tuple(sink_order),
        paths=tuple(tuple(paths_by_sink[t]) for t in sink_order),
        assignment=tuple(tuple(assign_by_sink[t]) for t in sink_order),
    )


def parse_schedule_partitions(text: str) -> dict[str, tuple[tuple[int, ...], ...]]:
    """Per-sink packet sequences from a schedule file, no network needed."""
    out: dict[str, list[tuple[int, ...]]] = {}
    current: str | None = None
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        toks = line.split()
        if toks[0] == "sink" and len(toks) == 2:
            current = toks[1]
            out[current] = []
        elif toks[0] == "path" and ":" in toks:
            if current is None:
                raise ParseError(f"line {lineno}: path before any sink")
            sep = toks.index(":")
            try:
                out[current].append(tuple(int(t) for t in toks[sep + 1:]))
            except ValueError as exc:
                raise ParseError(f"line {lineno}: non-integer packet index") from exc
    if not out:
        raise ParseError("no sink sections found in schedule text")
    return {t: tuple(seqs) for t, seqs in out.items()}


@dataclass(frozen=True)
class SinkReport:
    sink: str
    received: tuple[tuple[int, ...], ...]
    decoded: bool
    correct: bool
    phases_to_decode: int | None
    error: str | None


@dataclass(frozen=True)
class SimulationReport:
    n: int
    requested_n: int
    phases: int
    maxflow: int
    sinks: tuple[SinkReport, ...]

    @property
    def all_decoded(self) -> bool:
        return all(r.decoded and r.correct for r in self.sinks)


def simulate(
    net: Network, sched: Schedule, scheme: CodingScheme, block: SourceBlock
) -> SimulationReport:
    """Replay the phase schedule and decode at every sink from headers alone."""
    problems = validate_schedule(net, sched)
    if problems:
        raise ScheduleError("invalid schedule: " + "; ".join(problems))
    if scheme.n != sched.n:
        raise ValueError(f"scheme carries {scheme.n} packets, schedule delivers {sched.n}")
    if block.n != scheme.n:
        raise ValueError(f"block has {block.n} packets, scheme expects {scheme.n}")
    coded = encode(scheme, block)
    reports = []
    for si, sink in enumerate(sched.sinks):
        per_phase = tuple(
            tuple(sched.assignment[si][j][phase] for j in range(sched.maxflow))
            for phase in range(sched.phases)
        )
        buffer = []
        phases_to_decode = None
        for phase, idxs in enumerate(per_phase, start=1):
            buffer.extend(coded[i - 1] for i in idxs)
            if phases_to_decode is None and len(decodable_indexes(buffer, scheme.n)) == scheme.n:
                phases_to_decode = phase
        try:
            recovered = decode(buffer, scheme.n, original_len=block.original_len)
            decoded = True
            correct = recovered.packets == block.packets
            error = None
        except CodingError as exc:
            decoded = False
            correct = False
            error = str(exc)
        reports.append(
            SinkReport(
                sink=sink,
                received=per_phase,
                decoded=decoded,
                correct=correct,
                phases_to_decode=phases_to_decode,
                error=error,
            )
        )
    return SimulationReport(
        n=sched.n,
        requested_n=sched.requested_n,
        phases=sched.phases,
        maxflow=sched.maxflow,
        sinks=tuple(reports),
    )


def format_simulation_report(report: SimulationReport) -> str:
    lines = [
        f"n={report.n} requested_n={report.requested_n} "
        f"phases={report.phases} maxflow={report.maxflow} "
        f"padding={report.n - report.requested_n}"
    ]
    for r in report.sinks:
        for phase, idxs in enumerate(r.received, start=1):
            packets = ",".join(str(i) for i in idxs)
            lines.append(f"sink={r.sink} phase={phase} packets={packets}")
        status = "ok" if (r.decoded and r.correct) else "fail"
        phases = r.phases_to_decode if r.phases_to_decode is not None else "-"
        line = f"sink={r.sink} decode={status} phases_needed={phases}"
        if r.error:
            line += f" error={r.error!r}"
        lines.append(line)
    decoded = sum(1 for r in report.sinks if r.decoded and r.correct)
    lines.append(f"summary sinks={len(report.sinks)} decoded={decoded}")
    return "\n".join(lines) + "\n"
