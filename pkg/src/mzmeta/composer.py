"""Model composition for multi-task inference pipelines.

Given a DAG of task nodes, pick one model per node from the zoo so that the
weighted-sum accuracy is maximal subject to an end-to-end latency budget
(longest path through the DAG, parallel branches overlap) and a total memory
budget (sum over selected models). Metrics are resolved on one hardware
profile; models missing any required metric are excluded up front and listed
in a side report rather than imputed.

The exact solver is branch-and-bound over nodes in topological order: the
score bound adds the best remaining per-node accuracy, memory prunes
additively, and latency prunes through a longest-path lower bound that uses
each unassigned node's fastest candidate. Instances up to 12 nodes x 16
candidates are solved exactly; larger ones fall back to a greedy pass labeled
"heuristic". `brute_force` enumerates everything with identical tie-breaking
and exists as the test oracle.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field

from .metamodel import ModelRef
from .mql import EvalContext, PredicateEvaluator, StoreCaches, TriBool, parse_predicate

EXACT_MAX_NODES = 12
EXACT_MAX_CANDIDATES = 16
_BRUTE_FORCE_LIMIT = 1_000_000
_EPS = 1e-9

REQUIRED_METRICS = ("accuracy", "latency_ms", "memory_footprint_mb")


class GraphError(ValueError):
    pass


@dataclass
class TaskNode:
    id: str
    task: str
    input_type: str | None = None
    output_type: str | None = None
    filter: str | None = None  # MQL predicate over MODELS


@dataclass
class TaskGraph:
    nodes: list[TaskNode]
    edges: list[tuple[str, str]] = field(default_factory=list)

    def __post_init__(self):
        ids = [n.id for n in self.nodes]
        if len(set(ids)) != len(ids):
            raise GraphError("node ids must be unique")
        if not ids:
            raise GraphError("graph needs at least one node")
        known = set(ids)
        self.edges = [tuple(e) for e in self.edges]
        for u, v in self.edges:
            if u not in known or v not in known:
                raise GraphError(f"edge ({u}, {v}) references unknown node")
            if u == v:
                raise GraphError(f"self-edge on {u}")
        self._topo = _topological_order(ids, self.edges)  # raises on cycles

    def topological_order(self) -> list[str]:
        return list(self._topo)

    def node(self, node_id: str) -> TaskNode:
        for n in self.nodes:
            if n.id == node_id:
                return n
        raise KeyError(node_id)

    def predecessors(self, node_id: str) -> list[str]:
        return [u for u, v in self.edges if v == node_id]


def _topological_order(ids: list[str], edges: list[tuple[str, str]]) -> list[str]:
    incoming = {i: 0 for i in ids}
    for _, v in edges:
        incoming[v] += 1
    ready = sorted(i for i in ids if incoming[i] == 0)
    order: list[str] = []
    while ready:
        node = ready.pop(0)
        order.append(node)
        for u, v in edges:
            if u == node:
                incoming[v] -= 1
                if incoming[v] == 0:
                    ready.append(v)
                    ready.sort()
    if len(order) != len(ids):
        raise GraphError("graph has a cycle")
    return order


@dataclass
class Constraints:
    latency_budget_ms: float
    memory_budget_mb: float
    hardware: str  # HardwareProfile name

    def __post_init__(self):
        if not self.latency_budget_ms > 0 or not self.memory_budget_mb > 0:
            raise GraphError("budgets must be positive")


@dataclass
class Objective:
    """Per-node weights; normalized so they sum to 1. Scaling all weights by a
    positive constant therefore never changes the argmax plan."""

    weights: dict[str, float]

    def normalized(self, node_ids: list[str]) -> dict[str, float]:
        raw = {nid: float(self.weights.get(nid, 1.0)) for nid in node_ids}
        if any(w < 0 for w in raw.values()):
            raise GraphError("objective weights must be non-negative")
        total = sum(raw.values())
        if total <= 0:
            raise GraphError("objective weights must not all be zero")
        return {nid: w / total for nid, w in raw.items()}


@dataclass
class Candidate:
    model: ModelRef
    accuracy: float
    latency_ms: float
    memory_mb: float
    input_types: frozenset[str] = frozenset()
    output_types: frozenset[str] = frozenset()

    @property
    def name(self) -> str:
        return f"{self.model.name}@{self.model.version}"


@dataclass
class Aggregate:
    score: float
    latency_ms: float
    memory_mb: float


@dataclass
class CompositionPlan:
    feasible: bool
    assignment: dict[str, ModelRef] = field(default_factory=dict)
    aggregate: Aggregate | None = None
    mode: str = "exact"
    binding: list[str] = field(default_factory=list)


@dataclass
class ExcludedCandidate:
    node_id: str
    model: str
    reason: str


# ---------------------------------------------------------------------------
# candidate gathering from the store

def candidates(node: TaskNode, hardware: str, store) -> tuple[list[Candidate], list[ExcludedCandidate]]:
    """Models for a task node: matching task and IO semantic types, passing
    the node's filter, with accuracy/latency/memory all resolvable on the
    given hardware profile. Models missing a metric land in the side report."""
    ctx = EvalContext(store)
    caches = StoreCaches(store)
    predicate = None
    if node.filter:
        predicate = PredicateEvaluator("models", parse_predicate(node.filter), ctx)
    found: list[Candidate] = []
    excluded: list[ExcludedCandidate] = []
    for model in store.scan("ModelRecord", task=node.task):
        in_types = frozenset(s.semantic_type for s in model.input_signature if s.semantic_type)
        out_types = frozenset(s.semantic_type for s in model.output_signature if s.semantic_type)
        if node.input_type is not None and node.input_type not in in_types:
            continue
        if node.output_type is not None and node.output_type not in out_types:
            continue
        if predicate is not None and predicate.matches(model) is not TriBool.TRUE:
            continue
        metrics = {}
        missing = []
        for metric_name in REQUIRED_METRICS:
            value = _resolve_on_hardware(caches, model, metric_name, hardware)
            if value is None:
                missing.append(metric_name)
            else:
                metrics[metric_name] = value
        if missing:
            excluded.append(ExcludedCandidate(
                node_id=node.id, model=f"{model.name}@{model.version}",
                reason=f"missing on {hardware}: {', '.join(missing)}",
            ))
            continue
        found.append(Candidate(
            model=ModelRef(model.name, model.version),
            accuracy=metrics["accuracy"],
            latency_ms=metrics["latency_ms"],
            memory_mb=metrics["memory_footprint_mb"],
            input_types=in_types, output_types=out_types,
        ))
    found.sort(key=lambda c: (c.model.name, c.model.version))
    return found, excluded


def _resolve_on_hardware(caches: StoreCaches, model, metric_name: str, hardware: str):
    """Latest unsliced value of a metric for runs on one hardware profile,
    across datasets; insertion order breaks executed_at ties."""
    best = None
    for idx, run in caches.runs_for(f"{model.name}@{model.version}"):
        if run.hardware_id != hardware:
            continue
        for mv in run.metrics:
            if mv.name == metric_name and mv.slice is None:
                rank = (run.executed_at, idx)
                if best is None or rank > best[0]:
                    best = (rank, mv.value)
    return None if best is None else best[1]


# ---------------------------------------------------------------------------
# compatibility and aggregates

def check_compatibility(graph: TaskGraph, assignment: dict[str, Candidate]) -> list[str]:
    """For each edge (u, v), the u-model must emit a semantic type the v-model
    accepts. Returns one violation string per incompatible edge."""
    violations = []
    for u, v in graph.edges:
        cu, cv = assignment.get(u), assignment.get(v)
        if cu is None or cv is None:
            continue
        if not (cu.output_types & cv.input_types):
            violations.append(
                f"edge ({u} -> {v}): {cu.name} outputs {sorted(cu.output_types)} "
                f"but {cv.name} accepts {sorted(cv.input_types)}"
            )
    return violations


def _aggregate(graph: TaskGraph, assignment: dict[str, Candidate],
               weights: dict[str, float]) -> Aggregate:
    score = sum(weights[nid] * assignment[nid].accuracy for nid in graph.topological_order())
    memory = sum(assignment[nid].memory_mb for nid in assignment)
    latency = _longest_path(graph, {nid: c.latency_ms for nid, c in assignment.items()})
    return Aggregate(score=score, latency_ms=latency, memory_mb=memory)


def _longest_path(graph: TaskGraph, latency: dict[str, float]) -> float:
    """End-to-end latency: max over source-to-sink paths of summed node
    latencies (parallel branches overlap)."""
    finish: dict[str, float] = {}
    for nid in graph.topological_order():
        incoming = [finish[u] for u in graph.predecessors(nid)]
        finish[nid] = latency[nid] + (max(incoming) if incoming else 0.0)
    return max(finish.values()) if finish else 0.0


def _plan_key(graph: TaskGraph, assignment: dict[str, Candidate], agg: Aggregate):
    names = tuple(assignment[nid].name for nid in sorted(assignment))
    return (-agg.score, agg.latency_ms, agg.memory_mb, names)


# ---------------------------------------------------------------------------
# solvers over explicit candidate tables

def brute_force(graph: TaskGraph, cands: dict[str, list[Candidate]],
                constraints: Constraints, objective: Objective) -> CompositionPlan:
    """Exhaustive oracle: same tie-breaking as the exact solver, usable up to
    one million assignments."""
    order = graph.topological_order()
    total = 1
    for nid in order:
        total *= max(len(cands.get(nid, [])), 1)
        if total > _BRUTE_FORCE_LIMIT:
            raise GraphError("instance too large for brute force")
    if any(not cands.get(nid) for nid in order):
        return _infeasible(graph, cands, constraints, objective, _brute_search)
    best = _brute_search(graph, cands, constraints, objective)
    if best is None:
        return _infeasible(graph, cands, constraints, objective, _brute_search)
    assignment, agg = best
    return CompositionPlan(
        feasible=True, mode="exact",
        assignment={nid: c.model for nid, c in assignment.items()},
        aggregate=agg,
    )


def _brute_search(graph, cands, constraints, objective):
    """Best (assignment, aggregate) by exhaustive enumeration, or None."""
    order = graph.topological_order()
    weights = objective.normalized(order)
    best = None
    for combo in itertools.product(*(cands[nid] for nid in order)):
        assignment = dict(zip(order, combo))
        if check_compatibility(graph, assignment):
            continue
        agg = _aggregate(graph, assignment, weights)
        if agg.latency_ms > constraints.latency_budget_ms or agg.memory_mb > constraints.memory_budget_mb:
            continue
        key = _plan_key(graph, assignment, agg)
        if best is None or key < best[0]:
            best = (key, assignment, agg)
    if best is None:
        return None
    return best[1], best[2]


def solve(graph: TaskGraph, cands: dict[str, list[Candidate]],
          constraints: Constraints, objective: Objective) -> CompositionPlan:
    """Exact branch-and-bound; falls back to greedy beyond the exact-mode
    limits (> EXACT_MAX_NODES nodes or > EXACT_MAX_CANDIDATES per node)."""
    order = graph.topological_order()
    if len(order) > EXACT_MAX_NODES or any(
        len(cands.get(nid, [])) > EXACT_MAX_CANDIDATES for nid in order
    ):
        return _greedy(graph, cands, constraints, objective)
    if any(not cands.get(nid) for nid in order):
        return _infeasible(graph, cands, constraints, objective, _branch_and_bound)
    best = _branch_and_bound(graph, cands, constraints, objective)
    if best is None:
        return _infeasible(graph, cands, constraints, objective, _branch_and_bound)
    assignment, agg = best
    return CompositionPlan(
        feasible=True, mode="exact",
        assignment={nid: c.model for nid, c in assignment.items()},
        aggregate=agg,
    )


def _branch_and_bound(graph: TaskGraph, cands: dict[str, list[Candidate]],
                      constraints: Constraints, objective: Objective):
    order = graph.topological_order()
    weights = objective.normalized(order)
    sorted_cands = {nid: sorted(cands[nid], key=lambda c: (c.model.name, c.model.version))
                    for nid in order}
    min_latency = {nid: min(c.latency_ms for c in sorted_cands[nid]) for nid in order}
    min_memory = {nid: min(c.memory_mb for c in sorted_cands[nid]) for nid in order}
    max_accuracy = {nid: max(c.accuracy for c in sorted_cands[nid]) for nid in order}
    # suffix sums over the topological order for O(1) bounds at depth i
    n = len(order)
    mem_suffix = [0.0] * (n + 1)
    score_suffix = [0.0] * (n + 1)
    for i in range(n - 1, -1, -1):
        mem_suffix[i] = mem_suffix[i + 1] + min_memory[order[i]]
        score_suffix[i] = score_suffix[i + 1] + weights[order[i]] * max_accuracy[order[i]]

    best: list = [None]  # [(key, assignment, agg)] as a 1-slot cell

    def latency_bound(assigned: dict[str, Candidate]) -> float:
        lat = {nid: (assigned[nid].latency_ms if nid in assigned else min_latency[nid])
               for nid in order}
        return _longest_path(graph, lat)

    def descend(depth: int, assigned: dict[str, Candidate], partial_score: float,
                partial_memory: float):
        if depth == n:
            agg = _aggregate(graph, assigned, weights)
            if agg.latency_ms > constraints.latency_budget_ms:
                return
            key = _plan_key(graph, assigned, agg)
            if best[0] is None or key < best[0][0]:
                best[0] = (key, dict(assigned), agg)
            return
        nid = order[depth]
        for cand in sorted_cands[nid]:
            if partial_memory + cand.memory_mb + mem_suffix[depth + 1] > constraints.memory_budget_mb:
                continue
            incompatible = False
            for u in graph.predecessors(nid):
                if u in assigned and not (assigned[u].output_types & cand.input_types):
                    incompatible = True
                    break
            if incompatible:
                continue
            assigned[nid] = cand
            if latency_bound(assigned) > constraints.latency_budget_ms:
                del assigned[nid]
                continue
            score = partial_score + weights[nid] * cand.accuracy
            bound = score + score_suffix[depth + 1]
            if best[0] is not None and bound < -best[0][0][0] - _EPS:
                del assigned[nid]
                continue
            descend(depth + 1, assigned, score, partial_memory + cand.memory_mb)
            del assigned[nid]

    descend(0, {}, 0.0, 0.0)
    if best[0] is None:
        return None
    _, assignment, agg = best[0]
    return assignment, agg


def _greedy(graph: TaskGraph, cands: dict[str, list[Candidate]],
            constraints: Constraints, objective: Objective) -> CompositionPlan:
    """Documented fallback beyond exact-mode limits: nodes in topological
    order take the compatible candidate with the best accuracy-per-latency
    that still fits both budgets. Not optimal; the plan says so."""
    order = graph.topological_order()
    weights = objective.normalized(order)
    if any(not cands.get(nid) for nid in order):
        return CompositionPlan(feasible=False, mode="heuristic", binding=["candidates"])
    min_latency = {nid: min(c.latency_ms for c in cands[nid]) for nid in order}
    min_memory = {nid: min(c.memory_mb for c in cands[nid]) for nid in order}
    assigned: dict[str, Candidate] = {}
    memory_used = 0.0
    for depth, nid in enumerate(order):
        rest_memory = sum(min_memory[o] for o in order[depth + 1:])
        options = []
        for cand in cands[nid]:
            if memory_used + cand.memory_mb + rest_memory > constraints.memory_budget_mb:
                continue
            if any(
                u in assigned and not (assigned[u].output_types & cand.input_types)
                for u in graph.predecessors(nid)
            ):
                continue
            trial = dict(assigned, **{nid: cand})
            lat = {o: (trial[o].latency_ms if o in trial else min_latency[o]) for o in order}
            if _longest_path(graph, lat) > constraints.latency_budget_ms:
                continue
            options.append(cand)
        if not options:
            return CompositionPlan(feasible=False, mode="heuristic",
                                   binding=_binding_guess(graph, cands, constraints))
        pick = max(options, key=lambda c: (c.accuracy / max(c.latency_ms, 1e-9),
                                           -c.latency_ms, -c.memory_mb, c.name))
        assigned[nid] = pick
        memory_used += pick.memory_mb
    agg = _aggregate(graph, assigned, weights)
    return CompositionPlan(
        feasible=True, mode="heuristic",
        assignment={nid: c.model for nid, c in assigned.items()},
        aggregate=agg,
    )


def _binding_guess(graph, cands, constraints) -> list[str]:
    order = graph.topological_order()
    binding = []
    min_lat = _longest_path(graph, {nid: min(c.latency_ms for c in cands[nid]) for nid in order})
    if min_lat > constraints.latency_budget_ms:
        binding.append("latency")
    min_mem = sum(min(c.memory_mb for c in cands[nid]) for nid in order)
    if min_mem > constraints.memory_budget_mb:
        binding.append("memory")
    return binding or ["compatibility"]


_RELAXED = 1e18


def _infeasible(graph, cands, constraints, objective, probe) -> CompositionPlan:
    """Name the binding constraints: a budget axis is binding when relaxing it
    alone makes the instance feasible; if even relaxing both does not help,
    the blocker is candidates/compatibility."""
    if any(not cands.get(nid) for nid in graph.topological_order()):
        empty = sorted(nid for nid in graph.topological_order() if not cands.get(nid))
        return CompositionPlan(feasible=False, binding=[f"candidates:{nid}" for nid in empty])
    relax_latency = Constraints(_RELAXED, constraints.memory_budget_mb, constraints.hardware)
    relax_memory = Constraints(constraints.latency_budget_ms, _RELAXED, constraints.hardware)
    latency_binding = probe(graph, cands, relax_latency, objective) is not None
    memory_binding = probe(graph, cands, relax_memory, objective) is not None
    if latency_binding or memory_binding:
        binding = [name for name, hit in (("latency", latency_binding), ("memory", memory_binding)) if hit]
    else:
        both = Constraints(_RELAXED, _RELAXED, constraints.hardware)
        if probe(graph, cands, both, objective) is not None:
            binding = ["latency", "memory"]
        else:
            binding = ["compatibility"]
    return CompositionPlan(feasible=False, binding=binding)


# ---------------------------------------------------------------------------
# store-backed entry points

def gather_candidates(graph: TaskGraph, hardware: str, store):
    cand_map: dict[str, list[Candidate]] = {}
    excluded: list[ExcludedCandidate] = []
    for node in graph.nodes:
        found, skipped = candidates(node, hardware, store)
        cand_map[node.id] = found
        excluded.extend(skipped)
    return cand_map, excluded


def optimize(graph: TaskGraph, constraints: Constraints, objective: Objective,
             store) -> tuple[CompositionPlan, list[ExcludedCandidate]]:
    """Best feasible plan from the zoo (exact within limits), plus the side
    report of models excluded for missing metrics."""
    cand_map, excluded = gather_candidates(graph, constraints.hardware, store)
    return solve(graph, cand_map, constraints, objective), excluded


def pareto(graph: TaskGraph, hardware: str, store=None, *,
           cands: dict[str, list[Candidate]] | None = None) -> list[CompositionPlan]:
    """All compatibility-feasible plans non-dominated in (score max, latency
    min, memory min), sorted by descending score. Budgets do not apply."""
    if cands is None:
        cands, _ = gather_candidates(graph, hardware, store)
    order = graph.topological_order()
    weights = Objective({}).normalized(order)
    if any(not cands.get(nid) for nid in order):
        return []
    total = 1
    for nid in order:
        total *= len(cands[nid])
        if total > _BRUTE_FORCE_LIMIT:
            raise GraphError("instance too large for frontier enumeration")
    plans: list[tuple] = []
    for combo in itertools.product(*(cands[nid] for nid in order)):
        assignment = dict(zip(order, combo))
        if check_compatibility(graph, assignment):
            continue
        agg = _aggregate(graph, assignment, weights)
        plans.append((assignment, agg))
    frontier = []
    for assignment, agg in plans:
        if not any(_dominates(other, agg) for _, other in plans):
            frontier.append((assignment, agg))
    frontier.sort(key=lambda pair: _plan_key(graph, pair[0], pair[1]))
    return [
        CompositionPlan(feasible=True, assignment={n: c.model for n, c in a.items()}, aggregate=g)
        for a, g in frontier
    ]


def _dominates(a: Aggregate, b: Aggregate) -> bool:
    at_least = a.score >= b.score and a.latency_ms <= b.latency_ms and a.memory_mb <= b.memory_mb
    strict = a.score > b.score or a.latency_ms < b.latency_ms or a.memory_mb < b.memory_mb
    return at_least and strict


# ---------------------------------------------------------------------------
# JSON wire format

def graph_from_json(doc: dict) -> tuple[TaskGraph, Constraints, Objective]:
    """Parse the composition request document:

    {"nodes": [{"id", "task", "input_type"?, "output_type"?, "filter"?}],
     "edges": [["u", "v"], ...],
     "budgets": {"latency_ms": ..., "memory_mb": ...},
     "hardware": "<profile name>",
     "weights": {"<node id>": w, ...}?}
    """
    try:
        nodes = [
            TaskNode(
                id=n["id"], task=n["task"],
                input_type=n.get("input_type"), output_type=n.get("output_type"),
                filter=n.get("filter"),
            )
            for n in doc["nodes"]
        ]
        graph = TaskGraph(nodes=nodes, edges=[tuple(e) for e in doc.get("edges", [])])
        budgets = doc["budgets"]
        constraints = Constraints(
            latency_budget_ms=float(budgets["latency_ms"]),
            memory_budget_mb=float(budgets["memory_mb"]),
            hardware=doc["hardware"],
        )
    except (KeyError, TypeError) as err:
        raise GraphError(f"bad composition document: {err}") from None
    objective = Objective(weights=dict(doc.get("weights", {})))
    return graph, constraints, objective


def plan_to_json(plan: CompositionPlan, excluded: list[ExcludedCandidate] = ()) -> dict:
    doc: dict = {"feasible": plan.feasible, "mode": plan.mode}
    if plan.feasible:
        doc["assignment"] = {
            nid: {"name": ref.name, "version": ref.version}
            for nid, ref in sorted(plan.assignment.items())
        }
        doc["aggregate"] = {
            "score": plan.aggregate.score,
            "latency_ms": plan.aggregate.latency_ms,
            "memory_mb": plan.aggregate.memory_mb,
        }
    else:
        doc["binding"] = list(plan.binding)
    if excluded:
        doc["excluded"] = [
            {"node": e.node_id, "model": e.model, "reason": e.reason} for e in excluded
        ]
    return doc
