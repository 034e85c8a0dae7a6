"""Reference solvers: exhaustive exact optimum and the nearest-server greedy.

The exact solver enumerates one radius choice per server (one of its n
candidate disks, or none) with branch-and-bound pruning on accumulated power,
checking coverage feasibility at the leaves via capacitated bipartite
matching. It is meant for desk-scale instances; a node budget turns overruns
into an explicit "budget exceeded" outcome instead of an open-ended search.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional

from .model import Disk, Instance, build_disks, server_order
from .primal_dual import InsufficientCapacityError
from .solution import Solution, make_solution

DEFAULT_NODE_BUDGET = 2_000_000


@dataclass(frozen=True)
class OptResult:
    """Outcome of the exact search."""

    status: str  # "optimal" | "budget_exceeded" | "infeasible"
    nodes_explored: int
    solution: Optional[Solution] = None

    @property
    def value(self) -> float:
        if self.solution is None:
            raise ValueError(f"no solution available (status: {self.status})")
        return self.solution.total_power

    def to_json_dict(self) -> dict:
        out = {"status": self.status, "nodes_explored": self.nodes_explored}
        if self.solution is not None:
            out["solution"] = self.solution.to_json_dict()
        return out


def feasible_assignment(
    choice: list[Optional[Disk]], instance: Instance
) -> Optional[list[int]]:
    """Capacity-respecting user->server assignment under the chosen disks.

    Each user may go to any server whose chosen disk contains it; a server
    holds at most its capacity. Solved as bipartite matching with server-side
    capacities (augmenting paths); returns the assignment or None.
    """
    n = instance.n
    m = instance.m
    orders = [server_order(instance, s) for s in range(m)]
    allowed: list[list[int]] = [[] for _ in range(n)]
    for s, disk in enumerate(choice):
        if disk is None:
            continue
        for h in orders[s][: disk.rank + 1]:
            allowed[h].append(s)

    capacity = [srv.capacity for srv in instance.servers]
    served: list[list[int]] = [[] for _ in range(m)]
    assignment = [-1] * n

    def augment(user: int, banned: set[int]) -> bool:
        for s in allowed[user]:
            if s in banned:
                continue
            banned.add(s)
            if len(served[s]) < capacity[s]:
                served[s].append(user)
                assignment[user] = s
                return True
            for rider in served[s]:
                if augment(rider, banned):
                    served[s].remove(rider)
                    served[s].append(user)
                    assignment[user] = s
                    return True
        return False

    for user in range(n):
        if not augment(user, set()):
            return None
    return assignment


class _Budget:
    __slots__ = ("limit", "used")

    def __init__(self, limit: int):
        self.limit = limit
        self.used = 0

    def spend(self) -> bool:
        self.used += 1
        return self.used <= self.limit


def opt_solve(instance: Instance, budget: int = DEFAULT_NODE_BUDGET) -> OptResult:
    """Exact minimum-power cover by exhaustive radius enumeration.

    Every server independently picks one of its n distinct candidate disks or
    stays off; branches whose accumulated power already matches the incumbent
    are pruned, and leaves are validated with feasible_assignment. A spent
    node budget yields status "budget_exceeded" with no solution, mirroring
    an external solver's time cutoff.
    """
    if not instance.has_sufficient_capacity():
        return OptResult(status="infeasible", nodes_explored=0)

    n, m = instance.n, instance.m
    disks = build_disks(instance)
    orders = [server_order(instance, s) for s in range(m)]
    all_users_mask = (1 << n) - 1

    member_mask = []
    for idx, disk in enumerate(disks):
        mask = 0
        for h in orders[disk.server][: disk.rank + 1]:
            mask |= 1 << h
        member_mask.append(mask)

    # Per-server options sorted by power so cheap subtrees come first; "off"
    # is the zero-power first option.
    options: list[list[Optional[Disk]]] = []
    for s in range(m):
        opts: list[Optional[Disk]] = [None]
        opts.extend(sorted((disks[s * n + t] for t in range(n)), key=lambda d: (d.power, d.rank)))
        options.append(opts)

    # Power of the cheapest nonempty choice per suffix is 0 ("off" allowed),
    # so the only sound lower bound on a partial choice is its own power.
    budget_state = _Budget(budget)
    best_power = math.inf
    best: Optional[tuple[list[Optional[Disk]], list[int]]] = None
    exhausted = False

    def descend(s: int, power_so_far: float, choice: list[Optional[Disk]], covered: int, cap: int) -> None:
        nonlocal best_power, best, exhausted
        if exhausted:
            return
        if not budget_state.spend():
            exhausted = True
            return
        if power_so_far >= best_power:
            return
        if s == m:
            if covered != all_users_mask or cap < n:
                return
            assignment = feasible_assignment(choice, instance)
            if assignment is not None:
                best_power = power_so_far
                best = (list(choice), assignment)
            return
        for opt in options[s]:
            if opt is None:
                choice.append(None)
                descend(s + 1, power_so_far, choice, covered, cap)
            else:
                extra = opt.power
                if power_so_far + extra >= best_power:
                    break  # options are power-sorted: every later one prunes too
                choice.append(opt)
                idx = opt.server * n + opt.rank
                descend(
                    s + 1,
                    power_so_far + extra,
                    choice,
                    covered | member_mask[idx],
                    cap + instance.servers[s].capacity,
                )
            choice.pop()
            if exhausted:
                return

    descend(0, 0.0, [], 0, 0)

    if exhausted:
        return OptResult(status="budget_exceeded", nodes_explored=budget_state.used)
    if best is None:
        return OptResult(status="infeasible", nodes_explored=budget_state.used)
    choice, assignment = best
    return OptResult(
        status="optimal",
        nodes_explored=budget_state.used,
        solution=make_solution(instance, choice, assignment),
    )


def ncs_solve(instance: Instance) -> Solution:
    """Greedy baseline: repeatedly bind the closest capable server-user pair.

    Scans all (server, user) pairs in ascending key order (ties broken by
    server id); a pair binds when the user is still uncovered and the server
    has remaining capacity. Every server's final disk reaches its farthest
    assigned user.
    """
    if not instance.has_sufficient_capacity():
        raise InsufficientCapacityError(
            f"total capacity {instance.total_capacity} < {instance.n} users"
        )
    n, m = instance.n, instance.m
    disks = build_disks(instance)
    orders = [server_order(instance, s) for s in range(m)]
    rank_of = [{uid: r for r, uid in enumerate(orders[s])} for s in range(m)]

    pairs = sorted(
        ((disks[s * n + r].key, s, orders[s][r]) for s in range(m) for r in range(n)),
        key=lambda item: (item[0], item[1]),
    )
    remaining = [srv.capacity for srv in instance.servers]
    assignment = [-1] * n
    assigned = 0
    for _, s, u in pairs:
        if assigned == n:
            break
        if assignment[u] != -1 or remaining[s] == 0:
            continue
        assignment[u] = s
        remaining[s] -= 1
        assigned += 1

    chosen: list[Optional[Disk]] = [None] * m
    for s in range(m):
        ranks = [rank_of[s][u] for u in range(n) if assignment[u] == s]
        if ranks:
            chosen[s] = disks[s * n + max(ranks)]
    return make_solution(instance, chosen, assignment)
