"""Geometric domain types for capacitated power cover instances.

A problem instance is a set of servers (position + integer capacity) and a
set of users (position) in the plane, plus the power-law constants. Each
(server, user) pair induces a candidate coverage disk centered at the server
with that user on its boundary; the solvers only ever consider these m*n
disks. Disk membership is decided by a strict total order on (distance,
direction) so that equidistant users are still served in a well-defined
sequence.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass

# Folds (sign-of-y descending, user id ascending) into one integer so that
# OrderKey stays a plain lexicographic triple. User ids must stay below it.
_TIEBREAK_STRIDE = 2**32


@dataclass(frozen=True)
class PowerParams:
    """Constants of the power law p = c * r**alpha."""

    c: float
    alpha: float

    def __post_init__(self) -> None:
        if not (self.c > 0 and math.isfinite(self.c)):
            raise ValueError(f"power scale c must be positive, got {self.c}")
        if not (self.alpha >= 1 and math.isfinite(self.alpha)):
            raise ValueError(f"attenuation factor alpha must be >= 1, got {self.alpha}")


@dataclass(frozen=True)
class Point:
    x: float
    y: float

    def __post_init__(self) -> None:
        if not (math.isfinite(self.x) and math.isfinite(self.y)):
            raise ValueError(f"coordinates must be finite, got ({self.x}, {self.y})")


@dataclass(frozen=True)
class Server:
    id: int
    pos: Point
    capacity: int

    def __post_init__(self) -> None:
        if self.capacity < 0:
            raise ValueError(f"server {self.id}: capacity must be >= 0, got {self.capacity}")


@dataclass(frozen=True)
class User:
    id: int
    pos: Point


@dataclass(frozen=True)
class Instance:
    """A power-cover problem: servers with capacities, users to cover.

    Construction checks shape invariants only. Total capacity >= n is a
    precondition of the covering solvers, not of the type itself, so that
    deficient instances can still be built and reported infeasible by the
    exact oracle.
    """

    params: PowerParams
    servers: tuple[Server, ...]
    users: tuple[User, ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "servers", tuple(self.servers))
        object.__setattr__(self, "users", tuple(self.users))
        if len(self.servers) < 1:
            raise ValueError("instance needs at least one server")
        if len(self.users) < 1:
            raise ValueError("instance needs at least one user")
        for i, s in enumerate(self.servers):
            if s.id != i:
                raise ValueError(f"server ids must be 0..m-1 in order, got {s.id} at {i}")
        for j, u in enumerate(self.users):
            if u.id != j:
                raise ValueError(f"user ids must be 0..n-1 in order, got {u.id} at {j}")

    @property
    def m(self) -> int:
        return len(self.servers)

    @property
    def n(self) -> int:
        return len(self.users)

    @property
    def total_capacity(self) -> int:
        return sum(s.capacity for s in self.servers)

    def has_sufficient_capacity(self) -> bool:
        return self.total_capacity >= self.n


@dataclass(frozen=True, order=True)
class OrderKey:
    """Strict total order on a server's candidate radii.

    Keys compare lexicographically: distance first, then the cosine of the
    angle between the server->user vector and the x-axis, then a tiebreak
    that encodes (sign of the y-offset descending, user id ascending).
    Larger key means larger (virtual) radius; a disk contains exactly the
    users whose key is <= the boundary user's key.
    """

    dist: float
    cosine: float
    tiebreak: int


@dataclass(frozen=True)
class Disk:
    """Candidate disk: centered at `server`, with `boundary_user` on its rim.

    `rank` is the disk's position in its server's ascending key order; the
    disk contains exactly the rank+1 users at or below it in that order.
    """

    server: int
    boundary_user: int
    rank: int
    key: OrderKey
    power: float


def power(params: PowerParams, r: float) -> float:
    """Transmission power needed for coverage radius r: c * r**alpha."""
    if r < 0:
        raise ValueError(f"radius must be >= 0, got {r}")
    return params.c * r**params.alpha


def order_key(server: Server, user: User) -> OrderKey:
    """Radius-order key of `user` as seen from `server`.

    A coincident pair (distance 0) gets cosine 0 by convention, keeping the
    zero-radius disk well defined.
    """
    dx = user.pos.x - server.pos.x
    dy = user.pos.y - server.pos.y
    dist = math.hypot(dx, dy)
    cosine = dx / dist if dist > 0 else 0.0
    sign_y = (dy > 0) - (dy < 0)
    tiebreak = (1 - sign_y) * _TIEBREAK_STRIDE + user.id
    return OrderKey(dist, cosine, tiebreak)


def server_order(instance: Instance, server_id: int) -> list[int]:
    """User ids sorted by ascending OrderKey around one server."""
    server = instance.servers[server_id]
    keyed = [(order_key(server, u), u.id) for u in instance.users]
    keyed.sort()
    return [uid for _, uid in keyed]


def build_disks(instance: Instance) -> list[Disk]:
    """All m*n candidate disks, server-major, ascending key within a server.

    The flat index of the disk for server s at rank t is s * n + t; solver
    and verifier modules rely on this layout.
    """
    disks: list[Disk] = []
    for server in instance.servers:
        keyed = sorted((order_key(server, u), u.id) for u in instance.users)
        for rank, (key, uid) in enumerate(keyed):
            disks.append(
                Disk(
                    server=server.id,
                    boundary_user=uid,
                    rank=rank,
                    key=key,
                    power=power(instance.params, key.dist),
                )
            )
    return disks


def contains(disk: Disk, user_key: OrderKey) -> bool:
    """True iff a user with this key lies inside the disk.

    The key must have been computed against the disk's own center server;
    keys carry no server identity, so that precondition is the caller's.
    """
    return user_key <= disk.key


def user_in_disk(instance: Instance, disk: Disk, user_id: int) -> bool:
    """Containment test that recomputes the key against the disk's server."""
    key = order_key(instance.servers[disk.server], instance.users[user_id])
    return contains(disk, key)


# --- instance JSON format -------------------------------------------------
#
# {"c": number, "alpha": number,
#  "servers": [{"x": number, "y": number, "k": integer}, ...],
#  "users":   [{"x": number, "y": number}, ...]}
#
# Array position defines the id of each server and user.


def instance_to_json_dict(instance: Instance) -> dict:
    return {
        "c": instance.params.c,
        "alpha": instance.params.alpha,
        "servers": [
            {"x": s.pos.x, "y": s.pos.y, "k": s.capacity} for s in instance.servers
        ],
        "users": [{"x": u.pos.x, "y": u.pos.y} for u in instance.users],
    }


def instance_from_json_dict(data: dict) -> Instance:
    for field_name in ("c", "alpha", "servers", "users"):
        if field_name not in data:
            raise ValueError(f"instance JSON: missing field '{field_name}'")
    try:
        params = PowerParams(c=float(data["c"]), alpha=float(data["alpha"]))
        servers = tuple(
            Server(id=i, pos=Point(float(rec["x"]), float(rec["y"])), capacity=int(rec["k"]))
            for i, rec in enumerate(data["servers"])
        )
        users = tuple(
            User(id=j, pos=Point(float(rec["x"]), float(rec["y"])))
            for j, rec in enumerate(data["users"])
        )
    except KeyError as exc:
        raise ValueError(f"instance JSON: missing field {exc} in a server/user record") from exc
    except (TypeError, ValueError) as exc:
        raise ValueError(f"instance JSON: bad value ({exc})") from exc
    return Instance(params=params, servers=servers, users=users)


def dump_instance(instance: Instance, path: str) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(instance_to_json_dict(instance), fh, indent=2)
        fh.write("\n")


def load_instance(path: str) -> Instance:
    with open(path, "r", encoding="utf-8") as fh:
        return instance_from_json_dict(json.load(fh))
