import pytest

from cmpc import (
    GenConfig,
    Instance,
    Point,
    PowerParams,
    Server,
    Solution,
    User,
    approximation_ratio,
    build_disks,
    collect_metrics,
    gen_instance,
    pd_solve,
    util_variance,
    validate,
)


def make_instance(server_specs, user_points, c=1.0, alpha=2.0):
    servers = tuple(Server(i, Point(x, y), k) for i, (x, y, k) in enumerate(server_specs))
    users = tuple(User(j, Point(x, y)) for j, (x, y) in enumerate(user_points))
    return Instance(PowerParams(c, alpha), servers, users)


def solution_with(instance, chosen, assignment):
    total = sum(d.power for d in chosen if d is not None)
    return Solution(chosen=tuple(chosen), assignment=tuple(assignment), total_power=total)


def test_validate_accepts_solver_output():
    inst = gen_instance(GenConfig(m=3, n=15, kbar=6.0, seed=55))
    sol, _, _ = pd_solve(inst)
    report = validate(inst, sol)
    assert report.ok
    assert report.coverage_ok and report.capacity_ok and report.single_disk_ok


def test_validate_flags_user_outside_disk():
    inst = make_instance([(0.0, 0.0, 2)], [(1.0, 0.0), (2.0, 0.0)])
    disks = build_disks(inst)
    bad = solution_with(inst, [disks[0]], [0, 0])  # small disk excludes user 1
    report = validate(inst, bad)
    assert not report.ok and not report.coverage_ok
    codes = {code for code, _ in report.violations}
    assert codes == {"coverage", "containment"}


def test_validate_flags_overloaded_server():
    inst = make_instance(
        [(0.0, 0.0, 1), (3.0, 0.0, 1)],
        [(1.0, 0.0), (2.0, 0.0)],
    )
    disks = build_disks(inst)
    bad = solution_with(inst, [disks[1], None], [0, 0])
    report = validate(inst, bad)
    assert not report.capacity_ok
    assert ("capacity", "server 0 serves 2 users, capacity 1") in report.violations


def test_validate_flags_assignment_to_diskless_server():
    inst = make_instance([(0.0, 0.0, 2)], [(1.0, 0.0)])
    bad = solution_with(inst, [None], [0])
    report = validate(inst, bad)
    assert not report.ok and not report.single_disk_ok
    assert {code for code, _ in report.violations} == {"no-disk"}


def test_util_variance_values():
    balanced = make_instance(
        [(0.0, 0.0, 2), (5.0, 0.0, 2)],
        [(0.1, 0.0), (0.2, 0.0), (4.9, 0.0), (4.8, 0.0)],
    )
    disks = build_disks(balanced)
    sol = solution_with(balanced, [disks[1], disks[5]], [0, 0, 1, 1])
    assert util_variance(balanced, sol) == 0.0

    lopsided = solution_with(balanced, [disks[3], None], [0, 0, 0, 0])
    assert util_variance(balanced, lopsided) == 4.0


def test_util_variance_uneven_three_servers():
    inst = make_instance(
        [(0.0, 0.0, 3), (10.0, 0.0, 3), (20.0, 0.0, 3)],
        [(float(i), 0.0) for i in range(6)],
    )
    disks = build_disks(inst)
    assignment = [0, 0, 0, 1, 2, 2]
    chosen = [disks[0 * 6 + 2], disks[1 * 6 + 0], disks[2 * 6 + 1]]
    sol = solution_with(inst, chosen, assignment)
    assert util_variance(inst, sol) == pytest.approx(2.0 / 3.0, rel=1e-12)


def test_util_variance_invariant_under_server_relabeling():
    inst = gen_instance(GenConfig(m=4, n=12, kbar=4.0, seed=9))
    sol, _, _ = pd_solve(inst)
    loads = sol.loads(inst.m)
    base = util_variance(inst, sol)
    target = inst.n / inst.m
    assert base == pytest.approx(
        sum((l - target) ** 2 for l in sorted(loads)) / inst.m, rel=1e-12
    )


def test_approximation_ratio_values():
    assert approximation_ratio(4.0, 4.0) == 1.0
    assert approximation_ratio(130.0, 65.0) == 2.0
    assert approximation_ratio(0.0, 0.0) == 1.0
    with pytest.raises(ValueError):
        approximation_ratio(1.0, 0.0)


def test_collect_metrics_record():
    inst = make_instance([(0.0, 0.0, 2)], [(1.0, 0.0), (2.0, 0.0)])
    sol, _, _ = pd_solve(inst)
    rec = collect_metrics(inst, sol, runtime_ms=1.5, opt_power=4.0)
    assert rec.total_power == 4.0
    assert rec.ratio_vs_opt == 1.0
    assert rec.runtime_ms == 1.5
    assert rec.per_server_load == (2,)
    assert rec.util_variance == 0.0
