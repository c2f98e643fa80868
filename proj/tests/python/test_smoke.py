import math
import os

import pytest

import elastika as ek

ROOT = os.environ.get("ELASTIKA_SOURCE_DIR", os.path.join(os.path.dirname(__file__), "..", ".."))
BENCH = os.path.join(ROOT, "benchmarks")


def gcd_net():
    return ek.compile_file(os.path.join(BENCH, "elgcd.csp"))


def test_compile_and_validate():
    net = gcd_net()
    assert net.name == "elgcd"
    assert net.link_count > 0
    assert net.count("buffer") == 0
    assert ek.validate(net) == []
    assert ek.read_netlist(net.netlist()) == net


def test_syntax_error_raises():
    with pytest.raises(ek.ElastikaError):
        ek.compile_source("module t(out b:8) { loop { b! } }")


def test_depgraph_kinds():
    g = ek.depgraph(gcd_net())
    kinds = {e["kind"] for e in g["edges"]}
    assert kinds == {"WAR", "RAW", "PAC"}


def test_plans_order_and_apply():
    net = gcd_net()
    sizes = {p: len(ek.make_plan(net, p)) for p in ("simple", "loop", "pac")}
    assert sizes["simple"] == net.link_count
    assert sizes["pac"] < sizes["loop"] < sizes["simple"]
    plan = ek.make_plan(net, "pac", "sync")
    assert plan.mode == "sync"
    assert set(plan.provenance) == set(plan.links)
    assert ek.apply(net, plan).count("buffer") == len(plan)
    with pytest.raises(ValueError):
        ek.make_plan(net, "bogus")


def test_simulate_gcd():
    net = gcd_net()
    buffered = ek.apply(net, ek.make_plan(net, "pac"))
    for mode in ("async", "sync"):
        r = ek.simulate(buffered, mode=mode, stimulus={"a": [12, 35], "b": [18, 14]})
        assert [s["value"] for s in r["outputs"]["g"]] == [6, 7]
        assert not r["deadlock"]
    stuck = ek.simulate(net, stimulus={"a": [12], "b": [18]})
    assert stuck["deadlock"]


def test_cost_and_throughput():
    net = gcd_net()
    small = ek.apply(net, ek.make_plan(net, "pac"))
    big = ek.apply(net, ek.make_plan(net, "simple"))
    assert ek.cost(small, unit_mem=True)["leakage_power"] < ek.cost(big, unit_mem=True)["leakage_power"]
    c1, c2 = ek.cost(small, f=1e9), ek.cost(small, f=2e9)
    assert math.isclose(c2["dynamic_power"], 2 * c1["dynamic_power"])
    t = ek.throughput(small)
    assert t["cycles"] > 0


def test_sweep_rows():
    rows = ek.sweep("poly", BENCH, threads=2)
    assert len(rows) == 6
    assert all(r["equivalent"] for r in rows)
