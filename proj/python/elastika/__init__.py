"""Elastic dataflow synthesis: compile, buffer, simulate and cost CSP-style sources."""

import json

from ._elastika import (
    BufferPlan,
    ElastikaError,
    Network,
    apply,
    compile_source,
    make_plan,
    read_netlist,
    validate,
)
from . import _elastika as _core

__all__ = [
    "BufferPlan",
    "ElastikaError",
    "Network",
    "apply",
    "compile_source",
    "compile_file",
    "cost",
    "depgraph",
    "make_plan",
    "read_netlist",
    "simulate",
    "sweep",
    "throughput",
    "validate",
]


def compile_file(path):
    with open(path, encoding="utf-8") as f:
        return compile_source(f.read())


def depgraph(net):
    return json.loads(_core.depgraph_json(net))


def simulate(net, mode="async", stimulus=None, clock_ps=1000, delays=None, horizon_ps=1_000_000_000):
    return json.loads(_core.simulate_json(net, mode, stimulus or {}, clock_ps, delays or {}, horizon_ps))


def cost(net, A=0.5, f=1e9, C=1.0, Vdd=1.0, leak_per_area=1.0, unit_mem=False):
    return json.loads(_core.cost_json(net, A, f, C, Vdd, leak_per_area, unit_mem))


def throughput(net, mode="async", clock_ps=1000, delays=None, excluded=()):
    return json.loads(_core.throughput_json(net, mode, clock_ps, delays or {}, list(excluded)))


def sweep(bench, directory, clocks_ps=(1000,), threads=0):
    return json.loads(_core.sweep_json(bench, directory, list(clocks_ps), threads))["rows"]
