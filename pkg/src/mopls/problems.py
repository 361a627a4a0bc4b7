"""Benchmark objective functions, analytic Pareto-front samplers, and a
configurable-delay wrapper that stands in for truly expensive simulators.

All evaluators take a decision vector in the unit hypercube [0, 1]^d and
minimize two objectives. Problems whose published definition uses a wider
box (ZDT4, LZF2-LZF5) remap internally, so the unit-cube contract holds at
the interface.

The LZF1-LZF6 labels map onto instances F1-F5 and F7 of the Li-Zhang test
set (the 3-objective F6 is skipped to keep all problems bi-objective):

    LZF1 -> F1, LZF2 -> F2, LZF3 -> F3, LZF4 -> F4, LZF5 -> F5, LZF6 -> F7

References:
    Zitzler, Deb & Thiele (2000). Comparison of multiobjective evolutionary
    algorithms: Empirical results. Evolutionary Computation 8(2).
    Li & Zhang (2009). Multiobjective optimization problems with complicated
    Pareto sets, MOEA/D and NSGA-II. IEEE Trans. Evolutionary Computation.
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field, replace
from typing import Callable

import numpy as np

# Common reporting reference: safely above the worst objective values seen
# on these problems at desk scale (shared so coverage is comparable).
DEFAULT_REFERENCE = (11.0, 11.0)

# f1 intervals of the disconnected ZDT3 front segments.
_ZDT3_SEGMENTS = [
    (0.0, 0.0830015349),
    (0.1822287280, 0.2577623634),
    (0.4093136748, 0.4538821041),
    (0.6183967944, 0.6525117038),
    (0.8233317983, 0.8518328654),
]

_ZDT6_F1_MIN = 0.2807753191


@dataclass(frozen=True)
class ProblemSpec:
    """A registered benchmark problem."""

    name: str
    d: int
    k: int
    evaluate: Callable[[np.ndarray], np.ndarray]
    pareto_front_sampler: Callable[[int], np.ndarray] | None = None
    pareto_set_sampler: Callable[[int], np.ndarray] | None = None
    reporting_ref: np.ndarray = field(
        default_factory=lambda: np.asarray(DEFAULT_REFERENCE)
    )


# ----------------------------------------------------------------------
# ZDT family
# ----------------------------------------------------------------------

def _zdt_eval(name: str, x: np.ndarray) -> np.ndarray:
    x = np.asarray(x, dtype=float)
    d = len(x)
    f1 = x[0]
    rest = x[1:]
    if name == "zdt1":
        g = 1 + 9 * rest.sum() / (d - 1)
        f2 = g * (1 - np.sqrt(f1 / g))
    elif name == "zdt2":
        g = 1 + 9 * rest.sum() / (d - 1)
        f2 = g * (1 - (f1 / g) ** 2)
    elif name == "zdt3":
        g = 1 + 9 * rest.sum() / (d - 1)
        f2 = g * (1 - np.sqrt(f1 / g) - (f1 / g) * np.sin(10 * np.pi * f1))
    elif name == "zdt4":
        z = 10 * rest - 5  # published domain [-5, 5]
        g = 1 + 10 * (d - 1) + np.sum(z**2 - 10 * np.cos(4 * np.pi * z))
        f2 = g * (1 - np.sqrt(f1 / g))
    elif name == "zdt6":
        f1 = 1 - np.exp(-4 * x[0]) * np.sin(6 * np.pi * x[0]) ** 6
        g = 1 + 9 * (rest.sum() / (d - 1)) ** 0.25
        f2 = g * (1 - (f1 / g) ** 2)
    else:
        raise KeyError(name)
    return np.array([f1, f2])


def _zdt_front(name: str, n: int) -> np.ndarray:
    if name in ("zdt1", "zdt4"):
        f1 = np.linspace(0, 1, n)
        f2 = 1 - np.sqrt(f1)
    elif name == "zdt2":
        f1 = np.linspace(0, 1, n)
        f2 = 1 - f1**2
    elif name == "zdt6":
        f1 = np.linspace(_ZDT6_F1_MIN, 1, n)
        f2 = 1 - f1**2
    elif name == "zdt3":
        lengths = np.array([b - a for a, b in _ZDT3_SEGMENTS])
        counts = np.maximum(1, np.round(n * lengths / lengths.sum()).astype(int))
        while counts.sum() > n:
            counts[np.argmax(counts)] -= 1
        while counts.sum() < n:
            counts[np.argmax(lengths)] += 1
        # Adjacent segments share an f2 level at their facing boundaries,
        # and the tabulated boundary constants carry ~10 digits, so edge
        # samples can tie or cross by ~1e-10. Pull both ends in slightly so
        # the sampled points stay strictly mutually non-dominated.
        parts = [
            np.linspace(a + 1e-7, b - 1e-7, c)
            for (a, b), c in zip(_ZDT3_SEGMENTS, counts)
        ]
        f1 = np.concatenate(parts)
        f2 = 1 - np.sqrt(f1) - f1 * np.sin(10 * np.pi * f1)
    else:
        raise KeyError(name)
    return np.column_stack([f1, f2])


def _zdt_set(name: str, d: int, n: int) -> np.ndarray:
    # Unit-cube coordinates of points on the Pareto-optimal set.
    if name == "zdt6":
        raise KeyError("zdt6 Pareto set is not a simple x1 sweep")
    t = np.linspace(0, 1, n)
    X = np.full((n, d), 0.5 if name == "zdt4" else 0.0)
    if name == "zdt3":
        keep = _zdt_front("zdt3", n)[:, 0]
        t = keep
    X[:, 0] = t
    return X


# ----------------------------------------------------------------------
# Li-Zhang family (LZF labels, see module docstring for the mapping)
# ----------------------------------------------------------------------

def _lzf_targets(name: str, x1: float, j: np.ndarray, n: int) -> np.ndarray:
    """Pareto-set value of x_j (published coordinates) as a function of x1.

    ``j`` holds 1-based variable indices (2..n). For LZF3-LZF5 the target
    differs between odd and even j; both are returned and the caller picks.
    """
    if name in ("lzf1", "lzf6"):
        return x1 ** (0.5 * (1 + 3 * (j - 2) / (n - 2)))
    if name == "lzf2":
        return np.sin(6 * np.pi * x1 + j * np.pi / n)
    raise KeyError(name)


def _lzf_eval(name: str, x: np.ndarray) -> np.ndarray:
    x = np.asarray(x, dtype=float)
    n = len(x)
    x1 = x[0]
    j = np.arange(2, n + 1)  # 1-based indices of the tail variables
    odd = j % 2 == 1
    even = ~odd
    if name in ("lzf1", "lzf6"):
        xt = x[1:]  # published domain [0, 1]
    else:
        xt = 2 * x[1:] - 1  # published domain [-1, 1]
    ang = 6 * np.pi * x1 + j * np.pi / n
    if name in ("lzf1", "lzf2"):
        dev = xt - _lzf_targets(name, x1, j, n)
        t1 = dev[odd] ** 2
        t2 = dev[even] ** 2
    elif name == "lzf3":
        t1 = (xt[odd] - 0.8 * x1 * np.cos(ang[odd])) ** 2
        t2 = (xt[even] - 0.8 * x1 * np.sin(ang[even])) ** 2
    elif name == "lzf4":
        t1 = (xt[odd] - 0.8 * x1 * np.cos(ang[odd] / 3)) ** 2
        t2 = (xt[even] - 0.8 * x1 * np.sin(ang[even])) ** 2
    elif name == "lzf5":
        h = 0.3 * x1**2 * np.cos(24 * np.pi * x1 + 4 * j * np.pi / n) + 0.6 * x1
        t1 = (xt[odd] - h[odd] * np.cos(ang[odd])) ** 2
        t2 = (xt[even] - h[even] * np.sin(ang[even])) ** 2
    elif name == "lzf6":
        y = xt - _lzf_targets(name, x1, j, n)
        term = 4 * y**2 - np.cos(8 * np.pi * y) + 1
        t1 = term[odd]
        t2 = term[even]
    else:
        raise KeyError(name)
    s1 = 2 * t1.mean() if t1.size else 0.0
    s2 = 2 * t2.mean() if t2.size else 0.0
    return np.array([x1 + s1, 1 - np.sqrt(x1) + s2])


def _lzf_set(name: str, d: int, n: int) -> np.ndarray:
    """Unit-cube coordinates of n points on the published Pareto set."""
    ts = np.linspace(0, 1, n)
    out = np.empty((n, d))
    j = np.arange(2, d + 1)
    odd = j % 2 == 1
    for i, t in enumerate(ts):
        ang = 6 * np.pi * t + j * np.pi / d
        if name in ("lzf1", "lzf6"):
            tail = _lzf_targets(name, t, j, d)
        elif name == "lzf2":
            tail = np.sin(ang)
        elif name == "lzf3":
            tail = np.where(odd, 0.8 * t * np.cos(ang), 0.8 * t * np.sin(ang))
        elif name == "lzf4":
            tail = np.where(odd, 0.8 * t * np.cos(ang / 3), 0.8 * t * np.sin(ang))
        elif name == "lzf5":
            h = 0.3 * t**2 * np.cos(24 * np.pi * t + 4 * j * np.pi / d) + 0.6 * t
            tail = np.where(odd, h * np.cos(ang), h * np.sin(ang))
        else:
            raise KeyError(name)
        if name not in ("lzf1", "lzf6"):
            tail = (tail + 1) / 2  # back to unit-cube coordinates
        out[i, 0] = t
        out[i, 1:] = tail
    return out


def _lzf_front(n: int) -> np.ndarray:
    f1 = np.linspace(0, 1, n)
    return np.column_stack([f1, 1 - np.sqrt(f1)])


ZDT_NAMES = ("zdt1", "zdt2", "zdt3", "zdt4", "zdt6")
LZF_NAMES = ("lzf1", "lzf2", "lzf3", "lzf4", "lzf5", "lzf6")


def make_problem(name: str, d: int) -> ProblemSpec:
    """Construct a registered benchmark problem of dimension ``d``."""
    name = name.lower()
    if name in ZDT_NAMES:
        set_sampler = None
        if name != "zdt6":
            set_sampler = lambda n, _name=name, _d=d: _zdt_set(_name, _d, n)
        return ProblemSpec(
            name=f"{name}-d{d}",
            d=d,
            k=2,
            evaluate=lambda x, _name=name: _zdt_eval(_name, x),
            pareto_front_sampler=lambda n, _name=name: _zdt_front(_name, n),
            pareto_set_sampler=set_sampler,
        )
    if name in LZF_NAMES:
        if d < 3:
            raise ValueError("LZF problems need d >= 3")
        return ProblemSpec(
            name=f"{name}-d{d}",
            d=d,
            k=2,
            evaluate=lambda x, _name=name: _lzf_eval(_name, x),
            pareto_front_sampler=_lzf_front,
            pareto_set_sampler=lambda n, _name=name, _d=d: _lzf_set(_name, _d, n),
        )
    raise KeyError(f"unknown problem {name!r}")


def get_problem(spec: str, d: int | None = None) -> ProblemSpec:
    """Resolve a problem from a name like ``"zdt1-d8"`` or name + dimension."""
    spec = spec.lower()
    if "-d" in spec:
        base, _, dim = spec.rpartition("-d")
        return make_problem(base, int(dim))
    if d is None:
        raise ValueError("dimension required when the name does not carry one")
    return make_problem(spec, d)


def expensive_wrapper(inner: ProblemSpec, delay: float) -> ProblemSpec:
    """Wrap a problem so each evaluation sleeps ``delay`` seconds.

    Evaluation semantics are unchanged; with delay = 0 the wrapper is the
    identity. Used to mimic truly expensive simulators in wall-clock demos.
    """
    if delay <= 0:
        return inner

    def slow_eval(x, _inner=inner.evaluate, _delay=delay):
        time.sleep(_delay)
        return _inner(x)

    return replace(inner, name=f"{inner.name}+delay{delay:g}", evaluate=slow_eval)
