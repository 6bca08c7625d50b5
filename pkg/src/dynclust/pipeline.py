"""End-to-end composition: incremental bicriteria layer feeding the
reduction and solver, one adversarial edge at a time.

The reduction layer starts lazily: while the graph is too sparse for any
finite-cost solution (the bicriteria layer's frontier is up), each step
just reports the no-finite-solution marker.  At the first step with a
fully built level structure the reduction initializes from the assignment
as it stands, and from then on every step runs assignment modifications
followed by the edge insertion, exactly one solve cadence behind each.
"""

import logging
from dataclasses import dataclass, field

import numpy as np

from .graph import DynGraph
from .incremental import (BicriteriaState, init_bicriteria, handle_insertion,
                          sigma_change_feed)
from .params import ClusteringParams
from .powers import INF
from .reduction import ReductionState
from .weighted import Solution

logger = logging.getLogger("dynclust")


@dataclass
class StepRecord:
    step: int
    opt_infinite: bool
    report: dict
    S_size: int
    sigma_inc: int
    delta_S: int
    spanner_edges: int
    C: Solution | None

    def to_json(self) -> dict:
        out = {
            "step": self.step,
            "opt_infinite": self.opt_infinite,
            "S_size": self.S_size,
            "sigma_inc": self.sigma_inc,
            "delta_S": self.delta_S,
            "spanner_edges": self.spanner_edges,
            "C_size": 0 if self.C is None else len(self.C.centers),
            "cost_H": None if self.C is None or self.C.cost == INF else self.C.cost,
        }
        out.update(self.report)
        return out


class Pipeline:
    def __init__(self, g: DynGraph, p: ClusteringParams, eps_red: float = 0.25,
                 lam: int = 5, spanner_mode: str = "cluster",
                 solve_every: int = 1):
        self.g = g
        self.p = p
        self.eps_red = eps_red
        self.lam = lam
        self.spanner_mode = spanner_mode
        self.solve_every = solve_every
        self.bic = init_bicriteria(g, p)
        self.red: ReductionState | None = None
        self.steps = 0
        if not self.bic.opt_infinite:
            self._start_reduction()

    def _start_reduction(self):
        counts = {}
        for s in self.bic.sigma.tolist():
            counts[s] = counts.get(s, 0) + 1
        self.red = ReductionState(self.g, counts, self.p.k, self.p.z,
                                  eps=self.eps_red, lam=self.lam,
                                  spanner_mode=self.spanner_mode,
                                  seed=self.p.seed,
                                  solve_every=self.solve_every)
        logger.info("reduction started at step %d with %d centers",
                    self.steps, len(self.red.S))

    def step(self, u: int, v: int, w: float) -> StepRecord:
        self.steps += 1
        report = handle_insertion(self.bic, u, v, w)
        batch = sigma_change_feed(self.bic)
        C = None
        if self.red is None:
            if not report.opt_infinite:
                self._start_reduction()
                C = self.red.C
        else:
            self.red.assignment_modifications(batch)
            C = self.red.edge_insertion(u, v, w)
        red = self.red
        return StepRecord(
            step=self.steps,
            opt_infinite=report.opt_infinite,
            report=report.to_json(),
            S_size=report.S_size,
            sigma_inc=0 if red is None else red.sigma_inc,
            delta_S=0 if red is None else red.delta_S_last,
            spanner_edges=0 if red is None else red.spanner.edge_count(),
            C=C,
        )


def end_to_end_step(pipeline: Pipeline, u: int, v: int, w: float) -> Solution | None:
    """One adversarial edge through the whole stack; None while the graph
    admits no finite-cost solution."""
    return pipeline.step(u, v, w).C
