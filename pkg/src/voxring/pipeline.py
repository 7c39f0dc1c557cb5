"""The picture pipeline: voxels -> cubical complex -> boundary model ->
face reduction -> extended model -> cup table / voxel cycles, with
per-stage timing and optional independent cross-checks.
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field

from .atmodel import (ATModel, boundary_atmodel, extend_atmodel,
                      face_reduction, verify_atmodel)
from .cubical import CubicalComplex, boundary_subcomplex, complex_from_voxels
from .cup import CupMatrix, cup_product_matrix, cup_rank_crosscheck
from .errors import PreconditionError
from .oracle import betti_numbers
from .picture import (Picture3D, VoxelCycle, complement_picture,
                      cycle_to_voxels, foreground_components)

RANK_CHECK_CELL_LIMIT = 5000


@dataclass
class AnalysisReport:
    dims: tuple[int, int, int]
    n_voxels: int
    complemented: bool
    padding: int
    cells_q: int
    cells_dq: int
    cells_k: int
    betti: tuple[int, int, int]
    generators: tuple[dict, ...]
    cup: CupMatrix | None = None
    cycles: tuple[VoxelCycle, ...] = ()
    verification: dict[str, object] = field(default_factory=dict)
    oracle: dict[str, object] = field(default_factory=dict)
    timings: dict[str, float] = field(default_factory=dict)
    flags: tuple[str, ...] = ()

    @property
    def verified_ok(self) -> bool:
        return all(_report_ok(v) for v in self.verification.values()) and \
            all(_report_ok(v) for v in self.oracle.values())

    def to_json(self) -> dict:
        out = {
            "dims": list(self.dims),
            "voxels": self.n_voxels,
            "complemented": self.complemented,
            "padding": self.padding,
            "cells": {"Q": self.cells_q, "dQ": self.cells_dq, "K": self.cells_k},
            "betti": list(self.betti),
            "generators": list(self.generators),
            "flags": list(self.flags),
        }
        if self.cup is not None:
            out["cup"] = {
                "pairs": [list(p) for p in self.cup.pairs],
                "cavities": list(self.cup.cavities),
                "table": [list(r) for r in self.cup.entries],
                "rank": self.cup.rank,
            }
        if self.cycles:
            out["cycles"] = [
                {"generator": c.generator, "dim": c.dim,
                 "voxels": [list(v) for v in c.voxels],
                 "fallback_used": c.fallback_used}
                for c in self.cycles]
        if self.verification:
            out["verification"] = {k: _verdict(v)
                                   for k, v in self.verification.items()}
        if self.oracle:
            out["oracle"] = {k: _verdict(v) for k, v in self.oracle.items()}
        return out


def _report_ok(v) -> bool:
    if isinstance(v, bool):
        return v
    if isinstance(v, str):
        return not v.startswith("FAIL")
    return bool(v.ok)


def _verdict(v):
    if isinstance(v, (bool, str)):
        return v
    if hasattr(v, "checks"):
        return {c.name: bool(c.ok) for c in v.checks}
    return repr(v)


@dataclass
class PipelineState:
    """Everything the pipeline built, for callers needing the raw objects."""

    picture: Picture3D
    Q: CubicalComplex
    dQ: CubicalComplex
    K: object
    boundary_model: ATModel
    model: ATModel


def _generator_summary(state: PipelineState) -> tuple[dict, ...]:
    out = []
    model = state.model
    for cell in model.generators:
        dim = model.complex.dim(cell)
        info = {"cell": cell, "dim": dim, "cycle_size": len(model.g(cell))}
        if cell in state.Q:
            cube = state.Q.cube(cell)
            info["cube"] = {"base": list(cube.base), "extent": cube.extent}
        out.append(info)
    return tuple(out)


def analyze_picture(picture: Picture3D, *, complement: bool = False,
                    padding: int = 1, want_cup: bool = True,
                    want_cycles: bool = False, verify: bool = False,
                    oracle: bool = False,
                    rank_check_limit: int = RANK_CHECK_CELL_LIMIT
                    ) -> tuple[AnalysisReport, PipelineState]:
    """Run the full analysis on a picture (or, with ``complement``, on its
    padded background) and return the report plus the built objects.

    Raises PreconditionError when the analyzed foreground is empty or not
    a single 26-connected component.
    """
    timings: dict[str, float] = {}

    def timed(name, fn, *args, **kw):
        t0 = time.perf_counter()
        out = fn(*args, **kw)
        timings[name] = time.perf_counter() - t0
        return out

    if complement:
        picture = timed("complement", complement_picture, picture, padding)
    if not picture.foreground:
        raise PreconditionError("empty foreground")
    ncomp = timed("components", foreground_components, picture)
    if ncomp != 1:
        raise PreconditionError(
            f"foreground must be one 26-connected component, found {ncomp}")

    Q = timed("complex", complex_from_voxels, set(picture.foreground))
    dQ = timed("boundary", boundary_subcomplex, Q)
    m_dq = timed("boundary_model", boundary_atmodel, dQ)
    K = timed("reduction", face_reduction, Q, dQ)
    model = timed("extension", extend_atmodel, m_dq, K)

    state = PipelineState(picture, Q, dQ, K, m_dq, model)
    betti = model.betti(2)
    report = AnalysisReport(
        dims=picture.dims, n_voxels=picture.n_voxels,
        complemented=complement, padding=padding if complement else 0,
        cells_q=Q.n_cells(), cells_dq=dQ.n_cells(), cells_k=K.n_cells(),
        betti=betti, generators=_generator_summary(state),
        timings=timings, flags=model.flags)

    if want_cup:
        report.cup = timed("cup", cup_product_matrix, model, Q)
    if want_cycles:
        report.cycles = timed(
            "cycles",
            lambda: tuple(cycle_to_voxels(model, g, picture, Q, dQ)
                          for g in model.generators))
    if verify:
        t0 = time.perf_counter()
        report.verification["boundary_model"] = verify_atmodel(dQ, m_dq)
        report.verification["extended_model"] = verify_atmodel(K, model)
        report.verification["dd_zero_Q"] = Q.check_boundary_squared() is None
        report.verification["dd_zero_K"] = K.check_boundary_squared() is None
        timings["verify"] = time.perf_counter() - t0
    if oracle or verify:
        t0 = time.perf_counter()
        report.oracle["betti_dQ"] = (
            True if betti_numbers(dQ) == m_dq.betti(2)
            else f"FAIL: oracle {betti_numbers(dQ)} vs model {m_dq.betti(2)}")
        ob = betti_numbers(K)
        report.oracle["betti_K"] = (
            True if ob == betti else f"FAIL: oracle {ob} vs model {betti}")
        oq = betti_numbers(Q)
        report.oracle["betti_Q"] = (
            True if oq == betti else f"FAIL: oracle {oq} vs model {betti}")
        if Q.n_cells() <= rank_check_limit:
            cc = cup_rank_crosscheck(Q)
            pipeline_rank = (report.cup.rank if report.cup is not None
                             else cup_product_matrix(model, Q).rank)
            if cc.ok and cc.cubical_rank == pipeline_rank:
                report.oracle["rank_crosscheck"] = True
            else:
                report.oracle["rank_crosscheck"] = (
                    f"FAIL: {cc} vs pipeline rank {pipeline_rank}")
        else:
            report.oracle["rank_crosscheck"] = (
                f"skipped: {Q.n_cells()} cells exceeds limit {rank_check_limit}")
        timings["oracle"] = time.perf_counter() - t0

    return report, state
