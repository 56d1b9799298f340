"""``ftv`` command-line front end.

Every subcommand reads one JSON problem file and writes one JSON report
(stdout unless ``--out`` is given).  Exit codes: 0 success, 2 invalid input,
3 search cap reached, 4 a structural identity failed at runtime.
"""
from __future__ import annotations

import json
import logging
import sys
from concurrent.futures import ProcessPoolExecutor
from itertools import product as iproduct
from pathlib import Path
from typing import Any

import click

from .ci_partitioned import (
    PartitionedFraming,
    ci_mirror_monomials,
    ci_primal_monomials,
    partitioned_process,
)
from .errors import CapExceeded, FDualityError, InputError, InvariantViolation, SearchSpaceTooLarge
from .exact_linalg import as_int_matrix, gale_dual, integer_kernel, matvec
from .ftv_core import (
    DEFAULT_K_CAP,
    FramedToricVariety,
    aligned_c,
    f_dual,
    f_process,
    record_is_k_dual,
)
from .mirror_families import (
    exponent_matrix,
    givental_pn,
    laurent_superpotential,
    mirror_monomials,
    family_monomials,
    moduli_counts,
    modulus_slots,
    render,
    subfamily_dual,
    weak_mirror_points,
)
from .polyhedra import LatticePolytope
from .quotient_structure import torsion_matrix, weight_vector_rank1
from .serialize import dumps, torsion_to_json
from .varieties import hirzebruch, product, projective_space, weighted_projective

log = logging.getLogger("fduality")

EXIT_INPUT, EXIT_CAP, EXIT_INVARIANT = 2, 3, 4
FORMAT_VERSION = 1


# ---------------------------------------------------------------- problem files


def parse_variety(desc: Any) -> list[list[int]]:
    if not isinstance(desc, dict) or len(desc) != 1:
        raise InputError("variety must be an object with exactly one constructor key")
    (key, val), = desc.items()
    try:
        if key == "fan":
            return as_int_matrix(val)
        if key == "projective_space":
            return projective_space(int(val))
        if key == "weighted_projective":
            return weighted_projective(val)
        if key == "hirzebruch":
            return hirzebruch(int(val))
        if key == "product":
            return product(*[parse_variety(v) for v in val])
    except (TypeError, ValueError) as exc:
        if isinstance(exc, InputError):
            raise
        raise InputError(f"bad variety argument: {exc}") from exc
    raise InputError(f"unknown variety constructor {key!r}")


def load_problem(path: str) -> dict:
    try:
        data = json.loads(Path(path).read_text())
    except (OSError, json.JSONDecodeError) as exc:
        raise InputError(f"cannot read problem file: {exc}") from exc
    if not isinstance(data, dict):
        raise InputError("problem file must hold a JSON object")
    version = data.get("version", FORMAT_VERSION)
    if version != FORMAT_VERSION:
        raise InputError(f"unsupported problem version {version}")
    return data


def _int_vector(x, name: str) -> list[int]:
    if not isinstance(x, list) or not all(isinstance(v, (int, str)) for v in x):
        raise InputError(f"{name} must be a list of integers")
    return [int(v) for v in x]


# ---------------------------------------------------------------- report builders


def _rendered(cols, fmt):
    zero = tuple([0] * len(cols[0])) if cols else ()
    prefer = [i for i, c in enumerate(cols) if c == zero]
    return render(cols, fmt, modulus_slots(cols, prefer))


def _rendered_em(em, fmt):
    prefer = [em.origin] if em.origin is not None else []
    return render(em.columns, fmt, modulus_slots(em.columns, prefer))


def dualize_report(data: dict, k_cap: int, fmt: str) -> dict:
    V = parse_variety(data.get("variety"))
    a = _int_vector(data.get("framing"), "framing")
    ftv = FramedToricVariety(V, a)
    rec = f_process(ftv, k_cap)
    f = family_monomials(V, a, rec.first.points, k=rec.k0)
    fv = mirror_monomials(rec.Lambda_a, rec.b, rec.second.points)
    report: dict = {
        "command": "dualize",
        "input": {"fan": V, "framing": a},
        "f_process": {
            "k0": rec.k0,
            "k1": rec.k1,
            "Lambda_a": rec.Lambda_a,
            "M_a": rec.first.M_a,
            "b": rec.b,
            "Lambda_b": rec.Lambda_b,
            "M_ab": rec.M_ab,
            "c": rec.c,
            "c_aligned": aligned_c(rec),
            "calibrated": rec.calibrated,
            "k_dual": record_is_k_dual(rec),
            "evidence": rec.evidence,
        },
        "polytopes": {"f_polytope": rec.first.delta, "dual_f_polytope": rec.second.delta},
        "exponents": {"f": sorted(f.columns), "f_dual": sorted(fv.columns),
                      "degree": list(f.degree), "dual_degree": list(fv.degree)},
        "moduli": moduli_counts(V, a, k_cap, record=rec),
        "rendered": {"f": _rendered_em(f, fmt), "f_dual": _rendered_em(fv, fmt)},
        "dual_problem": {"version": FORMAT_VERSION, "variety": {"fan": rec.Lambda_a}, "framing": rec.b},
    }
    if len(rec.Lambda_a[0]) == len(V) + 1:
        q = weight_vector_rank1(rec.Lambda_a)
        t = torsion_matrix(q, rec.Lambda_a)
        report["quotient"] = {"q": q, **torsion_to_json(t)}
    return report


def ci_report(data: dict, k_cap: int, fmt: str) -> dict:
    V = parse_variety(data.get("variety"))
    parts = data.get("partition")
    if not isinstance(parts, list) or not parts:
        raise InputError("partition must be a non-empty list of framing vectors")
    pf = PartitionedFraming.from_vectors([_int_vector(p, "partition part") for p in parts],
                                         data.get("blocks"))
    rec = partitioned_process(V, pf, k_cap)
    primal = [ci_primal_monomials(V, pf, k) for k in range(len(pf.parts))]
    dual = [ci_mirror_monomials(rec, k) for k in range(len(pf.parts))]
    return {
        "command": "ci-dualize",
        "input": {"fan": V, "partition": [list(p) for p in pf.parts], "blocks": [list(b) for b in pf.blocks]},
        "record": {
            "k0": rec.k0,
            "h1": rec.h1,
            "part_polytopes": rec.part_polytopes,
            "hull": rec.hull,
            "Lambda_a": rec.Lambda_a,
            "b_parts": rec.b_parts,
            "b": rec.b,
            "J": rec.J,
            "Lambda_b": rec.Lambda_b,
            "c_parts": rec.c_parts,
            "calibrated": rec.calibrated,
            "evidence": rec.evidence,
        },
        "exponents": {"f": [sorted(e.columns) for e in primal], "f_dual": [sorted(e.columns) for e in dual]},
        "rendered": {"f": [_rendered_em(e, fmt) for e in primal],
                     "f_dual": [_rendered_em(e, fmt) for e in dual]},
    }


def lg_report(data: dict, k_cap: int, fmt: str) -> dict:
    if "lg" in data:
        desc = data["lg"]
        try:
            n, d = int(desc["n"]), int(desc["d"])
        except (KeyError, TypeError, ValueError) as exc:
            raise InputError("lg needs integer fields n and d") from exc
        g = givental_pn(n, d)
        cols = sorted(g.superpotential.columns)
        return {
            "command": "lg",
            "input": {"n": n, "d": d},
            "Lambda": g.Lambda,
            "b": g.b,
            "superpotential": cols,
            "matches_closed_form": g.matches,
            "identities": {"product": g.product_identity, "sum": g.sum_identity},
            "rendered": _rendered(cols, fmt),
        }
    V = parse_variety(data.get("variety"))
    a = _int_vector(data.get("framing"), "framing")
    rec = f_dual(FramedToricVariety(V, a, weak=True))
    em = exponent_matrix(rec.Lambda_a, rec.b, weak_mirror_points(V))
    W = laurent_superpotential(em, rec.b)
    cols = sorted(W.columns)
    return {
        "command": "lg",
        "input": {"fan": V, "framing": a},
        "Lambda": rec.Lambda_a,
        "b": rec.b,
        "superpotential": cols,
        "rendered": _rendered(cols, fmt),
    }


def subfamily_report(data: dict, k_cap: int, fmt: str) -> dict:
    V = parse_variety(data.get("variety"))
    a = _int_vector(data.get("framing"), "framing")
    verts = data.get("delta")
    if not isinstance(verts, list) or not verts:
        raise InputError("delta must be a list of lattice vertices")
    D = LatticePolytope([_int_vector(v, "delta vertex") for v in verts])
    r = subfamily_dual(V, a, D, k_cap)
    return {
        "command": "subfamily",
        "input": {"fan": V, "framing": a, "delta": D},
        "V_Delta": r.V_Delta,
        "v": r.v,
        "Lambda_v": r.Lambda_v,
        "w": r.w,
        "assumptions": {"calibrated_subvariety": r.assumption3, "dual_inclusion": r.assumption4},
        "delta_w_equals_delta": r.delta_w_equals_delta,
        "exponents": {
            "f_delta": sorted(r.f_delta.columns),
            "f_dual": sorted(r.f_dual.columns),
            "bhk_primal": sorted(r.bhk_primal.columns),
            "bhk_dual": sorted(r.bhk_dual.columns),
        },
        "rendered": {
            "f_delta": _rendered_em(r.f_delta, fmt),
            "f_dual": _rendered_em(r.f_dual, fmt),
        },
    }


def _web_node(args) -> dict | None:
    V, a, k_cap = args
    try:
        rec = f_process(FramedToricVariety(V, a), k_cap)
    except CapExceeded:
        return {"framing": a, "calibrated": False, "reason": "k-cap"}
    node = {"framing": list(a), "calibrated": rec.calibrated}
    if rec.calibrated:
        node.update({"Lambda_a": rec.Lambda_a, "b": rec.b, "k0": rec.k0})
        srt = sorted(a)
        node["floor_ratio_one"] = srt[-2] // srt[0] == 1 if len(a) > 2 else None
    return node


def enumerate_framings(V, degree, bound: int, max_candidates: int, symmetric: bool):
    """Strictly positive framings ``a <= bound`` with ``Q a = degree``."""
    Q = gale_dual(V) if integer_kernel(V) else []
    m = len(V[0])
    space = bound ** m
    if not symmetric and space > max_candidates:
        raise SearchSpaceTooLarge(f"{space} candidate framings exceed the limit {max_candidates}")
    out = []
    seen = 0
    for a in iproduct(range(1, bound + 1), repeat=m):
        if symmetric and list(a) != sorted(a):
            continue
        seen += 1
        if seen > max_candidates:
            raise SearchSpaceTooLarge(f"more than {max_candidates} candidate framings")
        if matvec(Q, a) == list(degree):
            out.append(list(a))
    return Q, out


def enumerate_report(data: dict, k_cap: int, fmt: str) -> dict:
    desc = data.get("variety")
    V = parse_variety(desc)
    degree = _int_vector(data.get("degree"), "degree")
    bound = int(data.get("bound", max(degree) if degree else 1))
    max_candidates = int(data.get("max_candidates", 100000))
    workers = int(data.get("workers", 1))
    symmetric = isinstance(desc, dict) and "projective_space" in desc
    Q, cands = enumerate_framings(V, degree, bound, max_candidates, symmetric)
    jobs = [(V, a, k_cap) for a in cands]
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            nodes = list(pool.map(_web_node, jobs))
    else:
        nodes = [_web_node(j) for j in jobs]
    calibrated = [nd for nd in nodes if nd["calibrated"]]
    edges = [{"from": nd["framing"], "to": {"fan": nd["Lambda_a"], "framing": nd["b"]}} for nd in calibrated]
    return {
        "command": "enumerate",
        "input": {"fan": V, "degree": degree, "bound": bound, "ascending_only": symmetric},
        "weight_matrix": Q,
        "candidates": len(cands),
        "nodes": nodes,
        "calibrated": [nd["framing"] for nd in calibrated],
        "edges": edges,
    }


BUILDERS = {
    "dualize": dualize_report,
    "ci-dualize": ci_report,
    "lg": lg_report,
    "subfamily": subfamily_report,
    "enumerate": enumerate_report,
}


def run(command: str, path: str, k_cap: int = DEFAULT_K_CAP, fmt: str = "text") -> tuple[int, str]:
    """Execute one subcommand; returns ``(exit code, JSON text)``."""
    try:
        data = load_problem(path)
        opts = data.get("options", {}) or {}
        k_cap = int(opts.get("k_cap", k_cap))
        fmt = opts.get("render", fmt)
        return 0, dumps(BUILDERS[command](data, k_cap, fmt))
    except InputError as exc:
        code = EXIT_INPUT
        err = exc
    except CapExceeded as exc:
        code = EXIT_CAP
        err = exc
    except InvariantViolation as exc:
        code = EXIT_INVARIANT
        err = exc
    except FDualityError as exc:
        code = EXIT_INVARIANT
        err = exc
    body = {"error": type(err).__name__, "message": str(err),
            "evidence": getattr(err, "evidence", {}), "exit_code": code}
    log.error("%s: %s", type(err).__name__, err)
    return code, dumps(body)


# ---------------------------------------------------------------- click wiring


def _options(f):
    f = click.option("--k-cap", "k_cap", type=int, default=DEFAULT_K_CAP, show_default=True,
                     help="Largest multiple tried when searching for an interior origin.")(f)
    f = click.option("--render", "fmt", type=click.Choice(["text", "latex"]), default="text",
                     show_default=True, help="Polynomial rendering format.")(f)
    f = click.option("--out", "out", type=click.Path(dir_okay=False), default=None,
                     help="Write the JSON report here instead of stdout.")(f)
    return click.argument("problem", type=click.Path(exists=True, dir_okay=False))(f)


def _emit(command, problem, out, fmt, k_cap):
    code, text = run(command, problem, k_cap, fmt)
    if out:
        Path(out).write_text(text)
    else:
        click.echo(text, nl=False)
    sys.exit(code)


@click.group()
@click.option("-v", "--verbose", is_flag=True, help="Log progress to stderr.")
def main(verbose: bool) -> None:
    """Framed duality of toric varieties."""
    logging.basicConfig(level=logging.INFO if verbose else logging.WARNING, stream=sys.stderr,
                        format="%(levelname)s %(name)s: %(message)s")


def _make(command: str, doc: str):
    @_options
    def cmd(problem, out, fmt, k_cap):
        _emit(command, problem, out, fmt, k_cap)

    cmd.__doc__ = doc
    return main.command(name=command)(cmd)


_make("dualize", "Run the f-process on a framed toric variety.")
_make("ci-dualize", "Run the partitioned f-process for a complete intersection.")
_make("lg", "Build the LG superpotential of a weak framing (or the P^n, degree d <= n shortcut).")
_make("subfamily", "Dualise the sub-family with a given Newton polytope.")
_make("enumerate", "Enumerate framings of a degree class and test each for calibration.")


if __name__ == "__main__":  # pragma: no cover
    main()
