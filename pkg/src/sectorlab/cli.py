"""sector-lab command line: builders, analyses and scenario pipelines.

Scenario configs are JSON; reports are JSON summaries (sorted keys, floats
rounded to 12 significant digits so repeated runs are byte-identical) plus
CSV spectra.  Exit codes: 0 all assertions pass, 1 an assertion failed,
2 parse or usage errors.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import os
import sys

import numpy as np

from . import __version__
from .complexes import (
    ConfigComplex,
    build_cycle,
    build_grid_with_holes,
    build_path,
    build_presentation_complex,
    build_two_particle_space,
    star_region,
)
from .cover import (
    amenability_report,
    build_cover,
    conjugacy_check,
    decompose_cover_spectrum,
    non_l2_representation,
    verify_gauge_commutes,
)
from .errors import FileFormatError, InvalidParameterError, SectorLabError
from .groups import CyclicGroup, word_to_text
from .holonomy import (
    character_rep,
    cocycle_from_rep,
    equivalence_fingerprint,
    gauge_transform,
    load_rep,
    ls_check,
    random_gauge,
    trivial_rep,
    two_dim_reflection_rep,
    verify_cocycle,
)
from .pi1 import (
    attach_backend,
    guess_backend,
    presentation_homology,
    spanning_tree,
)
from .sectors import cluster_eigenvalues, sector_compare, spectrum, twisted_laplacian

OUT_ENV = "SECTOR_LAB_OUT"
DEFAULT_SEED = 7


# -- canonical JSON ------------------------------------------------------------


def _round_float(x: float):
    if x != x or x in (float("inf"), float("-inf")):
        return str(x)
    v = float(f"{x:.12g}")
    return 0.0 if v == 0 else v


def canonical(obj):
    """Round floats and normalize containers so summaries are reproducible."""
    if isinstance(obj, dict):
        return {str(k): canonical(v) for k, v in sorted(obj.items(), key=lambda kv: str(kv[0]))}
    if isinstance(obj, (list, tuple)):
        return [canonical(v) for v in obj]
    if isinstance(obj, complex):
        return [_round_float(obj.real), _round_float(obj.imag)]
    if isinstance(obj, (np.floating, float)):
        return _round_float(float(obj))
    if isinstance(obj, (np.integer,)):
        return int(obj)
    if isinstance(obj, np.ndarray):
        return [canonical(v) for v in obj.tolist()]
    if isinstance(obj, (str, int, bool)) or obj is None:
        return obj
    return str(obj)


def dump_json(obj) -> str:
    return json.dumps(canonical(obj), sort_keys=True, indent=2) + "\n"


def spectra_csv(rows) -> str:
    """rows: iterable of (label, eigenvalues). CSV columns: label, index,
    eigenvalue, multiplicity."""
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["label", "index", "eigenvalue", "multiplicity"])
    for label, values in rows:
        for i, (val, mult) in enumerate(cluster_eigenvalues(values)):
            writer.writerow([label, i, f"{val:.12g}", mult])
    return buf.getvalue()


# -- complex and representation sources --------------------------------------------


def parse_preset(text: str) -> ConfigComplex:
    """cycle:N | path:N | grid:WxH[:holes=r,c,h,w;...] | present:gens;relators
    | pairs:<preset>"""
    kind, _, rest = text.partition(":")
    kind = kind.strip().lower()
    try:
        if kind == "cycle":
            return build_cycle(int(rest))
        if kind == "path":
            return build_path(int(rest))
        if kind == "grid":
            dims, _, holetext = rest.partition(":")
            w, h = (int(p) for p in dims.lower().split("x"))
            holes = []
            if holetext:
                if not holetext.startswith("holes="):
                    raise InvalidParameterError(f"expected holes=..., got {holetext!r}")
                for quad in holetext[len("holes="):].split(";"):
                    r, c, nr, nc = (int(p) for p in quad.split(","))
                    holes.append((r, c, nr, nc))
            return build_grid_with_holes(w, h, holes)
        if kind == "present":
            genpart, _, relpart = rest.partition(";")
            gens = [g.strip() for g in genpart.split(",") if g.strip()]
            rels = [r.strip() for r in relpart.split(",") if r.strip()]
            return build_presentation_complex(gens, rels)
        if kind == "pairs":
            return build_two_particle_space(parse_preset(rest))
    except ValueError as exc:
        raise InvalidParameterError(f"bad preset {text!r}: {exc}") from exc
    raise InvalidParameterError(f"unknown complex preset {text!r}")


def load_complex(source: str) -> ConfigComplex:
    """A preset string, or a path to a complex description file."""
    if any(source.startswith(k + ":") for k in ("cycle", "path", "grid", "present", "pairs")):
        return parse_preset(source)
    if not os.path.exists(source):
        raise FileFormatError(f"no such complex file or preset: {source}")
    with open(source) as fh:
        return ConfigComplex.from_text(fh.read(), name=os.path.basename(source))


def resolve_backend(pres, spec):
    """Optional backend override, e.g. {'type': 'cyclic', 'n': 4}."""
    if not spec:
        return guess_backend(pres)
    kind = spec.get("type")
    if kind == "cyclic":
        if len(pres.chords) != 1:
            raise InvalidParameterError("cyclic override needs exactly one chord")
        return attach_backend(pres, CyclicGroup(int(spec["n"]), pres.chords[0]))
    raise InvalidParameterError(f"unsupported backend override {spec!r}")


def resolve_rep(spec, pres, rng):
    """Representation from a spec dict or a shorthand string.

    Shorthands: trivial[:d], char:g=theta[,g2=theta2...], s3-2dim, file:path.
    """
    backend = pres.backend
    if isinstance(spec, str):
        kind, _, rest = spec.partition(":")
        if kind == "trivial":
            return trivial_rep(backend, int(rest) if rest else 1)
        if kind == "char":
            phases = {}
            for item in rest.split(","):
                g, _, val = item.partition("=")
                phases[g.strip()] = float(val)
            return character_rep(backend, phases)
        if kind == "s3-2dim":
            return two_dim_reflection_rep(backend)
        if kind == "file":
            return load_rep(rest, backend)
        raise InvalidParameterError(f"unknown rep shorthand {spec!r}")
    kind = spec.get("type")
    label = spec.get("label", "")
    if kind == "trivial":
        return trivial_rep(backend, int(spec.get("dim", 1)), label=label or "trivial")
    if kind == "character":
        return character_rep(backend, dict(spec["phases"]), label=label)
    if kind == "s3-2dim":
        return two_dim_reflection_rep(backend, label=label or "2dim")
    if kind == "random-gauge":
        # a gauge transform of the trivial sector: flat and sector-equivalent
        dim = int(spec.get("dim", 1))
        rep = trivial_rep(backend, dim, label=label or f"gauge-d{dim}")
        return rep
    if kind == "file":
        return load_rep(spec["path"], backend)
    raise InvalidParameterError(f"unknown rep spec {spec!r}")


# -- scenario steps ----------------------------------------------------------------


class Assertions:
    def __init__(self):
        self.items = []

    def record(self, name: str, ok: bool, oracle: str, detail=None):
        self.items.append({"name": name, "pass": bool(ok), "oracle": oracle,
                           "detail": detail if detail is not None else {}})

    @property
    def all_pass(self) -> bool:
        return all(item["pass"] for item in self.items)


def _step_pi1(scn, ctx, assertions):
    pres = ctx["pres"]
    info = pres.describe()
    info["relators"] = [word_to_text(r) for r in pres.relators]
    info["homology"] = presentation_homology(pres)
    ctx["summary"]["pi1"] = info
    expected = scn.get("expect", {})
    if "betti" in expected:
        assertions.record("pi1.betti", pres.betti == expected["betti"],
                          "chord count |E|-|V|+1", {"betti": pres.betti})
    if "h1_rank" in expected:
        hom = info["homology"]
        assertions.record("pi1.h1_rank",
                          hom["free_rank"] == expected["h1_rank"] and not hom["torsion"],
                          "integer Smith normal form of the relator matrix", hom)
    if "backend_type" in expected:
        assertions.record("pi1.backend", pres.backend.describe()["type"] == expected["backend_type"],
                          "presentation simplification", pres.backend.describe())


def _step_holonomy_checks(scn, ctx, assertions):
    tol = scn.get("tolerances", {}).get("cocycle", 1e-12)
    trials = int(scn.get("cocycle_trials", 500))
    results = []
    for label, conn in ctx["connections"]:
        report = verify_cocycle(conn, trials=trials, seed=ctx["seed"], tol=tol)
        assertions.record(f"cocycle.{label}", report.ok, "matrix associativity",
                          report.to_dict())
        results.append({"label": label, **report.to_dict()})
    ctx["summary"]["cocycle"] = results


def _step_spectrum(scn, ctx, assertions):
    cx, pres = ctx["complex"], ctx["pres"]
    tol = scn.get("tolerances", {}).get("spectrum", 1e-10)
    # fingerprint word count grows like (2k-1)^L in the chord count k
    default_length = 4 if len(pres.chords) <= 3 else 1
    word_length = int(scn.get("word_length", default_length))
    report = sector_compare(cx, pres, [rep for _, rep in ctx["reps"]],
                            word_length=word_length, tol=tol)
    ctx["summary"]["sectors"] = report.to_dict()
    ctx["csv"]["spectra"] = spectra_csv(
        (s.label, np.repeat([v for v in s.eigenvalues],
                            [m for m in s.multiplicities]))
        for s in report.sectors)
    if report.simply_connected:
        assertions.record("spectrum.uniqueness", report.ok,
                          "untwisted spectrum (uniqueness on simply connected)",
                          {"deviation": report.uniqueness_deviation})
    closed_form = scn.get("closed_form")
    if closed_form == "cycle-characters":
        n = cx.n_vertices
        worst = 0.0
        for (label, rep), sector in zip(ctx["reps"], report.sectors):
            theta = ctx["rep_phases"][label]
            expected = np.sort([2 - 2 * np.cos(2 * np.pi * (k + theta) / n) for k in range(n)])
            got = np.repeat([v for v in sector.eigenvalues], [m for m in sector.multiplicities])
            worst = max(worst, float(np.max(np.abs(got - expected))))
        assertions.record("spectrum.closed_form", worst <= tol,
                          "closed-form 2-2cos(2pi(k+theta)/N)", {"deviation": worst})
    if scn.get("expect_distinct"):
        ok = all(report.distinct[i][j]
                 for i in range(len(report.sectors))
                 for j in range(len(report.sectors)) if i != j)
        assertions.record("spectrum.sectors_distinct", ok, "fingerprint separation",
                          {"distinct": [list(r) for r in report.distinct]})


def _step_cover_decompose(scn, ctx, assertions):
    cx, pres = ctx["complex"], ctx["pres"]
    tol = scn.get("tolerances", {}).get("decompose", 1e-8)
    cover = build_cover(cx, pres)
    ctx["summary"]["cover"] = cover.describe()
    comm = verify_gauge_commutes(cover)
    assertions.record("cover.gauge_commutes", comm.ok, "permutation-level identity",
                      comm.to_dict())
    reps = [rep for _, rep in ctx["reps"]]
    try:
        report = decompose_cover_spectrum(cover, reps, tol=tol)
        ctx["summary"]["decomposition"] = report.to_dict()
        assertions.record("cover.decomposition", report.ok,
                          "dense diagonalization of both sides", {
                              "multiset_deviation": report.multiset_deviation})
    except SectorLabError as exc:
        assertions.record("cover.decomposition", False,
                          "dense diagonalization of both sides", {"error": str(exc)})
    conj = conjugacy_check(pres.backend)
    ctx["summary"]["conjugacy"] = conj.to_dict()
    assertions.record("cover.conjugacy", conj.ok,
                      "left/right matrix elements on central cyclic vectors",
                      {"max_deviation": conj.max_deviation})


def _step_amenability(scn, ctx, assertions):
    pres = ctx["pres"]
    radii = scn.get("kesten_radii")
    report = amenability_report(pres.backend, radii=tuple(radii) if radii else None,
                                seed=ctx["seed"])
    ctx["summary"]["amenability"] = report.to_dict()
    assertions.record("amenability.monotone", report.monotone,
                      "Rayleigh-quotient domain monotonicity",
                      {"estimates": [list(e) for e in report.estimates]})
    expected = scn.get("expect", {}).get("verdict")
    if expected:
        assertions.record("amenability.verdict", report.verdict == expected,
                          "group classification", {"verdict": report.verdict})
    rel = scn.get("expect", {}).get("kesten_within")
    if rel and report.reference:
        final = report.estimates[-1][1]
        ok = abs(final - report.reference) <= rel * report.reference
        assertions.record("amenability.kesten_reference", ok,
                          "known spectral radius of the regular tree",
                          {"estimate": final, "reference": report.reference})


def _step_nonl2(scn, ctx, assertions):
    cx, pres = ctx["complex"], ctx["pres"]
    tol = scn.get("tolerances", {}).get("nonl2", 1e-10)
    results = []
    for label, rep in ctx["reps"]:
        form = scn.get("nonl2_form", "vector")
        support = scn.get("nonl2_support", 2)
        if support == "full":
            support = pres.backend.elements()
        report = non_l2_representation(cx, pres, rep, support=support, form=form)
        results.append({"label": label, **report.to_dict()})
        expected_dim = scn.get("expect", {}).get("quotient_dim")
        ok = report.psd_min >= -1e-10 and report.left_isometry_defect <= tol
        if expected_dim is not None:
            ok = ok and report.quotient_dim == expected_dim
        if report.right_unitarity_defect is not None:
            ok = ok and report.right_unitarity_defect <= tol
        assertions.record(f"nonl2.{label}", ok, "Gram rank / isometry defects",
                          results[-1])
    ctx["summary"]["nonl2"] = results


def _step_identical_particles(scn, ctx, assertions):
    base = ctx["complex"]
    pairs = build_two_particle_space(base)
    pres = spanning_tree(pairs)
    hom = presentation_homology(pres)
    ctx["summary"]["identical_particles"] = {
        "configurations": pairs.n_vertices, "moves": pairs.n_edges,
        "exchange_faces": pairs.n_faces, "betti": pres.betti, "homology": hom,
        "no_moves": pairs.n_edges == 0,
    }
    expected = scn.get("expect", {})
    if "pair_free_rank" in expected:
        assertions.record("pairs.homology_rank",
                          hom["free_rank"] == expected["pair_free_rank"]
                          and not hom["torsion"],
                          "spanning tree + integer Smith normal form", hom)
    ctx["pairs_complex"] = pairs


STEPS = {
    "pi1": _step_pi1,
    "holonomy-checks": _step_holonomy_checks,
    "spectrum": _step_spectrum,
    "cover-decompose": _step_cover_decompose,
    "amenability": _step_amenability,
    "nonl2": _step_nonl2,
    "identical-particles": _step_identical_particles,
}


def run_scenario(scn: dict, out_dir: str | None = None) -> tuple:
    """Execute a scenario; returns (exit code, summary dict, files written)."""
    name = scn.get("name", "scenario")
    seed = int(scn.get("seed", DEFAULT_SEED))
    steps = scn.get("steps", [])
    unknown = [s for s in steps if s not in STEPS]
    if unknown:
        raise InvalidParameterError(f"unknown steps {unknown}; known: {sorted(STEPS)}")
    if "complex" not in scn:
        raise FileFormatError("scenario is missing the 'complex' field")
    cx = load_complex(scn["complex"])
    pres = spanning_tree(cx, scn.get("base"))
    pres = resolve_backend(pres, scn.get("backend"))
    rng = np.random.default_rng(seed)

    reps = []
    rep_phases = {}
    connections = []
    for i, spec in enumerate(scn.get("reps", [])):
        rep = resolve_rep(spec, pres, rng)
        label = rep.label or f"rep{i}"
        if isinstance(spec, dict) and spec.get("type") == "character":
            rep_phases[label] = float(next(iter(spec["phases"].values())))
        reps.append((label, rep))
        conn = cocycle_from_rep(cx, pres, rep)
        if isinstance(spec, dict) and spec.get("type") == "random-gauge":
            conn = gauge_transform(conn, random_gauge(cx, rep.dim, rng))
        connections.append((label, conn))

    assertions = Assertions()
    ctx = {"complex": cx, "pres": pres, "reps": reps, "connections": connections,
           "rep_phases": rep_phases, "seed": seed,
           "summary": {"scenario": name, "complex": {
               "name": cx.name, "vertices": cx.n_vertices,
               "edges": cx.n_edges, "faces": cx.n_faces}},
           "csv": {}}
    for step in steps:
        STEPS[step](scn, ctx, assertions)

    summary = ctx["summary"]
    summary["assertions"] = assertions.items
    summary["pass"] = assertions.all_pass
    files = []
    if out_dir:
        os.makedirs(out_dir, exist_ok=True)
        path = os.path.join(out_dir, f"{name}.json")
        _write_atomic(path, dump_json(summary))
        files.append(path)
        for tag, text in ctx["csv"].items():
            path = os.path.join(out_dir, f"{name}-{tag}.csv")
            _write_atomic(path, text)
            files.append(path)
    return (0 if assertions.all_pass else 1), summary, files


def _write_atomic(path: str, text: str):
    tmp = path + ".tmp"
    with open(tmp, "w") as fh:
        fh.write(text)
    os.replace(tmp, path)


# -- presets --------------------------------------------------------------------


PRESETS = {
    "ab-circle": {
        "description": "Flux sweep on the 8-cycle: 16 character sectors against the closed-form spectrum",
        "scenario": {
            "name": "ab-circle",
            "complex": "cycle:8",
            "reps": [{"type": "character", "phases": {"e4": k / 16}, "label": f"theta-{k}-16"}
                     for k in range(16)],
            "steps": ["pi1", "holonomy-checks", "spectrum"],
            "closed_form": "cycle-characters",
            "expect_distinct": True,
            "expect": {"betti": 1},
        },
    },
    "identical-particles-s3": {
        "description": "S3 statistics: boson, fermion and parastatistics sectors with full-cover decomposition",
        "scenario": {
            "name": "identical-particles-s3",
            "complex": "present:a,b;a^2,b^2,(ab)^3",
            "reps": [{"type": "trivial", "label": "boson"},
                     {"type": "character", "phases": {"a": 0.5, "b": 0.5}, "label": "fermion"},
                     {"type": "s3-2dim", "label": "para-2dim"}],
            "steps": ["pi1", "holonomy-checks", "spectrum", "cover-decompose"],
            "expect_distinct": True,
            "expect": {"backend_type": "finite"},
        },
    },
    "z4-quotient": {
        "description": "8-cycle with cyclic-4 quotient backend: cover spectrum = union of four flux sectors",
        "scenario": {
            "name": "z4-quotient",
            "complex": "cycle:8",
            "backend": {"type": "cyclic", "n": 4},
            "reps": [{"type": "character", "phases": {"e4": k / 4}, "label": f"theta-{k}-4"}
                     for k in range(4)],
            "steps": ["pi1", "spectrum", "cover-decompose"],
            "expect_distinct": True,
        },
    },
    "von-neumann-uniqueness": {
        "description": "5x5 grid: every flat sector is spectrally the untwisted one (uniqueness analogue)",
        "scenario": {
            "name": "von-neumann-uniqueness",
            "complex": "grid:5x5",
            "reps": [{"type": "random-gauge", "dim": 1, "label": "gauge-a"},
                     {"type": "random-gauge", "dim": 2, "label": "gauge-b"},
                     {"type": "trivial", "dim": 2, "label": "trivial-d2"}],
            "steps": ["pi1", "spectrum"],
            "expect": {"betti": 16},
        },
    },
    "free-group-holes": {
        "description": "Grid with two holes: free rank-2 fundamental group, non-amenable with random-walk evidence",
        "scenario": {
            "name": "free-group-holes",
            "complex": "grid:9x7:holes=2,2,1,1;2,5,1,1",
            "steps": ["pi1", "amenability"],
            "kesten_radii": [6, 8, 10],
            "expect": {"h1_rank": 2, "backend_type": "free", "verdict": "non-amenable",
                       "kesten_within": 0.05},
        },
    },
    "two-particle-ring": {
        "description": "Two identical particles on the 6-cycle: connected configuration space with H1 = Z",
        "scenario": {
            "name": "two-particle-ring",
            "complex": "cycle:6",
            "steps": ["identical-particles"],
            "expect": {"pair_free_rank": 1},
        },
    },
    "nonl2-f2": {
        "description": "Trivial sector of the free rank-2 group recovered outside l2 (rank-1 Gram on 17 words)",
        "scenario": {
            "name": "nonl2-f2",
            "complex": "grid:9x7:holes=2,2,1,1;2,5,1,1",
            "reps": [{"type": "trivial", "label": "schroedinger"}],
            "steps": ["pi1", "nonl2"],
            "nonl2_support": 2,
            "expect": {"quotient_dim": 1},
        },
    },
    "nonl2-s3": {
        "description": "S3 parastatistics sector with the trace form: 4-dimensional quotient, unitary gauge action",
        "scenario": {
            "name": "nonl2-s3",
            "complex": "present:a,b;a^2,b^2,(ab)^3",
            "reps": [{"type": "s3-2dim", "label": "para-2dim"}],
            "steps": ["nonl2"],
            "nonl2_form": "trace",
            "nonl2_support": "full",
            "expect": {"quotient_dim": 4},
        },
    },
}


def list_presets() -> list:
    return [{"name": name, "description": data["description"]}
            for name, data in sorted(PRESETS.items())]


# -- subcommands -------------------------------------------------------------------


def _out_dir(args) -> str | None:
    return args.out or os.environ.get(OUT_ENV)


def _emit(args, text: str, filename: str | None = None) -> None:
    out = _out_dir(args)
    if out and filename:
        os.makedirs(out, exist_ok=True)
        _write_atomic(os.path.join(out, filename), text)
    else:
        sys.stdout.write(text)


def cmd_build(args) -> int:
    cx = parse_preset(args.preset)
    _emit(args, cx.to_text(), "complex.txt")
    return 0


def cmd_pi1(args) -> int:
    cx = load_complex(args.complex)
    pres = spanning_tree(cx, args.base)
    info = pres.describe()
    info["relators"] = [word_to_text(r) for r in pres.relators]
    info["homology"] = presentation_homology(pres)
    try:
        attached = guess_backend(pres)
        info["backend_guess"] = attached.backend.describe()
    except SectorLabError as exc:
        info["backend_guess"] = None
        info["backend_error"] = str(exc)
    _emit(args, dump_json(info), "pi1.json")
    return 0


def _prepare_rep(args, cx):
    pres = spanning_tree(cx, args.base)
    pres = guess_backend(pres)
    rep = resolve_rep(args.rep, pres, np.random.default_rng(args.seed))
    return pres, rep


def cmd_holonomy(args) -> int:
    cx = load_complex(args.complex)
    pres, rep = _prepare_rep(args, cx)
    conn = cocycle_from_rep(cx, pres, rep)
    checks = [c.strip() for c in args.check.split(",") if c.strip()]
    report = {"complex": cx.name, "rep": rep.label, "dim": rep.dim}
    ok = True
    if "cocycle" in checks:
        r = verify_cocycle(conn, seed=args.seed, tol=args.tol if args.tol else 1e-12)
        report["cocycle"] = r.to_dict()
        ok &= r.ok
    if "ls" in checks:
        center = args.base or cx.vertices[0]
        region = star_region(cx, center, 1)
        if region.small:
            r = ls_check(conn, region)
            report["ls"] = r.to_dict()
            ok &= r.ok
        else:
            report["ls"] = {"skipped": "radius-1 star is not small"}
    if "fingerprint" in checks:
        fp = equivalence_fingerprint(conn, pres, word_length=args.word_length)
        report["fingerprint"] = fp.to_dict()
    report["ok"] = bool(ok)
    _emit(args, dump_json(report), "holonomy.json")
    return 0 if ok else 1


def cmd_spectrum(args) -> int:
    cx = load_complex(args.complex)
    pres, rep = _prepare_rep(args, cx)
    conn = cocycle_from_rep(cx, pres, rep)
    vals = spectrum(twisted_laplacian(cx, conn), k=args.k, seed=args.seed)
    summary = {"complex": cx.name, "rep": rep.label, "dim": rep.dim,
               "eigenvalues": [v for v, _ in cluster_eigenvalues(vals)],
               "multiplicities": [m for _, m in cluster_eigenvalues(vals)]}
    if args.format == "csv":
        _emit(args, spectra_csv([(rep.label or "rep", vals)]), "spectrum.csv")
    else:
        _emit(args, dump_json(summary), "spectrum.json")
    return 0


def cmd_cover(args) -> int:
    cx = load_complex(args.complex)
    pres = guess_backend(spanning_tree(cx, args.base))
    radius = None if args.full else args.radius
    if radius is None and not args.full:
        radius = 3
    cover = build_cover(cx, pres, radius=radius)
    comm = verify_gauge_commutes(cover, seed=args.seed)
    report = {"cover": cover.describe(), "commutation": comm.to_dict()}
    _emit(args, dump_json(report), "cover.json")
    return 0 if comm.ok else 1


def cmd_decompose(args) -> int:
    cx = load_complex(args.complex)
    pres = guess_backend(spanning_tree(cx, args.base))
    backend = pres.backend
    if backend.order is None:
        raise InvalidParameterError("decompose needs a finite fundamental group")
    cover = build_cover(cx, pres)
    reps = _builtin_irreps(pres)
    report = decompose_cover_spectrum(cover, reps)
    _emit(args, dump_json(report.to_dict()), "decompose.json")
    return 0 if report.ok else 1


def _builtin_irreps(pres):
    """Irrep catalog for cyclic backends and the S3 table; other groups need
    explicit representation files."""
    backend = pres.backend
    if backend.describe()["type"] == "cyclic":
        g = backend.generators[0]
        return [character_rep(backend, {g: k / backend.n}, label=f"theta-{k}-{backend.n}")
                for k in range(backend.n)]
    if backend.order == 6 and not backend.is_abelian():
        return [trivial_rep(backend, 1, label="trivial"),
                character_rep(backend, {g: 0.5 for g in backend.generators}, label="sign"),
                two_dim_reflection_rep(backend, label="2dim")]
    raise InvalidParameterError(
        "no built-in irreps for this group; supply representation files")


def cmd_amenability(args) -> int:
    cx = load_complex(args.complex)
    pres = guess_backend(spanning_tree(cx, args.base))
    radii = tuple(int(r) for r in args.radii.split(",")) if args.radii else None
    report = amenability_report(pres.backend, radii=radii, seed=args.seed)
    _emit(args, dump_json(report.to_dict()), "amenability.json")
    return 0


def cmd_nonl2(args) -> int:
    cx = load_complex(args.complex)
    pres, rep = _prepare_rep(args, cx)
    support = pres.backend.elements() if args.support == "full" else int(args.support)
    report = non_l2_representation(cx, pres, rep, support=support, form=args.form)
    _emit(args, dump_json(report.to_dict()), "nonl2.json")
    return 0


def cmd_run(args) -> int:
    if args.preset:
        if args.preset not in PRESETS:
            raise InvalidParameterError(
                f"unknown preset {args.preset!r}; see `sector-lab presets`")
        scn = json.loads(json.dumps(PRESETS[args.preset]["scenario"]))
    else:
        with open(args.scenario) as fh:
            try:
                scn = json.load(fh)
            except json.JSONDecodeError as exc:
                raise FileFormatError(f"bad scenario file: {exc}") from exc
    if args.seed is not None:
        scn["seed"] = args.seed
    if args.tol is not None:
        scn.setdefault("tolerances", {})
        for key in ("cocycle", "spectrum", "decompose", "nonl2"):
            scn["tolerances"][key] = args.tol
    out = _out_dir(args)
    code, summary, files = run_scenario(scn, out)
    if not out:
        sys.stdout.write(dump_json(summary))
    else:
        for path in files:
            print(path)
    return code


def cmd_presets(args) -> int:
    _emit(args, dump_json(list_presets()), "presets.json")
    return 0


# -- entry point --------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="sector-lab",
        description="Quantum sectors on combinatorial configuration spaces")
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, rep=False):
        p.add_argument("--out", help=f"output directory (default ${OUT_ENV} or stdout)")
        p.add_argument("--seed", type=int, default=DEFAULT_SEED)
        p.add_argument("--tol", type=float, default=None)
        p.add_argument("--format", choices=("json", "csv"), default="json")
        if rep:
            p.add_argument("--rep", required=True,
                           help="trivial[:d] | char:g=theta,... | s3-2dim | file:path")
            p.add_argument("--base", default=None)

    p = sub.add_parser("build", help="emit a canonical complex file from a preset")
    p.add_argument("--preset", required=True)
    common(p)
    p.set_defaults(fn=cmd_build)

    p = sub.add_parser("pi1", help="spanning-tree presentation and backend guess")
    p.add_argument("complex")
    p.add_argument("--base", default=None)
    common(p)
    p.set_defaults(fn=cmd_pi1)

    p = sub.add_parser("holonomy", help="cocycle, local triviality and fingerprint checks")
    p.add_argument("complex")
    p.add_argument("--check", default="cocycle,ls,fingerprint")
    p.add_argument("--word-length", type=int, default=4, dest="word_length")
    common(p, rep=True)
    p.set_defaults(fn=cmd_holonomy)

    p = sub.add_parser("spectrum", help="twisted Laplacian spectrum of a sector")
    p.add_argument("complex")
    p.add_argument("--k", type=int, default=None)
    common(p, rep=True)
    p.set_defaults(fn=cmd_spectrum)

    p = sub.add_parser("cover", help="build a (truncated) cover and check gauge commutation")
    p.add_argument("complex")
    p.add_argument("--radius", type=int, default=None)
    p.add_argument("--full", action="store_true")
    p.add_argument("--base", default=None)
    common(p)
    p.set_defaults(fn=cmd_cover)

    p = sub.add_parser("decompose", help="cover spectrum vs sector decomposition")
    p.add_argument("complex")
    p.add_argument("--base", default=None)
    common(p)
    p.set_defaults(fn=cmd_decompose)

    p = sub.add_parser("amenability", help="group class verdict with random-walk evidence")
    p.add_argument("complex")
    p.add_argument("--radii", default=None, help="comma-separated ball radii")
    p.add_argument("--base", default=None)
    common(p)
    p.set_defaults(fn=cmd_amenability)

    p = sub.add_parser("nonl2", help="non-l2 sector model on a group support")
    p.add_argument("complex")
    p.add_argument("--support", default="2", help="ball radius or 'full'")
    p.add_argument("--form", choices=("vector", "trace"), default="vector")
    common(p, rep=True)
    p.set_defaults(fn=cmd_nonl2)

    p = sub.add_parser("run", help="run a scenario file or preset")
    p.add_argument("scenario", nargs="?", default=None)
    p.add_argument("--preset", default=None)
    common(p)
    p.set_defaults(fn=cmd_run)

    p = sub.add_parser("presets", help="list built-in scenario presets")
    common(p)
    p.set_defaults(fn=cmd_presets)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.command == "run" and not args.preset and not args.scenario:
        parser.error("run needs a scenario file or --preset")
    try:
        return args.fn(args)
    except (FileFormatError, InvalidParameterError) as exc:
        print(f"sector-lab: {exc}", file=sys.stderr)
        return 2
    except SectorLabError as exc:
        print(f"sector-lab: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
