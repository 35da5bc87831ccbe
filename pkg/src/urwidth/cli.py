"""Reproducible experiment driver.

Subcommands: space, problem, width, machine, sample, nerve, vc, run,
verify.  ``run`` executes a whole experiment described by a structured
key/value config file and writes CSV tables, JSON certificates, SVG
plots and a run manifest; ``verify`` re-checks a stored certificate
without trusting its intermediate values.

Exit codes: 0 pass, 1 check failed, 2 config error.  The default output
directory is taken from the URWIDTH_OUT environment variable when set.
"""

from __future__ import annotations

import argparse
import json
import math
import os
import sys
import time
from pathlib import Path

import numpy as np

from . import __version__
from .coverings import parameter_window, width_bracket
from .machine import machine_new, run_stream
from .problems import (
    bouquet_problem,
    interval_union_problem,
    permuted_problem,
    scaled_problem,
    union_problem,
    validate_margin,
    wedge_problem,
)
from .sampling import (
    coupon_stats,
    permutation_learner_experiment,
    regress,
    sample_safe,
    sampling_distribution,
    threshold_sweep,
)
from .serialize import (
    bracket_doc,
    build_problem,
    config_hash,
    covering_text,
    decode_point,
    encode_point,
    family_doc,
    format_config,
    parse_config_text,
    problem_text,
    safe_region_csv_rows,
    samples_csv_rows,
    verify_bracket,
    write_csv,
)
from .spaces import bouquet_space, graph_space, interval_space, wedge_sphere_space
from .svgplot import line_plot
from .topology import (
    betti,
    betti_bound_check,
    cyclic_arc_cover,
    graph_beta1,
    max_adjacency,
    nerve,
    systole,
)
from .vc import separation_report

EXIT_OK = 0
EXIT_CHECK_FAILED = 1
EXIT_CONFIG = 2


def _out_dir(value: str | None) -> Path:
    out = Path(value or os.environ.get("URWIDTH_OUT") or ".")
    out.mkdir(parents=True, exist_ok=True)
    return out


def _dump_json(path: Path, doc) -> None:
    with open(path, "w") as fh:
        json.dump(doc, fh, indent=2, sort_keys=True)
        fh.write("\n")


def _problem_from_args(args) -> object:
    fam = args.family
    if fam == "bouquet":
        p = bouquet_problem(args.w, args.length, args.gamma, args.h)
    elif fam == "scaled":
        p = scaled_problem(args.w, args.m, args.length, args.gamma, args.h)
    elif fam == "wedge":
        p = wedge_problem(
            args.w, args.k, args.radius, args.gamma, n=args.n, seed=args.seed
        )
    elif fam == "interval":
        ivs = json.loads(args.intervals)
        p = interval_union_problem([tuple(ab) for ab in ivs], args.gamma, args.n_pts)
    else:
        raise ValueError(f"unknown family {fam!r}")
    if args.sigma:
        sigma = [int(x) for x in args.sigma.split(",")]
        p = permuted_problem(p, sigma)
    return p


def _add_problem_flags(sub) -> None:
    sub.add_argument("--family", required=True,
                     choices=["bouquet", "scaled", "wedge", "interval"])
    sub.add_argument("--w", type=int, default=3)
    sub.add_argument("--m", type=int, default=1)
    sub.add_argument("-L", "--length", type=float, default=10.0)
    sub.add_argument("--gamma", type=float, default=1.0)
    sub.add_argument("--h", type=float, default=0.25)
    sub.add_argument("--k", type=int, default=2)
    sub.add_argument("-R", "--radius", type=float, default=2.0)
    sub.add_argument("--n", type=int, default=64)
    sub.add_argument("--seed", type=int, default=0)
    sub.add_argument("--intervals", default='[[0.2, 0.4]]',
                     help="JSON list of [lo, hi] pairs (interval family)")
    sub.add_argument("--n-pts", type=int, default=101)
    sub.add_argument("--sigma", default="", help="comma-separated label permutation")
    sub.add_argument("--out", default=None)


def cmd_space(args) -> int:
    out = _out_dir(args.out)
    if args.kind == "bouquet":
        sp = bouquet_space(args.w, args.length, args.h)
    elif args.kind == "wedge":
        sp = wedge_sphere_space(args.w, args.k, args.radius, n=args.n, seed=args.seed)
    elif args.kind == "interval":
        sp = interval_space(args.n)
    elif args.kind == "graph":
        sp = graph_space([tuple(e) for e in json.loads(args.edges)])
    else:
        raise ValueError(f"unknown space kind {args.kind!r}")
    desc = sp.describe()
    desc["resolution"] = sp.resolution
    (out / "space.txt").write_text(format_config(desc))
    write_csv(out / "samples.csv", ["id", "point"], samples_csv_rows(sp))
    print(f"wrote {out / 'space.txt'} and {out / 'samples.csv'} "
          f"({len(sp.sample_set)} sample points)")
    return EXIT_OK


def cmd_problem(args) -> int:
    out = _out_dir(args.out)
    p = _problem_from_args(args)
    rep = validate_margin(p)
    doc = {
        "problem": family_doc(p),
        "k": p.k,
        "min_pair_distance": rep.min_pair if p.k > 1 else None,
        "strict_pass": rep.strict_pass,
        "safe_disjoint": rep.safe_disjoint,
        "worst_pair": list(rep.worst_pair) if rep.worst_pair else None,
        "notes": rep.notes,
    }
    (out / "problem.txt").write_text(problem_text(p))
    _dump_json(out / "validation.json", doc)
    write_csv(out / "safe_region.csv", ["point", "label"], safe_region_csv_rows(p))
    print(f"margin validation: {'pass' if rep.strict_pass else 'FAIL'} "
          f"(min pairwise distance {rep.min_pair}, gamma {p.gamma})")
    return EXIT_OK if rep.strict_pass else EXIT_CHECK_FAILED


def cmd_width(args) -> int:
    out = _out_dir(args.out)
    p = _problem_from_args(args)
    br = width_bracket(p, args.d0)
    _dump_json(out / "width_certificate.json", bracket_doc(p, br))
    (out / "covering.txt").write_text(covering_text(br.covering))
    sep = br.separation
    print(f"width bracket: [{br.lb}, {br.ub}]" + (" exact" if br.exact else ""))
    print(f"  lb {br.lb} via {sep.method}: delta* = {sep.delta_star:.6g} vs D0 = {br.d0}")
    print(f"  ub {br.ub} via {br.ub_method}: {br.covering.size} triples, "
          f"verification {'pass' if br.report.passed else 'FAIL'}")
    return EXIT_OK if br.report.passed else EXIT_CHECK_FAILED


def _read_stream(path: Path, space):
    import csv as _csv

    with open(path, newline="") as fh:
        rows = list(_csv.DictReader(fh))
    rows.sort(key=lambda r: int(r["step"]))
    out = []
    for r in rows:
        point = decode_point(space, json.loads(r["point"]))
        label = json.loads(r["label"])
        out.append((point, label))
    return out


def cmd_machine(args) -> int:
    out = _out_dir(args.out)
    p = _problem_from_args(args)
    state = machine_new(p.space, args.tau, args.d0, args.r_construct,
                        labels=tuple(p.labels))
    if args.stream:
        stream = _read_stream(Path(args.stream), p.space)
    else:
        rng = np.random.default_rng(args.seed)
        dist = sampling_distribution(p)
        stream = [sample_safe(dist, rng) for _ in range(args.steps)]
    trace = run_stream(state, stream)
    doc = {
        "problem": family_doc(p),
        "tau": args.tau,
        "d0": args.d0,
        "r_construct": args.r_construct,
        "seed": args.seed,
        "size_curve": trace.size_curve,
        "errors": trace.errors,
        "final_library_size": state.library_size,
        "events": [
            {
                "index": r.index,
                "kind": r.kind,
                "point": encode_point(r.point),
                "label": r.label,
                "residue": None if math.isinf(r.residue) else r.residue,
                "entry": r.entry,
                "predicted": r.predicted,
                "correct": r.correct,
            }
            for r in trace.records
        ],
    }
    _dump_json(out / "trace.json", doc)
    write_csv(
        out / "trace.csv",
        ["step", "kind", "point", "label", "predicted", "correct", "library_size"],
        (
            [r.index, r.kind, json.dumps(encode_point(r.point)), r.label,
             r.predicted, r.correct, size]
            for r, size in zip(trace.records, trace.size_curve)
        ),
    )
    line_plot(
        out / "size_curve.svg",
        [("library size", list(range(1, len(trace.size_curve) + 1)),
          [float(s) for s in trace.size_curve])],
        title="metric library growth",
        xlabel="step",
        ylabel="entries",
    )
    print(f"final library size {state.library_size}, "
          f"{trace.errors} prediction errors over {len(stream)} steps")
    return EXIT_OK


def cmd_sample(args) -> int:
    out = _out_dir(args.out)
    ws = [int(x) for x in args.ws.split(",")]
    if args.experiment == "coupon":
        problems = {
            w: bouquet_problem(w, args.length, args.gamma, args.h) for w in ws
        }
        rows = coupon_stats(problems, args.trials, args.seed)
        write_csv(
            out / "coupon.csv",
            ["w", "trials", "mean", "median", "analytic_mean", "seed"],
            ([r.w, r.trials, r.mean, r.median, r.analytic_mean, r.seed] for r in rows),
        )
        slope, intercept, r2 = regress(
            [r.analytic_mean for r in rows], [r.mean for r in rows]
        )
        print(f"coupon means vs analytic law: slope {slope:.4f}, R^2 {r2:.5f}")
        return EXIT_OK
    if args.experiment == "permutation":
        rng = np.random.default_rng(args.seed)
        res = permutation_learner_experiment(ws[0], args.budget, args.trials, rng)
        _dump_json(out / "permutation.json", res.__dict__)
        print(f"w={res.w} n={res.n}: success rate {res.rate:.4f} "
              f"(95% Wilson [{res.wilson_lo:.4f}, {res.wilson_hi:.4f}])")
        return EXIT_OK
    if args.experiment == "sweep":
        ratios = [float(x) for x in args.ratios.split(",")]
        stats = threshold_sweep(ws, ratios, args.trials, args.seed)
        write_csv(
            out / "sweep.csv",
            ["w", "n", "ratio", "trials", "successes", "rate", "wilson_lo",
             "wilson_hi", "p_all_seen", "p_one_missed", "p_multi_missed", "seed"],
            ([r.w, r.n, r.ratio, r.trials, r.successes, r.rate, r.wilson_lo,
              r.wilson_hi, r.p_all_seen, r.p_one_missed, r.p_multi_missed, r.seed]
             for r in stats.rows),
        )
        series = []
        for w in ws:
            pts = [(r.ratio, r.rate) for r in stats.rows if r.w == w]
            series.append((f"w={w}", [x for x, _ in pts], [y for _, y in pts]))
        line_plot(out / "success_vs_ratio.svg", series,
                  title="learner success vs n/(w ln w)",
                  xlabel="n / (w ln w)", ylabel="success rate")
        _dump_json(out / "crossings.json",
                   {str(w): r for w, r in stats.crossings.items()})
        print(f"2/3-success crossings: {stats.crossings}")
        return EXIT_OK
    raise ValueError(f"unknown experiment {args.experiment!r}")


def cmd_nerve(args) -> int:
    out = _out_dir(args.out)
    space = bouquet_space(args.w, args.length, args.h)
    cov = cyclic_arc_cover(space, args.arcs)
    cx = nerve(cov)
    b0, b1 = betti(cx)
    delta0 = max_adjacency(cx)
    check = betti_bound_check(len(cov.triples), b1, delta0)
    lines = ["# nerve face list"]
    lines += [f"v {v}" for v in cx.vertices]
    lines += [f"e {a} {b}" for a, b in cx.edges]
    lines += [f"t {a} {b} {c}" for a, b, c in cx.triangles]
    (out / "nerve_faces.txt").write_text("\n".join(lines) + "\n")
    doc = {
        "arcs_per_loop": args.arcs,
        "w": args.w,
        "n_patches": len(cov.triples),
        "beta0": b0,
        "beta1": b1,
        "delta0": delta0,
        "bound": check.bound,
        "bound_pass": check.passed,
        "slack": check.slack,
        "systole": systole(space),
    }
    _dump_json(out / "betti.json", doc)
    print(f"nerve: beta0={b0} beta1={b1} Delta0={delta0}; "
          f"bound N >= {check.bound:.3g}: {'pass' if check.passed else 'FAIL'}")
    return EXIT_OK if check.passed else EXIT_CHECK_FAILED


def cmd_vc(args) -> int:
    out = _out_dir(args.out)
    rep = separation_report(args.w, args.n_intervals)
    _dump_json(out / "vc_separation.json", {"rows": rep.rows})
    (out / "vc_separation.txt").write_text(rep.as_text() + "\n")
    print(rep.as_text())
    return EXIT_OK


def cmd_verify(args) -> int:
    try:
        doc = json.loads(Path(args.certificate).read_text())
    except (OSError, json.JSONDecodeError) as exc:
        print(f"cannot read certificate: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    ok, messages = verify_bracket(doc)
    if ok:
        print("certificate verified: all stored values reproduced")
        return EXIT_OK
    for msg in messages:
        print(msg, file=sys.stderr)
    return EXIT_CHECK_FAILED


# -- experiment driver --------------------------------------------------------


def _require(cfg: dict, *keys):
    for key in keys:
        if key not in cfg:
            raise ValueError(f"config missing required field {key!r}")


def _run_hierarchy(cfg, out: Path) -> tuple[int, list[str]]:
    _require(cfg, "ws", "L", "gamma", "d0", "h")
    window = parameter_window("bouquet", L=cfg["L"], gamma=cfg["gamma"])
    if window.empty:
        raise ValueError(f"empty locality window: {window.note}")
    if not window.contains(cfg["d0"]):
        raise ValueError(
            f"D0 = {cfg['d0']} outside the admissible window "
            f"[{window.lo}, {window.hi})"
        )
    rows = []
    artifacts = []
    for w in cfg["ws"]:
        p = bouquet_problem(w, cfg["L"], cfg["gamma"], cfg["h"])
        br = width_bracket(p, cfg["d0"])
        name = f"width_w{w}.json"
        _dump_json(out / name, bracket_doc(p, br))
        artifacts.append(name)
        rows.append([w, br.lb, br.ub, br.exact])
    write_csv(out / "hierarchy.csv", ["w", "lb", "ub", "exact"], rows)
    artifacts.append("hierarchy.csv")
    line_plot(
        out / "hierarchy.svg",
        [("lb", [float(r[0]) for r in rows], [float(r[1]) for r in rows]),
         ("ub", [float(r[0]) for r in rows], [float(r[2]) for r in rows])],
        title="width bracket vs loop count",
        xlabel="w", ylabel="width",
    )
    artifacts.append("hierarchy.svg")
    bad = [r for r in rows if not (r[1] == r[2] == r[0])]
    return (EXIT_OK if not bad else EXIT_CHECK_FAILED), artifacts


def _run_scaling(cfg, out: Path) -> tuple[int, list[str]]:
    _require(cfg, "w", "m", "L", "gamma", "d0", "h")
    window = parameter_window("scaled", L=cfg["L"], gamma=cfg["gamma"], m=cfg["m"])
    if window.empty:
        raise ValueError(f"empty locality window: {window.note}")
    if not window.contains(cfg["d0"]):
        raise ValueError(
            f"D0 = {cfg['d0']} outside the admissible window "
            f"[{window.lo}, {window.hi})"
        )
    p = scaled_problem(cfg["w"], cfg["m"], cfg["L"], cfg["gamma"], cfg["h"])
    br = width_bracket(p, cfg["d0"])
    _dump_json(out / "width_scaled.json", bracket_doc(p, br))
    write_csv(out / "scaling.csv", ["w", "m", "lb", "ub", "exact"],
              [[cfg["w"], cfg["m"], br.lb, br.ub, br.exact]])
    expected = cfg["w"] * cfg["m"]
    code = EXIT_OK if br.lb == br.ub == expected else EXIT_CHECK_FAILED
    return code, ["width_scaled.json", "scaling.csv"]


def _run_vc_separation(cfg, out: Path) -> tuple[int, list[str]]:
    _require(cfg, "w", "n_max")
    rep = separation_report(cfg["w"], cfg["n_max"])
    _dump_json(out / "vc_separation.json", {"rows": rep.rows})
    (out / "vc_separation.txt").write_text(rep.as_text() + "\n")
    ok = all(
        r["vc"] == 2 * int(r["instance"].split("=")[1])
        for r in rep.rows
        if r["family"] == "intervals"
    )
    return (EXIT_OK if ok else EXIT_CHECK_FAILED), [
        "vc_separation.json", "vc_separation.txt"
    ]


def _run_sample_complexity(cfg, out: Path) -> tuple[int, list[str]]:
    _require(cfg, "ws", "ratios", "trials", "seed")
    stats = threshold_sweep(cfg["ws"], cfg["ratios"], cfg["trials"], cfg["seed"])
    write_csv(
        out / "sweep.csv",
        ["w", "n", "ratio", "trials", "successes", "rate", "wilson_lo", "wilson_hi",
         "p_all_seen", "p_one_missed", "p_multi_missed", "seed"],
        ([r.w, r.n, r.ratio, r.trials, r.successes, r.rate, r.wilson_lo, r.wilson_hi,
          r.p_all_seen, r.p_one_missed, r.p_multi_missed, r.seed]
         for r in stats.rows),
    )
    series = []
    for w in cfg["ws"]:
        pts = [(r.ratio, r.rate) for r in stats.rows if r.w == w]
        series.append((f"w={w}", [x for x, _ in pts], [y for _, y in pts]))
    line_plot(out / "success_vs_ratio.svg", series,
              title="learner success vs n/(w ln w)",
              xlabel="n / (w ln w)", ylabel="success rate")
    _dump_json(out / "crossings.json", {str(w): r for w, r in stats.crossings.items()})
    coupon_trials = cfg.get("coupon_trials", cfg["trials"])
    problems = {
        w: bouquet_problem(w, cfg.get("L", 10.0), cfg.get("gamma", 1.0),
                           cfg.get("h", 0.5))
        for w in cfg["ws"]
    }
    rows = coupon_stats(problems, coupon_trials, cfg["seed"])
    write_csv(out / "coupon.csv",
              ["w", "trials", "mean", "median", "analytic_mean", "seed"],
              ([r.w, r.trials, r.mean, r.median, r.analytic_mean, r.seed]
               for r in rows))
    return EXIT_OK, ["sweep.csv", "success_vs_ratio.svg", "crossings.json", "coupon.csv"]


def _run_nerve_betti(cfg, out: Path) -> tuple[int, list[str]]:
    _require(cfg, "w", "L", "h", "arcs")
    space = bouquet_space(cfg["w"], cfg["L"], cfg["h"])
    cov = cyclic_arc_cover(space, cfg["arcs"])
    cx = nerve(cov)
    b0, b1 = betti(cx)
    delta0 = max_adjacency(cx)
    check = betti_bound_check(len(cov.triples), b1, delta0)
    _dump_json(out / "betti.json", {
        "n_patches": len(cov.triples), "beta0": b0, "beta1": b1,
        "delta0": delta0, "bound": check.bound, "bound_pass": check.passed,
        "slack": check.slack,
    })
    return (EXIT_OK if check.passed and b1 == cfg["w"] else EXIT_CHECK_FAILED), [
        "betti.json"
    ]


def _run_machine(cfg, out: Path) -> tuple[int, list[str]]:
    _require(cfg, "w", "L", "gamma", "h", "tau", "d0", "r_construct", "seed", "steps")
    p = bouquet_problem(cfg["w"], cfg["L"], cfg["gamma"], cfg["h"])
    rng = np.random.default_rng(cfg["seed"])
    dist = sampling_distribution(p)
    stream = [sample_safe(dist, rng) for _ in range(cfg["steps"])]
    state = machine_new(p.space, cfg["tau"], cfg["d0"], cfg["r_construct"],
                        labels=tuple(p.labels))
    trace = run_stream(state, stream)
    _dump_json(out / "machine.json", {
        "problem": family_doc(p),
        "final_library_size": state.library_size,
        "errors": trace.errors,
        "size_curve": trace.size_curve,
        "seed": cfg["seed"],
    })
    line_plot(out / "size_curve.svg",
              [("library size", list(range(1, len(trace.size_curve) + 1)),
                [float(s) for s in trace.size_curve])],
              title="metric library growth", xlabel="step", ylabel="entries")
    return EXIT_OK, ["machine.json", "size_curve.svg"]


def _run_additivity(cfg, out: Path) -> tuple[int, list[str]]:
    _require(cfg, "w_left", "w_right", "L", "gamma", "d0", "h", "separation")
    if cfg["separation"] <= cfg["d0"]:
        raise ValueError("separation must exceed D0 for the additivity law")
    a = bouquet_problem(cfg["w_left"], cfg["L"], cfg["gamma"], cfg["h"])
    b = bouquet_problem(cfg["w_right"], cfg["L"], cfg["gamma"], cfg["h"])
    u = union_problem(a, b, cfg["separation"])
    br_a = width_bracket(a, cfg["d0"])
    br_b = width_bracket(b, cfg["d0"])
    br_u = width_bracket(u, cfg["d0"])
    for name, p, br in (("left", a, br_a), ("right", b, br_b), ("union", u, br_u)):
        _dump_json(out / f"width_{name}.json", bracket_doc(p, br))
    ok = (br_u.lb, br_u.ub) == (br_a.lb + br_b.lb, br_a.ub + br_b.ub)
    _dump_json(out / "additivity.json", {
        "left": [br_a.lb, br_a.ub], "right": [br_b.lb, br_b.ub],
        "union": [br_u.lb, br_u.ub], "additive": ok,
    })
    return (EXIT_OK if ok else EXIT_CHECK_FAILED), [
        "width_left.json", "width_right.json", "width_union.json", "additivity.json"
    ]


_EXPERIMENTS = {
    "hierarchy": _run_hierarchy,
    "scaling": _run_scaling,
    "vc_separation": _run_vc_separation,
    "sample_complexity": _run_sample_complexity,
    "nerve_betti": _run_nerve_betti,
    "machine_run": _run_machine,
    "additivity": _run_additivity,
}


def cmd_run(args) -> int:
    try:
        text = Path(args.config).read_text()
    except OSError as exc:
        print(f"cannot read config: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    cfg = parse_config_text(text)
    if "experiment" not in cfg:
        print("config missing required field 'experiment'", file=sys.stderr)
        return EXIT_CONFIG
    kind = cfg["experiment"]
    if kind not in _EXPERIMENTS:
        print(f"unknown experiment kind {kind!r}; expected one of "
              f"{sorted(_EXPERIMENTS)}", file=sys.stderr)
        return EXIT_CONFIG
    if "seed" not in cfg and kind in ("sample_complexity", "machine_run"):
        print("config missing required field 'seed'", file=sys.stderr)
        return EXIT_CONFIG
    out = _out_dir(args.out or cfg.get("out"))
    started = time.time()
    code, artifacts = _EXPERIMENTS[kind](cfg, out)
    manifest = {
        "experiment": kind,
        "config": cfg,
        "config_sha256": config_hash(cfg),
        "version": __version__,
        "python": sys.version.split()[0],
        "artifacts": sorted(artifacts),
        "wall_clock_s": round(time.time() - started, 3),
    }
    _dump_json(out / "manifest.json", manifest)
    print(f"experiment {kind}: {'pass' if code == EXIT_OK else 'CHECK FAILED'} "
          f"({len(artifacts)} artifacts in {out})")
    return code


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="urwidth",
        description="local width laboratory: spaces, problems, certificates, "
                    "machine simulation, sampling experiments",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    sp = sub.add_parser("space", help="build a space, export description and samples")
    sp.add_argument("--kind", required=True,
                    choices=["bouquet", "wedge", "interval", "graph"])
    sp.add_argument("--w", type=int, default=3)
    sp.add_argument("-L", "--length", type=float, default=10.0)
    sp.add_argument("--h", type=float, default=0.25)
    sp.add_argument("--k", type=int, default=2)
    sp.add_argument("-R", "--radius", type=float, default=2.0)
    sp.add_argument("--n", type=int, default=64)
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--edges", default="[]", help="JSON edge list (graph kind)")
    sp.add_argument("--out", default=None)
    sp.set_defaults(func=cmd_space)

    pr = sub.add_parser("problem", help="build and validate a margin problem")
    _add_problem_flags(pr)
    pr.set_defaults(func=cmd_problem)

    wd = sub.add_parser("width", help="certify a width bracket")
    _add_problem_flags(wd)
    wd.add_argument("--d0", type=float, required=True)
    wd.set_defaults(func=cmd_width)

    mc = sub.add_parser("machine", help="run the streaming machine")
    _add_problem_flags(mc)
    mc.add_argument("--tau", type=float, default=0.0)
    mc.add_argument("--d0", type=float, required=True)
    mc.add_argument("--r-construct", type=float, required=True)
    mc.add_argument("--steps", type=int, default=60)
    mc.add_argument("--stream", default=None,
                    help="CSV stream file (step, point, label)")
    mc.set_defaults(func=cmd_machine)

    sm = sub.add_parser("sample", help="sampling experiments")
    sm.add_argument("--experiment", required=True,
                    choices=["coupon", "permutation", "sweep"])
    sm.add_argument("--ws", default="4,8,16")
    sm.add_argument("--ratios", default="0.6,0.8,1.0,1.2,1.4,1.6")
    sm.add_argument("--trials", type=int, default=1000)
    sm.add_argument("--budget", type=int, default=56)
    sm.add_argument("--seed", type=int, default=0)
    sm.add_argument("-L", "--length", type=float, default=10.0)
    sm.add_argument("--gamma", type=float, default=1.0)
    sm.add_argument("--h", type=float, default=0.5)
    sm.add_argument("--out", default=None)
    sm.set_defaults(func=cmd_sample)

    nv = sub.add_parser("nerve", help="nerve of a cyclic arc cover")
    nv.add_argument("--w", type=int, default=3)
    nv.add_argument("-L", "--length", type=float, default=12.0)
    nv.add_argument("--h", type=float, default=0.25)
    nv.add_argument("--arcs", type=int, default=6)
    nv.add_argument("--out", default=None)
    nv.set_defaults(func=cmd_nerve)

    vc = sub.add_parser("vc", help="width / VC separation report")
    vc.add_argument("--w", type=int, default=5)
    vc.add_argument("--n-intervals", type=int, default=2)
    vc.add_argument("--out", default=None)
    vc.set_defaults(func=cmd_vc)

    rn = sub.add_parser("run", help="run an experiment from a config file")
    rn.add_argument("config")
    rn.add_argument("--out", default=None)
    rn.set_defaults(func=cmd_run)

    vf = sub.add_parser("verify", help="re-check a stored certificate")
    vf.add_argument("certificate")
    vf.set_defaults(func=cmd_verify)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (ValueError, KeyError, json.JSONDecodeError) as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG


if __name__ == "__main__":
    sys.exit(main())
