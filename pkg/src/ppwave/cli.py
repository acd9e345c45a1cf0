"""Command line front end: ``ppwave <command> [options]``.

Commands
--------
verify      run a verification suite and write a JSON report
geodesic    write a CSV geodesic trace
properness  exact criterion or sampling heuristic for a generator file
lattice     build and certify an oscillator lattice from a monodromy matrix
flow        look for a central commutator (periodicity of the parallel flow)
spectrum    eigenvalues, eigenvectors and invariant planes of L_{s,t}

Exit status is 0 when every check passes, 1 when some check fails and 2 for
usage or input errors.  Reports are deterministic for a fixed configuration
and seed; timing is only included with ``--timing``.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
import time
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path

import numpy as np

from . import discrete_actions as da
from . import flat_leaves as fl
from . import lie_core as lc
from . import model_spaces as ms
from .groups import HeisElement, IsomElement
from .reports import SCHEMA_VERSION, VerificationReport, _jsonable

SUITES = ("algebra", "metric", "derivations", "appendix", "geodesics", "leaves")
COMMANDS = ("verify", "geodesic", "properness", "lattice", "flow", "spectrum")
DEFAULT_TOLERANCES = {"exact": 0.0, "float": 1e-8}


class UsageError(Exception):
    """Bad arguments or malformed input files (exit status 2)."""


@dataclass
class RunConfig:
    command: str
    model: str = "X_H"
    generators: str | None = None
    suite: str | None = None
    output: str | None = None
    seed: int = 0
    tolerances: dict = field(default_factory=lambda: dict(DEFAULT_TOLERANCES))
    options: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.command not in COMMANDS:
            raise UsageError(f"unknown command {self.command!r}")
        for k, v in self.tolerances.items():
            if not (isinstance(v, (int, float)) and v >= 0):
                raise UsageError(f"tolerance {k} must be a non-negative number")
        if self.generators is not None and not Path(self.generators).is_file():
            raise UsageError(f"generator file not found: {self.generators}")
        if self.model.startswith("generic:") and not Path(self.model.split(":", 1)[1]).is_file():
            raise UsageError(f"model file not found: {self.model}")

    def tol(self, name: str, default_kind: str = "float") -> float:
        return float(self.tolerances.get(name, self.tolerances.get(default_kind, 1e-8)))


# ---------------------------------------------------------------------------
# output helpers
# ---------------------------------------------------------------------------


def _emit(text: str, out: str | None) -> None:
    if out:
        Path(out).write_text(text)
    else:
        sys.stdout.write(text)


def _dump(obj) -> str:
    return json.dumps(_jsonable(obj), indent=2, sort_keys=True) + "\n"


def _report_json(rep: VerificationReport, cfg: RunConfig) -> str:
    d = rep.to_dict(include_time=bool(cfg.options.get("timing")))
    d["config"] = {"model": cfg.model, "seed": cfg.seed, "tolerances": cfg.tolerances}
    return _dump(d)


def _load_model(cfg: RunConfig) -> ms.ModelSpace:
    try:
        return ms.model_space(cfg.model)
    except (ValueError, KeyError, json.JSONDecodeError) as exc:
        raise UsageError(f"cannot load model {cfg.model!r}: {exc}") from exc


def _load_spec(cfg: RunConfig) -> da.HolonomySpec:
    if not cfg.generators:
        raise UsageError("--generators is required")
    try:
        spec = da.load_generators(cfg.generators)
    except (ValueError, KeyError, TypeError, json.JSONDecodeError) as exc:
        raise UsageError(f"malformed generator file: {exc}") from exc
    return spec


# ---------------------------------------------------------------------------
# verify
# ---------------------------------------------------------------------------


def _suite_algebra(cfg: RunConfig, rep: VerificationReport) -> None:
    path = cfg.options.get("algebra")
    if path:
        try:
            alg = lc.LieAlgebra.from_json(Path(path).read_text())
        except (ValueError, KeyError, json.JSONDecodeError) as exc:
            raise UsageError(f"malformed algebra file: {exc}") from exc
        rep.extend(lc.check_jacobi(alg, cfg.tol("exact", "exact") or 1e-12), prefix=f"{Path(path).name}:")
        return
    algebras = {"heis5": lc.heisenberg(2), "osc_s": lc.osc_s()}
    model = _load_model(cfg)
    algebras[f"transvection[{cfg.model}]"] = model.triple.algebra
    for name, alg in algebras.items():
        rep.extend(lc.check_jacobi(alg), prefix=f"{name}:")
    rep.extend(model.triple.axioms(), prefix="triple:")
    ok, r = lc.is_ad_invariant(lc.osc_s(), lc.osc_form())
    rep.add("osc_s:form_ad_invariant", ok, r)


def _suite_derivations(cfg: RunConfig, rep: VerificationReport) -> None:
    flavor = cfg.options.get("flavor") or (cfg.model[-1] if cfg.model in ("X_H", "X_E") else "H")
    if flavor not in ("H", "E"):
        raise UsageError("--flavor must be H or E")
    rng = np.random.default_rng(cfg.seed)
    tol = cfg.tol("spectrum")
    Lfun = lc.derivation_hyperbolic if flavor == "H" else lc.derivation_elliptic
    n = int(cfg.options.get("samples", 100))
    worst = 0.0
    for _ in range(n):
        s, t = rng.uniform(-5, 5, 2)
        got = np.array(lc.eigen_spectrum(Lfun(s, t)))
        if flavor == "H":
            expected = [a * s + b * t for a in (1, -1) for b in (1, -1)]
        else:
            expected = [a * t + b * 1j * s for a in (1, -1) for b in (1, -1)]
        exp_sorted = np.array(sorted((complex(e) for e in expected), key=lambda z: (round(z.real, 9), round(z.imag, 9))))
        worst = max(worst, float(np.max(np.abs(got - exp_sorted))))
    rep.add(f"spectrum_{flavor}", worst < tol, worst)

    omega = lc.heis_omega(2)
    worst_exact = 0.0
    heis = lc.heisenberg(2)
    for _ in range(20):
        s, t = (Fraction(int(x), int(y)) for x, y in zip(rng.integers(-9, 10, 2), rng.integers(1, 7, 2)))
        D = Lfun(s, t)
        _, r = lc.preserves_symplectic(D, omega)
        worst_exact = max(worst_exact, r)
        ok, r2 = lc.is_derivation(heis, lc.extend_by_zero(D))
        worst_exact = max(worst_exact, r2)
    rep.add(f"symplectic_and_derivation_{flavor}", worst_exact == 0, worst_exact)
    outer = lc.is_inner(heis, lc.extend_by_zero(Lfun(1, 0))) is None
    rep.add(f"L_{flavor}_non_inner", outer, 0.0)

    failures = []
    count = 0
    while count < int(cfg.options.get("plane_samples", 50)):
        s, t = rng.uniform(-5, 5, 2)
        if abs(s * t) < 1e-3:
            continue
        try:
            planes = lc.invariant_planes(Lfun(s, t), unimodular_only=True)
        except lc.DegenerateSpectrumError:
            continue
        count += 1
        if flavor == "E":
            if planes:
                failures.append((s, t, len(planes)))
        else:
            kinds = [lc.plane_to_subalgebra(p) for p in planes]
            if len(planes) != 2 or kinds != ["heisenberg", "heisenberg"]:
                failures.append((s, t, kinds))
    name = "no_unimodular_plane_E" if flavor == "E" else "two_heisenberg_planes_H"
    rep.add(name, not failures, float(len(failures)), failures[:1] or None)


def _suite_appendix(cfg: RunConfig, rep: VerificationReport) -> None:
    triples = []
    if cfg.model == "X_H":
        triples.append(("osc_s", lc.SymmetricTriple(lc.osc_s(), lc.osc_form(), lc.osc_involution()),
                        lc.osc_s().basis("Z")))
    model = _load_model(cfg)
    triples.append((f"transvection[{cfg.model}]", model.triple, model.V))
    for name, triple, V in triples:
        rep.extend(triple.axioms(), prefix=f"{name}:")
        res = lc.analyze_symmetric_triple(triple, V)
        rep.extend(res.verdicts, prefix=f"{name}:")


def _random_point(rng, model, scale=1.0) -> ms.ModelPoint:
    return ms.ModelPoint(rng.uniform(-scale, scale), rng.uniform(-scale, scale, model.n),
                         rng.uniform(-scale, scale))


def _random_isometry(rng, model, scale=1.0):
    if model.flavor in ("H", "E"):
        return IsomElement(*rng.uniform(-scale, scale, 2), rng.uniform(-scale, scale, 4),
                           rng.uniform(-scale, scale), model.flavor)
    return (rng.uniform(-scale, scale, 1), rng.uniform(-scale, scale, 2 * model.n),
            rng.uniform(-scale, scale))


def _suite_metric(cfg: RunConfig, rep: VerificationReport) -> None:
    model = _load_model(cfg)
    rng = np.random.default_rng(cfg.seed)
    g0 = ms.body_metric(model)
    rep.add("g(V,V)=0", g0[-1, -1] == 0, abs(g0[-1, -1]))
    rep.add("g(L,V)=1", g0[0, -1] == 1, abs(g0[0, -1] - 1))
    worst_sig, worst_inv = None, 0.0
    n_samples = int(cfg.options.get("samples", 20))
    for _ in range(n_samples):
        p = _random_point(rng, model)
        G = ms.metric_at(model, p)
        ev = np.linalg.eigvalsh(G)
        sig = (int(np.sum(ev < 0)), int(np.sum(ev > 0)))
        if sig != (2, model.n) and worst_sig is None:
            worst_sig = sig
        g = _random_isometry(rng, model)
        Jac = ms.isometry_differential(model, g, p)
        Gq = ms.metric_at(model, ms.act(model, g, p))
        worst_inv = max(worst_inv, float(np.max(np.abs(Jac.T @ Gq @ Jac - G))))
    rep.add("signature_(2,n)", worst_sig is None, 0.0, worst_sig)
    rep.add("isometry_invariance", worst_inv < cfg.tol("invariance"), worst_inv)


def _suite_geodesics(cfg: RunConfig, rep: VerificationReport) -> None:
    model = _load_model(cfg)
    rng = np.random.default_rng(cfg.seed)
    ts = np.linspace(-10, 10, 201)
    worst_speed, worst_zero, worst_central = 0.0, 0.0, 0.0
    for _ in range(int(cfg.options.get("samples", 20))):
        p = _random_point(rng, model)
        u = rng.uniform(-1, 1, model.dim)
        u[0] *= 0.3
        trace = ms.geodesic_trace(model, p, u, ts)
        spd = trace[:, -1]
        worst_speed = max(worst_speed, float(np.max(np.abs(spd - spd[0]))) / max(1.0, abs(spd[0])))
        worst_zero = max(worst_zero, float(np.max(np.abs(ms.geodesic(model, p, u, 0.0).coords - p.coords))))
        e_v = np.zeros(model.dim)
        e_v[-1] = 1.0
        q = ms.geodesic(model, p, e_v, 2.5)
        expect = p.coords.copy()
        expect[-1] += 2.5
        worst_central = max(worst_central, float(np.max(np.abs(q.coords - expect))))
    rep.add("speed_constant", worst_speed < cfg.tol("speed"), worst_speed)
    rep.add("initial_point", worst_zero < cfg.tol("float"), worst_zero)
    rep.add("central_direction_straight", worst_central < cfg.tol("float"), worst_central)
    big = ms.geodesic(model, model.base_point(), np.concatenate([[0.0], np.ones(model.n), [1.0]]), 1e6)
    rep.add("complete_at_1e6", bool(np.all(np.isfinite(big.coords))), 0.0)


def _suite_leaves(cfg: RunConfig, rep: VerificationReport) -> None:
    model = _load_model(cfg)
    rng = np.random.default_rng(cfg.seed)
    worst = 0.0
    for _ in range(int(cfg.options.get("samples", 20))):
        g = _random_isometry(rng, model)
        shifts = []
        for _ in range(100):
            p = _random_point(rng, model, 3.0)
            shifts.append(ms.leaf_function(ms.act(model, g, p)) - ms.leaf_function(p))
        worst = max(worst, float(np.ptp(shifts)))
    rep.add("leaf_translation_property", worst < cfg.tol("leaf", "float"), worst)

    n = model.n
    basis = []
    for i in range(n):
        e = [Fraction(0)] * (n + 2)
        e[1 + i] = Fraction(1)
        basis.append(e)
    eV = [Fraction(0)] * (n + 1) + [Fraction(1)]
    flat = basis + [eV]
    worst_flat = 0.0
    for x in flat:
        for y in flat:
            for z in flat:
                r = ms.curvature_triple(model, x, y, z)
                worst_flat = max(worst_flat, float(max(abs(c) for c in r)))
    rep.add("curvature_vanishes_on_leaf", worst_flat == 0, worst_flat)
    eL = [Fraction(1)] + [Fraction(0)] * (n + 1)
    r = ms.curvature_triple(model, eL, basis[0], eL)
    rep.add("curvature_nonzero", any(c != 0 for c in r), 0.0, list(r))

    worst_leaf = 0.0
    for _ in range(20):
        m = fl.leaf_map(fl.boost(rng.normal()), rng.normal(size=2), rng.normal(size=3))
        ok, res = fl.preserves_leaf_structure(m)
        worst_leaf = max(worst_leaf, max(res.values()))
    rep.add("leaf_group_preserves_h_and_V", worst_leaf < 1e-10, worst_leaf)


def cmd_verify(cfg: RunConfig) -> tuple[VerificationReport, str]:
    if cfg.suite not in SUITES:
        raise UsageError(f"unknown suite {cfg.suite!r}; choose from {', '.join(SUITES)}")
    rep = VerificationReport(cfg.suite)
    start = time.perf_counter()
    {
        "algebra": _suite_algebra,
        "metric": _suite_metric,
        "derivations": _suite_derivations,
        "appendix": _suite_appendix,
        "geodesics": _suite_geodesics,
        "leaves": _suite_leaves,
    }[cfg.suite](cfg, rep)
    rep.wall_time = time.perf_counter() - start
    return rep, _report_json(rep, cfg)


# ---------------------------------------------------------------------------
# other commands
# ---------------------------------------------------------------------------


def _floats(text: str, name: str) -> np.ndarray:
    try:
        return np.array([float(x) for x in text.replace(";", ",").split(",") if x.strip()])
    except ValueError as exc:
        raise UsageError(f"cannot parse {name}: {text!r}") from exc


def cmd_geodesic(cfg: RunConfig) -> tuple[VerificationReport, str]:
    model = _load_model(cfg)
    tangent = cfg.options.get("tangent")
    if tangent is None:
        raise UsageError("missing tangent data (--tangent l,a1,...,v)")
    u = _floats(tangent, "tangent") if isinstance(tangent, str) else np.asarray(tangent, float)
    if len(u) != model.dim:
        raise UsageError(f"tangent must have {model.dim} components")
    point = cfg.options.get("point")
    p = model.base_point() if point is None else ms.ModelPoint.from_coords(
        _floats(point, "point") if isinstance(point, str) else point)
    interval = cfg.options.get("interval", "0:1:0.1")
    t0, t1, dt = _floats(interval.replace(":", ","), "interval") if isinstance(interval, str) else interval
    if t1 < t0 or dt <= 0:
        raise UsageError("interval must satisfy t0 <= t1 and step > 0")
    steps = int(round((t1 - t0) / dt))
    ts = t0 + dt * np.arange(steps + 1)
    trace = ms.geodesic_trace(model, p, u, ts)
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["t", "l"] + [f"a{i + 1}" for i in range(model.n)] + ["v", "speed"])
    for row in trace:
        w.writerow([repr(float(x)) for x in row])
    rep = VerificationReport("geodesic")
    dev = float(np.max(np.abs(trace[:, -1] - trace[0, -1])))
    rep.add("speed_constant", dev < cfg.tol("speed"), dev)
    return rep, buf.getvalue()


def _s0_candidate(spec: da.HolonomySpec, model_name: str):
    """Heisenberg hull of the generators when it has the ``S_0`` shape on ``X_E``.

    The shape is a 3-dimensional subalgebra of ``heis_5`` containing the
    center; only then does the exact criterion apply.
    """
    if model_name != "X_E":
        return None
    heis = []
    for g in spec.generators:
        if isinstance(g, IsomElement):
            if g.s == 0 and g.t == 0:
                heis.append(g.h)
        elif isinstance(g, HeisElement):
            heis.append(g)
        else:
            return None
    if not heis or heis[0].n != 2:
        return None
    hull = da.syndetic_hull_nilpotent(heis)
    if hull.shape[0] != 3:
        return None
    z = np.zeros(5)
    z[0] = 1.0
    if np.linalg.matrix_rank(np.vstack([hull.astype(float), z])) != 3:
        return None
    return hull


def cmd_properness(cfg: RunConfig) -> tuple[VerificationReport, str]:
    spec = _load_spec(cfg)
    if not spec.generators:
        raise UsageError("generator list is empty")
    model_name = spec.model or cfg.model
    hull = _s0_candidate(spec, model_name)
    if hull is not None and not cfg.options.get("force_sampling"):
        res = da.proper_criterion_exact(hull, "X_E")
    else:
        model = ms.model_space(model_name)
        res = da.properness_sampler(
            spec, model,
            box_radius=float(cfg.options.get("box_radius", 0.5)),
            word_radius=int(cfg.options.get("word_radius", 8)),
        )
    out = res.to_dict()
    out["label"] = spec.label
    out["model"] = model_name
    return res.verdicts, _dump(out)


def cmd_lattice(cfg: RunConfig) -> tuple[VerificationReport, str]:
    text = cfg.options.get("matrix", "2,1;1,1")
    vals = _floats(text, "matrix")
    if len(vals) != 4:
        raise UsageError("matrix must have four entries, e.g. '2,1;1,1'")
    try:
        spec, cert = da.build_osc_lattice(vals.reshape(2, 2))
    except ValueError as exc:
        raise UsageError(str(exc)) from exc
    out = cert.to_dict()
    out["generators"] = spec.to_json()["generators"]
    central = da.commutator_center_test(spec)
    out["central_commutator"] = None if central is None else central.to_json()
    if cfg.options.get("save_generators"):
        da.save_generators(spec, cfg.options["save_generators"])
    return cert.verdicts, _dump(out)


def cmd_flow(cfg: RunConfig) -> tuple[VerificationReport, str]:
    spec = _load_spec(cfg)
    rep = VerificationReport("flow")
    c = da.commutator_center_test(spec)
    wit = None if c is None else c.to_json()
    rep.add("central_commutator", True, 0.0, wit if wit is not None else "none")
    out = rep.to_dict(include_time=False)
    out["central_element"] = wit
    out["periodic_parallel_flow"] = c is not None
    out["label"] = spec.label
    return rep, _dump(out)


def cmd_spectrum(cfg: RunConfig) -> tuple[VerificationReport, str]:
    flavor = cfg.options.get("flavor") or "H"
    if flavor not in ("H", "E"):
        raise UsageError("--flavor must be H or E")
    s, t = float(cfg.options.get("s", 1.0)), float(cfg.options.get("t", 0.0))
    D = (lc.derivation_hyperbolic if flavor == "H" else lc.derivation_elliptic)(s, t)
    vals, vecs = lc.eigenvector_table(D)
    out = {"schema": SCHEMA_VERSION, "flavor": flavor, "s": s, "t": t,
           "eigenvalues": vals, "eigenvectors": list(vecs.T)}
    rep = VerificationReport("spectrum")
    try:
        planes = lc.invariant_planes(D, unimodular_only=bool(cfg.options.get("unimodular")))
        out["invariant_planes"] = [
            {"vectors": list(p.vectors), "eigenvalues": list(p.eigenvalues),
             "subalgebra": lc.plane_to_subalgebra(p)}
            for p in planes
        ]
        rep.add("simple_spectrum", True, 0.0)
    except lc.DegenerateSpectrumError as exc:
        out["invariant_planes"] = None
        out["note"] = str(exc)
        rep.add("simple_spectrum", None, 0.0, str(exc))
    return rep, _dump(out)


HANDLERS = {
    "verify": cmd_verify,
    "geodesic": cmd_geodesic,
    "properness": cmd_properness,
    "lattice": cmd_lattice,
    "flow": cmd_flow,
    "spectrum": cmd_spectrum,
}


# ---------------------------------------------------------------------------
# argument parsing
# ---------------------------------------------------------------------------


def _parse_tol(items) -> dict:
    out = {}
    for item in items or []:
        if "=" not in item:
            raise UsageError(f"--tol expects name=value, got {item!r}")
        k, v = item.split("=", 1)
        try:
            out[k] = float(v)
        except ValueError as exc:
            raise UsageError(f"bad tolerance value {v!r}") from exc
    return out


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help="JSON file with any of the options below")
    common.add_argument("--model", help="X_H, X_E or generic:<file>")
    common.add_argument("--generators", help="generator JSON file")
    common.add_argument("--out", help="output path (default: stdout)")
    common.add_argument("--seed", type=int, help="random seed")
    common.add_argument("--tol", action="append", metavar="NAME=VAL", help="tolerance override")
    common.add_argument("--timing", action="store_true", help="include wall time in reports")

    p = argparse.ArgumentParser(prog="ppwave", description="pp-wave model spaces toolkit")
    sub = p.add_subparsers(dest="command", required=True)
    v = sub.add_parser("verify", parents=[common], help="run a verification suite")
    v.add_argument("--suite", choices=SUITES)
    v.add_argument("--flavor", choices=("H", "E"))
    v.add_argument("--algebra", help="algebra JSON file for the algebra suite")
    v.add_argument("--samples", type=int)
    g = sub.add_parser("geodesic", parents=[common], help="trace a geodesic as CSV")
    g.add_argument("--tangent", help="components (L, a^-..., V), comma separated")
    g.add_argument("--point", help="base point coordinates (l, a..., v)")
    g.add_argument("--interval", help="t0:t1:step")
    pr = sub.add_parser("properness", parents=[common], help="properness report")
    pr.add_argument("--box-radius", dest="box_radius", type=float)
    pr.add_argument("--word-radius", dest="word_radius", type=int)
    pr.add_argument("--force-sampling", dest="force_sampling", action="store_true")
    la = sub.add_parser("lattice", parents=[common], help="oscillator lattice certificate")
    la.add_argument("--matrix", help="monodromy as 'a,b;c,d'")
    la.add_argument("--save-generators", dest="save_generators")
    sub.add_parser("flow", parents=[common], help="parallel-flow periodicity test")
    sp = sub.add_parser("spectrum", parents=[common], help="eigen-structure of L_{s,t}")
    sp.add_argument("--flavor", choices=("H", "E"))
    sp.add_argument("--s", type=float)
    sp.add_argument("--t", type=float)
    sp.add_argument("--unimodular", action="store_true")
    return p


def config_from_args(ns: argparse.Namespace) -> RunConfig:
    raw: dict = {}
    if ns.config:
        try:
            raw = json.loads(Path(ns.config).read_text())
        except (OSError, json.JSONDecodeError) as exc:
            raise UsageError(f"cannot read config: {exc}") from exc
    args = {k: v for k, v in vars(ns).items() if v is not None and k != "config"}
    merged = {**raw, **args}
    tolerances = dict(DEFAULT_TOLERANCES)
    tolerances.update(raw.get("tolerances", {}))
    tolerances.update(_parse_tol(args.get("tol")))
    known = {"command", "model", "generators", "suite", "out", "seed", "tol", "tolerances"}
    options = {k: v for k, v in merged.items() if k not in known}
    return RunConfig(
        command=ns.command,
        model=merged.get("model", "X_H"),
        generators=merged.get("generators"),
        suite=merged.get("suite"),
        output=merged.get("out"),
        seed=int(merged.get("seed", 0)),
        tolerances=tolerances,
        options=options,
    )


def main(argv=None) -> int:
    parser = build_parser()
    try:
        ns = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        cfg = config_from_args(ns)
        rep, text = HANDLERS[cfg.command](cfg)
    except UsageError as exc:
        print(f"ppwave: error: {exc}", file=sys.stderr)
        return 2
    _emit(text, cfg.output)
    return 0 if rep.passed else 1


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
