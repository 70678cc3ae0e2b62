"""Command-line front end.

Subcommands:
  compute <job.json>   evaluate each measure on the listed density pairs
  matrix <job.json>    pairwise measure matrices over all listed densities
  verify [...]         run the invariant suites, exit 0 only if all pass
  list-families        print the registered family identifiers

Exit codes: 0 success, 1 verification failure, 2 bad input (the message names
the offending JSON field), 3 numeric failure.

Direction convention: kl(a, b) = D_KL[p_a : p_b]; in matrices the row names
the first argument, so cell (row, col) = D[row : col].  Symmetric matrix
parameters are encoded as row-major lower triangles.  All numeric output uses
12 significant digits; CSV uses ',' separators, '.' decimal points and LF
line endings.  The environment variable EXPFAM_DIV_SEED overrides the default
oracle seed.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from dataclasses import replace

import numpy as np

from .divergences import (
    DivergenceResult,
    Method,
    alpha_divergence,
    bhattacharyya_coefficient,
    chernoff_information,
    cauchy_schwarz_gaussian,
    hellinger,
    jeffreys,
    jensen_shannon_mixture,
    kld,
)
from .errors import (
    DegenerateSolution,
    InvalidAlpha,
    InvalidParameter,
    NonConvergent,
    NotSPD,
    OutOfSupport,
    Unsupported,
)
from .families import family_ids, make_family, mixture_of
from .oracle import DEFAULT_SEED, OracleConfig
from .verify import run_verification

MEASURE_KINDS = ("bhat", "hellinger", "alpha", "chernoff", "kl", "jeffreys", "jsd", "cs")
SYMMETRIC_KINDS = {"hellinger", "chernoff", "jeffreys", "jsd", "cs"}


class CliInputError(ValueError):
    """Bad input; the message carries the JSON path of the offending field."""


def _fmt(x: float) -> str:
    return f"{float(x):.12g}"


def _fail(path: str, message: str):
    raise CliInputError(f"{path}: {message}")


def _require(obj, key, path, types, required=True, default=None):
    if key not in obj:
        if required:
            _fail(f"{path}.{key}", "missing required field")
        return default
    value = obj[key]
    if types is not None and not isinstance(value, types):
        _fail(f"{path}.{key}", f"expected {getattr(types, '__name__', types)}")
    return value


def _tri_to_symmetric(values, path):
    n = len(values)
    dim = int((np.sqrt(8 * n + 1) - 1) / 2)
    if dim * (dim + 1) != 2 * n:
        _fail(path, f"lower triangle needs d(d+1)/2 entries, got {n}")
    out = np.zeros((dim, dim))
    idx = 0
    for i in range(dim):
        for j in range(i + 1):
            out[i, j] = out[j, i] = float(values[idx])
            idx += 1
    return out


def _decode_blocks(fam, raw, path):
    if not isinstance(raw, list):
        _fail(path, "params must be a list of blocks")
    if len(raw) != len(fam.layout):
        _fail(path, f"family '{fam.family_id}' expects {len(fam.layout)} blocks")
    blocks = []
    for i, (spec, value) in enumerate(zip(fam.layout, raw)):
        block_path = f"{path}[{i}]"
        if spec == "s":
            if not isinstance(value, (int, float)) or isinstance(value, bool):
                _fail(block_path, "expected a number")
            blocks.append(float(value))
        elif spec[0] == "v":
            if not isinstance(value, list) or len(value) != spec[1]:
                _fail(block_path, f"expected a list of {spec[1]} numbers")
            blocks.append(np.asarray(value, dtype=float))
        else:
            if not isinstance(value, list):
                _fail(block_path, "expected a lower-triangle list")
            mat = _tri_to_symmetric(value, block_path)
            if mat.shape[0] != spec[1]:
                _fail(block_path, f"expected a {spec[1]}x{spec[1]} lower triangle")
            blocks.append(mat)
    try:
        return fam.source(*blocks)
    except InvalidParameter as exc:
        _fail(path, str(exc))


def _infer_options(family_id, options, densities, path):
    """Fill a missing 'dim' from the first density record where possible."""
    fid = family_id.strip().lower()
    if fid not in ("mvn", "centered_mvn", "dirichlet", "wishart") or "dim" in options:
        return options
    if not densities:
        _fail(f"{path}.densities", "cannot infer dimension without densities")
    params = densities[0].get("params")
    if not isinstance(params, list) or not params:
        _fail(f"{path}.densities[0].params", "cannot infer dimension")
    first = params[0]
    enriched = dict(options)
    if fid == "mvn" and isinstance(first, list):
        enriched["dim"] = len(first)
    elif fid == "dirichlet" and isinstance(first, list):
        enriched["dim"] = len(first)
    elif fid == "centered_mvn" and isinstance(first, list):
        n = len(first)
        enriched["dim"] = int((np.sqrt(8 * n + 1) - 1) / 2)
    elif fid == "wishart" and len(params) > 1 and isinstance(params[1], list):
        n = len(params[1])
        enriched["dim"] = int((np.sqrt(8 * n + 1) - 1) / 2)
    else:
        _fail(f"{path}.family_options.dim", "missing and could not be inferred")
    return enriched


def _oracle_config(raw, path, base_seed):
    cfg = OracleConfig(seed=base_seed)
    if raw is None:
        return cfg
    if not isinstance(raw, dict):
        _fail(path, "oracle options must be an object")
    allowed = {"abs_tol", "rel_tol", "max_subdivisions", "mc_samples", "seed",
               "tail_mass_cutoff"}
    for key in raw:
        if key not in allowed:
            _fail(f"{path}.{key}", "unknown oracle option")
    try:
        return replace(cfg, **raw)
    except InvalidParameter as exc:
        _fail(path, str(exc))


class Job:
    def __init__(self, spec: dict, seed: int):
        if not isinstance(spec, dict):
            _fail("$", "job must be a JSON object")
        self.family_id = _require(spec, "family_id", "$", str)
        options = _require(spec, "family_options", "$", dict, required=False, default={})
        densities = _require(spec, "densities", "$", list)
        if len(densities) < 1:
            _fail("$.densities", "need at least one density")
        self.measures = _require(spec, "measures", "$", list)
        if not self.measures:
            _fail("$.measures", "need at least one measure")
        output = _require(spec, "output", "$", dict, required=False, default={})
        self.out_format = output.get("format", "csv")
        if self.out_format not in ("csv", "json"):
            _fail("$.output.format", "must be 'csv' or 'json'")
        self.out_path = output.get("path")
        self.seed = seed

        self.is_mixture = self.family_id.strip().lower() == "mixture"
        if self.is_mixture:
            self.family, self.weight_len = _build_mixture(options, "$.family_options")
        else:
            options = _infer_options(self.family_id, options, densities, "$")
            try:
                self.family = make_family(self.family_id, **options)
            except InvalidParameter as exc:
                _fail("$.family_id", str(exc))

        self.names = []
        self.params = []
        for i, record in enumerate(densities):
            path = f"$.densities[{i}]"
            if not isinstance(record, dict):
                _fail(path, "expected an object")
            name = _require(record, "name", path, str)
            raw = _require(record, "params", path, list)
            if name in self.names:
                _fail(f"{path}.name", f"duplicate density name {name!r}")
            self.names.append(name)
            if self.is_mixture:
                if len(raw) != 1 or not isinstance(raw[0], list) \
                        or len(raw[0]) != self.weight_len:
                    _fail(f"{path}.params",
                          f"expected one weight vector of length {self.weight_len}")
                weights = np.asarray(raw[0], dtype=float)
                try:
                    self.family.validate_weights(weights)
                except InvalidParameter as exc:
                    _fail(f"{path}.params", str(exc))
                self.params.append(weights)
            else:
                self.params.append(_decode_blocks(self.family, raw, f"{path}.params"))

        for j, measure in enumerate(self.measures):
            self._validate_measure(measure, f"$.measures[{j}]")

    def _validate_measure(self, measure, path):
        if not isinstance(measure, dict):
            _fail(path, "expected an object")
        kind = _require(measure, "kind", path, str)
        if kind not in MEASURE_KINDS:
            _fail(f"{path}.kind", f"must be one of {', '.join(MEASURE_KINDS)}")
        if self.is_mixture and kind != "jsd":
            _fail(f"{path}.kind", "mixture families only support the 'jsd' measure")
        if not self.is_mixture and kind == "jsd":
            _fail(f"{path}.kind", "'jsd' needs family_id 'mixture'")
        alpha = measure.get("alpha")
        if alpha is not None and (not isinstance(alpha, (int, float)) or isinstance(alpha, bool)):
            _fail(f"{path}.alpha", "expected a number")
        if kind == "bhat" and alpha is not None and not 0 < alpha < 1:
            _fail(f"{path}.alpha", "must be in (0, 1)")
        if kind == "alpha" and alpha is None:
            _fail(f"{path}.alpha", "required for the alpha divergence")
        method = measure.get("method")
        if method is not None and method not in ("auto", "logratio", "entropy_moment", "limit"):
            _fail(f"{path}.method", "must be auto, logratio, entropy_moment or limit")
        _oracle_config(measure.get("oracle"), f"{path}.oracle", self.seed)

    def measure_label(self, measure) -> str:
        kind = measure["kind"]
        if kind in ("bhat", "alpha") and measure.get("alpha") is not None:
            return f"{kind}[alpha={_fmt(measure['alpha'])}]"
        return kind

    def is_symmetric(self, measure) -> bool:
        kind = measure["kind"]
        if kind == "bhat":
            return measure.get("alpha", 0.5) == 0.5
        return kind in SYMMETRIC_KINDS

    def evaluate(self, measure, i: int, j: int, path: str) -> DivergenceResult:
        kind = measure["kind"]
        a, b = self.params[i], self.params[j]
        alpha = measure.get("alpha")
        omega = measure.get("omega")
        cfg = _oracle_config(measure.get("oracle"), f"{path}.oracle", self.seed)
        if kind == "jsd":
            return jensen_shannon_mixture(self.family, a, b, cfg)
        fam = self.family
        if kind == "bhat":
            value = bhattacharyya_coefficient(fam, a, b, alpha if alpha is not None else 0.5,
                                              omega=omega)
            return DivergenceResult(value, Method.CLOSED_FORM,
                                    alpha_used=alpha if alpha is not None else 0.5)
        if kind == "hellinger":
            return DivergenceResult(hellinger(fam, a, b, omega=omega), Method.CLOSED_FORM)
        if kind == "alpha":
            return DivergenceResult(alpha_divergence(fam, a, b, float(alpha)),
                                    Method.CLOSED_FORM, alpha_used=float(alpha))
        if kind == "chernoff":
            value, alpha_star = chernoff_information(fam, a, b)
            return DivergenceResult(value, Method.CLOSED_FORM, alpha_used=alpha_star)
        if kind == "kl":
            return kld(fam, a, b, method=measure.get("method", "auto"),
                       alpha_step=measure.get("alpha_step", 1e-3))
        if kind == "jeffreys":
            return DivergenceResult(jeffreys(fam, a, b), Method.CLOSED_FORM)
        if kind == "cs":
            return DivergenceResult(cauchy_schwarz_gaussian(a, b), Method.CLOSED_FORM)
        raise CliInputError(f"{path}.kind: unhandled measure {kind!r}")


def _build_mixture(options, path):
    components = options.get("components")
    if not isinstance(components, list) or len(components) < 2:
        _fail(f"{path}.components", "need a list of at least two components")
    fams, params = [], []
    for i, comp in enumerate(components):
        comp_path = f"{path}.components[{i}]"
        if not isinstance(comp, dict):
            _fail(comp_path, "expected an object")
        fid = _require(comp, "family_id", comp_path, str)
        opts = _require(comp, "family_options", comp_path, dict, required=False, default={})
        try:
            fam = make_family(fid, **opts)
        except InvalidParameter as exc:
            _fail(f"{comp_path}.family_id", str(exc))
        fams.append(fam)
        params.append(_decode_blocks(fam, _require(comp, "params", comp_path, list),
                                     f"{comp_path}.params"))
    mixture_components = []
    for fam, lam in zip(fams, params):
        from .families.mixture import MixtureComponent
        mixture_components.append(MixtureComponent(
            log_density_batch=lambda xs, _f=fam, _l=lam: _f.log_density_batch(_l, np.asarray(xs)),
            sample=lambda n, rng, _f=fam, _l=lam: np.asarray(_f.sample(_l, n, rng)),
        ))
    from .families.mixture import MixtureFamily
    return MixtureFamily(tuple(mixture_components)), len(components)


# ---------------------------------------------------------------------------
# result rendering
# ---------------------------------------------------------------------------

def _result_json(res: DivergenceResult) -> dict:
    omega = None
    if res.omega_used is not None:
        omega = [w.tolist() if isinstance(w, np.ndarray) else w for w in res.omega_used]
    return {
        "value": res.value,
        "method": res.method.value,
        "alpha_used": res.alpha_used,
        "omega_used": omega,
        "residual": res.residual,
    }


def run_compute(job: Job) -> str:
    rows = []
    records = []
    for j, measure in enumerate(job.measures):
        label = job.measure_label(measure)
        symmetric = job.is_symmetric(measure)
        n = len(job.names)
        pairs = [(i, k) for i in range(n) for k in range(n)
                 if i != k and (not symmetric or i < k)]
        if n == 1:
            pairs = [(0, 0)]
        for i, k in pairs:
            res = job.evaluate(measure, i, k, f"$.measures[{j}]")
            rows.append(f"{label},{job.names[i]},{job.names[k]},{_fmt(res.value)}")
            records.append({"measure": label, "left": job.names[i],
                            "right": job.names[k], **_result_json(res)})
    if job.out_format == "json":
        return json.dumps({"results": records}, indent=2) + "\n"
    return "measure,left,right,value\n" + "\n".join(rows) + "\n"


def render_matrix(names, grid) -> str:
    """CSV block for one measure: header row/col of density names."""
    lines = ["name," + ",".join(names)]
    for name, row in zip(names, grid):
        lines.append(name + "," + ",".join(_fmt(v) for v in row))
    return "\n".join(lines) + "\n"


def run_matrix(job: Job) -> str:
    blocks = []
    matrices = []
    n = len(job.names)
    for j, measure in enumerate(job.measures):
        label = job.measure_label(measure)
        symmetric = job.is_symmetric(measure)
        grid = [[None] * n for _ in range(n)]
        cells = [[None] * n for _ in range(n)]
        for i in range(n):
            for k in range(n):
                if symmetric and k < i:
                    grid[i][k] = grid[k][i]
                    cells[i][k] = cells[k][i]
                    continue
                res = job.evaluate(measure, i, k, f"$.measures[{j}]")
                grid[i][k] = res.value
                cells[i][k] = _result_json(res)
        if symmetric:
            arr = np.asarray(grid, dtype=float)
            assert np.array_equal(arr, arr.T), "symmetric measure produced asymmetric matrix"
        blocks.append(f"# measure={label}\n" + render_matrix(job.names, grid))
        matrices.append({"measure": label, "names": job.names,
                         "values": grid, "cells": cells})
    if job.out_format == "json":
        return json.dumps({"matrices": matrices}, indent=2) + "\n"
    return "\n".join(blocks)


# ---------------------------------------------------------------------------
# entry point
# ---------------------------------------------------------------------------

def _default_seed() -> int:
    env = os.environ.get("EXPFAM_DIV_SEED")
    if env is None:
        return DEFAULT_SEED
    try:
        return int(env)
    except ValueError as exc:
        raise CliInputError(f"EXPFAM_DIV_SEED: expected an integer, got {env!r}") from exc


def _load_job(path: str, seed: int) -> Job:
    try:
        with open(path, "r", encoding="utf-8") as handle:
            spec = json.load(handle)
    except FileNotFoundError:
        raise CliInputError(f"$: job file {path!r} not found")
    except json.JSONDecodeError as exc:
        raise CliInputError(f"$: invalid JSON ({exc})")
    return Job(spec, seed)


def _emit(text: str, path) -> None:
    if path:
        with open(path, "w", encoding="utf-8", newline="\n") as handle:
            handle.write(text)
    else:
        sys.stdout.write(text)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="expfam-div",
        description="Closed-form statistical divergences on exponential families, "
                    "computed without the log-normalizer and checked against "
                    "brute-force oracles.",
        epilog="Direction convention: kl(a, b) = D_KL[p_a : p_b] (matrix rows name "
               "the first argument).  EXPFAM_DIV_SEED overrides the oracle seed.")
    sub = parser.add_subparsers(dest="command", required=True)
    p_compute = sub.add_parser("compute", help="evaluate measures over density pairs")
    p_compute.add_argument("job", help="path to a JSON job file")
    p_matrix = sub.add_parser("matrix", help="pairwise matrices over all densities")
    p_matrix.add_argument("job", help="path to a JSON job file")
    p_verify = sub.add_parser("verify", help="run the invariant suites")
    p_verify.add_argument("--family", action="append", default=None,
                          help="restrict to one family id (repeatable)")
    p_verify.add_argument("--seed", type=int, default=None)
    sub.add_parser("list-families", help="print registered family ids")
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        if args.command == "list-families":
            for fid in family_ids():
                print(fid)
            return 0
        if args.command == "verify":
            seed = args.seed if args.seed is not None else _default_seed()
            known = set(family_ids())
            wanted = args.family
            if wanted:
                for fid in wanted:
                    if fid not in known:
                        raise CliInputError(f"--family: unknown family id {fid!r}")
            results = run_verification(wanted, seed)
            for res in results:
                print(res.line())
            failed = [r for r in results if not r.passed]
            print(f"{len(results) - len(failed)}/{len(results)} checks passed")
            return 0 if not failed else 1
        seed = _default_seed()
        job = _load_job(args.job, seed)
        text = run_compute(job) if args.command == "compute" else run_matrix(job)
        _emit(text, job.out_path)
        return 0
    except CliInputError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except (InvalidParameter, OutOfSupport, InvalidAlpha, NotSPD, Unsupported) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except (NonConvergent, DegenerateSolution) as exc:
        print(f"numeric failure: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
