"""Scenario files: loading, validation, check execution and reports.

A scenario is a JSON document::

    {
      "name": "tridisc-no-cnp",
      "description": "...",
      "seed": 0, "tolerance": 1e-9, "truncation": 64,
      "checks": [{"id": "...", "op": "witness_search", ..., "expect": "NotCnp"}],
      "binding": {...}
    }

Every check names one operation from :data:`OPS` and the verdict it expects.
A run reports the verdict of each check next to its expectation; the run
matches when all of them agree.
"""
from __future__ import annotations

import csv
import io
import json
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from datetime import datetime, timezone
from importlib import resources
from pathlib import Path
from typing import Callable, Dict, List, Optional

import numpy as np

from . import __version__
from . import characterization as ch
from .cnp import (
    PickProblem,
    cnp_sample_test,
    dedupe,
    default_samples,
    multiplier_contractive,
    one_minus_inverse,
    pick_feasibility_report,
    reverify_witness,
    witness_search,
)
from .errors import ConstraintViolation, SchemaError, UnknownScenario
from .functions import parse_expr
from .jsonio import dec_complex, dec_points, dec_real, enc_points, enc_real
from .kernels import Kernel, parse_kernel, radial_series
from .numerics import psd_test
from .sampling import SamplerConfig, random_points, sample_points
from .series import diagonal_cnp_test

REPORT_SCHEMA = "cnp-lab-report/1"
SEED_ENV = "CNP_LAB_SEED"
VALUE_TOL = 1e-10


# --------------------------------------------------------------------------
# scenario documents


@dataclass(frozen=True)
class Scenario:
    name: str
    description: str
    seed: int
    tolerance: float
    truncation: int
    checks: tuple
    binding: Optional[dict] = None
    source: str = "<memory>"


def builtin_names() -> List[str]:
    root = resources.files("cnp_lab") / "data"
    return sorted(p.name[:-5] for p in root.iterdir() if p.name.endswith(".json"))


def _parse_json(text: str, source: str) -> dict:
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise SchemaError(f"{source}: invalid JSON: {exc.msg}", line=exc.lineno) from None
    if not isinstance(data, dict):
        raise SchemaError(f"{source}: a scenario must be a JSON object")
    return data


def _require(data: dict, key: str, kind, where: str):
    if key not in data:
        raise SchemaError(f"missing required field in {where}", field=key)
    v = data[key]
    if kind is float:
        return dec_real(v)
    if kind is int:
        if isinstance(v, bool) or not isinstance(v, int):
            raise SchemaError(f"expected an integer in {where}", field=key)
        return v
    if not isinstance(v, kind):
        raise SchemaError(f"expected {kind.__name__} in {where}", field=key)
    return v


def scenario_from_dict(data: dict, source: str = "<memory>") -> Scenario:
    """Validate the top-level structure (check arguments are validated when they run)."""
    name = _require(data, "name", str, source)
    seed = _require(data, "seed", int, source)
    if not 0 <= seed < 2 ** 64:
        raise SchemaError("seed must be a 64-bit unsigned integer", field="seed")
    tol = _require(data, "tolerance", float, source)
    trunc = _require(data, "truncation", int, source)
    checks = _require(data, "checks", list, source)
    ids = set()
    for i, c in enumerate(checks):
        where = f"checks[{i}]"
        if not isinstance(c, dict):
            raise SchemaError("a check must be an object", field=where)
        cid = _require(c, "id", str, where)
        op = _require(c, "op", str, where)
        _require(c, "expect", str, where)
        if op not in OPS:
            raise SchemaError(f"unknown operation {op!r}", field=f"{where}.op")
        if cid in ids:
            raise SchemaError(f"duplicate check id {cid!r}", field=f"{where}.id")
        ids.add(cid)
    binding = data.get("binding")
    if binding is not None and not isinstance(binding, dict):
        raise SchemaError("binding must be an object", field="binding")
    return Scenario(name, data.get("description", ""), seed, tol, trunc, tuple(checks),
                    binding, source)


def load_scenario(name: Optional[str] = None, path: Optional[str] = None) -> Scenario:
    """Resolve a built-in name or read a scenario file."""
    if path is not None:
        try:
            text = Path(path).read_text(encoding="utf-8")
        except OSError as exc:
            raise SchemaError(f"cannot read {path}: {exc.strerror}") from None
        return scenario_from_dict(_parse_json(text, path), path)
    if name not in builtin_names():
        raise UnknownScenario(name)
    text = (resources.files("cnp_lab") / "data" / f"{name}.json").read_text(encoding="utf-8")
    return scenario_from_dict(_parse_json(text, name), f"builtin:{name}")


# --------------------------------------------------------------------------
# check execution


@dataclass
class Context:
    seed: int
    tol: float
    truncation: int
    tables: List[dict] = field(default_factory=list)
    check_id: str = ""


def _kernel(c: dict, key: str = "kernel") -> Kernel:
    if key not in c:
        raise SchemaError("missing kernel", field=key)
    return parse_kernel(c[key], key)


def _expr(c: dict, key: str):
    if key not in c:
        raise SchemaError("missing expression", field=key)
    if not isinstance(c[key], str):
        raise SchemaError("expressions are strings", field=key)
    return parse_expr(c[key])


def _num(c: dict, key: str, default=None) -> float:
    if key not in c:
        if default is None:
            raise SchemaError("missing number", field=key)
        return default
    return dec_real(c[key])


def _samples(c: dict, K: Kernel, ctx: Context) -> List[np.ndarray]:
    """Explicit ``points`` sets, else ``sets x size`` random points at ``radius``
    (plus the antipodal grid pairs when ``grid`` is true)."""
    if "points" in c:
        sets = c["points"]
        if not isinstance(sets, list) or not sets:
            raise SchemaError("points must be a non-empty list of point sets", field="points")
        return [K.points(dec_points(s)) for s in sets]
    spec = c.get("samples", {})
    sets = int(spec.get("sets", 20))
    size = int(spec.get("size", 8))
    radius = dec_real(spec.get("radius", 0.7))
    if spec.get("grid", False):
        levels = [dec_real(v) for v in spec.get("levels", [0.3, 0.5, 0.7])]
        return default_samples(K, ctx.seed, sets, size, radius, levels)
    return sample_points(SamplerConfig(K.domain, radius, sets, size, ctx.seed))


def _record_table(ctx: Context, K: Kernel, samples, matrix_fn):
    for i, pts in enumerate(samples):
        pts = dedupe(K.points(pts))
        vals = psd_test(matrix_fn(pts), ctx.tol).eigenvalues
        ctx.tables.append({"check": ctx.check_id, "set_index": i, "size": len(pts),
                           "min_eigenvalue": vals[0], "eigenvalues": vals})


def op_cnp_sample_test(c, ctx):
    K = _kernel(c)
    samples = _samples(c, K, ctx)
    v = cnp_sample_test(K, samples, ctx.tol)
    tested = samples[: v.samples_tested]
    _record_table(ctx, K, tested, lambda p: one_minus_inverse(K, p))
    out = v.to_dict()
    if v.verdict == "NotCnp":
        again = reverify_witness(K, out, ctx.tol)
        out["reverified_min_eigenvalue"] = enc_real(again.min_eigenvalue)
    return v.verdict, out, getattr(v, "min_eigenvalue", None)


def op_witness_search(c, ctx):
    K = _kernel(c)
    levels = [dec_real(v) for v in c.get("levels", [0.3, 0.5, 0.7])]
    budget = int(c.get("random_budget", 10_000))
    w = witness_search(K, levels, ctx.tol, ctx.seed, budget)
    if w is None:
        return "NoWitness", {"verdict": "NoWitness", "levels": [enc_real(v) for v in levels],
                             "random_budget": budget}, None
    out = w.as_verdict().to_dict()
    out["reverified_min_eigenvalue"] = enc_real(reverify_witness(K, out, ctx.tol).min_eigenvalue)
    return "NotCnp", out, w.min_eigenvalue


def op_diagonal_cnp_test(c, ctx):
    K = _kernel(c)
    order = int(c.get("order", 32))
    v = diagonal_cnp_test(radial_series(K, order))
    out = {"verdict": v.verdict, "order": order,
           "coefficients": [enc_real(x) for x in v.coefficients.coeffs[:8]]}
    if not v.is_cnp:
        out["index"] = v.index
        out["value"] = enc_real(v.value)
    return v.verdict, out, v.value


def op_verify_chu_identity(c, ctx):
    pts = None if "points" not in c else [dec_complex(z) for z in c["points"]]
    r = ch.verify_chu_identity(_expr(c, "phi"), _expr(c, "psi"), pts)
    return r.to_dict()["verdict"], r.to_dict(), r.defect


def _decomposition(spec: dict, ctx: Context) -> ch.DecompositionPair:
    if not isinstance(spec, dict) or "builder" not in spec:
        raise SchemaError("decomposition needs a builder", field="decomposition")
    b = spec["builder"]
    width = int(spec.get("width", ctx.truncation))
    radius = dec_real(spec.get("radius", 0.7))
    if b == "cnp":
        return ch.decompose_cnp(parse_expr(spec["u"]))
    if b == "tensor2":
        return ch.decompose_tensor2(parse_expr(spec["u"]), parse_expr(spec["v"]))
    if b == "tensor3":
        return ch.decompose_tensor3(parse_expr(spec["t"]), parse_expr(spec["u"]), parse_expr(spec["v"]))
    if b == "schur":
        return ch.decompose_schur(parse_expr(spec["u"]))
    if b == "weighted_bergman":
        return ch.decompose_weighted_bergman(dec_real(spec["p"]), width, radius)
    if b == "example33_1":
        return ch.decompose_example33_1(parse_expr(spec.get("u", "z")), dec_real(spec["a"]), width, radius)
    if b == "example33_2":
        return ch.decompose_example33_2(dec_real(spec["a"]), dec_complex(spec["b"]),
                                        dec_complex(spec["c"]), width, radius)
    raise SchemaError(f"unknown decomposition builder {b!r}", field="decomposition.builder")


def _witness(spec: dict, ctx: Context) -> ch.CompositionWitness:
    if not isinstance(spec, dict) or "builder" not in spec:
        raise SchemaError("witness needs a builder", field="witness")
    b = spec["builder"]
    width = int(spec.get("width", ctx.truncation))
    if b == "example25":
        return ch.example25_witness(dec_real(spec["a"]), dec_real(spec["b"]))
    if b == "example33_1":
        return ch.example33_1_witness(dec_real(spec["a"]), width)
    if b == "example33_2":
        return ch.example33_2_witness(dec_real(spec["a"]), dec_complex(spec["b"]),
                                      dec_complex(spec["c"]), width)
    if b == "schur":
        return ch.schur_witness(dec_complex(spec.get("lam", 1)))
    raise SchemaError(f"unknown witness builder {b!r}", field="witness.builder")


def _pair_sample(dp: ch.DecompositionPair, c: dict, ctx: Context):
    n = int(c.get("pairs", 500))
    radius = dec_real(c.get("radius", min(dp.radius, 0.7)))
    rng = np.random.default_rng(ctx.seed)
    dom = dp.kernel.domain
    return random_points(rng, dom, radius, (n,)), random_points(rng, dom, radius, (n,))


def op_decomposition_residual(c, ctx):
    dp = _decomposition(c.get("decomposition"), ctx)
    xs, ys = _pair_sample(dp, c, ctx)
    res = dp.max_residual(xs, ys)
    ok = res <= dp.residual_bound
    out = {"verdict": "PASS" if ok else "FAIL", "max_residual": enc_real(res),
           "residual_bound": enc_real(dp.residual_bound), "pairs": len(xs),
           "g_width": dp.g.width, "f_width": dp.f.width, "notes": list(dp.notes)}
    return out["verdict"], out, res


def op_verify_characterization(c, ctx):
    dp = _decomposition(c.get("decomposition"), ctx)
    w = _witness(c.get("witness"), ctx)
    phi = _expr(c, "phi")
    radius = dec_real(c.get("radius", min(dp.radius, 0.7)))
    n = int(c.get("points_count", 200))
    pts = random_points(np.random.default_rng(ctx.seed), dp.kernel.domain, radius, (n,))
    r = ch.verify_characterization(dp, phi, w, pts)
    out = r.to_dict()
    out["line"] = r.line()
    return out["verdict"], out, max(r.defect_f, r.defect_phi)


def op_classify_bidisc(c, ctx):
    r = ch.classify_bidisc(_expr(c, "phi"))
    return r.verdict, r.to_dict(), getattr(r, "fit_error", None)


def op_classify_disc_blaschke(c, ctx):
    r = ch.classify_disc_blaschke(_expr(c, "phi"))
    return r.verdict, r.to_dict(), getattr(r, "fit_error", None)


def terminal_matrix(t: float, v: float) -> np.ndarray:
    """``1 - 1/K`` for the bidisc Szegő kernel at the pair ``(t, v), (-t, -v)``."""
    d = 1 - (1 - t * t) * (1 - v * v)
    o = 1 - (1 + t * t) * (1 + v * v)
    return np.array([[d, o], [o, d]])


def op_terminal_matrix(c, ctx):
    m = terminal_matrix(_num(c, "t"), _num(c, "v"))
    r = psd_test(m, ctx.tol)
    out = {"verdict": r.verdict, "matrix": [[enc_real(x) for x in row] for row in m],
           "min_eigenvalue": enc_real(r.min_eigenvalue)}
    return r.verdict, out, r.min_eigenvalue


def op_psd_test(c, ctx):
    if "matrix" not in c:
        raise SchemaError("missing matrix", field="matrix")
    m = np.array([[dec_complex(x) for x in row] for row in c["matrix"]])
    r = psd_test(m, ctx.tol, c.get("method", "lapack"))
    out = {"verdict": r.verdict, "min_eigenvalue": enc_real(r.min_eigenvalue),
           "eigenvalues": [enc_real(x) for x in r.eigenvalues]}
    return r.verdict, out, r.min_eigenvalue


def op_pick(c, ctx):
    K = _kernel(c)
    p = PickProblem(K, dec_points(c["nodes"]), np.array([dec_complex(w) for w in c["targets"]]))
    r = pick_feasibility_report(p, ctx.tol)
    return r.to_dict()["verdict"], r.to_dict(), r.psd.min_eigenvalue


def op_multiplier_contractive(c, ctx):
    K = _kernel(c)
    phi = _expr(c, "phi")
    samples = _samples(c, K, ctx)
    worst = None
    for i, pts in enumerate(samples):
        r = multiplier_contractive(K, phi, pts, ctx.tol)
        ctx.tables.append({"check": ctx.check_id, "set_index": i, "size": len(pts),
                           "min_eigenvalue": r.min_eigenvalue, "eigenvalues": r.eigenvalues})
        if worst is None or r.min_eigenvalue < worst.min_eigenvalue:
            worst = r
        if not r.is_psd:
            return "NotPsd", {"verdict": "NotPsd", "set_index": i, "witness_points": enc_points(pts),
                              "min_eigenvalue": enc_real(r.min_eigenvalue)}, r.min_eigenvalue
    return "Psd", {"verdict": "Psd", "samples_tested": len(samples),
                   "worst_min_eigenvalue": enc_real(worst.min_eigenvalue)}, worst.min_eigenvalue


def op_kernel_identity(c, ctx):
    """Pointwise ``|K1 - K2|`` on random points against ``tolerance`` (default 1e-12)."""
    k1, k2 = _kernel(c, "left"), _kernel(c, "right")
    if k1.dim != k2.dim:
        raise SchemaError("kernels live on different dimensions", field="right")
    samples = _samples(c, k1, ctx)
    err = max(float(np.max(np.abs(k1.matrix(s) - k2.matrix(s)))) for s in samples)
    tol = _num(c, "tolerance", 1e-12)
    out = {"verdict": "PASS" if err <= tol else "FAIL", "max_difference": enc_real(err),
           "tolerance": enc_real(tol)}
    return out["verdict"], out, err


def op_normalization_check(c, ctx):
    """``K(x, w) = 1`` on random points."""
    K = _kernel(c)
    samples = _samples(c, K, ctx)
    w = K.base_point[None, :]
    err = max(float(np.max(np.abs(K.matrix(s, w) - 1))) for s in samples)
    out = {"verdict": "PASS" if err <= 1e-12 and K.normalized else "FAIL",
           "flagged_normalized": bool(K.normalized), "max_deviation": enc_real(err)}
    return out["verdict"], out, err


def op_nonvanishing_check(c, ctx):
    """``min |K|`` over every sampled pair stays above the 1e-13 floor."""
    K = _kernel(c)
    samples = _samples(c, K, ctx)
    low = min(float(np.min(np.abs(K.matrix(s)))) for s in samples)
    out = {"verdict": "PASS" if low > 1e-13 else "FAIL", "min_abs_value": enc_real(low)}
    return out["verdict"], out, low


def op_constraint_check(c, ctx):
    try:
        ch.check_example33_2(_num(c, "a"), dec_complex(c["b"]), dec_complex(c["c"]))
    except ConstraintViolation as exc:
        return "ConstraintViolation", {"verdict": "ConstraintViolation", "reason": str(exc)}, None
    return "Accepted", {"verdict": "Accepted"}, None


def op_weighted_bergman_inequality(c, ctx):
    p = _num(c, "p")
    val = ch.weighted_bergman_obstruction(p)
    out = {"verdict": "PASS" if val >= 1 else "FAIL", "value": enc_real(val), "p": enc_real(p)}
    return out["verdict"], out, val


OPS: Dict[str, Callable] = {
    "cnp_sample_test": op_cnp_sample_test,
    "witness_search": op_witness_search,
    "diagonal_cnp_test": op_diagonal_cnp_test,
    "verify_chu_identity": op_verify_chu_identity,
    "verify_characterization": op_verify_characterization,
    "decomposition_residual": op_decomposition_residual,
    "classify_bidisc": op_classify_bidisc,
    "classify_disc_blaschke": op_classify_disc_blaschke,
    "terminal_matrix": op_terminal_matrix,
    "psd_test": op_psd_test,
    "pick": op_pick,
    "multiplier_contractive": op_multiplier_contractive,
    "kernel_identity": op_kernel_identity,
    "normalization_check": op_normalization_check,
    "nonvanishing_check": op_nonvanishing_check,
    "constraint_check": op_constraint_check,
    "weighted_bergman_inequality": op_weighted_bergman_inequality,
}


@dataclass
class CheckResult:
    id: str
    op: str
    expect: str
    verdict: str
    matched: bool
    details: dict

    def to_dict(self) -> dict:
        return {"id": self.id, "op": self.op, "expect": self.expect, "verdict": self.verdict,
                "matched": self.matched, "details": self.details}


@dataclass
class ScenarioResult:
    name: str
    seed: int
    tolerance: float
    truncation: int
    checks: List[CheckResult]
    tables: List[dict]

    @property
    def matched(self) -> bool:
        return all(c.matched for c in self.checks)

    def to_dict(self) -> dict:
        return {"name": self.name, "seed": self.seed, "tolerance": enc_real(self.tolerance),
                "truncation": self.truncation,
                "status": "match" if self.matched else "mismatch",
                "checks": [c.to_dict() for c in self.checks]}


def run_check(c: dict, ctx: Context) -> CheckResult:
    ctx.check_id = c["id"]
    try:
        verdict, details, value = OPS[c["op"]](c, ctx)
    except SchemaError as exc:
        raise SchemaError(f"check {c['id']!r}: {exc}") from None
    except (KeyError, TypeError) as exc:
        raise SchemaError(f"check {c['id']!r}: malformed arguments ({exc})") from None
    matched = verdict == c["expect"]
    if "expect_value" in c:
        want = dec_real(c["expect_value"])
        tol = dec_real(c.get("value_tol", VALUE_TOL))
        ok = value is not None and abs(value - want) <= tol
        details["expect_value"] = enc_real(want)
        details["value_tol"] = enc_real(tol)
        matched = matched and ok
    if "expect_index" in c:
        matched = matched and details.get("index") == c["expect_index"]
    return CheckResult(c["id"], c["op"], c["expect"], verdict, matched, details)


def resolve_seed(scenario_seed: int, override: Optional[int] = None) -> int:
    """Command-line seed, then ``CNP_LAB_SEED``, then the scenario's own seed."""
    if override is not None:
        return int(override)
    env = os.environ.get(SEED_ENV)
    if env:
        try:
            return int(env)
        except ValueError:
            raise SchemaError(f"{SEED_ENV} must be an integer, got {env!r}") from None
    return scenario_seed


def run_scenario(scn: Scenario, seed: Optional[int] = None, tol: Optional[float] = None,
                 truncation: Optional[int] = None) -> ScenarioResult:
    ctx = Context(resolve_seed(scn.seed, seed),
                  scn.tolerance if tol is None else float(tol),
                  scn.truncation if truncation is None else int(truncation))
    results = [run_check(c, ctx) for c in scn.checks]
    return ScenarioResult(scn.name, ctx.seed, ctx.tol, ctx.truncation, results, ctx.tables)


def run_many(scenarios: List[Scenario], parallel: bool = False, **kw) -> List[ScenarioResult]:
    """Run scenarios; with ``parallel`` they run concurrently but results keep declared order."""
    if not parallel or len(scenarios) < 2:
        return [run_scenario(s, **kw) for s in scenarios]
    with ThreadPoolExecutor() as pool:
        return list(pool.map(lambda s: run_scenario(s, **kw), scenarios))


# --------------------------------------------------------------------------
# reports


def build_report(results: List[ScenarioResult], timestamp: Optional[str] = None) -> dict:
    """The report document; ``timestamp`` is the only field outside the determinism contract."""
    if timestamp is None:
        timestamp = datetime.now(timezone.utc).isoformat(timespec="seconds")
    return {
        "schema": REPORT_SCHEMA,
        "tool": "cnp-lab",
        "version": __version__,
        "timestamp": timestamp,
        "scenarios": [r.to_dict() for r in results],
        "summary": {"scenarios": len(results),
                    "matched": sum(r.matched for r in results),
                    "mismatched": sum(not r.matched for r in results)},
    }


def emit_report(report: dict) -> str:
    return json.dumps(report, indent=2, ensure_ascii=False) + "\n"


def parse_report(text: str) -> dict:
    return json.loads(text)


def emit_csv(results: List[ScenarioResult]) -> str:
    """One row per sample set tested: scenario, check, set index, size and eigenvalues."""
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["scenario", "check", "set_index", "size", "min_eigenvalue", "eigenvalues"])
    for r in results:
        for row in r.tables:
            w.writerow([r.name, row["check"], row["set_index"], row["size"],
                        enc_real(row["min_eigenvalue"]),
                        " ".join(enc_real(v) for v in row["eigenvalues"])])
    return buf.getvalue()


def write_text(path: str, text: str) -> None:
    try:
        Path(path).write_text(text, encoding="utf-8")
    except OSError as exc:
        raise OSError(f"cannot write {path}: {exc.strerror}") from None
