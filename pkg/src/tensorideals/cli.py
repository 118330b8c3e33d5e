"""Command-line interface: classifier queries, oracle runs and comparison reports.

Exit codes: 0 success, 2 invalid parameters, 3 oracle/classifier disagreement,
4 memory budget exceeded.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field
from fractions import Fraction

from . import __version__
from .algebra import (
    AlgebraError,
    AlgebraParams,
    annihilated_by_cups_caps,
    jones_wenzl,
    negligible_dim,
    tensor_ideal_truncation,
)
from .cache import Cache
from .classifier import (
    Category,
    ClassifierError,
    critical_rank,
    hom_unit_dim,
    in_ideal,
    kernel_dim_at_threshold,
    label_to_json,
    lambda_set,
    nu,
    params,
    predicted_hom_J,
)
from .diagrams import DiagramError, Flavor
from .linalg import CertificationError
from .oracle import DEFAULT_BUDGET_MB, BudgetExceeded, OracleError, RepSpec, invariant_dim, phi
from .partitions import Bipartition, Partition, ab_dual, is_ab_dual, lr_coefficient, lr_product

SCHEMA = 1
EXIT_OK, EXIT_INVALID, EXIT_DISAGREE, EXIT_BUDGET = 0, 2, 3, 4


class UsageError(ValueError):
    pass


class Disagreement(Exception):
    def __init__(self, report: dict):
        super().__init__("oracle and classifier disagree")
        self.report = report


@dataclass
class RunConfig:
    command: str
    flavor: str | None = None
    numbers: dict = field(default_factory=dict)
    ranks: list = field(default_factory=list)
    cache_dir: str | None = None
    format: str = "json"
    budget_mb: float = DEFAULT_BUDGET_MB
    jobs: int = 1

    def to_json(self) -> dict:
        return asdict(self)

    @classmethod
    def from_json(cls, data: dict) -> "RunConfig":
        data = dict(data)
        data["ranks"] = [tuple(r) if isinstance(r, list) else r for r in data.get("ranks", [])]
        return cls(**data)


# ---------------------------------------------------------------------------
# parsing helpers


def parse_partition(text: str) -> Partition:
    text = text.strip()
    if text in ("", "-", "0", "()", "[]"):
        return Partition(())
    try:
        return Partition(int(x) for x in text.strip("()[]").split(","))
    except ValueError as exc:
        raise UsageError(f"bad partition {text!r}: {exc}") from None


def parse_bipartition(text: str) -> Bipartition:
    if "|" not in text:
        raise UsageError(f"bipartition needs the form 'black|white', got {text!r}")
    black, white = text.split("|", 1)
    return Bipartition(parse_partition(black), parse_partition(white))


def parse_range(text: str) -> list[int]:
    """'3', '1..4' or '1,3,5'."""
    try:
        if ".." in text:
            lo, hi = text.split("..")
            return list(range(int(lo), int(hi) + 1))
        return [int(x) for x in text.split(",")]
    except ValueError:
        raise UsageError(f"bad range {text!r}") from None


def category_from(args) -> Category:
    f = args.flavor
    need = lambda name: _need_arg(args, name, f)
    if f == "O":
        return Category.O(need("delta"))
    if f == "GL":
        return Category.GL(need("delta"))
    if f == "P":
        return Category.P()
    if f == "S":
        return Category.S(need("t"))
    if f == "SL2":
        return Category.SL2(need("p"))
    raise UsageError(f"unknown flavour {f!r}")


def _need_arg(args, name, flavor):
    value = getattr(args, name, None)
    if value is None:
        raise UsageError(f"flavour {flavor} needs --{name.replace('_', '-')}")
    return value


def parse_label(cat: Category, text: str):
    if cat.kind == "GL":
        return parse_bipartition(text)
    if cat.kind == "SL2":
        try:
            return int(text)
        except ValueError:
            raise UsageError(f"SL2 labels are integers, got {text!r}") from None
    return parse_partition(text)


def spec_from(args) -> RepSpec:
    f = args.flavor
    if f == "O":
        return RepSpec.O(_need_arg(args, "m", f), args.n or 0)
    if f == "GL":
        return RepSpec.GL(_need_arg(args, "m", f), args.n or 0)
    if f == "P":
        return RepSpec.P(_need_arg(args, "pe_n", f))
    if f == "S":
        return RepSpec.S(_need_arg(args, "t", f))
    raise UsageError(f"the oracle has no flavour {f!r}")


def spec_dims(spec: RepSpec):
    return {"O": (spec.m, spec.n), "GL": (spec.m, spec.n), "P": spec.n, "S": spec.t}[spec.kind]


def brauer_spec_for(delta: int) -> RepSpec:
    """A natural superspace with superdimension δ: k^{δ|0}, k^{0|-δ} or k^{1|1-δ}."""
    if delta >= 0:
        return RepSpec.O(delta, 0)
    if delta % 2 == 0:
        return RepSpec.O(0, -delta // 2)
    return RepSpec.O(1, (1 - delta) // 2)


# ---------------------------------------------------------------------------
# commands


def _base(config: RunConfig) -> dict:
    return {"schema": SCHEMA, "command": config.command, "version": __version__}


def cmd_params(args, config):
    cat = category_from(args)
    t = params(cat, args.j)
    return {**_base(config), **cat.to_json(), "j": args.j, "m": t.m, "n": t.n, "r": t.r,
            "provenance": {"m": "derived", "n": "derived", "r": "derived"}}


def cmd_nu(args, config):
    cat = category_from(args)
    return {**_base(config), **cat.to_json(), "j": args.j, "nu": label_to_json(nu(cat, args.j))}


def cmd_ideal_check(args, config):
    cat = category_from(args)
    label = parse_label(cat, args.label)
    out = {**_base(config), **cat.to_json(), "j": args.j, "label": label_to_json(label),
           "in_ideal": in_ideal(cat, args.j, label)}
    if cat.kind in ("O", "GL", "P"):
        out["hom_unit_dim"] = hom_unit_dim(cat, label)
    if args.mu is not None:
        out["predicted_hom_J"] = predicted_hom_J(cat, args.j, label, parse_label(cat, args.mu))
    return out


def cmd_lambda_set(args, config):
    cat = category_from(args)
    return {**_base(config), **cat.to_json(), "j": args.j,
            "lambda_set": [label_to_json(x) for x in lambda_set(cat, args.j)]}


def cmd_lr(args, config):
    lam, mu = parse_partition(args.lam), parse_partition(args.mu)
    out = {**_base(config), "lambda": lam.to_json(), "mu": mu.to_json()}
    if args.nu is not None:
        out["nu"] = parse_partition(args.nu).to_json()
        out["coefficient"] = lr_coefficient(lam, mu, parse_partition(args.nu))
    else:
        out["product"] = [{"nu": k.to_json(), "coefficient": v} for k, v in sorted(lr_product(lam, mu).items())]
    return out


def cmd_dual(args, config):
    lam = parse_partition(args.lam)
    out = {**_base(config), "lambda": lam.to_json(), "a": args.a, "b": args.b}
    if args.mu is not None:
        out["mu"] = parse_partition(args.mu).to_json()
        out["dual"] = is_ab_dual(lam, parse_partition(args.mu), args.a, args.b)
    else:
        out["dual_partition"] = ab_dual(lam, args.a, args.b).to_json()
    return out


def _sft_job(payload):
    spec, r, budget, cache_dir = payload
    res = phi(spec, r, with_kernel=False, budget_mb=budget, cache=Cache(cache_dir) if cache_dir else None)
    return res.algebra_dim, res.rank


def _sft_rows(spec: RepSpec, ranks: list[int]) -> list:
    if spec.kind != "GL":
        return list(ranks)
    return [(k, total - k) for total in ranks for k in range(total, -1, -1)]


def _run_jobs(payloads, jobs):
    if jobs > 1 and len(payloads) > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            return list(pool.map(_sft_job, payloads))
    return [_sft_job(p) for p in payloads]


def cmd_sft(args, config):
    spec = spec_from(args)
    ranks = parse_range(args.r if args.r is not None else _need_arg(args, "k", "S"))
    if min(ranks) < 0:
        raise UsageError("ranks must be nonnegative")
    return sft_report(spec, ranks, config)


def sft_report(spec: RepSpec, ranks: list[int], config: RunConfig) -> dict:
    rc = critical_rank(spec.kind, spec_dims(spec))
    rows = _sft_rows(spec, ranks)
    results = _run_jobs([(spec, r, config.budget_mb, config.cache_dir) for r in rows], config.jobs)
    table = []
    for r, (dim, rank) in zip(rows, results):
        total = sum(r) if isinstance(r, tuple) else r
        kernel = dim - rank
        predicted_iso = total < rc
        predicted = None
        if total == rc:
            split = r if isinstance(r, tuple) else None
            predicted = kernel_dim_at_threshold(spec.kind, spec_dims(spec), split)
        if predicted_iso:
            agree = kernel == 0
        elif predicted is not None:
            agree = kernel == predicted
        else:
            agree = kernel > 0
        table.append({"r": list(r) if isinstance(r, tuple) else r, "algebra_dim": dim, "phi_rank": rank,
                      "kernel_dim": kernel, "predicted_iso": predicted_iso,
                      "predicted_kernel_at_threshold": predicted, "agree": agree})
    report = {**_base(config), "spec": spec.to_json(), "label": spec.label(), "critical_rank": rc,
              "rows": table, "all_agree": all(row["agree"] for row in table),
              "provenance": {"critical_rank": "paper-threshold", "predicted_kernel_at_threshold": "derived",
                             "algebra_dim": "oracle", "phi_rank": "oracle", "kernel_dim": "oracle"}}
    if not report["all_agree"]:
        raise Disagreement(report)
    return report


def cmd_oracle_rank(args, config):
    spec = spec_from(args)
    r = parse_range(args.r)
    if spec.kind == "GL":
        if args.l is None:
            raise UsageError("GL needs --r K --l L")
        r = (r[0], args.l)
    else:
        r = r[0]
    cache = Cache(config.cache_dir) if config.cache_dir else None
    res = phi(spec, r, with_kernel=False, budget_mb=config.budget_mb, cache=cache)
    out = {**_base(config), "spec": spec.to_json(), "label": spec.label(), "r": list(r) if isinstance(r, tuple) else r,
           "algebra_dim": res.algebra_dim, "phi_rank": res.rank, "kernel_dim": res.kernel_dim,
           "provenance": {"phi_rank": "oracle", "kernel_dim": "oracle"}}
    if args.invariants:
        out["invariant_dim"] = invariant_dim(spec, r, budget_mb=config.budget_mb)
    return out


def _tl_generator(delta: int, l: int, config) -> dict:
    f, alpha = jones_wenzl(l, delta)
    return {**_base(config), "flavor": "TL", "delta": delta, "l": l,
            "f": [{"diagram": d.to_json(), "coeff": str(c)} for d, c in f.terms.items()],
            "alpha": str(alpha), "quasi_idempotent": alpha != 0, "annihilated": annihilated_by_cups_caps(f)}


def cmd_generator(args, config):
    if args.flavor == "TL":
        return _tl_generator(_need_arg(args, "delta", "TL"), _need_arg(args, "l", "TL"), config)
    from .generator import find_generator

    spec = spec_from(args)
    if spec.kind != "O":
        raise UsageError("generator search is implemented for the O flavour")
    rc = critical_rank("O", spec_dims(spec))
    cache = Cache(config.cache_dir) if config.cache_dir else None
    g = find_generator(spec, rc, budget_mb=config.budget_mb, cache=cache)
    out = {**_base(config), "label": spec.label(), "critical_rank": rc, **g.to_json(), "truncations": []}
    targets = parse_range(args.r) if args.r is not None else [rc + 1]
    agree = g.F is not None and g.generated_dim == g.kernel_dim
    for r in targets:
        if g.F is None or r < rc:
            continue
        kern = phi(spec, r, with_kernel=False, budget_mb=config.budget_mb, cache=cache).kernel_dim
        dim = tensor_ideal_truncation(g.F, r).dim
        out["truncations"].append({"r": r, "truncation_dim": dim, "kernel_dim": kern, "agree": dim == kern})
        agree = agree and dim == kern
    out["all_agree"] = agree
    if not agree:
        raise Disagreement(out)
    return out


_NEG_FLAVORS = {"brauer": Flavor.BRAUER, "tl": Flavor.TL, "partition": Flavor.PARTITION, "walled": Flavor.WALLED,
                "periplectic": Flavor.PERIPLECTIC}


def cmd_negligible(args, config):
    flavor = _NEG_FLAVORS[args.flavor.lower()]
    if flavor is Flavor.PERIPLECTIC:
        raise UsageError("the periplectic category has no trace form (odd form, no even braiding); "
                         "negligibles are not defined here")
    value = args.t if flavor is Flavor.PARTITION else args.delta
    if value is None:
        raise UsageError("--t (partition) or --delta is required")
    p = AlgebraParams(flavor, value)
    ks = parse_range(args.k)
    rows = []
    for k in ks:
        row = {"k": k, "radical_dim": negligible_dim(p, k, k)}
        if args.compare_oracle:
            if flavor is Flavor.BRAUER:
                spec = brauer_spec_for(int(value))
            elif flavor is Flavor.PARTITION:
                spec = RepSpec.S(int(value))
            else:
                raise UsageError("oracle comparison covers brauer and partition flavours")
            row["oracle_kernel_dim"] = phi(spec, k, with_kernel=False, budget_mb=config.budget_mb,
                                           cache=Cache(config.cache_dir) if config.cache_dir else None).kernel_dim
            row["oracle_spec"] = spec.label()
            row["agree"] = row["oracle_kernel_dim"] == row["radical_dim"]
        if args.jw_l is not None:
            if flavor is not Flavor.TL:
                raise UsageError("--jw-l applies to the tl flavour")
            f, _ = jones_wenzl(args.jw_l, value)
            if k >= args.jw_l - 1:
                row["jw_closure_dim"] = tensor_ideal_truncation(f, k).dim
                row["agree"] = row["jw_closure_dim"] == row["radical_dim"]
        rows.append(row)
    out = {**_base(config), "flavor": args.flavor.lower(), "delta": str(Fraction(value)), "rows": rows,
           "provenance": {"radical_dim": "derived", "oracle_kernel_dim": "oracle"}}
    if any(row.get("agree") is False for row in rows):
        raise Disagreement(out)
    return out


def cmd_jw(args, config):
    return _tl_generator(args.delta, args.l, config)


# Criterion-style grid used by `report`.
REPORT_GRID = [
    (RepSpec.O(3), [1, 2, 3, 4]), (RepSpec.O(2), [1, 2, 3]), (RepSpec.O(0, 1), [1, 2]),
    (RepSpec.O(1, 1), [1, 2, 3, 4]), (RepSpec.GL(1), [1, 2]), (RepSpec.GL(2), [1, 2, 3]),
    (RepSpec.P(1), [1, 2, 3]), (RepSpec.S(4), [1, 2, 3]),
]


def cmd_report(args, config):
    sections, ok = [], True
    for spec, ranks in REPORT_GRID:
        try:
            sections.append(sft_report(spec, ranks, config))
        except Disagreement as dis:
            sections.append(dis.report)
            ok = False
    out = {**_base(config), "sft": sections, "all_agree": ok}
    if not ok:
        raise Disagreement(out)
    return out


# ---------------------------------------------------------------------------
# output


def _flatten(prefix, value, out):
    if isinstance(value, dict):
        for k in sorted(value):
            _flatten(f"{prefix}.{k}" if prefix else k, value[k], out)
    else:
        out.append((prefix, json.dumps(value, sort_keys=True, ensure_ascii=False)))


def render(report: dict, fmt: str) -> str:
    if fmt == "json":
        return json.dumps(report, sort_keys=True, indent=2, ensure_ascii=False) + "\n"
    if fmt == "csv":
        buf = io.StringIO()
        rows = report.get("rows")
        if isinstance(rows, list) and rows and isinstance(rows[0], dict):
            keys = sorted({k for row in rows for k in row})
            w = csv.DictWriter(buf, fieldnames=keys, lineterminator="\n")
            w.writeheader()
            for row in rows:
                w.writerow({k: json.dumps(row.get(k), ensure_ascii=False) if isinstance(row.get(k), (list, dict))
                            else row.get(k) for k in keys})
        else:
            pairs = []
            _flatten("", report, pairs)
            w = csv.writer(buf, lineterminator="\n")
            w.writerow(["key", "value"])
            w.writerows(pairs)
        return buf.getvalue()
    pairs = []
    _flatten("", report, pairs)
    width = max((len(k) for k, _ in pairs), default=0)
    return "".join(f"{k.ljust(width)}  {v}\n" for k, v in pairs)


# ---------------------------------------------------------------------------
# argument parser


def _add_category(p, flavors=("O", "GL", "P", "S", "SL2")):
    p.add_argument("--flavor", required=True, choices=flavors)
    p.add_argument("--delta", type=int)
    p.add_argument("--t", type=int)
    p.add_argument("--p", type=int)


def _add_spec(p, flavors=("O", "GL", "P", "S")):
    p.add_argument("--flavor", required=True, choices=flavors)
    p.add_argument("--m", type=int, help="even dimension (O, GL)")
    p.add_argument("--n", type=int, help="O: half the odd dimension; GL: odd dimension")
    p.add_argument("--pe-n", dest="pe_n", type=int, help="periplectic n (V = k^{n|n})")
    p.add_argument("--t", type=int, help="permutation module dimension (S)")


COMMANDS = {}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="tensorideals", description=__doc__.splitlines()[0])
    # global flags are accepted before or after the subcommand
    common = argparse.ArgumentParser(add_help=False)
    for target, default in ((parser, None), (common, argparse.SUPPRESS)):
        pick = lambda value: value if default is None else default
        target.add_argument("--cache-dir", default=pick(None), help="directory for the persistent result cache")
        target.add_argument("--format", default=pick("json"), choices=("json", "csv", "pretty"))
        target.add_argument("--budget-mb", type=float, default=pick(DEFAULT_BUDGET_MB))
        target.add_argument("--jobs", type=int, default=pick(1))
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name, fn, help_text):
        p = sub.add_parser(name, help=help_text, parents=[common])
        COMMANDS[name] = fn
        return p

    p = add("params", cmd_params, "the (m_j, n_j, r_j) table")
    _add_category(p, ("O", "GL"))
    p.add_argument("--j", type=int, required=True)

    p = add("nu", cmd_nu, "the label ν^(j)")
    _add_category(p, ("O", "GL", "P"))
    p.add_argument("--j", type=int, required=True)

    p = add("ideal-check", cmd_ideal_check, "membership of a label in the j-th ideal")
    _add_category(p)
    p.add_argument("--j", type=int, required=True)
    p.add_argument("--lambda", dest="label", required=True, help="e.g. 4,4 or 1,1|1 for GL or 3 for SL2")
    p.add_argument("--mu", default=None, help="second label for predicted_hom_J")

    p = add("lambda-set", cmd_lambda_set, "boundary generators of the j-th ideal")
    _add_category(p, ("O", "GL", "P"))
    p.add_argument("--j", type=int, required=True)

    p = add("lr", cmd_lr, "Littlewood-Richardson coefficients")
    p.add_argument("--lam", required=True)
    p.add_argument("--mu", required=True)
    p.add_argument("--nu", default=None)

    p = add("dual", cmd_dual, "a x b duality of partitions")
    p.add_argument("--lam", required=True)
    p.add_argument("--mu", default=None)
    p.add_argument("--a", type=int, required=True)
    p.add_argument("--b", type=int, required=True)

    p = add("sft", cmd_sft, "φ ranks against the predicted thresholds")
    _add_spec(p)
    p.add_argument("--r", default=None, help="rank range, e.g. 1..4 (GL: total k+l, all splits)")
    p.add_argument("--k", default=None, help="alias of --r")

    p = add("generator", cmd_generator, "kernel generator at the critical rank")
    p.add_argument("--flavor", required=True, choices=("O", "TL"))
    p.add_argument("--m", type=int)
    p.add_argument("--n", type=int)
    p.add_argument("--delta", type=int)
    p.add_argument("--l", type=int)
    p.add_argument("--r", default=None, help="ranks for the truncation check (default r_c + 1)")

    p = add("negligible", cmd_negligible, "Gram-radical dimensions")
    p.add_argument("--flavor", required=True, choices=sorted(_NEG_FLAVORS))
    p.add_argument("--delta", type=int)
    p.add_argument("--t", type=int)
    p.add_argument("--k", required=True, help="rank range")
    p.add_argument("--compare-oracle", action="store_true")
    p.add_argument("--jw-l", dest="jw_l", type=int, default=None)

    p = add("jw", cmd_jw, "annihilated quasi-idempotent of Temperley-Lieb")
    p.add_argument("--l", type=int, required=True)
    p.add_argument("--delta", type=int, required=True)

    p = add("oracle-rank", cmd_oracle_rank, "rank of φ at one rank")
    _add_spec(p)
    p.add_argument("--r", required=True)
    p.add_argument("--l", type=int, default=None, help="GL: second degree")
    p.add_argument("--invariants", action="store_true")

    add("report", cmd_report, "the threshold grid in one document")
    return parser


def _config_from(args) -> RunConfig:
    skip = {"command", "cache_dir", "format", "budget_mb", "jobs", "flavor"}
    numbers = {k: v for k, v in sorted(vars(args).items()) if k not in skip and v is not None}
    ranks = parse_range(args.r) if isinstance(getattr(args, "r", None), str) else []
    return RunConfig(args.command, getattr(args, "flavor", None), numbers, ranks, args.cache_dir,
                     args.format, args.budget_mb, args.jobs)


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        config = _config_from(args)
        if config.jobs < 1:
            raise UsageError("--jobs must be positive")
        report = COMMANDS[args.command](args, config)
        code = EXIT_OK
    except Disagreement as dis:
        report, code = dis.report, EXIT_DISAGREE
    except BudgetExceeded as exc:
        report = {"schema": SCHEMA, "command": args.command, "error": "budget", "needed_mb": round(exc.needed_mb, 1),
                  "budget_mb": exc.budget_mb}
        code = EXIT_BUDGET
    except (UsageError, ClassifierError, AlgebraError, OracleError, DiagramError, ValueError) as exc:
        print(f"tensorideals: error: {exc}", file=sys.stderr)
        return EXIT_INVALID
    except CertificationError as exc:
        print(f"tensorideals: certification failed: {exc}", file=sys.stderr)
        return EXIT_DISAGREE
    sys.stdout.write(render(report, args.format))
    return code


if __name__ == "__main__":
    sys.exit(main())
