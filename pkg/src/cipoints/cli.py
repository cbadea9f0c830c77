"""Command-line driver: count, verify, audit, and sweep over the catalog.

Commands ingest a variety (from the built-in catalog or a spec file), run
the counting and bound pipelines, and write self-describing reports: every
output embeds the formula names, exact inputs and outputs, the seed, the
budgets, and the toolkit version.  Reports carry no timestamps, so a rerun
with the same arguments is byte-identical; the worker count lives only in
the metadata document and never changes a numeric row.

Exit codes: 0 success, 1 hard bound violation, 2 validation error,
3 budget exceeded.
"""

from __future__ import annotations

import csv
import json
import sys
from fractions import Fraction
from pathlib import Path
from typing import Optional, Sequence

import click

from . import __version__, parallel
from .bounds import (
    BoundCheck,
    BoundContext,
    KIND_EXISTENCE,
    SEVERITY_HARD,
    SEVERITY_SOFT,
    VERDICT_HOLDS,
    VERDICT_NOT_APPLICABLE,
    VERDICT_VIOLATED,
    betti_b1,
    betti_b2,
    check,
    comparison_bounds,
    deligne_sqrt_bound,
    eta,
    existence_thresholds,
    main_estimate,
    projective_upper_bound,
    serre_bound,
    singular_fiber_bound,
)
from .catalog import CATALOG, CatalogEntry, entry as catalog_entry
from .counting import (
    LinearProjection,
    VarietySpec,
    audit_projection,
    count_points,
    count_smooth_points,
    fiber_decomposition,
    nonsingular_section_search,
    singular_fiber_audit,
)
from .errors import BoundViolationError, BudgetExceededError, ValidationError
from .gf import FieldSpec, field_of_order, make_field
from .mpoly import parse_poly
from .points import check_budget, p_r
from .valueset import (
    average_direct,
    average_via_chi,
    chi_report,
    cohen_average,
    e_bound_check,
    fixed_tuples,
    make_family,
    mu,
)

DEFAULT_Q_GRID = (3, 4, 5, 7, 8, 9, 11, 13)

AUDIT_NOTE = (
    "one-sided audit: every listed fiber is certified singular by a witness; "
    "absence from the list is not a smoothness certificate; draws whose "
    "center meets the singular locus are reseeded before auditing"
)


def parse_field_arg(text: str) -> FieldSpec:
    """Accept 'p^k' or a plain prime-power cardinality."""
    text = text.strip()
    try:
        if "^" in text:
            p_str, k_str = text.split("^", 1)
            return make_field(int(p_str), int(k_str))
        return field_of_order(int(text))
    except ValueError:
        raise ValidationError(f"cannot parse field {text!r}: expected p^k or q")


# -- spec files ---------------------------------------------------------------------


def parse_spec_file(path: str) -> tuple[VarietySpec, Optional[LinearProjection]]:
    """Read a variety from a key = value text document.

    Recognized keys: field (p^k or q), n, r, s (integer or 'smooth'),
    generator (repeatable, polynomial text), projection (repeatable; rows of
    element codes, ';' between rows).  '#' starts a comment.
    """
    raw: dict[str, str] = {}
    generators: list[str] = []
    projection_rows: list[list[int]] = []
    for lineno, line in enumerate(Path(path).read_text().splitlines(), start=1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ValidationError(f"{path}:{lineno}: expected key = value")
        key, value = (part.strip() for part in line.split("=", 1))
        if key == "generator":
            generators.append(value)
        elif key == "projection":
            for row_text in value.split(";"):
                try:
                    projection_rows.append([int(c) for c in row_text.split()])
                except ValueError:
                    raise ValidationError(
                        f"{path}:{lineno}: projection entries must be element codes"
                    )
        elif key in {"field", "n", "r", "s"}:
            if key in raw:
                raise ValidationError(f"{path}:{lineno}: duplicate key {key}")
            raw[key] = value
        else:
            raise ValidationError(f"{path}:{lineno}: unknown key {key!r}")

    for required in ("field", "n", "r"):
        if required not in raw:
            raise ValidationError(f"{path}: missing required key {required!r}")
    if not generators:
        raise ValidationError(f"{path}: no generator lines")
    field = parse_field_arg(raw["field"])
    try:
        n = int(raw["n"])
        r = int(raw["r"])
    except ValueError:
        raise ValidationError(f"{path}: n and r must be integers")
    s_text = raw.get("s", "smooth")
    singular_bound = None if s_text == "smooth" else int(s_text)
    polys = tuple(parse_poly(text, field, (n + 1,)) for text in generators)
    V = VarietySpec(
        field=field,
        ambient_dim=n,
        generators=polys,
        declared_dim=r,
        singular_bound=singular_bound,
    )
    proj = None
    if projection_rows:
        for row in projection_rows:
            for code in row:
                if not 0 <= code < field.q:
                    raise ValidationError(
                        f"{path}: projection code {code} outside 0..{field.q - 1}"
                    )
        proj = LinearProjection(
            field=field,
            rows=tuple(
                tuple(field.from_index(c) for c in row) for row in projection_rows
            ),
        )
    return V, proj


def load_variety(
    spec_path: Optional[str], catalog_name: Optional[str], field_text: Optional[str]
) -> tuple[str, VarietySpec, Optional[LinearProjection]]:
    """Resolve the --spec / --catalog / --field option triple."""
    if spec_path is not None and catalog_name is not None:
        raise ValidationError("--spec and --catalog are mutually exclusive")
    if spec_path is not None:
        V, proj = parse_spec_file(spec_path)
        if field_text is not None:
            raise ValidationError("--field conflicts with the spec file's field")
        return Path(spec_path).stem, V, proj
    if catalog_name is None:
        raise ValidationError("one of --spec or --catalog is required")
    if field_text is None:
        raise ValidationError("--catalog needs --field")
    field = parse_field_arg(field_text)
    return catalog_name, catalog_entry(catalog_name).build(field.q), None


# -- report plumbing ----------------------------------------------------------------


Rows = list[dict]


def _write_csv(path: Path, columns: Sequence[str], rows: Rows) -> None:
    with path.open("w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(columns)
        for row in rows:
            writer.writerow([row[c] for c in columns])


def emit_report(
    name: str,
    metadata: dict,
    sections: dict[str, tuple[Sequence[str], Rows]],
    out_dir: Optional[str],
    fmt: str,
) -> None:
    """Write one report: CSV per section plus a metadata sidecar, or a single
    JSON document; no --out prints the JSON document to stdout."""
    doc = {
        "metadata": metadata,
        "results": {sec: rows for sec, (_cols, rows) in sections.items()},
    }
    if out_dir is None:
        click.echo(json.dumps(doc, indent=2, sort_keys=True))
        return
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    if fmt == "json":
        (out / f"{name}.json").write_text(
            json.dumps(doc, indent=2, sort_keys=True) + "\n", encoding="utf-8"
        )
        return
    for sec, (columns, rows) in sections.items():
        suffix = f"_{sec}" if len(sections) > 1 else ""
        _write_csv(out / f"{name}{suffix}.csv", columns, rows)
    (out / f"{name}_meta.json").write_text(
        json.dumps(metadata, indent=2, sort_keys=True) + "\n", encoding="utf-8"
    )


def base_metadata(command: str, **extra) -> dict:
    meta = {
        "command": command,
        "version": __version__,
        "workers": parallel.get_workers(),
    }
    meta.update(extra)
    return meta


def _fmt(value) -> str:
    if isinstance(value, Fraction):
        return str(value)
    return str(value)


def _s_label(V: VarietySpec) -> str:
    return "smooth" if V.singular_bound is None else str(V.singular_bound)


def _ensure_budget(V: VarietySpec, budget: Optional[int]) -> None:
    if budget is not None:
        check_budget(
            p_r(V.field.q, V.ambient_dim),
            budget,
            f"P^{V.ambient_dim}(F_{V.field.q})",
        )


# -- check assembly -----------------------------------------------------------------


def _check_row(base: dict, c: BoundCheck) -> dict:
    return {
        **base,
        "check": c.name,
        "measured": _fmt(c.measured),
        "bound": _fmt(c.bound),
        "verdict": c.verdict,
        "severity": c.severity,
        "detail": c.detail,
    }


CHECK_COLUMNS = (
    "entry",
    "q",
    "n",
    "r",
    "s",
    "check",
    "measured",
    "bound",
    "verdict",
    "severity",
    "detail",
)

COUNT_COLUMNS = ("entry", "q", "n", "r", "s", "delta", "total", "smooth", "singular")


def variety_check_rows(
    label: str,
    V: VarietySpec,
    budget: Optional[int],
    expected_total: Optional[int] = None,
    expected_singular: Optional[int] = None,
) -> tuple[dict, Rows]:
    """Count one variety and evaluate every applicable bound against it."""
    _ensure_budget(V, budget)
    q = V.field.q
    n = V.ambient_dim
    r = V.declared_dim
    total = count_points(V)
    smooth, singular = count_smooth_points(V)
    base = {"entry": label, "q": q, "n": n, "r": r, "s": _s_label(V)}
    count_row = {
        **base,
        "delta": V.degree,
        "total": total,
        "smooth": smooth,
        "singular": singular,
    }
    rows: Rows = []

    def add(c: BoundCheck) -> None:
        rows.append(_check_row(base, c))

    def equality(name: str, measured: int, expected: int) -> None:
        verdict = VERDICT_HOLDS if measured == expected else VERDICT_VIOLATED
        rows.append(
            {
                **base,
                "check": name,
                "measured": str(measured),
                "bound": str(expected),
                "verdict": verdict,
                "severity": SEVERITY_HARD,
                "detail": f"closed form predicts {expected}, enumeration found {measured}",
            }
        )

    if expected_total is not None:
        equality("ground-truth-total", total, expected_total)
    if expected_singular is not None:
        equality("ground-truth-singular", singular, expected_singular)

    add(check("projective-upper", total, projective_upper_bound(V.degree, r, q)))
    dvec = V.multidegree
    if len(dvec) == 1:
        add(check("serre", total, serre_bound(dvec[0], n, q)))
        if dvec[0] < q:
            add(check("eta", total, eta(dvec, (n,), q)))
    if V.singular_bound is None and r in (1, 2):
        b = betti_b1(n, dvec) if r == 1 else betti_b2(n, dvec)
        add(
            check(
                "deligne",
                abs(total - p_r(q, r)),
                deligne_sqrt_bound(q, r, b),
            )
        )

    if r >= 2 and V.resolve_s() in (r - 2, r - 3):
        ctx = BoundContext.from_variety(V)
        deviation = abs(total - p_r(q, r))
        smooth_deviation = abs(smooth - p_r(q, r))
        report = main_estimate(ctx, smooth=False)
        add(check("estimate-refined", deviation, report.refined))
        add(check("estimate-simplified", deviation, report.simplified))
        smooth_report = main_estimate(ctx, smooth=True)
        add(check("estimate-refined-smooth", smooth_deviation, smooth_report.refined))
        add(
            check(
                "estimate-simplified-smooth",
                smooth_deviation,
                smooth_report.simplified,
            )
        )
        if smooth_report.simplified_alternate is not None:
            add(
                check(
                    "estimate-simplified-smooth-alt",
                    smooth_deviation,
                    smooth_report.simplified_alternate,
                    severity=SEVERITY_SOFT,
                )
            )
        for t in existence_thresholds(ctx).entries:
            if t.kind != KIND_EXISTENCE:
                continue
            name = f"existence-{t.name}"
            if t.guaranteed(q):
                verdict = VERDICT_HOLDS if smooth >= 1 else VERDICT_VIOLATED
                rows.append(
                    {
                        **base,
                        "check": name,
                        "measured": str(smooth),
                        "bound": ">= 1",
                        "verdict": verdict,
                        "severity": SEVERITY_HARD,
                        "detail": f"q = {q} > threshold {t.threshold}, "
                        f"so a smooth point is guaranteed; found {smooth}",
                    }
                )
            else:
                reason = (
                    t.reason
                    if not t.applicable
                    else f"q = {q} <= threshold {t.threshold}: no guarantee claimed"
                )
                rows.append(
                    {
                        **base,
                        "check": name,
                        "measured": str(smooth),
                        "bound": str(t.threshold) if t.applicable else "",
                        "verdict": VERDICT_NOT_APPLICABLE,
                        "severity": SEVERITY_HARD,
                        "detail": reason,
                    }
                )
    return count_row, rows


def _hard_violations(rows: Rows) -> list[str]:
    return [
        f"{row['entry']} q={row['q']} {row['check']}: {row['measured']} vs {row['bound']}"
        for row in rows
        if row["verdict"] == VERDICT_VIOLATED and row["severity"] == SEVERITY_HARD
    ]


# -- commands -----------------------------------------------------------------------


@click.group()
@click.version_option(version=__version__, prog_name="cipoints")
@click.option("--workers", type=int, default=1, show_default=True, help="Worker count; never changes numeric output.")
def cli(workers: int) -> None:
    """Exact point counts and bound verification over finite fields."""
    parallel.set_workers(workers)


@cli.command()
@click.option("--spec", "spec_path", type=click.Path(exists=True, dir_okay=False), help="Variety spec file.")
@click.option("--catalog", "catalog_name", help="Built-in catalog entry name.")
@click.option("--field", "field_text", help="Field as p^k or cardinality (with --catalog).")
@click.option("--budget", type=int, default=None, help="Enumeration budget in points.")
@click.option("--out", "out_dir", type=click.Path(file_okay=False), default=None)
@click.option("--format", "fmt", type=click.Choice(["csv", "json"]), default="json", show_default=True)
def count(spec_path, catalog_name, field_text, budget, out_dir, fmt):
    """Count points of one variety: total, smooth, singular, and fibers."""
    label, V, proj = load_variety(spec_path, catalog_name, field_text)
    _ensure_budget(V, budget)
    total = count_points(V)
    smooth, singular = count_smooth_points(V)
    count_row = {
        "entry": label,
        "q": V.field.q,
        "n": V.ambient_dim,
        "r": V.declared_dim,
        "s": _s_label(V),
        "delta": V.degree,
        "total": total,
        "smooth": smooth,
        "singular": singular,
    }
    sections = {"counts": (COUNT_COLUMNS, [count_row])}
    if proj is not None:
        report = fiber_decomposition(V, proj)
        fiber_rows = [
            {"fiber": str(y), "count": c} for y, c in report.fiber_counts
        ]
        fiber_rows.sort(key=lambda row: row["fiber"])
        sections["fibers"] = (("fiber", "count"), fiber_rows)
        sections["fiber-identity"] = (
            ("exceptional", "total", "identity"),
            [
                {
                    "exceptional": report.exceptional,
                    "total": report.total,
                    "identity": "holds",
                }
            ],
        )
    metadata = base_metadata(
        "count",
        source=label,
        field=f"{V.field.p}^{V.field.k}",
        budget=budget,
        formulas=["point-count", "jacobian-rank-classification", "fiber-identity"],
    )
    emit_report("count", metadata, sections, out_dir, fmt)


@cli.command()
@click.option("--catalog", "catalog_name", default=None, help="Restrict to one catalog entry.")
@click.option("--spec", "spec_path", type=click.Path(exists=True, dir_okay=False), default=None, help="Verify a user spec instead of the catalog.")
@click.option("--field", "field_text", default=None, help="Restrict to one field.")
@click.option("--budget", type=int, default=None)
@click.option("--out", "out_dir", type=click.Path(file_okay=False), default=None)
@click.option("--format", "fmt", type=click.Choice(["csv", "json"]), default="csv", show_default=True)
def verify(catalog_name, spec_path, field_text, budget, out_dir, fmt):
    """Check every applicable bound over the catalog (or one spec) and a
    q grid; exit 1 if any hard bound is violated."""
    count_rows: Rows = []
    check_rows: Rows = []
    if spec_path is not None:
        label, V, _proj = load_variety(spec_path, None, field_text)
        qs = [V.field.q]
        count_row, rows = variety_check_rows(label, V, budget)
        count_rows.append(count_row)
        check_rows.extend(rows)
        source = label
    else:
        entries = CATALOG if catalog_name is None else (catalog_entry(catalog_name),)
        qs = list(DEFAULT_Q_GRID) if field_text is None else [parse_field_arg(field_text).q]
        for e in entries:
            for q in qs:
                if not e.supports(q):
                    check_rows.append(
                        {
                            "entry": e.name,
                            "q": q,
                            "n": e.ambient_dim,
                            "r": e.declared_dim,
                            "s": "smooth" if e.singular_bound is None else str(e.singular_bound),
                            "check": "support",
                            "measured": "",
                            "bound": "",
                            "verdict": VERDICT_NOT_APPLICABLE,
                            "severity": SEVERITY_HARD,
                            "detail": e.support_note,
                        }
                    )
                    continue
                V = e.build(q)
                count_row, rows = variety_check_rows(
                    e.name,
                    V,
                    budget,
                    expected_total=e.point_count(q),
                    expected_singular=e.singular_count(q),
                )
                count_rows.append(count_row)
                check_rows.extend(rows)
        source = catalog_name or "catalog"
    metadata = base_metadata(
        "verify",
        source=source,
        q_grid=qs,
        budget=budget,
        formulas=[
            "projective-upper",
            "serre",
            "eta",
            "deligne",
            "main-estimate",
            "existence-thresholds",
        ],
    )
    sections = {
        "counts": (COUNT_COLUMNS, count_rows),
        "checks": (CHECK_COLUMNS, check_rows),
    }
    emit_report("verify", metadata, sections, out_dir, fmt)
    violations = _hard_violations(check_rows)
    if violations:
        raise BoundViolationError(
            f"{len(violations)} hard bound violation(s): " + "; ".join(violations)
        )


@cli.command()
@click.option("--catalog", "catalog_name", default=None)
@click.option("--spec", "spec_path", type=click.Path(exists=True, dir_okay=False), default=None)
@click.option("--field", "field_text", default=None)
@click.option("--out", "out_dir", type=click.Path(file_okay=False), default=None)
@click.option("--format", "fmt", type=click.Choice(["csv", "json"]), default="json", show_default=True)
def bounds(catalog_name, spec_path, field_text, out_dir, fmt):
    """Evaluate constants, estimates, and thresholds without any counting."""
    label, V, _proj = load_variety(spec_path, catalog_name, field_text)
    q = V.field.q
    r = V.declared_dim
    base = {"entry": label, "q": q}
    constants: Rows = [
        {**base, "name": "delta", "value": str(V.degree)},
        {**base, "name": "degree-excess", "value": str(V.degree_excess)},
        {**base, "name": "projective-upper", "value": str(projective_upper_bound(V.degree, r, q))},
    ]
    estimate_rows: Rows = []
    threshold_rows: Rows = []
    if r >= 2 and V.resolve_s() <= r - 2:
        ctx = BoundContext.from_variety(V)
        constants.append(
            {**base, "name": "singular-fiber-bound", "value": str(singular_fiber_bound(ctx))}
        )
        if ctx.s in (r - 2, r - 3):
            for smooth_flag in (False, True):
                report = main_estimate(ctx, smooth=smooth_flag)
                kind = "smooth" if smooth_flag else "total"
                estimate_rows.append(
                    {
                        **base,
                        "target": kind,
                        "regime": report.regime,
                        "betti-leading": str(report.betti_leading),
                        "refined": str(report.refined),
                        "simplified": str(report.simplified),
                        "alternate": str(report.simplified_alternate or ""),
                    }
                )
            try:
                comparison = comparison_bounds(ctx)
                constants.append(
                    {**base, "name": "comparison-exponential", "value": str(comparison.exponential)}
                )
                constants.append(
                    {
                        **base,
                        "name": "comparison-normal",
                        "value": str(comparison.normal)
                        + f" (valid for q > {comparison.normal_q_threshold})",
                    }
                )
            except ValidationError as exc:
                constants.append(
                    {**base, "name": "comparison-bounds", "value": f"unavailable: {exc}"}
                )
        for t in existence_thresholds(ctx).entries:
            threshold_rows.append(
                {
                    **base,
                    "name": t.name,
                    "kind": t.kind,
                    "applicable": str(t.applicable),
                    "threshold": "" if t.threshold is None else str(t.threshold),
                    "guaranteed-at-q": str(t.guaranteed(q)),
                    "reason": t.reason,
                }
            )
    metadata = base_metadata(
        "bounds",
        source=label,
        field=f"{V.field.p}^{V.field.k}",
        formulas=["main-estimate", "comparison-bounds", "existence-thresholds"],
    )
    sections = {
        "constants": (("entry", "q", "name", "value"), constants),
        "estimates": (
            ("entry", "q", "target", "regime", "betti-leading", "refined", "simplified", "alternate"),
            estimate_rows,
        ),
        "thresholds": (
            ("entry", "q", "name", "kind", "applicable", "threshold", "guaranteed-at-q", "reason"),
            threshold_rows,
        ),
    }
    emit_report("bounds", metadata, sections, out_dir, fmt)


@cli.command("bertini-audit")
@click.option("--catalog", "catalog_name", default=None)
@click.option("--spec", "spec_path", type=click.Path(exists=True, dir_okay=False), default=None)
@click.option("--field", "field_text", default=None)
@click.option("--seeds", "seed_count", type=int, default=20, show_default=True, help="Projections to audit.")
@click.option("--seed", "seed_base", type=int, default=0, show_default=True, help="First projection seed.")
@click.option("--ext-level", type=int, default=2, show_default=True, help="Deepest extension level scanned.")
@click.option("--search/--no-search", default=False, help="Also search for a fiber the audit cannot fault.")
@click.option("--budget", type=int, default=None)
@click.option("--out", "out_dir", type=click.Path(file_okay=False), default=None)
@click.option("--format", "fmt", type=click.Choice(["csv", "json"]), default="csv", show_default=True)
def bertini_audit(
    catalog_name, spec_path, field_text, seed_count, seed_base, ext_level, search, budget, out_dir, fmt
):
    """Audit singular fibers of seeded projections; sizes must respect the
    degree bound.  Exit 1 on a violated size bound."""
    label, V, _proj = load_variety(spec_path, catalog_name, field_text)
    _ensure_budget(V, budget)
    s = V.resolve_s()
    ctx = BoundContext.from_variety(V)
    bound = singular_fiber_bound(ctx)
    q = V.field.q
    base = {"entry": label, "q": q, "s": s, "ext_level": ext_level}
    audit_rows: Rows = []
    for seed in range(seed_base, seed_base + seed_count):
        proj = audit_projection(V, s, seed, ext_level)
        audit = singular_fiber_audit(V, proj, ext_level)
        c = check("audit-size", audit.size, bound)
        audit_rows.append(
            {
                **base,
                "seed": seed,
                "certified": audit.size,
                "bound": bound,
                "verdict": c.verdict,
                "severity": c.severity,
                "detail": c.detail,
            }
        )
    sections = {
        "audits": (
            ("entry", "q", "s", "ext_level", "seed", "certified", "bound", "verdict", "severity", "detail"),
            audit_rows,
        )
    }
    if search:
        report = nonsingular_section_search(
            V, range(seed_base, seed_base + seed_count), ext_level
        )
        sections["search"] = (
            ("entry", "q", "found", "seed", "fiber", "fiber-count", "audit-level"),
            [
                {
                    "entry": label,
                    "q": q,
                    "found": str(report.found),
                    "seed": "" if report.seed is None else str(report.seed),
                    "fiber": "" if report.section_point is None else str(report.section_point),
                    "fiber-count": report.fiber_count,
                    "audit-level": report.audit_level,
                }
            ],
        )
    metadata = base_metadata(
        "bertini-audit",
        source=label,
        field=f"{V.field.p}^{V.field.k}",
        seed=seed_base,
        seeds=seed_count,
        ext_level=ext_level,
        budget=budget,
        note=AUDIT_NOTE,
        formulas=["singular-fiber-audit", "singular-fiber-bound"],
    )
    emit_report("bertini_audit", metadata, sections, out_dir, fmt)
    violated = [r for r in audit_rows if r["verdict"] == VERDICT_VIOLATED]
    if violated:
        raise BoundViolationError(
            f"{len(violated)} audit size(s) above the degree bound"
        )


@cli.command()
@click.option("--field", "field_text", required=True)
@click.option("-d", "--degree", type=int, required=True)
@click.option("-s", "--fixed-count", "s", type=int, required=True)
@click.option("--tuples", "tuple_limit", type=int, default=25, show_default=True)
@click.option("--seed", type=int, default=0, show_default=True)
@click.option("--budget", type=int, default=None)
@click.option("--out", "out_dir", type=click.Path(file_okay=False), default=None)
@click.option("--format", "fmt", type=click.Choice(["csv", "json"]), default="csv", show_default=True)
def valueset(field_text, degree, s, tuple_limit, seed, budget, out_dir, fmt):
    """Sweep value-set families: exact averages two ways, the deviation
    check, and per-r allowable-subset bounds."""
    field = parse_field_arg(field_text)
    q = field.q
    d = degree
    family_rows: Rows = []
    chi_rows: Rows = []
    mu_q = mu(d) * q
    for fixed in fixed_tuples(field, d, s, limit=tuple_limit, seed=seed):
        fam = make_family(field, d, s, fixed)
        label = ":".join(str(field.index(a)) for a in fixed)
        average = average_direct(fam, budget)
        via_chi = average_via_chi(fam, budget)
        identity = VERDICT_HOLDS if average == via_chi else VERDICT_VIOLATED
        echeck = e_bound_check(fam, average=average)
        row = {
            "d": d,
            "s": s,
            "q": q,
            "fixed": label,
            "members": fam.size,
            "average": _fmt(average),
            "average-via-chi": _fmt(via_chi),
            "identity": identity,
            "mu-times-q": _fmt(mu_q),
            "gap": _fmt(abs(average - mu_q)),
            "e-lower": _fmt(echeck.lower),
            "e-upper": _fmt(echeck.upper),
            "e-verdict": echeck.verdict,
        }
        if s == 0:
            row["cohen"] = (
                VERDICT_HOLDS if average == cohen_average(d, q) else VERDICT_VIOLATED
            )
        else:
            row["cohen"] = ""
        family_rows.append(row)
        report = chi_report(fam, budget=budget)
        for chi_row in report.rows:
            chi_rows.append(
                {
                    "d": d,
                    "s": s,
                    "q": q,
                    "fixed": label,
                    "r": chi_row.r,
                    "chi": chi_row.chi,
                    "band-excess": chi_row.excess,
                    "band-degree": chi_row.degree,
                    "measured": _fmt(chi_row.check.measured),
                    "bound": _fmt(chi_row.check.bound),
                    "verdict": chi_row.check.verdict,
                    "severity": chi_row.check.severity,
                }
            )
    metadata = base_metadata(
        "valueset",
        field=f"{field.p}^{field.k}",
        d=d,
        s=s,
        seed=seed,
        tuples=tuple_limit,
        budget=budget,
        formulas=["value-set-average-identity", "chi-bound", "deviation-bound"],
    )
    sections = {
        "families": (
            (
                "d", "s", "q", "fixed", "members", "average", "average-via-chi",
                "identity", "cohen", "mu-times-q", "gap", "e-lower", "e-upper", "e-verdict",
            ),
            family_rows,
        ),
        "chi": (
            (
                "d", "s", "q", "fixed", "r", "chi", "band-excess", "band-degree",
                "measured", "bound", "verdict", "severity",
            ),
            chi_rows,
        ),
    }
    emit_report("valueset", metadata, sections, out_dir, fmt)
    broken = [r for r in family_rows if r["identity"] == VERDICT_VIOLATED] + [
        r for r in family_rows if r["cohen"] == VERDICT_VIOLATED
    ]
    if broken:
        raise BoundViolationError(
            f"exact identity failed on {len(broken)} famil(ies)"
        )


@cli.group()
def catalog() -> None:
    """Built-in varieties with known ground truths."""


@catalog.command("list")
@click.option("--out", "out_dir", type=click.Path(file_okay=False), default=None)
@click.option("--format", "fmt", type=click.Choice(["csv", "json"]), default="csv", show_default=True)
def catalog_list(out_dir, fmt):
    """List the catalog: shapes, declared bounds, and field support."""
    rows = [
        {
            "name": e.name,
            "ambient": e.ambient_dim,
            "r": e.declared_dim,
            "s": "smooth" if e.singular_bound is None else str(e.singular_bound),
            "multidegree": ":".join(str(d) for d in e.multidegree),
            "closed-forms": "total,singular" if e.point_form else "singular",
            "supports": e.support_note,
            "summary": e.summary,
        }
        for e in CATALOG
    ]
    columns = ("name", "ambient", "r", "s", "multidegree", "closed-forms", "supports", "summary")
    if out_dir is None and fmt == "csv":
        for row in rows:
            click.echo(
                f"{row['name']:22} P^{row['ambient']} r={row['r']} s={row['s']:6} "
                f"d={row['multidegree']:4} {row['summary']}"
            )
        return
    metadata = base_metadata("catalog-list")
    emit_report("catalog", metadata, {"entries": (columns, rows)}, out_dir, fmt)


def main() -> None:
    try:
        cli(standalone_mode=False)
    except click.exceptions.Exit as exc:
        sys.exit(exc.exit_code)
    except click.exceptions.Abort:
        sys.exit(130)
    except click.UsageError as exc:
        exc.show()
        sys.exit(2)
    except click.ClickException as exc:
        exc.show()
        sys.exit(exc.exit_code)
    except BoundViolationError as exc:
        click.echo(f"bound violation: {exc}", err=True)
        sys.exit(1)
    except ValidationError as exc:
        click.echo(f"validation error: {exc}", err=True)
        sys.exit(2)
    except BudgetExceededError as exc:
        click.echo(f"budget exceeded: {exc}", err=True)
        sys.exit(3)


if __name__ == "__main__":
    main()
