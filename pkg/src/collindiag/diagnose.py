"""Full analysis, essential/non-essential verdict and report rendering."""
from __future__ import annotations

import enum
import json
import math
from dataclasses import dataclass, field
from typing import Any, Mapping

from .dataset import ColumnRole, DesignMatrix
from .errors import DataError, NotApplicableError
from .measures import (
    BelsleyTable,
    CorrelationReport,
    SlmReport,
    StewartTable,
    VifTable,
    _decompose,
    belsley,
    coefficient_of_variation,
    condition_number,
    correlation_report,
    slm_diagnostics,
    stewart_table,
    vif_table,
)
from .numerics import OlsFit, ols
from .thresholds import ThresholdConfig

NO_PROBLEM_LINE = "No problematic multicollinearity detected"


class VerdictKind(str, enum.Enum):
    NONE = "none"
    ESSENTIAL = "essential"
    NON_ESSENTIAL = "non_essential"
    BOTH = "both"


@dataclass(frozen=True)
class Verdict:
    kind: VerdictKind
    implicated: tuple[tuple[str, ...], ...] = ()
    evidence: tuple[tuple[str, float, float], ...] = ()


@dataclass(frozen=True)
class NotApplicable:
    reason: str


@dataclass(frozen=True)
class CvEntry:
    name: str
    cv: float | None = None
    reason: str = ""


@dataclass(frozen=True)
class DiagnosticsReport:
    dataset_id: str
    design: DesignMatrix
    thresholds: ThresholdConfig
    include_dummies: bool
    condition_number_with_intercept: float | NotApplicable
    condition_number_without_intercept: float | NotApplicable
    correlation: CorrelationReport | NotApplicable
    vif: VifTable | NotApplicable
    stewart: StewartTable | NotApplicable
    belsley: BelsleyTable | NotApplicable
    cv: tuple[CvEntry, ...] | NotApplicable
    ols: OlsFit | NotApplicable
    slm: SlmReport | NotApplicable
    verdict: Verdict = field(default_factory=lambda: Verdict(VerdictKind.NONE))

    def to_dict(self) -> dict[str, Any]:
        return report_to_dict(self)


def _try(fn, *args, **kwargs):
    try:
        return fn(*args, **kwargs)
    except NotApplicableError as exc:
        return NotApplicable(str(exc))


def _cv_entries(x: DesignMatrix):
    entries = []
    for name, role in zip(x.names, x.roles):
        if role is not ColumnRole.QUANTITATIVE:
            continue
        try:
            entries.append(CvEntry(name, coefficient_of_variation(x.column(name))))
        except (NotApplicableError, DataError) as exc:
            entries.append(CvEntry(name, None, str(exc)))
    if not entries:
        return NotApplicable("no quantitative regressors")
    return tuple(entries)


def _kind(non_essential: bool, essential: bool) -> VerdictKind:
    if non_essential and essential:
        return VerdictKind.BOTH
    if non_essential:
        return VerdictKind.NON_ESSENTIAL
    if essential:
        return VerdictKind.ESSENTIAL
    return VerdictKind.NONE


def _belsley_verdict(x: DesignMatrix, table: BelsleyTable, t: ThresholdConfig):
    implicated: list[tuple[str, ...]] = []
    evidence: list[tuple[str, float, float]] = []
    non_essential = essential = False
    intercept = x.names[0] if x.has_intercept else None
    # walk from the largest index down
    for i in range(len(table.condition_indexes) - 1, -1, -1):
        eta = float(table.condition_indexes[i])
        if eta < t.cn_problematic:
            if eta >= t.cn_moderate:
                evidence.append((f"condition_index[{i + 1}] (moderate)", eta, t.cn_moderate))
            continue
        evidence.append((f"condition_index[{i + 1}]", eta, t.cn_problematic))
        cols = tuple(
            nm for j, nm in enumerate(table.names) if table.vdp[i, j] >= t.vdp
        )
        for j, nm in enumerate(table.names):
            if table.vdp[i, j] >= t.vdp:
                evidence.append(
                    (f"variance_decomposition_proportion[{i + 1}, {nm}]",
                     float(table.vdp[i, j]), t.vdp)
                )
        # a relation needs at least two columns loading together
        if len(cols) < 2 or cols in implicated:
            continue
        implicated.append(cols)
        if intercept is not None and intercept in cols:
            non_essential = True
        else:
            essential = True
    return _kind(non_essential, essential), implicated, evidence


def _corroborating(report_parts: dict, t: ThresholdConfig):
    ev = []
    vif = report_parts["vif"]
    if isinstance(vif, VifTable):
        for e in vif.entries:
            if e.applicable and e.vif >= t.vif:
                ev.append((f"vif[{e.name}]", e.vif, t.vif))
    cvs = report_parts["cv"]
    if not isinstance(cvs, NotApplicable):
        for e in cvs:
            if e.cv is not None and e.cv < t.cv:
                ev.append((f"coefficient_of_variation[{e.name}]", e.cv, t.cv))
    corr = report_parts["correlation"]
    if isinstance(corr, CorrelationReport):
        for a, b, r in corr.flagged_pairs:
            ev.append((f"correlation[{a}, {b}]", r, t.corr))
    return ev


def diagnose(
    x: DesignMatrix,
    y=None,
    thresholds: ThresholdConfig | None = None,
    *,
    include_dummies: bool = False,
    dataset_id: str = "<memory>",
) -> DiagnosticsReport:
    """Run every applicable measure on ``x`` and classify the collinearity.

    The verdict comes from the variance decomposition: for each condition
    index at or above ``cn_problematic``, the columns with a proportion at
    or above ``vdp`` form a relation; one that involves the intercept is
    non-essential, otherwise essential. With an intercept and a single
    regressor the simple-model rules (condition number, CV or share of
    ones) decide instead. Rank deficiency propagates as
    :class:`RankDeficiencyError`.
    """
    t = thresholds or ThresholdConfig()

    if x.has_intercept:
        cn_with = condition_number(x, with_intercept=True)
        cn_without = (
            condition_number(x, with_intercept=False)
            if x.k > 1
            else NotApplicable("design has only the intercept")
        )
    else:
        cn_with = NotApplicable("design has no intercept")
        cn_without = condition_number(x, with_intercept=True)

    parts: dict[str, Any] = {
        "correlation": _try(correlation_report, x, t.corr, include_dummies),
        "vif": _try(vif_table, x, include_dummies),
        "stewart": stewart_table(x),
        "cv": _cv_entries(x),
    }
    table = belsley(x) if x.has_intercept else _decompose(x)
    if y is not None:
        if x.n <= x.k:
            parts["ols"] = NotApplicable(f"n={x.n} does not exceed k={x.k}")
        else:
            parts["ols"] = ols(x, y)
    else:
        parts["ols"] = NotApplicable("no dependent variable supplied")

    if x.has_intercept and x.k == 2:
        slm = slm_diagnostics(x, t)
        if slm.problematic:
            kind = VerdictKind.NON_ESSENTIAL
            implicated = [tuple(x.names)]
        else:
            kind, implicated = VerdictKind.NONE, []
        evidence = [e for e in slm.evidence if _exceeds(e)]
    else:
        slm = NotApplicable("simple-model diagnostics need an intercept and exactly one regressor")
        kind, implicated, evidence = _belsley_verdict(x, table, t)
        evidence.extend(_corroborating(parts, t))

    return DiagnosticsReport(
        dataset_id=dataset_id,
        design=x,
        thresholds=t,
        include_dummies=include_dummies,
        condition_number_with_intercept=cn_with,
        condition_number_without_intercept=cn_without,
        belsley=table,
        slm=slm,
        verdict=Verdict(kind, tuple(implicated), tuple(evidence)),
        **parts,
    )


def _exceeds(ev) -> bool:
    name, value, threshold = ev
    if name == "coefficient_of_variation":
        return value < threshold
    return value >= threshold


# ---------------------------------------------------------------- serialisation


def _num(v):
    if v is None:
        return None
    v = float(v)
    return v if math.isfinite(v) else None


def _na(obj: NotApplicable) -> dict:
    return {"status": "not applicable", "reason": obj.reason}


def report_to_dict(r: DiagnosticsReport) -> dict[str, Any]:
    x = r.design
    d: dict[str, Any] = {
        "dataset": r.dataset_id,
        "design": {
            "n": x.n,
            "k": x.k,
            "has_intercept": x.has_intercept,
            "columns": [{"name": nm, "role": role.value} for nm, role in zip(x.names, x.roles)],
        },
        "thresholds": r.thresholds.as_dict(),
        "include_dummies_in_legacy_measures": r.include_dummies,
    }

    cn: dict[str, Any] = {"status": "ok"}
    for key in ("condition_number_with_intercept", "condition_number_without_intercept"):
        v = getattr(r, key)
        if isinstance(v, NotApplicable):
            cn[key] = None
            cn[key.replace("condition_number_", "reason_")] = v.reason
        else:
            cn[key] = _num(v)
    d["condition_number"] = cn

    c = r.correlation
    if isinstance(c, NotApplicable):
        d["correlation"] = _na(c)
    else:
        d["correlation"] = {
            "status": "ok",
            "names": list(c.names),
            "matrix": [[_num(v) for v in row] for row in c.matrix],
            "determinant": _num(c.determinant),
            "threshold": _num(c.threshold),
            "flagged_pairs": [
                {"columns": [a, b], "abs_r": _num(v)} for a, b, v in c.flagged_pairs
            ],
        }

    v = r.vif
    if isinstance(v, NotApplicable):
        d["vif"] = _na(v)
    else:
        d["vif"] = {
            "status": "ok",
            "entries": [
                {
                    "name": e.name,
                    "role": e.role.value,
                    "status": e.status,
                    "r_squared": _num(e.r_squared),
                    "vif": _num(e.vif),
                    "reason": e.reason,
                }
                for e in v.entries
            ],
        }

    s = r.stewart
    d["stewart"] = (
        _na(s)
        if isinstance(s, NotApplicable)
        else {"status": "ok", "names": list(s.names), "values": [_num(a) for a in s.values]}
    )

    b = r.belsley
    d["belsley"] = (
        _na(b)
        if isinstance(b, NotApplicable)
        else {
            "status": "ok",
            "names": list(b.names),
            "eigenvalues": [_num(a) for a in b.eigenvalues],
            "condition_indexes": [_num(a) for a in b.condition_indexes],
            "vdp": [[_num(a) for a in row] for row in b.vdp],
        }
    )

    cv = r.cv
    d["coefficient_of_variation"] = (
        _na(cv)
        if isinstance(cv, NotApplicable)
        else {
            "status": "ok",
            "entries": [
                {"name": e.name, "cv": _num(e.cv), "reason": e.reason} for e in cv
            ],
        }
    )

    o = r.ols
    d["ols"] = (
        _na(o)
        if isinstance(o, NotApplicable)
        else {
            "status": "ok",
            "r_squared": _num(o.r_squared),
            "coefficients": [_num(a) for a in o.coefficients],
        }
    )

    m = r.slm
    d["slm"] = (
        _na(m)
        if isinstance(m, NotApplicable)
        else {
            "status": "ok",
            "regressor": m.regressor,
            "role": m.role.value,
            "cn_with_intercept": _num(m.cn_with_intercept),
            "stewart": [_num(a) for a in m.stewart],
            "cv": _num(m.cv),
            "proportion_ones": _num(m.proportion_ones),
            "closed_form_cn": _num(m.closed_form_cn),
            "problematic": m.problematic,
        }
    )

    d["verdict"] = {
        "kind": r.verdict.kind.value,
        "implicated": [list(cols) for cols in r.verdict.implicated],
        "evidence": [
            {"measure": name, "value": _num(val), "threshold": _num(thr)}
            for name, val, thr in r.verdict.evidence
        ],
    }
    return d


# ---------------------------------------------------------------- rendering


def _g(v) -> str:
    return "NA" if v is None else f"{v:.6g}"


def _table(header: list[str], rows: list[list[str]]) -> list[str]:
    widths = [max(len(str(c)) for c in col) for col in zip(header, *rows)]
    fmt = lambda cells: "  ".join(  # noqa: E731
        str(c).ljust(w) if i == 0 else str(c).rjust(w)
        for i, (c, w) in enumerate(zip(cells, widths))
    ).rstrip()
    return [fmt(header)] + [fmt(r) for r in rows]


def _render_text(d: Mapping[str, Any]) -> str:
    out: list[str] = []
    des = d["design"]
    out.append(f"Collinearity diagnostics: {d['dataset']}")
    out.append(f"n = {des['n']}, k = {des['k']}")
    out.append("")
    out += _table(["column", "role"], [[c["name"], c["role"]] for c in des["columns"]])

    out += ["", "Condition number"]
    cn = d["condition_number"]
    for key, label in (
        ("condition_number_with_intercept", "with intercept"),
        ("condition_number_without_intercept", "without intercept"),
    ):
        reason = cn.get(key.replace("condition_number_", "reason_"))
        out.append(f"  {label}: {_g(cn[key])}" + (f" ({reason})" if reason else ""))

    c = d["correlation"]
    out += ["", "Correlation matrix"]
    if c["status"] == "ok":
        out += [
            "  " + line
            for line in _table(
                [""] + c["names"],
                [[nm] + [_g(v) for v in row] for nm, row in zip(c["names"], c["matrix"])],
            )
        ]
        out.append(f"  determinant: {_g(c['determinant'])}")
        for p in c["flagged_pairs"]:
            a, b = p["columns"]
            out.append(f"  {a} and {b}: |r| = {_g(p['abs_r'])} >= {_g(c['threshold'])}")
    else:
        out.append(f"  not applicable: {c['reason']}")

    v = d["vif"]
    out += ["", "Variance inflation factors"]
    if v["status"] == "ok":
        rows = [
            [e["name"], _g(e["vif"]) if e["vif"] is not None else "not applicable",
             _g(e["r_squared"]) if e["r_squared"] is not None else ""]
            for e in v["entries"]
        ]
        out += ["  " + line for line in _table(["column", "VIF", "aux R2"], rows)]
    else:
        out.append(f"  not applicable: {v['reason']}")

    s = d["stewart"]
    out += ["", "Stewart index"]
    if s["status"] == "ok":
        out += [
            "  " + line
            for line in _table(["column", "index"], [[n, _g(a)] for n, a in zip(s["names"], s["values"])])
        ]
    else:
        out.append(f"  not applicable: {s['reason']}")

    b = d["belsley"]
    out += ["", "Condition indexes and variance decomposition proportions"]
    if b["status"] == "ok":
        rows = [
            [str(i + 1), _g(eta)] + [f"{p:.3f}" for p in row]
            for i, (eta, row) in enumerate(zip(b["condition_indexes"], b["vdp"]))
        ]
        out += ["  " + line for line in _table(["", "index"] + b["names"], rows)]
    else:
        out.append(f"  not applicable: {b['reason']}")

    cv = d["coefficient_of_variation"]
    out += ["", "Coefficient of variation"]
    if cv["status"] == "ok":
        out += [
            "  " + line
            for line in _table(
                ["column", "CV"],
                [[e["name"], _g(e["cv"]) if e["cv"] is not None else e["reason"]] for e in cv["entries"]],
            )
        ]
    else:
        out.append(f"  not applicable: {cv['reason']}")

    o = d["ols"]
    if o["status"] == "ok":
        out += ["", f"R-squared of y on all regressors: {_g(o['r_squared'])}"]

    m = d["slm"]
    if m["status"] == "ok":
        out += ["", f"Simple linear model (intercept + {m['regressor']})"]
        out.append(f"  condition number: {_g(m['cn_with_intercept'])}")
        out.append(f"  Stewart index: {_g(m['stewart'][0])}  {_g(m['stewart'][1])}")
        if m["cv"] is not None:
            out.append(f"  coefficient of variation: {_g(m['cv'])}")
        if m["proportion_ones"] is not None:
            out.append(f"  proportion of ones: {_g(m['proportion_ones'])}")
            out.append(f"  closed-form condition number: {_g(m['closed_form_cn'])}")

    ver = d["verdict"]
    out += ["", "Verdict"]
    if ver["kind"] == VerdictKind.NONE.value:
        out.append(f"  {NO_PROBLEM_LINE}")
    else:
        label = ver["kind"].replace("_", "-")
        out.append(f"  {label} multicollinearity")
        for cols in ver["implicated"]:
            out.append(f"  relation among: {', '.join(cols)}")
    for e in ver["evidence"]:
        out.append(f"  {e['measure']}: {_g(e['value'])} (threshold {_g(e['threshold'])})")
    return "\n".join(out) + "\n"


def render(report: DiagnosticsReport | Mapping[str, Any], fmt: str = "text") -> bytes:
    """Serialise a report (or its dict form) as ``text`` or ``json`` bytes.

    Output is deterministic; rendering parsed JSON reproduces the same bytes.
    """
    d = report_to_dict(report) if isinstance(report, DiagnosticsReport) else report
    if fmt == "json":
        return (json.dumps(d, indent=2, allow_nan=False) + "\n").encode("utf-8")
    if fmt == "text":
        return _render_text(d).encode("utf-8")
    raise ValueError(f"unknown format {fmt!r}")
