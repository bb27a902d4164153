"""Command-line interface: evaluate, rank, and probe.

Documents are rendered deterministically: fixed section and field order,
12-significant-digit numbers, LF line endings. Undefined measure values
print as the literal token ``undefined``; measures that cannot be computed
become ``error:`` records without failing the run.

Exit codes: 0 success (including partial reports with recorded measure
errors), 2 input or parse failure, 3 configuration contradiction.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from .class_measures import MeasureValue
from .comparison import (
    DiscrepancySearch,
    EvalConfig,
    MeasureReport,
    Ranking,
    concordance,
    default_measure_ids,
    evaluate_all,
    find_discrepancy,
    measure_scope,
    rank,
)
from .errors import ConfigError, FormatError, InvalidMatrixError, MeasureError
from .formats import format_matrix, load_label_pairs, load_matrix, load_priors, load_weights
from .matrix import ConfusionMatrix, from_labels
from .overall_measures import ChanceModel


def _fmt(x: float) -> str:
    return f"{x:#.12g}"


def _fmt_mass(x: float) -> str:
    return str(int(x)) if float(x).is_integer() else _fmt(x)


def _value_text(v: MeasureValue) -> str:
    return _fmt(v.value) if v.defined else "undefined"


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="confmetrics",
        description="Confusion-matrix accuracy measures, classifier ranking, "
        "and measure-equivalence probing.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add_common(p: argparse.ArgumentParser) -> None:
        p.add_argument("--measures", help="comma-separated measure ids")
        p.add_argument("--chance", choices=("cohen", "scott", "maxwell"), default="cohen")
        p.add_argument("--priors", help="priors file (scott model only)")
        p.add_argument("--weights", help="weight matrix file")
        p.add_argument("--class", dest="target_class", help="target class label")
        p.add_argument("--tie-tol", type=float, default=1e-9)
        p.add_argument("--gti-tol", type=float, default=1e-9)
        p.add_argument("--gti-max-iter", type=int, default=10_000)
        p.add_argument("--format", choices=("table", "machine"), default="machine")

    p_eval = sub.add_parser("eval", help="evaluate one confusion matrix")
    p_eval.add_argument("--matrix", help="matrix file")
    p_eval.add_argument("--labels", help="label-pair file (true,estimated)")
    add_common(p_eval)

    p_rank = sub.add_parser("rank", help="rank classifiers sharing one test set")
    p_rank.add_argument("--matrix", nargs="+", default=[], help="matrix files")
    p_rank.add_argument("--labels", nargs="+", default=[], help="label-pair files")
    add_common(p_rank)

    p_probe = sub.add_parser("probe", help="search for a ranking disagreement witness")
    p_probe.add_argument("--measures", required=True, help="two measure ids, comma-separated")
    p_probe.add_argument("--seed", type=int, required=True)
    p_probe.add_argument("--budget", type=int, default=10_000)
    p_probe.add_argument("--k", type=int, default=2, help="classes in generated matrices")
    p_probe.add_argument("--n", type=int, default=100, help="mass of generated matrices")
    p_probe.add_argument("--class", dest="target_class", default="c0",
                         help="target class of generated matrices (c0..)")
    p_probe.add_argument("--tie-tol", type=float, default=1e-9)
    p_probe.add_argument("--format", choices=("table", "machine"), default="machine")
    return parser


def _parse_measure_list(text: str | None) -> tuple[str, ...] | None:
    if text is None:
        return None
    ids = tuple(part.strip() for part in text.split(",") if part.strip())
    if not ids:
        raise ConfigError("--measures must name at least one measure")
    for mid in ids:
        measure_scope(mid)  # raises ConfigError on unknown ids
    return ids


def _build_config(args: argparse.Namespace, m: ConfusionMatrix) -> EvalConfig:
    measures = _parse_measure_list(args.measures)
    priors = None
    if args.priors is not None:
        if args.chance != "scott":
            raise ConfigError("--priors is only valid with --chance scott")
        by_label = load_priors(args.priors)
        missing = [label for label in m.labels if label not in by_label]
        extra = [label for label in by_label if label not in m.labels]
        if missing or extra:
            raise InvalidMatrixError(
                f"priors do not match the label universe (missing {missing}, extra {extra})"
            )
        priors = tuple(by_label[label] for label in m.labels)
        try:
            ChanceModel.scott(priors)
        except ValueError as exc:
            raise InvalidMatrixError(f"invalid priors: {exc}") from None
    weights = load_weights(args.weights) if args.weights is not None else None
    if args.target_class is not None and args.target_class not in m.labels:
        raise ConfigError(f"--class {args.target_class!r} is not in the label universe")
    return EvalConfig(
        measures=measures,
        chance=args.chance,
        priors=priors,
        weights=weights,
        target_class=args.target_class,
        tie_tolerance=args.tie_tol,
        gti_tolerance=args.gti_tol,
        gti_max_iterations=args.gti_max_iter,
    )


def _load_single_input(args: argparse.Namespace) -> ConfusionMatrix:
    if (args.matrix is None) == (args.labels is None):
        raise ConfigError("eval needs exactly one of --matrix or --labels")
    if args.matrix is not None:
        return load_matrix(args.matrix)
    return from_labels(load_label_pairs(args.labels))


# ---------------------------------------------------------------------------
# eval
# ---------------------------------------------------------------------------

def _meta_lines(report: MeasureReport) -> list[str]:
    lines = [
        f"k {report.k}",
        f"n {_fmt_mass(report.n)}",
        "labels " + " ".join(report.labels),
        f"weighted {'yes' if report.weighted else 'no'}",
        f"chance {report.chance}",
    ]
    if report.priors is not None:
        lines.append("priors " + " ".join(_fmt(p) for p in report.priors))
    lines.append(f"tie_tol {_fmt(report.tie_tolerance)}")
    return lines


def _entry_text(report: MeasureReport, mid: str, class_index: int | None = None) -> str:
    if mid in report.errors:
        return f"error: {report.errors[mid]}"
    if class_index is None:
        return _value_text(report.overall[mid])
    return _value_text(report.per_class[mid][class_index])


def render_eval_machine(report: MeasureReport, target_class: str | None = None) -> str:
    lines = ["[meta]"] + _meta_lines(report)
    overall_ids = [mid for mid in report.measures if _scope_of(report, mid) == "overall"]
    class_ids = [mid for mid in report.measures if _scope_of(report, mid) == "class"]
    if overall_ids:
        lines += ["", "[overall]"]
        lines += [f"{mid} {_entry_text(report, mid)}" for mid in overall_ids]
    class_range = range(report.k)
    if target_class is not None:
        class_range = [report.labels.index(target_class)]
    if class_ids:
        for i in class_range:
            lines += ["", f"[class {report.labels[i]}]"]
            for mid in class_ids:
                if mid in report.errors:
                    lines.append(f"{mid} error: {report.errors[mid]}")
                else:
                    lines.append(f"{mid} {_value_text(report.per_class[mid][i])}")
    if report.gti is not None:
        lines += [
            "",
            "[gti]",
            f"iterations {report.gti.iterations}",
            f"converged {'yes' if report.gti.converged else 'no'}",
            f"residual {_fmt(report.gti.residual)}",
        ]
    return "\n".join(lines) + "\n"


def _scope_of(report: MeasureReport, mid: str) -> str:
    if mid in report.overall:
        return "overall"
    if mid in report.per_class:
        return "class"
    # errored entry: fall back to the registry
    return measure_scope(mid)


def render_eval_table(report: MeasureReport, target_class: str | None = None) -> str:
    lines = ["confusion matrix evaluation"]
    for line in _meta_lines(report):
        key, _, rest = line.partition(" ")
        lines.append(f"  {key:<9} {rest}")
    overall_ids = [mid for mid in report.measures if _scope_of(report, mid) == "overall"]
    class_ids = [mid for mid in report.measures if _scope_of(report, mid) == "class"]
    if overall_ids:
        lines += ["", "overall measures"]
        for mid in overall_ids:
            lines.append(f"  {mid:<18} {_entry_text(report, mid)}")
    class_range = range(report.k)
    if target_class is not None:
        class_range = [report.labels.index(target_class)]
    if class_ids:
        for i in class_range:
            lines += ["", f"class {report.labels[i]}"]
            for mid in class_ids:
                if mid in report.errors:
                    lines.append(f"  {mid:<18} error: {report.errors[mid]}")
                else:
                    lines.append(f"  {mid:<18} {_value_text(report.per_class[mid][i])}")
    if report.gti is not None:
        lines += [
            "",
            "gti fit",
            f"  iterations         {report.gti.iterations}",
            f"  converged          {'yes' if report.gti.converged else 'no'}",
            f"  residual           {_fmt(report.gti.residual)}",
        ]
    return "\n".join(lines) + "\n"


def _run_eval(args: argparse.Namespace) -> str:
    m = _load_single_input(args)
    config = _build_config(args, m)
    report = evaluate_all(m, config)
    if args.format == "machine":
        return render_eval_machine(report, config.target_class)
    return render_eval_table(report, config.target_class)


# ---------------------------------------------------------------------------
# rank
# ---------------------------------------------------------------------------

def _load_rank_inputs(args: argparse.Namespace) -> list[tuple[str, ConfusionMatrix]]:
    entries: list[tuple[str, ConfusionMatrix]] = []
    for path in args.matrix:
        entries.append((Path(path).stem, load_matrix(path)))
    for path in args.labels:
        entries.append((Path(path).stem, from_labels(load_label_pairs(path))))
    if len(entries) < 2:
        raise ConfigError("rank needs at least 2 inputs")
    ids = [cid for cid, _ in entries]
    if len(set(ids)) != len(ids):
        raise ConfigError(f"duplicate classifier ids derived from file names: {sorted(ids)}")
    first_id, first = entries[0]
    for cid, m in entries[1:]:
        if m.labels != first.labels:
            raise InvalidMatrixError(
                f"label universe of {cid!r} does not match {first_id!r}: "
                f"{m.labels} vs {first.labels}"
            )
        if abs(m.n - first.n) > 1e-9 * max(m.n, first.n):
            raise InvalidMatrixError(
                f"total mass of {cid!r} ({_fmt_mass(m.n)}) does not match "
                f"{first_id!r} ({_fmt_mass(first.n)}); rankings need one shared test set"
            )
    return entries


def _rankable_everywhere(reports: list[MeasureReport], mid: str, class_index: int | None) -> bool:
    for report in reports:
        if mid in report.errors:
            return False
        if mid in report.overall:
            if not report.overall[mid].defined:
                return False
        elif mid in report.per_class:
            if class_index is None or not report.per_class[mid][class_index].defined:
                return False
        else:
            return False
    return True


def _equivalence_groups(rankings: list[Ranking]) -> list[list[str]]:
    groups: list[tuple[tuple, list[str]]] = []
    for ranking in rankings:
        for structure, members in groups:
            if structure == ranking.structure:
                members.append(ranking.measure)
                break
        else:
            groups.append((ranking.structure, [ranking.measure]))
    return [members for _, members in groups]


def _run_rank(args: argparse.Namespace) -> str:
    entries = _load_rank_inputs(args)
    first = entries[0][1]
    config = _build_config(args, first)
    class_index = first.labels.index(config.target_class) if config.target_class else None
    selected = config.measures
    if selected is None:
        selected = default_measure_ids(first.k, config.chance)
        if class_index is None:
            selected = tuple(mid for mid in selected if measure_scope(mid) == "overall")
    else:
        for mid in selected:
            if measure_scope(mid) == "class" and class_index is None:
                raise ConfigError(
                    f"measure {mid!r} is class-specific; pass --class to rank by it"
                )
    reports = [evaluate_all(m, config, cid) for cid, m in entries]
    rankings = [
        rank(reports, mid, class_index, config.tie_tolerance) for mid in selected
    ]
    tau_ids = [
        mid for mid in selected if _rankable_everywhere(reports, mid, class_index)
    ]
    pairs: list[tuple[str, str, float]] = []
    if len(tau_ids) >= 2:
        conc = concordance(reports, tau_ids, class_index, config.tie_tolerance)
        for i in range(len(tau_ids)):
            for j in range(i + 1, len(tau_ids)):
                pairs.append((tau_ids[i], tau_ids[j], float(conc.tau[i, j])))
    groups = _equivalence_groups(rankings)

    if args.format == "machine":
        lines = [
            "[meta]",
            "classifiers " + " ".join(cid for cid, _ in entries),
            f"k {first.k}",
            f"n {_fmt_mass(first.n)}",
        ]
        if config.target_class:
            lines.append(f"class {config.target_class}")
        lines.append(f"tie_tol {_fmt(config.tie_tolerance)}")
        lines.append("measures " + " ".join(selected))
        for ranking in rankings:
            lines += ["", f"[ranking {ranking.measure}]"]
            for g, members in enumerate(ranking.groups, 1):
                lines.append(f"group{g} " + " ".join(members))
            if ranking.unrankable:
                lines.append("unrankable " + " ".join(ranking.unrankable))
        if pairs:
            lines += ["", "[concordance]"]
            for a, b, tau in pairs:
                text = "undefined" if tau != tau else _fmt(tau)
                lines.append(f"{a}:{b} {text}")
        lines += ["", "[equivalence]"]
        for g, members in enumerate(groups, 1):
            lines.append(f"group{g} " + " ".join(members))
        return "\n".join(lines) + "\n"

    lines = [
        "classifier ranking",
        f"  classifiers {' '.join(cid for cid, _ in entries)}",
        f"  k {first.k}   n {_fmt_mass(first.n)}   tie_tol {_fmt(config.tie_tolerance)}",
    ]
    for ranking in rankings:
        lines += ["", f"ranking by {ranking.measure}"]
        for g, members in enumerate(ranking.groups, 1):
            lines.append(f"  {g}. " + ", ".join(members))
        if ranking.unrankable:
            lines.append("  unrankable: " + ", ".join(ranking.unrankable))
    lines += ["", "measures inducing identical rankings"]
    for members in groups:
        lines.append("  " + ", ".join(members))
    return "\n".join(lines) + "\n"


# ---------------------------------------------------------------------------
# probe
# ---------------------------------------------------------------------------

def _run_probe(args: argparse.Namespace) -> str:
    ids = tuple(part.strip() for part in args.measures.split(",") if part.strip())
    if len(ids) != 2:
        raise ConfigError("probe needs exactly two comma-separated measure ids")
    if args.budget < 1:
        raise ConfigError("--budget must be at least 1")
    measure_a, measure_b = ids
    labels = tuple(f"c{i}" for i in range(args.k))
    if args.target_class not in labels:
        raise ConfigError(
            f"--class {args.target_class!r} is not among the generated labels {labels}"
        )
    search = DiscrepancySearch(
        seed=args.seed,
        k=args.k,
        n=args.n,
        class_index=labels.index(args.target_class),
        tie_tolerance=args.tie_tol,
    )
    witness = find_discrepancy(measure_a, measure_b, search, args.budget)

    header = [
        f"measure_a {measure_a}",
        f"measure_b {measure_b}",
        f"k {args.k}",
        f"n {args.n}",
        f"class {args.target_class}",
        f"seed {args.seed}",
        f"budget {args.budget}",
        f"tie_tol {_fmt(args.tie_tol)}",
    ]
    if args.format == "machine":
        lines = ["[probe]"] + header
        if witness is None:
            lines.append("witness no")
            return "\n".join(lines) + "\n"
        lines.append("witness yes")
        lines.append(f"trial {witness.trial}")
        lines += [
            "",
            "[values]",
            f"a_first {_fmt(witness.a_first)}",
            f"a_second {_fmt(witness.a_second)}",
            f"b_first {_fmt(witness.b_first)}",
            f"b_second {_fmt(witness.b_second)}",
            "",
            "[matrix first]",
            format_matrix(witness.first).rstrip("\n"),
            "",
            "[matrix second]",
            format_matrix(witness.second).rstrip("\n"),
        ]
        return "\n".join(lines) + "\n"

    lines = ["ranking discrepancy probe"] + [f"  {line}" for line in header]
    if witness is None:
        lines.append("  no witness found within the budget")
        return "\n".join(lines) + "\n"
    lines += [
        f"  witness found at trial {witness.trial}",
        "",
        f"  {measure_a}: first {_fmt(witness.a_first)}  second {_fmt(witness.a_second)}",
        f"  {measure_b}: first {_fmt(witness.b_first)}  second {_fmt(witness.b_second)}",
        "",
        "matrix first",
        format_matrix(witness.first).rstrip("\n"),
        "",
        "matrix second",
        format_matrix(witness.second).rstrip("\n"),
    ]
    return "\n".join(lines) + "\n"


# ---------------------------------------------------------------------------
# entry point
# ---------------------------------------------------------------------------

def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        if args.command == "eval":
            doc = _run_eval(args)
        elif args.command == "rank":
            doc = _run_rank(args)
        else:
            doc = _run_probe(args)
    except (FormatError, InvalidMatrixError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3
    except MeasureError as exc:
        # Measure failures are normally recorded in the report; reaching here
        # means a whole-run computation (e.g. concordance) was impossible.
        print(f"error: {exc}", file=sys.stderr)
        return 2
    sys.stdout.write(doc)
    return 0


def entrypoint() -> None:
    sys.exit(main())
