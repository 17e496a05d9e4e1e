"""Command line front door.

One subcommand per engine operation; every run emits a report (human
readable by default, JSON with --json) and exits 0 on a positive
verdict, 2 on a negative one and 1 on any error.  Reports are
deterministic for fixed inputs and seed, except for the timing field.

The environment variable TERN_DESCENT_BOUND overrides the default
enumeration bound (carrier size cap for congruence/ideal lattices).
"""

from __future__ import annotations

import argparse
import json
import os
import sys
import time

from . import __version__
from .algebras import enumerate_ternary_rings, ternary_monomorphisms, validate_ternary_ring
from .amalgams import (
    amalgam_normalize,
    check_strong_amalgamation,
    mixed_term,
    rewrite_once_amalgam,
    unique_nf_property_test,
)
from .errors import ToolError
from .fileio import (
    load_algebra,
    load_amalgam,
    load_morphism,
    load_rules,
    save_json,
)
from .ideals import ideal_closure, is_effective_codescent, zero_ideals
from .rewriting import (
    BUILTIN_SYSTEMS,
    check_confluence,
    check_shrinking,
    check_variable_coverage,
    critical_pairs,
    is_joinable,
    normalize,
    rewrite_once,
)
from .rings import (
    closure_term_forms_check,
    compare_descent_classes,
    default_ring_corpus,
    ideal_translation_check,
    unital_ring_monomorphisms,
)
from .terms import parse_term


def _bound(args) -> int:
    if getattr(args, "bound", None) is not None:
        return args.bound
    return int(os.environ.get("TERN_DESCENT_BOUND", "8"))


def _system(args):
    if getattr(args, "rules", None):
        return load_rules(args.rules)
    name = getattr(args, "system", None) or "sigma-prime"
    if name not in BUILTIN_SYSTEMS:
        raise ToolError(
            "unknown system %r (built in: %s)" % (name, ", ".join(sorted(BUILTIN_SYSTEMS)))
        )
    return BUILTIN_SYSTEMS[name]


def _steps_json(trace):
    return [
        {"position": list(step.position), "label": step.label, "term": str(step.term)}
        for step in trace
    ]


# --------------------------------------------------------------------------
# handlers: each returns (positive, details, human lines)


def _cmd_validate(args):
    algebra = load_algebra(args.algebra)
    verdict = validate_ternary_ring(algebra)
    details = {
        "algebra": algebra.name,
        "order": len(algebra),
        "valid": verdict.valid,
        "axiom": verdict.axiom,
        "witness": list(verdict.witness) if verdict.witness else None,
    }
    if verdict.valid:
        lines = ["%s: valid ternary ring of order %d" % (algebra.name, len(algebra))]
    else:
        lines = [
            "%s: INVALID, violates %s at %r" % (algebra.name, verdict.axiom, verdict.witness)
        ]
    return verdict.valid, details, lines


def _cmd_rewrite(args):
    system = _system(args)
    term = parse_term(args.term)
    reducts = sorted(rewrite_once(system, term), key=lambda r: (r[0], r[1]))
    details = {
        "term": str(term),
        "reducts": [
            {"position": list(pos), "label": label, "result": str(result)}
            for pos, label, result in reducts
        ],
    }
    lines = ["%d one-step reducts of %s" % (len(reducts), term)]
    lines += ["  at %r by %s: %s" % (list(p), l, r) for p, l, r in reducts]
    if not reducts:
        lines.append("  (normal form)")
    return True, details, lines


def _cmd_normalize(args):
    system = _system(args)
    term = parse_term(args.term)
    nf, trace = normalize(system, term, strategy=args.strategy, seed=args.seed)
    details = {
        "term": str(term),
        "strategy": args.strategy,
        "normal_form": str(nf),
        "steps": _steps_json(trace),
    }
    lines = ["%s  ==>  %s   (%d steps)" % (term, nf, len(trace))]
    return True, details, lines


def _cmd_critical_pairs(args):
    system = _system(args)
    pairs = critical_pairs(system)
    shown = []
    for cp in pairs:
        keep = True
        if args.only_nonjoinable:
            keep = not is_joinable(system, (cp.left, cp.right))
        if keep:
            shown.append(cp)
    classes = []
    if args.only_nonjoinable:
        from .rewriting import canonical_pair

        seen = []
        for cp in shown:
            left, _ = normalize(system, cp.left)
            right, _ = normalize(system, cp.right)
            cls = canonical_pair(left, right)
            if cls not in seen:
                seen.append(cls)
        classes = [{"left": str(a), "right": str(b)} for a, b in seen]
    details = {
        "total": len(pairs),
        "shown": [
            {
                "peak": str(cp.peak),
                "left": str(cp.left),
                "right": str(cp.right),
                "rules": [cp.outer_label, cp.inner_label],
                "position": list(cp.position),
            }
            for cp in shown
        ],
        "classes": classes,
    }
    lines = ["%d critical pairs (%d shown)" % (len(pairs), len(shown))]
    lines += ["  %s" % cp for cp in shown]
    if args.only_nonjoinable:
        lines.append("%d non-joinable classes:" % len(classes))
        lines += ["  %s = %s" % (c["left"], c["right"]) for c in classes]
    return True, details, lines


def _cmd_confluence(args):
    system = _system(args)
    verdict = check_confluence(system)
    details = {
        "status": verdict.status,
        "critical_pairs": verdict.pair_count,
        "witnesses": [{"left": str(a), "right": str(b)} for a, b in verdict.witnesses],
    }
    lines = [verdict.status]
    lines += ["  witness class: %s = %s" % (a, b) for a, b in verdict.witnesses]
    return verdict.status == "confluent", details, lines


def _cmd_conditions(args):
    system = _system(args)
    shrinking = check_shrinking(system)
    coverage = check_variable_coverage(system)
    details = {
        "size_decrease": shrinking.ok,
        "variable_coverage": coverage.ok,
        "per_rule": {
            check.label: {"size_decrease": check.ok, "detail": check.detail}
            for check in shrinking.per_rule
        },
    }
    for check in coverage.per_rule:
        details["per_rule"][check.label]["variable_coverage"] = check.ok
    lines = [
        "size decrease (termination): %s" % shrinking.ok,
        "left-side variable coverage: %s" % coverage.ok,
    ]
    return shrinking.ok and coverage.ok, details, lines


def _cmd_amalgam_normalize(args):
    amalgam = load_amalgam(args.amalgam)
    term = mixed_term(amalgam, parse_term(args.term))
    nf, trace = amalgam_normalize(amalgam, term, strategy=args.strategy, seed=args.seed)
    details = {
        "term": str(term),
        "strategy": args.strategy,
        "normal_form": str(nf),
        "steps": _steps_json(trace),
    }
    lines = ["%s  ==>  %s   (%d steps)" % (term, nf, len(trace))]
    return True, details, lines


def _cmd_unique_nf_test(args):
    amalgam = load_amalgam(args.amalgam)
    system = _system(args)
    report = unique_nf_property_test(
        amalgam,
        system,
        samples=args.samples,
        depth=args.depth,
        seed=args.seed,
        runs=args.runs,
    )
    witness = None
    if report.witness is not None:
        witness = {
            "term": str(report.witness[0]),
            "normal_form_a": str(report.witness[1]),
            "normal_form_b": str(report.witness[2]),
        }
    details = {
        "passed": report.passed,
        "samples": report.samples,
        "runs": report.runs,
        "depth": report.depth,
        "witness": witness,
    }
    if report.passed:
        lines = ["unique normal forms: pass (%d samples)" % report.samples]
    else:
        lines = [
            "unique normal forms: FAIL",
            "  term: %s" % witness["term"],
            "  reaches both %s and %s" % (witness["normal_form_a"], witness["normal_form_b"]),
        ]
    return report.passed, details, lines


def _cmd_strong_amalgamation(args):
    amalgam = load_amalgam(args.amalgam)
    report = check_strong_amalgamation(amalgam)
    details = {
        "holds": report.holds,
        "injective": {tag: ok for tag, (ok, _) in report.injectivity.items()},
        "intersections": {
            "%s&%s" % pair: {"ok": ok, "overlap": list(overlap)}
            for pair, (ok, overlap) in report.intersections.items()
        },
    }
    lines = ["strong amalgamation: %s" % ("holds" if report.holds else "FAILS")]
    for pair, (ok, overlap) in sorted(report.intersections.items()):
        lines.append("  %s & %s overlap: %s" % (pair[0], pair[1], ", ".join(overlap)))
    return report.holds, details, lines


def _cmd_ideals(args):
    algebra = load_algebra(args.algebra)
    ideals = zero_ideals(algebra, _bound(args))
    details = {
        "algebra": algebra.name,
        "ideals": [list(i.sorted()) for i in ideals],
    }
    lines = ["%d zero-ideals of %s" % (len(ideals), algebra.name)]
    lines += ["  {%s}" % ", ".join(i.sorted()) for i in ideals]
    return True, details, lines


def _cmd_closure(args):
    algebra = load_algebra(args.algebra)
    seed_set = [x.strip() for x in args.seed_set.split(",") if x.strip()]
    trace = ideal_closure(algebra, seed_set)
    details = {
        "algebra": algebra.name,
        "seed_set": sorted(seed_set, key=algebra.index.get),
        "stages": [sorted(stage, key=algebra.index.get) for stage in trace.stages],
        "final": sorted(trace.final, key=algebra.index.get),
        "provenance": [
            [
                {"element": element, "term": which, "args": list(args_)}
                for element, which, args_ in stage
            ]
            for stage in trace.provenance
        ],
    }
    lines = ["closure of {%s} in %s:" % (", ".join(sorted(seed_set)), algebra.name)]
    for i, stage in enumerate(trace.stages):
        lines.append("  stage %d: {%s}" % (i, ", ".join(sorted(stage, key=algebra.index.get))))
    return True, details, lines


def _cmd_codescent(args):
    morphism = load_morphism(args.morphism)
    verdict = is_effective_codescent(morphism, _bound(args))
    details = {
        "morphism": morphism.name,
        "effective": verdict.effective,
        "condition_iii": verdict.condition_iii,
        "condition_iv": verdict.condition_iv,
        "condition_v": verdict.condition_v,
        "witnesses": {
            ",".join(ideal): list(extension) for ideal, extension in verdict.witnesses.items()
        },
        "counterexample": (
            None
            if verdict.counterexample is None
            else {key: list(value) for key, value in verdict.counterexample.items()}
        ),
        "traces": [
            {
                "ideal": list(ideal),
                "stages": [
                    sorted(stage, key=morphism.target.index.get) for stage in trace.stages
                ],
            }
            for ideal, trace in verdict.traces.items()
        ],
    }
    lines = [
        "%s: %s codescent morphism"
        % (morphism.name, "effective" if verdict.effective else "NOT an effective")
    ]
    if verdict.counterexample is not None:
        lines.append("  unextendable ideal: {%s}" % ", ".join(verdict.counterexample["ideal"]))
    return verdict.effective, details, lines


def _cmd_bridge_compare(args):
    corpus = default_ring_corpus(args.max_order)
    translation = {}
    closed_forms = {}
    for ring in corpus:
        translation[ring.name] = ideal_translation_check(ring)[0]
        closed_forms[ring.name] = closure_term_forms_check(ring)[0]
    monos = []
    for source in corpus:
        for target in corpus:
            monos.extend(unital_ring_monomorphisms(source, target))
    report = compare_descent_classes(monos)
    ok = (
        all(translation.values())
        and all(closed_forms.values())
        and report.containment_ok
    )
    details = {
        "rings": [ring.name for ring in corpus],
        "ideal_translation": translation,
        "closed_forms": closed_forms,
        "monomorphisms": len(monos),
        "containment_pure_implies_extension": report.containment_ok,
        "strict_extension_not_pure": [entry.mono.name for entry in report.strict],
        "entries": [
            {
                "monomorphism": entry.mono.name,
                "pure": entry.pure,
                "ideal_extension": entry.ideal_extension,
                "effective_codescent": entry.effective_codescent,
            }
            for entry in report.entries
        ],
    }
    lines = [
        "%d corpus rings, %d monomorphisms" % (len(corpus), len(monos)),
        "ideal translation agrees on all rings: %s" % all(translation.values()),
        "closed forms agree on all rings: %s" % all(closed_forms.values()),
        "pure => ideal extension on every entry: %s" % report.containment_ok,
        "ideal extension without purity found: %d" % len(report.strict),
    ]
    return ok, details, lines


def _cmd_enumerate(args):
    algebras = enumerate_ternary_rings(args.order)
    details = {"order": args.order, "count": len(algebras)}
    lines = ["%d ternary rings of order %d up to isomorphism" % (len(algebras), args.order)]
    if args.probe_codescent:
        failures = []
        monos = 0
        for source in algebras:
            for target in algebras:
                for mono in ternary_monomorphisms(source, target):
                    monos += 1
                    verdict = is_effective_codescent(mono, _bound(args))
                    if not verdict.effective:
                        failures.append(
                            {"morphism": mono.name, "ideal": list(verdict.counterexample["ideal"])}
                        )
        details["probe"] = {"monomorphisms": monos, "extension_failures": failures}
        lines.append(
            "codescent probe: %d monomorphisms, %d without the extension property"
            % (monos, len(failures))
        )
    return True, details, lines


HANDLERS = {
    "validate": _cmd_validate,
    "rewrite": _cmd_rewrite,
    "normalize": _cmd_normalize,
    "critical-pairs": _cmd_critical_pairs,
    "confluence": _cmd_confluence,
    "conditions": _cmd_conditions,
    "amalgam-normalize": _cmd_amalgam_normalize,
    "unique-nf-test": _cmd_unique_nf_test,
    "strong-amalgamation": _cmd_strong_amalgamation,
    "ideals": _cmd_ideals,
    "closure": _cmd_closure,
    "codescent": _cmd_codescent,
    "bridge-compare": _cmd_bridge_compare,
    "enumerate": _cmd_enumerate,
}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="terndescent",
        description="Rewriting, amalgams and codescent for finite ternary rings.",
    )
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    def command(name, **kwargs):
        p = sub.add_parser(name, **kwargs)
        p.add_argument("--json", action="store_true", help="emit the JSON report")
        p.add_argument("--out", help="also write the JSON report to this file")
        return p

    def with_system(p):
        p.add_argument("--system", default="sigma-prime", help="sigma or sigma-prime")
        p.add_argument("--rules", help="JSON rule file instead of a built-in system")

    p = command("validate", help="check the ternary ring axioms of an algebra file")
    p.add_argument("--algebra", required=True)

    p = command("rewrite", help="all one-step reducts of a term")
    with_system(p)
    p.add_argument("--term", required=True)

    p = command("normalize", help="rewrite a term to normal form")
    with_system(p)
    p.add_argument("--term", required=True)
    p.add_argument(
        "--strategy",
        default="leftmost-innermost",
        choices=("leftmost-innermost", "leftmost-outermost", "seeded-random"),
    )
    p.add_argument("--seed", type=int, default=0)

    p = command("critical-pairs", help="critical pairs of a rule system")
    with_system(p)
    p.add_argument("--only-nonjoinable", action="store_true")

    p = command("confluence", help="decide confluence via critical pairs")
    with_system(p)

    p = command("conditions", help="rule-form side conditions of a system")
    with_system(p)

    p = command("amalgam-normalize", help="normal form of a mixed term")
    p.add_argument("--amalgam", required=True)
    p.add_argument("--term", required=True)
    p.add_argument(
        "--strategy",
        default="leftmost-innermost",
        choices=("leftmost-innermost", "leftmost-outermost", "seeded-random"),
    )
    p.add_argument("--seed", type=int, default=0)

    p = command("unique-nf-test", help="randomized unique-normal-form property test")
    p.add_argument("--amalgam", required=True)
    with_system(p)
    p.add_argument("--samples", type=int, default=500)
    p.add_argument("--depth", type=int, default=5)
    p.add_argument("--runs", type=int, default=100)
    p.add_argument("--seed", type=int, default=0)

    p = command("strong-amalgamation", help="strong amalgamation property of an amalgam")
    p.add_argument("--amalgam", required=True)

    p = command("ideals", help="all zero-ideals of an algebra")
    p.add_argument("--algebra", required=True)
    p.add_argument("--bound", type=int)

    p = command("closure", help="smallest zero-ideal containing a seed set")
    p.add_argument("--algebra", required=True)
    p.add_argument("--seed-set", required=True, help="comma-separated elements")

    p = command("codescent", help="effective codescent decision for a morphism file")
    p.add_argument("--morphism", required=True)
    p.add_argument("--bound", type=int)

    p = command("bridge-compare", help="commutative ring comparison over the corpus")
    p.add_argument("--max-order", type=int, default=8)

    p = command("enumerate", help="enumerate ternary rings of a small order")
    p.add_argument("--order", type=int, required=True)
    p.add_argument("--probe-codescent", action="store_true")
    p.add_argument("--bound", type=int)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    handler = HANDLERS[args.command]
    started = time.time()
    try:
        positive, details, lines = handler(args)
    except ToolError as exc:
        print("error: %s" % exc, file=sys.stderr)
        return 1
    except ValueError as exc:
        print("error: %s" % exc, file=sys.stderr)
        return 1
    report = {
        "command": args.command,
        "verdict": "positive" if positive else "negative",
        "seed": getattr(args, "seed", None),
        "version": __version__,
        "details": details,
        "timing": round(time.time() - started, 6),
    }
    if args.out:
        save_json(report, args.out)
    if args.json:
        print(json.dumps(report, indent=2, sort_keys=True))
    else:
        for line in lines:
            print(line)
    return 0 if positive else 2


if __name__ == "__main__":
    sys.exit(main())
