"""Command-line entry point: ``quiverlab COMMAND [FILE | --fixture NAME] [options]``.

Every command prints one JSON object
``{"command", "input", "parameters", "result", "dimensions"?}`` to standard
output. Library errors exit with the code attached to their class.
"""

import argparse
import json
import sys

from . import dsl
from .algebra import (
    dimension_table,
    is_n_properly_graded,
    maximal_bound_paths,
    properly_graded_witnesses,
    quadratic_closure_check,
    quadratic_dual,
)
from .constructions import (
    component_phi,
    double_returning_quiver,
    multilayer_quiver,
    returning_arrow_quiver,
    zq_first_window,
    zq_second_window,
)
from .dot import export_dot, multilayer_dot, window_dot
from .errors import QuiverLabError
from .geometry import (
    hammock,
    is_complete_tau_slice,
    mutate,
    mutation_path,
    reduce_depth,
    verify_translation_axioms,
)
from .homological import almost_koszul_check, graded_resolution, type_classifier
from .presentations import matrix_presentation, tensor_presentation
from .quiver import Grading, depth, nicely_graded, vertex_label

ALGEBRAS = ("base", "trivext", "double", "multilayer", "trivext2")


def _label(v):
    return vertex_label(v)


def _quiver_json(q, tags=None):
    return {
        "vertices": [_label(v) for v in q.vertices],
        "arrows": [
            {"id": str(a.id), "source": _label(a.source), "target": _label(a.target), **({"tag": tags[a.id]} if tags else {})}
            for a in q.arrows
        ],
    }


def _bound_json(bq, tags=None):
    out = _quiver_json(bq.quiver, tags)
    out["relations"] = [str(r) for r in bq.relations]
    return out


def _dims(bq, bound=None):
    return [[_label(i), _label(j), t, d] for i, j, t, d in dimension_table(bq, bound).rows(bq.quiver)]


def _grading_json(result):
    if isinstance(result, Grading):
        return {"nicely_graded": True, "base": None if result.base is None else _label(result.base), "labels": {_label(v): g for v, g in result.labels.items()}, "depth": depth(result)}
    return {"nicely_graded": False, "counterexample": str(result)}


def _window(args, bq, raq=None):
    lo, hi = args.window
    raq = raq or returning_arrow_quiver(bq)
    if args.kind == "first":
        return zq_first_window(raq, lo, hi)
    if args.double:
        raq = double_returning_quiver(raq)
    return zq_second_window(raq, lo, hi)


def _algebra(name, bq):
    if name == "base":
        return bq
    if name == "trivext":
        return returning_arrow_quiver(bq).bound
    if name == "double":
        return double_returning_quiver(returning_arrow_quiver(bq)).bound
    if name == "multilayer":
        return multilayer_quiver(bq).bound
    return returning_arrow_quiver(multilayer_quiver(bq).bound).bound


def cmd_check(args, doc, bq):
    result = {"grading": _grading_json(nicely_graded(bq.quiver))}
    if bq.quiver.vertices:
        n = is_n_properly_graded(bq, args.degree_bound)
        result["properly_graded"] = n is not None
        result["n"] = n
        if n is None:
            pair = properly_graded_witnesses(bq, args.degree_bound)
            result["witnesses"] = [str(p) for p in pair] if pair else []
        result["maximal_bound_paths"] = [str(p) for p in maximal_bound_paths(bq, args.degree_bound).elements]
    else:
        result.update({"properly_graded": True, "n": 0, "maximal_bound_paths": []})
    return result, _dims(bq, args.degree_bound)


def cmd_dual(args, doc, bq):
    dual = quadratic_dual(bq)
    return {"relations": [str(r) for r in dual.relations]}, _dims(dual, args.degree_bound)


def cmd_trivext(args, doc, bq):
    raq = returning_arrow_quiver(bq, degree_bound=args.degree_bound)
    if args.double:
        raq = double_returning_quiver(raq)
    result = _bound_json(raq.bound, raq.tags)
    result.update({"n": raq.n, "provenance": {k: str(v) for k, v in raq.provenance.items()}, "extra_relations": [str(r) for r in raq.extra]})
    if args.dot:
        _write(args.dot, export_dot(raq.quiver, raq.tags, name=doc.name))
    return result, _dims(raq.bound)


def cmd_multilayer(args, doc, bq):
    mlq = multilayer_quiver(bq, doc.grading_object(), degree_bound=args.degree_bound)
    counts = {}
    for tag in mlq.tags.values():
        counts[tag] = counts.get(tag, 0) + 1
    result = _bound_json(mlq.bound, mlq.tags)
    result.update({
        "n": mlq.n,
        "vertex_count": len(mlq.quiver.vertices),
        "arrow_count": len(mlq.quiver.arrows),
        "arrow_counts": counts,
        "relation_count": len(mlq.bound.relations),
        "properly_graded_n": is_n_properly_graded(mlq.bound),
        "nicely_graded": isinstance(nicely_graded(mlq.quiver), Grading),
        "floors": {_label(v): r for v, r in mlq.floor.items()},
    })
    if args.dot:
        _write(args.dot, multilayer_dot(mlq, doc.name))
    return result, _dims(mlq.bound)


def _window_result(win, doc, args):
    result = _bound_json(win.bound, win.tags)
    result.update({
        "kind": win.kind,
        "layers": [win.lo, win.hi],
        "vertex_count": len(win.quiver.vertices),
        "arrow_count": len(win.quiver.arrows),
        "layer": {_label(v): m for v, m in win.layer.items()},
    })
    full = is_complete_tau_slice(win, win.quiver.vertices)
    result["window_is_slice"] = bool(full)
    grading = nicely_graded(win.quiver)
    result["grading"] = _grading_json(grading)
    if args.dot:
        _write(args.dot, window_dot(win, doc.name))
    return result


def cmd_zq1(args, doc, bq):
    args.kind = "first"
    return _window_result(_window(args, bq), doc, args), None


def cmd_zq2(args, doc, bq):
    args.kind = "second"
    win = _window(args, bq)
    result = _window_result(win, doc, args)
    if args.phi and not args.double:
        phi = component_phi(bq, doc.grading_object(), win)
        result["phi"] = {_label(k): _label(v) for k, v in phi.vertices.items()}
    return result, None


def _vertex_list(text):
    return [dsl.parse_vertex(tok) for tok in text.split()] if text else None


def _middle_band(win):
    """One full shift of layers starting at the middle of the window."""
    start = min((win.lo + win.hi + 1) // 2, max(win.lo, win.hi - win.shift + 1))
    return [v for v in win.quiver.vertices if start <= win.layer[v] < start + win.shift]


def cmd_slice(args, doc, bq):
    win = _window(args, bq)
    subset = _vertex_list(args.subset) or _middle_band(win)
    verdict = is_complete_tau_slice(win, subset)
    result = {"subset": [_label(v) for v in subset], "is_slice": bool(verdict)}
    if not verdict:
        result["violation"] = {"reason": verdict.reason, "witness": str(verdict.witness)}
        return result, None
    if args.mutate:
        vertex_text, _, direction = args.mutate.rpartition(":")
        after = mutate(verdict, dsl.parse_vertex(vertex_text), direction)
        result["mutated"] = [_label(v) for v in after.vertices]
    if args.to:
        goal = is_complete_tau_slice(win, _vertex_list(args.to))
        if not goal:
            result["target_violation"] = str(goal)
        else:
            steps = mutation_path(verdict, goal, args.budget)
            result["path"] = None if steps is None else [[_label(v), d] for v, d in steps]
    if args.reduce:
        moves, final = reduce_depth(verdict)
        result["reduce_depth"] = {"moves": [[_label(v), d] for v, d in moves], "final": [_label(v) for v in final.vertices]}
    return result, None


def cmd_hammock(args, doc, bq):
    win = _window(args, bq)
    anchor = dsl.parse_vertex(args.anchor)
    report = hammock(win, anchor, args.direction)
    entries = [[_label(v), t, mu] for (v, t), mu in sorted(report.entries.items(), key=lambda kv: (kv[0][1], win.quiver.vertex_index[kv[0][0]]))]
    axioms = verify_translation_axioms(win)
    return {"anchor": _label(anchor), "direction": args.direction, "entries": entries,
            "translation_axioms_ok": axioms.ok, "missing_witnesses": [str(m) for m in axioms.missing]}, None


def cmd_resolve(args, doc, bq):
    alg = _algebra(args.algebra, bq)
    vertex = dsl.parse_vertex(args.simple) if args.simple else alg.quiver.vertices[0]
    report = graded_resolution(alg, vertex, args.steps, args.degree_bound)
    return {"algebra": args.algebra, **report.as_dict()}, None


def cmd_koszul(args, doc, bq):
    alg = _algebra(args.algebra, bq)
    v = almost_koszul_check(alg, args.steps, args.degree_bound)
    witness = None
    if v.witness:
        witness = {**v.witness, "simple": _label(v.witness["simple"])}
    return {"algebra": args.algebra, "status": v.status, "p": v.p, "linear_up_to": v.q, "steps": v.steps,
            "pattern_holds": v.pattern_holds, "witness": witness}, None


def cmd_classify(args, doc, bq):
    bound = args.degree_bound if args.degree_bound is not None else 8
    target = bq
    if args.algebra == "multilayer":
        # the input is read as Gamma; classify the dual of the multilayer of its dual
        target = quadratic_dual(multilayer_quiver(quadratic_dual(bq)).bound)
    v = type_classifier(target, bound)
    return {"verdict": v.verdict, "bound": v.bound, "profile": v.profile, "n": v.n}, None


def cmd_matrix(args, doc, bq):
    mp = matrix_presentation(bq, args.side, args.degree_bound)
    grid = [{"row": a, "column": b, "entries": names, "dimension": mp.entry_totals()[(a, b)]} for (a, b), names in mp.entry_names().items()]
    return {"side": args.side, "n": mp.n, "size": mp.size, "grid": grid, "total": mp.total()}, _dim_rows(mp.flattened_dims())


def _dim_rows(dims):
    return [[_label(i), _label(j), t, d] for (i, j, t), d in sorted(dims.items(), key=lambda kv: (kv[0][2], repr(kv[0])))]


def cmd_tensor(args, doc, bq):
    dims = tensor_presentation(bq, args.side, args.degree_bound)
    return {"side": args.side, "total": sum(dims.values())}, _dim_rows(dims)


def cmd_dot(args, doc, bq):
    what = args.what
    if what == "quiver":
        text = export_dot(bq.quiver, name=doc.name)
    elif what in ("trivext", "double"):
        raq = returning_arrow_quiver(bq)
        if what == "double":
            raq = double_returning_quiver(raq)
        text = export_dot(raq.quiver, raq.tags, name=doc.name)
    elif what == "multilayer":
        text = multilayer_dot(multilayer_quiver(bq, doc.grading_object()), doc.name)
    else:
        args.kind = "first" if what == "zq1" else "second"
        text = window_dot(_window(args, bq), doc.name)
    if args.dot:
        _write(args.dot, text)
    return {"what": what, "dot": text}, None


def cmd_report(args, doc, bq):
    result, dims = cmd_check(args, doc, bq)
    if result.get("n") is not None and bq.quiver.vertices:
        raq = returning_arrow_quiver(bq)
        result["trivext"] = {"arrows": len(raq.quiver.arrows), "relations": len(raq.bound.relations), "quadratic": all(r.length == 2 for r in raq.bound.relations)}
        if result["grading"]["nicely_graded"]:
            mlq = multilayer_quiver(bq)
            result["multilayer"] = {"vertices": len(mlq.quiver.vertices), "arrows": len(mlq.quiver.arrows), "properly_graded_n": is_n_properly_graded(mlq.bound)}
    if all(r.length == 2 for r in bq.relations) and bq.quiver.vertices:
        result["quadratic_closure"] = quadratic_closure_check(bq, max(1, len(dimension_table(bq).by_degree()))).quadratic
    return result, dims


COMMANDS = {
    "check": cmd_check, "dual": cmd_dual, "trivext": cmd_trivext, "multilayer": cmd_multilayer,
    "zq1": cmd_zq1, "zq2": cmd_zq2, "slice": cmd_slice, "hammock": cmd_hammock, "resolve": cmd_resolve,
    "koszul": cmd_koszul, "classify": cmd_classify, "matrix": cmd_matrix, "tensor": cmd_tensor,
    "dot": cmd_dot, "report": cmd_report,
}


def _layers(text):
    lo, sep, hi = text.partition(":")
    if not sep:
        raise argparse.ArgumentTypeError("expected L:R")
    return int(lo), int(hi)


def _write(path, text):
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(text)


def build_parser():
    parser = argparse.ArgumentParser(prog="quiverlab", description="Bound quiver constructions and checks.")
    parser.add_argument("command", choices=sorted(COMMANDS))
    parser.add_argument("input", nargs="?", help="path to a .qv document")
    parser.add_argument("--fixture", help="use a bundled fixture instead of a file")
    parser.add_argument("--window", type=_layers, default=(0, 1), help="layer range L:R")
    parser.add_argument("--kind", choices=("first", "second"), default="first", help="covering kind for slice/hammock")
    parser.add_argument("--double", action="store_true", help="use the double returning-arrow quiver")
    parser.add_argument("--degree-bound", type=int, default=None)
    parser.add_argument("--steps", type=int, default=3)
    parser.add_argument("--algebra", choices=ALGEBRAS, default="base")
    parser.add_argument("--simple", help='vertex of the simple module, e.g. "(1,0,0)"')
    parser.add_argument("--side", choices=("lambda", "gamma"), default="lambda")
    parser.add_argument("--subset", help="space-separated slice vertices")
    parser.add_argument("--mutate", help='VERTEX:+ or VERTEX:-')
    parser.add_argument("--to", help="target slice vertices for a mutation path")
    parser.add_argument("--budget", type=int, default=10000)
    parser.add_argument("--reduce", action="store_true", help="run depth reduction on the slice")
    parser.add_argument("--anchor", help="hammock anchor vertex")
    parser.add_argument("--direction", choices=("starting", "ending"), default="starting")
    parser.add_argument("--phi", action="store_true", help="also report the component embedding")
    parser.add_argument("--what", choices=("quiver", "trivext", "double", "multilayer", "zq1", "zq2"), default="quiver")
    parser.add_argument("--json", help="also write the JSON report to this path")
    parser.add_argument("--dot", help="write DOT output to this path")
    return parser


def _jsonable(obj):
    if isinstance(obj, dict):
        return {str(k): _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(x) for x in obj]
    if isinstance(obj, (str, int, float, bool)) or obj is None:
        return obj
    return str(obj)


def run(argv=None, out=None):
    out = out or sys.stdout
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        if args.fixture:
            text, source = dsl.fixture_text(args.fixture), f"fixture:{args.fixture}"
        elif args.input:
            with open(args.input, encoding="utf-8") as fh:
                text, source = fh.read(), args.input
        else:
            parser.error("give a .qv file or --fixture NAME")
        doc = dsl.parse(text)
        bq = doc.bound_quiver()
        result, dims = COMMANDS[args.command](args, doc, bq)
    except QuiverLabError as exc:
        print(json.dumps({"command": args.command, "error": type(exc).__name__, "message": str(exc)}), file=out)
        return exc.exit_code
    except OSError as exc:
        print(json.dumps({"command": args.command, "error": "OSError", "message": str(exc)}), file=out)
        return 1
    params = {k: v for k, v in vars(args).items() if k not in ("command", "input", "json", "dot") and v is not None}
    report = {"command": args.command, "input": source, "parameters": params, "result": result}
    if dims is not None:
        report["dimensions"] = dims
    text = json.dumps(_jsonable(report), indent=2, sort_keys=False)
    print(text, file=out)
    if args.json:
        _write(args.json, text + "\n")
    return 0


def main(argv=None):
    sys.exit(run(argv))


if __name__ == "__main__":
    main()
