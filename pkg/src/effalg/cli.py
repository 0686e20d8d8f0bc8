"""``ea`` command line: line-delimited JSON reports.

Exit status: 0 success, 1 a property counterexample, 2 usage or format error.
"""
from __future__ import annotations

import argparse
import json
import sys
from concurrent.futures import ProcessPoolExecutor
from pathlib import Path
from typing import Sequence

from .core import AxiomError, FormatError, load, loads

OK, COUNTEREXAMPLE, USAGE = 0, 1, 2


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def emit(obj, out) -> None:
    out.write(json.dumps(obj, sort_keys=True, ensure_ascii=False) + "\n")


def _load(path: str):
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise FormatError(f"{path}: {exc.strerror}") from None
    try:
        return loads(text).with_label(Path(path).stem)
    except FormatError as exc:
        raise FormatError(f"{path}: {exc}") from None


# -- subcommands -------------------------------------------------------------

def cmd_validate(args, out) -> int:
    try:
        A = _load(args.file)
    except AxiomError as exc:
        emit({"file": args.file, "valid": False,
              "violations": [v.as_dict() for v in exc.violations]}, out)
        return COUNTEREXAMPLE
    emit({"file": args.file, "valid": True, "size": A.size, "atoms": len(A.atoms)}, out)
    return OK


def cmd_props(args, out) -> int:
    from .props import property_report
    A = _load(args.file)
    rep = property_report(A, A.label)
    obj = rep.as_dict()
    code = OK
    if args.cross_validate:
        from .observables import check_amalgamated, check_coequalizing, check_filtered
        k = args.max_arity
        diag = {
            "amalgamated": check_amalgamated(A, k, rdp=rep.rdp).ok,
            "coequalizing": check_coequalizing(A, k, orthoalgebra=rep.orthoalgebra).ok,
            "filtered": check_filtered(A, k).ok,
        }
        agree = (diag["amalgamated"] == rep.rdp and diag["coequalizing"] == rep.orthoalgebra
                 and diag["filtered"] == rep.boolean)
        obj["cross_validation"] = {"max_arity": k, **diag, "agree": agree}
        if not agree:
            code = COUNTEREXAMPLE
    emit(obj, out)
    return code


def cmd_homs(args, out) -> int:
    from .tensor import enumerate_homs
    A, C = _load(args.source), _load(args.target)
    n = 0
    for f in enumerate_homs(A, C):
        n += 1
        if not args.count:
            emit({"map": {A.names[a]: C.names[f[a]] for a in range(A.size)}}, out)
    emit({"count": n}, out)
    return OK


def cmd_observables(args, out) -> int:
    from .observables import decompositions
    A = _load(args.file)
    obs = decompositions(A, args.arity)
    if not args.count:
        for g in obs:
            emit({"arity": args.arity, "parts": [A.names[x] for x in g]}, out)
    emit({"arity": args.arity, "count": len(obs)}, out)
    return OK


def cmd_elements(args, out) -> int:
    from .observables import check_amalgamated, check_coequalizing, check_filtered
    if args.max_arity < 2:
        raise UsageError("--max-arity must be >= 2")
    A = _load(args.file)
    fn = {"amalgamated": check_amalgamated, "coequalizing": check_coequalizing,
          "filtered": check_filtered}[args.check]
    v = fn(A, args.max_arity)
    emit({"check": args.check, **v.as_dict()}, out)
    return OK if v.ok else COUNTEREXAMPLE


def _verify_one(payload):
    from .core import algebra_from_json
    from .tensor import tensor, verify_universal
    a, b, c, cap = payload
    A, B, C = (algebra_from_json(x) for x in (a, b, c))
    res = tensor(A, B, cap)
    return verify_universal(res, [C]).as_dict()


def cmd_tensor(args, out) -> int:
    from .iso import identify
    from .tensor import tensor, verify_universal
    A, B = _load(args.left), _load(args.right)
    res = tensor(A, B, args.cap)
    obj = {"status": res.status, "relations": res.relations, "rounds": res.saturation.rounds}
    code = OK
    if res.exact:
        T = res.algebra
        obj.update({"size": T.size, "algebra": T.to_json_obj(), "tau": res.tau_json(),
                    "isomorphic_to": identify(T)})
        if args.out:
            Path(args.out).write_text(json.dumps(T.to_json_obj(), sort_keys=True, ensure_ascii=False) + "\n",
                                      encoding="utf-8")
        if args.verify_targets:
            targets = [_load(str(p)) for p in sorted(Path(args.verify_targets).glob("*.json"))
                       if p.name != "golden.json" and _is_valid(p)]
            if args.jobs > 1:
                payloads = [(A.to_json_obj(), B.to_json_obj(), C.to_json_obj(), args.cap) for C in targets]
                with ProcessPoolExecutor(args.jobs) as ex:
                    reports = list(ex.map(_verify_one, payloads))
                ok = all(r["ok"] for r in reports)
                rep = {"ok": ok, "targets": len(targets),
                       "bimorphisms_checked": sum(r["bimorphisms_checked"] for r in reports)}
                bad = [r["failure"] for r in reports if not r["ok"]]
                if bad:
                    rep["failure"] = bad[0]
            else:
                rep = verify_universal(res, targets).as_dict()
            obj["universal"] = rep
            if not rep["ok"]:
                code = COUNTEREXAMPLE
    emit(obj, out)
    return code


def _is_valid(path: Path) -> bool:
    try:
        load(path)
        return True
    except (FormatError, AxiomError, ValueError):
        return False


def cmd_bimorphisms(args, out) -> int:
    from .tensor import enumerate_bimorphisms
    A, B, C = _load(args.a), _load(args.b), _load(args.c)
    n = 0
    for h in enumerate_bimorphisms(A, B, C):
        n += 1
        if not args.count:
            emit({"table": [[A.names[a], B.names[b], C.names[h[a][b]]]
                            for a in range(A.size) for b in range(B.size)]}, out)
    emit({"count": n}, out)
    return OK


def cmd_free_product(args, out) -> int:
    from .finbool import ArityError, free_product
    try:
        k, left, right = free_product(args.n, args.m)
    except ArityError as exc:
        raise UsageError(str(exc)) from None
    emit({"arity": k, "left": left.to_json(), "right": right.to_json()}, out)
    return OK


def cmd_presheaf(args, out) -> int:
    from .presheaf import restrict_representation
    A = _load(args.file)
    P = restrict_representation(A, args.max_arity)
    for n, s in enumerate(P.sizes(), start=1):
        emit({"arity": n, "count": s}, out)
    return OK


def cmd_day(args, out) -> int:
    from .iso import identify, is_isomorphic
    from .presheaf import colimit_L, day_convolution, restrict_representation
    from .tensor import tensor
    A, B = _load(args.left), _load(args.right)
    N = args.max_arity
    d = day_convolution(restrict_representation(A, N), restrict_representation(B, N), N)
    for c in range(1, N + 1):
        emit({"arity": c, "tokens": d.tokens[c], "classes": d.classes[c]}, out)
    L = colimit_L(d.presheaf, args.cap, label="L(day)")
    obj = {"status": L.status}
    code = OK
    if L.exact:
        obj.update({"size": L.algebra.size, "isomorphic_to": identify(L.algebra)})
        if args.compare_tensor:
            T = tensor(A, B, args.cap)
            same = T.exact and is_isomorphic(L.algebra, T.algebra)
            obj["matches_tensor"] = same
            code = OK if same else COUNTEREXAMPLE
    emit(obj, out)
    return code


def cmd_lr_check(args, out) -> int:
    from .presheaf import lr_check
    if args.max_arity < 3:
        raise UsageError("--max-arity must be >= 3")
    A = _load(args.file)
    v = lr_check(A, args.max_arity, args.target_size)
    emit(v.as_dict(), out)
    return OK if v.ok else COUNTEREXAMPLE


def _entry_report(name_and_obj):
    from .core import algebra_from_json
    from .corpus import CorpusEntry
    name, obj = name_and_obj
    return name, CorpusEntry(name, algebra_from_json(obj)).compute()


def cmd_corpus(args, out) -> int:
    from .corpus import corpus, load_golden, save_corpus
    golden = load_golden(args.golden) if args.golden else None
    entries = corpus(golden)
    if args.write:
        save_corpus(args.write)
    payload = [(e.name, e.algebra.to_json_obj()) for e in entries]
    if args.jobs > 1:
        with ProcessPoolExecutor(args.jobs) as ex:
            results = dict(ex.map(_entry_report, payload))
    else:
        results = dict(map(_entry_report, payload))
    code = OK
    for e in entries:
        rec = {"name": e.name, "recipe": e.recipe, **results[e.name]}
        if golden is not None:
            rec["matches_golden"] = e.expected == results[e.name]
            if not rec["matches_golden"]:
                code = COUNTEREXAMPLE
        emit(rec, out)
    return code


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="ea", description="Finite effect algebras, observables and presheaf colimits.")
    p.add_argument("--jobs", type=int, default=1, help="worker processes for parallel searches")
    sub = p.add_subparsers(dest="command", parser_class=_Parser)

    s = sub.add_parser("validate", help="check the axioms of an algebra file")
    s.add_argument("file")
    s.set_defaults(fn=cmd_validate)

    s = sub.add_parser("props", help="orthoalgebra / RDP / Boolean flags")
    s.add_argument("file")
    s.add_argument("--cross-validate", action="store_true")
    s.add_argument("--max-arity", type=int, default=4)
    s.set_defaults(fn=cmd_props)

    s = sub.add_parser("homs", help="effect-algebra morphisms between two algebras")
    s.add_argument("source")
    s.add_argument("target")
    s.add_argument("--count", action="store_true")
    s.set_defaults(fn=cmd_homs)

    s = sub.add_parser("observables", help="observables of a given arity")
    s.add_argument("file")
    s.add_argument("--arity", type=int, required=True)
    s.add_argument("--count", action="store_true")
    s.set_defaults(fn=cmd_observables)

    s = sub.add_parser("elements", help="diagnostics of the category of elements")
    s.add_argument("file")
    s.add_argument("--check", choices=["amalgamated", "coequalizing", "filtered"], required=True)
    s.add_argument("--max-arity", type=int, default=4)
    s.set_defaults(fn=cmd_elements)

    s = sub.add_parser("tensor", help="tensor product by saturation")
    s.add_argument("left")
    s.add_argument("right")
    s.add_argument("--cap", type=int, default=None)
    s.add_argument("--verify-targets", metavar="DIR")
    s.add_argument("--out", metavar="FILE")
    s.set_defaults(fn=cmd_tensor)

    s = sub.add_parser("bimorphisms", help="bimorphisms A x B -> C")
    s.add_argument("a")
    s.add_argument("b")
    s.add_argument("c")
    s.add_argument("--count", action="store_true")
    s.set_defaults(fn=cmd_bimorphisms)

    s = sub.add_parser("free-product", help="2^[n] * 2^[m] with its coprojections")
    s.add_argument("n", type=int)
    s.add_argument("m", type=int)
    s.set_defaults(fn=cmd_free_product)

    s = sub.add_parser("presheaf", help="sizes of R(A) at arities 1..N")
    s.add_argument("file")
    s.add_argument("--max-arity", type=int, default=3)
    s.set_defaults(fn=cmd_presheaf)

    s = sub.add_parser("day", help="Day convolution of R(A) and R(B), then L")
    s.add_argument("left")
    s.add_argument("right")
    s.add_argument("--max-arity", type=int, default=3)
    s.add_argument("--cap", type=int, default=None)
    s.add_argument("--compare-tensor", action="store_true")
    s.set_defaults(fn=cmd_day)

    s = sub.add_parser("lr-check", help="reflection check L(R(A)) = A")
    s.add_argument("file")
    s.add_argument("--max-arity", type=int, default=3)
    s.add_argument("--target-size", type=int, default=6)
    s.set_defaults(fn=cmd_lr_check)

    s = sub.add_parser("corpus", help="recompute the named corpus")
    s.add_argument("--golden", metavar="FILE")
    s.add_argument("--write", metavar="DIR", help="also write every entry as DIR/<name>.json")
    s.set_defaults(fn=cmd_corpus)
    return p


def run(argv: Sequence[str] | None = None, out=None, err=None) -> int:
    out = out or sys.stdout
    err = err or sys.stderr
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        if args.command is None:
            raise UsageError("missing subcommand")
        if args.jobs < 1:
            raise UsageError("--jobs must be >= 1")
        return args.fn(args, out)
    except UsageError as exc:
        emit({"error": "usage", "message": str(exc)}, err)
        return USAGE
    except FormatError as exc:
        emit({"error": "format", "message": str(exc)}, err)
        return USAGE
    except AxiomError as exc:
        emit({"error": "axioms", "message": str(exc),
              "violations": [v.as_dict() for v in exc.violations]}, err)
        return USAGE
    except ValueError as exc:  # bad parameter values, EA_CAP included
        emit({"error": "usage", "message": str(exc)}, err)
        return USAGE


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
