"""Command-line front end: build complexes, run analyses, emit JSON reports.

Reports are deterministic for fixed inputs and flags: canonical ordering
everywhere, no timestamps in the payload (wall time goes to stderr), and
the --threads flag is accepted but normalized out of the command echo.

Exit codes: 0 ok, 1 input error, 2 validation failure, 3 budget exceeded,
4 precondition degradation.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import sys
import time

from . import abelian, constructors, core, em, kan
from .homology import cohomology as cohomology_of
from .homology import homology as homology_of
from .homology import hurewicz_check

VERSION = "0.1.0"
SCHEMA = "kansim-report/1"

EXIT_OK = 0
EXIT_INPUT = 1
EXIT_VALIDATION = 2
EXIT_BUDGET = 3
EXIT_DEGRADED = 4


class CliInputError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise CliInputError(message)


def builtin_names():
    names = ["point", "sphere-2"]
    for n in range(4):
        names.append(f"delta-{n}")
    for n in range(1, 4):
        names.append(f"boundary-{n}")
        for k in range(n + 1):
            names.append(f"horn-{n}-{k}")
    return sorted(names)


def _make_builtin(name, cap=None):
    if name == "point":
        return constructors.point(3 if cap is None else cap)
    if name == "sphere-2":
        use_cap = 3 if cap is None else cap
        d2 = constructors.standard_simplex(2, use_cap)
        mask = core.subcomplex_closure(
            d2, [d2.ref_of(1, lab) for lab in ["0.1", "0.2", "1.2"]]
        )
        q, _ = constructors.quotient(d2, mask)
        q.name = "sphere-2"
        return q
    kind, _, rest = name.partition("-")
    if kind == "delta":
        n = int(rest)
        k = constructors.standard_simplex(n, n if cap is None else cap)
        k.subcomplex_names["boundary"] = core.SubcomplexMask(
            k,
            [
                {
                    i
                    for i, lab in enumerate(k.levels[d])
                    if len(set(lab.split("."))) < n + 1
                }
                for d in range(k.cap + 1)
            ],
        )
        for gap in range(n + 1):
            required = set(str(v) for v in range(n + 1)) - {str(gap)}
            k.subcomplex_names[f"horn-{gap}"] = core.SubcomplexMask(
                k,
                [
                    {
                        i
                        for i, lab in enumerate(k.levels[d])
                        if not required <= set(lab.split("."))
                    }
                    for d in range(k.cap + 1)
                ],
            )
        return k
    if kind == "boundary":
        n = int(rest)
        return constructors.boundary_complex(n, n if cap is None else cap)
    if kind == "horn":
        n, gap = (int(v) for v in rest.split("-"))
        return constructors.horn_complex(n, gap, n if cap is None else cap)
    raise CliInputError(f"unknown builtin {name!r}")


def load_complex(spec, cap=None):
    """Resolve builtin:<name> or a file path to a complex."""
    if spec.startswith("builtin:"):
        name = spec[len("builtin:") :]
        if name not in builtin_names():
            raise CliInputError(f"unknown builtin {name!r}; see --help for the list")
        return _make_builtin(name, cap)
    k = core.load(spec)
    if cap is not None and cap != k.cap:
        raise CliInputError("--cap can only resize builtins; truncate files explicitly")
    return k


def _digest(k):
    return "sha256:" + hashlib.sha256(core.dumps(k).encode("utf-8")).hexdigest()


def _report(command, inputs, result, warnings):
    return {
        "schema": SCHEMA,
        "tool": f"kansim {VERSION}",
        "command": command,
        "inputs": inputs,
        "result": result,
        "warnings": sorted(warnings),
    }


def _emit(report, stdout):
    stdout.write(json.dumps(report, indent=2, sort_keys=True, ensure_ascii=False) + "\n")


def _group_value(g: abelian.FinAbGroup):
    return {"free_rank": g.free_rank, "torsion": list(g.torsion_orders)}


def _resolve_subcomplex(k, name):
    if name is None:
        return None
    if name == "basepoint":
        return core.basepoint_mask(k)
    mask = k.subcomplex_names.get(name)
    if mask is None:
        raise CliInputError(f"complex has no subcomplex named {name!r}")
    return mask


def build_parser():
    parser = _Parser(
        prog="kansim",
        description="Finite truncated simplicial sets: Kan checks, homotopy, homology, EM spaces.",
        epilog="builtin complexes: " + " ".join(f"builtin:{n}" for n in builtin_names()),
    )
    parser.add_argument("--threads", type=int, default=1, help="accepted for compatibility; results are identical at any value")
    sub = parser.add_subparsers(dest="command_name", required=True)

    p_val = sub.add_parser("validate", help="check the five operator identities")
    p_val.add_argument("complex")
    p_val.add_argument("--cap", type=int)

    p_build = sub.add_parser("build", help="construct a complex and write it to a file")
    p_build.add_argument(
        "constructor",
        choices=[
            "standard-simplex", "boundary", "horn", "point", "product",
            "coproduct", "quotient", "cone", "path-space", "loop-space",
            "complete", "em-space",
        ],
    )
    p_build.add_argument("args", nargs="*")
    p_build.add_argument("-o", "--output", required=True)
    p_build.add_argument("--cap", type=int)
    p_build.add_argument("--level-budget", type=int, default=constructors.DEFAULT_LEVEL_BUDGET)
    p_build.add_argument("--subcomplex")
    p_build.add_argument("--group")
    p_build.add_argument("--n", type=int)

    p_an = sub.add_parser("analyze", help="run an analysis and print a JSON report")
    p_an.add_argument(
        "what",
        choices=[
            "kan", "minimal", "homotopy-group", "homology", "cohomology",
            "hurewicz", "exactness", "spec-cohomology", "compare-sim-spec",
        ],
    )
    p_an.add_argument("complex")
    p_an.add_argument("--cap", type=int)
    p_an.add_argument("--dim", type=int)
    p_an.add_argument("--coeff")
    p_an.add_argument("--subcomplex")
    p_an.add_argument("--basepoint")
    p_an.add_argument("--up-to", dest="up_to", type=int)
    p_an.add_argument("--n", type=int)
    p_an.add_argument("--unnormalized", action="store_true")
    p_an.add_argument("--level-budget", type=int, default=constructors.DEFAULT_LEVEL_BUDGET)
    return parser


def _echo(argv):
    """The command echo, with performance-only flags removed."""
    out = []
    skip = False
    for a in argv:
        if skip:
            skip = False
            continue
        if a == "--threads":
            skip = True
            continue
        if a.startswith("--threads="):
            continue
        out.append(a)
    return out


def _cmd_validate(ns, argv, stdout):
    k = load_complex(ns.complex, ns.cap)
    report = core.validate(k)
    payload = _report(
        _echo(argv), {ns.complex: _digest(k)}, report.to_json(), []
    )
    _emit(payload, stdout)
    return EXIT_OK if report.ok else EXIT_VALIDATION


def _cmd_build(ns, argv, stdout):
    warnings = []
    name = ns.constructor
    args = ns.args
    budget = ns.level_budget

    def need(count):
        if len(args) != count:
            raise CliInputError(f"{name} takes {count} positional argument(s)")

    if name == "standard-simplex":
        need(1)
        n = int(args[0])
        k = constructors.standard_simplex(n, ns.cap if ns.cap is not None else n)
    elif name == "boundary":
        need(1)
        n = int(args[0])
        k = constructors.boundary_complex(n, ns.cap if ns.cap is not None else n)
    elif name == "horn":
        need(2)
        n, gap = int(args[0]), int(args[1])
        k = constructors.horn_complex(n, gap, ns.cap if ns.cap is not None else n)
    elif name == "point":
        need(0)
        k = constructors.point(ns.cap if ns.cap is not None else 3)
    elif name in ("product", "coproduct"):
        need(2)
        a = load_complex(args[0], ns.cap)
        b = load_complex(args[1], ns.cap)
        k = constructors.product(a, b) if name == "product" else constructors.coproduct(a, b)
    elif name == "quotient":
        need(1)
        a = load_complex(args[0], ns.cap)
        if ns.subcomplex is None:
            raise CliInputError("quotient needs --subcomplex")
        mask = _resolve_subcomplex(a, ns.subcomplex)
        k, _ = constructors.quotient(a, mask)
    elif name == "cone":
        need(1)
        a = load_complex(args[0], ns.cap)
        k, _ = constructors.cone(a)
    elif name == "path-space":
        need(1)
        a = load_complex(args[0], ns.cap)
        k, _ = constructors.path_space(a)
    elif name == "loop-space":
        need(1)
        a = load_complex(args[0], ns.cap)
        k = constructors.loop_space(a)
    elif name == "complete":
        need(1)
        a = load_complex(args[0])
        skeleton = constructors.as_skeleton(a)
        srep = kan.kan_skeleton_check(skeleton)
        if not srep.passed:
            warnings.append(f"kan_skeleton_check failed: {srep.failure}")
        cap = ns.cap if ns.cap is not None else a.cap
        k = constructors.complete(skeleton, cap, budget)
    elif name == "em-space":
        need(0)
        if ns.group is None or ns.n is None:
            raise CliInputError("em-space needs --group and --n")
        group = abelian.parse_group(ns.group)
        cap = ns.cap if ns.cap is not None else ns.n + 1
        k = em.em_space(group, ns.n, cap, budget)
    else:  # pragma: no cover
        raise CliInputError(f"unknown constructor {name}")

    core.save(k, ns.output)
    result = {
        "name": k.name,
        "cap": k.cap,
        "level_sizes": [k.level_size(d) for d in range(k.cap + 1)],
        "output": ns.output,
    }
    _emit(_report(_echo(argv), {}, result, warnings), stdout)
    return EXIT_OK


def _cmd_analyze(ns, argv, stdout):
    k = load_complex(ns.complex, ns.cap)
    if ns.basepoint is not None:
        k = core.TruncatedSimplicialSet(
            k.name, k.cap, k.levels, k.faces, k.degens,
            basepoint=k.ref_of(0, ns.basepoint).index,
            subcomplexes=k.subcomplex_names, em_meta=k.em_meta,
        )
    inputs = {ns.complex: _digest(k)}
    warnings = []
    degraded = False
    what = ns.what

    if what == "kan":
        up_to = ns.up_to if ns.up_to is not None else k.cap - 1
        rep = kan.kan_check(k, up_to)
        result = rep.to_json(k)
    elif what == "minimal":
        rep = kan.minimal_check(k)
        result = {"passed": rep.passed}
        if rep.note:
            warnings.append(rep.note)
        if rep.failure:
            result["failure"] = {
                "dim": rep.failure[0], "simplices": [rep.failure[1], rep.failure[2]],
            }
    elif what == "homotopy-group":
        if ns.dim is None:
            raise CliInputError("homotopy-group needs --dim")
        table = kan.homotopy_group(k, ns.dim)
        result = table.to_json()
        if table.warnings:
            warnings.extend(table.warnings)
            degraded = True
    elif what in ("homology", "cohomology"):
        if ns.dim is None:
            raise CliInputError(f"{what} needs --dim")
        coeff = abelian.parse_group(ns.coeff) if ns.coeff else abelian.FinAbGroup(1)
        mask = _resolve_subcomplex(k, ns.subcomplex)
        fn = homology_of if what == "homology" else cohomology_of
        h = fn(k, mask, coeff, ns.dim, normalized=not ns.unnormalized)
        result = h.to_json()
        warnings.extend(h.warnings)
    elif what == "hurewicz":
        if ns.dim is None:
            raise CliInputError("hurewicz needs --dim")
        rep = hurewicz_check(k, ns.dim, normalized=not ns.unnormalized)
        result = rep.to_json()
        if rep.degradations:
            warnings.extend(rep.degradations)
            degraded = True
    elif what == "exactness":
        mask = _resolve_subcomplex(k, ns.subcomplex or "basepoint")
        up_to = ns.up_to if ns.up_to is not None else k.cap - 1
        rep = kan.exactness_check(k, mask, up_to)
        result = rep.to_json()
    elif what == "spec-cohomology":
        if ns.coeff is None or ns.n is None:
            raise CliInputError("spec-cohomology needs --coeff and --n")
        coeff = abelian.parse_group(ns.coeff)
        mask = _resolve_subcomplex(k, ns.subcomplex)
        spec = em.h_spec(k, mask, coeff, ns.n, budget=ns.level_budget)
        result = {
            "h_spec": _group_value(spec["group"]),
            "z_count": spec["z_count"],
            "b_count": spec["b_count"],
            "methods_agree": spec["methods_agree"],
        }
    elif what == "compare-sim-spec":
        if ns.coeff is None or ns.n is None:
            raise CliInputError("compare-sim-spec needs --coeff and --n")
        coeff = abelian.parse_group(ns.coeff)
        mask = _resolve_subcomplex(k, ns.subcomplex)
        rep = em.compare_sim_spec(k, mask, coeff, ns.n, budget=ns.level_budget)
        result = rep.to_json()
    else:  # pragma: no cover
        raise CliInputError(f"unknown analysis {what}")

    _emit(_report(_echo(argv), inputs, result, warnings), stdout)
    return EXIT_DEGRADED if degraded else EXIT_OK


def run(argv, stdout=None, stderr=None) -> int:
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    started = time.monotonic()
    parser = build_parser()
    try:
        ns = parser.parse_args(argv)
        if ns.command_name == "validate":
            code = _cmd_validate(ns, argv, stdout)
        elif ns.command_name == "build":
            code = _cmd_build(ns, argv, stdout)
        else:
            code = _cmd_analyze(ns, argv, stdout)
    except CliInputError as e:
        stderr.write(f"input error: {e}\n")
        code = EXIT_INPUT
    except core.ValidationError as e:
        _emit(
            _report(_echo(argv), {}, e.report.to_json(), []),
            stdout,
        )
        code = EXIT_VALIDATION
    except constructors.BudgetExceeded as e:
        stderr.write(f"budget exceeded at dimension {e.dimension}: {e.count}\n")
        code = EXIT_BUDGET
    except (kan.CapInsufficientError, kan.InsufficientKanError) as e:
        stderr.write(f"precondition degradation: {e}\n")
        code = EXIT_DEGRADED
    except (core.ParseError, abelian.GroupParseError, OSError, ValueError) as e:
        stderr.write(f"input error: {e}\n")
        code = EXIT_INPUT
    stderr.write(f"wall_time_ms={int((time.monotonic() - started) * 1000)}\n")
    return code


def main():
    sys.exit(run(sys.argv[1:]))


if __name__ == "__main__":
    main()
