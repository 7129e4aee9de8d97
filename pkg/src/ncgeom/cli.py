"""Command-line front end: ``ncgeom <command> ...``.

Every command prints a report, either as ``key: value`` text or as canonical
JSON (``--json``).  Exit codes: 0 ok, 2 parse/usage, 3 precondition, 4 cap
exceeded, 5 internal invariant breach.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass

from .algebra import (
    FDAlgebra,
    change_field,
    ideal_closure,
    is_simple,
    subalgebra,
)
from .cyclotomic import field
from .derivations import derivations, inner_derivations, out
from .exactlin import ExactMatrix
from .errors import NCGeomError, ParseError, PreconditionError
from .forms import FormAlgebra, QuotientFormMap, generate_omega, isom_check, omega_C_subcomplex
from .freealg import (
    DEFAULT_STEP_CAP,
    DEFAULT_WORD_CAP,
    NCPoly,
    Presentation,
    confluence_check,
    finite_quotient,
    ideal_member,
    nf,
)
from .geometry import (
    connection_from_splitting,
    covariant_projection,
    quotient_manifold_check,
    submanifold_check,
    synthesize_splitting,
    tangent_space,
)
from .hochschild import cohomology, constrained, ordinary, relative
from .io import (
    algebra_from_json,
    algebra_to_json,
    canonical_json,
    dump_algebra,
    fixture_path,
    parse_algebra_file,
    parse_presentation_file,
)

__all__ = ["SessionConfig", "build_parser", "main", "run"]


@dataclass(frozen=True)
class SessionConfig:
    field_order: int | None = None
    hochschild_cap: int = 3
    form_cap: int = 3
    step_cap: int = DEFAULT_STEP_CAP
    word_cap: int = DEFAULT_WORD_CAP
    output: str = "text"
    workers: int = 1

    def __post_init__(self):
        for name in ("hochschild_cap", "form_cap", "step_cap", "word_cap", "workers"):
            if getattr(self, name) < 1:
                raise ValueError(f"{name} must be at least 1")
        if self.field_order is not None and self.field_order < 1:
            raise ValueError("field_order must be at least 1")
        if self.output not in ("text", "json"):
            raise ValueError("output must be 'text' or 'json'")


# inputs ---------------------------------------------------------------------------


def _resolve(path: str) -> str:
    """A path on disk, else the bundled data file of that name."""
    if os.path.exists(path):
        return path
    bundled = fixture_path(os.path.basename(path))
    return str(bundled) if bundled.exists() else path


def _load_algebra(path: str, cfg: SessionConfig) -> FDAlgebra:
    A = parse_algebra_file(_resolve(path))
    if cfg.field_order is not None:
        A = change_field(A, field(cfg.field_order))
    return A


def _load_presentation(path: str, cfg: SessionConfig) -> Presentation:
    P = parse_presentation_file(_resolve(path))
    if cfg.field_order is not None and cfg.field_order != P.field.order:
        F = field(cfg.field_order)
        if not (P.field.rational or F.order % P.field.order == 0):
            raise PreconditionError(f"Q(zeta_{P.field.order}) does not embed in Q(zeta_{F.order})")
        rels = [NCPoly(F, {w: F(c) for w, c in r.terms.items()}) for r in P.relations]
        P = Presentation(F, P.generators, rels, P.precedence, P.name)
    return P


def _tokens(text: str | None) -> list[str]:
    if not text:
        return []
    return [t.strip() for t in text.split(",") if t.strip()]


def _point_generator(A: FDAlgebra, name: str):
    """1 - (p ⊗ 1): generator of the ideal of functions vanishing at the point p."""
    prefix = name + "⊗"
    idx = [i for i, lab in enumerate(A.labels) if lab == name or lab.startswith(prefix)]
    if not idx:
        raise ParseError(f"unknown point {name!r}")
    g = A.unit.copy()
    for i in idx:
        g[i] = g[i] - A.unit[i]
    return g


def _element(A: FDAlgebra, token: str):
    try:
        return A.element(token)
    except (KeyError, ValueError) as exc:
        raise ParseError(f"cannot read element {token!r}: {exc}") from exc


def parse_ideal(A: FDAlgebra, text: str | None):
    """Comma-separated generators.

    ``point:p`` (or a bare left-factor label ``p`` that is not itself a basis
    label) stands for the ideal of functions vanishing at the point p.
    """
    gens = []
    for tok in _tokens(text):
        if tok.startswith("point:"):
            gens.append(_point_generator(A, tok[len("point:"):]))
        elif tok not in A.labels and any(lab.startswith(tok + "⊗") for lab in A.labels):
            gens.append(_point_generator(A, tok))
        else:
            gens.append(_element(A, tok))
    return ideal_closure(A, gens)


def parse_subalgebra(A: FDAlgebra, text: str | None):
    """Comma-separated spanning elements; empty or ``center`` means Z(A)."""
    toks = _tokens(text)
    if not toks or toks == ["center"]:
        return subalgebra(A, A.center().dense_basis(), name="Z")
    return subalgebra(A, [_element(A, t) for t in toks], name="B")


def _fmt(F, values) -> list[str]:
    return [F.format(v) for v in values]


def _der_rows(space) -> list[list[str]]:
    F = space.parent.field
    return [_fmt(F, X.coords()) for X in space.basis()]


# sections ---------------------------------------------------------------------------
#
# Each section is a pure function (cfg, args) -> dict so that report-all can
# hand them to worker processes and reassemble the output in order.


def section_validate(cfg: SessionConfig, args: dict) -> dict:
    A = _load_algebra(args["algebra"], cfg)
    return {
        "command": "validate",
        "algebra": A.name,
        "dim": A.dim,
        "field_order": A.field.order,
        "labels": list(A.labels),
        "unit": A.format(A.unit),
        "associative": True,
        "unital": True,
        "commutative": A.is_commutative(),
    }


def section_center(cfg: SessionConfig, args: dict) -> dict:
    A = _load_algebra(args["algebra"], cfg)
    Z = A.center()
    return {"command": "center", "algebra": A.name, "dim": Z.dim, "basis": [A.format(v) for v in Z.dense_basis()]}


def section_der(cfg: SessionConfig, args: dict) -> dict:
    A = _load_algebra(args["algebra"], cfg)
    D, I = derivations(A), inner_derivations(A)
    k, reps = out(A)
    return {
        "command": "der",
        "algebra": A.name,
        "der_dim": D.dim,
        "inner_dim": I.dim,
        "out_dim": k,
        "der_basis": _der_rows(D),
        "out_representatives": [_fmt(A.field, X.coords()) for X in reps],
    }


def section_hochschild(cfg: SessionConfig, args: dict) -> dict:
    A = _load_algebra(args["algebra"], cfg)
    n = 1 if args.get("degree") is None else args["degree"]
    kind = args.get("variant") or "ordinary"
    if kind == "ordinary":
        variant = ordinary(A)
    elif kind == "relative":
        variant = relative(A, parse_subalgebra(A, args.get("subalgebra_basis")))
    else:
        if not args.get("ideal_gens"):
            raise PreconditionError("the constrained variant needs --ideal-gens")
        variant = constrained(A, parse_ideal(A, args["ideal_gens"]))
    res = cohomology(A, n=n, variant=variant, cap=cfg.hochschild_cap)
    F = A.field
    return {
        "command": "hochschild",
        "algebra": A.name,
        "variant": kind,
        "degree": n,
        "dim_H": res.dim,
        "dim_Z": res.cocycles.dim,
        "dim_B": res.coboundaries.dim,
        "representatives": [_fmt(F, v) for v in res.representatives.dense_basis()],
    }


def section_submanifold(cfg: SessionConfig, args: dict) -> dict:
    A = _load_algebra(args["algebra"], cfg)
    C = parse_ideal(A, args.get("ideal_gens"))
    rep = submanifold_check(A, C, with_seccohom=bool(args.get("seccohom")))
    out_ = {"command": "submanifold", **rep.to_dict()}
    out_["algebra"] = A.name
    out_["dims_tuple"] = [rep.dims[k] for k in ("der_A", "G_C", "G_A", "der_Q")]
    if is_simple(rep.quotient.q):
        out_["tangent_dim"] = tangent_space(A, C).dim
    return out_


def section_quotient_manifold(cfg: SessionConfig, args: dict) -> dict:
    A = _load_algebra(args["algebra"], cfg)
    B = parse_subalgebra(A, args.get("subalgebra_basis"))
    rep = quotient_manifold_check(A, B, args.get("mode") or "strict")
    out_ = {"command": "quotient-manifold", **rep.to_dict()}
    out_["algebra"] = A.name
    out_["subalgebra_basis"] = [A.format(v) for v in B.space.dense_basis()]
    out_["failing"] = rep.failing
    if args.get("isom"):
        out_["isom"] = isom_check(A, B, rep.h, rep.ghat, cap=min(2, cfg.form_cap)).to_dict()
    return out_


def section_forms(cfg: SessionConfig, args: dict) -> dict:
    A = _load_algebra(args["algebra"], cfg)
    cap = min(2, cfg.form_cap) if args.get("degree") is None else args["degree"]
    fa = FormAlgebra(A, cfg.form_cap)
    fa._check_degree(cap)
    omega = generate_omega(fa, cap)
    report = {
        "command": "forms",
        "algebra": A.name,
        "degree": cap,
        "der_dim": fa.r,
        "omega_bar": [fa.full(n).dim for n in range(cap + 1)],
        "omega": [s.dim for s in omega],
    }
    if args.get("ideal_gens"):
        C = parse_ideal(A, args["ideal_gens"])
        sub = omega_C_subcomplex(fa, C.space, cap)
        report["omega_C"] = [s.dim for s in sub]
        rep = submanifold_check(A, C)
        if rep.verdict:
            pm = QuotientFormMap(fa, rep.quotient, FormAlgebra(rep.quotient.q, cfg.form_cap), rep.pi)
            fq_omega = generate_omega(pm.fq, cap)
            ranks, kernels = [], []
            for n in range(cap + 1):
                lm = pm.linear_image(n, omega[n])
                ranks.append(lm.rank)
                kernels.append(omega[n].dim - lm.rank)
            report["p_rank"] = ranks
            report["omega_Q"] = [s.dim for s in fq_omega]
            report["p_kernel"] = kernels
    return report


def section_connection(cfg: SessionConfig, args: dict) -> dict:
    A = _load_algebra(args["algebra"], cfg)
    B = parse_subalgebra(A, args.get("subalgebra_basis"))
    psi = synthesize_splitting(A, B)
    conn = connection_from_splitting(psi)
    P = covariant_projection(psi)
    F = A.field
    return {
        "command": "connection",
        "algebra": A.name,
        "der_B_dim": len(psi.images),
        "h_dim": psi.h.dim,
        "g_hat_dim": psi.ghat.dim,
        "splitting": [_fmt(F, X.coords()) for X in psi.images],
        "flat": conn.is_flat(),
        "projection_rank": ExactMatrix(P, F).rank() if P.size else 0,
    }


def section_freealg(cfg: SessionConfig, args: dict) -> dict:
    P = _load_presentation(args["pres"], cfg)
    R = P.rewrite_system()
    bound = args.get("bound") or 12
    action = args["action"]
    if action == "nf":
        p = P.poly(_need(args, "poly"))
        return {"command": "freealg nf", "input": p.format(), "normal_form": nf(p, R, cfg.step_cap).format()}
    report = confluence_check(R, bound, cfg.step_cap)
    if action == "member":
        p = P.poly(_need(args, "poly"))
        return {
            "command": "freealg member",
            "input": p.format(),
            "member": ideal_member(p, R, bound, report),
            "confluence": report.to_dict(),
        }
    fq = finite_quotient(R, cfg.word_cap, bound, report, name=P.name)
    return {
        "command": "freealg quotient",
        "dim": fq.algebra.dim,
        "words": [w and "*".join(w) or "1" for w in fq.words],
        "confluence": report.to_dict(),
        "algebra": algebra_to_json(fq.algebra),
    }


def _need(args: dict, key: str):
    if not args.get(key):
        raise ParseError(f"--{key} is required for this command")
    return args[key]


SECTIONS = {
    "validate": section_validate,
    "center": section_center,
    "der": section_der,
    "hochschild": section_hochschild,
    "submanifold": section_submanifold,
    "quotient-manifold": section_quotient_manifold,
    "forms": section_forms,
    "connection": section_connection,
    "freealg": section_freealg,
}


def _run_section(task):
    name, cfg, args = task
    return SECTIONS[name](cfg, args)


def report_all(cfg: SessionConfig, args: dict) -> dict:
    """validate -> center -> der -> the requested predicates, in that order."""
    tasks = [("validate", cfg, args), ("center", cfg, args), ("der", cfg, args)]
    if args.get("ideal_gens"):
        tasks.append(("submanifold", cfg, dict(args, seccohom=True)))
    if args.get("subalgebra_basis") or not args.get("ideal_gens"):
        tasks.append(("quotient-manifold", cfg, args))
    if cfg.workers > 1:
        with ProcessPoolExecutor(max_workers=cfg.workers) as pool:
            results = list(pool.map(_run_section, tasks))
    else:
        results = [_run_section(t) for t in tasks]
    return {"command": "report-all", "sections": results}


# rendering --------------------------------------------------------------------------


def _text_value(v) -> str:
    if isinstance(v, bool):
        return "YES" if v else "NO"
    if isinstance(v, list) and v and all(isinstance(x, list) and x and isinstance(x[0], str) for x in v):
        # coordinate vectors are only readable in JSON
        return f"{len(v)} vectors of length {len(v[0])} (see --json)"
    if isinstance(v, (list, dict)):
        return json.dumps(v, sort_keys=True, ensure_ascii=False)
    return str(v)


def render_text(report: dict, indent: str = "") -> str:
    lines = []
    for key, value in report.items():
        if key == "sections":
            for sec in value:
                lines.append(f"{indent}[{sec.get('command')}]")
                lines.append(render_text(sec, indent + "  ").rstrip("\n"))
        elif isinstance(value, dict) and key != "algebra":
            lines.append(f"{indent}{key}:")
            lines.append(render_text(value, indent + "  ").rstrip("\n"))
        else:
            lines.append(f"{indent}{key}: {_text_value(value)}")
    return "\n".join(lines) + "\n"


def render(report: dict, cfg: SessionConfig) -> str:
    if cfg.output == "json":
        return canonical_json(report)
    return render_text(report)


# argument parsing --------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--json", action="store_true", help="emit canonical JSON")
    common.add_argument("--field-order", type=int, default=None, help="work over Q(zeta_m)")
    common.add_argument("--hochschild-cap", type=int, default=3)
    common.add_argument("--form-cap", type=int, default=3)
    common.add_argument("--step-cap", type=int, default=DEFAULT_STEP_CAP)
    common.add_argument("--word-cap", type=int, default=DEFAULT_WORD_CAP)
    common.add_argument("--workers", type=int, default=1, help="parallel workers for report-all")

    alg = argparse.ArgumentParser(add_help=False)
    alg.add_argument("--algebra", required=True, metavar="PATH")

    ideal = argparse.ArgumentParser(add_help=False)
    ideal.add_argument("--ideal-gens", metavar="LIST", help="comma-separated generators, or a point label")

    sub = argparse.ArgumentParser(add_help=False)
    sub.add_argument("--subalgebra-basis", metavar="LIST", help="comma-separated spanning set (default: the center)")

    parser = argparse.ArgumentParser(prog="ncgeom", description="Derivation-based geometry of finite-dimensional algebras")
    cmds = parser.add_subparsers(dest="command", required=True)
    cmds.add_parser("validate", parents=[common, alg], help="parse and check an algebra file")
    cmds.add_parser("center", parents=[common, alg], help="center Z(A)")
    cmds.add_parser("der", parents=[common, alg], help="Der, Int and Out")
    p = cmds.add_parser("hochschild", parents=[common, alg, ideal, sub], help="Hochschild cohomology")
    p.add_argument("--degree", type=int, default=1)
    p.add_argument("--variant", choices=["ordinary", "relative", "constrained"], default="ordinary")
    p = cmds.add_parser("submanifold", parents=[common, alg, ideal], help="submanifold predicate for A/C")
    p.add_argument("--seccohom", action="store_true", help="also test the H^1 sequence")
    p = cmds.add_parser("quotient-manifold", parents=[common, alg, sub], help="quotient-manifold predicate")
    p.add_argument("--mode", choices=["strict", "relaxed"], default="strict")
    p.add_argument("--isom", action="store_true", help="compare basic forms with forms on B")
    p = cmds.add_parser("forms", parents=[common, alg, ideal], help="form spaces up to a degree")
    p.add_argument("--degree", type=int, default=None)
    cmds.add_parser("connection", parents=[common, alg, sub], help="connection from a synthesized splitting")
    p = cmds.add_parser("freealg", parents=[common], help="rewriting in presented algebras")
    p.add_argument("action", choices=["nf", "member", "quotient"])
    p.add_argument("--pres", required=True, metavar="PATH")
    p.add_argument("--poly", help='polynomial such as "x*y - y*x"')
    p.add_argument("--bound", type=int, default=12, help="degree bound for the confluence check")
    p.add_argument("--output", metavar="PATH", help="write the quotient algebra file here")
    p = cmds.add_parser("report-all", parents=[common, alg, ideal, sub], help="validate, center, der and predicates")
    p.add_argument("--mode", choices=["strict", "relaxed"], default="strict")
    return parser


def _config(ns) -> SessionConfig:
    return SessionConfig(
        field_order=ns.field_order,
        hochschild_cap=ns.hochschild_cap,
        form_cap=ns.form_cap,
        step_cap=ns.step_cap,
        word_cap=ns.word_cap,
        output="json" if ns.json else "text",
        workers=ns.workers,
    )


def run(argv=None) -> tuple[int, str, str]:
    """Run the CLI and return (exit code, stdout, stderr) without touching sys streams."""
    parser = build_parser()
    try:
        ns = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0), "", ""
    try:
        cfg = _config(ns)
    except ValueError as exc:
        return 2, "", f"error: {exc}\n"
    args = {k: v for k, v in vars(ns).items() if k not in ("command",)}
    try:
        if ns.command == "report-all":
            report = report_all(cfg, args)
        else:
            report = SECTIONS[ns.command](cfg, args)
            if ns.command == "freealg" and ns.action == "quotient":
                algebra = report.pop("algebra")
                if ns.output:
                    dump_algebra(algebra_from_json(algebra, ns.output), ns.output)
                    report["output"] = ns.output
                else:
                    return 0, canonical_json(algebra), ""
    except NCGeomError as exc:
        return exc.exit_code, "", _error_text(exc, cfg)
    return 0, render(report, cfg), ""


def _error_text(exc: NCGeomError, cfg: SessionConfig) -> str:
    if cfg.output == "json":
        return canonical_json({"error": type(exc).__name__, "exit_code": exc.exit_code, "message": str(exc)})
    return f"error ({type(exc).__name__}): {exc}\n"


def main(argv=None) -> int:
    code, stdout, stderr = run(argv)
    sys.stdout.write(stdout)
    sys.stderr.write(stderr)
    return code


if __name__ == "__main__":
    raise SystemExit(main())
