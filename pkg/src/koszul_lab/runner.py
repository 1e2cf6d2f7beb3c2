"""Script execution: evaluates parsed statements, runs checks, collects
verdicts and DOT artifacts into a canonical, byte-reproducible report.

Exit codes: 0 all checks hold, 1 some check fails (with witnesses in the
report), 2 usage/parse/semantic error, 3 budget exceeded.  Reports carry
deterministic counters instead of wall-clock timings so that reruns and
different thread counts produce identical bytes.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Optional

from . import __version__
from .config import Budget, DEFAULT_BUDGET
from .constructions import (
    demushkin,
    direct_sum,
    opposite,
    preset,
    resolve_twist,
    skew_tensor,
    twisted_extension,
)
from .dsl import AlgebraDef, Assign, CheckStmt, Ctor, EmitStmt, Ref, Script, parse
from .errors import (
    BudgetExceededError,
    InvalidParamsError,
    InvalidTwistError,
    KoszulLabError,
    ScriptError,
)
from .freealg import QuadraticPresentation, parse_poly, presentation_from_texts
from .graded import (
    Element,
    GradedAlgebra,
    default_truncation,
    element_from_poly,
    realize,
)
from .ideals import ideal_from_subspace
from .koszul import (
    koszul_flag_check,
    lattice_family,
    strong_koszulity,
    strong_koszulity_search,
    universal_koszulity,
    verify_koszul_filtration,
)
from .linalg import Subspace
from .resolutions import (
    Verdict,
    betti_table,
    linear_resolution_check,
    module_augmentation,
    module_ideal,
    module_quotient,
    module_trivial,
    poincare_from_hilbert,
)
from .rewriting import RewritingSystem, certify_pbw, graph_to_dot

EXIT_OK = 0
EXIT_CHECK_FAILED = 1
EXIT_USAGE = 2
EXIT_BUDGET = 3


@dataclass
class RunOptions:
    degree: Optional[int] = None
    threads: int = 1
    budget: Budget = DEFAULT_BUDGET


@dataclass
class RunResult:
    report: dict
    exit_code: int
    dot_files: dict[str, str] = field(default_factory=dict)
    dot_dir_hint: Optional[str] = None
    json_path_hint: Optional[str] = None

    def report_bytes(self) -> bytes:
        return report_to_bytes(self.report)


def report_to_bytes(report: dict) -> bytes:
    """Canonical JSON bytes: sorted keys, fixed layout, trailing newline."""
    return (json.dumps(report, sort_keys=True, indent=2) + "\n").encode("utf-8")


class _Session:
    def __init__(self, options: RunOptions):
        self.options = options
        self.presentations: dict[str, QuadraticPresentation] = {}
        self.realized: dict[tuple[str, int], GradedAlgebra] = {}
        self.pbw_artifacts: dict[str, tuple] = {}  # name -> (system, certificate)
        self.checks: list[dict] = []
        self.dot_files: dict[str, str] = {}
        self.dot_dir_hint: Optional[str] = None
        self.json_path_hint: Optional[str] = None

    # -- errors -------------------------------------------------------------

    def semantic_error(self, code: str, message: str, stmt) -> ScriptError:
        return ScriptError("semantic", code, message, stmt.line, stmt.col)

    # -- bindings -------------------------------------------------------------

    def define(self, name: str, pres: QuadraticPresentation, stmt):
        if name in self.presentations:
            raise self.semantic_error("duplicate_name", f"{name!r} is already defined", stmt)
        self.presentations[name] = pres

    def lookup(self, name: str, stmt) -> QuadraticPresentation:
        pres = self.presentations.get(name)
        if pres is None:
            raise self.semantic_error("unknown_name", f"unknown algebra {name!r}", stmt)
        return pres

    def algebra_for(self, name: str, degree: int, stmt) -> GradedAlgebra:
        key = (name, degree)
        if key not in self.realized:
            pres = self.lookup(name, stmt)
            self.realized[key] = realize(pres, degree, budget=self.options.budget)
        return self.realized[key]

    def degree_for(self, pres: QuadraticPresentation, kwargs: dict) -> int:
        if "degree" in kwargs:
            return int(kwargs["degree"])
        if self.options.degree is not None:
            return self.options.degree
        return default_truncation(pres.num_generators)

    # -- constructor evaluation ------------------------------------------------

    def eval_ctor(self, expr: Ctor, stmt) -> QuadraticPresentation:
        name = expr.name
        args = [self.eval_value(a, stmt) for a in expr.args]
        kwargs = {k: self.eval_value(v, stmt) for k, v in expr.kwargs}
        try:
            return self.build_ctor(name, args, kwargs, stmt)
        except (InvalidParamsError, InvalidTwistError) as exc:
            raise ScriptError("semantic", "bad_constructor", str(exc), expr.line, expr.col)

    def eval_value(self, value, stmt):
        if isinstance(value, Ctor):
            return self.eval_ctor(value, stmt)
        if isinstance(value, tuple):
            return tuple(self.eval_value(v, stmt) for v in value)
        return value

    def _as_pres(self, value, stmt) -> QuadraticPresentation:
        if isinstance(value, QuadraticPresentation):
            return value
        if isinstance(value, Ref):
            return self.lookup(value.name, stmt)
        raise self.semantic_error("bad_argument", "expected an algebra argument", stmt)

    PRESET_POSITIONAL = {
        "free": ("d", "p"),
        "poly_t": ("p",),
        "c2": (),
        "t_mod_t2": (),
        "demushkin1": ("k", "p"),
        "demushkin2": ("k",),
        "demushkin3": ("k",),
        "superpythagorean": ("d",),
        "rigid_level2": ("d",),
        "exterior": ("m", "p"),
    }

    def build_ctor(self, name, args, kwargs, stmt) -> QuadraticPresentation:
        if name in self.PRESET_POSITIONAL:
            names = self.PRESET_POSITIONAL[name]
            params = {}
            if len(args) > len(names):
                raise self.semantic_error(
                    "wrong_arity",
                    f"{name} takes at most {len(names)} positional arguments", stmt)
            for key, value in zip(names, args):
                params[key] = int(value)
            for key, value in kwargs.items():
                if key in params:
                    raise self.semantic_error(
                        "wrong_arity", f"{name} got {key!r} twice", stmt)
                params[key] = int(value)
            return preset(name, **params)
        if name == "demushkin":
            params = {k: int(v) for k, v in kwargs.items()}
            return demushkin(**params)
        if name in ("direct_sum", "witt_product"):
            if len(args) < 2:
                raise self.semantic_error("wrong_arity", f"{name} needs two algebras", stmt)
            out = self._as_pres(args[0], stmt)
            for a in args[1:]:
                out = direct_sum(out, self._as_pres(a, stmt))
            return out
        if name == "skew_tensor":
            if len(args) < 2:
                raise self.semantic_error("wrong_arity", "skew_tensor needs two algebras", stmt)
            out = self._as_pres(args[0], stmt)
            for a in args[1:]:
                out = skew_tensor(out, self._as_pres(a, stmt))
            return out
        if name == "twisted_extension":
            if len(args) != 1:
                raise self.semantic_error("wrong_arity",
                                          "twisted_extension needs one algebra", stmt)
            child = self._as_pres(args[0], stmt)
            tvec = resolve_twist(child, kwargs.get("t"))
            m = int(kwargs.get("m", 1))
            return twisted_extension(child, tvec, m)
        if name == "witt_group_ring":
            if len(args) != 1:
                raise self.semantic_error("wrong_arity",
                                          "witt_group_ring needs one algebra", stmt)
            child = self._as_pres(args[0], stmt)
            if child.designated is None:
                raise self.semantic_error(
                    "bad_constructor",
                    "witt_group_ring needs a child with a designated twisting element",
                    stmt)
            return twisted_extension(child, child.designated, int(kwargs.get("m", 1)))
        if name == "opposite":
            if len(args) != 1:
                raise self.semantic_error("wrong_arity", "opposite needs one algebra", stmt)
            return opposite(self._as_pres(args[0], stmt))
        raise self.semantic_error("unknown_constructor", f"unknown constructor {name!r}", stmt)

    # -- statements -------------------------------------------------------------

    def run_statement(self, stmt):
        if isinstance(stmt, AlgebraDef):
            try:
                pres = presentation_from_texts(
                    stmt.p, stmt.generators, stmt.relations, provenance=stmt.name)
            except InvalidParamsError as exc:
                code = ("non_quadratic_relator"
                        if "degree 2" in str(exc) else "bad_presentation")
                raise ScriptError("semantic", code, str(exc), stmt.line, stmt.col)
            self.define(stmt.name, pres, stmt)
            return
        if isinstance(stmt, Assign):
            self.define(stmt.name, self.eval_ctor(stmt.expr, stmt), stmt)
            return
        if isinstance(stmt, CheckStmt):
            self.run_check(stmt)
            return
        if isinstance(stmt, EmitStmt):
            self.run_emit(stmt)
            return
        raise self.semantic_error("bad_statement", f"cannot execute {stmt!r}", stmt)

    # -- checks ---------------------------------------------------------------

    def _target(self, stmt) -> tuple[str, QuadraticPresentation]:
        if not stmt.args or not isinstance(stmt.args[0], Ref):
            raise self.semantic_error("wrong_arity",
                                      f"check {stmt.name} needs an algebra argument", stmt)
        name = stmt.args[0].name
        return name, self.lookup(name, stmt)

    def _record(self, check: str, target: Optional[str], params: dict,
                status: str, up_to=None, witness=None, data=None, stats=None):
        self.checks.append({
            "index": len(self.checks),
            "check": check,
            "target": target,
            "params": params,
            "status": status,
            "up_to": up_to,
            "witness": witness,
            "data": data or {},
            "stats": stats or {},
        })

    def _record_verdict(self, check, target, params, verdict: Verdict, data=None):
        self._record(check, target, params, verdict.status, verdict.up_to,
                     verdict.witness, data, verdict.stats)

    def _order_elements(self, A: GradedAlgebra, spec, stmt) -> list[Element]:
        """An ordered basis from a list of generator names or poly texts."""
        out = []
        for item in spec:
            text = item.name if isinstance(item, Ref) else str(item)
            try:
                poly = parse_poly(text, A.pres.generator_names, A.p)
                out.append(element_from_poly(A, poly))
            except (InvalidParamsError, KeyError) as exc:
                raise self.semantic_error("bad_argument", str(exc), stmt)
        return out

    def run_check(self, stmt: CheckStmt):
        # module specs (ideal(...)/quotient(...)) are interpreted by the
        # check, not evaluated as algebra constructors
        kwargs = {
            k: (v if k == "module" else self.eval_value(v, stmt))
            for k, v in stmt.kwargs
        }
        handler = getattr(self, f"check_{stmt.name}", None)
        if handler is None:
            raise self.semantic_error("unknown_check", f"unknown check {stmt.name!r}", stmt)
        try:
            handler(stmt, kwargs)
        except (InvalidParamsError, InvalidTwistError) as exc:
            raise self.semantic_error("bad_argument", str(exc), stmt)

    def check_realize(self, stmt, kwargs):
        name, pres = self._target(stmt)
        N = self.degree_for(pres, kwargs)
        A = self.algebra_for(name, N, stmt)
        self._record("realize", name, {"degree": N}, "info", data={
            "dims": list(A.dims),
            "finite_dim_certified": A.finite_dim_certified,
        })

    def check_hilbert(self, stmt, kwargs):
        name, pres = self._target(stmt)
        N = self.degree_for(pres, kwargs)
        A = self.algebra_for(name, N, stmt)
        self._record("hilbert", name, {"degree": N}, "info", data={
            "series": A.hilbert_series(),
            "certified": A.finite_dim_certified,
        })

    def check_poincare(self, stmt, kwargs):
        name, pres = self._target(stmt)
        N = self.degree_for(pres, kwargs)
        A = self.algebra_for(name, N, stmt)
        self._record("poincare", name, {"degree": N}, "info", data={
            "series": poincare_from_hilbert(A.dims, N),
        })

    def check_pbw(self, stmt, kwargs):
        name, pres = self._target(stmt)
        N = self.degree_for(pres, kwargs)
        A = self.algebra_for(name, N, stmt)
        order = None
        params = {"degree": N}
        if "order" in kwargs:
            names = [x.name if isinstance(x, Ref) else str(x) for x in kwargs["order"]]
            order = pres.order_from_names(names)
            params["order"] = names
        cert = certify_pbw(pres, order, N=N, budget=self.options.budget)
        system = RewritingSystem.from_presentation(pres, order)
        self.pbw_artifacts[name] = (system, cert)
        counts_match = cert.reduced_counts == list(A.dims) if cert.is_pbw else None
        data = {
            "critical_monomials": len(cert.graphs),
            "confluent": sum(1 for g in cert.graphs if g.confluent),
            "reduced_counts": cert.reduced_counts,
            "reduced_counts_match_dims": counts_match,
            "graphs": [
                {"vertices": len(g.vertices), "edges": len(g.edges),
                 "terminals": len(g.terminals)}
                for g in cert.graphs
            ],
        }
        if cert.is_pbw and not counts_match:
            raise KoszulLabError(
                "internal consistency failure: PBW reduced counts differ from dims")
        if cert.is_pbw:
            self._record("pbw", name, params, "holds_certified", data=data)
        else:
            self._record("pbw", name, params, "fails",
                         witness={"critical_monomial": list(cert.witness)}, data=data)

    def check_universal_koszul(self, stmt, kwargs):
        name, pres = self._target(stmt)
        N = self.degree_for(pres, kwargs)
        side = "left"
        if "side" in kwargs:
            side = kwargs["side"].name if isinstance(kwargs["side"], Ref) else str(kwargs["side"])
        A = self.algebra_for(name, N, stmt)
        verdict = universal_koszulity(
            A, side=side, up_to=N, budget=self.options.budget,
            threads=self.options.threads)
        self._record_verdict("universal_koszul", name, {"degree": N, "side": side}, verdict)

    def check_strong_koszul(self, stmt, kwargs):
        name, pres = self._target(stmt)
        N = self.degree_for(pres, kwargs)
        A = self.algebra_for(name, N, stmt)
        params = {"degree": N}
        X = None
        if "basis" in kwargs:
            X = self._order_elements(A, kwargs["basis"], stmt)
            params["basis"] = [list(u.coords) for u in X]
        verdict = strong_koszulity(A, X, up_to=N)
        self._record_verdict("strong_koszul", name, params, verdict)

    def check_strong_koszul_search(self, stmt, kwargs):
        name, pres = self._target(stmt)
        N = self.degree_for(pres, kwargs)
        A = self.algebra_for(name, N, stmt)
        verdict, rows = strong_koszulity_search(A, up_to=N, budget=self.options.budget)
        self._record_verdict("strong_koszul_search", name, {"degree": N}, verdict,
                             data={"bases": rows})

    def check_koszul_filtration(self, stmt, kwargs):
        name, pres = self._target(stmt)
        N = self.degree_for(pres, kwargs)
        A = self.algebra_for(name, N, stmt)
        family_spec = kwargs.get("family", Ref("all"))
        params = {"degree": N}
        if isinstance(family_spec, Ref) and family_spec.name == "all":
            family = lattice_family(A, self.options.budget)
            params["family"] = "all"
        else:
            family = []
            for member in family_spec:
                vectors = []
                for text in member:
                    poly = parse_poly(str(text), pres.generator_names, pres.p)
                    vectors.append(element_from_poly(A, poly).coords)
                family.append(Subspace.from_vectors(A.p, A.dims[1], vectors))
            params["family"] = [[str(t) for t in member] for member in family_spec]
        witness, verdict = verify_koszul_filtration(A, family, up_to=N)
        data = {"family_size": len(family) if witness is None else len(witness.family)}
        if witness is not None:
            data["witnessed_ideals"] = len(witness.witnesses)
        self._record_verdict("koszul_filtration", name, params, verdict, data=data)

    def check_koszul_flag(self, stmt, kwargs):
        name, pres = self._target(stmt)
        N = self.degree_for(pres, kwargs)
        A = self.algebra_for(name, N, stmt)
        params = {"degree": N}
        X = None
        if "order" in kwargs:
            X = self._order_elements(A, kwargs["order"], stmt)
            params["order"] = [list(u.coords) for u in X]
        verdict = koszul_flag_check(A, X)
        self._record_verdict("koszul_flag", name, params, verdict)

    def _module_for(self, A: GradedAlgebra, pres, spec, j_max, stmt):
        if spec is None or (isinstance(spec, Ref) and spec.name == "K"):
            return module_trivial(A, j_max), "K"
        if isinstance(spec, Ref) and spec.name == "aug":
            return module_augmentation(A, j_max), "aug"
        if isinstance(spec, QuadraticPresentation):
            raise self.semantic_error("bad_argument", "module must be K/aug/ideal/quotient", stmt)
        if isinstance(spec, Ctor):
            kind = spec.name
            texts = spec.args[0] if spec.args else ()
            vectors = []
            for text in texts:
                poly = parse_poly(str(text), pres.generator_names, pres.p)
                vectors.append(element_from_poly(A, poly).coords)
            W = Subspace.from_vectors(A.p, A.dims[1], vectors)
            I = ideal_from_subspace(A, W, up_to=min(A.N, j_max + 1))
            if kind == "ideal":
                return module_ideal(I, j_max), f"ideal({list(texts)})"
            if kind == "quotient":
                return module_quotient(A, I, j_max), f"quotient({list(texts)})"
        raise self.semantic_error("bad_argument", "module must be K/aug/ideal/quotient", stmt)

    def check_betti(self, stmt, kwargs):
        name, pres = self._target(stmt)
        N = self.degree_for(pres, kwargs)
        A = self.algebra_for(name, N, stmt)
        j_max = int(kwargs.get("j", min(6, N - 1)))
        i_max = int(kwargs.get("i", j_max))
        module, label = self._module_for(A, pres, kwargs.get("module"), j_max, stmt)
        table = betti_table(A, module, i_max, j_max)
        self._record("betti", name,
                     {"degree": N, "module": label, "i": i_max, "j": j_max},
                     "info", data={
                         "entries": [[i, j, b] for (i, j), b in sorted(table.entries.items())],
                         "diagonal": table.diagonal(),
                         "min_degree": table.min_degree,
                         "terminated_at": table.terminated_at,
                     })

    def check_linear_resolution(self, stmt, kwargs):
        name, pres = self._target(stmt)
        N = self.degree_for(pres, kwargs)
        A = self.algebra_for(name, N, stmt)
        j_max = int(kwargs.get("j", min(6, N - 1)))
        i_max = int(kwargs.get("i", j_max))
        module, label = self._module_for(A, pres, kwargs.get("module"), j_max, stmt)
        verdict, table = linear_resolution_check(A, module, i_max, j_max)
        self._record_verdict(
            "linear_resolution", name,
            {"degree": N, "module": label, "i": i_max, "j": j_max},
            verdict,
            data={"entries": [[i, j, b] for (i, j), b in sorted(table.entries.items())],
                  "min_degree": table.min_degree})

    def check_all(self, stmt, kwargs):
        name, pres = self._target(stmt)
        self.check_realize(stmt, dict(kwargs))
        self.check_hilbert(stmt, dict(kwargs))
        self.check_pbw(stmt, dict(kwargs))
        self.check_universal_koszul(stmt, dict(kwargs))
        if pres.p == 2 and pres.num_generators <= self.options.budget.basis_dim_cap:
            self.check_strong_koszul_search(stmt, dict(kwargs))
        self.check_betti(stmt, dict(kwargs))

    # -- emit ---------------------------------------------------------------

    def run_emit(self, stmt: EmitStmt):
        kwargs = {k: self.eval_value(v, stmt) for k, v in stmt.kwargs}
        if stmt.target == "dot":
            if not stmt.args or not isinstance(stmt.args[0], Ref):
                raise self.semantic_error("wrong_arity", "emit dot needs an algebra", stmt)
            name = stmt.args[0].name
            artifact = self.pbw_artifacts.get(name)
            if artifact is None:
                raise self.semantic_error(
                    "no_artifacts",
                    f"emit dot({name}) requires a prior pbw check on {name}", stmt)
            system, cert = artifact
            if "dir" in kwargs:
                self.dot_dir_hint = str(kwargs["dir"])
            for index, graph in enumerate(cert.graphs):
                fname = f"{name}-critical-{index}.dot"
                self.dot_files[fname] = graph_to_dot(graph, system, title=fname)
            self._record("emit_dot", name, {"files": len(cert.graphs)}, "info",
                         data={"files": sorted(self.dot_files)})
            return
        if stmt.target == "json":
            path = None
            if stmt.args:
                path = str(self.eval_value(stmt.args[0], stmt))
            if "path" in kwargs:
                path = str(kwargs["path"])
            self.json_path_hint = path
            self._record("emit_json", None, {"path": path}, "info")
            return
        raise self.semantic_error("unknown_emit", f"unknown emit target {stmt.target!r}", stmt)

    # -- report ----------------------------------------------------------------

    def build_report(self, exit_code: int, error: Optional[dict] = None) -> dict:
        algebras = {}
        for name, pres in sorted(self.presentations.items()):
            realized = [self.realized[k] for k in sorted(self.realized) if k[0] == name]
            entry = {
                "p": pres.p,
                "generators": list(pres.generator_names),
                "relations": pres.relator_texts(),
                "provenance": pres.provenance,
                "N": realized[-1].N if realized else None,
                "dims": list(realized[-1].dims) if realized else None,
            }
            algebras[name] = entry
        failed = sum(1 for c in self.checks if c["status"] == "fails")
        report = {
            "schema_version": 1,
            "tool": {"name": "koszul-lab", "version": __version__},
            "options": {
                "degree": self.options.degree,
                "budget": self.options.budget.max_enumeration,
            },
            "algebras": algebras,
            "checks": self.checks,
            "summary": {
                "total_checks": len(self.checks),
                "failed_checks": failed,
                "exit_code": exit_code,
            },
        }
        if error is not None:
            report["error"] = error
        return report


def run_script(text: str, options: Optional[RunOptions] = None) -> RunResult:
    """Parse and execute a script; never raises for domain failures, which
    are encoded in the exit code and report."""
    options = options or RunOptions()
    session = _Session(options)
    try:
        script = parse(text)
        for stmt in script.statements:
            session.run_statement(stmt)
    except ScriptError as exc:
        error = {
            "kind": exc.kind,
            "code": exc.code,
            "message": str(exc),
            "line": exc.line,
            "col": exc.col,
        }
        report = session.build_report(EXIT_USAGE, error)
        return RunResult(report, EXIT_USAGE, session.dot_files,
                         session.dot_dir_hint, session.json_path_hint)
    except BudgetExceededError as exc:
        error = {"kind": "budget", "code": "budget_exceeded", "message": str(exc)}
        report = session.build_report(EXIT_BUDGET, error)
        return RunResult(report, EXIT_BUDGET, session.dot_files,
                         session.dot_dir_hint, session.json_path_hint)
    failed = any(c["status"] == "fails" for c in session.checks)
    exit_code = EXIT_CHECK_FAILED if failed else EXIT_OK
    report = session.build_report(exit_code)
    return RunResult(report, exit_code, session.dot_files,
                     session.dot_dir_hint, session.json_path_hint)
