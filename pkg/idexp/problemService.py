"""
Command dispatch shared by the CLI and the HTTP backend.

1. Every command takes a validated ProblemDocument and effective options.
2. Results are plain JSON-ready dicts; fractions are [num, den], infinity is "infinity".
3. Failures come back as {"success": False, "reason": ..., "message": ...}, never as exceptions.
"""

import logging
from typing import Callable, Dict, Optional

from pydantic import ValidationError

from . import config
from .charprep import delta_invariant, prepare
from .coeff import clamped_coeff_order, coeff_order, coefficient_pair, maximal_contact
from .cone import dir_rid_pairs, directrix, itc_pair, ridge, tangent_cone
from .document import OptionsSpec, ProblemDocument
from .errors import HONEST_FAILURES, IdexpError, InputError, SearchBudgetExceeded, UndeterminedError
from .fixtures import fixture_data, fixture_names
from .pairs import (AdjoinVariable, LSBScript, Pair, PairSystem, merge_system, ord_ideal,
                    ord_origin_pair, ord_origin_system, probe_equivalence, run_lsb, transform_system)
from .plot import render_polyhedron
from .polyhedra import fraction_json, ideal_polyhedron, newton_polyhedron, nu_polyhedron, pair_polyhedron

logger = logging.getLogger(__name__)


def _texts(polys) -> list:
    return [p.to_text() for p in polys]


def _pair_json(E: Optional[Pair]):
    if E is None:
        return None
    return {"generators": _texts(E.generators), "b": fraction_json(E.b)}


def _system_json(S: PairSystem) -> list:
    return [_pair_json(E) for E in S]


def _step_json(step) -> dict:
    if isinstance(step, AdjoinVariable):
        return {"adjoin": step.name}
    return {"center": list(step.chart.center), "chart": step.chart.chart_var}


def _script_json(script: Optional[LSBScript]):
    return None if script is None else [_step_json(s) for s in script.steps]


class ProblemService:
    def __init__(self, svg_path: Optional[str] = None):
        self.svg_path = svg_path or config.DEFAULT_SVG_PATH
        self.commands: Dict[str, Callable[[ProblemDocument, OptionsSpec], dict]] = {
            "order": self.order,
            "newton": self.newton,
            "poly": self.poly,
            "ideal-poly": self.ideal_poly,
            "coeff": self.coeff,
            "directrix": self.directrix,
            "ridge": self.ridge,
            "tangent-cone": self.tangent_cone,
            "max-contact": self.max_contact,
            "prepare": self.prepare,
            "delta": self.delta,
            "nu-poly": self.nu_poly,
            "transform": self.transform,
            "lsb": self.lsb,
            "probe-equiv": self.probe_equiv,
            "plot": self.plot,
        }

    def list_commands(self):
        return {"success": True, "commands": sorted(self.commands)}

    def list_fixtures(self):
        return {"success": True, "fixtures": fixture_names()}

    def get_fixture(self, name):
        try:
            return {"success": True, "name": name, "document": fixture_data(name)}
        except InputError as e:
            return {"success": False, "reason": e.reason, "message": e.message}

    def run(self, command: str, document, degree_bound: Optional[int] = None,
            search_depth: Optional[int] = None) -> dict:
        """Validate ``document`` and run ``command`` on it."""
        if command not in self.commands:
            return {"success": False, "reason": "unknown-command",
                    "message": f"Unknown command '{command}'. Available: {', '.join(sorted(self.commands))}"}
        try:
            if not isinstance(document, ProblemDocument):
                document = ProblemDocument.model_validate(document)
        except ValidationError as e:
            return {"success": False, "reason": InputError.reason, "command": command,
                    "message": _validation_message(e)}
        options = document.effective_options(degree_bound, search_depth)
        report = {"command": command, "input": document.normalized(options)}
        try:
            result = self.commands[command](document, options)
        except IdexpError as e:
            logger.info("%s failed: %s", command, e.message)
            report.update({"success": False, "reason": e.reason, "message": e.message})
            return report
        report.update({"success": True, "result": result})
        return report

    # commands

    def order(self, document: ProblemDocument, options: OptionsSpec) -> dict:
        S = document.system()
        components = []
        for E in S:
            components.append({"b": fraction_json(E.b), "ord": fraction_json(ord_ideal(E)),
                               "order": fraction_json(ord_origin_pair(E))})
        return {"components": components, "order": fraction_json(ord_origin_system(S))}

    def newton(self, document: ProblemDocument, options: OptionsSpec) -> dict:
        return {"polyhedron": newton_polyhedron(document.system()).to_json()}

    def poly(self, document: ProblemDocument, options: OptionsSpec) -> dict:
        return {"polyhedron": pair_polyhedron(document.system()).to_json()}

    def ideal_poly(self, document: ProblemDocument, options: OptionsSpec) -> dict:
        generators = [g for E in document.system() for g in E.generators]
        return {"polyhedron": ideal_polyhedron(generators).to_json()}

    def coeff(self, document: ProblemDocument, options: OptionsSpec) -> dict:
        S = document.system()
        E = S.components[0] if len(S) == 1 else merge_system(S)
        D = coefficient_pair(E)
        levels = [{"level": level.level, "weight": level.weight, "generators": _texts(level.generators)}
                  for level in D.levels]
        return {"b": D.b, "levels": levels, "coeff_order": fraction_json(coeff_order(D)),
                "clamped_order": fraction_json(clamped_coeff_order(D))}

    def tangent_cone(self, document: ProblemDocument, options: OptionsSpec) -> dict:
        S = document.system()
        I = tangent_cone(S)
        return {"variables": list(I.variables), "generators": I.to_text(), "itc": _system_json(itc_pair(S))}

    def directrix(self, document: ProblemDocument, options: OptionsSpec) -> dict:
        I = tangent_cone(document.system())
        try:
            span = directrix(I)
        except SearchBudgetExceeded as e:
            raise UndeterminedError(e.message) from e
        return {"variables": list(I.variables), "dimension": span.dimension, "forms": span.to_text()}

    def ridge(self, document: ProblemDocument, options: OptionsSpec) -> dict:
        S = document.system()
        I = tangent_cone(S)
        try:
            additive = ridge(I)
            result = dir_rid_pairs(S)
        except SearchBudgetExceeded as e:
            raise UndeterminedError(e.message) from e
        return {
            "variables": list(I.variables),
            "ridge": [{"q": phi.q, "coefficients": [fraction_json(c) for c in phi.coefficients],
                       "text": phi.to_text(I.field, I.split)} for phi in additive],
            "directrix": result.directrix.to_text(),
            "frobenius_check": result.frobenius_check,
        }

    def max_contact(self, document: ProblemDocument, options: OptionsSpec) -> dict:
        S = document.system()
        E = S.components[0] if len(S) == 1 else merge_system(S)
        contact = maximal_contact(E, choice=options.choice, degree_bound=options.degree_bound)
        return {
            "z": {y: z.to_text() for y, z in contact.z.items()},
            "inverse": {y: p.to_text() for y, p in contact.inverse.items()},
            "witnesses": [{"y": w.y, "multi_index": list(w.multi_index), "generator_index": w.generator_index,
                           "scale": fraction_json(w.scale)} for w in contact.witnesses],
            "pair": _pair_json(contact.pair),
            "polyhedron": pair_polyhedron(contact.pair).to_json(),
            "truncated": contact.truncated,
        }

    def prepare(self, document: ProblemDocument, options: OptionsSpec) -> dict:
        report = prepare(document.system(), degree_bound=options.degree_bound)
        return {
            "status": report.status.value,
            "hypothesis_ok": report.hypothesis_ok,
            "note": report.note,
            "steps": [step.to_json() for step in report.steps],
            "system": _system_json(report.system),
            "polyhedron": report.polyhedron.to_json(),
            "delta": fraction_json(report.delta),
            "delta_history": [fraction_json(d) for d in report.delta_history],
            "unsolvable": [{"vertex": [fraction_json(x) for x in n.vertex], "reason": n.reason.value}
                           for n in report.unsolvable],
        }

    def delta(self, document: ProblemDocument, options: OptionsSpec) -> dict:
        result = delta_invariant(document.system(), degree_bound=options.degree_bound)
        return {"delta": fraction_json(result.value), "status": result.status.value}

    def nu_poly(self, document: ProblemDocument, options: OptionsSpec) -> dict:
        return {"polyhedron": nu_polyhedron(document.system(), document.nu_weights()).to_json()}

    def transform(self, document: ProblemDocument, options: OptionsSpec) -> dict:
        """Apply the first blow-up of the script, after any leading adjoins."""
        S = document.system()
        script = document.lsb_script()
        script.validate(S.split)
        for step in script.steps:
            if isinstance(step, AdjoinVariable):
                S = PairSystem(tuple(E.reindex(E.split.with_t(step.name)) for E in S))
                continue
            transformed, verdicts = transform_system(S, step.chart)
            return {
                "step": _step_json(step),
                "permissible": list(verdicts),
                "variables": list(S.split.names),
                "components": None if transformed is None else _system_json(transformed),
            }
        raise InputError("The script contains no blow-up step")

    def lsb(self, document: ProblemDocument, options: OptionsSpec) -> dict:
        trace = run_lsb(document.system(), document.lsb_script())
        return {
            "completed": trace.completed,
            "stopped_at": trace.stopped_at,
            "steps": [{"index": r.index, "step": _step_json(r.step), "verdicts": list(r.verdicts),
                       "components": [_pair_json(E) for E in r.components]} for r in trace.records],
        }

    def probe_equiv(self, document: ProblemDocument, options: OptionsSpec) -> dict:
        result = probe_equivalence(document.system(), document.compare_system(), depth=options.search_depth)
        message = ("distinguishing sequence found" if result.found
                   else "no distinguishing sequence found")
        return {"found": result.found, "message": message, "witness": _script_json(result.witness),
                "permissible_for": result.permissible_for, "explored": result.explored}

    def plot(self, document: ProblemDocument, options: OptionsSpec) -> dict:
        P = pair_polyhedron(document.system())
        written = P.dimension == 2
        if written:
            render_polyhedron(P, self.svg_path)
        else:
            logger.info("No SVG for a polyhedron of dimension %d", P.dimension)
        return {"polyhedron": P.to_json(), "svg_written": written}


def _validation_message(error: ValidationError) -> str:
    parts = []
    for item in error.errors():
        where = ".".join(str(x) for x in item.get("loc", ()))
        parts.append(f"{where}: {item.get('msg')}" if where else str(item.get("msg")))
    return "; ".join(parts)


def is_honest_failure(report: dict) -> bool:
    return not report.get("success") and report.get("reason") in HONEST_FAILURES
