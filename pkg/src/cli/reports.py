"""
qspine - Report Assembly

Builds the JSON report of every command, validates it against the shipped
schema and renders the plain-text form. Key order and number formatting
are fixed, so identical inputs give identical bytes.
"""

import json
from functools import lru_cache
from pathlib import Path
from typing import Any, Dict, List, Optional

from jsonschema import Draft202012Validator

from core.fuzz import FuzzReport
from core.homology import HomologySummary
from core.linkdiag import FramedLink, linking_matrix, signature_counts
from core.skein import InvariantResult, RTWValue
from core.verify import VerifyReport
from utils.error_handler import SchemaValidationError

SCHEMA_VERSION = "1.0"
SCHEMA_PATH = Path(__file__).parent.parent / "schemas" / "report.schema.json"


@lru_cache(maxsize=1)
def load_schema() -> Dict[str, Any]:
    with open(SCHEMA_PATH, 'r', encoding='utf-8') as f:
        return json.load(f)


def validate_report(report: Dict[str, Any]) -> Dict[str, Any]:
    """
    Check a report against the schema.

    Raises:
        SchemaValidationError: the first violation, with its JSON path
    """
    validator = Draft202012Validator(load_schema())
    errors = sorted(validator.iter_errors(report), key=lambda e: list(e.absolute_path))
    if errors:
        first = errors[0]
        path = '/'.join(str(x) for x in first.absolute_path) or '<root>'
        raise SchemaValidationError(f"report does not match schema: {first.message}", path=path)
    return report


def envelope(command: str, result: Dict[str, Any], p: Optional[int] = None,
             seconds: Optional[float] = None) -> Dict[str, Any]:
    report: Dict[str, Any] = {'schema_version': SCHEMA_VERSION, 'command': command, 'result': result}
    if p is not None:
        report['p'] = p
    if seconds is not None:
        report['timing'] = {'seconds': round(seconds, 6)}
    return validate_report(report)


# ============================================================================
# Per-command results
# ============================================================================

def invariant_result(presentation: str, method: str, euler_char: int, homology: HomologySummary,
                     z_homology: Optional[int], skein: Optional[InvariantResult]) -> Dict[str, Any]:
    z_skein = skein.z_q if skein is not None else None
    agree = None
    if z_homology is not None and z_skein is not None:
        agree = z_homology == z_skein
    return {
        'presentation': presentation,
        'method': method,
        'euler_char': euler_char,
        'homology': homology.to_dict(),
        'z_q': {'homology': z_homology, 'skein': z_skein},
        'agree': agree,
        'skein': skein.to_dict() if skein is not None else None,
    }


def link_info_result(L: FramedLink) -> Dict[str, Any]:
    M = linking_matrix(L)
    plus, minus, zero = signature_counts(M)
    return {
        'strands': L.braid.strands,
        'components': L.component_count,
        'dotted': list(L.dotted),
        'framings': [L.total_framing(i) for i in range(L.component_count)],
        'linking_matrix': M,
        'signature': {'plus': plus, 'minus': minus, 'zero': zero},
    }


def rtw_result(value: RTWValue, root_note: Optional[str]) -> Dict[str, Any]:
    result = {**value.to_json(), 'text': value.format()}
    if root_note:
        result['root_convention'] = root_note
    return result


# ============================================================================
# Text rendering
# ============================================================================

def render_invariant(p: int, result: Dict[str, Any]) -> List[str]:
    h = result['homology']
    lines = [
        f"presentation: {result['presentation']}",
        f"p: {p}",
        f"method: {result['method']}",
        f"euler characteristic: {result['euler_char']}",
        f"homology: b1={h['b1']} b2={h['b2']} torsion={h['torsion']}",
    ]
    for route in ('homology', 'skein'):
        value = result['z_q'][route]
        if value is not None:
            lines.append(f"Z_Q ({route}): {value}")
    if result['skein'] is not None:
        lines.append(f"Ohtsuki coefficients of Zhat: {result['skein']['ohtsuki']}")
    if result['agree'] is not None:
        lines.append(f"methods agree: {'yes' if result['agree'] else 'NO'}")
    return lines


def render_verify(report: VerifyReport) -> List[str]:
    lines = [c.line() for c in report.checks]
    lines.append(f"{len(report.checks) - len(report.failures)} passed, {len(report.failures)} failed")
    return lines


def render_fuzz(report: FuzzReport) -> List[str]:
    data = report.to_dict()
    lines = [
        f"p: {report.p}",
        f"method: {data['method']}",
        f"seed: {report.seed}",
        f"cases: {data['cases']} x {report.moves} moves",
        f"skipped cases: {data['skipped_cases']}, skipped steps: {data['skipped_steps']}",
        f"discrepancies: {data['discrepancies']}",
    ]
    for case in report.discrepancies:
        lines.append(f"  case {case.index} (replay seed {case.seed}): {case.start}: {case.detail}")
    return lines


def render_link_info(result: Dict[str, Any]) -> List[str]:
    s = result['signature']
    lines = [
        f"strands: {result['strands']}",
        f"components: {result['components']}",
        f"dotted: {[i for i, d in enumerate(result['dotted']) if d]}",
        f"framings: {result['framings']}",
        "linking matrix:",
    ]
    lines.extend(f"  {row}" for row in result['linking_matrix'])
    lines.append(f"signature: +{s['plus']} -{s['minus']} 0x{s['zero']}")
    return lines
