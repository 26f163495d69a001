"""Bindings from built-in scenarios to the mathematical results they exercise.

Each scenario carries a ``binding`` object::

    "binding": {
      "result": "short name of the result",
      "statement": "what is claimed, in our own words",
      "expected_verdict": "...",
      "hypotheses": [
        {"name": "normalization", "check": "<check id>"},
        {"name": "non-vanishing", "assumed": "why it cannot be sampled"}
      ]
    }

Every hypothesis is tied either to a check of the same scenario or to an
explicit ``assumed`` note, so that sample-scale evidence is never presented
as more than it is.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Dict, List, Optional

from .runner import OPS, builtin_names, load_scenario

REQUIRED_HYPOTHESES = ("normalization", "contractivity", "non-vanishing")


@dataclass
class AuditReport:
    bindings: int = 0
    missing: List[str] = field(default_factory=list)
    errors: List[str] = field(default_factory=list)
    unchecked: List[str] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.missing and not self.errors

    def to_dict(self) -> dict:
        return {"bindings": self.bindings, "missing": self.missing, "errors": self.errors,
                "unchecked": self.unchecked, "ok": self.ok}


def builtin_documents() -> Dict[str, dict]:
    """Raw scenario documents of the built-ins, keyed by name."""
    out = {}
    for name in builtin_names():
        scn = load_scenario(name)
        out[name] = {"name": scn.name, "checks": list(scn.checks), "binding": scn.binding}
    return out


def audit_bindings(documents: Optional[Dict[str, dict]] = None) -> AuditReport:
    """Check that every scenario has a complete binding whose checks exist."""
    docs = builtin_documents() if documents is None else documents
    rep = AuditReport()
    for name, doc in docs.items():
        b = doc.get("binding")
        if not b:
            rep.missing.append(name)
            continue
        rep.bindings += 1
        checks = {c.get("id"): c for c in doc.get("checks", [])}
        for key in ("result", "statement", "expected_verdict"):
            if not b.get(key):
                rep.errors.append(f"{name}: binding lacks {key!r}")
        seen = set()
        for h in b.get("hypotheses", []):
            hname = h.get("name", "?")
            seen.add(hname)
            if "check" in h:
                c = checks.get(h["check"])
                if c is None:
                    rep.errors.append(f"{name}: hypothesis {hname!r} points at missing check {h['check']!r}")
                elif c.get("op") not in OPS:
                    rep.errors.append(f"{name}: check {h['check']!r} uses unknown op {c.get('op')!r}")
            elif h.get("assumed"):
                rep.unchecked.append(f"{name}: {hname} (assumed: {h['assumed']})")
            else:
                rep.errors.append(f"{name}: hypothesis {hname!r} has neither a check nor an assumption")
        for req in REQUIRED_HYPOTHESES:
            if req not in seen:
                rep.errors.append(f"{name}: hypothesis {req!r} is not addressed")
    return rep


def render_markdown(documents: Optional[Dict[str, dict]] = None) -> str:
    """Markdown table of scenario, result, expected verdict and hypothesis coverage."""
    docs = builtin_documents() if documents is None else documents
    lines = ["| scenario | result | expected verdict | hypotheses |",
             "|---|---|---|---|"]
    for name, doc in docs.items():
        b = doc.get("binding") or {}
        hyp = []
        for h in b.get("hypotheses", []):
            how = f"`{h['check']}`" if "check" in h else "assumed"
            hyp.append(f"{h.get('name', '?')}: {how}")
        lines.append(f"| `{name}` | {b.get('result', '(missing)')} | "
                     f"{b.get('expected_verdict', '')} | {'; '.join(hyp)} |")
    return "\n".join(lines) + "\n"
