from __future__ import annotations

import json

MAX_WITNESSES = 5


class Report:
    """Per-axiom pass/fail tally with a few witnesses per failing axiom."""

    def __init__(self, title):
        self.title = title
        self.axioms = {}

    def _slot(self, axiom):
        return self.axioms.setdefault(axiom, {"checked": 0, "violations": 0, "witnesses": []})

    def declare(self, axiom, note=None):
        slot = self._slot(axiom)
        if note is not None:
            slot["note"] = note

    def record(self, axiom, ok, witness=None):
        slot = self._slot(axiom)
        slot["checked"] += 1
        if not ok:
            slot["violations"] += 1
            if len(slot["witnesses"]) < MAX_WITNESSES:
                slot["witnesses"].append(witness)
        return ok

    def violations(self, axiom=None):
        if axiom is not None:
            return self.axioms.get(axiom, {}).get("violations", 0)
        return sum(s["violations"] for s in self.axioms.values())

    def witnesses(self, axiom):
        return list(self.axioms.get(axiom, {}).get("witnesses", []))

    @property
    def passed(self):
        return self.violations() == 0

    def merge(self, other: "Report", prefix=None):
        for name, slot in other.axioms.items():
            key = f"{prefix}/{name}" if prefix else name
            mine = self._slot(key)
            mine["checked"] += slot["checked"]
            mine["violations"] += slot["violations"]
            room = MAX_WITNESSES - len(mine["witnesses"])
            mine["witnesses"].extend(slot["witnesses"][:max(room, 0)])
            if "note" in slot:
                mine["note"] = slot["note"]
        return self

    def to_json(self):
        return {
            "title": self.title,
            "passed": self.passed,
            "axioms": {
                name: {
                    "passed": slot["violations"] == 0,
                    "checked": slot["checked"],
                    "violations": slot["violations"],
                    "witnesses": slot["witnesses"],
                    **({"note": slot["note"]} if "note" in slot else {}),
                }
                for name, slot in sorted(self.axioms.items())
            },
        }

    def summary(self):
        lines = [f"{self.title}: {'PASS' if self.passed else 'FAIL'}"]
        for name, slot in sorted(self.axioms.items()):
            status = "ok" if slot["violations"] == 0 else f"{slot['violations']} violation(s)"
            lines.append(f"  {name:<28} {slot['checked']:>7} checked  {status}")
        return "\n".join(lines)

    def __repr__(self):
        return f"<Report {self.title!r} passed={self.passed}>"


def dumps(obj, compact=False) -> str:
    """Deterministic JSON text."""
    if compact:
        return json.dumps(obj, sort_keys=True, separators=(",", ":"), ensure_ascii=False) + "\n"
    return json.dumps(obj, sort_keys=True, indent=1, ensure_ascii=False) + "\n"
