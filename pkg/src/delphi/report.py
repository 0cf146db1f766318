"""Structured run reports for the solving loops.

Events are (kind, data) records; the text rendering is one event per
line, `kind key=value ...`, designed to be greppable. Engine tests read
the structured events, the CLI writes the text form.
"""

from __future__ import annotations

from dataclasses import dataclass, field


@dataclass
class Event:
    kind: str
    data: dict


@dataclass
class RunReport:
    events: list = field(default_factory=list)

    def record(self, kind: str, **data):
        self.events.append(Event(kind, data))

    def of_kind(self, kind: str):
        return [e for e in self.events if e.kind == kind]

    def warn(self, message: str):
        self.record("warning", message=message)

    def text(self) -> str:
        lines = []
        for e in self.events:
            parts = [e.kind]
            for k, v in e.data.items():
                if isinstance(v, (list, tuple)):
                    v = "[" + ", ".join(str(x) for x in v) + "]"
                parts.append(f"{k}={v}")
            lines.append(" ".join(parts))
        return "\n".join(lines) + ("\n" if lines else "")
