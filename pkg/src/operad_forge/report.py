"""Pass/fail reports with witnesses, shared by every check."""

from __future__ import annotations

from dataclasses import dataclass, field


def format_vec(names, v) -> str:
    """Sparse vector as '2*e - f' in basis order."""
    out = []
    for k in sorted(v):
        c = v[k]
        if not c:
            continue
        a = -c if c < 0 else c
        out.append(("-" if c < 0 else "+", names[k] if a == 1 else f"{a}*{names[k]}"))
    if not out:
        return "0"
    head = ("-" if out[0][0] == "-" else "") + out[0][1]
    return " ".join([head] + [f"{s} {t}" for s, t in out[1:]])


@dataclass
class CheckReport:
    name: str
    results: dict = field(default_factory=dict)
    witnesses: dict = field(default_factory=dict)
    details: dict = field(default_factory=dict)
    max_witnesses: int = 5

    def record(self, key: str, ok: bool):
        self.results[key] = bool(ok) and self.results.get(key, True)

    def witness(self, key: str, item):
        lst = self.witnesses.setdefault(key, [])
        if len(lst) < self.max_witnesses:
            lst.append(item)

    @property
    def passed(self) -> bool:
        return all(self.results.values())

    def __bool__(self):
        return self.passed

    def __getitem__(self, key):
        return self.results[key]

    def lines(self) -> list[str]:
        out = []
        for k in sorted(self.results):
            v = self.results[k]
            out.append(f"{self.name}: {k}: {'pass' if v else 'fail'}")
            for w in self.witnesses.get(k, []):
                out.append(f"  witness {w!r}")
        return out

    def __str__(self):
        return "\n".join(self.lines())
