"""Check reports: named pass/fail entries with witnesses."""
import json


PASS, FAIL, UNDETERMINED = "pass", "fail", "undetermined"


class Check:
    def __init__(self, name, status, witness=None, detail=None):
        self.name = name
        self.status = status
        self.witness = witness
        self.detail = detail

    @property
    def passed(self):
        return self.status == PASS

    def as_dict(self):
        d = {"check": self.name, "status": self.status}
        if self.witness is not None:
            d["witness"] = list(self.witness) if isinstance(self.witness, tuple) else self.witness
        if self.detail is not None:
            d["detail"] = self.detail
        return d

    def __repr__(self):
        return "Check(%s: %s%s)" % (self.name, self.status,
                                    "" if self.witness is None else " at %s" % (self.witness,))


class Report:
    """Ordered list of checks.  ``ok`` is True iff every check passed."""

    def __init__(self, title=""):
        self.title = title
        self.checks = []

    def add(self, name, status, witness=None, detail=None):
        self.checks.append(Check(name, status, witness, detail))
        return self

    def expect(self, name, condition, witness=None, detail=None):
        """Record a boolean check."""
        self.add(name, PASS if condition else FAIL, None if condition else witness, detail)
        return bool(condition)

    def expect_none(self, name, failures):
        """Record a check from an iterator of failing witnesses (first one kept)."""
        w = next(iter(failures), None)
        self.add(name, PASS if w is None else FAIL, w)
        return w is None

    def expect_zero(self, name, residual):
        """Record a check from a flat residual; the witness is the first nonzero position."""
        w = next(((i,) for i, x in enumerate(residual) if x != 0), None)
        self.add(name, PASS if w is None else FAIL, w)
        return w is None

    def undetermined(self, name, detail=None):
        self.add(name, UNDETERMINED, None, detail)

    def extend(self, other, prefix=None):
        for c in other.checks:
            name = c.name if prefix is None else "%s: %s" % (prefix, c.name)
            self.checks.append(Check(name, c.status, c.witness, c.detail))
        return self

    @property
    def ok(self):
        return all(c.status == PASS for c in self.checks)

    @property
    def failures(self):
        return [c for c in self.checks if c.status == FAIL]

    def get(self, name):
        for c in self.checks:
            if c.name == name:
                return c
        raise KeyError(name)

    def status_of(self, name):
        return self.get(name).status

    def __bool__(self):
        return self.ok

    def __repr__(self):
        return "Report(%s, %d checks, %d failed)" % (self.title, len(self.checks),
                                                     len(self.failures))

    def to_text(self, witnesses=False):
        lines = ["# %s" % self.title] if self.title else []
        for c in self.checks:
            line = "%-13s %s" % ("[%s]" % c.status, c.name)
            if witnesses and c.witness is not None:
                line += "  witness=%s" % (list(c.witness) if isinstance(c.witness, tuple)
                                          else c.witness)
            if witnesses and c.detail:
                line += "  (%s)" % c.detail
            lines.append(line)
        return "\n".join(lines)

    def to_structured(self, witnesses=False):
        out = []
        for c in self.checks:
            d = c.as_dict()
            if not witnesses:
                d.pop("witness", None)
                d.pop("detail", None)
            d["report"] = self.title
            out.append(json.dumps(d, sort_keys=True))
        return "\n".join(out)
