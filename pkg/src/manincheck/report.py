"""Structured pass/fail results with residuals."""

import time
from contextlib import contextmanager


def _render(x, limit=400):
    s = str(x)
    return s if len(s) <= limit else s[:limit] + f"... [{len(s)} chars]"


class CheckReport:
    """Collects exact checks; passes iff every residual is zero.

    Negative controls go through :meth:`expect_nonzero`: there the check
    passes only when the residual does NOT vanish.
    """

    def __init__(self, name, recorded=False):
        self.name = name
        self.recorded = recorded
        self.residuals = []
        self.checks_run = 0
        self.timing = 0.0
        self.notes = []

    @property
    def passed(self):
        return not self.residuals

    @property
    def status(self):
        return "pass" if self.passed else "fail"

    def check(self, label, residual):
        self.checks_run += 1
        if not residual.is_zero():
            self.residuals.append((label, residual))
        return residual

    def check_true(self, label, ok, detail=""):
        self.checks_run += 1
        if not ok:
            self.residuals.append((label, detail or "condition failed"))
        return ok

    def expect_nonzero(self, label, residual):
        """Negative control: the residual must NOT vanish."""
        self.checks_run += 1
        if residual.is_zero():
            self.residuals.append((label + " [negative control vanished]", "0"))
        return residual

    def note(self, text):
        self.notes.append(text)

    def merge(self, other, prefix=""):
        self.checks_run += other.checks_run
        self.residuals.extend((prefix + lab, r) for lab, r in other.residuals)
        self.notes.extend(prefix + n for n in other.notes)
        return self

    @contextmanager
    def timed(self):
        t0 = time.perf_counter()
        try:
            yield self
        finally:
            self.timing += time.perf_counter() - t0

    def first_failure(self):
        if not self.residuals:
            return None
        lab, r = self.residuals[0]
        return f"{lab}: residual = {_render(r)}"

    def summary(self):
        head = f"{self.name}: {self.status} ({self.checks_run} checks)"
        if self.residuals:
            head += "\n  " + self.first_failure()
        return head

    def __repr__(self):
        return f"CheckReport({self.name!r}, {self.status}, checks={self.checks_run})"
