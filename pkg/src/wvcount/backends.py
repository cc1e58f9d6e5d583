"""Base solvers behind a uniform interface.

The internal backend answers every query by brute force within its caps.
The external backend shells out to a solver process: the program is
written to a temporary file in the native text format (a pluggable
emitter can translate to other dialects), the command template runs with
``{file}`` substituted, and only the declared output channel is parsed;
process exit codes are never read as results.
"""

from __future__ import annotations

import os
import shlex
import signal
import subprocess
import tempfile
from dataclasses import dataclass, field

from .errors import BackendError, BackendTimeout
from .model import EMPTY_WVI, Literal, Objective, Program, Rule, WVI
from .parser import program_to_text
from .semantics import (
    answer_sets,
    check_compatibility,
    count_world_views_bruteforce,
    with_wvi_constraints,
)


class InternalBackend:
    """Brute-force solver over the in-process semantics, capped."""

    def __init__(self, answer_cap: int = 24, wv_cap: int = 12):
        self.answer_cap = answer_cap
        self.wv_cap = wv_cap

    def as_exists(self, program: Program) -> bool:
        return bool(answer_sets(program, self.answer_cap))

    def as_forbid_all(self, program: Program, wvi: WVI) -> bool:
        """True iff every answer set satisfies every decided literal."""
        for m in answer_sets(program, self.answer_cap):
            if wvi.true & ~m or wvi.false & m:
                return False
        return True

    def wv_exists(self, program: Program, wvi: WVI) -> bool:
        if program.is_plain:
            # A plain program has at most one world view; the WVI extends
            # to it exactly when compatibility holds over its domain.
            return check_compatibility(wvi, answer_sets(program, self.answer_cap))
        adjoined = with_wvi_constraints(program, wvi)
        return (
            count_world_views_bruteforce(
                adjoined, EMPTY_WVI, self.wv_cap, self.answer_cap
            )
            > 0
        )

    def count_wv(self, program: Program, wvi: WVI = EMPTY_WVI) -> int:
        if program.is_plain:
            return 1 if self.wv_exists(program, wvi) else 0
        adjoined = with_wvi_constraints(program, wvi)
        return count_world_views_bruteforce(
            adjoined, EMPTY_WVI, self.wv_cap, self.answer_cap
        )

    # spec-facing entry points
    def solve_asp(self, program: Program, mode: str, wvi: WVI = EMPTY_WVI) -> bool:
        if mode == "exists":
            return self.as_exists(program)
        if mode == "forbid_all":
            return self.as_forbid_all(program, wvi)
        raise ValueError("unknown ASP mode %r" % mode)

    def solve_elp(self, program: Program, mode: str, wvi: WVI = EMPTY_WVI):
        if mode == "wv_exists":
            return self.wv_exists(program, wvi)
        if mode == "count_wv":
            return self.count_wv(program, wvi)
        raise ValueError("unknown ELP mode %r" % mode)


@dataclass
class BackendConfig:
    """External solver configuration.

    ``command`` is a whitespace-split template containing exactly one
    ``{file}`` placeholder; ``parse`` selects the output contract: a
    single decimal line (``count``) or the presence of a marker line
    (``sat``).
    """

    command: str
    parse: str = "count"
    timeout: float = 60.0
    sat_marker: str = "SAT"
    emitter: object = field(default=program_to_text)

    def __post_init__(self):
        if self.command.count("{file}") != 1:
            raise ValueError("command template needs exactly one {file}")
        if self.parse not in ("count", "sat"):
            raise ValueError("parse mode must be 'count' or 'sat'")


class ExternalBackend:
    """Subprocess adapter for one external solver role."""

    def __init__(self, config: BackendConfig):
        self.config = config

    def _run(self, program: Program) -> str:
        with tempfile.NamedTemporaryFile(
            "w", suffix=".elp", delete=False
        ) as handle:
            handle.write(self.config.emitter(program))
            path = handle.name
        argv = [
            part.replace("{file}", path)
            for part in shlex.split(self.config.command)
        ]
        try:
            proc = subprocess.Popen(
                argv,
                stdout=subprocess.PIPE,
                stderr=subprocess.PIPE,
                text=True,
                start_new_session=True,
            )
        except OSError as exc:
            os.unlink(path)
            raise BackendError("cannot start external solver: %s" % exc) from exc
        try:
            stdout, _stderr = proc.communicate(timeout=self.config.timeout)
        except subprocess.TimeoutExpired:
            try:
                os.killpg(proc.pid, signal.SIGKILL)
            except OSError:
                pass
            proc.wait()
            raise BackendTimeout(
                "external solver exceeded %.1fs" % self.config.timeout
            ) from None
        finally:
            os.unlink(path)
        return stdout

    def count_wv(self, program: Program, wvi: WVI = EMPTY_WVI) -> int:
        if self.config.parse != "count":
            raise BackendError("external backend is not configured for counting")
        if wvi.domain:
            program = with_wvi_constraints(program, wvi)
        out = self._run(program)
        lines = [l.strip() for l in out.splitlines() if l.strip()]
        if len(lines) != 1 or not lines[0].isdigit():
            raise BackendError(
                "expected a single decimal count on stdout, got %r" % out
            )
        return int(lines[0])

    def _sat(self, program: Program) -> bool:
        if self.config.parse != "sat":
            raise BackendError("external backend is not configured for sat checks")
        out = self._run(program)
        return any(l.strip() == self.config.sat_marker for l in out.splitlines())

    def wv_exists(self, program: Program, wvi: WVI = EMPTY_WVI) -> bool:
        if wvi.domain:
            program = with_wvi_constraints(program, wvi)
        return self._sat(program)

    def as_exists(self, program: Program) -> bool:
        return self._sat(program)

    def as_forbid_all(self, program: Program, wvi: WVI) -> bool:
        # One existence probe per literal: a violating answer set for "a"
        # is one without a, kept alive by the constraint ":- a".
        for lit in wvi.decided_literals():
            probe = program.extended(
                (Rule((), (Objective(Literal(lit.atom, lit.positive)),)),)
            )
            if self._sat(probe):
                return False
        return True

    def solve_asp(self, program: Program, mode: str, wvi: WVI = EMPTY_WVI) -> bool:
        if mode == "exists":
            return self.as_exists(program)
        if mode == "forbid_all":
            return self.as_forbid_all(program, wvi)
        raise ValueError("unknown ASP mode %r" % mode)

    def solve_elp(self, program: Program, mode: str, wvi: WVI = EMPTY_WVI):
        if mode == "wv_exists":
            return self.wv_exists(program, wvi)
        if mode == "count_wv":
            return self.count_wv(program, wvi)
        raise ValueError("unknown ELP mode %r" % mode)


class StackedBackend:
    """External backend for the operations its parse mode supports, with
    the internal backend covering the rest."""

    def __init__(self, external: ExternalBackend, internal: InternalBackend):
        self.external = external
        self.internal = internal
        counting = external.config.parse == "count"
        self.count_wv = external.count_wv if counting else internal.count_wv
        self.wv_exists = internal.wv_exists if counting else external.wv_exists
        self.as_exists = internal.as_exists if counting else external.as_exists
        self.as_forbid_all = (
            internal.as_forbid_all if counting else external.as_forbid_all
        )
