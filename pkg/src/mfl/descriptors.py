"""Text descriptors naming representations.

::

    desc := "std:" n | "cyc:" n ":" c ":" phase | "free:inf" | "zero:" (n | "inf")
          | "sum(" desc {"," desc} ")"
          | "F[" a "," b "](" desc ")" | "Finf[" n "](" desc ")" | "Fext[" n "](" desc ")"
    phase := "1" | "-1" | "i" | "-i" | "exp:" turns

Every representation's ``descriptor`` property prints back in this grammar.
"""

from __future__ import annotations

import re

from .errors import DescriptorError, MFLError
from .functor import FunctorSpec, functor_apply
from .repcore import (
    INF,
    MonomialRep,
    direct_sum,
    make_cycle_rep,
    make_free_infinity_rep,
    make_standard_rep,
    make_zero_rep,
    parse_arity,
    parse_phase,
)

_ATOM = re.compile(r"(std|cyc|free|zero):([^,()\[\]\s]+)")
_FUNCTOR = re.compile(r"(F|Finf|Fext)\[([^\]]*)\]\(")


class _DescParser:
    def __init__(self, text: str):
        self.text = text
        self.pos = 0

    def error(self, msg: str):
        raise DescriptorError(f"{msg} at position {self.pos} in {self.text!r}")

    def skip_ws(self):
        while self.pos < len(self.text) and self.text[self.pos].isspace():
            self.pos += 1

    def parse(self) -> MonomialRep:
        rep = self.desc()
        self.skip_ws()
        if self.pos != len(self.text):
            self.error("trailing input")
        return rep

    def desc(self) -> MonomialRep:
        self.skip_ws()
        t = self.text
        if t.startswith("sum(", self.pos):
            self.pos += 4
            parts = [self.desc()]
            self.skip_ws()
            while self.pos < len(t) and t[self.pos] == ",":
                self.pos += 1
                parts.append(self.desc())
                self.skip_ws()
            self._close()
            try:
                return direct_sum(parts)
            except MFLError as exc:
                raise DescriptorError(str(exc)) from exc
        m = _FUNCTOR.match(t, self.pos)
        if m:
            self.pos = m.end()
            inner = self.desc()
            self._close()
            return self._functor(m.group(1), m.group(2), inner)
        m = _ATOM.match(t, self.pos)
        if m:
            self.pos = m.end()
            return self._atom(m.group(1), m.group(2))
        self.error("expected a representation descriptor")

    def _close(self):
        self.skip_ws()
        if self.pos >= len(self.text) or self.text[self.pos] != ")":
            self.error("expected ')'")
        self.pos += 1

    def _atom(self, kind: str, body: str) -> MonomialRep:
        try:
            if kind == "std":
                return make_standard_rep(parse_arity(body))
            if kind == "free":
                if body != "inf":
                    raise DescriptorError(f"free representations exist only for O_inf, got {body!r}")
                return make_free_infinity_rep()
            if kind == "zero":
                return make_zero_rep(parse_arity(body))
            fields = body.split(":", 2)
            if len(fields) != 3:
                raise DescriptorError(f"cyc needs n:c:phase, got {body!r}")
            return make_cycle_rep(parse_arity(fields[0]), int(fields[1]), parse_phase(fields[2]))
        except DescriptorError:
            raise
        except (MFLError, ValueError) as exc:
            raise DescriptorError(f"bad descriptor {kind}:{body}: {exc}") from exc

    def _functor(self, kind: str, args: str, inner: MonomialRep) -> MonomialRep:
        try:
            parts = [a.strip() for a in args.split(",")]
            if kind == "F":
                if len(parts) != 2:
                    raise DescriptorError(f"F[n,m] needs two arities, got {args!r}")
                spec = FunctorSpec(parse_arity(parts[0]), parse_arity(parts[1]))
            elif len(parts) != 1:
                raise DescriptorError(f"{kind}[n] needs one arity, got {args!r}")
            elif kind == "Finf":
                spec = FunctorSpec(INF, parse_arity(parts[0]))
            else:
                spec = FunctorSpec(parse_arity(parts[0]), INF)
            return functor_apply(spec, inner)
        except DescriptorError:
            raise
        except (MFLError, ValueError) as exc:
            raise DescriptorError(f"bad functor descriptor {kind}[{args}]: {exc}") from exc


def parse_descriptor(text: str) -> MonomialRep:
    return _DescParser(text).parse()


CATALOG_HELP = """\
Representation descriptors:
  std:n               O_n on l2(N), s_i e_x = e_(n x + i - 1)
  cyc:n:c:phase       O_n on words not ending in c, s_c Ω = phase·Ω
  free:inf            O_inf on all finite words, t_j prepends j
  zero:n | zero:inf   the zero representation
  sum(d1,d2,...)      finite direct sum
  F[n,m](d)           F_{n,m} applied to an O_m representation
  Finf[n](d)          restriction of an O_n representation to O_inf
  Fext[n](d)          unmagnifying extension of an O_inf representation to O_n
Phases: 1, -1, i, -i, exp:<turns> (exp:0.25 = i)
"""
