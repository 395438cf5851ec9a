"""Text form of operator elements and matrix literals.

Syntax::

    expr   := ['+'|'-'] term (('+'|'-') term)*
    term   := power (('*'|'/') power)*
    power  := atom ['^' ['-'] INT]
    atom   := INT | '(' expr ')' | q[i,j] | p[i,j] | p[i] | e[i,j;a] | E[i]
              | dz | S | t | lam | z

Division is only allowed by z-dependent scalars, and negative exponents
only on invertible atoms (``S``, ``E[i]``, ``lam``, nonzero scalars).
Printing emits terms as ``(coef)*gen*gen^2*dz^3`` and parses back to the
same element.
"""

import re
from fractions import Fraction

from .exact_arith import RatFun

_TOKEN = re.compile(r"\s*(?:(\d+)|([A-Za-z]+)(\[[^\]]*\])?|(\S))")


def _coef_text(c):
    if c.is_const():
        v = c.const_value()
        return str(v) if v.denominator == 1 else f"({v})"
    return f"({c})"


def _factor_texts(pres, w, k, zkind):
    out = []
    for g, e in w:
        t = pres.generators[g].text
        out.append(t if e == 1 else f"{t}^{e}")
    if k:
        name = "dz" if zkind == "diff" else "S"
        out.append(name if k == 1 else f"{name}^{k}")
    return out


def _sort_key(pres, item):
    (w, k), _ = item
    return (pres.word_degree(w) + abs(k), w, k)


def to_text(a):
    """Canonical text of an OperatorElement."""
    if not a.terms:
        return "0"
    pieces = []
    for (w, k), c in sorted(a.terms.items(), key=lambda it: _sort_key(a.pres, it)):
        factors = _factor_texts(a.pres, w, k, a.zkind)
        neg = False
        if c.num.lead() < 0:
            neg, c = True, -c
        if not factors:
            body = _coef_text(c)
        elif c == 1:
            body = "*".join(factors)
        else:
            body = "*".join([_coef_text(c)] + factors)
        pieces.append((neg, body))
    neg, body = pieces[0]
    out = ("-" if neg else "") + body
    for neg, body in pieces[1:]:
        out += (" - " if neg else " + ") + body
    return out


class ParseError(ValueError):
    pass


def _tokenize(text):
    toks = []
    pos = 0
    text = text.strip()
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m or m.end() == pos:
            raise ParseError(f"cannot tokenize at {text[pos:]!r}")
        num, name, idx, sym = m.groups()
        if num is not None:
            toks.append(("num", int(num)))
        elif name is not None:
            toks.append(("name", name + (re.sub(r"\s+", "", idx) if idx else "")))
        else:
            toks.append(("sym", sym))
        pos = m.end()
    return toks


class _Parser:
    def __init__(self, text, pres):
        self.toks = _tokenize(text)
        self.i = 0
        self.pres = pres

    def peek(self):
        return self.toks[self.i] if self.i < len(self.toks) else (None, None)

    def take(self):
        t = self.peek()
        self.i += 1
        return t

    def expect(self, sym):
        t = self.take()
        if t != ("sym", sym):
            raise ParseError(f"expected {sym!r}, got {t[1]!r}")

    def expr(self):
        sign = 1
        if self.peek() in (("sym", "+"), ("sym", "-")):
            sign = -1 if self.take()[1] == "-" else 1
        acc = self.term()
        if sign < 0:
            acc = -acc
        while self.peek() in (("sym", "+"), ("sym", "-")):
            op = self.take()[1]
            rhs = self.term()
            acc = acc + rhs if op == "+" else acc - rhs
        return acc

    def term(self):
        acc = self.power()
        while self.peek() in (("sym", "*"), ("sym", "/")):
            op = self.take()[1]
            rhs = self.power()
            if op == "*":
                acc = acc * rhs
            else:
                if not rhs.is_scalar() or not rhs.terms:
                    raise ParseError(f"division by non-scalar {rhs}")
                acc = acc * self.pres.scalar(rhs.scalar_value().inverse())
        return acc

    def power(self):
        base = self.atom()
        if self.peek() == ("sym", "^"):
            self.take()
            neg = False
            if self.peek() == ("sym", "-"):
                self.take()
                neg = True
            kind, val = self.take()
            if kind != "num":
                raise ParseError("exponent must be an integer")
            if neg:
                if base.is_scalar():
                    if not base.terms:
                        raise ParseError("zero to a negative power")
                    return self.pres.scalar(base.scalar_value() ** (-val))
                try:
                    return base.inverse() ** val
                except ValueError as exc:
                    raise ParseError(str(exc)) from None
            return base ** val
        return base

    def atom(self):
        kind, val = self.take()
        pres = self.pres
        if kind == "num":
            return pres.scalar(Fraction(val))
        if kind == "sym":
            if val == "(":
                e = self.expr()
                self.expect(")")
                return e
            raise ParseError(f"unexpected {val!r}")
        if kind == "name":
            if val == "z":
                return pres.scalar(RatFun.z())
            if val == "dz":
                return pres.dz(1)
            if val == "S":
                return pres.shift(1)
            if val in pres.by_text:
                return pres.gen(val)
            raise ParseError(f"unknown symbol {val!r} for {pres!r}")
        raise ParseError("unexpected end of input")


def parse_element(text, pres, zkind=None):
    """Parse text into an OperatorElement of ``pres``."""
    p = _Parser(text, pres)
    if not p.toks:
        raise ParseError("empty expression")
    e = p.expr()
    if p.i != len(p.toks):
        raise ParseError(f"trailing input at token {p.toks[p.i][1]!r}")
    if zkind is not None and e.zkind != zkind:
        e = e.as_zkind(zkind)
    return e


def format_matrix(M):
    """Matrix literal: one line per row, entries separated by ';'."""
    return "\n".join("; ".join(to_text(x) for x in row) for row in M.entries)


def _split_row(row):
    """Split on ';' outside square brackets (``e[i,j;a]`` keeps its ';')."""
    parts, depth, cur = [], 0, []
    for ch in row:
        if ch == "[":
            depth += 1
        elif ch == "]":
            depth -= 1
        if ch == ";" and depth == 0:
            parts.append("".join(cur))
            cur = []
        else:
            cur.append(ch)
    parts.append("".join(cur))
    return parts


def parse_matrix(text, pres, zkind=None):
    from .manin import OpMatrix

    rows = [ln for ln in (s.strip() for s in text.splitlines()) if ln and not ln.startswith("#")]
    entries = [[parse_element(x, pres) for x in _split_row(row)] for row in rows]
    if not entries or len({len(r) for r in entries}) != 1:
        raise ParseError("matrix rows must be nonempty and of equal length")
    kinds = {e.zkind for r in entries for e in r} - {"none"}
    if len(kinds) > 1:
        raise ParseError("matrix mixes dz and S")
    zk = zkind or (kinds.pop() if kinds else "none")
    return OpMatrix([[e.as_zkind(zk) if e.zkind != zk else e for e in r] for r in entries])
