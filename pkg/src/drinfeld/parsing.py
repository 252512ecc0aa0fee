"""Text forms for polynomials, field elements and models.

Grammar (whitespace-insensitive):

    expr   := term (('+'|'-') term)*
    term   := factor ('*' factor)*
    factor := '-' factor | atom ('^' uint)?
    atom   := uint | name | '(' expr ')'

Names in scope depend on what is being parsed: 't' (and 'z' over extension
fields) for polynomials, plus 'tau' for models.  '**' is accepted for '^'.
Printers emit the canonical form these parsers round-trip: descending powers,
'*' between coefficient and power, parentheses exactly around multi-term
coefficients, e.g. '(z+1)*t^2 + z' or 't + (t^2+1)*tau + 2*tau^2'.
"""

import re

from .poly import Poly, Place, is_irreducible
from .ore import OrePoly, DrinfeldModel


class ParseError(ValueError):
    pass


_TOKEN_RE = re.compile(r"\s*(?:(\d+)|([A-Za-z_][A-Za-z_0-9]*)|(\*\*|[()+\-*^]))")


def _tokenize(s):
    out = []
    pos = 0
    while pos < len(s):
        m = _TOKEN_RE.match(s, pos)
        if not m or m.end() == pos:
            rest = s[pos:].strip()
            if not rest:
                break
            raise ParseError("unexpected character %r at position %d" % (rest[0], pos))
        if m.group(1) is not None:
            out.append(("int", int(m.group(1))))
        elif m.group(2) is not None:
            out.append(("name", m.group(2)))
        else:
            op = m.group(3)
            out.append(("op", "^" if op == "**" else op))
        pos = m.end()
    return out


class _Parser:
    def __init__(self, tokens, atoms, from_int):
        self.tokens = tokens
        self.pos = 0
        self.atoms = atoms
        self.from_int = from_int

    def peek(self):
        return self.tokens[self.pos] if self.pos < len(self.tokens) else (None, None)

    def take(self):
        tok = self.peek()
        self.pos += 1
        return tok

    def expect_op(self, op):
        kind, val = self.take()
        if kind != "op" or val != op:
            raise ParseError("expected %r, got %r" % (op, val))

    def parse_expr(self):
        out = self.parse_term()
        while True:
            kind, val = self.peek()
            if kind == "op" and val in "+-":
                self.pos += 1
                rhs = self.parse_term()
                out = out + rhs if val == "+" else out - rhs
            else:
                return out

    def parse_term(self):
        out = self.parse_factor()
        while True:
            kind, val = self.peek()
            if kind == "op" and val == "*":
                self.pos += 1
                out = out * self.parse_factor()
            else:
                return out

    def parse_factor(self):
        kind, val = self.peek()
        if kind == "op" and val == "-":
            self.pos += 1
            return -self.parse_factor()
        atom = self.parse_atom()
        kind, val = self.peek()
        if kind == "op" and val == "^":
            self.pos += 1
            kind, e = self.take()
            if kind != "int":
                raise ParseError("exponent must be a nonnegative integer")
            atom = atom ** e
        return atom

    def parse_atom(self):
        kind, val = self.take()
        if kind == "int":
            return self.from_int(val)
        if kind == "name":
            if val not in self.atoms:
                raise ParseError("unknown symbol %r" % (val,))
            return self.atoms[val]
        if kind == "op" and val == "(":
            out = self.parse_expr()
            self.expect_op(")")
            return out
        raise ParseError("unexpected token %r" % (val,))


def _run_parser(s, atoms, from_int):
    tokens = _tokenize(s)
    if not tokens:
        raise ParseError("empty input")
    p = _Parser(tokens, atoms, from_int)
    out = p.parse_expr()
    if p.pos != len(tokens):
        raise ParseError("trailing input at token %d" % p.pos)
    return out


def parse_poly(s, ctx, var="t"):
    atoms = {var: Poly.gen(ctx)}
    if ctx.k > 1:
        atoms["z"] = Poly.const(ctx, ctx.p)  # encoding of the generator z
    return _run_parser(s, atoms, lambda n: Poly.const(ctx, ctx.from_int(n)))


def parse_element(s, ctx):
    """A single F_q element written as a polynomial in z (or an integer)."""
    if ctx.k == 1:
        f = _run_parser(s, {}, lambda n: Poly.const(ctx, ctx.from_int(n)))
        if f.degree > 0:
            raise ParseError("not a field element: %r" % (s,))
        return f[0]
    from .fields import fq_context
    base = fq_context(ctx.p)
    f = _run_parser(s, {"z": Poly.gen(base)},
                    lambda n: Poly.const(base, base.from_int(n)))
    if f.degree >= ctx.k:
        raise ParseError("element degree %d too large for F_%d" % (f.degree, ctx.q))
    return ctx._undigits([f[i] for i in range(ctx.k)])


def parse_place(s, ctx):
    f = parse_poly(s, ctx)
    if f.is_constant() or f.lc() != 1:
        raise ParseError("a place must be monic of degree >= 1: %r" % (s,))
    if not is_irreducible(f):
        raise ParseError("polynomial is not irreducible: %r" % (s,))
    return Place(f)


def parse_model(s, ctx):
    if s.strip().lower() == "carlitz":
        return DrinfeldModel.carlitz(ctx)
    atoms = {
        "t": OrePoly.const(Poly.gen(ctx)),
        "tau": OrePoly.tau(ctx),
    }
    if ctx.k > 1:
        atoms["z"] = OrePoly.const(Poly.const(ctx, ctx.p))
    f = _run_parser(s, atoms, lambda n: OrePoly.const(Poly.const(ctx, ctx.from_int(n))))
    if f.tau_degree < 1:
        raise ParseError("a model needs at least one tau term")
    if f[0] != Poly.gen(ctx):
        raise ParseError("the tau^0 coefficient of phi_t must be t")
    return DrinfeldModel(ctx, f.coeffs[1:])


# -- printers ---------------------------------------------------------------


def _coeff_str(c_str):
    if any(ch in c_str for ch in "+-*/"):
        return "(%s)" % c_str
    return c_str


def _terms_str(pairs, var):
    """pairs: (power, coefficient string) with nonzero coefficients."""
    terms = []
    for power, cs in pairs:
        if power == 0:
            terms.append(cs)
        else:
            vs = var if power == 1 else "%s^%d" % (var, power)
            terms.append(vs if cs == "1" else "%s*%s" % (_coeff_str(cs), vs))
    return " + ".join(terms) if terms else "0"


def poly_str(f, var="t"):
    ctx = f.ctx
    pairs = [(j, ctx.elem_str(c))
             for j in range(len(f.coeffs) - 1, -1, -1)
             if (c := f.coeffs[j])]
    return _terms_str(pairs, var)


def ore_str(f, var="tau"):
    pairs = [(i, poly_str(c))
             for i in range(len(f.coeffs) - 1, -1, -1)
             if not (c := f.coeffs[i]).is_zero()]
    return _terms_str(pairs, var)


def model_str(model):
    parts = ["t"]
    for i, gi in enumerate(model.g, start=1):
        if gi.is_zero():
            continue
        vs = "tau" if i == 1 else "tau^%d" % i
        gs = poly_str(gi)
        parts.append(vs if gs == "1" else "%s*%s" % (_coeff_str(gs), vs))
    return " + ".join(parts)


def tpoly_str(f, var="T"):
    pairs = []
    for i in range(len(f.coeffs) - 1, -1, -1):
        c = f.coeffs[i]
        if c:
            pairs.append((i, str(c)))
    return _terms_str(pairs, var)
